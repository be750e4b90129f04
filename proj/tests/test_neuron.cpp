#include "neurospike/neuron.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace nspike;
using Catch::Approx;

TEST_CASE("flow_neuron integrates the rectified input", "[neuron]") {
    CHECK(flow_neuron({0.0, 0.01, 0.0}, 1.0, 0.004).potential == Approx(0.004).margin(1e-15));
    const NeuronState over = flow_neuron({0.009, 0.01, 0.0}, 1.0, 0.002);
    CHECK(over.potential == Approx(0.011).margin(1e-15));
    CHECK(over.potential >= over.threshold);
    CHECK(flow_neuron({0.005, 0.01, 0.0}, -3.0, 1.0).potential == 0.005);
    CHECK(flow_neuron({0.005, 0.01, 0.0}, 0.0, 1.0).potential == 0.005);
    CHECK_THROWS_AS(flow_neuron({0.0, 0.01, 0.0}, 1.0, -1e-3), std::invalid_argument);
}

TEST_CASE("leaky flow matches the exponential closed form", "[neuron]") {
    const double mu = 2.0, u = 3.0, dt = 0.3, xi0 = 0.2;
    const double expected = xi0 * std::exp(-mu * dt) + u / mu * (1.0 - std::exp(-mu * dt));
    CHECK(flow_neuron({xi0, 10.0, mu}, u, dt).potential == Approx(expected).epsilon(1e-14));
    // Composition over two half steps equals one full step.
    const NeuronState half = flow_neuron(flow_neuron({xi0, 10.0, mu}, u, dt / 2), u, dt / 2);
    CHECK(half.potential == Approx(expected).epsilon(1e-14));
}

TEST_CASE("crossing_time examples", "[neuron]") {
    CHECK(*crossing_time(0.0, 1.0, 0.0, 0.01) == Approx(0.01).epsilon(1e-15));
    CHECK_FALSE(crossing_time(0.0, 0.0, 0.0, 0.01));
    CHECK_FALSE(crossing_time(0.0, -2.0, 0.0, 0.01));
    CHECK(*crossing_time(0.005, 2.0, 0.0, 0.01) == Approx(0.0025).epsilon(1e-14));
    CHECK(*crossing_time(0.01, 2.0, 0.0, 0.01) == 0.0);
    // Leaky: equilibrium u/μ below threshold never fires.
    CHECK_FALSE(crossing_time(0.0, 1.0, 2.0, 0.6));
    const auto tau = crossing_time(0.1, 3.0, 2.0, 1.0);
    REQUIRE(tau);
    CHECK(flow_neuron({0.1, 1.0, 2.0}, 3.0, *tau).potential == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("ramp drive and crossing agree with direct quadrature", "[neuron]") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const double u0 = u(rng), v = 20.0 * u(rng), tau = 0.5 * std::abs(u(rng));
        // Midpoint rule on the rectified ramp, fine enough for 1e-6.
        const int m = 20000;
        double sum = 0.0;
        for (int j = 0; j < m; ++j) sum += relu(u0 + v * (j + 0.5) * tau / m);
        CHECK(ramp_drive(u0, v, tau) == Approx(sum * tau / m).margin(1e-6));

        const double start = 0.01 * std::abs(u(rng));
        const auto hit = ramp_crossing_time(start, u0, v, 0.05);
        if (hit) {
            CHECK(start + ramp_drive(u0, v, *hit) == Approx(0.05).margin(1e-12));
            // Nothing earlier reaches the threshold.
            CHECK(start + ramp_drive(u0, v, *hit * (1 - 1e-9)) <= 0.05);
        } else {
            CHECK(start + ramp_drive(u0, v, 1e3) < 0.05);
        }
    }
}

TEST_CASE("jump_neuron resets at or above threshold only", "[neuron]") {
    CHECK(jump_neuron({0.01, 0.01, 0.0}).potential == 0.0);
    const NeuronState over = jump_neuron({0.013, 0.01, 0.2});
    CHECK(over.potential == 0.0);
    CHECK(over.threshold == 0.01);
    CHECK(over.leak == 0.2);
    CHECK_THROWS_AS(jump_neuron({0.005, 0.01, 0.0}), std::domain_error);
}

TEST_CASE("amp_gain", "[neuron]") {
    CHECK(amp_gain(0.15, 0.01) == Approx(15.0).epsilon(1e-14));
    CHECK(amp_gain(0.075, 0.003) == Approx(25.0).epsilon(1e-14));
    CHECK(amp_gain(1.0, 1.0) == 1.0);
    CHECK_THROWS_AS(amp_gain(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(amp_gain(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("integrated_output counts signed spikes", "[neuron]") {
    const std::vector<SpikeEvent> three = {{0.1, 0, 0, 1}, {0.2, 0, 0, 1}, {0.3, 0, 0, 1}, {0.9, 0, 0, 1}};
    CHECK(integrated_output(three, 0.15, 0.5) == Approx(0.45).epsilon(1e-14));
    const std::vector<SpikeEvent> mixed = {{0.1, 0, 0, 1}, {0.2, 0, 0, -1}, {0.3, 0, 0, 1}, {0.4, 0, 0, -1}};
    CHECK(integrated_output(mixed, 0.15, 1.0) == 0.0);

    NmAmp amp(0.15, 0.01);
    std::vector<SpikeEvent> out;
    amp.drive(1.0, 0.0, 0.095, out);
    CHECK(out.size() == 9);
    CHECK(integrated_output(out, 0.15, 0.095) == Approx(1.35).epsilon(1e-14));
}

TEST_CASE("constant input fires with period delta/c", "[neuron][property]") {
    for (double c : {0.5, 1.0, 3.07, 17.0}) {
        NmAmp amp(0.15, 0.01);
        std::vector<SpikeEvent> out;
        // Stop short of 1 so no spike lands exactly on the boundary.
        amp.drive(c, 0.0, 0.999, out);
        REQUIRE(out.size() == static_cast<std::size_t>(std::floor(c * 0.999 / 0.01)));
        for (std::size_t j = 0; j < out.size(); ++j) {
            CHECK(out[j].time == Approx(oracle::ramp_spike_time(c, 0.0, 0.01, static_cast<int>(j + 1))).epsilon(1e-12));
            CHECK(out[j].sign == 1);
        }
        // Sign exclusivity: the negative neuron never moved.
        CHECK(amp.negative().potential == 0.0);
    }
}

TEST_CASE("amplification error stays within 2 alpha", "[neuron][property]") {
    // Random piecewise-constant inputs and random initial potentials; the
    // error is tracked at every segment end and just before every spike.
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const double alpha = 0.01 + unit(rng);
        const double delta = 0.001 + 0.1 * unit(rng);
        const double gain = alpha / delta;
        NmAmp amp(alpha, delta, 0.0, delta * unit(rng) * 0.999, delta * unit(rng) * 0.999);
        std::vector<SpikeEvent> spikes;
        double t = 0.0, input_integral = 0.0;
        const double scale = 10.0 * unit(rng);
        for (int seg = 0; seg < 200; ++seg) {
            const double u = scale * (2.0 * unit(rng) - 1.0);
            const double len = 0.05 * unit(rng);
            const std::size_t before = spikes.size();
            amp.drive(u, t, len, spikes);
            for (std::size_t j = before; j < spikes.size(); ++j) {
                // Just before and just after each spike.
                const double pre = input_integral + u * (spikes[j].time - t);
                const double out_before = integrated_output(std::span(spikes).first(j), alpha, spikes[j].time);
                const double out_after = out_before + spikes[j].sign * alpha;
                const double err = std::max(std::abs(out_before - gain * pre), std::abs(out_after - gain * pre));
                worst_ratio = std::max(worst_ratio, err / alpha);
            }
            t += len;
            input_integral += u * len;
            const double err = std::abs(integrated_output(spikes, alpha, t) - gain * input_integral);
            worst_ratio = std::max(worst_ratio, err / alpha);
        }
    }
    CHECK(worst_ratio <= 2.0 + 1e-9);
}
