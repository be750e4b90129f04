#include "neurospike/neuron.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nspike {

NeuronState flow_neuron(const NeuronState& s, double input, double dt) {
    if (!(dt >= 0.0)) {
        throw std::invalid_argument("flow_neuron: negative step " + std::to_string(dt));
    }
    const double drive = relu(input);
    NeuronState next = s;
    if (s.leak == 0.0) {
        next.potential = s.potential + drive * dt;
    } else {
        // ξ(dt) = ξ₀e^{-μdt} + (u/μ)(1 - e^{-μdt})
        const double decay = -std::expm1(-s.leak * dt);
        next.potential = s.potential - s.potential * decay + (drive / s.leak) * decay;
    }
    return next;
}

std::optional<double> crossing_time(double start, double input, double leak, double threshold) {
    if (start >= threshold) {
        return 0.0;
    }
    const double drive = relu(input);
    if (drive == 0.0) {
        return std::nullopt;
    }
    if (leak == 0.0) {
        return (threshold - start) / drive;
    }
    const double equilibrium = drive / leak;
    if (equilibrium <= threshold) {
        return std::nullopt;
    }
    return std::log1p((threshold - start) / (equilibrium - threshold)) / leak;
}

double ramp_drive(double u0, double slope, double tau) {
    if (slope == 0.0) {
        return relu(u0) * tau;
    }
    if (u0 >= 0.0 && slope > 0.0) {
        return tau * (u0 + 0.5 * slope * tau);
    }
    const double root = -u0 / slope;
    if (u0 > 0.0) {  // falling through zero at `root`
        const double s = std::min(tau, root);
        return s * (u0 + 0.5 * slope * s);
    }
    if (slope > 0.0) {  // rising from below zero
        const double s = tau - root;
        return s > 0.0 ? 0.5 * slope * s * s : 0.0;
    }
    return 0.0;
}

std::optional<double> ramp_crossing_time(double start, double u0, double slope, double threshold) {
    const double need = threshold - start;
    if (need <= 0.0) {
        return 0.0;
    }
    if (u0 >= 0.0) {
        const double disc = u0 * u0 + 2.0 * slope * need;
        if (disc < 0.0 || (u0 == 0.0 && slope <= 0.0)) {
            return std::nullopt;  // falling ramp peaks below threshold
        }
        return 2.0 * need / (u0 + std::sqrt(disc));
    }
    if (slope > 0.0) {
        return -u0 / slope + std::sqrt(2.0 * need / slope);
    }
    return std::nullopt;
}

NeuronState jump_neuron(const NeuronState& s) {
    if (s.potential < s.threshold) {
        throw std::domain_error("jump_neuron: potential " + std::to_string(s.potential) +
                                " below threshold " + std::to_string(s.threshold));
    }
    NeuronState next = s;
    next.potential = 0.0;
    return next;
}

double amp_gain(double amplitude, double threshold) {
    if (!(amplitude > 0.0) || !(threshold > 0.0) || !std::isfinite(amplitude) || !std::isfinite(threshold)) {
        throw std::invalid_argument("amp_gain: amplitude and threshold must be positive");
    }
    return amplitude / threshold;
}

double integrated_output(std::span<const SpikeEvent> spikes, double amplitude, double t) {
    long long net = 0;
    for (const SpikeEvent& e : spikes) {
        if (e.time > t) {
            break;
        }
        net += e.sign;
    }
    return amplitude * static_cast<double>(net);
}

NmAmp::NmAmp(double amplitude, double threshold, double leak, double positive_start, double negative_start)
    : positive_{positive_start, threshold, leak}, negative_{negative_start, threshold, leak}, amplitude_(amplitude) {
    amp_gain(amplitude, threshold);
    if (leak < 0.0) {
        throw std::invalid_argument("NmAmp: leak must be nonnegative");
    }
    for (double start : {positive_start, negative_start}) {
        if (!(start >= 0.0 && start < threshold)) {
            throw std::invalid_argument("NmAmp: initial potential outside [0, threshold)");
        }
    }
}

void NmAmp::drive(double input, double t0, double duration, std::vector<SpikeEvent>& out) {
    // Only one neuron is driven by a held input; the other just leaks.
    NeuronState& active = input >= 0.0 ? positive_ : negative_;
    NeuronState& idle = input >= 0.0 ? negative_ : positive_;
    const double signed_input = std::abs(input);
    const int sign = input >= 0.0 ? 1 : -1;

    idle = flow_neuron(idle, 0.0, duration);

    double elapsed = 0.0;
    while (true) {
        const double remaining = duration - elapsed;
        auto tau = crossing_time(active.potential, signed_input, active.leak, active.threshold);
        if (!tau || *tau > remaining) {
            active = flow_neuron(active, signed_input, remaining);
            return;
        }
        elapsed += *tau;
        active.potential = active.threshold;
        active = jump_neuron(active);
        out.push_back({t0 + elapsed, 0, 0, sign});
    }
}

}  // namespace nspike
