#include "neurospike/simulator.hpp"

#include "neurospike/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nspike {

namespace {

// Classical fourth-order step on a flat state; deriv(t, y, dy).
template <class Deriv>
void rk4_step(std::span<double> y, double t, double h, Deriv&& deriv) {
    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    deriv(t, std::span<const double>(y.data(), n), std::span<double>(k1));
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    deriv(t + 0.5 * h, std::span<const double>(tmp), std::span<double>(k2));
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    deriv(t + 0.5 * h, std::span<const double>(tmp), std::span<double>(k3));
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    deriv(t + h, std::span<const double>(tmp), std::span<double>(k4));
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

void check_finite(std::span<const double> x, double t) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) {
            std::ostringstream msg;
            msg << "state component " << i << " diverged at t=" << t;
            throw DivergenceError(msg.str());
        }
    }
}

void update_peak(std::vector<double>& peak, std::span<const double> x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        peak[i] = std::max(peak[i], std::abs(x[i]));
    }
}

double step_time(const Scenario& s, long long step) {
    return std::min(static_cast<double>(step) * s.dt, s.t_end);
}

// Shared sampling loop: `advance(state_span, t0, t1, step)` moves the state
// over one base step.
template <class Advance>
Trace sampled_run(const Scenario& s, std::vector<double> y, int n_agents, int dim, Advance&& advance) {
    Trace trace;
    trace.n_agents = n_agents;
    trace.state_dim = dim;
    trace.scenario_digest = scenario_digest(s);
    trace.peak_abs.assign(y.size(), 0.0);

    const long long steps = step_count(s);
    const int stride = sample_stride(s);
    trace.times.reserve(static_cast<std::size_t>(steps / stride + 2));
    trace.states.reserve(trace.times.capacity() * y.size());

    update_peak(trace.peak_abs, y);
    for (long long m = 0;; ++m) {
        if (m % stride == 0) {
            trace.times.push_back(step_time(s, m));
            trace.states.insert(trace.states.end(), y.begin(), y.end());
        }
        if (m == steps) {
            break;
        }
        const double t0 = step_time(s, m);
        const double t1 = step_time(s, m + 1);
        advance(y, t0, t1, trace);
        check_finite(y, t1);
        update_peak(trace.peak_abs, y);
    }
    return trace;
}

}  // namespace

std::uint64_t trace_digest(const Trace& trace) {
    auto bytes = [](const auto& vec) {
        return std::span<const unsigned char>(reinterpret_cast<const unsigned char*>(vec.data()),
                                              vec.size() * sizeof(vec[0]));
    };
    std::uint64_t h = fnv1a(bytes(trace.times));
    h = fnv1a(bytes(trace.states), h);
    for (const SpikeEvent& e : trace.spikes) {
        const double fields[4] = {e.time, static_cast<double>(e.source), static_cast<double>(e.dimension),
                                  static_cast<double>(e.sign)};
        h = fnv1a({reinterpret_cast<const unsigned char*>(fields), sizeof(fields)}, h);
    }
    return h;
}

HybridEngine::HybridEngine(const Scenario& scenario)
    : sc_(scenario), n_agents_(scenario.n_agents()), dim_(scenario.state_dim()) {
    validate(sc_);
    drift_gain_.resize(n_agents_);
    for (int i = 0; i < n_agents_; ++i) {
        drift_gain_[i] = sc_.k * static_cast<double>(sc_.graph.in_degree(i));
    }
}

SimState HybridEngine::initial_state() const {
    SimState s;
    s.t = 0.0;
    s.x = sc_.initial_states;
    s.potential = sc_.initial_potentials;
    s.spike_count.assign(s.potential.size(), 0);
    return s;
}

bool HybridEngine::coupled_at(double t) const {
    return t >= sc_.coupling_start - 1e-9 * sc_.dt;
}

std::vector<double> HybridEngine::hold_slopes(const SimState& state, bool coupled) const {
    std::vector<double> slope(state.x.size(), 0.0);
    if (sc_.mu != 0.0) {
        return slope;  // leaky neurons use a zero-order hold
    }
    for (int i = 0; i < n_agents_; ++i) {
        const std::size_t base = static_cast<std::size_t>(i) * dim_;
        std::span<const double> xi(state.x.data() + base, dim_);
        std::span<double> vi(slope.data() + base, dim_);
        sc_.agents[i].eval_into(state.t, xi, vi);
        if (coupled) {
            for (int d = 0; d < dim_; ++d) {
                vi[d] -= drift_gain_[i] * xi[d];
            }
        }
    }
    return slope;
}

std::optional<double> HybridEngine::neuron_crossing(const SimState& state, const std::vector<double>& slope,
                                                    std::size_t q) const {
    const double side = q % 2 == 0 ? 1.0 : -1.0;
    const double u = side * state.x[q / 2];
    if (sc_.mu != 0.0) {
        return crossing_time(state.potential[q], u, sc_.mu, sc_.delta);
    }
    return ramp_crossing_time(state.potential[q], u, side * slope[q / 2], sc_.delta);
}

void HybridEngine::flow_in_place(SimState& state, const std::vector<double>& slope, double h, bool coupled) const {
    if (h <= 0.0) {
        return;
    }
    // Neurons see the state at the hold point, extended linearly along the
    // flow derivative there (constant when leaky).
    for (std::size_t c = 0; c < state.x.size(); ++c) {
        const double u = state.x[c];
        for (int side = 0; side < 2; ++side) {
            const double sign = side == 0 ? 1.0 : -1.0;
            double& xi = state.potential[2 * c + side];
            if (sc_.mu == 0.0) {
                xi += ramp_drive(sign * u, sign * slope[c], h);
            } else {
                xi = flow_neuron(NeuronState{xi, sc_.delta, sc_.mu}, sign * u, h).potential;
            }
        }
    }
    for (int i = 0; i < n_agents_; ++i) {
        const AgentSpec& spec = sc_.agents[i];
        const double drift = coupled ? drift_gain_[i] : 0.0;
        std::span<double> xi(state.x.data() + static_cast<std::size_t>(i) * dim_, dim_);
        rk4_step(xi, state.t, h, [&](double t, std::span<const double> y, std::span<double> dy) {
            spec.eval_into(t, y, dy);
            for (int d = 0; d < dim_; ++d) {
                dy[d] -= drift * y[d];
            }
        });
    }
    state.t += h;
}

void HybridEngine::fire(SimState& state, std::size_t neuron, bool coupled, std::vector<SpikeEvent>& events) const {
    const std::size_t cell = neuron / 2;
    const int agent = static_cast<int>(cell / dim_);
    const int dim = static_cast<int>(cell % dim_);
    const int sign = neuron % 2 == 0 ? 1 : -1;

    state.potential[neuron] = 0.0;
    ++state.spike_count[neuron];
    if (coupled) {
        for (int receiver : sc_.graph.receivers_of(agent)) {
            state.x[static_cast<std::size_t>(receiver) * dim_ + dim] += sign * sc_.alpha;
        }
    }
    events.push_back({state.t, agent, dim, sign});
}

void HybridEngine::advance_window(SimState& state, double window_end, std::vector<SpikeEvent>& events,
                                  std::vector<double>* peak) const {
    const bool coupled = coupled_at(state.t);
    const std::size_t n_neurons = state.potential.size();
    const double window_start = state.t;
    int jumps = 0;

    auto guard = [&](std::size_t neuron) {
        if (++jumps > sc_.zeno_guard) {
            std::ostringstream msg;
            msg << "zeno guard tripped: more than " << sc_.zeno_guard << " jumps in step [" << window_start << ", "
                << window_end << "], last by agent " << (neuron / 2) / dim_ + 1 << " dim " << (neuron / 2) % dim_ + 1;
            throw ZenoError(msg.str());
        }
    };

    while (true) {
        // Anything sitting in the jump set fires now. Jumps move x but never ξ,
        // so a single ordered pass suffices.
        for (std::size_t q = 0; q < n_neurons; ++q) {
            if (state.potential[q] >= sc_.delta) {
                guard(q);
                fire(state, q, coupled, events);
            }
        }
        if (peak) {
            update_peak(*peak, state.x);
        }

        const double remaining = window_end - state.t;
        if (remaining <= 0.0) {
            break;
        }

        const auto slope = hold_slopes(state, coupled);
        std::vector<std::optional<double>> taus(n_neurons);
        double earliest = std::numeric_limits<double>::infinity();
        for (std::size_t q = 0; q < n_neurons; ++q) {
            taus[q] = neuron_crossing(state, slope, q);
            if (taus[q] && *taus[q] < earliest) {
                earliest = *taus[q];
            }
        }

        if (!(earliest <= remaining)) {
            flow_in_place(state, slope, remaining, coupled);
            break;
        }

        // Mark every neuron crossing at the earliest instant before flowing so
        // ties fire together in index order.
        std::vector<std::size_t> crossing;
        for (std::size_t q = 0; q < n_neurons; ++q) {
            if (taus[q] && *taus[q] == earliest) {
                crossing.push_back(q);
            }
        }
        flow_in_place(state, slope, earliest, coupled);
        for (std::size_t q : crossing) {
            state.potential[q] = sc_.delta;
        }
    }
    state.t = window_end;
}

SimState HybridEngine::flow_step(const SimState& state, double dt) const {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("flow_step: step must be positive");
    }
    SimState next = state;
    const bool coupled = coupled_at(state.t);
    flow_in_place(next, hold_slopes(state, coupled), dt, coupled);
    check_finite(next.x, next.t);
    return next;
}

std::pair<SimState, std::vector<SpikeEvent>> HybridEngine::detect_and_jump(const SimState& state, double dt) const {
    SimState next = state;
    std::vector<SpikeEvent> events;
    advance_window(next, state.t + dt, events, nullptr);
    check_finite(next.x, next.t);
    return {std::move(next), std::move(events)};
}

Trace HybridEngine::run() const {
    SimState state = initial_state();
    return sampled_run(sc_, state.x, n_agents_, dim_, [&](std::vector<double>& y, double t0, double t1, Trace& trace) {
        state.t = t0;
        state.x = y;
        advance_window(state, t1, trace.spikes, &trace.peak_abs);
        y = state.x;
    });
}

SimState flow_step(const SimState& state, const Scenario& scenario, double dt) {
    return HybridEngine(scenario).flow_step(state, dt);
}

std::pair<SimState, std::vector<SpikeEvent>> detect_and_jump(const SimState& state, const Scenario& scenario,
                                                             double dt) {
    return HybridEngine(scenario).detect_and_jump(state, dt);
}

Trace run(const Scenario& scenario) {
    return HybridEngine(scenario).run();
}

Trace run_continuous(const Scenario& scenario) {
    validate(scenario);
    const int n_agents = scenario.n_agents();
    const int dim = scenario.state_dim();
    const Graph& g = scenario.graph;

    return sampled_run(scenario, scenario.initial_states, n_agents, dim,
                       [&](std::vector<double>& y, double t0, double t1, Trace&) {
                           const bool coupled = t0 >= scenario.coupling_start - 1e-9 * scenario.dt;
                           rk4_step(y, t0, t1 - t0, [&](double t, std::span<const double> x, std::span<double> dx) {
                               for (int i = 0; i < n_agents; ++i) {
                                   const std::size_t base = static_cast<std::size_t>(i) * dim;
                                   scenario.agents[i].eval_into(t, x.subspan(base, dim), dx.subspan(base, dim));
                                   if (!coupled) {
                                       continue;
                                   }
                                   for (int p : g.senders_of(i)) {
                                       const std::size_t other = static_cast<std::size_t>(p) * dim;
                                       for (int d = 0; d < dim; ++d) {
                                           dx[base + d] += scenario.k * (x[other + d] - x[base + d]);
                                       }
                                   }
                               }
                           });
                       });
}

Trace run_blended(const Scenario& scenario, std::span<const double> s0) {
    validate(scenario);
    const BlendedField field(scenario.agents);
    if (static_cast<int>(s0.size()) != field.state_dim()) {
        throw std::invalid_argument("run_blended: initial point has wrong dimension");
    }
    return sampled_run(scenario, std::vector<double>(s0.begin(), s0.end()), 1, field.state_dim(),
                       [&](std::vector<double>& y, double t0, double t1, Trace&) {
                           rk4_step(y, t0, t1 - t0, [&](double t, std::span<const double> s, std::span<double> ds) {
                               field.eval_into(t, s, ds);
                           });
                       });
}

std::vector<double> mean_initial_state(const Scenario& scenario) {
    const int n = scenario.state_dim();
    const int count = scenario.n_agents();
    std::vector<double> mean(n, 0.0);
    for (int i = 0; i < count; ++i) {
        for (int d = 0; d < n; ++d) {
            mean[d] += scenario.initial_states[static_cast<std::size_t>(i) * n + d];
        }
    }
    for (double& m : mean) {
        m /= count;
    }
    return mean;
}

}  // namespace nspike
