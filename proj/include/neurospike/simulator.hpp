#pragma once

#include "neurospike/neuron.hpp"
#include "neurospike/scenario.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nspike {

class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A state component became non-finite.
class DivergenceError : public SimulationError {
public:
    using SimulationError::SimulationError;
};

/// More jumps inside one base step than Scenario::zeno_guard allows.
class ZenoError : public SimulationError {
public:
    using SimulationError::SimulationError;
};

/// Hybrid state q = (x, ξ). Layouts follow Scenario.
struct SimState {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> potential;
    std::vector<std::uint64_t> spike_count;  // per neuron, same layout as potential
};

/// Sampled run output.
struct Trace {
    int n_agents = 0;
    int state_dim = 0;
    std::vector<double> times;
    std::vector<double> states;  // sample-major, then agent-major
    std::vector<SpikeEvent> spikes;
    /// sup |x_{i,d}| over every instant the engine evaluated (step ends,
    /// jump instants, hold points); agent-major.
    std::vector<double> peak_abs;
    std::uint64_t scenario_digest = 0;

    std::size_t size() const { return times.size(); }
    std::size_t width() const { return static_cast<std::size_t>(n_agents) * static_cast<std::size_t>(state_dim); }
    std::span<const double> sample(std::size_t j) const { return {states.data() + j * width(), width()}; }
    double value(std::size_t j, int agent, int dim) const {
        return states[j * width() + static_cast<std::size_t>(agent) * state_dim + dim];
    }
};

std::uint64_t trace_digest(const Trace& trace);

/// Event-driven engine for the neuro-spike coupled network.
///
/// Between events every agent flows independently under
/// ẋ_i = f_i(t, x_i) - k·d_i·x_i (classical RK4). A hold point is set at every
/// step start and every jump; from there each leak-free neuron integrates the
/// rectified first-order extension x(τ) ≈ x₀ + ẋ₀τ in closed form (leaky
/// neurons hold x₀ constant). The
/// earliest threshold crossing is located in closed form; the firing neuron
/// resets and its receivers jump by ±α in the firing coordinate. Simultaneous
/// firings are processed in (agent, dimension, positive-before-negative) order.
///
/// Before Scenario::coupling_start the drift term and spike delivery are off;
/// neurons keep integrating and firing, and those spikes are logged but not
/// delivered.
class HybridEngine {
public:
    explicit HybridEngine(const Scenario& scenario);

    SimState initial_state() const;

    /// Flow without jumps over `dt`.
    SimState flow_step(const SimState& state, double dt) const;

    /// Advances over [state.t, state.t + dt], resolving every jump in the
    /// window. Throws ZenoError when the window needs more than zeno_guard jumps.
    std::pair<SimState, std::vector<SpikeEvent>> detect_and_jump(const SimState& state, double dt) const;

    Trace run() const;

private:
    bool coupled_at(double t) const;
    std::vector<double> hold_slopes(const SimState& state, bool coupled) const;
    std::optional<double> neuron_crossing(const SimState& state, const std::vector<double>& slope,
                                          std::size_t neuron) const;
    void flow_in_place(SimState& state, const std::vector<double>& slope, double h, bool coupled) const;
    void fire(SimState& state, std::size_t neuron, bool coupled, std::vector<SpikeEvent>& events) const;
    void advance_window(SimState& state, double window_end, std::vector<SpikeEvent>& events,
                        std::vector<double>* peak) const;

    const Scenario& sc_;
    int n_agents_;
    int dim_;
    std::vector<double> drift_gain_;  // k·d_i
};

/// Per-neuron flat index helpers.
inline std::size_t neuron_index(int agent, int dim, int state_dim, int sign) {
    return (static_cast<std::size_t>(agent) * state_dim + dim) * 2 + (sign > 0 ? 0 : 1);
}

SimState flow_step(const SimState& state, const Scenario& scenario, double dt);
std::pair<SimState, std::vector<SpikeEvent>> detect_and_jump(const SimState& state, const Scenario& scenario,
                                                             double dt);

/// Neuro-spike coupled network.
Trace run(const Scenario& scenario);

/// Diffusive baseline ẋ_i = f_i(t, x_i) + k Σ_{p ∈ N_i} (x_p - x_i), same
/// integrator, gating and sampling.
Trace run_continuous(const Scenario& scenario);

/// Single trajectory of the blended field ṡ = (1/N) Σ f_i(t, s).
Trace run_blended(const Scenario& scenario, std::span<const double> s0);

/// Mean of the initial agent states; the default blended starting point.
std::vector<double> mean_initial_state(const Scenario& scenario);

}  // namespace nspike
