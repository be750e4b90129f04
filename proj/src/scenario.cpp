#include "neurospike/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace nspike {

namespace {

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

// ratio within a relative 1e-9 of an integer
long long near_integer_ratio(double num, double den) {
    const double r = num / den;
    const double rounded = std::round(r);
    if (rounded < 1.0 || std::abs(r - rounded) > 1e-9 * std::max(1.0, rounded)) {
        return -1;
    }
    return static_cast<long long>(rounded);
}

}  // namespace

void resolve(Scenario& s) {
    if (!positive_finite(s.alpha)) {
        throw ScenarioError("alpha must be positive, got " + std::to_string(s.alpha));
    }
    if (s.delta_pinned) {
        if (!positive_finite(s.delta)) {
            throw ScenarioError("delta must be positive, got " + std::to_string(s.delta));
        }
        s.k = s.alpha / s.delta;
    } else {
        if (!positive_finite(s.k)) {
            throw ScenarioError("k must be positive, got " + std::to_string(s.k));
        }
        s.delta = s.alpha / s.k;
    }
}

void validate(const Scenario& s) {
    const int n_agents = s.n_agents();
    if (n_agents <= 0) {
        throw ScenarioError("scenario has no graph");
    }
    if (static_cast<int>(s.agents.size()) != n_agents) {
        throw ScenarioError("agent count " + std::to_string(s.agents.size()) + " does not match graph size " +
                            std::to_string(n_agents));
    }
    const int n = s.state_dim();
    for (const auto& a : s.agents) {
        if (a.state_dim() != n) {
            throw ScenarioError("agents disagree on state dimension");
        }
    }
    if (!is_connected(s.graph)) {
        throw ScenarioError("graph is not connected");
    }
    if (s.graph.directed() && !is_balanced(s.graph)) {
        throw ScenarioError("directed graph is not balanced");
    }
    if (!positive_finite(s.k) || !positive_finite(s.alpha) || !positive_finite(s.delta)) {
        throw ScenarioError("k, alpha and delta must be positive");
    }
    if (std::abs(s.k * s.delta - s.alpha) > 1e-12 * s.alpha) {
        throw ScenarioError("gain relation k = alpha/delta violated");
    }
    if (!(s.mu >= 0.0) || !std::isfinite(s.mu)) {
        throw ScenarioError("mu must be nonnegative");
    }
    if (!positive_finite(s.dt) || !positive_finite(s.t_end) || !positive_finite(s.sample_period)) {
        throw ScenarioError("dt, t_end and sample_period must be positive");
    }
    if (near_integer_ratio(s.sample_period, s.dt) < 0) {
        throw ScenarioError("sample_period must be an integer multiple of dt");
    }
    if (!(s.coupling_start >= 0.0)) {
        throw ScenarioError("coupling_start must be nonnegative");
    }
    if (s.zeno_guard <= 0) {
        throw ScenarioError("zeno_guard must be positive");
    }
    const auto cells = static_cast<std::size_t>(n_agents) * static_cast<std::size_t>(n);
    if (s.initial_states.size() != cells) {
        throw ScenarioError("initial_states must hold " + std::to_string(cells) + " values");
    }
    for (double v : s.initial_states) {
        if (!std::isfinite(v)) {
            throw ScenarioError("initial_states must be finite");
        }
    }
    if (s.initial_potentials.size() != 2 * cells) {
        throw ScenarioError("initial_potentials must hold " + std::to_string(2 * cells) + " values");
    }
    for (double v : s.initial_potentials) {
        if (!(v >= 0.0 && v < s.delta)) {
            throw ScenarioError("initial potentials must lie in [0, delta)");
        }
    }
}

int sample_stride(const Scenario& s) {
    return static_cast<int>(near_integer_ratio(s.sample_period, s.dt));
}

long long step_count(const Scenario& s) {
    const double r = s.t_end / s.dt;
    const double rounded = std::round(r);
    if (std::abs(r - rounded) <= 1e-9 * std::max(1.0, rounded)) {
        return static_cast<long long>(rounded);
    }
    return static_cast<long long>(std::ceil(r));
}

std::uint64_t fnv1a(std::span<const unsigned char> bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a(const std::string& text) {
    return fnv1a({reinterpret_cast<const unsigned char*>(text.data()), text.size()});
}

}  // namespace nspike
