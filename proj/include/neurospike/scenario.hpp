#pragma once

#include "neurospike/dynamics.hpp"
#include "neurospike/graph.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nspike {

class ScenarioError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Complete description of one experiment.
///
/// States are stored agent-major: x[i * n + d]. Potentials add a trailing
/// neuron index: potential[(i * n + d) * 2 + 0] for the positive neuron and
/// `+ 1` for the negative one.
struct Scenario {
    std::string name = "scenario";
    Graph graph;
    std::vector<AgentSpec> agents;

    double k = 1.0;       // coupling gain
    double alpha = 0.1;   // spike amplitude
    double mu = 0.0;      // neuron leak; 0 is the only regime with an amplification bound
    double delta = 0.1;   // firing threshold, α/k unless pinned
    bool delta_pinned = false;

    double dt = 1e-4;
    double t_end = 1.0;
    double coupling_start = 0.0;
    double sample_period = 1e-4;
    int zeno_guard = 64;
    std::uint64_t seed = 0;

    std::vector<double> initial_states;
    std::vector<double> initial_potentials;

    int n_agents() const { return graph.n_nodes(); }
    int state_dim() const { return agents.empty() ? 0 : agents.front().state_dim(); }
};

/// Applies the gain relation: Δ = α/k, or k = α/Δ when Δ is pinned.
void resolve(Scenario& s);

/// Throws ScenarioError naming the first violated invariant.
void validate(const Scenario& s);

/// Number of base steps between trace samples.
int sample_stride(const Scenario& s);

/// Number of base steps covering [0, t_end]; the last one may be shorter.
long long step_count(const Scenario& s);

/// 64-bit FNV-1a, used for scenario and trace digests.
std::uint64_t fnv1a(std::span<const unsigned char> bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a(const std::string& text);

}  // namespace nspike
