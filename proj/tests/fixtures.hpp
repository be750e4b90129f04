#pragma once

#include "neurospike/config.hpp"
#include "neurospike/scenario.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace fixture {

using nspike::Edge;

// Connected undirected graph: random spanning tree plus a few extra edges.
inline nspike::Graph random_undirected(int n, std::mt19937_64& rng) {
    std::set<std::pair<int, int>> pairs;
    for (int v = 1; v < n; ++v) {
        const int u = std::uniform_int_distribution<int>(0, v - 1)(rng);
        pairs.insert({u, v});
    }
    const int extra = std::uniform_int_distribution<int>(0, n)(rng);
    for (int e = 0; e < extra; ++e) {
        int a = std::uniform_int_distribution<int>(0, n - 1)(rng);
        int b = std::uniform_int_distribution<int>(0, n - 1)(rng);
        if (a != b) pairs.insert({std::min(a, b), std::max(a, b)});
    }
    std::vector<Edge> edges;
    for (auto [a, b] : pairs) edges.push_back({a, b});
    return nspike::build_topology(n, edges, false);
}

// Balanced digraph: a Hamiltonian cycle through a random permutation, plus
// one more random cycle when it adds no duplicate edge.
inline nspike::Graph random_balanced(int n, std::mt19937_64& rng) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::set<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) pairs.insert({perm[i], perm[(i + 1) % n]});
    if (n >= 3) {
        std::shuffle(perm.begin(), perm.end(), rng);
        const int len = std::uniform_int_distribution<int>(3, n)(rng);
        std::vector<std::pair<int, int>> cycle;
        for (int i = 0; i < len; ++i) cycle.push_back({perm[i], perm[(i + 1) % len]});
        if (std::none_of(cycle.begin(), cycle.end(), [&](auto e) { return pairs.count(e); })) {
            pairs.insert(cycle.begin(), cycle.end());
        }
    }
    std::vector<Edge> edges;
    for (auto [a, b] : pairs) edges.push_back({a, b});
    return nspike::build_topology(n, edges, true);
}

// Random leak-free scenario with LinearAffine agents: N in [2, 8], n in
// {1, 2}, k in [1, 50], alpha in [0.01, 1]. The matrices are shifted by -1.5·I
// so trajectories stay bounded over the horizon.
inline nspike::Scenario random_linear_scenario(std::uint64_t seed, double t_end = 2.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    nspike::Scenario s;
    s.name = "random-" + std::to_string(seed);
    const int n_agents = std::uniform_int_distribution<int>(2, 8)(rng);
    const int dim = std::uniform_int_distribution<int>(1, 2)(rng);
    s.graph = std::bernoulli_distribution(0.5)(rng) ? random_undirected(n_agents, rng) : random_balanced(n_agents, rng);
    for (int i = 0; i < n_agents; ++i) {
        nspike::LinearAffine f;
        f.A = Eigen::MatrixXd(dim, dim);
        f.b = Eigen::VectorXd(dim);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) f.A(r, c) = unit(rng) - (r == c ? 1.5 : 0.0);
            f.b(r) = 2.0 * unit(rng);
        }
        s.agents.emplace_back(f);
        for (int d = 0; d < dim; ++d) s.initial_states.push_back(3.0 * unit(rng));
    }
    s.k = std::uniform_real_distribution<double>(1.0, 50.0)(rng);
    s.alpha = std::exp(std::uniform_real_distribution<double>(std::log(0.01), std::log(1.0))(rng));
    s.mu = 0.0;
    s.dt = 1e-4;
    s.t_end = t_end;
    s.sample_period = 1e-4;
    s.seed = seed;
    s.initial_potentials.assign(static_cast<std::size_t>(n_agents) * dim * 2, 0.0);
    nspike::resolve(s);
    std::uniform_real_distribution<double> pot(0.0, s.delta);
    for (double& p : s.initial_potentials) p = pot(rng) * (1.0 - 1e-12);
    nspike::validate(s);
    return s;
}

inline nspike::Scenario bundled(const std::string& name) { return nspike::parse_scenario(name); }

}  // namespace fixture
