#include "neurospike/graph.hpp"

#include <algorithm>
#include <queue>
#include <string>

namespace nspike {

Graph build_topology(int n_nodes, const std::vector<Edge>& edges, bool directed) {
    if (n_nodes <= 0) {
        throw GraphError("graph needs at least one node, got " + std::to_string(n_nodes));
    }

    std::vector<Edge> all;
    all.reserve(directed ? edges.size() : 2 * edges.size());
    for (const Edge& e : edges) {
        if (e.sender < 0 || e.sender >= n_nodes || e.receiver < 0 || e.receiver >= n_nodes) {
            throw GraphError("edge (" + std::to_string(e.sender) + ", " + std::to_string(e.receiver) +
                             ") out of range for " + std::to_string(n_nodes) + " nodes");
        }
        if (e.sender == e.receiver) {
            throw GraphError("self-loop on node " + std::to_string(e.sender));
        }
        all.push_back(e);
        if (!directed) {
            all.push_back({e.receiver, e.sender});
        }
    }

    std::sort(all.begin(), all.end());
    if (auto dup = std::adjacent_find(all.begin(), all.end()); dup != all.end()) {
        throw GraphError("duplicate edge (" + std::to_string(dup->sender) + ", " +
                         std::to_string(dup->receiver) + ")");
    }

    Graph g;
    g.n_nodes_ = n_nodes;
    g.directed_ = directed;
    g.edges_ = std::move(all);
    g.senders_.assign(n_nodes, {});
    g.receivers_.assign(n_nodes, {});
    for (const Edge& e : g.edges_) {
        g.receivers_[e.sender].push_back(e.receiver);
        g.senders_[e.receiver].push_back(e.sender);
    }
    for (auto& s : g.senders_) {
        std::sort(s.begin(), s.end());
    }
    return g;
}

SpectralData spectral(const Graph& g) {
    const int n = g.n_nodes();
    SpectralData out;
    out.adjacency = Eigen::MatrixXi::Zero(n, n);
    out.degree = Eigen::MatrixXi::Zero(n, n);
    for (const Edge& e : g.edges()) {
        out.adjacency(e.receiver, e.sender) = 1;
    }
    for (int i = 0; i < n; ++i) {
        out.degree(i, i) = out.adjacency.row(i).sum();
        out.max_degree = std::max(out.max_degree, out.degree(i, i));
    }
    out.laplacian = out.degree - out.adjacency;
    return out;
}

bool is_connected(const Graph& g) {
    const int n = g.n_nodes();
    std::vector<char> seen(n, 0);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop();
        for (const auto* list : {&g.senders_of(v), &g.receivers_of(v)}) {
            for (int w : *list) {
                if (!seen[w]) {
                    seen[w] = 1;
                    ++reached;
                    frontier.push(w);
                }
            }
        }
    }
    return reached == n;
}

bool is_balanced(const Graph& g) {
    for (int i = 0; i < g.n_nodes(); ++i) {
        if (g.in_degree(i) != g.out_degree(i)) {
            return false;
        }
    }
    return true;
}

Graph directed_ring(int n_nodes) {
    std::vector<Edge> edges;
    if (n_nodes > 1) {
        for (int i = 0; i < n_nodes; ++i) {
            edges.push_back({i, (i + 1) % n_nodes});
        }
    }
    // A 2-ring would list the same pair twice in opposite orientation; that is
    // still a valid digraph.
    return build_topology(n_nodes, edges, true);
}

Graph undirected_star(int n_nodes, int hub) {
    std::vector<Edge> edges;
    for (int i = 0; i < n_nodes; ++i) {
        if (i != hub) {
            edges.push_back({hub, i});
        }
    }
    return build_topology(n_nodes, edges, false);
}

}  // namespace nspike
