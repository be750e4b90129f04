#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <vector>

namespace nspike {

/// Directed edge carrying information from `sender` to `receiver`.
/// Node indices are zero-based throughout the library.
struct Edge {
    int sender = 0;
    int receiver = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

class GraphError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Immutable network topology.
///
/// Undirected graphs are stored with both orientations of every edge, so the
/// edge list of an undirected graph is always symmetric under reversal.
class Graph {
public:
    Graph() = default;

    int n_nodes() const { return n_nodes_; }
    bool directed() const { return directed_; }
    /// Sorted by (sender, receiver).
    const std::vector<Edge>& edges() const { return edges_; }

    /// Neighborhood of `node`: agents that send to it.
    const std::vector<int>& senders_of(int node) const { return senders_.at(node); }
    /// Agents that receive from `node`.
    const std::vector<int>& receivers_of(int node) const { return receivers_.at(node); }

    int in_degree(int node) const { return static_cast<int>(senders_.at(node).size()); }
    int out_degree(int node) const { return static_cast<int>(receivers_.at(node).size()); }

    friend Graph build_topology(int n_nodes, const std::vector<Edge>& edges, bool directed);

private:
    int n_nodes_ = 0;
    bool directed_ = false;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> senders_;
    std::vector<std::vector<int>> receivers_;
};

/// Validates and builds a topology. For `directed == false` each listed pair
/// is an undirected edge and is symmetrized; listing both orientations of the
/// same undirected edge counts as a duplicate.
///
/// Throws GraphError on an out-of-range index, a self-loop or a duplicate edge.
Graph build_topology(int n_nodes, const std::vector<Edge>& edges, bool directed);

/// Adjacency uses the receiver-row convention: adjacency(i, p) == 1 iff p
/// sends to i, so row i of the Laplacian couples agent i to its senders.
struct SpectralData {
    Eigen::MatrixXi adjacency;
    Eigen::MatrixXi degree;
    Eigen::MatrixXi laplacian;
    int max_degree = 0;
};

SpectralData spectral(const Graph& g);

/// Connectivity of the underlying undirected graph.
bool is_connected(const Graph& g);

/// Every node's in-degree equals its out-degree.
bool is_balanced(const Graph& g);

// Named constructors for the topologies used by the bundled scenarios and tests.
Graph directed_ring(int n_nodes);
Graph undirected_star(int n_nodes, int hub);

}  // namespace nspike
