#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "kisched/matrix.hpp"
#include "kisched/rng.hpp"

namespace kisched {

/// Undirected conflict graph with a positive per-node weight. Immutable after
/// construction; adjacency is kept both as a dense symmetric matrix (the GCN
/// consumes whole rows) and as sorted neighbor lists (greedy walks edges).
class WeightedGraph {
public:
    WeightedGraph(int n, const std::vector<std::pair<int, int>>& edges,
                  std::vector<double> weights);

    int n() const { return n_; }
    int edge_count() const { return edge_count_; }

    bool adjacent(int u, int v) const {
        return adj_[static_cast<std::size_t>(u) * n_ + v] != 0;
    }
    const std::vector<int>& neighbors(int v) const { return nbrs_[v]; }
    int degree(int v) const { return static_cast<int>(nbrs_[v].size()); }

    double weight(int v) const { return weights_[v]; }
    const std::vector<double>& weights() const { return weights_; }

    /// Edges as sorted (u < v) pairs, ascending.
    std::vector<std::pair<int, int>> edge_list() const;

    bool operator==(const WeightedGraph& o) const;

private:
    int n_ = 0;
    int edge_count_ = 0;
    std::vector<std::uint8_t> adj_;        // n*n, symmetric, zero diagonal
    std::vector<std::vector<int>> nbrs_;   // sorted per node
    std::vector<double> weights_;
};

/// Normalized Laplacian I - D^{-1/2} A D^{-1/2}. Isolated nodes use the
/// convention D_ii^{-1/2} = 0, which leaves their row equal to the identity
/// row, so the matrix is well-defined for every graph.
Matrix normalized_laplacian(const WeightedGraph& g);

/// Erdos-Renyi G(n, p) with node weights uniform on [0, 1).
WeightedGraph generate_er(int n, double p, Rng& rng);

/// Barabasi-Albert preferential attachment: seed clique on the first m nodes,
/// then each new node attaches to m distinct existing nodes with probability
/// proportional to current degree. Node weights uniform on [0, 1).
WeightedGraph generate_ba(int n, int m, Rng& rng);

// --- single-record serialization -------------------------------------------
//
// One graph per text line:
//   g <id> <family> <n> <param> <seed> <E> <u1> <v1> ... <uE> <vE> <w0> ... <w_{n-1}>
// Edge pairs satisfy u < v and are listed in ascending order. param and the
// weights are printed with 17 significant digits so parsing recovers the
// exact double.

struct GraphRecord {
    std::uint64_t id = 0;
    std::string family;  // "er" | "ba"
    double param = 0.0;  // p for er, m for ba
    std::uint64_t seed = 0;
    WeightedGraph graph{0, {}, {}};
};

std::string write_record(const GraphRecord& rec);
GraphRecord parse_record(const std::string& line);

} // namespace kisched
