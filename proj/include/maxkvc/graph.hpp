#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace maxkvc {

/// Subsets of vertices are packed into a machine word: bit i of the word is
/// vertex i. This caps n at 63, far beyond anything enumerable here.
using Bitstring = std::uint64_t;
inline constexpr int kMaxVertices = 63;

/// Simple undirected graph on vertices 0..n-1. Edges are stored sorted
/// lexicographically with u < v; no self-loops, no duplicates.
class Graph {
 public:
  Graph(int n_vertices, std::vector<std::pair<int, int>> edges);

  int n_vertices() const { return n_vertices_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  int n_edges() const { return static_cast<int>(edges_.size()); }

  /// Number of edges with at least one endpoint selected in `subset`.
  /// Any bitstring is accepted; Hamming-weight checks are the caller's.
  int objective(Bitstring subset) const;

  std::string to_json() const;
  static Graph from_json(const std::string& text);

  bool operator==(const Graph& other) const = default;

 private:
  int n_vertices_;
  std::vector<std::pair<int, int>> edges_;
};

/// G(n, p) random graph: each of the C(n,2) candidate edges is included
/// independently with probability p_edge, drawn from a stream seeded by
/// `seed`. Same (n, p_edge, seed) always yields the same graph.
Graph gen_random_graph(int n, double p_edge, std::uint64_t seed);

}  // namespace maxkvc
