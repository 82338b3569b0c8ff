#pragma once

#include <cstdint>
#include <vector>

#include "maxkvc/graph.hpp"
#include "maxkvc/subspace.hpp"

namespace maxkvc {

/// A Max-k vertex cover instance: pick exactly k vertices maximizing the
/// number of covered edges. Holds the objective value of every weight-k
/// basis state, indexed in SubspaceIndex order. Immutable once built.
class ProblemInstance {
 public:
  ProblemInstance(Graph graph, int k);

  const Graph& graph() const { return graph_; }
  int k() const { return k_; }
  const SubspaceIndex& index() const { return index_; }
  const std::vector<std::int32_t>& objective_table() const { return table_; }

  /// Exact optimum over weight-k subsets (max over the objective table).
  int max_value() const { return max_value_; }

 private:
  Graph graph_;
  int k_;
  SubspaceIndex index_;
  std::vector<std::int32_t> table_;
  int max_value_;
};

struct BruteForceResult {
  int max_value = 0;
  std::vector<Bitstring> argmax;  // every weight-k subset attaining the max
};

/// Exhaustive scan of the weight-k objective table.
BruteForceResult brute_force_optimum(const ProblemInstance& instance);

/// Largest subspace dimension we are willing to materialize a table for.
inline constexpr std::uint64_t kMaxEnumerableDim = 4'000'000;

}  // namespace maxkvc
