#include "maxkvc/instance.hpp"

#include <algorithm>
#include <stdexcept>

namespace maxkvc {

ProblemInstance::ProblemInstance(Graph graph, int k)
    : graph_(std::move(graph)), k_(k), index_(graph_.n_vertices(), k) {
  if (k < 1 || k > graph_.n_vertices())
    throw std::invalid_argument("ProblemInstance: k outside [1, n]");
  if (index_.dim() > kMaxEnumerableDim)
    throw std::length_error("ProblemInstance: C(n,k) too large to enumerate");
  table_.resize(index_.dim());
  for (std::uint64_t i = 0; i < index_.dim(); ++i)
    table_[i] = graph_.objective(index_.unrank(i));
  max_value_ = *std::max_element(table_.begin(), table_.end());
}

BruteForceResult brute_force_optimum(const ProblemInstance& instance) {
  BruteForceResult result;
  result.max_value = instance.max_value();
  const auto& table = instance.objective_table();
  for (std::uint64_t i = 0; i < table.size(); ++i)
    if (table[i] == result.max_value)
      result.argmax.push_back(instance.index().unrank(i));
  return result;
}

}  // namespace maxkvc
