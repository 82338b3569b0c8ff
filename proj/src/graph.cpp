#include "maxkvc/graph.hpp"

#include <algorithm>
#include <stdexcept>

#include "maxkvc/rng.hpp"
#include "json.hpp"

namespace maxkvc {

Graph::Graph(int n_vertices, std::vector<std::pair<int, int>> edges)
    : n_vertices_(n_vertices), edges_(std::move(edges)) {
  if (n_vertices_ < 1)
    throw std::invalid_argument("Graph: n_vertices must be >= 1");
  if (n_vertices_ > kMaxVertices)
    throw std::invalid_argument("Graph: n_vertices exceeds word width");
  for (auto& [u, v] : edges_) {
    if (u == v) throw std::invalid_argument("Graph: self-loop");
    if (u > v) std::swap(u, v);
    if (u < 0 || v >= n_vertices_)
      throw std::invalid_argument("Graph: endpoint out of range");
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw std::invalid_argument("Graph: duplicate edge");
}

int Graph::objective(Bitstring subset) const {
  int covered = 0;
  for (const auto& [u, v] : edges_)
    covered += static_cast<int>(((subset >> u) | (subset >> v)) & 1u);
  return covered;
}

std::string Graph::to_json() const {
  nlohmann::json j;
  j["n"] = n_vertices_;
  auto& e = j["edges"] = nlohmann::json::array();
  for (const auto& [u, v] : edges_) e.push_back({u, v});
  return j.dump();
}

Graph Graph::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges"))
    edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  return Graph(j.at("n").get<int>(), std::move(edges));
}

Graph gen_random_graph(int n, double p_edge, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_random_graph: n must be >= 1");
  if (p_edge < 0.0 || p_edge > 1.0)
    throw std::invalid_argument("gen_random_graph: p_edge outside [0,1]");
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.uniform01() < p_edge) edges.emplace_back(u, v);
  return Graph(n, std::move(edges));
}

}  // namespace maxkvc
