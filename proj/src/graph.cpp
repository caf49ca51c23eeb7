#include "widzard/graph.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>

namespace widzard {

void MultiGraph::add_edge(Vertex u, Vertex v, std::size_t multiplicity) {
  if (u == v)
    throw std::invalid_argument("self-loop on vertex " + std::to_string(u));
  if (u < 1 || v < 1 || u > vertex_count_ || v > vertex_count_)
    throw std::invalid_argument("edge {" + std::to_string(u) + "," + std::to_string(v) +
                                "} has an endpoint outside 1.." +
                                std::to_string(vertex_count_));
  if (multiplicity == 0)
    return;
  edges_[{std::min(u, v), std::max(u, v)}] += multiplicity;
}

std::size_t MultiGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto &[edge, mult] : edges_)
    total += mult;
  return total;
}

std::size_t MultiGraph::multiplicity(Vertex u, Vertex v) const {
  auto it = edges_.find({std::min(u, v), std::max(u, v)});
  return it == edges_.end() ? 0 : it->second;
}

MultiGraph simple_view(const MultiGraph &g) {
  MultiGraph out(g.vertex_count());
  for (const auto &[edge, mult] : g.edges())
    out.add_edge(edge.first, edge.second);
  return out;
}

std::vector<std::size_t> degree_sequence(const MultiGraph &g) {
  std::vector<std::size_t> degree(g.vertex_count() + 1, 0);
  for (const auto &[edge, mult] : g.edges()) {
    ++degree[edge.first];
    ++degree[edge.second];
  }
  std::vector<std::size_t> out(degree.begin() + 1, degree.end());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

} // namespace widzard
