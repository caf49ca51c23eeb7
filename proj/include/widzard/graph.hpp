#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace widzard {

using Vertex = unsigned;

/// Undirected multigraph on the dense vertex set 1..n.
///
/// Edges are kept as canonically ordered pairs (min, max) with a multiplicity,
/// so equality does not depend on insertion order. Self-loops are rejected.
class MultiGraph {
public:
  using Edge = std::pair<Vertex, Vertex>;

  MultiGraph() = default;
  explicit MultiGraph(std::size_t vertex_count) : vertex_count_(vertex_count) {}

  std::size_t vertex_count() const { return vertex_count_; }
  Vertex add_vertex() { return static_cast<Vertex>(++vertex_count_); }

  /// Adds one occurrence of {u, v}. Throws std::invalid_argument on a self-loop
  /// or an endpoint outside 1..n.
  void add_edge(Vertex u, Vertex v, std::size_t multiplicity = 1);

  /// Number of edge occurrences, counting multiplicity.
  std::size_t edge_count() const;
  std::size_t distinct_edge_count() const { return edges_.size(); }
  std::size_t multiplicity(Vertex u, Vertex v) const;
  bool adjacent(Vertex u, Vertex v) const { return multiplicity(u, v) > 0; }

  /// Distinct edges in ascending (min, max) order with their multiplicities.
  const std::map<Edge, std::size_t> &edges() const { return edges_; }

  friend bool operator==(const MultiGraph &, const MultiGraph &) = default;

private:
  std::size_t vertex_count_ = 0;
  std::map<Edge, std::size_t> edges_;
};

/// Same vertices, every parallel class collapsed to a single edge.
MultiGraph simple_view(const MultiGraph &g);

/// Degrees in the simple view, sorted descending.
std::vector<std::size_t> degree_sequence(const MultiGraph &g);

} // namespace widzard
