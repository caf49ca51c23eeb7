#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "widzard/graph.hpp"
#include "widzard/itd.hpp"

namespace widzard {

/// A PACE-2017 tree decomposition: bags indexed 1..N and tree edges between
/// bag ids.
struct TreeDecomposition {
  std::size_t bag_count = 0;       // N
  std::size_t max_bag_size = 0;    // w, as declared in the header
  std::size_t vertex_count = 0;    // n
  std::map<std::size_t, std::set<Vertex>> bags;
  std::set<std::pair<std::size_t, std::size_t>> tree_edges; // (min, max)

  /// Largest actual bag size minus one (-1 for no bags is reported as 0).
  std::size_t width() const;

  friend bool operator==(const TreeDecomposition &, const TreeDecomposition &) = default;
};

MultiGraph parse_gr(std::string_view text);
TreeDecomposition parse_td(std::string_view text);

std::string write_gr(const MultiGraph &g);
std::string write_td(const TreeDecomposition &td);

/// First failing tree-decomposition condition, if any.
struct TdViolation {
  enum class Kind { VertexCount, VertexCoverage, EdgeCoverage, Connectivity } kind;
  std::string message;
};

std::optional<TdViolation> validate_td(const MultiGraph &g, const TreeDecomposition &td);

/// Converts a validated (graph, decomposition) pair into an ITD of width k
/// whose root bag is empty. Throws ValidationError if the decomposition is
/// wider than k.
ItdTerm td_to_itd(const MultiGraph &g, const TreeDecomposition &td, unsigned k);

/// Decomposition read off an evaluated ITD: one bag per node, with adjacent
/// nested bags contracted into the larger one.
TreeDecomposition itd_to_td(const ItdTerm &term, const ItdEvaluation &eval);

} // namespace widzard
