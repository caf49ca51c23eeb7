#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "widzard/bag.hpp"
#include "widzard/graph.hpp"

namespace widzard {

enum class Op { Leaf, IntroVertex, IntroEdge, ForgetVertex, Join };

/// One symbol of the instruction alphabet. `a` and `b` are label arguments;
/// unused arguments are 0.
struct Instruction {
  Op op = Op::Leaf;
  Label a = 0;
  Label b = 0;

  static Instruction leaf() { return {Op::Leaf, 0, 0}; }
  static Instruction intro_vertex(Label u) { return {Op::IntroVertex, u, 0}; }
  static Instruction intro_edge(Label u, Label v) { return {Op::IntroEdge, u, v}; }
  static Instruction forget_vertex(Label u) { return {Op::ForgetVertex, u, 0}; }
  static Instruction join() { return {Op::Join, 0, 0}; }

  std::size_t arity() const;
  Instruction relabeled(const LabelMap &map) const;

  /// "Leaf", "IntroVertex_3", "IntroEdge_1_2", "ForgetVertex_1", "Join".
  std::string name() const;

  friend bool operator==(const Instruction &, const Instruction &) = default;
};

/// Bag after applying `ins` to `before` (for Join, `before` is the common
/// child bag). Does not check side conditions.
Bag bag_after(const Instruction &ins, Bag before);

using NodeId = std::uint64_t;

struct ItdNode {
  Instruction instruction;
  std::vector<NodeId> children;
  std::size_t line = 0; // source line when parsed, 0 otherwise
};

/// A rooted instruction tree. Node ids are arbitrary positive integers; only
/// the parent/child relation matters.
class ItdTerm {
public:
  ItdTerm() = default;

  /// Appends a node with id max_id+1 and makes it the root. Children must
  /// already exist. Intended for bottom-up construction.
  NodeId add(Instruction ins, std::vector<NodeId> children = {});

  /// Inserts a node with an explicit id without touching the root.
  void insert(NodeId id, ItdNode node);
  void set_root(NodeId id) { root_ = id; }

  NodeId root() const { return root_; }
  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }
  const ItdNode &node(NodeId id) const { return nodes_.at(id); }
  const std::map<NodeId, ItdNode> &nodes() const { return nodes_; }
  NodeId max_id() const { return nodes_.empty() ? 0 : nodes_.rbegin()->first; }

  /// Largest label mentioned by any instruction (0 for a bare Leaf).
  Label max_label() const;

  /// Node ids in post-order (first child's subtree before the second's).
  std::vector<NodeId> post_order() const;

  /// Same shape and instructions, ignoring node ids.
  friend bool structurally_equal(const ItdTerm &x, const ItdTerm &y);

private:
  std::map<NodeId, ItdNode> nodes_;
  NodeId root_ = 0;
};

ItdTerm parse_itd(std::string_view text);
std::string serialize_itd(const ItdTerm &term);

/// Per-node active-label sets.
using ActiveLabelAnnotation = std::map<NodeId, Bag>;

/// Computes bags bottom-up and checks every side condition plus |B| <= k+1.
/// Throws ValidationError naming the first offending node.
ActiveLabelAnnotation validate(const ItdTerm &term, unsigned k);

/// validate() without a width bound beyond the label alphabet.
ActiveLabelAnnotation annotate(const ItdTerm &term);

struct ItdEvaluation {
  MultiGraph graph;
  /// For each node, active label -> graph vertex at that node.
  std::map<NodeId, std::map<Label, Vertex>> label_maps;
};

/// Builds the multigraph. Vertices are numbered by IntroVertex creation order
/// in post-order; Join merges equally labelled vertices into the one created
/// first. Expects a term that passes annotate().
ItdEvaluation evaluate(const ItdTerm &term);

/// Appends ForgetVertex for every root label in ascending order.
ItdTerm normalize_trailing_forgets(const ItdTerm &term);

/// Applies a label permutation to every instruction.
ItdTerm relabel(const ItdTerm &term, const LabelMap &map);

} // namespace widzard
