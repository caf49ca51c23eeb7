#include "widzard/itd.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "widzard/errors.hpp"

namespace widzard {

std::size_t Instruction::arity() const {
  switch (op) {
  case Op::Leaf:
    return 0;
  case Op::Join:
    return 2;
  default:
    return 1;
  }
}

Instruction Instruction::relabeled(const LabelMap &map) const {
  Instruction out = *this;
  if (a != 0)
    out.a = map(a);
  if (b != 0)
    out.b = map(b);
  return out;
}

std::string Instruction::name() const {
  switch (op) {
  case Op::Leaf:
    return "Leaf";
  case Op::IntroVertex:
    return "IntroVertex_" + std::to_string(a);
  case Op::IntroEdge:
    return "IntroEdge_" + std::to_string(a) + "_" + std::to_string(b);
  case Op::ForgetVertex:
    return "ForgetVertex_" + std::to_string(a);
  case Op::Join:
    return "Join";
  }
  return {};
}

Bag bag_after(const Instruction &ins, Bag before) {
  switch (ins.op) {
  case Op::Leaf:
    return {};
  case Op::IntroVertex:
    before.insert(ins.a);
    return before;
  case Op::ForgetVertex:
    before.erase(ins.a);
    return before;
  default:
    return before;
  }
}

NodeId ItdTerm::add(Instruction ins, std::vector<NodeId> children) {
  for (NodeId c : children)
    if (!nodes_.count(c))
      throw std::invalid_argument("child node " + std::to_string(c) + " does not exist");
  NodeId id = max_id() + 1;
  nodes_.emplace(id, ItdNode{ins, std::move(children), 0});
  root_ = id;
  return id;
}

void ItdTerm::insert(NodeId id, ItdNode node) { nodes_[id] = std::move(node); }

Label ItdTerm::max_label() const {
  Label m = 0;
  for (const auto &[id, node] : nodes_)
    m = std::max({m, node.instruction.a, node.instruction.b});
  return m;
}

std::vector<NodeId> ItdTerm::post_order() const {
  std::vector<NodeId> order;
  if (nodes_.empty())
    return order;
  order.reserve(nodes_.size());
  // (node, next child index to descend into)
  std::vector<std::pair<NodeId, std::size_t>> stack{{root_, 0}};
  while (!stack.empty()) {
    auto &[id, next] = stack.back();
    const ItdNode &n = nodes_.at(id);
    if (next < n.children.size()) {
      NodeId child = n.children[next++];
      stack.emplace_back(child, 0);
    } else {
      order.push_back(id);
      stack.pop_back();
    }
  }
  return order;
}

bool structurally_equal(const ItdTerm &x, const ItdTerm &y) {
  if (x.size() != y.size())
    return false;
  if (x.empty())
    return true;
  std::vector<std::pair<NodeId, NodeId>> stack{{x.root(), y.root()}};
  while (!stack.empty()) {
    auto [i, j] = stack.back();
    stack.pop_back();
    const ItdNode &a = x.node(i);
    const ItdNode &b = y.node(j);
    if (!(a.instruction == b.instruction) || a.children.size() != b.children.size())
      return false;
    for (std::size_t c = 0; c < a.children.size(); ++c)
      stack.emplace_back(a.children[c], b.children[c]);
  }
  return true;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class LineCursor {
public:
  LineCursor(std::string_view text, std::size_t line) : s_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  bool done() const { return pos_ >= s_.size(); }
  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }

  void expect(char c) {
    skip_ws();
    if (!peek(c))
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::uint64_t number(const char *what) {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (start == pos_)
      fail(std::string("expected ") + what);
    std::uint64_t value = 0;
    auto res = std::from_chars(s_.data() + start, s_.data() + pos_, value);
    if (res.ec != std::errc())
      fail(std::string(what) + " out of range");
    return value;
  }

  std::string_view word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    return s_.substr(start, pos_ - start);
  }

  [[noreturn]] void fail(const std::string &what) const { throw ParseError(line_, what); }

private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

Label parse_label(std::string_view digits, const LineCursor &cur) {
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(),
                                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    cur.fail("malformed label in operation name");
  unsigned value = 0;
  auto res = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (res.ec != std::errc() || value < 1 || value > kMaxLabel)
    cur.fail("label must be in 1.." + std::to_string(kMaxLabel));
  return value;
}

Instruction parse_operation(std::string_view name, const LineCursor &cur) {
  auto starts = [&](std::string_view p) { return name.substr(0, p.size()) == p; };
  if (name == "Leaf")
    return Instruction::leaf();
  if (name == "Join")
    return Instruction::join();
  if (starts("IntroVertex_"))
    return Instruction::intro_vertex(parse_label(name.substr(12), cur));
  if (starts("ForgetVertex_"))
    return Instruction::forget_vertex(parse_label(name.substr(13), cur));
  if (starts("IntroEdge_")) {
    std::string_view rest = name.substr(10);
    auto sep = rest.find('_');
    if (sep == std::string_view::npos)
      cur.fail("IntroEdge needs two labels");
    Label u = parse_label(rest.substr(0, sep), cur);
    Label v = parse_label(rest.substr(sep + 1), cur);
    if (u == v)
      cur.fail("IntroEdge with equal labels " + std::to_string(u));
    return Instruction::intro_edge(u, v);
  }
  cur.fail("unknown operation '" + std::string(name) + "'");
}

} // namespace

ItdTerm parse_itd(std::string_view text) {
  ItdTerm term;
  std::size_t line_no = 0;
  std::size_t last_line = 1;
  // child id -> line of the first reference
  std::map<NodeId, std::size_t> referenced;

  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;

    LineCursor cur(line, line_no);
    cur.skip_ws();
    if (cur.done()) {
      if (end == text.size())
        break;
      continue;
    }
    last_line = line_no;

    NodeId id = cur.number("node id");
    if (id == 0)
      cur.fail("node id must be positive");
    if (term.nodes().count(id))
      cur.fail("duplicate node id " + std::to_string(id));

    std::string_view opname = cur.word();
    if (opname.empty())
      cur.fail("missing operation");
    Instruction ins = parse_operation(opname, cur);

    std::vector<NodeId> children;
    if (ins.arity() > 0) {
      cur.expect('(');
      for (std::size_t c = 0; c < ins.arity(); ++c) {
        if (c > 0)
          cur.expect(',');
        children.push_back(cur.number("child node id"));
      }
      cur.expect(')');
    }
    cur.skip_ws();
    if (!cur.done())
      cur.fail("trailing characters after operation");

    for (NodeId c : children) {
      if (c == id)
        cur.fail("node " + std::to_string(id) + " references itself");
      if (!referenced.emplace(c, line_no).second)
        cur.fail("node " + std::to_string(c) + " is referenced more than once");
    }
    term.insert(id, ItdNode{ins, std::move(children), line_no});

    if (end == text.size())
      break;
  }

  if (term.empty())
    throw ParseError(1, "empty ITD");

  for (const auto &[child, ref_line] : referenced)
    if (!term.nodes().count(child))
      throw ParseError(ref_line, "reference to undeclared node " + std::to_string(child));

  std::vector<NodeId> roots;
  for (const auto &[id, node] : term.nodes())
    if (!referenced.count(id))
      roots.push_back(id);
  if (roots.empty())
    throw ParseError(last_line, "no root node (cyclic references)");
  if (roots.size() > 1)
    throw ParseError(term.node(roots[roots.size() - 2]).line,
                     "multiple roots (nodes " + std::to_string(roots[roots.size() - 2]) +
                         " and " + std::to_string(roots.back()) + " are unreferenced)");
  term.set_root(roots.front());

  // With a unique root and single references, unreachable nodes sit on cycles.
  std::set<NodeId> reached;
  for (NodeId id : term.post_order())
    reached.insert(id);
  for (const auto &[id, node] : term.nodes())
    if (!reached.count(id))
      throw ParseError(node.line, "node " + std::to_string(id) + " lies on a reference cycle");

  return term;
}

std::string serialize_itd(const ItdTerm &term) {
  std::ostringstream os;
  std::map<NodeId, NodeId> renumber;
  NodeId next = 0;
  for (NodeId id : term.post_order()) {
    renumber[id] = ++next;
    const ItdNode &n = term.node(id);
    os << next << ' ' << n.instruction.name();
    if (!n.children.empty()) {
      os << '(';
      for (std::size_t c = 0; c < n.children.size(); ++c)
        os << (c ? "," : "") << renumber.at(n.children[c]);
      os << ')';
    }
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Validation and evaluation

namespace {

std::string where(NodeId id, const ItdNode &n) {
  std::string s = "node " + std::to_string(id);
  if (n.line != 0)
    s += " (line " + std::to_string(n.line) + ")";
  return s;
}

ActiveLabelAnnotation compute_bags(const ItdTerm &term, unsigned max_bag) {
  ActiveLabelAnnotation bags;
  for (NodeId id : term.post_order()) {
    const ItdNode &n = term.node(id);
    const Instruction &ins = n.instruction;
    if (n.children.size() != ins.arity())
      throw ValidationError(where(id, n) + ": " + ins.name() + " expects " +
                            std::to_string(ins.arity()) + " children");
    Bag before = n.children.empty() ? Bag{} : bags.at(n.children[0]);
    switch (ins.op) {
    case Op::Leaf:
      break;
    case Op::IntroVertex:
      if (before.contains(ins.a))
        throw ValidationError(where(id, n) + ": IntroVertex of active label " +
                              std::to_string(ins.a));
      break;
    case Op::ForgetVertex:
      if (!before.contains(ins.a))
        throw ValidationError(where(id, n) + ": ForgetVertex of inactive label " +
                              std::to_string(ins.a));
      break;
    case Op::IntroEdge:
      if (ins.a == ins.b)
        throw ValidationError(where(id, n) + ": IntroEdge with equal labels");
      if (!before.contains(ins.a) || !before.contains(ins.b))
        throw ValidationError(where(id, n) + ": IntroEdge on inactive label");
      break;
    case Op::Join: {
      Bag other = bags.at(n.children[1]);
      if (!(before == other)) {
        std::ostringstream os;
        os << where(id, n) << ": Join of unequal bags " << before << " and " << other;
        throw ValidationError(os.str());
      }
      break;
    }
    }
    Bag after = bag_after(ins, before);
    if (after.size() > max_bag)
      throw ValidationError(where(id, n) + ": " + std::to_string(after.size()) +
                            " active labels exceed the bound " + std::to_string(max_bag));
    bags.emplace(id, after);
  }
  return bags;
}

} // namespace

ActiveLabelAnnotation validate(const ItdTerm &term, unsigned k) {
  if (term.empty())
    throw ValidationError("empty term");
  if (term.max_label() > k + 1)
    for (const auto &[id, n] : term.nodes())
      if (std::max(n.instruction.a, n.instruction.b) > k + 1)
        throw ValidationError(where(id, n) + ": label outside 1.." + std::to_string(k + 1));
  return compute_bags(term, k + 1);
}

ActiveLabelAnnotation annotate(const ItdTerm &term) { return validate(term, kMaxLabel - 1); }

ItdEvaluation evaluate(const ItdTerm &term) {
  using Slots = std::array<std::size_t, kMaxLabel + 1>; // label -> provisional vertex
  std::map<NodeId, Slots> slots;
  std::map<NodeId, Bag> bags;
  std::vector<std::size_t> parent; // union-find over provisional vertices
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  auto find = [&](std::size_t v) {
    while (parent[v] != v)
      v = parent[v] = parent[parent[v]];
    return v;
  };

  std::vector<NodeId> order = term.post_order();
  for (NodeId id : order) {
    const ItdNode &n = term.node(id);
    const Instruction &ins = n.instruction;
    Slots s{};
    Bag bag;
    if (!n.children.empty()) {
      s = slots.at(n.children[0]);
      bag = bags.at(n.children[0]);
    }
    switch (ins.op) {
    case Op::Leaf:
      break;
    case Op::IntroVertex:
      s[ins.a] = parent.size();
      parent.push_back(parent.size());
      bag.insert(ins.a);
      break;
    case Op::IntroEdge:
      edges.emplace_back(s[ins.a], s[ins.b]);
      break;
    case Op::ForgetVertex:
      bag.erase(ins.a);
      break;
    case Op::Join: {
      const Slots &other = slots.at(n.children[1]);
      bag.for_each([&](Label l) {
        std::size_t x = find(s[l]);
        std::size_t y = find(other[l]);
        if (x != y)
          parent[std::max(x, y)] = std::min(x, y);
      });
      break;
    }
    }
    slots.emplace(id, s);
    bags.emplace(id, bag);
  }

  // Representatives are the earliest-created members; number them densely.
  std::vector<Vertex> final_id(parent.size(), 0);
  Vertex next = 0;
  for (std::size_t v = 0; v < parent.size(); ++v)
    if (find(v) == v)
      final_id[v] = ++next;

  ItdEvaluation out;
  out.graph = MultiGraph(next);
  for (auto [x, y] : edges)
    out.graph.add_edge(final_id[find(x)], final_id[find(y)]);
  for (NodeId id : order) {
    auto &m = out.label_maps[id];
    const Slots &s = slots.at(id);
    bags.at(id).for_each([&](Label l) { m[l] = final_id[find(s[l])]; });
  }
  return out;
}

ItdTerm normalize_trailing_forgets(const ItdTerm &term) {
  ActiveLabelAnnotation bags = annotate(term);
  ItdTerm out = term;
  NodeId top = term.root();
  for (Label l : bags.at(top).elements())
    top = out.add(Instruction::forget_vertex(l), {top});
  out.set_root(top);
  return out;
}

ItdTerm relabel(const ItdTerm &term, const LabelMap &map) {
  ItdTerm out;
  for (const auto &[id, node] : term.nodes()) {
    ItdNode copy = node;
    copy.instruction = node.instruction.relabeled(map);
    out.insert(id, std::move(copy));
  }
  out.set_root(term.root());
  return out;
}

} // namespace widzard
