#include "widzard/pace.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <numeric>
#include <sstream>

#include "widzard/errors.hpp"

namespace widzard {

namespace {

constexpr std::uint64_t kMaxCount = 1u << 24;

struct Line {
  std::size_t number;
  std::vector<std::string_view> tokens;
};

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
      ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])))
      ++j;
    if (j > i)
      out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

/// Non-empty, non-comment lines.
std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos)
      end = text.size();
    ++number;
    auto tokens = split_ws(text.substr(start, end - start));
    if (!tokens.empty() && tokens[0][0] != 'c')
      out.push_back({number, std::move(tokens)});
    if (end == text.size())
      break;
    start = end + 1;
  }
  return out;
}

std::uint64_t to_uint(std::string_view tok, std::size_t line, const char *what) {
  std::uint64_t value = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ParseError(line, std::string("expected ") + what + ", got '" + std::string(tok) + "'");
  return value;
}

} // namespace

std::size_t TreeDecomposition::width() const {
  std::size_t m = 0;
  for (const auto &[id, bag] : bags)
    m = std::max(m, bag.size());
  return m == 0 ? 0 : m - 1;
}

MultiGraph parse_gr(std::string_view text) {
  auto lines = content_lines(text);
  if (lines.empty())
    throw ParseError(1, "missing 'p tw' header");
  const Line &header = lines.front();
  if (header.tokens.size() != 4 || header.tokens[0] != "p" || header.tokens[1] != "tw")
    throw ParseError(header.number, "first non-comment line must be 'p tw <n> <m>'");
  std::uint64_t n = to_uint(header.tokens[2], header.number, "vertex count");
  std::uint64_t m = to_uint(header.tokens[3], header.number, "edge count");
  if (n > kMaxCount || m > kMaxCount)
    throw ParseError(header.number, "graph too large");

  MultiGraph g(n);
  std::uint64_t seen = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line &l = lines[i];
    if (l.tokens[0] == "p")
      throw ParseError(l.number, "duplicate header");
    if (l.tokens.size() != 2)
      throw ParseError(l.number, "edge line must contain exactly two vertices");
    std::uint64_t u = to_uint(l.tokens[0], l.number, "vertex");
    std::uint64_t v = to_uint(l.tokens[1], l.number, "vertex");
    if (u < 1 || v < 1 || u > n || v > n)
      throw ParseError(l.number, "vertex outside 1.." + std::to_string(n));
    if (u == v)
      throw ParseError(l.number, "self-loop on vertex " + std::to_string(u));
    if (++seen > m)
      throw ParseError(l.number, "more edges than the header declares (" + std::to_string(m) + ")");
    g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  if (seen != m)
    throw ParseError(header.number, "header declares " + std::to_string(m) + " edges, found " +
                                        std::to_string(seen));
  return g;
}

TreeDecomposition parse_td(std::string_view text) {
  auto lines = content_lines(text);
  if (lines.empty())
    throw ParseError(1, "missing 's td' header");
  const Line &header = lines.front();
  if (header.tokens.size() != 5 || header.tokens[0] != "s" || header.tokens[1] != "td")
    throw ParseError(header.number, "first non-comment line must be 's td <N> <w> <n>'");
  TreeDecomposition td;
  std::uint64_t N = to_uint(header.tokens[2], header.number, "bag count");
  std::uint64_t w = to_uint(header.tokens[3], header.number, "maximum bag size");
  std::uint64_t n = to_uint(header.tokens[4], header.number, "vertex count");
  if (N > kMaxCount || w > kMaxCount || n > kMaxCount)
    throw ParseError(header.number, "decomposition too large");
  td.bag_count = N;
  td.max_bag_size = w;
  td.vertex_count = n;

  std::vector<std::size_t> dsu(N + 1);
  std::iota(dsu.begin(), dsu.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (dsu[x] != x)
      x = dsu[x] = dsu[dsu[x]];
    return x;
  };

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line &l = lines[i];
    if (l.tokens[0] == "s")
      throw ParseError(l.number, "duplicate header");
    if (l.tokens[0] == "b") {
      if (l.tokens.size() < 2)
        throw ParseError(l.number, "bag line needs a bag id");
      std::uint64_t id = to_uint(l.tokens[1], l.number, "bag id");
      if (id < 1 || id > N)
        throw ParseError(l.number, "bag id outside 1.." + std::to_string(N));
      if (td.bags.count(id))
        throw ParseError(l.number, "duplicate bag id " + std::to_string(id));
      std::set<Vertex> bag;
      for (std::size_t t = 2; t < l.tokens.size(); ++t) {
        std::uint64_t v = to_uint(l.tokens[t], l.number, "vertex");
        if (v < 1 || v > n)
          throw ParseError(l.number, "vertex outside 1.." + std::to_string(n));
        if (!bag.insert(static_cast<Vertex>(v)).second)
          throw ParseError(l.number, "vertex " + std::to_string(v) + " repeated in bag");
      }
      if (bag.size() > w)
        throw ParseError(l.number, "bag larger than the declared maximum " + std::to_string(w));
      td.bags.emplace(id, std::move(bag));
      continue;
    }
    if (l.tokens.size() != 2)
      throw ParseError(l.number, "tree edge line must contain exactly two bag ids");
    std::uint64_t a = to_uint(l.tokens[0], l.number, "bag id");
    std::uint64_t b = to_uint(l.tokens[1], l.number, "bag id");
    if (a < 1 || b < 1 || a > N || b > N)
      throw ParseError(l.number, "bag id outside 1.." + std::to_string(N));
    if (a == b)
      throw ParseError(l.number, "tree edge from a bag to itself");
    std::size_t ra = find(a), rb = find(b);
    if (ra == rb)
      throw ParseError(l.number, "tree edges contain a cycle");
    dsu[ra] = rb;
    td.tree_edges.emplace(std::min(a, b), std::max(a, b));
  }

  for (std::size_t id = 1; id <= N; ++id)
    if (!td.bags.count(id))
      throw ParseError(header.number, "bag " + std::to_string(id) + " is never defined");
  if (N > 0 && td.tree_edges.size() != N - 1)
    throw ParseError(header.number, "tree edges do not connect all " + std::to_string(N) + " bags");
  return td;
}

std::string write_gr(const MultiGraph &g) {
  std::ostringstream os;
  os << "c generated by widzard\n";
  os << "p tw " << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const auto &[edge, mult] : g.edges())
    for (std::size_t i = 0; i < mult; ++i)
      os << edge.first << ' ' << edge.second << '\n';
  return os.str();
}

std::string write_td(const TreeDecomposition &td) {
  std::ostringstream os;
  os << "c generated by widzard\n";
  os << "s td " << td.bag_count << ' ' << td.max_bag_size << ' ' << td.vertex_count << '\n';
  for (const auto &[id, bag] : td.bags) {
    os << "b " << id;
    for (Vertex v : bag)
      os << ' ' << v;
    os << '\n';
  }
  for (const auto &[a, b] : td.tree_edges)
    os << a << ' ' << b << '\n';
  return os.str();
}

std::optional<TdViolation> validate_td(const MultiGraph &g, const TreeDecomposition &td) {
  using K = TdViolation::Kind;
  if (td.vertex_count != g.vertex_count())
    return TdViolation{K::VertexCount, "decomposition declares " + std::to_string(td.vertex_count) +
                                           " vertices, graph has " +
                                           std::to_string(g.vertex_count())};

  std::vector<std::vector<std::size_t>> holders(g.vertex_count() + 1);
  for (const auto &[id, bag] : td.bags)
    for (Vertex v : bag)
      holders[v].push_back(id);

  for (Vertex v = 1; v <= g.vertex_count(); ++v)
    if (holders[v].empty())
      return TdViolation{K::VertexCoverage, "vertex " + std::to_string(v) + " is in no bag"};

  for (const auto &[edge, mult] : g.edges()) {
    bool covered = false;
    for (std::size_t id : holders[edge.first])
      if (td.bags.at(id).count(edge.second)) {
        covered = true;
        break;
      }
    if (!covered)
      return TdViolation{K::EdgeCoverage, "edge {" + std::to_string(edge.first) + "," +
                                              std::to_string(edge.second) + "} is in no bag"};
  }

  // Bags holding v must induce a connected subtree: in a forest, a vertex set
  // with c members is connected iff it spans c-1 tree edges.
  std::vector<std::size_t> inner(g.vertex_count() + 1, 0);
  for (const auto &[a, b] : td.tree_edges) {
    const auto &ba = td.bags.at(a);
    const auto &bb = td.bags.at(b);
    for (Vertex v : ba)
      if (bb.count(v))
        ++inner[v];
  }
  for (Vertex v = 1; v <= g.vertex_count(); ++v)
    if (inner[v] + 1 != holders[v].size())
      return TdViolation{K::Connectivity,
                         "bags containing vertex " + std::to_string(v) + " are not connected"};
  return std::nullopt;
}

ItdTerm td_to_itd(const MultiGraph &g, const TreeDecomposition &td, unsigned k) {
  if (auto violation = validate_td(g, td))
    throw ValidationError("invalid tree decomposition: " + violation->message);
  std::size_t largest = 0;
  for (const auto &[id, bag] : td.bags)
    largest = std::max(largest, bag.size());
  if (largest > static_cast<std::size_t>(k) + 1)
    throw ValidationError("decomposition width " + std::to_string(largest - 1) +
                          " exceeds the requested width " + std::to_string(k));

  ItdTerm term;
  if (td.bag_count == 0) {
    term.add(Instruction::leaf());
    return term;
  }

  const std::size_t N = td.bag_count;
  std::vector<std::vector<std::size_t>> adj(N + 1);
  for (const auto &[a, b] : td.tree_edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }

  // Root at bag 1, children in ascending id order.
  std::vector<std::size_t> parent(N + 1, 0);
  std::vector<std::vector<std::size_t>> children(N + 1);
  std::vector<std::size_t> preorder{1};
  parent[1] = 1;
  for (std::size_t i = 0; i < preorder.size(); ++i) {
    std::size_t x = preorder[i];
    std::sort(adj[x].begin(), adj[x].end());
    for (std::size_t y : adj[x])
      if (parent[y] == 0) {
        parent[y] = x;
        children[x].push_back(y);
        preorder.push_back(y);
      }
  }

  // Labels are fixed top-down so that every Join sees the same assignment.
  std::vector<std::map<Vertex, Label>> label(N + 1);
  for (std::size_t x : preorder) {
    Bag used;
    auto &lx = label[x];
    if (x != 1)
      for (Vertex v : td.bags.at(x)) {
        auto it = label[parent[x]].find(v);
        if (it != label[parent[x]].end()) {
          lx[v] = it->second;
          used.insert(it->second);
        }
      }
    Label next = 1;
    for (Vertex v : td.bags.at(x)) {
      if (lx.count(v))
        continue;
      while (used.contains(next))
        ++next;
      lx[v] = next;
      used.insert(next);
    }
  }

  // Post-order of the decomposition tree.
  std::vector<std::size_t> postorder;
  {
    std::vector<std::pair<std::size_t, std::size_t>> stack{{1, 0}};
    while (!stack.empty()) {
      auto &[x, next] = stack.back();
      if (next < children[x].size()) {
        std::size_t c = children[x][next++];
        stack.emplace_back(c, 0);
      } else {
        postorder.push_back(x);
        stack.pop_back();
      }
    }
  }

  // Each edge goes to the first bag in post-order that holds both endpoints.
  std::vector<std::vector<std::pair<MultiGraph::Edge, std::size_t>>> edges_at(N + 1);
  {
    std::set<MultiGraph::Edge> placed;
    for (std::size_t x : postorder) {
      const auto &bag = td.bags.at(x);
      for (auto i = bag.begin(); i != bag.end(); ++i)
        for (auto j = std::next(i); j != bag.end(); ++j) {
          std::size_t mult = g.multiplicity(*i, *j);
          if (mult > 0 && placed.insert({*i, *j}).second)
            edges_at[x].push_back({{*i, *j}, mult});
        }
    }
  }

  std::vector<NodeId> top(N + 1, 0);

  for (std::size_t x : postorder) {
    const auto &bag = td.bags.at(x);
    const auto &lx = label[x];
    // Forget what leaves, then introduce what enters; when place_edges is set,
    // x's edges follow right after their second endpoint appears.
    auto build_branch = [&](NodeId cur, const std::set<Vertex> &from,
                            const std::map<Vertex, Label> &from_labels, bool place_edges) {
      std::set<Vertex> active;
      for (Vertex v : from) {
        if (bag.count(v))
          active.insert(v);
        else
          cur = term.add(Instruction::forget_vertex(from_labels.at(v)), {cur});
      }
      for (Vertex v : bag) {
        if (active.count(v))
          continue;
        cur = term.add(Instruction::intro_vertex(lx.at(v)), {cur});
        active.insert(v);
        if (!place_edges)
          continue;
        for (const auto &[edge, mult] : edges_at[x]) {
          Vertex other = edge.first == v ? edge.second : edge.second == v ? edge.first : 0;
          if (other == 0 || !active.count(other))
            continue;
          for (std::size_t m = 0; m < mult; ++m)
            cur = term.add(Instruction::intro_edge(lx.at(edge.first), lx.at(edge.second)), {cur});
        }
      }
      return cur;
    };

    NodeId cur;
    if (children[x].empty()) {
      cur = build_branch(term.add(Instruction::leaf()), {}, {}, true);
    } else {
      std::size_t c1 = children[x][0];
      cur = build_branch(top[c1], td.bags.at(c1), label[c1], true);
      for (std::size_t i = 1; i < children[x].size(); ++i) {
        std::size_t c = children[x][i];
        NodeId other = build_branch(top[c], td.bags.at(c), label[c], false);
        cur = term.add(Instruction::join(), {cur, other});
      }
    }
    top[x] = cur;
  }

  term.set_root(top[1]);
  return normalize_trailing_forgets(term);
}

TreeDecomposition itd_to_td(const ItdTerm &term, const ItdEvaluation &eval) {
  std::vector<NodeId> order = term.post_order();
  std::map<NodeId, std::set<Vertex>> vbag;
  for (NodeId id : order) {
    auto &s = vbag[id];
    for (const auto &[l, v] : eval.label_maps.at(id))
      s.insert(v);
  }

  // Adjacent nodes whose bags are nested are contracted into the larger bag.
  std::map<NodeId, NodeId> rep;
  std::function<NodeId(NodeId)> find = [&](NodeId x) {
    while (rep.at(x) != x)
      x = rep[x] = rep.at(rep.at(x));
    return x;
  };
  for (NodeId id : order)
    rep[id] = id;
  auto subset = [](const std::set<Vertex> &a, const std::set<Vertex> &b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (NodeId id : order)
      for (NodeId c : term.node(id).children) {
        NodeId a = find(id), b = find(c);
        if (a == b)
          continue;
        if (subset(vbag.at(b), vbag.at(a))) {
          rep[b] = a;
          changed = true;
        } else if (subset(vbag.at(a), vbag.at(b))) {
          rep[a] = b;
          changed = true;
        }
      }
  }

  TreeDecomposition td;
  td.vertex_count = eval.graph.vertex_count();
  std::map<NodeId, std::size_t> bag_id;
  for (NodeId id : order) {
    NodeId r = find(id);
    if (!bag_id.count(r)) {
      bag_id[r] = bag_id.size() + 1;
      td.bags[bag_id[r]] = vbag.at(r);
      td.max_bag_size = std::max(td.max_bag_size, vbag.at(r).size());
    }
  }
  for (NodeId id : order)
    for (NodeId c : term.node(id).children) {
      std::size_t a = bag_id.at(find(id)), b = bag_id.at(find(c));
      if (a != b)
        td.tree_edges.emplace(std::min(a, b), std::max(a, b));
    }
  td.bag_count = td.bags.size();
  return td;
}

} // namespace widzard
