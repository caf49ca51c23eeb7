#pragma once

// Brute-force reference implementations used by the unit, property and
// acceptance tests. Everything here is exponential and meant for graphs with
// at most eight vertices.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "widzard/graph.hpp"
#include "widzard/itd.hpp"
#include "widzard/pace.hpp"

#ifndef WIDZARD_TEST_DATA
#define WIDZARD_TEST_DATA "tests/data"
#endif

namespace oracle {

using namespace widzard;

inline std::string data_path(const std::string &name) {
  return std::string(WIDZARD_TEST_DATA) + "/" + name;
}

inline std::string read_data(const std::string &name) {
  std::ifstream in(data_path(name), std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Simple-view adjacency as bitmasks over 0-based vertices.
inline std::vector<std::uint32_t> adjacency(const MultiGraph &g) {
  std::vector<std::uint32_t> adj(g.vertex_count(), 0);
  for (const auto &[e, m] : g.edges()) {
    (void)m;
    adj[e.first - 1] |= 1u << (e.second - 1);
    adj[e.second - 1] |= 1u << (e.first - 1);
  }
  return adj;
}

inline bool colorable(const MultiGraph &g, unsigned c) {
  const auto adj = adjacency(g);
  const std::size_t n = adj.size();
  std::vector<int> colour(n, -1);
  std::function<bool(std::size_t)> place = [&](std::size_t v) {
    if (v == n)
      return true;
    for (unsigned col = 0; col < c; ++col) {
      bool ok = true;
      for (std::size_t u = 0; u < v && ok; ++u)
        if (((adj[v] >> u) & 1u) && colour[u] == static_cast<int>(col))
          ok = false;
      if (!ok)
        continue;
      colour[v] = static_cast<int>(col);
      if (place(v + 1))
        return true;
    }
    colour[v] = -1;
    return false;
  };
  return place(0);
}

inline unsigned chromatic_number(const MultiGraph &g) {
  unsigned c = 0;
  while (!colorable(g, c))
    ++c;
  return c;
}

inline unsigned independence_number(const MultiGraph &g) {
  const auto adj = adjacency(g);
  const std::size_t n = adj.size();
  unsigned best = 0;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    bool ok = true;
    for (std::size_t v = 0; v < n && ok; ++v)
      if (((s >> v) & 1u) && (adj[v] & s))
        ok = false;
    if (ok)
      best = std::max(best, static_cast<unsigned>(std::popcount(s)));
  }
  return best;
}

/// Treewidth by dynamic programming over elimination prefixes: tw(S) is the
/// best width of eliminating S first. Optionally returns an optimal order.
inline unsigned treewidth(const MultiGraph &g, std::vector<unsigned> *order = nullptr) {
  const auto adj = adjacency(g);
  const std::size_t n = adj.size();
  if (n == 0)
    return 0;
  const std::uint32_t full = (1u << n) - 1;
  // Vertices outside S + v reachable from v through S.
  auto q = [&](std::uint32_t s, unsigned v) {
    std::uint32_t seen = 1u << v, frontier = 1u << v, outside = 0;
    while (frontier) {
      unsigned u = static_cast<unsigned>(std::countr_zero(frontier));
      frontier &= frontier - 1;
      std::uint32_t nb = adj[u] & ~seen;
      seen |= nb;
      outside |= nb & ~s;
      frontier |= nb & s;
    }
    return static_cast<unsigned>(std::popcount(outside));
  };
  std::vector<unsigned> tw(full + 1, 0), choice(full + 1, 0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    unsigned best = ~0u;
    for (std::uint32_t m = s; m; m &= m - 1) {
      unsigned v = static_cast<unsigned>(std::countr_zero(m));
      std::uint32_t rest = s & ~(1u << v);
      unsigned w = std::max(rest ? tw[rest] : 0u, q(rest, v));
      if (w < best) {
        best = w;
        choice[s] = v;
      }
    }
    tw[s] = best;
  }
  if (order) {
    order->clear();
    for (std::uint32_t s = full; s; s &= ~(1u << choice[s]))
      order->push_back(choice[s]);
    std::reverse(order->begin(), order->end());
  }
  return tw[full];
}

/// Decomposition built from an optimal elimination order; its width equals
/// treewidth(g).
inline TreeDecomposition optimal_decomposition(const MultiGraph &g) {
  TreeDecomposition td;
  const std::size_t n = g.vertex_count();
  td.vertex_count = n;
  if (n == 0) {
    td.bag_count = 1;
    td.bags[1] = {};
    return td;
  }
  std::vector<unsigned> order;
  treewidth(g, &order);
  std::vector<std::uint32_t> adj = adjacency(g);
  std::vector<std::size_t> position(n);
  for (std::size_t i = 0; i < n; ++i)
    position[order[i]] = i;
  std::uint32_t eliminated = 0;
  std::vector<std::size_t> parent(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    unsigned v = order[i];
    std::uint32_t later = adj[v] & ~eliminated & ~(1u << v);
    std::set<Vertex> bag{v + 1};
    std::size_t first = n;
    for (std::uint32_t m = later; m; m &= m - 1) {
      unsigned u = static_cast<unsigned>(std::countr_zero(m));
      bag.insert(u + 1);
      first = std::min(first, position[u]);
      adj[u] |= later & ~(1u << u); // fill in
    }
    eliminated |= 1u << v;
    td.bags[i + 1] = bag;
    td.max_bag_size = std::max(td.max_bag_size, bag.size());
    // Bags without a later neighbour hang below the last bag.
    parent[i] = first == n ? n - 1 : first;
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    td.tree_edges.insert({std::min(i, parent[i]) + 1, std::max(i, parent[i]) + 1});
  td.bag_count = n;
  return td;
}

/// Exact multigraph isomorphism by trying every vertex bijection.
inline bool isomorphic(const MultiGraph &a, const MultiGraph &b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() ||
      a.distinct_edge_count() != b.distinct_edge_count() ||
      degree_sequence(a) != degree_sequence(b))
    return false;
  std::vector<Vertex> perm(a.vertex_count());
  std::iota(perm.begin(), perm.end(), Vertex{1});
  do {
    bool ok = true;
    for (const auto &[e, m] : a.edges())
      if (b.multiplicity(perm[e.first - 1], perm[e.second - 1]) != m) {
        ok = false;
        break;
      }
    if (ok)
      return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

inline bool contains_k5(const MultiGraph &g) {
  const auto adj = adjacency(g);
  const std::size_t n = adj.size();
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if (std::popcount(s) != 5)
      continue;
    bool clique = true;
    for (std::uint32_t m = s; m && clique; m &= m - 1) {
      unsigned v = static_cast<unsigned>(std::countr_zero(m));
      if ((adj[v] & s) != (s & ~(1u << v)))
        clique = false;
    }
    if (clique)
      return true;
  }
  return false;
}

/// Every simple graph on exactly n vertices (labelled), 2^(n choose 2) of them.
inline std::vector<MultiGraph> all_graphs(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex u = 1; u <= n; ++u)
    for (Vertex v = u + 1; v <= n; ++v)
      pairs.push_back({u, v});
  std::vector<MultiGraph> out;
  for (std::uint64_t m = 0; m < (1ull << pairs.size()); ++m) {
    MultiGraph g(n);
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if ((m >> i) & 1u)
        g.add_edge(pairs[i].first, pairs[i].second);
    out.push_back(std::move(g));
  }
  return out;
}

inline MultiGraph random_connected_graph(std::mt19937 &rng, std::size_t n, double p) {
  MultiGraph g(n);
  for (Vertex v = 2; v <= n; ++v)
    g.add_edge(std::uniform_int_distribution<Vertex>(1, v - 1)(rng), v);
  std::bernoulli_distribution coin(p);
  for (Vertex u = 1; u <= n; ++u)
    for (Vertex v = u + 1; v <= n; ++v)
      if (!g.adjacent(u, v) && coin(rng))
        g.add_edge(u, v);
  return g;
}

/// A term under construction with its current bag and vertex count.
struct Partial {
  ItdTerm term;
  Bag bag;
  std::size_t vertices = 0;
};

inline void push(Partial &p, Instruction ins) {
  std::vector<NodeId> children;
  if (!p.term.empty())
    children.push_back(p.term.root());
  p.term.add(ins, children);
  if (ins.op == Op::IntroVertex)
    ++p.vertices;
  p.bag = bag_after(ins, p.bag);
}

inline Partial join(Partial a, const Partial &b) {
  NodeId offset = a.term.max_id();
  for (const auto &[id, node] : b.term.nodes()) {
    ItdNode copy = node;
    for (auto &c : copy.children)
      c += offset;
    a.term.insert(id + offset, copy);
  }
  a.term.add(Instruction::join(), {a.term.root(), b.term.root() + offset});
  a.vertices += b.vertices - b.bag.size();
  return a;
}

/// Random valid ITD of width k with roughly `steps` unary instructions; may
/// contain joins of subterms. `max_vertices` bounds each chain, and a join
/// can exceed it slightly, so callers filter on the evaluated graph. With
/// `close` the root bag is emptied by trailing forgets.
inline Partial random_itd(std::mt19937 &rng, unsigned k, std::size_t steps,
                          std::size_t max_vertices, bool close = true) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto unary = [&](Partial &p) {
    std::vector<Instruction> options;
    for (Label l = 1; l <= k + 1; ++l) {
      if (!p.bag.contains(l) && p.vertices < max_vertices)
        options.push_back(Instruction::intro_vertex(l));
      if (p.bag.contains(l))
        options.push_back(Instruction::forget_vertex(l));
      for (Label m = l + 1; m <= k + 1; ++m)
        if (p.bag.contains(l) && p.bag.contains(m)) {
          options.push_back(Instruction::intro_edge(l, m));
          options.push_back(Instruction::intro_edge(l, m));
        }
    }
    if (!options.empty())
      push(p, options[pick(options.size())]);
  };
  std::function<Partial(std::size_t, std::size_t)> build = [&](std::size_t n, std::size_t mv) {
    Partial p;
    if (n >= 6 && mv >= 2 && pick(3) == 0) {
      std::size_t left_steps = 1 + pick(n / 2);
      Partial a = build(left_steps, mv - 1);
      Partial b = build(n - left_steps, std::max<std::size_t>(1, mv - a.vertices + a.bag.size()));
      // Forget labels the operands do not share, then join.
      for (Label l : a.bag.elements())
        if (!b.bag.contains(l))
          push(a, Instruction::forget_vertex(l));
      for (Label l : b.bag.elements())
        if (!a.bag.contains(l))
          push(b, Instruction::forget_vertex(l));
      return join(a, b);
    }
    push(p, Instruction::leaf());
    for (std::size_t i = 0; i < n; ++i)
      unary(p);
    return p;
  };
  Partial p = build(steps, max_vertices);
  if (close)
    for (Label l : p.bag.elements())
    push(p, Instruction::forget_vertex(l));
  return p;
}

} // namespace oracle
