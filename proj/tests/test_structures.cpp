#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "widzard/errors.hpp"

using namespace widzard;

namespace {

MultiGraph diamond() {
  MultiGraph g(4);
  g.add_edge(1, 2);
  g.add_edge(1, 3);
  g.add_edge(2, 3);
  g.add_edge(2, 4);
  g.add_edge(3, 4);
  return g;
}

MultiGraph path(std::size_t n) {
  MultiGraph g(n);
  for (Vertex v = 1; v < n; ++v)
    g.add_edge(v, v + 1);
  return g;
}

std::size_t parse_error_line(auto &&fn) {
  try {
    fn();
  } catch (const ParseError &e) {
    return e.line();
  }
  return 0;
}

} // namespace

TEST_SUITE("graph") {
  TEST_CASE("simple view collapses parallel edges") {
    MultiGraph g(3);
    g.add_edge(1, 2);
    g.add_edge(2, 1);
    g.add_edge(2, 3);
    CHECK(g.edge_count() == 3);
    CHECK(g.multiplicity(1, 2) == 2);
    MultiGraph s = simple_view(g);
    CHECK(s.vertex_count() == 3);
    CHECK(s.edge_count() == 2);
    CHECK(s.multiplicity(1, 2) == 1);
    CHECK(simple_view(s) == s);
    CHECK(simple_view(diamond()) == diamond());
    CHECK(simple_view(MultiGraph{}) == MultiGraph{});
  }

  TEST_CASE("duplicate then collapse equals the original view") {
    MultiGraph g = diamond();
    g.add_edge(4, 3);
    CHECK(simple_view(g) == simple_view(diamond()));
  }

  TEST_CASE("degree sequence") {
    CHECK(degree_sequence(diamond()) == std::vector<std::size_t>{3, 3, 2, 2});
    CHECK(degree_sequence(MultiGraph{}).empty());
    CHECK(degree_sequence(path(2)) == std::vector<std::size_t>{1, 1});
  }

  TEST_CASE("rejects loops and unknown endpoints") {
    MultiGraph g(2);
    CHECK_THROWS_AS(g.add_edge(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(1, 3), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(0, 1), std::invalid_argument);
  }

  TEST_CASE("equality ignores insertion order") {
    MultiGraph a(3), b(3);
    a.add_edge(1, 2);
    a.add_edge(2, 3);
    b.add_edge(3, 2);
    b.add_edge(2, 1);
    CHECK(a == b);
  }
}

TEST_SUITE("bag") {
  TEST_CASE("order is lexicographic on sorted elements") {
    CHECK(Bag{} < Bag{1});
    CHECK(Bag{1} < Bag{1, 2});
    CHECK(Bag{1, 2} < Bag{1, 3});
    CHECK(Bag{1, 3} < Bag{2});
    CHECK(Bag{1, 2, 3} < Bag{2});
    CHECK_FALSE(Bag{2} < Bag{2});
    std::vector<std::set<unsigned>> sets;
    std::vector<Bag> bags;
    for (std::uint32_t m = 0; m < 32; ++m) {
      Bag b = Bag::from_mask(m << 1);
      bags.push_back(b);
      auto e = b.elements();
      sets.emplace_back(e.begin(), e.end());
    }
    for (std::size_t i = 0; i < bags.size(); ++i)
      for (std::size_t j = 0; j < bags.size(); ++j)
        CHECK((bags[i] < bags[j]) == (sets[i] < sets[j]));
  }

  TEST_CASE("prefix and extremes") {
    CHECK(Bag::prefix(3) == Bag{1, 2, 3});
    CHECK(Bag::prefix(0).empty());
    CHECK(Bag{2, 5}.max_label() == 5);
    CHECK(Bag{2, 5}.min_label() == 2);
    CHECK(Bag{2, 5}.size() == 2);
  }

  TEST_CASE("label map completion and inverse") {
    LabelMap partial;
    partial.set(3, 1);
    partial.set(5, 2);
    LabelMap full = LabelMap::complete(Bag{3, 5}, partial);
    CHECK(full(3) == 1);
    CHECK(full(5) == 2);
    CHECK(full.apply(Bag{3, 5}) == Bag{1, 2});
    CHECK(full.compose(full.inverse()).is_identity());
    // every label still has a distinct image
    std::set<Label> images;
    for (Label l = 1; l <= kMaxLabel; ++l)
      images.insert(full(l));
    CHECK(images.size() == kMaxLabel);
  }
}

TEST_SUITE("itd") {
  TEST_CASE("diamond term") {
    ItdTerm t = parse_itd(oracle::read_data("diamond.itd"));
    CHECK(t.size() == 11);
    auto bags = validate(t, 2);
    CHECK(bags.at(t.root()) == Bag{1, 2, 3});
    MultiGraph g = evaluate(t).graph;
    CHECK(oracle::isomorphic(g, diamond()));
    CHECK_THROWS_AS(validate(t, 1), ValidationError);
  }

  TEST_CASE("two triangles sharing an edge") {
    ItdTerm t = parse_itd(oracle::read_data("two_triangles.itd"));
    CHECK(t.size() == 16);
    CHECK(t.node(12).instruction == Instruction::join());
    CHECK(t.node(12).children == std::vector<NodeId>{6, 11});
    validate(t, 2);
    CHECK(oracle::isomorphic(simple_view(evaluate(t).graph), diamond()));
    std::string text = serialize_itd(t);
    CHECK(std::count(text.begin(), text.end(), '\n') == 16);
    CHECK(text.find("Join(") != std::string::npos);
  }

  TEST_CASE("leaf") {
    ItdTerm t = parse_itd("1 Leaf\n");
    CHECK(serialize_itd(t) == "1 Leaf\n");
    CHECK(evaluate(t).graph == MultiGraph{});
    CHECK(structurally_equal(normalize_trailing_forgets(t), t));
  }

  TEST_CASE("round trip") {
    for (const char *name : {"diamond.itd", "two_triangles.itd"}) {
      ItdTerm t = parse_itd(oracle::read_data(name));
      ItdTerm u = parse_itd(serialize_itd(t));
      CHECK(structurally_equal(t, u));
      CHECK(serialize_itd(u) == serialize_itd(t));
    }
  }

  TEST_CASE("ids need not be ordered") {
    ItdTerm t = parse_itd("7 IntroVertex_1(3)\n3 Leaf\n9 IntroVertex_2(7)\n 4   IntroEdge_1_2( 9 )\n");
    CHECK(t.root() == 4);
    CHECK(evaluate(t).graph == path(2));
  }

  TEST_CASE("parse errors carry the line") {
    CHECK(parse_error_line([] { parse_itd("1 Leaf\n2 IntroVertex_1(1\n"); }) == 2);
    CHECK(parse_error_line([] { parse_itd("1 Leaf\n2 Frobnicate(1)\n"); }) == 2);
    CHECK(parse_error_line([] { parse_itd("1 Leaf\n1 Leaf\n"); }) == 2);
    CHECK(parse_error_line([] { parse_itd("1 Leaf\n2 IntroVertex_1(5)\n"); }) == 2);
    CHECK(parse_error_line([] { parse_itd("1 Leaf\n2 Leaf\n"); }) >= 1);
    CHECK(parse_error_line([] { parse_itd(""); }) == 1);
    CHECK(parse_error_line([] { parse_itd("1 Leaf\n2 Join(1)\n"); }) == 2);
    CHECK(parse_error_line([] { parse_itd("1 Leaf\n2 IntroVertex_0(1)\n"); }) == 2);
    CHECK(parse_error_line([] { parse_itd("1 Leaf\n2 IntroVertex_1(1) x\n"); }) == 2);
  }

  TEST_CASE("validation errors") {
    CHECK_THROWS_AS(validate(parse_itd("1 Leaf\n2 IntroVertex_1(1)\n3 IntroVertex_1(2)\n"), 1),
                    ValidationError);
    CHECK_THROWS_AS(validate(parse_itd("1 Leaf\n2 ForgetVertex_1(1)\n"), 1), ValidationError);
    CHECK_THROWS_AS(validate(parse_itd("1 Leaf\n2 IntroVertex_1(1)\n3 IntroEdge_1_2(2)\n"), 1),
                    ValidationError);
    CHECK_THROWS_AS(validate(parse_itd("1 Leaf\n2 IntroVertex_1(1)\n3 Leaf\n4 Join(2,3)\n"), 1),
                    ValidationError);
    CHECK_THROWS_AS(validate(parse_itd("1 Leaf\n2 IntroVertex_3(1)\n"), 1), ValidationError);
    try {
      validate(parse_itd("1 Leaf\n2 ForgetVertex_2(1)\n"), 1);
      FAIL("expected a validation error");
    } catch (const ValidationError &e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }

  TEST_CASE("normalize closes the root bag") {
    ItdTerm t = parse_itd(oracle::read_data("diamond.itd"));
    ItdTerm n = normalize_trailing_forgets(t);
    CHECK(n.size() == t.size() + 3);
    CHECK(annotate(n).at(n.root()).empty());
    CHECK(evaluate(n).graph == evaluate(t).graph);
    validate(n, 2);
    CHECK(structurally_equal(normalize_trailing_forgets(n), n));
  }

  TEST_CASE("evaluation is deterministic and join identifies labels") {
    ItdTerm t = parse_itd(oracle::read_data("two_triangles.itd"));
    auto a = evaluate(t), b = evaluate(t);
    CHECK(a.graph == b.graph);
    CHECK(a.label_maps == b.label_maps);
    CHECK(a.graph.vertex_count() == 4);
  }

  TEST_CASE("relabel keeps the graph") {
    ItdTerm t = parse_itd(oracle::read_data("two_triangles.itd"));
    LabelMap m;
    m.set(1, 3);
    m.set(3, 1);
    ItdTerm r = relabel(t, m);
    validate(r, 2);
    CHECK(evaluate(r).graph == evaluate(t).graph);
  }

  TEST_CASE("treewidth bound on every small term") {
    // All terms with at most 8 instructions and width k. Terms are merged when
    // their root bag, root label map and graph coincide: such terms extend
    // identically, so the set of reachable graphs is unchanged.
    for (unsigned k = 0; k <= 2; ++k) {
      struct Entry {
        ItdTerm term;
        Bag bag;
      };
      std::vector<std::vector<Entry>> by_size(9);
      std::set<std::string> seen;
      std::size_t graphs_checked = 0;
      auto consider = [&](ItdTerm t, std::size_t size) {
        auto bags = annotate(t);
        auto ev = evaluate(t);
        std::ostringstream key;
        key << bags.at(t.root()).mask() << '|';
        for (auto [l, v] : ev.label_maps.at(t.root()))
          key << l << ':' << v << ',';
        key << '|' << ev.graph.vertex_count();
        for (auto &[e, mult] : ev.graph.edges())
          key << ' ' << e.first << '-' << e.second << 'x' << mult;
        if (!seen.insert(key.str()).second)
          return;
        CHECK(bags.at(t.root()).size() <= k + 1);
        CHECK(oracle::treewidth(simple_view(ev.graph)) <= k);
        ++graphs_checked;
        const Bag root_bag = bags.at(t.root());
        by_size[size].push_back({std::move(t), root_bag});
      };
      ItdTerm leaf;
      leaf.add(Instruction::leaf());
      consider(leaf, 1);
      for (std::size_t size = 2; size <= 8; ++size) {
        for (const Entry &e : by_size[size - 1]) {
          std::vector<Instruction> next;
          for (Label l = 1; l <= k + 1; ++l) {
            next.push_back(e.bag.contains(l) ? Instruction::forget_vertex(l)
                                             : Instruction::intro_vertex(l));
            for (Label m = l + 1; m <= k + 1; ++m)
              if (e.bag.contains(l) && e.bag.contains(m))
                next.push_back(Instruction::intro_edge(l, m));
          }
          for (const Instruction &ins : next) {
            ItdTerm t = e.term;
            t.add(ins, {t.root()});
            consider(std::move(t), size);
          }
        }
        for (std::size_t a = 1; a + 1 < size; ++a) {
          std::size_t b = size - 1 - a;
          for (const Entry &x : by_size[a])
            for (const Entry &y : by_size[b]) {
              if (x.bag != y.bag)
                continue;
              oracle::Partial px{x.term, x.bag, 0}, py{y.term, y.bag, 0};
              consider(oracle::join(px, py).term, size);
            }
        }
      }
      MESSAGE("k=" << k << ": " << graphs_checked << " distinct labelled terms checked");
      CHECK(graphs_checked >= 9);
    }
  }
}

TEST_SUITE("pace") {
  TEST_CASE("diamond files") {
    MultiGraph g = parse_gr(oracle::read_data("diamond.gr"));
    CHECK(g == diamond());
    TreeDecomposition td = parse_td(oracle::read_data("diamond.td"));
    CHECK(td.bag_count == 2);
    CHECK(td.max_bag_size == 3);
    CHECK(td.bags.at(1) == std::set<Vertex>{1, 2, 3});
    CHECK(td.bags.at(2) == std::set<Vertex>{2, 3, 4});
    CHECK(td.width() == 2);
    CHECK_FALSE(validate_td(g, td).has_value());
  }

  TEST_CASE("path with comments and an empty bag") {
    MultiGraph g = parse_gr(oracle::read_data("p5.gr"));
    CHECK(g == path(5));
    TreeDecomposition td = parse_td(oracle::read_data("p5.td"));
    CHECK(td.bag_count == 4);
    CHECK(td.bags.at(4).empty());
    CHECK_FALSE(validate_td(g, td).has_value());
    ItdTerm t = td_to_itd(g, td, 2);
    validate(t, 2);
    CHECK(oracle::isomorphic(evaluate(t).graph, g));
  }

  TEST_CASE("single empty bag") {
    TreeDecomposition td = parse_td("s td 1 0 0\nb 1\n");
    CHECK(td.bags.at(1).empty());
    MultiGraph g = parse_gr("p tw 0 0\n");
    CHECK(g.vertex_count() == 0);
    ItdTerm t = td_to_itd(g, td, 0);
    CHECK(t.size() == 1);
    CHECK(t.node(t.root()).instruction == Instruction::leaf());
    CHECK(write_gr(g).find("p tw 0 0") != std::string::npos);
  }

  TEST_CASE("gr parse errors") {
    CHECK(parse_error_line([] { parse_gr("c nothing\n"); }) >= 1);
    CHECK(parse_error_line([] { parse_gr("p tw 2 1\n1 3\n"); }) == 2);
    CHECK(parse_error_line([] { parse_gr("p tw 2 1\n1 1\n"); }) == 2);
    CHECK(parse_error_line([] { parse_gr("p tw 2 1\n1 2 3\n"); }) == 2);
    CHECK(parse_error_line([] { parse_gr("c x\np tw 2 2\n1 2\n"); }) == 2);
    CHECK(parse_error_line([] { parse_gr("1 2\np tw 2 1\n"); }) == 1);
    CHECK(parse_error_line([] { parse_gr("p tw 2 1\n1 x\n"); }) == 2);
  }

  TEST_CASE("td parse errors") {
    CHECK(parse_error_line([] { parse_td("s td 2 2 2\nb 1 1 2\nb 3 1\n1 2\n"); }) == 3);
    CHECK(parse_error_line([] { parse_td("s td 1 1 2\nb 1 1 2\n"); }) == 2);
    CHECK(parse_error_line([] { parse_td("s td 2 2 2\nb 1 1 2\nb 2 2\n1 1\n"); }) == 4);
    CHECK(parse_error_line([] { parse_td("s td 2 1 2\nb 1 1 3\nb 2 2\n1 2\n"); }) == 2);
    CHECK(parse_error_line([] { parse_td("s td 2 1 2\nb 1 1\nb 2 2\n"); }) >= 1);
  }

  TEST_CASE("decomposition violations") {
    MultiGraph g = diamond();
    auto td = parse_td("s td 2 3 4\nb 1 1 2 3\nb 2 2 3\n1 2\n");
    auto v = validate_td(g, td);
    REQUIRE(v.has_value());
    CHECK(v->kind == TdViolation::Kind::VertexCoverage);

    td = parse_td("s td 2 3 4\nb 1 1 2 3\nb 2 3 4\n1 2\n");
    v = validate_td(g, td);
    REQUIRE(v.has_value());
    CHECK(v->kind == TdViolation::Kind::EdgeCoverage);

    MultiGraph p = path(3);
    td = parse_td("s td 3 2 3\nb 1 1 2\nb 2 2 3\nb 3 1\n1 2\n2 3\n");
    v = validate_td(p, td);
    REQUIRE(v.has_value());
    CHECK(v->kind == TdViolation::Kind::Connectivity);

    td = parse_td("s td 1 2 2\nb 1 1 2\n");
    v = validate_td(p, td);
    REQUIRE(v.has_value());
    CHECK(v->kind == TdViolation::Kind::VertexCount);
  }

  TEST_CASE("write and parse round trip") {
    MultiGraph g = diamond();
    g.add_edge(1, 2);
    CHECK(parse_gr(write_gr(g)) == g);
    CHECK(write_gr(g).rfind("c generated by widzard\n", 0) == 0);
    for (const char *name : {"diamond.td", "p5.td"}) {
      TreeDecomposition td = parse_td(oracle::read_data(name));
      CHECK(parse_td(write_td(td)) == td);
    }
  }

  TEST_CASE("conversion rejects wide decompositions") {
    MultiGraph g = diamond();
    TreeDecomposition td = parse_td(oracle::read_data("diamond.td"));
    CHECK_THROWS_AS(td_to_itd(g, td, 1), ValidationError);
    ItdTerm t = td_to_itd(g, td, 2);
    CHECK(annotate(t).at(t.root()).empty());
    CHECK(t.max_label() <= 3);
    CHECK(oracle::isomorphic(evaluate(t).graph, g));
  }

  TEST_CASE("conversion preserves edge multiplicity") {
    MultiGraph g = diamond();
    g.add_edge(2, 3);
    g.add_edge(2, 3);
    TreeDecomposition td = parse_td(oracle::read_data("diamond.td"));
    ItdTerm t = td_to_itd(g, td, 2);
    CHECK(oracle::isomorphic(evaluate(t).graph, g));
  }

  TEST_CASE("random graphs with optimal decompositions") {
    std::mt19937 rng(20240611);
    for (int trial = 0; trial < 50; ++trial) {
      std::size_t n = 1 + trial % 7;
      MultiGraph g = oracle::random_connected_graph(rng, n, 0.35);
      TreeDecomposition td = oracle::optimal_decomposition(g);
      REQUIRE_FALSE(validate_td(g, td).has_value());
      const unsigned w = oracle::treewidth(g);
      CHECK(td.width() == w);
      ItdTerm t = td_to_itd(g, td, w);
      validate(t, w);
      CHECK(oracle::isomorphic(evaluate(t).graph, g));
      CHECK(parse_td(write_td(td)) == td);
      CHECK(parse_gr(write_gr(g)) == g);
    }
  }

  TEST_CASE("decomposition read off a term") {
    ItdTerm t = parse_itd(oracle::read_data("two_triangles.itd"));
    auto ev = evaluate(t);
    TreeDecomposition td = itd_to_td(t, ev);
    CHECK_FALSE(validate_td(ev.graph, td).has_value());
    CHECK(td.width() <= 2);
  }
}
