#include <doctest.h>

#include "tconnect/families.hpp"
#include "tconnect/multigraph.hpp"

using namespace tconnect;

namespace {

TerminalGraph two_terminals_with_parallel(int m) {
  TerminalGraph g;
  g.add_vertex(VertexKind::Terminal);
  g.add_vertex(VertexKind::Terminal);
  for (int i = 0; i < m; ++i) g.add_edge(0, 1);
  return g;
}

}  // namespace

TEST_CASE("boundary counts parallel edges individually") {
  auto f0 = build_F0(1 == 1 ? 2 : 2);  // k = 2: 3k = 6 parallel edges
  CHECK(f0.graph.set_degree(std::vector<VertexId>{f0.names["r"]}) == 6);

  SUBCASE("k=1 style: three parallel edges") {
    auto g = two_terminals_with_parallel(3);
    CHECK(g.boundary(std::vector<VertexId>{0}).size() == 3);
  }
  SUBCASE("boundary of the full vertex set is empty") {
    auto g = two_terminals_with_parallel(3);
    CHECK(g.boundary(g.vertices()).empty());
  }
  SUBCASE("unknown vertex id is an input error") {
    auto g = two_terminals_with_parallel(3);
    CHECK_THROWS_AS((void)g.boundary(std::vector<VertexId>{7}), input_error);
  }
}

TEST_CASE("boundary of a single terminal in the level gadget") {
  // every terminal of the reconstruction has degree 3k
  auto fi = build_Fi(2, 1);
  CHECK(fi.graph.set_degree(std::vector<VertexId>{fi.names["v1pp"]}) == 6);
}

TEST_CASE("induced edge sets") {
  auto g = two_terminals_with_parallel(6);
  SUBCASE("full vertex set captures all edges") {
    CHECK(g.induced_edge_set(g.vertices()).size() == 6);
  }
  SUBCASE("singletons induce nothing") {
    CHECK(g.induced_edge_set(std::vector<VertexId>{0}).empty());
  }
  SUBCASE("v1'-v1'' multiplicity in the reconstruction is 3k/2") {
    auto fi = build_Fi(2, 1);
    auto inside = fi.graph.induced_edge_set(
        std::vector<VertexId>{fi.names["v1p"], fi.names["v1pp"]});
    CHECK(inside.size() == 3);
  }
}

TEST_CASE("degree-sum identity over many vertex sets") {
  auto fi = build_Fi(4, 1);
  const auto& g = fi.graph;
  // degree(X) = sum of degrees - 2 * induced
  for (int mask = 1; mask < 64; ++mask) {
    std::vector<VertexId> x;
    for (int b = 0; b < 6; ++b)
      if (mask & (1 << b)) x.push_back(b * 2);
    int sum = 0;
    for (VertexId v : x) sum += g.degree(v);
    CHECK(g.set_degree(x) == sum - 2 * static_cast<int>(g.induced_edge_set(x).size()));
  }
}

TEST_CASE("contract") {
  SUBCASE("both endpoints of an edge: the edge becomes a discarded loop") {
    auto g = two_terminals_with_parallel(1);
    auto res = contract(g, g.vertices());
    CHECK(res.graph.vertex_count() == 1);
    CHECK(res.graph.edge_count() == 0);
  }
  SUBCASE("complement of one vertex in a cubic graph leaves 3 parallel edges") {
    TerminalGraph k4;
    for (int i = 0; i < 4; ++i) k4.add_vertex(VertexKind::NonTerminal);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) k4.add_edge(i, j);
    auto res = contract(k4, std::vector<VertexId>{1, 2, 3});
    CHECK(res.graph.vertex_count() == 2);
    CHECK(res.graph.edge_count() == 3);
    CHECK(res.graph.set_degree(std::vector<VertexId>{res.merged}) == 3);
  }
  SUBCASE("boundary is preserved through contraction") {
    auto fi = build_Fi(2, 1);
    std::vector<VertexId> x{fi.names["v1"], fi.names["v1p"], fi.names["v1pp"]};
    auto before = fi.graph.boundary(x);
    auto res = contract(fi.graph, x);
    auto after = res.graph.boundary(std::vector<VertexId>{res.merged});
    CHECK(before.size() == after.size());
  }
}

TEST_CASE("suppress_and_clean") {
  SUBCASE("single degree-2 non-terminal") {
    TerminalGraph g;
    g.add_vertex(VertexKind::Terminal);
    g.add_vertex(VertexKind::NonTerminal);
    g.add_vertex(VertexKind::Terminal);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    auto res = suppress_and_clean(g);
    CHECK(res.graph.vertex_count() == 2);
    CHECK(res.graph.edge_count() == 1);
    CHECK(res.graph.edge(0).u == 0);
    CHECK(res.graph.edge(0).v == 1);
  }
  SUBCASE("isolated non-terminal is deleted") {
    TerminalGraph g;
    g.add_vertex(VertexKind::NonTerminal);
    g.add_vertex(VertexKind::Terminal);
    auto res = suppress_and_clean(g);
    CHECK(res.graph.vertex_count() == 1);
    CHECK(res.graph.is_terminal(0));
  }
  SUBCASE("chains collapse to a single edge") {
    TerminalGraph g;
    VertexId t1 = g.add_vertex(VertexKind::Terminal);
    VertexId n1 = g.add_vertex(VertexKind::NonTerminal);
    VertexId n2 = g.add_vertex(VertexKind::NonTerminal);
    VertexId t2 = g.add_vertex(VertexKind::Terminal);
    g.add_edge(t1, n1);
    g.add_edge(n1, n2);
    g.add_edge(n2, t2);
    auto res = suppress_and_clean(g);
    CHECK(res.graph.vertex_count() == 2);
    CHECK(res.graph.edge_count() == 1);
  }
  SUBCASE("degree-3 non-terminal is a structural error") {
    TerminalGraph g;
    VertexId n = g.add_vertex(VertexKind::NonTerminal);
    for (int i = 0; i < 3; ++i) {
      VertexId t = g.add_vertex(VertexKind::Terminal);
      g.add_edge(n, t);
    }
    CHECK_THROWS_AS((void)suppress_and_clean(g), structure_error);
  }
  SUBCASE("degree-1 non-terminal is a structural error") {
    TerminalGraph g;
    VertexId n = g.add_vertex(VertexKind::NonTerminal);
    VertexId t = g.add_vertex(VertexKind::Terminal);
    g.add_edge(n, t);
    CHECK_THROWS_AS((void)suppress_and_clean(g), structure_error);
  }
}

TEST_CASE("serialization round trip") {
  auto f0 = build_F0(2);
  std::string bytes = serialize(f0.graph);
  auto back = deserialize(bytes);
  CHECK(serialize(back) == bytes);

  SUBCASE("truncated input is a parse error") {
    CHECK_THROWS_AS((void)deserialize(bytes.substr(0, bytes.size() / 2)), input_error);
  }
  SUBCASE("classes and root survive") {
    CHECK(back.root() == f0.graph.root());
    int c_edges = 0;
    for (EdgeId e = 0; e < back.edge_count(); ++e)
      if (back.edge(e).cls == EdgeClass::C) ++c_edges;
    CHECK(c_edges == 1);
  }
  SUBCASE("sparse ids are remapped to dense canonical form") {
    std::string sparse = R"({
      "vertices": [{"id": 10, "kind": "terminal"}, {"id": 3, "kind": "nonterminal"}],
      "edges": [{"id": 5, "u": 10, "v": 3, "class": null}],
      "root": 10
    })";
    auto g = deserialize(sparse);
    CHECK(g.vertex_count() == 2);
    CHECK(g.is_terminal(1));  // id 10 sorts after id 3
    CHECK(serialize(g) == serialize(deserialize(serialize(g))));
  }
}

TEST_CASE("dot export marks terminals and multiplicities") {
  auto g = two_terminals_with_parallel(3);
  std::string dot = to_dot(g);
  CHECK(dot.find("x3") != std::string::npos);
  CHECK(dot.find("fillcolor=black") != std::string::npos);
}
