#include <doctest.h>

#include <set>

#include "tconnect/catalog.hpp"
#include "tconnect/connectivity.hpp"
#include "tconnect/families.hpp"

using namespace tconnect;

namespace {

TerminalGraph path_graph() {
  TerminalGraph g;
  VertexId s = g.add_vertex(VertexKind::Terminal);
  VertexId n = g.add_vertex(VertexKind::NonTerminal);
  VertexId t = g.add_vertex(VertexKind::Terminal);
  g.add_edge(s, n);
  g.add_edge(n, t);
  return g;
}

// brute-force: minimum number of edges whose removal separates s and t
int brute_min_cut(const TerminalGraph& g, VertexId s, VertexId t) {
  int m = g.edge_count();
  for (int size = 0; size <= m; ++size) {
    // enumerate subsets of this size (graphs in tests are tiny)
    std::vector<int> idx(size);
    std::function<bool(int, int)> rec = [&](int pos, int start) -> bool {
      if (pos == size) {
        std::vector<char> removed(m, 0);
        for (int e : idx) removed[e] = 1;
        // BFS avoiding removed edges
        std::vector<char> seen(g.vertex_count(), 0);
        std::vector<VertexId> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
          VertexId v = stack.back();
          stack.pop_back();
          for (EdgeId e : g.incident_edges(v)) {
            if (removed[e]) continue;
            VertexId w = g.edge(e).other(v);
            if (!seen[w]) {
              seen[w] = 1;
              stack.push_back(w);
            }
          }
        }
        return !seen[t];
      }
      for (int e = start; e < m; ++e) {
        idx[pos] = e;
        if (rec(pos + 1, e + 1)) return true;
      }
      return false;
    };
    if (rec(0, 0)) return size;
  }
  return m;
}

}  // namespace

TEST_CASE("max_flow on parallel edges") {
  auto f0 = build_F0(2);
  auto res = max_flow(f0.graph, 0, 1);
  CHECK(res.value == 6);
  CHECK(res.min_cut.size() == 6);
}

TEST_CASE("max_flow on a two-edge path") {
  auto g = path_graph();
  auto res = max_flow(g, 0, 2);
  CHECK(res.value == 1);
  CHECK(res.min_cut.size() == 1);
}

TEST_CASE("max_flow rejects s == t") {
  auto g = path_graph();
  CHECK_THROWS_AS((void)max_flow(g, 0, 0), input_error);
}

TEST_CASE("max_flow symmetry and cut validity on the cube") {
  auto q3 = catalog_get("cube-q3").graph;
  for (VertexId t = 1; t < q3.vertex_count(); ++t) {
    auto ab = max_flow(q3, 0, t);
    auto ba = max_flow(q3, t, 0);
    CHECK(ab.value == ba.value);
    CHECK(ab.value == 3);
    CHECK(ab.value == brute_min_cut(q3, 0, t));
    // removing the reported cut disconnects the pair
    TerminalGraph h;
    for (VertexId v = 0; v < q3.vertex_count(); ++v) h.add_vertex(q3.kind(v));
    std::set<EdgeId> cut(ab.min_cut.begin(), ab.min_cut.end());
    for (EdgeId e = 0; e < q3.edge_count(); ++e)
      if (!cut.count(e)) h.add_edge(q3.edge(e).u, q3.edge(e).v);
    auto res = max_flow(h, 0, t);
    CHECK(res.value == 0);
  }
}

TEST_CASE("steiner connectivity") {
  SUBCASE("two terminals with 3k parallel edges") {
    for (int k : {1, 2, 4}) {
      TerminalGraph g;
      g.add_vertex(VertexKind::Terminal);
      g.add_vertex(VertexKind::Terminal);
      for (int i = 0; i < 3 * k; ++i) g.add_edge(0, 1);
      CHECK(steiner_edge_connectivity(g).value == 3 * k);
    }
  }
  SUBCASE("star through one non-terminal") {
    auto g = path_graph();
    CHECK(steiner_edge_connectivity(g).value == 1);
  }
  SUBCASE("fewer than two terminals is an input error") {
    TerminalGraph g;
    g.add_vertex(VertexKind::Terminal);
    CHECK_THROWS_AS((void)steiner_edge_connectivity(g), input_error);
  }
  SUBCASE("fixed-source reduction agrees with the all-pairs minimum") {
    auto fi = build_Fi(2, 1);
    auto ts = fi.graph.terminals();
    int all_pairs = 1 << 30;
    for (size_t i = 0; i < ts.size(); ++i)
      for (size_t j = i + 1; j < ts.size(); ++j)
        all_pairs = std::min(all_pairs, max_flow(fi.graph, ts[i], ts[j]).value);
    CHECK(steiner_edge_connectivity(fi.graph).value == all_pairs);
    CHECK(all_pairs == 6);
  }
  SUBCASE("parallel jobs give the same answer") {
    auto fi = build_Fi(2, 1);
    CHECK(steiner_edge_connectivity(fi.graph, 4).value ==
          steiner_edge_connectivity(fi.graph, 1).value);
  }
}

TEST_CASE("is_aligned") {
  AtomRegistry reg;
  Atom a;
  a.terminals = {0, 1};
  a.non_terminals = {2, 3, 4};
  reg.atoms.push_back(a);
  TerminalGraph g;
  for (int i = 0; i < 7; ++i)
    g.add_vertex(i < 2 ? VertexKind::Terminal : VertexKind::NonTerminal);

  CHECK(is_aligned(reg, g, a.vertices()));
  CHECK(is_aligned(reg, g, std::vector<VertexId>{5, 6}));
  CHECK_FALSE(is_aligned(reg, g, std::vector<VertexId>{0, 2, 5}));
}

TEST_CASE("is_basic_cut on the k=1 assembly") {
  auto k33 = catalog_get("k33").graph;
  auto a = assemble_G(k33, "k33", 1);

  SUBCASE("atom non-terminals certify three components") {
    const Atom& atom = a.atoms.atoms[0];
    auto check = is_basic_cut(a.graph, a.atoms, atom.non_terminals);
    REQUIRE(check.ok);
    CHECK(check.certificates.size() == 3);
    int singletons = 0;
    for (const auto& cert : check.certificates) {
      CHECK(cert.cut.size() == 3);
      if (cert.partition[cert.y_index].size() == 1) ++singletons;
    }
    CHECK(singletons == 2);
  }
  SUBCASE("X0 containing a terminal fails") {
    auto check = is_basic_cut(a.graph, a.atoms,
                              std::vector<VertexId>{a.graph.terminals().front()});
    CHECK_FALSE(check.ok);
    CHECK(check.reason == "X0 contains a terminal");
  }
  SUBCASE("the replaced-side non-terminals certify every copy boundary") {
    std::vector<VertexId> x0;
    const auto& nrec = a.emb.copy("");
    const auto& proto = a.emb.proto(nrec);
    for (VertexId v = 0; v < proto.graph.vertex_count(); ++v)
      if (!proto.graph.is_terminal(v)) x0.push_back(nrec.vertex_img[v]);
    auto check = is_basic_cut(a.graph, a.atoms, x0);
    REQUIRE(check.ok);
    CHECK(check.certificates.size() == 3);  // one component per atom
  }
}
