#include <doctest.h>

#include <random>

#include "tconnect/connectivity.hpp"
#include "tconnect/families.hpp"
#include "tconnect/insertion.hpp"

using namespace tconnect;

namespace {

EdgeBijection identity_pairing(const TerminalGraph& g1, VertexId t1, const TerminalGraph& g2,
                               VertexId t2) {
  auto b1 = g1.boundary(std::vector<VertexId>{t1});
  auto b2 = g2.boundary(std::vector<VertexId>{t2});
  EdgeBijection h{t1, t2, {}};
  for (size_t i = 0; i < b1.size(); ++i) h.pairing.emplace_back(b1[i], b2[i]);
  return h;
}

}  // namespace

TEST_CASE("inserting the two-terminal gadget into itself reproduces it") {
  auto a = build_F0(2), b = build_F0(2);
  auto h = identity_pairing(a.graph, a.names["s"], b.graph, b.names["r"]);
  auto res = insert(a.graph, a.names["s"], b.graph, b.names["r"], h);
  CHECK(res.graph.vertex_count() == 2);
  CHECK(res.graph.edge_count() == 6);
  CHECK(res.graph.terminals().size() == 2);
  CHECK(steiner_edge_connectivity(res.graph).value == 6);
}

TEST_CASE("insertion bookkeeping: vertex and edge counts") {
  // inserting a rooted K_{3,3k} at a degree-3k terminal: +3k+1 vertices, +6k edges
  for (int k : {1, 2, 4}) {
    auto f0 = build_F0(k == 1 ? 2 : k);
    int kk = k == 1 ? 2 : k;
    auto atom = build_atom_gadget(kk);
    auto h = identity_pairing(f0.graph, f0.names["s"], atom.graph, atom.names["r"]);
    auto res = insert(f0.graph, f0.names["s"], atom.graph, atom.names["r"], h);
    CHECK(res.graph.vertex_count() == f0.graph.vertex_count() + 3 * kk + 1);
    CHECK(res.graph.edge_count() == f0.graph.edge_count() + 6 * kk);
  }
}

TEST_CASE("insertion preserves degrees and kinds") {
  auto fi = build_Fi(2, 1);
  auto guest = build_F0(2);
  std::vector<BijectionGroup> groups;
  {
    auto b = fi.graph.boundary(std::vector<VertexId>{fi.names["f1"]});
    BijectionGroup all{"everything", b, std::nullopt, {}};
    auto gb = guest.graph.boundary(std::vector<VertexId>{guest.names["r"]});
    all.guest_edges = gb;
    groups.push_back(all);
  }
  auto h = make_class_bijection(fi.graph, fi.names["f1"], guest.graph, groups);
  auto res = insert(fi.graph, fi.names["f1"], guest.graph, guest.names["r"], h);
  for (VertexId v = 0; v < fi.graph.vertex_count(); ++v) {
    if (v == fi.names["f1"]) continue;
    VertexId nv = res.host_vertex_map[v];
    CHECK(res.graph.degree(nv) == fi.graph.degree(v));
    CHECK(res.graph.kind(nv) == fi.graph.kind(v));
  }
}

TEST_CASE("insertion preconditions") {
  auto f0 = build_F0(2);
  auto f0b = build_F0(4);  // degree 12 vs 6
  SUBCASE("degree mismatch") {
    EdgeBijection h{f0.names["s"], f0b.names["r"], {}};
    CHECK_THROWS_AS(
        (void)insert(f0.graph, f0.names["s"], f0b.graph, f0b.names["r"], h), input_error);
  }
  SUBCASE("not a terminal") {
    auto fi = build_Fi(2, 1);
    VertexId nonterminal = fi.graph.non_terminals().front();
    EdgeBijection h{nonterminal, f0.names["r"], {}};
    CHECK_THROWS_AS((void)insert(fi.graph, nonterminal, f0.graph, f0.names["r"], h),
                    input_error);
  }
  SUBCASE("non-bijective pairing") {
    auto a = build_F0(2), b = build_F0(2);
    auto h = identity_pairing(a.graph, a.names["s"], b.graph, b.names["r"]);
    h.pairing[1] = h.pairing[0];
    CHECK_THROWS_AS((void)insert(a.graph, a.names["s"], b.graph, b.names["r"], h),
                    input_error);
  }
}

TEST_CASE("make_class_bijection size mismatch names the group") {
  auto fi = build_Fi(2, 1);
  auto guest = build_F0(2);
  auto b = fi.graph.boundary(std::vector<VertexId>{fi.names["f1"]});
  std::vector<BijectionGroup> groups{{"bad-group", b, EdgeClass::A, {}}};
  try {
    (void)make_class_bijection(fi.graph, fi.names["f1"], guest.graph, groups);
    FAIL("expected an input_error");
  } catch (const input_error& e) {
    CHECK(std::string(e.what()).find("bad-group") != std::string::npos);
  }
}

namespace {

// random multigraph whose terminal set is d-edge-connected and which has
// a degree-d terminal; built by boosting a random graph until it passes
struct RandomTerminalGraph {
  TerminalGraph g;
  VertexId low_terminal;
};

std::optional<RandomTerminalGraph> try_random(std::mt19937_64& rng, int d) {
  int n = 4 + static_cast<int>(rng() % 11);  // up to 14 vertices
  TerminalGraph g;
  int terminals = 2 + static_cast<int>(rng() % 3);
  for (int i = 0; i < n; ++i)
    g.add_vertex(i < terminals ? VertexKind::Terminal : VertexKind::NonTerminal);
  int m = n + d + static_cast<int>(rng() % (2 * n * d));
  for (int i = 0; i < m; ++i) {
    VertexId u = static_cast<VertexId>(rng() % n), v = static_cast<VertexId>(rng() % n);
    if (u != v) g.add_edge(u, v);
  }
  // terminal 0 gets degree exactly d: rebuild its incidences
  if (g.degree(0) < d) return std::nullopt;
  TerminalGraph h;
  for (int i = 0; i < n; ++i) h.add_vertex(g.kind(i));
  int kept = 0;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (ed.incident(0)) {
      if (kept >= d) continue;
      ++kept;
    }
    h.add_edge(ed.u, ed.v);
  }
  if (h.degree(0) != d) return std::nullopt;
  auto ts = h.terminals();
  if (ts.size() < 2) return std::nullopt;
  auto conn = steiner_edge_connectivity(h);
  if (conn.value < d) return std::nullopt;
  return RandomTerminalGraph{h, 0};
}

}  // namespace

TEST_CASE("insertion preserves d-edge-connectivity of the merged terminal set") {
  // randomized property suite: several hundred insertions across d values
  std::mt19937_64 rng(20260810);
  int done = 0;
  for (int d : {2, 3, 4, 6}) {
    int for_this_d = 0;
    while (for_this_d < 50) {
      auto a = try_random(rng, d);
      if (!a) continue;
      auto b = try_random(rng, d);
      if (!b) continue;
      auto h = identity_pairing(a->g, a->low_terminal, b->g, b->low_terminal);
      auto res = insert(a->g, a->low_terminal, b->g, b->low_terminal, h);
      auto ts = res.graph.terminals();
      if (ts.size() < 2) continue;
      auto conn = steiner_edge_connectivity(res.graph);
      CHECK(conn.value >= d);
      ++for_this_d;
      ++done;
    }
  }
  CHECK(done >= 200);
}
