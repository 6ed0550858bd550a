#include <doctest.h>

#include <set>

#include "tconnect/catalog.hpp"
#include "tconnect/connectivity.hpp"
#include "tconnect/families.hpp"

using namespace tconnect;

namespace {

int class_count(const TerminalGraph& g, EdgeClass cls) {
  int c = 0;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (g.edge(e).cls == cls) ++c;
  return c;
}

}  // namespace

TEST_CASE("params_for") {
  CHECK(params_for(1).ell == 0);
  CHECK(params_for(2).ell == 1);
  CHECK(params_for(2).x == 0);
  CHECK(params_for(4).ell == 2);
  CHECK(params_for(4).x == 0);
  CHECK(params_for(6).ell == 3);
  CHECK(params_for(6).x == 1);
  CHECK_THROWS_AS((void)params_for(3), input_error);
  CHECK_THROWS_AS((void)params_for(0), input_error);
  CHECK_THROWS_AS((void)params_for(-2), input_error);
}

TEST_CASE("two-terminal gadget") {
  auto f0 = build_F0(2);
  CHECK(f0.graph.vertex_count() == 2);
  CHECK(f0.graph.edge_count() == 6);
  CHECK(class_count(f0.graph, EdgeClass::A) == 3);
  CHECK(class_count(f0.graph, EdgeClass::B) == 2);
  CHECK(class_count(f0.graph, EdgeClass::C) == 1);
  CHECK(steiner_edge_connectivity(f0.graph).value == 6);
  CHECK_THROWS_AS((void)build_F0(1), input_error);
}

TEST_CASE("level gadget reconstruction") {
  SUBCASE("k=2, i=1 shape") {
    auto fi = build_Fi(2, 1);
    CHECK(fi.graph.terminals().size() == 13);
    CHECK(fi.graph.non_terminals().size() == 6);
    CHECK(fi.graph.edge_count() == 48);
    CHECK(class_count(fi.graph, EdgeClass::A) == 3);
    CHECK(class_count(fi.graph, EdgeClass::B) == 1);
    CHECK(class_count(fi.graph, EdgeClass::C) == 2);
  }
  SUBCASE("v1'' has exactly two neighbours, both bundles of size 3k/2") {
    auto fi = build_Fi(2, 1);
    auto nb = fi.graph.neighbours(fi.names["v1pp"]);
    CHECK(nb.size() == 2);
    for (VertexId w : nb) {
      int mult = 0;
      for (EdgeId e : fi.graph.incident_edges(fi.names["v1pp"]))
        if (fi.graph.edge(e).other(fi.names["v1pp"]) == w) ++mult;
      CHECK(mult == 3);
    }
  }
  SUBCASE("degrees and classes for all supported k and i") {
    for (int k : {2, 4, 6}) {
      for (int i = 1; (1 << i) <= 3 * k / 2; ++i) {
        auto fi = build_Fi(k, i);
        check_degree_invariants(fi.graph, k);
        check_class_totals(fi.graph, k, i);
        CHECK(steiner_edge_connectivity(fi.graph).value == 3 * k);
      }
    }
  }
  SUBCASE("rounding splits the squares when k = 2 mod 4") {
    auto fi = build_Fi(6, 1);
    // v1 sees ceil(3k/4) class-A square members, v1' sees floor
    auto square_neighbours = [&](VertexId v, EdgeClass cls) {
      int c = 0;
      for (VertexId n : fi.graph.neighbours(v)) {
        if (fi.graph.is_terminal(n)) continue;
        for (EdgeId e : fi.graph.incident_edges(n))
          if (fi.graph.edge(e).other(n) == fi.names["r"] && fi.graph.edge(e).cls == cls) ++c;
      }
      return c;
    };
    CHECK(square_neighbours(fi.names["v1"], EdgeClass::A) == 5);
    CHECK(square_neighbours(fi.names["v1p"], EdgeClass::A) == 4);
    CHECK(square_neighbours(fi.names["v1"], EdgeClass::B) == 3);
    CHECK(square_neighbours(fi.names["v1p"], EdgeClass::B) == 4);
    CHECK(square_neighbours(fi.names["v2"], EdgeClass::A) == 5);
    CHECK(square_neighbours(fi.names["v2p"], EdgeClass::A) == 4);
  }
}

TEST_CASE("hub gadget") {
  auto fl = build_Flevel(2);
  CHECK(fl.graph.vertex_count() == 10);
  CHECK(fl.graph.edge_count() == 30);
  CHECK(fl.graph.degree(fl.names["r"]) == 6);
  auto nb = fl.graph.neighbours(fl.names["w1"]);
  CHECK(nb == std::vector<VertexId>{fl.names["f12"], fl.names["f13"]});
  check_degree_invariants(fl.graph, 2);
}

TEST_CASE("recursive gadget") {
  SUBCASE("base case is the two-terminal gadget") {
    auto fs = build_Fstar(2, 0);
    CHECK(fs.graph.vertex_count() == 2);
    CHECK(fs.graph.edge_count() == 6);
  }
  SUBCASE("terminal count recurrence") {
    // t*(0) = 2, t*(i) = 9 + 2 t*(i-1)
    auto fs1 = build_Fstar(4, 1);
    CHECK(fs1.graph.terminals().size() == 13);
    check_degree_invariants(fs1.graph, 4);
    auto fs2 = build_Fstar(6, 2);
    CHECK(fs2.graph.terminals().size() == 9 + 2 * 13);
    check_degree_invariants(fs2.graph, 6);
  }
  SUBCASE("output edge count doubles per level") {
    auto fs1 = build_Fstar(4, 1);
    CHECK(class_count(fs1.graph, EdgeClass::C) == 2);
    CHECK(class_count(fs1.graph, EdgeClass::A) == 6);
    CHECK(class_count(fs1.graph, EdgeClass::B) == 4);
  }
  SUBCASE("connectivity is preserved through the recursion") {
    CHECK(steiner_edge_connectivity(build_Fstar(4, 1).graph).value == 12);
  }
}

TEST_CASE("top gadget") {
  SUBCASE("k=2: the whole tower") {
    auto top = build_Fstar_top(2);
    CHECK(top.graph.vertex_count() == 10);
    CHECK(top.graph.edge_count() == 30);
    CHECK(top.graph.terminals().size() == 10);
    check_degree_invariants(top.graph, 2);
    CHECK(steiner_edge_connectivity(top.graph).value == 6);
  }
  SUBCASE("power-of-two k: hub edges map onto all output edges") {
    auto top = build_Fstar_top(4);
    check_degree_invariants(top.graph, 4);
    CHECK(steiner_edge_connectivity(top.graph).value == 12);
  }
  SUBCASE("k=6 with the spill set") {
    auto p = params_for(6);
    CHECK(p.x == 1);
    auto guest = build_Fstar(6, 2);
    CHECK(class_count(guest.graph, EdgeClass::A) == 9);
    CHECK(class_count(guest.graph, EdgeClass::B) == 5);
    CHECK(class_count(guest.graph, EdgeClass::C) == 4);
    auto top = build_Fstar_top(6);
    check_degree_invariants(top.graph, 6);
    CHECK(steiner_edge_connectivity(top.graph).value == 18);
  }
}

TEST_CASE("replacement graph") {
  auto k33 = catalog_get("k33").graph;
  SUBCASE("k=2 on the complete bipartite base") {
    auto np = build_Nprime(k33, 2);
    CHECK(np.graph.terminals().size() == 3);
    CHECK(np.graph.non_terminals().size() == 6);
    for (VertexId t : np.graph.terminals()) CHECK(np.graph.degree(t) == 6);
    for (VertexId n : np.graph.non_terminals()) CHECK(np.graph.degree(n) == 3);
    CHECK(np.graph.edge_count() == 2 * k33.edge_count());
  }
  SUBCASE("k=1 keeps the base graph") {
    auto np = build_Nprime(k33, 1);
    CHECK(np.graph.vertex_count() == 6);
    CHECK(np.graph.edge_count() == 9);
    CHECK(np.graph.terminals().size() == 3);
  }
  SUBCASE("hamiltonian bases produce a warning, not an error") {
    auto np = build_Nprime(k33, 1);
    bool warned = false;
    for (const auto& w : np.warnings)
      if (w.find("hamiltonian") != std::string::npos) warned = true;
    CHECK(warned);
  }
  SUBCASE("non-cubic bases are rejected") {
    TerminalGraph bad;
    bad.add_vertex(VertexKind::NonTerminal);
    bad.add_vertex(VertexKind::NonTerminal);
    bad.add_edge(0, 1);
    CHECK_THROWS_AS((void)build_Nprime(bad, 1), structure_error);
  }
}

TEST_CASE("assembly at k=1 on the control base") {
  auto k33 = catalog_get("k33").graph;
  auto a = assemble_G(k33, "k33", 1);
  CHECK(a.graph.vertex_count() == 18);
  CHECK(a.graph.edge_count() == 27);
  CHECK(a.graph.terminals().size() == 6);
  CHECK(a.atoms.atoms.size() == 3);
  CHECK(steiner_edge_connectivity(a.graph).value == 3);
  SUBCASE("every atom boundary has 3k edges and is a basic cut") {
    for (const Atom& atom : a.atoms.atoms) {
      CHECK(atom.bridges.size() == 3);
      auto check = is_basic_cut(a.graph, a.atoms, atom.non_terminals);
      CHECK(check.ok);
    }
  }
  SUBCASE("base edge fibres have size k") {
    for (EdgeId be = 0; be < a.base.edge_count(); ++be)
      CHECK(a.base_edge_fibre(be).size() == 1);
  }
}

TEST_CASE("assembly at k=2 on the control base") {
  auto k33 = catalog_get("k33").graph;
  auto a = assemble_G(k33, "k33", 2);
  // size oracle: splice arithmetic over the construction steps
  CHECK(a.graph.vertex_count() == 222);
  CHECK(a.graph.edge_count() == 414);
  CHECK(a.graph.terminals().size() == 54);
  CHECK(a.atoms.atoms.size() == 27);
  CHECK(steiner_edge_connectivity(a.graph, 4).value == 6);

  SUBCASE("copy queries against the hub instance") {
    // the whole-copy boundary is the 3k bridge edges of its insertion
    auto whole = copy_delta_names(a.emb, "x0", std::vector<std::string>{"r"});
    CHECK(whole.size() == 6);
    auto eps = copy_epsilon_names(a.emb, "x0", std::vector<std::string>{"r", "f12"});
    CHECK(eps.size() == 1);  // k/2
  }
  SUBCASE("registered cuts all pass") {
    auto cuts = registered_basic_cuts(a);
    CHECK(cuts.size() > 20);
    for (const auto& cut : cuts) {
      CHECK(cut.cut.size() == 6);
      auto check = is_basic_cut(a.graph, a.atoms, cut.x0);
      REQUIRE_MESSAGE(check.ok, cut.label, ": ", check.reason);
      bool boundary_of_component = false;
      for (const auto& cert : check.certificates)
        if (cert.cut == cut.cut) boundary_of_component = true;
      CHECK_MESSAGE(boundary_of_component, cut.label);
    }
  }
  SUBCASE("registered aligned sets are aligned") {
    auto sets = registered_aligned_sets(a);
    CHECK(sets.size() > 10);
    for (const auto& s : sets) CHECK_MESSAGE(is_aligned(a.atoms, a.graph, s.set), s.label);
  }
  SUBCASE("base edge fibres have size k") {
    for (EdgeId be = 0; be < a.base.edge_count(); ++be)
      CHECK(a.base_edge_fibre(be).size() == 2);
  }
}

TEST_CASE("copy queries on a deeper tower") {
  auto k33 = catalog_get("k33").graph;
  auto a = assemble_G(k33, "k33", 4);
  check_degree_invariants(a.graph, 4);

  // X = {v''_1} inside an embedded level gadget: 3k final edges
  auto d = copy_delta_names(a.emb, "x0/f12", std::vector<std::string>{"v1pp"});
  CHECK(d.size() == 12);
  std::set<EdgeId> ds(d.begin(), d.end());
  CHECK(ds.size() == d.size());
  for (EdgeId e : d) a.graph.check_edge(e);

  auto eps = copy_epsilon_names(a.emb, "x0", std::vector<std::string>{"r", "f12"});
  CHECK(eps.size() == 2);  // k/2
}

TEST_CASE("assembly determinism") {
  auto k33 = catalog_get("k33").graph;
  BuildOptions opts;
  opts.verify = false;
  auto a1 = assemble_G(k33, "k33", 2, opts);
  auto a2 = assemble_G(k33, "k33", 2, opts);
  CHECK(serialize(a1.graph) == serialize(a2.graph));
  CHECK(serialize_embedding(a1) == serialize_embedding(a2));
  CHECK(serialize_atoms(a1) == serialize_atoms(a2));
}

TEST_CASE("lemma harness") {
  auto k33 = catalog_get("k33").graph;
  auto g0 = assemble_G(k33, "k33", 1);

  TerminalGraph k4;
  for (int i = 0; i < 4; ++i) k4.add_vertex(VertexKind::NonTerminal);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) k4.add_edge(i, j);

  SUBCASE("size bookkeeping and connectivity") {
    VertexId r = g0.graph.terminals().front();
    auto h = build_lemma_harness(k4, g0, r, 1);
    CHECK(h.graph.vertex_count() == 4 * (g0.graph.vertex_count() - 1));
    CHECK(steiner_edge_connectivity(h.graph).value == 3);
    // the designated terminal's gadget copy is dismantled in each frame copy
    CHECK(h.atoms.atoms.size() == 4 * (g0.atoms.atoms.size() - 1));
    for (const Atom& atom : h.atoms.atoms) {
      auto check = is_basic_cut(h.graph, h.atoms, atom.non_terminals);
      CHECK(check.ok);
    }
  }
  SUBCASE("frames with too few vertices are rejected") {
    auto g2 = assemble_G(k33, "k33", 2);
    VertexId r = g2.graph.terminals().front();
    CHECK_THROWS_AS((void)build_lemma_harness(k4, g2, r, 2), input_error);
  }
}

TEST_CASE("assembly rejects non-bipartite bases") {
  TerminalGraph petersen;
  for (int i = 0; i < 10; ++i) petersen.add_vertex(VertexKind::NonTerminal);
  for (int i = 0; i < 5; ++i) {
    petersen.add_edge(i, (i + 1) % 5);
    petersen.add_edge(5 + i, 5 + (i + 2) % 5);
    petersen.add_edge(i, 5 + i);
  }
  CHECK_THROWS_AS((void)assemble_G(petersen, "petersen", 1), structure_error);
}
