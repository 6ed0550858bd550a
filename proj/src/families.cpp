#include "tconnect/families.hpp"

#include <algorithm>
#include <cassert>
#include <set>

#include <nlohmann/json.hpp>

#include "tconnect/catalog.hpp"
#include "tconnect/connectivity.hpp"

namespace tconnect {

ConstructionParams params_for(int k) {
  if (k == 1) return {1, 0, 0};
  if (k < 1 || k % 2 != 0)
    throw input_error("unsupported k = " + std::to_string(k) +
                      " (need k = 1 or k even)");
  int ell = 0;
  while ((1 << ell) < k) ++ell;
  return {k, ell, (1 << (ell - 1)) - k / 2};
}

namespace {

int pow2(int e) { return 1 << e; }

void require(bool cond, const std::string& msg) {
  if (!cond) throw input_error(msg);
}

}  // namespace

std::vector<VertexId> Atom::vertices() const {
  std::vector<VertexId> out = terminals;
  out.insert(out.end(), non_terminals.begin(), non_terminals.end());
  std::sort(out.begin(), out.end());
  return out;
}

int AtomRegistry::find_by_vertex(VertexId v) const {
  for (size_t i = 0; i < atoms.size(); ++i) {
    const Atom& a = atoms[i];
    if (std::find(a.terminals.begin(), a.terminals.end(), v) != a.terminals.end() ||
        std::find(a.non_terminals.begin(), a.non_terminals.end(), v) !=
            a.non_terminals.end())
      return static_cast<int>(i);
  }
  return -1;
}

// ---------------------------------------------------------------------------
// gadget prototypes

BuiltGadget build_F0(int k) {
  auto p = params_for(k);
  require(p.ell >= 1, "the two-terminal gadget exists only for even k");
  BuiltGadget g;
  VertexId r = g.graph.add_vertex(VertexKind::Terminal);
  VertexId s = g.graph.add_vertex(VertexKind::Terminal);
  g.graph.set_root(r);
  int a = 3 * k / 2, b = 3 * k / 2 - 1;
  for (int i = 0; i < 3 * k; ++i) {
    EdgeClass cls = i < a ? EdgeClass::A : (i < a + b ? EdgeClass::B : EdgeClass::C);
    g.graph.add_edge(r, s, cls);
  }
  g.names = {{"r", r}, {"s", s}};
  return g;
}

BuiltGadget build_Fi(int k, int i) {
  auto p = params_for(k);
  // structurally valid whenever every class and square stays non-negative;
  // the assembly itself only uses 1 <= i <= ell-1
  require(p.ell >= 1 && i >= 1 && pow2(i) <= 3 * k / 2,
          "level index i out of range for k = " + std::to_string(k));

  BuiltGadget g;
  auto T = [&](const std::string& name) {
    VertexId v = g.graph.add_vertex(VertexKind::Terminal);
    g.names[name] = v;
    return v;
  };
  VertexId r = T("r");
  VertexId f1 = T("f1"), uA1 = T("uA1"), uB1 = T("uB1"), v1 = T("v1"), v1p = T("v1p"),
           v1pp = T("v1pp");
  VertexId f2 = T("f2"), uA2 = T("uA2"), uB2 = T("uB2"), v2 = T("v2"), v2p = T("v2p"),
           v2pp = T("v2pp");
  g.graph.set_root(r);

  int c = pow2(i - 1);
  int ceil34 = (3 * k + 3) / 4, floor34 = 3 * k / 4;
  int pa = ceil34, pap = floor34;          // class-A squares at v / v'
  int pb = floor34 - c, pbp = ceil34 - c;  // class-B squares at v / v'

  auto square = [&](int size, EdgeClass cls, VertexId n1, VertexId n2) {
    for (int j = 0; j < size; ++j) {
      VertexId w = g.graph.add_vertex(VertexKind::NonTerminal);
      g.graph.add_edge(r, w, cls);
      g.graph.add_edge(n1, w);
      g.graph.add_edge(n2, w);
    }
  };
  square(pa, EdgeClass::A, v1, v2);
  square(pap, EdgeClass::A, v1p, v2p);
  square(pb, EdgeClass::B, v1, v2);
  square(pbp, EdgeClass::B, v1p, v2p);
  square(c, EdgeClass::C, f1, f2);
  square(c, EdgeClass::C, uB1, uB2);

  auto bundle = [&](VertexId a, VertexId b, int mult) {
    for (int j = 0; j < mult; ++j) g.graph.add_edge(a, b);
  };
  int half3k = 3 * k / 2;
  for (auto [f, uA, uB, v, vp, vpp] :
       {std::array<VertexId, 6>{f1, uA1, uB1, v1, v1p, v1pp},
        std::array<VertexId, 6>{f2, uA2, uB2, v2, v2p, v2pp}}) {
    bundle(f, uA, half3k);
    bundle(f, uB, half3k - c);
    bundle(uB, vpp, half3k);
    bundle(vpp, vp, half3k);
    bundle(v, uA, half3k);
    bundle(v, vp, c);
  }
  return g;
}

BuiltGadget build_Flevel(int k) {
  auto p = params_for(k);
  require(p.ell >= 1, "the hub gadget exists only for even k");
  BuiltGadget g;
  auto T = [&](const std::string& name) {
    VertexId v = g.graph.add_vertex(VertexKind::Terminal);
    g.names[name] = v;
    return v;
  };
  VertexId r = T("r");
  VertexId w1 = T("w1"), w2 = T("w2"), w3 = T("w3");
  VertexId f12 = T("f12"), f21 = T("f21"), f23 = T("f23"), f32 = T("f32"), f31 = T("f31"),
           f13 = T("f13");
  g.graph.set_root(r);

  auto bundle = [&](VertexId a, VertexId b, int mult) {
    for (int j = 0; j < mult; ++j) g.graph.add_edge(a, b);
  };
  for (VertexId f : {f12, f21, f23, f32, f31, f13}) bundle(r, f, k / 2);
  bundle(f12, f21, k);
  bundle(f23, f32, k);
  bundle(f31, f13, k);
  bundle(f12, w1, 3 * k / 2);
  bundle(f21, w2, 3 * k / 2);
  bundle(f23, w2, 3 * k / 2);
  bundle(f32, w3, 3 * k / 2);
  bundle(f31, w3, 3 * k / 2);
  bundle(f13, w1, 3 * k / 2);
  return g;
}

BuiltGadget build_atom_gadget(int k) {
  require(k >= 1, "k must be positive");
  BuiltGadget g;
  VertexId r = g.graph.add_vertex(VertexKind::Terminal);
  VertexId b = g.graph.add_vertex(VertexKind::Terminal);
  VertexId c = g.graph.add_vertex(VertexKind::Terminal);
  g.graph.set_root(r);
  for (int j = 0; j < 3 * k; ++j) {
    VertexId n = g.graph.add_vertex(VertexKind::NonTerminal);
    g.graph.add_edge(r, n);
    g.graph.add_edge(b, n);
    g.graph.add_edge(c, n);
  }
  g.names = {{"r", r}, {"b", b}, {"c", c}};
  return g;
}

// ---------------------------------------------------------------------------
// staging machinery

int EmbeddingMap::find_copy(const std::string& key) const {
  for (size_t i = 0; i < copies.size(); ++i)
    if (copies[i].key == key) return static_cast<int>(i);
  return -1;
}

const CopyRecord& EmbeddingMap::copy(const std::string& key) const {
  int i = find_copy(key);
  if (i < 0) throw input_error("unknown copy '" + key + "'");
  return copies[i];
}

VertexId EmbeddingMap::source_vertex(const CopyRecord& c, const std::string& name) const {
  const auto& names = proto(c).names;
  auto it = names.find(name);
  if (it == names.end())
    throw input_error("copy '" + c.key + "' has no vertex named '" + name + "'");
  return it->second;
}

VertexId EmbeddingMap::final_vertex(const std::string& key, const std::string& name) const {
  const CopyRecord& c = copy(key);
  return c.vertex_img[source_vertex(c, name)];
}

std::vector<VertexId> EmbeddingMap::descendants(int copy_index, VertexId v) const {
  const CopyRecord& c = copies[copy_index];
  if (c.vertex_img[v] >= 0) return {c.vertex_img[v]};
  auto it = c.child.find(v);
  if (it == c.child.end()) return {};  // consumed by the parent insertion
  return copy_vertices(it->second);
}

std::vector<VertexId> EmbeddingMap::copy_vertices(int copy_index) const {
  const CopyRecord& c = copies[copy_index];
  std::vector<VertexId> out;
  for (VertexId v = 0; v < static_cast<VertexId>(c.vertex_img.size()); ++v)
    if (c.vertex_img[v] >= 0) out.push_back(c.vertex_img[v]);
  for (const auto& [sv, child] : c.child) {
    auto sub = copy_vertices(child);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<EdgeId> copy_delta(const EmbeddingMap& emb, const std::string& key,
                               std::span<const VertexId> x) {
  const CopyRecord& c = emb.copy(key);
  auto src = emb.proto(c).graph.boundary(x);
  std::vector<EdgeId> out;
  for (EdgeId e : src) out.push_back(c.edge_img[e]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EdgeId> copy_epsilon(const EmbeddingMap& emb, const std::string& key,
                                 std::span<const VertexId> x) {
  const CopyRecord& c = emb.copy(key);
  auto src = emb.proto(c).graph.induced_edge_set(x);
  std::vector<EdgeId> out;
  for (EdgeId e : src) out.push_back(c.edge_img[e]);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<VertexId> names_to_src(const EmbeddingMap& emb, const CopyRecord& c,
                                   std::span<const std::string> names) {
  std::vector<VertexId> out;
  for (const auto& n : names) out.push_back(emb.source_vertex(c, n));
  return out;
}

}  // namespace

std::vector<EdgeId> copy_delta_names(const EmbeddingMap& emb, const std::string& key,
                                     std::span<const std::string> names) {
  return copy_delta(emb, key, names_to_src(emb, emb.copy(key), names));
}

std::vector<EdgeId> copy_epsilon_names(const EmbeddingMap& emb, const std::string& key,
                                       std::span<const std::string> names) {
  return copy_epsilon(emb, key, names_to_src(emb, emb.copy(key), names));
}

namespace {

std::string prefixed(const std::string& prefix, const std::string& key) {
  if (key.empty()) return prefix;
  return prefix + "/" + key;
}

StagedGraph stage_proto(BuiltGadget gadget, const std::string& stage) {
  StagedGraph out;
  out.graph = std::move(gadget.graph);
  for (EdgeId e = 0; e < out.graph.edge_count(); ++e)
    out.graph.edge_mutable(e).provenance = {{stage, "", e}};

  Prototype proto{stage, out.graph, std::move(gadget.names)};
  // the prototype keeps pristine provenance
  for (EdgeId e = 0; e < proto.graph.edge_count(); ++e)
    proto.graph.edge_mutable(e).provenance.clear();
  out.emb.protos.push_back(std::move(proto));

  CopyRecord rec;
  rec.key = "";
  rec.prototype = 0;
  rec.vertex_img.resize(out.graph.vertex_count());
  rec.edge_img.resize(out.graph.edge_count());
  for (VertexId v = 0; v < out.graph.vertex_count(); ++v) rec.vertex_img[v] = v;
  for (EdgeId e = 0; e < out.graph.edge_count(); ++e) rec.edge_img[e] = e;
  out.emb.copies.push_back(std::move(rec));
  return out;
}

struct OwnerRef {
  int copy = -1;
  VertexId source = -1;
};

OwnerRef find_owner(const EmbeddingMap& emb, VertexId final_vertex) {
  for (size_t i = 0; i < emb.copies.size(); ++i) {
    const auto& img = emb.copies[i].vertex_img;
    for (VertexId sv = 0; sv < static_cast<VertexId>(img.size()); ++sv)
      if (img[sv] == final_vertex) return {static_cast<int>(i), sv};
  }
  throw structure_error("no copy owns final vertex " + std::to_string(final_vertex));
}

// Splice `guest` into `host` at terminal t1, composing every copy record.
void staged_insert(StagedGraph& host, VertexId t1, StagedGraph guest,
                   const std::string& guest_prefix, const EdgeBijection& h) {
  if (!guest.graph.root()) throw input_error("staged_insert: guest has no root");
  VertexId t2 = *guest.graph.root();

  OwnerRef host_owner = find_owner(host.emb, t1);
  OwnerRef guest_top = find_owner(guest.emb, t2);

  // guest keys and edge provenance pick up the instance prefix
  for (auto& rec : guest.emb.copies) rec.key = prefixed(guest_prefix, rec.key);
  for (EdgeId e = 0; e < guest.graph.edge_count(); ++e)
    for (auto& step : guest.graph.edge_mutable(e).provenance)
      step.copy = prefixed(guest_prefix, step.copy);

  InsertionResult ins = insert(host.graph, t1, guest.graph, t2, h);

  // prototypes: dedupe by stage tag
  std::map<std::string, int> proto_index;
  for (size_t i = 0; i < host.emb.protos.size(); ++i)
    proto_index[host.emb.protos[i].stage] = static_cast<int>(i);
  std::vector<int> guest_proto_map(guest.emb.protos.size());
  for (size_t i = 0; i < guest.emb.protos.size(); ++i) {
    auto it = proto_index.find(guest.emb.protos[i].stage);
    if (it != proto_index.end()) {
      guest_proto_map[i] = it->second;
    } else {
      host.emb.protos.push_back(guest.emb.protos[i]);
      int idx = static_cast<int>(host.emb.protos.size()) - 1;
      proto_index[guest.emb.protos[i].stage] = idx;
      guest_proto_map[i] = idx;
    }
  }

  int host_copy_count = static_cast<int>(host.emb.copies.size());
  for (auto& rec : host.emb.copies) {
    for (auto& v : rec.vertex_img)
      if (v >= 0) v = ins.host_vertex_map[v];
    for (auto& e : rec.edge_img) e = ins.host_edge_map[e];
  }
  for (auto& rec : guest.emb.copies) {
    rec.prototype = guest_proto_map[rec.prototype];
    for (auto& v : rec.vertex_img)
      if (v >= 0) v = ins.guest_vertex_map[v];
    for (auto& e : rec.edge_img) e = ins.guest_edge_map[e];
    for (auto& [sv, child] : rec.child) child += host_copy_count;
    host.emb.copies.push_back(std::move(rec));
  }
  host.emb.copies[host_owner.copy].child[host_owner.source] =
      host_copy_count + guest_top.copy;

  host.graph = std::move(ins.graph);
}

std::vector<EdgeId> edges_between(const TerminalGraph& g, VertexId a, VertexId b) {
  std::vector<EdgeId> out;
  for (EdgeId e : g.incident_edges(a))
    if (g.edge(e).other(a) == b) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EdgeId> root_class_edges(const TerminalGraph& g, EdgeClass cls) {
  std::vector<EdgeId> out;
  for (EdgeId e : g.incident_edges(*g.root()))
    if (g.edge(e).cls == cls) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

StagedGraph build_Fstar(int k, int i) {
  auto p = params_for(k);
  require(i >= 0 && i <= p.ell - 1, "recursive gadget index out of range");
  if (i == 0) return stage_proto(build_F0(k), "F0");

  StagedGraph host = stage_proto(build_Fi(k, i), "F" + std::to_string(i));
  for (const std::string side : {"f1", "f2"}) {
    StagedGraph guest = build_Fstar(k, i - 1);
    VertexId t1 = host.emb.final_vertex("", side);
    VertexId uA = host.emb.final_vertex("", side == "f1" ? "uA1" : "uA2");
    VertexId uB = host.emb.final_vertex("", side == "f1" ? "uB1" : "uB2");

    auto to_uA = edges_between(host.graph, t1, uA);
    auto to_uB = edges_between(host.graph, t1, uB);
    std::set<EdgeId> named(to_uA.begin(), to_uA.end());
    named.insert(to_uB.begin(), to_uB.end());
    std::vector<EdgeId> rest;
    for (EdgeId e : host.graph.boundary(std::vector<VertexId>{t1}))
      if (!named.count(e)) rest.push_back(e);

    std::vector<BijectionGroup> groups = {
        {"A", to_uA, EdgeClass::A, {}},
        {"B", to_uB, EdgeClass::B, {}},
        {"C", rest, EdgeClass::C, {}},
    };
    EdgeBijection h = make_class_bijection(host.graph, t1, guest.graph, groups);
    staged_insert(host, t1, std::move(guest), side, h);
  }
  return host;
}

StagedGraph build_Fstar_top(int k) {
  auto p = params_for(k);
  require(p.ell >= 1, "top gadget exists only for even k");

  StagedGraph host = stage_proto(build_Flevel(k), "Flevel");
  const std::pair<std::string, std::string> sites[] = {
      {"f12", "w1"}, {"f21", "w2"}, {"f23", "w2"},
      {"f32", "w3"}, {"f31", "w3"}, {"f13", "w1"}};
  auto partner = [](const std::string& f) {
    return std::string("f") + f[2] + f[1];  // f12 <-> f21
  };

  for (const auto& [fname, wname] : sites) {
    StagedGraph guest = build_Fstar(k, p.ell - 1);
    VertexId t1 = host.emb.final_vertex("", fname);

    // group the boundary by its source bundle in the hub prototype: after
    // earlier insertions some of these edges are already bridges
    const CopyRecord& hub = host.emb.copy("");
    const Prototype& hubp = host.emb.proto(hub);
    auto source_bundle_image = [&](const std::string& a, const std::string& b) {
      auto src = edges_between(hubp.graph, hubp.names.at(a), hubp.names.at(b));
      std::vector<EdgeId> out;
      for (EdgeId e : src) out.push_back(hub.edge_img[e]);
      std::sort(out.begin(), out.end());
      return out;
    };
    auto w_edges = source_bundle_image(fname, wname);
    auto f_edges = source_bundle_image(fname, partner(fname));
    auto r_edges = source_bundle_image(fname, "r");

    // x spill: class-B guest edges are short by x; the first x class-C
    // edges stand in for them, the rest pair with the hub edges
    auto guest_b = root_class_edges(guest.graph, EdgeClass::B);
    auto guest_c = root_class_edges(guest.graph, EdgeClass::C);
    require(static_cast<int>(guest_c.size()) == k / 2 + p.x,
            "unexpected class-C count in guest gadget");
    std::vector<EdgeId> b_plus(guest_b);
    b_plus.insert(b_plus.end(), guest_c.begin(), guest_c.begin() + p.x);
    std::vector<EdgeId> c_rest(guest_c.begin() + p.x, guest_c.end());

    std::vector<BijectionGroup> groups = {
        {"A(w)", w_edges, EdgeClass::A, {}},
        {"B+x(f)", f_edges, std::nullopt, b_plus},
        {"C-x(r)", r_edges, std::nullopt, c_rest},
    };
    EdgeBijection h = make_class_bijection(host.graph, t1, guest.graph, groups);
    staged_insert(host, t1, std::move(guest), fname, h);
  }
  return host;
}

NprimeResult build_Nprime(const TerminalGraph& base, int k, const BuildOptions& opts) {
  params_for(k);
  BaseReport rep = verify_base(base);
  if (!rep.cubic) throw structure_error("base graph is not cubic");
  if (!rep.bipartite) throw structure_error("base graph is not bipartite");

  NprimeResult out;
  out.base_x = rep.class_x;
  out.base_y = rep.class_y;
  if (!rep.three_connected) out.warnings.push_back("base graph is not 3-connected");

  auto ham = find_hamiltonian_cycle(base, opts.hamilton_budget);
  if (ham.status == SearchStatus::Found)
    out.warnings.push_back("base graph is hamiltonian (control build)");
  else if (ham.status == SearchStatus::BudgetExceeded)
    out.warnings.push_back("base hamiltonicity unresolved within budget");

  std::vector<char> is_x(base.vertex_count(), 0);
  for (VertexId v : rep.class_x) is_x[v] = 1;

  std::vector<std::vector<VertexId>> img(base.vertex_count());
  for (VertexId v = 0; v < base.vertex_count(); ++v) {
    if (is_x[v]) {
      VertexId t = out.graph.add_vertex(VertexKind::Terminal);
      img[v] = {t};
      out.x_terminals.push_back(t);
    } else {
      for (int j = 0; j < k; ++j)
        img[v].push_back(out.graph.add_vertex(VertexKind::NonTerminal));
    }
  }
  for (EdgeId e = 0; e < base.edge_count(); ++e) {
    VertexId x = base.edge(e).u, y = base.edge(e).v;
    if (!is_x[x]) std::swap(x, y);
    for (int j = 0; j < k; ++j) {
      out.graph.add_edge(img[x][0], img[y][j]);
      out.edge_base.push_back(e);
      out.edge_copy.push_back(j);
    }
  }
  return out;
}

namespace {

EdgeBijection canonical_bijection(const TerminalGraph& host, VertexId t1,
                                  const TerminalGraph& guest) {
  if (!guest.root()) throw input_error("guest has no root");
  auto b1 = host.boundary(std::vector<VertexId>{t1});
  auto b2 = guest.boundary(std::vector<VertexId>{*guest.root()});
  if (b1.size() != b2.size()) throw input_error("degree mismatch in canonical bijection");
  std::sort(b1.begin(), b1.end());
  std::sort(b2.begin(), b2.end());
  EdgeBijection h;
  h.host_terminal = t1;
  h.guest_terminal = *guest.root();
  for (size_t i = 0; i < b1.size(); ++i) h.pairing.emplace_back(b1[i], b2[i]);
  return h;
}

// step 6: one rooted K_{3,3k} at every terminal that is not itself
// atom-born; registers atoms from the resulting copy records afterwards
void insert_atoms_everywhere(StagedGraph& staged, int k) {
  std::vector<VertexId> pending;
  for (VertexId v : staged.graph.terminals()) pending.push_back(v);
  std::sort(pending.begin(), pending.end());

  int atom_index = 0;
  while (!pending.empty()) {
    VertexId t = pending.front();
    pending.erase(pending.begin());
    StagedGraph guest = stage_proto(build_atom_gadget(k), "K3x");
    EdgeBijection h = canonical_bijection(staged.graph, t, guest.graph);
    staged_insert(staged, t, std::move(guest), "atom" + std::to_string(atom_index), h);
    ++atom_index;

    // t was the only consumed host vertex: with the dense host-first
    // relabelling, ids above t shift down by one, ids below stay put
    for (auto& v : pending) v = v < t ? v : v - 1;
  }
}

void register_atoms(Assembly& a) {
  a.atoms.atoms.clear();
  for (const auto& rec : a.emb.copies) {
    if (a.emb.protos[rec.prototype].stage != "K3x") continue;
    const auto& proto = a.emb.protos[rec.prototype];
    Atom atom;
    atom.key = rec.key;
    atom.terminals = {rec.vertex_img[proto.names.at("b")], rec.vertex_img[proto.names.at("c")]};
    for (VertexId v = 0; v < proto.graph.vertex_count(); ++v)
      if (!proto.graph.is_terminal(v)) atom.non_terminals.push_back(rec.vertex_img[v]);
    // a copy whose terminal was consumed by a later insertion (the
    // designated terminal of a harness copy) is no longer an atom
    bool intact = atom.terminals[0] >= 0 && atom.terminals[1] >= 0;
    for (VertexId v : atom.non_terminals) intact = intact && v >= 0;
    if (!intact) continue;
    for (EdgeId e : proto.graph.boundary(std::vector<VertexId>{proto.names.at("r")}))
      atom.bridges.push_back(rec.edge_img[e]);
    std::sort(atom.bridges.begin(), atom.bridges.end());
    a.atoms.atoms.push_back(std::move(atom));
  }
}

void verify_assembly(const Assembly& a, const BuildOptions& opts) {
  check_degree_invariants(a.graph, a.params.k);
  for (const Atom& atom : a.atoms.atoms) {
    if (static_cast<int>(atom.non_terminals.size()) != 3 * a.params.k ||
        atom.terminals.size() != 2)
      throw structure_error("atom has wrong shape");
    auto induced = a.graph.induced_edge_set(atom.vertices());
    if (static_cast<int>(induced.size()) != 6 * a.params.k)
      throw structure_error("atom does not induce the expected biclique");
    if (static_cast<int>(atom.bridges.size()) != 3 * a.params.k)
      throw structure_error("atom boundary has wrong size");
  }
  auto conn = steiner_edge_connectivity(a.graph, opts.jobs);
  if (conn.value != 3 * a.params.k)
    throw structure_error("terminal connectivity is " + std::to_string(conn.value) +
                          ", expected " + std::to_string(3 * a.params.k));
}

}  // namespace

Assembly assemble_G(const TerminalGraph& base, const std::string& base_name, int k,
                    const BuildOptions& opts) {
  Assembly a;
  a.params = params_for(k);
  a.base_name = base_name;
  a.base = base;

  NprimeResult np = build_Nprime(base, k, opts);
  a.base_x = np.base_x;
  a.base_y = np.base_y;
  a.nprime_edge_base = np.edge_base;
  a.nprime_edge_copy = np.edge_copy;
  a.warnings = np.warnings;

  BuiltGadget nprime_gadget;
  nprime_gadget.graph = np.graph;
  for (size_t i = 0; i < np.x_terminals.size(); ++i)
    nprime_gadget.names["x" + std::to_string(a.base_x[i])] = np.x_terminals[i];
  StagedGraph staged = stage_proto(std::move(nprime_gadget), "Nprime");

  if (a.params.ell >= 1) {
    // one recursive gadget copy at each terminal of N'
    for (size_t xi = 0; xi < np.x_terminals.size(); ++xi) {
      VertexId base_vertex = a.base_x[xi];
      const CopyRecord& nrec = staged.emb.copy("");
      VertexId t1 = nrec.vertex_img[np.x_terminals[xi]];

      StagedGraph guest = build_Fstar_top(k);

      // group host edges by the base edge they expand
      std::vector<EdgeId> base_edges;
      for (EdgeId be = 0; be < base.edge_count(); ++be)
        if (base.edge(be).incident(base_vertex)) base_edges.push_back(be);
      std::sort(base_edges.begin(), base_edges.end());
      require(base_edges.size() == 3, "base graph is not cubic at a terminal");

      const std::pair<std::string, std::string> pair_names[] = {
          {"f12", "f21"}, {"f23", "f32"}, {"f31", "f13"}};

      std::vector<BijectionGroup> groups;
      const CopyRecord& flevel = guest.emb.copy("");
      const Prototype& fproto = guest.emb.proto(flevel);
      for (int m = 0; m < 3; ++m) {
        BijectionGroup grp;
        grp.label = "pair " + pair_names[m].first;
        for (size_t ne = 0; ne < a.nprime_edge_base.size(); ++ne)
          if (a.nprime_edge_base[ne] == base_edges[m])
            grp.host_edges.push_back(nrec.edge_img[ne]);
        for (const std::string& f : {pair_names[m].first, pair_names[m].second}) {
          auto src = fproto.graph.boundary(
              std::vector<VertexId>{fproto.names.at("r")});
          for (EdgeId e : src) {
            const Edge& ed = fproto.graph.edge(e);
            VertexId other = ed.other(fproto.names.at("r"));
            if (other == fproto.names.at(f)) grp.guest_edges.push_back(flevel.edge_img[e]);
          }
        }
        std::sort(grp.guest_edges.begin(), grp.guest_edges.end());
        groups.push_back(std::move(grp));
      }

      EdgeBijection h = make_class_bijection(staged.graph, t1, guest.graph, groups);
      staged_insert(staged, t1, std::move(guest), "x" + std::to_string(base_vertex), h);
    }
  }

  insert_atoms_everywhere(staged, k);

  a.graph = std::move(staged.graph);
  a.emb = std::move(staged.emb);
  register_atoms(a);

  if (opts.verify) verify_assembly(a, opts);
  return a;
}

Assembly build_lemma_harness(const TerminalGraph& frame, const Assembly& g, VertexId r,
                             int k, const BuildOptions& opts) {
  params_for(k);
  g.graph.check_vertex(r);
  if (!g.graph.is_terminal(r)) throw input_error("harness: r must be a terminal");
  if (g.graph.degree(r) != 3 * k) throw input_error("harness: r must have degree 3k");
  if (frame.vertex_count() <= 2 * k)
    throw input_error("harness frame needs more than 2k vertices");
  for (VertexId v = 0; v < frame.vertex_count(); ++v)
    if (frame.degree(v) != 3) throw input_error("harness frame must be cubic");
  if (!vertex_connectivity_at_least(frame, 3))
    throw input_error("harness frame must be 3-connected");

  BuiltGadget khg;
  for (VertexId v = 0; v < frame.vertex_count(); ++v) {
    khg.graph.add_vertex(VertexKind::Terminal);
    khg.names["w" + std::to_string(v)] = v;
  }
  for (EdgeId e = 0; e < frame.edge_count(); ++e)
    for (int j = 0; j < k; ++j) khg.graph.add_edge(frame.edge(e).u, frame.edge(e).v);
  StagedGraph staged = stage_proto(std::move(khg), "kH");

  for (VertexId w = 0; w < frame.vertex_count(); ++w) {
    StagedGraph guest{g.graph, g.emb};
    // treat the whole assembly as a rooted gadget at r
    guest.graph.set_root(r);
    const CopyRecord& kh = staged.emb.copy("");
    VertexId t1 = kh.vertex_img[w];
    EdgeBijection h = canonical_bijection(staged.graph, t1, guest.graph);
    staged_insert(staged, t1, std::move(guest), "w" + std::to_string(w), h);
  }

  Assembly out;
  out.params = params_for(k);
  out.base_name = "harness";
  out.graph = std::move(staged.graph);
  out.graph.set_root(std::nullopt);
  out.emb = std::move(staged.emb);
  register_atoms(out);
  if (opts.verify) verify_assembly(out, opts);
  return out;
}

std::vector<EdgeId> Assembly::base_edge_fibre(EdgeId base_edge) const {
  base.check_edge(base_edge);
  const CopyRecord& nrec = emb.copy("");
  std::vector<EdgeId> out;
  for (size_t ne = 0; ne < nprime_edge_base.size(); ++ne)
    if (nprime_edge_base[ne] == base_edge) out.push_back(nrec.edge_img[ne]);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// registered cut / aligned-set families

namespace {

std::vector<VertexId> global_nprime_nonterminals(const Assembly& a) {
  const CopyRecord& nrec = a.emb.copy("");
  const Prototype& proto = a.emb.proto(nrec);
  std::vector<VertexId> out;
  for (VertexId v = 0; v < proto.graph.vertex_count(); ++v)
    if (!proto.graph.is_terminal(v)) out.push_back(nrec.vertex_img[v]);
  return out;
}

const Atom& atom_by_key(const Assembly& a, const std::string& key) {
  for (const Atom& atom : a.atoms.atoms)
    if (atom.key == key) return atom;
  throw structure_error("no atom with key '" + key + "'");
}

std::vector<VertexId> resolve_x0(const Assembly& a, const CopyRecord& c, VertexId z) {
  const EmbeddingMap& emb = a.emb;
  auto it = c.child.find(z);
  if (it != c.child.end()) {
    const CopyRecord& cc = emb.copies[it->second];
    const std::string& stage = emb.proto(cc).stage;
    if (stage == "K3x") return atom_by_key(a, cc.key).non_terminals;
    if (stage == "F0") {
      VertexId s = emb.proto(cc).names.at("s");
      auto sit = cc.child.find(s);
      if (sit == cc.child.end()) throw structure_error("two-terminal gadget without atom");
      return atom_by_key(a, emb.copies[sit->second].key).non_terminals;
    }
    // a recursive gadget: its own non-terminals form X0
    std::vector<VertexId> out;
    const Prototype& proto = emb.proto(cc);
    for (VertexId v = 0; v < proto.graph.vertex_count(); ++v)
      if (!proto.graph.is_terminal(v)) out.push_back(cc.vertex_img[v]);
    return out;
  }
  const Prototype& proto = emb.proto(c);
  if (proto.graph.root() && z == *proto.graph.root()) {
    if (proto.stage == "Flevel") return global_nprime_nonterminals(a);
    std::vector<VertexId> out;
    for (VertexId v = 0; v < proto.graph.vertex_count(); ++v)
      if (!proto.graph.is_terminal(v)) out.push_back(c.vertex_img[v]);
    return out;
  }
  throw structure_error("terminal " + std::to_string(z) + " of copy '" + c.key +
                        "' was never expanded");
}

}  // namespace

std::vector<RegisteredCut> registered_basic_cuts(const Assembly& a) {
  std::vector<RegisteredCut> out;
  std::set<std::vector<EdgeId>> seen;

  auto push = [&](std::string label, std::vector<EdgeId> cut, std::vector<VertexId> x0) {
    std::sort(cut.begin(), cut.end());
    std::sort(x0.begin(), x0.end());
    if (!seen.insert(cut).second) return;
    out.push_back({std::move(label), std::move(cut), std::move(x0)});
  };

  for (size_t i = 0; i < a.atoms.atoms.size(); ++i)
    push("atom " + a.atoms.atoms[i].key, a.atoms.atoms[i].bridges,
         a.atoms.atoms[i].non_terminals);

  if (a.params.ell == 0) {
    // every atom boundary doubles as a whole-copy cut for the global X0
    auto x0 = global_nprime_nonterminals(a);
    for (const Atom& atom : a.atoms.atoms) {
      std::vector<EdgeId> cut = atom.bridges;
      std::sort(cut.begin(), cut.end());
      if (seen.count(cut)) {
        // same cut, stronger certificate; register under the global X0 too
        out.push_back({"copy boundary " + atom.key, cut, x0});
      }
    }
    return out;
  }

  for (const auto& rec : a.emb.copies) {
    const Prototype& proto = a.emb.proto(rec);
    if (proto.stage != "Flevel" && proto.stage.rfind("F", 0) != 0) continue;
    if (proto.stage == "F0" || proto.stage == "K3x") continue;
    for (VertexId z : proto.graph.terminals()) {
      std::string zname;
      for (const auto& [n, v] : proto.names)
        if (v == z) zname = n;
      bool whole_copy =
          proto.stage == "Flevel" && proto.graph.root() && z == *proto.graph.root();
      std::string label = (whole_copy ? "copy boundary " : "delta(" + zname + ") ") +
                          (rec.key.empty() ? std::string("<top>") : rec.key);
      push(label, copy_delta(a.emb, rec.key, std::vector<VertexId>{z}),
           resolve_x0(a, rec, z));
    }
  }
  return out;
}

std::vector<RegisteredAlignedSet> registered_aligned_sets(const Assembly& a) {
  std::vector<RegisteredAlignedSet> out;

  for (size_t i = 0; i < a.atoms.atoms.size(); ++i)
    out.push_back({"atom " + a.atoms.atoms[i].key, a.atoms.atoms[i].vertices()});

  auto lift = [&](const CopyRecord& rec, std::initializer_list<const char*> names) {
    std::vector<VertexId> set;
    int idx = a.emb.find_copy(rec.key);
    for (const char* n : names) {
      VertexId sv = a.emb.source_vertex(rec, n);
      auto d = a.emb.descendants(idx, sv);
      set.insert(set.end(), d.begin(), d.end());
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    return set;
  };

  for (const auto& rec : a.emb.copies) {
    const std::string& stage = a.emb.proto(rec).stage;
    std::string where = rec.key.empty() ? std::string("<top>") : rec.key;
    if (stage == "Flevel") {
      for (auto [w, f] : {std::pair<const char*, const char*>{"w1", "f12"},
                          {"w2", "f21"},
                          {"w2", "f23"},
                          {"w3", "f32"},
                          {"w3", "f31"},
                          {"w1", "f13"}})
        out.push_back({std::string("{") + w + "," + f + "} " + where, lift(rec, {w, f})});
      out.push_back({"copy " + where, a.emb.copy_vertices(a.emb.find_copy(rec.key))});
    } else if (stage.size() >= 2 && stage[0] == 'F' && stage != "F0") {
      for (const char* side : {"1", "2"}) {
        std::string f = std::string("f") + side, uA = std::string("uA") + side,
                    uB = std::string("uB") + side, v = std::string("v") + side,
                    vp = v + "p", vpp = v + "pp";
        out.push_back({"{" + vp + "," + vpp + "} " + where, lift(rec, {vp.c_str(), vpp.c_str()})});
        out.push_back({"{" + vpp + "," + uB + "} " + where, lift(rec, {vpp.c_str(), uB.c_str()})});
        out.push_back({"{" + f + "," + uA + "} " + where, lift(rec, {f.c_str(), uA.c_str()})});
        out.push_back({"side " + f + " " + where,
                       lift(rec, {f.c_str(), uA.c_str(), uB.c_str(), v.c_str(), vp.c_str(),
                                  vpp.c_str()})});
      }
    }
  }
  return out;
}

void check_degree_invariants(const TerminalGraph& g, int k) {
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    int want = g.is_terminal(v) ? 3 * k : 3;
    if (g.degree(v) != want)
      throw structure_error("vertex " + std::to_string(v) + " has degree " +
                            std::to_string(g.degree(v)) + ", expected " +
                            std::to_string(want));
  }
}

void check_class_totals(const TerminalGraph& g, int k, int i) {
  if (!g.root()) throw structure_error("graph has no root");
  int a = 0, b = 0, c = 0;
  for (EdgeId e : g.incident_edges(*g.root())) {
    switch (g.edge(e).cls) {
      case EdgeClass::A: ++a; break;
      case EdgeClass::B: ++b; break;
      case EdgeClass::C: ++c; break;
      default:
        throw structure_error("unclassified edge on the root boundary");
    }
  }
  int want_a = 3 * k / 2, want_b = 3 * k / 2 - pow2(i), want_c = pow2(i);
  if (a != want_a || b != want_b || c != want_c)
    throw structure_error("class totals (" + std::to_string(a) + "," + std::to_string(b) +
                          "," + std::to_string(c) + ") do not match (" +
                          std::to_string(want_a) + "," + std::to_string(want_b) + "," +
                          std::to_string(want_c) + ")");
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (g.edge(e).cls != EdgeClass::Unclassified && !g.edge(e).incident(*g.root()))
      throw structure_error("classified edge away from the root");
}

std::string serialize_embedding(const Assembly& a) {
  nlohmann::ordered_json j;
  j["base"] = a.base_name;
  j["k"] = a.params.k;
  j["ell"] = a.params.ell;
  j["x"] = a.params.x;
  j["copies"] = nlohmann::ordered_json::array();
  for (const auto& rec : a.emb.copies) {
    nlohmann::ordered_json jr;
    jr["key"] = rec.key;
    jr["stage"] = a.emb.proto(rec).stage;
    jr["vertices"] = rec.vertex_img;
    jr["edges"] = rec.edge_img;
    nlohmann::ordered_json ch = nlohmann::ordered_json::object();
    for (const auto& [sv, child] : rec.child)
      ch[std::to_string(sv)] = a.emb.copies[child].key;
    jr["children"] = ch;
    j["copies"].push_back(jr);
  }
  return j.dump(2) + "\n";
}

std::string serialize_atoms(const Assembly& a) {
  nlohmann::ordered_json j;
  j["atoms"] = nlohmann::ordered_json::array();
  for (const Atom& atom : a.atoms.atoms) {
    j["atoms"].push_back({{"key", atom.key},
                          {"terminals", atom.terminals},
                          {"non_terminals", atom.non_terminals},
                          {"bridges", atom.bridges}});
  }
  return j.dump(2) + "\n";
}

}  // namespace tconnect
