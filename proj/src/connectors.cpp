#include "tconnect/connectors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "tconnect/catalog.hpp"
#include "tconnect/connectivity.hpp"

namespace tconnect {

std::string serialize_certificate(const ConnectorCertificate& cert) {
  nlohmann::ordered_json j;
  j["connectors"] = nlohmann::ordered_json::array();
  for (const auto& conn : cert.connectors) {
    nlohmann::ordered_json jc = nlohmann::ordered_json::array();
    for (const auto& p : conn)
      jc.push_back({{"vertices", p.vertices}, {"edges", p.edges}});
    j["connectors"].push_back(jc);
  }
  return j.dump(2) + "\n";
}

ConnectorCertificate deserialize_certificate(const std::string& bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(std::string("certificate parse error: ") + e.what());
  }
  try {
    ConnectorCertificate cert;
    for (const auto& jc : j.at("connectors")) {
      std::vector<TPath> conn;
      for (const auto& jp : jc) {
        TPath p;
        p.vertices = jp.at("vertices").get<std::vector<VertexId>>();
        p.edges = jp.at("edges").get<std::vector<EdgeId>>();
        conn.push_back(std::move(p));
      }
      cert.connectors.push_back(std::move(conn));
    }
    return cert;
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("certificate parse error: ") + e.what());
  }
}

namespace {

// path-shape check shared by the validator and shortcut
std::optional<std::string> path_defect(const TerminalGraph& g, const TPath& p) {
  if (p.vertices.size() < 2) return "path has fewer than two vertices";
  if (p.edges.size() + 1 != p.vertices.size()) return "edge/vertex counts disagree";
  for (VertexId v : p.vertices)
    if (v < 0 || v >= g.vertex_count()) return "unknown vertex id";
  for (EdgeId e : p.edges)
    if (e < 0 || e >= g.edge_count()) return "unknown edge id";
  if (!g.is_terminal(p.vertices.front()) || !g.is_terminal(p.vertices.back()))
    return "endpoint is not a terminal";
  for (size_t i = 1; i + 1 < p.vertices.size(); ++i)
    if (g.is_terminal(p.vertices[i])) return "internal vertex is a terminal";
  std::set<VertexId> seen(p.vertices.begin(), p.vertices.end());
  if (seen.size() != p.vertices.size()) return "repeated vertex";
  std::set<EdgeId> eseen(p.edges.begin(), p.edges.end());
  if (eseen.size() != p.edges.size()) return "repeated edge within the path";
  for (size_t i = 0; i < p.edges.size(); ++i) {
    const Edge& ed = g.edge(p.edges[i]);
    VertexId a = p.vertices[i], b = p.vertices[i + 1];
    if (!((ed.u == a && ed.v == b) || (ed.u == b && ed.v == a)))
      return "edge " + std::to_string(p.edges[i]) + " does not join consecutive vertices";
  }
  return std::nullopt;
}

}  // namespace

TerminalGraph shortcut(const TerminalGraph& g, const TPath& p) {
  if (auto defect = path_defect(g, p)) throw input_error("shortcut: " + *defect);
  std::set<EdgeId> drop(p.edges.begin(), p.edges.end());
  TerminalGraph out;
  for (VertexId v = 0; v < g.vertex_count(); ++v) out.add_vertex(g.kind(v));
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (drop.count(e)) continue;
    const Edge& ed = g.edge(e);
    EdgeId ne = out.add_edge(ed.u, ed.v, ed.cls);
    out.edge_mutable(ne).provenance = ed.provenance;
  }
  out.add_edge(p.vertices.front(), p.vertices.back());
  if (g.root()) out.set_root(*g.root());
  return out;
}

ValidationResult validate_certificate(const TerminalGraph& g,
                                      const ConnectorCertificate& cert) {
  ValidationResult res;

  for (size_t ci = 0; ci < cert.connectors.size(); ++ci) {
    for (size_t pi = 0; pi < cert.connectors[ci].size(); ++pi) {
      if (auto defect = path_defect(g, cert.connectors[ci][pi])) {
        res.violation = Violation{"path-shape", *defect, static_cast<int>(ci),
                                  static_cast<int>(pi), cert.connectors[ci][pi].edges};
        return res;
      }
    }
  }

  std::vector<int> used(g.edge_count(), -1);
  for (size_t ci = 0; ci < cert.connectors.size(); ++ci) {
    for (size_t pi = 0; pi < cert.connectors[ci].size(); ++pi) {
      for (EdgeId e : cert.connectors[ci][pi].edges) {
        if (used[e] >= 0) {
          res.violation = Violation{"edge-disjointness",
                                    "edge " + std::to_string(e) + " used twice",
                                    static_cast<int>(ci), static_cast<int>(pi), {e}};
          return res;
        }
        used[e] = static_cast<int>(ci);
      }
    }
  }

  auto terminals = g.terminals();
  std::map<VertexId, int> tid;
  for (size_t i = 0; i < terminals.size(); ++i) tid[terminals[i]] = static_cast<int>(i);

  for (size_t ci = 0; ci < cert.connectors.size(); ++ci) {
    // the auxiliary graph: one edge on T per shortcut path
    std::vector<int> parent(terminals.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    for (const auto& p : cert.connectors[ci]) {
      int a = find(tid[p.vertices.front()]);
      int b = find(tid[p.vertices.back()]);
      parent[a] = b;
    }
    std::set<int> roots;
    for (size_t i = 0; i < parent.size(); ++i) roots.insert(find(static_cast<int>(i)));
    if (roots.size() > 1) {
      res.violation =
          Violation{"connectivity",
                    "connector " + std::to_string(ci) + " leaves the terminal set in " +
                        std::to_string(roots.size()) + " components",
                    static_cast<int>(ci), -1, {}};
      return res;
    }
  }

  res.ok = true;
  return res;
}

// ---------------------------------------------------------------------------
// exact packing search

namespace {

struct PackSearch {
  const TerminalGraph& g;
  int k;
  std::vector<VertexId> terminals;
  std::map<VertexId, int> tid;
  std::vector<char> edge_used;
  // per connector: union-find over terminals + path list + last min-edge
  struct Conn {
    std::vector<int> parent;
    int components;
    std::vector<TPath> paths;
    int last_min_edge = -1;
  };
  std::vector<Conn> conns;
  long long nodes = 0, budget = -1;
  bool out_of_budget = false;
  std::optional<ConnectorCertificate> found;

  PackSearch(const TerminalGraph& graph, int kk, long long b) : g(graph), k(kk), budget(b) {
    terminals = g.terminals();
    for (size_t i = 0; i < terminals.size(); ++i) tid[terminals[i]] = static_cast<int>(i);
    edge_used.assign(g.edge_count(), 0);
    for (int i = 0; i < k; ++i) {
      Conn c;
      c.parent.resize(terminals.size());
      for (size_t j = 0; j < c.parent.size(); ++j) c.parent[j] = static_cast<int>(j);
      c.components = static_cast<int>(terminals.size());
      conns.push_back(std::move(c));
    }
  }

  int find(Conn& c, int v) {
    while (c.parent[v] != v) v = c.parent[v] = c.parent[c.parent[v]];
    return v;
  }

  // all T-paths over free edges joining two different components of c,
  // respecting the within-connector min-edge ordering
  std::vector<TPath> candidates(Conn& c) {
    std::vector<TPath> out;
    std::vector<char> on_path(g.vertex_count(), 0);
    TPath cur;

    std::function<void(VertexId)> dfs = [&](VertexId v) {
      for (EdgeId e : g.incident_edges(v)) {
        if (edge_used[e]) continue;
        if (!cur.edges.empty() && e == cur.edges.back()) continue;
        if (std::find(cur.edges.begin(), cur.edges.end(), e) != cur.edges.end()) continue;
        VertexId w = g.edge(e).other(v);
        if (w == v || on_path[w]) continue;
        int min_edge = std::min(e, cur.edges.empty() ? e : *std::min_element(
                                                               cur.edges.begin(),
                                                               cur.edges.end()));
        if (min_edge <= c.last_min_edge) continue;
        if (g.is_terminal(w)) {
          if (find(c, tid[w]) != find(c, tid[cur.vertices.front()])) {
            TPath p = cur;
            p.vertices.push_back(w);
            p.edges.push_back(e);
            out.push_back(std::move(p));
          }
          continue;
        }
        cur.vertices.push_back(w);
        cur.edges.push_back(e);
        on_path[w] = 1;
        dfs(w);
        on_path[w] = 0;
        cur.vertices.pop_back();
        cur.edges.pop_back();
      }
    };

    for (VertexId t : terminals) {
      cur.vertices = {t};
      cur.edges.clear();
      on_path.assign(g.vertex_count(), 0);
      on_path[t] = 1;
      dfs(t);
      on_path[t] = 0;
    }

    // shortest first, then lexicographic on edge ids
    std::sort(out.begin(), out.end(), [](const TPath& a, const TPath& b) {
      if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
      return a.edges < b.edges;
    });
    // drop duplicates seen from both endpoints
    std::vector<TPath> dedup;
    std::set<std::vector<EdgeId>> seen;
    for (auto& p : out) {
      auto key = p.edges;
      std::sort(key.begin(), key.end());
      if (seen.insert(key).second) dedup.push_back(std::move(p));
    }
    return dedup;
  }

  bool search() {
    if (out_of_budget || found) return found.has_value();
    if (budget >= 0 && ++nodes > budget) {
      out_of_budget = true;
      return false;
    }

    int best = -1, best_components = 1 << 30;
    int deficit = 0;
    for (int i = 0; i < k; ++i) {
      deficit += conns[i].components - 1;
      if (conns[i].components > 1 && conns[i].components < best_components) {
        best_components = conns[i].components;
        best = i;
      }
    }
    if (best < 0) {
      ConnectorCertificate cert;
      for (auto& c : conns) cert.connectors.push_back(c.paths);
      found = std::move(cert);
      return true;
    }
    int free_edges = 0;
    for (char u : edge_used)
      if (!u) ++free_edges;
    if (deficit > free_edges) return false;

    Conn& c = conns[best];
    for (TPath& p : candidates(c)) {
      // apply
      for (EdgeId e : p.edges) edge_used[e] = 1;
      int a = find(c, tid[p.vertices.front()]);
      int b = find(c, tid[p.vertices.back()]);
      int old_parent = c.parent[a];
      c.parent[a] = b;
      c.components--;
      int old_min = c.last_min_edge;
      c.last_min_edge = *std::min_element(p.edges.begin(), p.edges.end());
      c.paths.push_back(p);

      if (search()) return true;

      c.paths.pop_back();
      c.last_min_edge = old_min;
      c.components++;
      c.parent[a] = old_parent;
      for (EdgeId e : p.edges) edge_used[e] = 0;
      if (out_of_budget) return false;
    }
    return false;
  }
};

}  // namespace

PackOutcome pack_exact(const TerminalGraph& g, int k, long long node_budget) {
  if (k < 1) throw input_error("pack_exact: k must be positive");
  PackOutcome out;
  auto terminals = g.terminals();
  if (terminals.size() < 2) {
    out.status = PackStatus::Found;
    out.certificate.connectors.assign(k, {});
    return out;
  }

  PackSearch s(g, k, node_budget);
  s.search();
  out.nodes = s.nodes;
  if (s.found) {
    out.status = PackStatus::Found;
    out.certificate = *s.found;
  } else {
    out.status = s.out_of_budget ? PackStatus::BudgetExceeded : PackStatus::None;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hamilton-cycle lifting (k = 1)

ConnectorCertificate lift_hamilton_cycle(const Assembly& a,
                                         std::span<const VertexId> cycle) {
  if (a.params.ell != 0)
    throw input_error("lifting is defined for the k = 1 construction only");
  if (!check_cycle(a.base, std::vector<VertexId>(cycle.begin(), cycle.end())))
    throw input_error("input is not a Hamilton cycle of the base graph");

  std::vector<char> is_x(a.base.vertex_count(), 0);
  for (VertexId v : a.base_x) is_x[v] = 1;

  // rotate so the cycle starts on a terminal-side vertex
  std::vector<VertexId> cyc(cycle.begin(), cycle.end());
  while (!is_x[cyc.front()]) std::rotate(cyc.begin(), cyc.begin() + 1, cyc.end());
  size_t n = cyc.size();

  auto base_edge_between = [&](VertexId u, VertexId v) -> EdgeId {
    for (EdgeId e : a.base.incident_edges(u))
      if (a.base.edge(e).other(u) == v) return e;
    throw input_error("cycle uses a non-edge of the base graph");
  };
  auto final_edge_for = [&](EdgeId base_edge) -> EdgeId {
    auto fibre = a.base_edge_fibre(base_edge);
    if (fibre.size() != 1) throw structure_error("fibre size is not 1 at k = 1");
    return fibre[0];
  };
  auto atom_of_bridge = [&](EdgeId final_edge) -> const Atom& {
    for (const Atom& atom : a.atoms.atoms)
      if (std::binary_search(atom.bridges.begin(), atom.bridges.end(), final_edge))
        return atom;
    throw structure_error("no atom owns bridge edge " + std::to_string(final_edge));
  };
  auto edge_between = [&](VertexId u, VertexId v) -> EdgeId {
    for (EdgeId e : a.graph.incident_edges(u))
      if (a.graph.edge(e).other(u) == v) return e;
    throw structure_error("expected edge missing inside an atom");
  };

  struct Hop {
    const Atom* atom;
    VertexId n_in = -1, n_out = -1, n_mid = -1;
    VertexId t_in, t_out;
    EdgeId bridge_in, bridge_out;
    VertexId y_prev;  // final id of the non-terminal before the atom
  };
  std::vector<Hop> hops;

  // at k = 1 the replacement graph has one vertex per base vertex, in
  // base order, so source ids coincide with base ids
  const CopyRecord& nrec = a.emb.copy("");
  auto y_final = [&](VertexId base_y) -> VertexId { return nrec.vertex_img[base_y]; };

  for (size_t j = 0; j < n; j += 2) {
    VertexId x = cyc[j];
    VertexId y_prev = cyc[(j + n - 1) % n];
    VertexId y_next = cyc[j + 1];
    EdgeId be_in = base_edge_between(y_prev, x);
    EdgeId be_out = base_edge_between(x, y_next);
    EdgeId f_in = final_edge_for(be_in);
    EdgeId f_out = final_edge_for(be_out);
    const Atom& atom = atom_of_bridge(f_in);

    Hop h;
    h.atom = &atom;
    h.bridge_in = f_in;
    h.bridge_out = f_out;
    h.y_prev = y_final(y_prev);
    // the atom-side endpoints of the two bridges
    auto atom_end = [&](EdgeId e) {
      const Edge& ed = a.graph.edge(e);
      for (VertexId nv : atom.non_terminals)
        if (ed.u == nv || ed.v == nv) return nv;
      throw structure_error("bridge does not meet its atom");
    };
    h.n_in = atom_end(f_in);
    h.n_out = atom_end(f_out);
    for (VertexId nv : atom.non_terminals)
      if (nv != h.n_in && nv != h.n_out) h.n_mid = nv;
    h.t_in = std::min(atom.terminals[0], atom.terminals[1]);
    h.t_out = std::max(atom.terminals[0], atom.terminals[1]);
    hops.push_back(h);
  }

  ConnectorCertificate cert;
  cert.connectors.emplace_back();
  auto& conn = cert.connectors.back();

  for (size_t j = 0; j < hops.size(); ++j) {
    const Hop& h = hops[j];
    const Hop& next = hops[(j + 1) % hops.size()];
    // crossing path inside the atom
    TPath cross;
    cross.vertices = {h.t_in, h.n_mid, h.t_out};
    cross.edges = {edge_between(h.t_in, h.n_mid), edge_between(h.n_mid, h.t_out)};
    conn.push_back(std::move(cross));
    // hop path to the next atom
    TPath hop;
    hop.vertices = {h.t_out, h.n_out, next.y_prev, next.n_in, next.t_in};
    hop.edges = {edge_between(h.t_out, h.n_out), h.bridge_out, next.bridge_in,
                 edge_between(next.n_in, next.t_in)};
    conn.push_back(std::move(hop));
  }
  return cert;
}

// ---------------------------------------------------------------------------
// projections

TerminalGraph project_to_atom_graph(const TerminalGraph& g, const AtomRegistry& registry,
                                    std::span<const EdgeId> qi) {
  std::vector<int> atom_of(g.vertex_count(), -1);
  for (size_t i = 0; i < registry.atoms.size(); ++i)
    for (VertexId v : registry.atoms[i].vertices()) atom_of[v] = static_cast<int>(i);

  std::vector<char> atom_touched(registry.atoms.size(), 0);
  std::vector<char> vertex_touched(g.vertex_count(), 0);
  for (EdgeId e : qi) {
    g.check_edge(e);
    for (VertexId v : {g.edge(e).u, g.edge(e).v}) {
      if (atom_of[v] >= 0)
        atom_touched[atom_of[v]] = 1;
      else
        vertex_touched[v] = 1;
    }
  }

  TerminalGraph contracted;
  std::vector<VertexId> atom_img(registry.atoms.size(), -1);
  std::vector<VertexId> vertex_img(g.vertex_count(), -1);
  for (size_t i = 0; i < registry.atoms.size(); ++i)
    if (atom_touched[i]) atom_img[i] = contracted.add_vertex(VertexKind::Terminal);
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (vertex_touched[v]) vertex_img[v] = contracted.add_vertex(g.kind(v));

  auto img = [&](VertexId v) {
    return atom_of[v] >= 0 ? atom_img[atom_of[v]] : vertex_img[v];
  };
  for (EdgeId e : qi) {
    VertexId u = img(g.edge(e).u), v = img(g.edge(e).v);
    if (u == v) continue;  // intra-atom edge: discarded loop
    contracted.add_edge(u, v);
  }
  return suppress_and_clean(contracted).graph;
}

BaseProjection project_to_base(const Assembly& a, std::span<const EdgeId> q) {
  BaseProjection out;
  std::vector<char> in_q(a.graph.edge_count(), 0);
  for (EdgeId e : q) {
    a.graph.check_edge(e);
    in_q[e] = 1;
  }

  for (EdgeId be = 0; be < a.base.edge_count(); ++be) {
    auto fibre = a.base_edge_fibre(be);
    int used = 0;
    for (EdgeId e : fibre) used += in_q[e];
    if (used != 0 && used != static_cast<int>(fibre.size())) {
      out.witness = be;
      return out;
    }
    if (used > 0) out.base_edges.push_back(be);
  }
  out.ok = true;

  std::vector<int> deg(a.base.vertex_count(), 0);
  for (EdgeId be : out.base_edges) {
    deg[a.base.edge(be).u]++;
    deg[a.base.edge(be).v]++;
  }
  out.two_regular = true;
  for (int d : deg)
    if (d != 2) out.two_regular = false;

  // connectivity over the projected edges, spanning all of N
  std::vector<std::vector<VertexId>> adj(a.base.vertex_count());
  for (EdgeId be : out.base_edges) {
    adj[a.base.edge(be).u].push_back(a.base.edge(be).v);
    adj[a.base.edge(be).v].push_back(a.base.edge(be).u);
  }
  std::vector<char> seen(a.base.vertex_count(), 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  int cnt = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (VertexId w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++cnt;
        stack.push_back(w);
      }
  }
  out.connected_spanning = cnt == a.base.vertex_count();
  out.hamilton_cycle = out.two_regular && out.connected_spanning &&
                       static_cast<int>(out.base_edges.size()) == a.base.vertex_count();
  return out;
}

// ---------------------------------------------------------------------------
// the packing audit

std::vector<EdgeId> certificate_edges(const ConnectorCertificate& cert) {
  std::vector<EdgeId> out;
  for (const auto& conn : cert.connectors)
    for (const auto& p : conn) out.insert(out.end(), p.edges.begin(), p.edges.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PackingAudit audit_packing(const Assembly& a, const ConnectorCertificate& cert, VertexId r,
                           const AuditOptions& opts) {
  PackingAudit audit;
  a.graph.check_vertex(r);
  if (!a.graph.is_terminal(r)) throw input_error("audit: r must be a terminal");

  auto validation = validate_certificate(a.graph, cert);
  audit.certificate_valid = validation.ok;
  audit.violation = validation.violation;
  if (!validation.ok) return audit;

  int k = a.params.k;
  auto q_edges = certificate_edges(cert);
  std::vector<char> in_q(a.graph.edge_count(), 0);
  for (EdgeId e : q_edges) in_q[e] = 1;
  auto count_in_q = [&](const std::vector<EdgeId>& edges) {
    int c = 0;
    for (EdgeId e : edges) c += in_q[e];
    return c;
  };

  audit.cuts_pass = true;
  for (const auto& cut : registered_basic_cuts(a)) {
    AuditCount c{cut.label, count_in_q(cut.cut), 2 * k, false};
    c.pass = c.count == c.expected;
    audit.cuts_pass = audit.cuts_pass && c.pass;
    audit.basic_cuts.push_back(std::move(c));
  }

  audit.aligned_pass = true;
  auto note_aligned = [&](const std::string& label, const std::vector<VertexId>& set) {
    if (set.empty()) return;
    if (std::find(set.begin(), set.end(), r) != set.end()) return;  // must avoid r
    AuditCount c{label, static_cast<int>(0), 2 * k, false};
    c.count = count_in_q(a.graph.boundary(set));
    c.pass = c.count >= c.expected;
    audit.aligned_pass = audit.aligned_pass && c.pass;
    audit.aligned_sets.push_back(std::move(c));
  };
  for (const auto& reg : registered_aligned_sets(a)) note_aligned(reg.label, reg.set);

  // seeded random aligned sets: atoms in or out as blocks, loose
  // non-terminals independently
  std::mt19937_64 rng(opts.seed);
  std::vector<char> in_atom(a.graph.vertex_count(), 0);
  for (const Atom& atom : a.atoms.atoms)
    for (VertexId v : atom.vertices()) in_atom[v] = 1;
  int r_atom = a.atoms.find_by_vertex(r);
  for (int s = 0; s < opts.aligned_samples; ++s) {
    std::vector<VertexId> set;
    for (size_t ai = 0; ai < a.atoms.atoms.size(); ++ai) {
      if (static_cast<int>(ai) == r_atom) continue;
      if (rng() & 1) {
        auto vs = a.atoms.atoms[ai].vertices();
        set.insert(set.end(), vs.begin(), vs.end());
      }
    }
    for (VertexId v = 0; v < a.graph.vertex_count(); ++v)
      if (!in_atom[v] && (rng() & 1)) set.push_back(v);
    if (set.empty() || static_cast<int>(set.size()) == a.graph.vertex_count()) continue;
    std::sort(set.begin(), set.end());
    note_aligned("random sample " + std::to_string(s), set);
  }

  // per-copy boundary and induced counts
  for (const auto& rec : a.emb.copies) {
    const std::string& stage = a.emb.proto(rec).stage;
    std::string where = rec.key.empty() ? std::string("<top>") : rec.key;
    auto delta_count = [&](const char* name) {
      return count_in_q(copy_delta_names(a.emb, rec.key, std::vector<std::string>{name}));
    };
    auto eps_count = [&](const char* na, const char* nb) {
      return count_in_q(
          copy_epsilon_names(a.emb, rec.key, std::vector<std::string>{na, nb}));
    };
    if (stage.size() >= 2 && stage[0] == 'F' && stage != "F0" && stage != "Flevel") {
      for (const char* nm : {"v1p", "v1pp", "uB1", "v2p", "v2pp", "uB2"}) {
        AuditCount c{"|delta_Q(" + std::string(nm) + ")| " + where, delta_count(nm), 2 * k,
                     false};
        c.pass = c.count == c.expected;
        audit.copy_deltas.push_back(std::move(c));
      }
      for (auto [na, nb] : {std::pair<const char*, const char*>{"v1p", "v1pp"},
                            {"v2p", "v2pp"}}) {
        AuditCount c{"|eps_Q(" + std::string(na) + "," + nb + ")| " + where,
                     eps_count(na, nb), k, false};
        c.pass = c.count == c.expected;
        audit.copy_epsilons.push_back(std::move(c));
      }
    } else if (stage == "Flevel") {
      for (const char* nm : {"w1", "w2", "w3"}) {
        AuditCount c{"|delta_Q(" + std::string(nm) + ")| " + where, delta_count(nm), 2 * k,
                     false};
        c.pass = c.count == c.expected;
        audit.copy_deltas.push_back(std::move(c));
      }
      for (auto [na, nb] : {std::pair<const char*, const char*>{"w1", "f12"},
                            {"w2", "f21"}}) {
        AuditCount c{"|eps_Q(" + std::string(na) + "," + nb + ")| " + where,
                     eps_count(na, nb), k, false};
        c.pass = c.count == c.expected;
        audit.copy_epsilons.push_back(std::move(c));
      }
    }
  }

  // all-or-nothing checks: output-edge fibres of embedded copies ...
  audit.fibres_pass = true;
  for (const auto& rec : a.emb.copies) {
    const Prototype& proto = a.emb.proto(rec);
    if (proto.stage.size() < 2 || proto.stage[0] != 'F' || proto.stage == "Flevel")
      continue;
    if (!proto.graph.root()) continue;
    std::vector<EdgeId> final_edges;
    for (EdgeId e : proto.graph.incident_edges(*proto.graph.root()))
      if (proto.graph.edge(e).cls == EdgeClass::C) final_edges.push_back(rec.edge_img[e]);
    PackingAudit::FibreStatus f;
    f.label = "output edges " + (rec.key.empty() ? std::string("<top>") : rec.key);
    f.size = static_cast<int>(final_edges.size());
    f.used = count_in_q(final_edges);
    f.all_or_nothing = f.used == 0 || f.used == f.size;
    audit.fibres_pass = audit.fibres_pass && f.all_or_nothing;
    audit.output_fibres.push_back(std::move(f));
  }
  // ... and base-edge fibres
  if (!a.nprime_edge_base.empty()) {
    for (EdgeId be = 0; be < a.base.edge_count(); ++be) {
      auto fibre = a.base_edge_fibre(be);
      PackingAudit::FibreStatus f;
      f.label = "base edge " + std::to_string(be);
      f.size = static_cast<int>(fibre.size());
      f.used = count_in_q(fibre);
      f.all_or_nothing = f.used == 0 || f.used == f.size;
      audit.fibres_pass = audit.fibres_pass && f.all_or_nothing;
      audit.base_fibres.push_back(std::move(f));
    }
  }

  // Q_i - r connected
  audit.connectors_pass = true;
  for (const auto& conn : cert.connectors) {
    std::set<VertexId> vs;
    std::vector<std::pair<VertexId, VertexId>> es;
    for (const auto& p : conn)
      for (size_t i = 0; i + 1 < p.vertices.size(); ++i) {
        VertexId u = p.vertices[i], v = p.vertices[i + 1];
        if (u == r || v == r) continue;
        vs.insert(u);
        vs.insert(v);
        es.push_back({u, v});
      }
    bool connected = true;
    if (!vs.empty()) {
      std::map<VertexId, std::vector<VertexId>> adj;
      for (auto [u, v] : es) {
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
      std::set<VertexId> seen;
      std::vector<VertexId> stack{*vs.begin()};
      seen.insert(*vs.begin());
      while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (VertexId w : adj[v])
          if (seen.insert(w).second) stack.push_back(w);
      }
      connected = seen.size() == vs.size();
    }
    audit.connector_connected.push_back(connected);
    audit.connectors_pass = audit.connectors_pass && connected;
  }

  // Q degree 0 or 2 on every non-terminal (a consequence of minimality,
  // reported as a warning rather than a failure)
  std::vector<int> qdeg(a.graph.vertex_count(), 0);
  for (EdgeId e : q_edges) {
    qdeg[a.graph.edge(e).u]++;
    qdeg[a.graph.edge(e).v]++;
  }
  for (VertexId v = 0; v < a.graph.vertex_count(); ++v)
    if (!a.graph.is_terminal(v) && qdeg[v] != 0 && qdeg[v] != 2) {
      audit.degrees_ok = false;
      audit.degree_witnesses.push_back(v);
    }

  bool core_pass = audit.cuts_pass && audit.aligned_pass && audit.connectors_pass &&
                   audit.fibres_pass;
  if (core_pass && !a.nprime_edge_base.empty()) {
    audit.projection_attempted = true;
    audit.projection = project_to_base(a, q_edges);
  }
  audit.pass = core_pass;
  return audit;
}

std::string audit_to_json(const PackingAudit& audit) {
  nlohmann::ordered_json j;
  j["certificate_valid"] = audit.certificate_valid;
  if (audit.violation) {
    j["violation"] = {{"clause", audit.violation->clause},
                      {"detail", audit.violation->detail},
                      {"connector", audit.violation->connector},
                      {"path", audit.violation->path},
                      {"edges", audit.violation->edges}};
  }
  auto counts = [](const std::vector<AuditCount>& v) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : v)
      arr.push_back({{"label", c.label},
                     {"count", c.count},
                     {"expected", c.expected},
                     {"pass", c.pass}});
    return arr;
  };
  j["basic_cuts"] = counts(audit.basic_cuts);
  j["aligned_sets"] = counts(audit.aligned_sets);
  j["copy_deltas"] = counts(audit.copy_deltas);
  j["copy_epsilons"] = counts(audit.copy_epsilons);
  auto fibres = [](const std::vector<PackingAudit::FibreStatus>& v) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& f : v)
      arr.push_back({{"label", f.label},
                     {"used", f.used},
                     {"size", f.size},
                     {"all_or_nothing", f.all_or_nothing}});
    return arr;
  };
  j["output_fibres"] = fibres(audit.output_fibres);
  j["base_fibres"] = fibres(audit.base_fibres);
  j["connector_connected"] = audit.connector_connected;
  j["nonterminal_degrees_ok"] = audit.degrees_ok;
  j["degree_witnesses"] = audit.degree_witnesses;
  j["checks"] = {{"cuts", audit.cuts_pass},
                 {"aligned", audit.aligned_pass},
                 {"connectors", audit.connectors_pass},
                 {"fibres", audit.fibres_pass}};
  if (audit.projection_attempted) {
    j["projection"] = {{"ok", audit.projection.ok},
                       {"witness", audit.projection.witness},
                       {"base_edges", audit.projection.base_edges},
                       {"two_regular", audit.projection.two_regular},
                       {"connected_spanning", audit.projection.connected_spanning},
                       {"hamilton_cycle", audit.projection.hamilton_cycle}};
  }
  j["pass"] = audit.pass;
  return j.dump(2) + "\n";
}

}  // namespace tconnect
