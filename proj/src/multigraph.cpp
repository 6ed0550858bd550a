#include "tconnect/multigraph.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tconnect {

char class_letter(EdgeClass c) {
  switch (c) {
    case EdgeClass::A: return 'A';
    case EdgeClass::B: return 'B';
    case EdgeClass::C: return 'C';
    default: return '-';
  }
}

EdgeClass class_from_letter(char c) {
  switch (c) {
    case 'A': return EdgeClass::A;
    case 'B': return EdgeClass::B;
    case 'C': return EdgeClass::C;
    default: throw input_error("unknown edge class letter");
  }
}

void TerminalGraph::check_vertex(VertexId v) const {
  if (v < 0 || v >= vertex_count())
    throw input_error("unknown vertex id " + std::to_string(v));
}

void TerminalGraph::check_edge(EdgeId e) const {
  if (e < 0 || e >= edge_count())
    throw input_error("unknown edge id " + std::to_string(e));
}

VertexId TerminalGraph::add_vertex(VertexKind kind) {
  kinds_.push_back(kind);
  incidence_.emplace_back();
  return static_cast<VertexId>(kinds_.size()) - 1;
}

EdgeId TerminalGraph::add_edge(VertexId u, VertexId v, EdgeClass cls) {
  check_vertex(u);
  check_vertex(v);
  EdgeId id = static_cast<EdgeId>(edges_.size());
  edges_.push_back(Edge{u, v, cls, {}});
  incidence_[u].push_back(id);
  if (v != u) incidence_[v].push_back(id);
  return id;
}

void TerminalGraph::set_root(std::optional<VertexId> r) {
  if (r) {
    check_vertex(*r);
    if (!is_terminal(*r)) throw input_error("root must be a terminal");
  }
  root_ = r;
}

void TerminalGraph::set_edge_class(EdgeId e, EdgeClass cls) {
  check_edge(e);
  edges_[e].cls = cls;
}

std::vector<VertexId> TerminalGraph::vertices() const {
  std::vector<VertexId> out(vertex_count());
  for (int i = 0; i < vertex_count(); ++i) out[i] = i;
  return out;
}

std::vector<VertexId> TerminalGraph::terminals() const {
  std::vector<VertexId> out;
  for (int i = 0; i < vertex_count(); ++i)
    if (kinds_[i] == VertexKind::Terminal) out.push_back(i);
  return out;
}

std::vector<VertexId> TerminalGraph::non_terminals() const {
  std::vector<VertexId> out;
  for (int i = 0; i < vertex_count(); ++i)
    if (kinds_[i] == VertexKind::NonTerminal) out.push_back(i);
  return out;
}

namespace {

std::vector<char> membership(const TerminalGraph& g, std::span<const VertexId> x) {
  std::vector<char> in(g.vertex_count(), 0);
  for (VertexId v : x) {
    g.check_vertex(v);
    in[v] = 1;
  }
  return in;
}

}  // namespace

std::vector<EdgeId> TerminalGraph::boundary(std::span<const VertexId> x) const {
  auto in = membership(*this, x);
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < edge_count(); ++e) {
    const Edge& ed = edges_[e];
    if (in[ed.u] != in[ed.v]) out.push_back(e);
  }
  return out;
}

int TerminalGraph::set_degree(std::span<const VertexId> x) const {
  return static_cast<int>(boundary(x).size());
}

std::vector<EdgeId> TerminalGraph::induced_edge_set(std::span<const VertexId> x) const {
  auto in = membership(*this, x);
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < edge_count(); ++e) {
    const Edge& ed = edges_[e];
    if (in[ed.u] && in[ed.v]) out.push_back(e);
  }
  return out;
}

std::vector<VertexId> TerminalGraph::neighbours(VertexId v) const {
  check_vertex(v);
  std::vector<VertexId> out;
  for (EdgeId e : incidence_[v]) out.push_back(edges_[e].other(v));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool TerminalGraph::has_self_loop() const {
  for (const Edge& e : edges_)
    if (e.u == e.v) return true;
  return false;
}

ContractionResult contract(const TerminalGraph& g, std::span<const VertexId> x) {
  if (x.empty()) throw input_error("contract: empty vertex set");
  auto in = membership(g, x);

  ContractionResult res;
  res.vertex_map.assign(g.vertex_count(), -1);

  bool merged_terminal = false;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (in[v] && g.is_terminal(v)) merged_terminal = true;

  // Merged vertex first would disturb id order; keep construction order:
  // surviving vertices in old order, merged vertex at the position of the
  // smallest member of X.
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (in[v]) {
      if (res.merged < 0) {
        res.merged = res.graph.add_vertex(merged_terminal ? VertexKind::Terminal
                                                          : VertexKind::NonTerminal);
      }
      res.vertex_map[v] = res.merged;
    } else {
      res.vertex_map[v] = res.graph.add_vertex(g.kind(v));
    }
  }

  res.edge_map.assign(g.edge_count(), -1);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    VertexId nu = res.vertex_map[ed.u];
    VertexId nv = res.vertex_map[ed.v];
    if (nu == nv) continue;  // loop: discarded
    EdgeId ne = res.graph.add_edge(nu, nv, ed.cls);
    res.graph.edge_mutable(ne).provenance = ed.provenance;
    res.edge_map[e] = ne;
  }

  if (g.root() && res.vertex_map[*g.root()] >= 0 &&
      res.graph.is_terminal(res.vertex_map[*g.root()])) {
    res.graph.set_root(res.vertex_map[*g.root()]);
  }
  return res;
}

SuppressionResult suppress_and_clean(const TerminalGraph& g) {
  // Work on a mutable copy of the incidence structure: alive flags plus
  // edge endpoint rewrites as suppression chains collapse.
  int n = g.vertex_count();
  std::vector<char> vertex_alive(n, 1);
  struct E {
    VertexId u, v;
    bool alive;
    std::vector<ProvenanceStep> prov;
    EdgeClass cls;
  };
  std::vector<E> es;
  es.reserve(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    es.push_back(E{ed.u, ed.v, true, ed.provenance, ed.cls});
  }

  auto live_incident = [&](VertexId v) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(es.size()); ++i)
      if (es[i].alive && (es[i].u == v || es[i].v == v)) out.push_back(i);
    return out;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (VertexId v = 0; v < n; ++v) {
      if (!vertex_alive[v] || g.is_terminal(v)) continue;
      auto inc = live_incident(v);
      if (inc.empty()) {
        vertex_alive[v] = 0;
        changed = true;
      } else if (inc.size() == 2) {
        VertexId a = es[inc[0]].u == v ? es[inc[0]].v : es[inc[0]].u;
        VertexId b = es[inc[1]].u == v ? es[inc[1]].v : es[inc[1]].u;
        if (a == b && a == v) throw structure_error("suppression hit a self-loop");
        if (a == b)
          throw structure_error("suppression would create a self-loop at vertex " +
                                std::to_string(a));
        // splice: merge the two edges into one, keep both histories
        es[inc[0]].u = a;
        es[inc[0]].v = b;
        for (auto& p : es[inc[1]].prov) es[inc[0]].prov.push_back(p);
        es[inc[0]].cls = EdgeClass::Unclassified;
        es[inc[1]].alive = false;
        vertex_alive[v] = 0;
        changed = true;
      }
    }
  }

  for (VertexId v = 0; v < n; ++v) {
    if (!vertex_alive[v] || g.is_terminal(v)) continue;
    size_t d = live_incident(v).size();
    if (d == 1 || d >= 3)
      throw structure_error("non-terminal " + std::to_string(v) + " has degree " +
                            std::to_string(d) + " after suppression");
  }

  SuppressionResult res;
  res.vertex_map.assign(n, -1);
  for (VertexId v = 0; v < n; ++v)
    if (vertex_alive[v]) res.vertex_map[v] = res.graph.add_vertex(g.kind(v));
  for (auto& e : es) {
    if (!e.alive) continue;
    EdgeId ne = res.graph.add_edge(res.vertex_map[e.u], res.vertex_map[e.v], e.cls);
    res.graph.edge_mutable(ne).provenance = e.prov;
  }
  if (g.root() && res.vertex_map[*g.root()] >= 0)
    res.graph.set_root(res.vertex_map[*g.root()]);
  return res;
}

std::string serialize(const TerminalGraph& g) {
  nlohmann::ordered_json j;
  j["vertices"] = nlohmann::ordered_json::array();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    j["vertices"].push_back(
        {{"id", v}, {"kind", g.is_terminal(v) ? "terminal" : "nonterminal"}});
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    nlohmann::ordered_json je{{"id", e}, {"u", ed.u}, {"v", ed.v}};
    if (ed.cls == EdgeClass::Unclassified)
      je["class"] = nullptr;
    else
      je["class"] = std::string(1, class_letter(ed.cls));
    j["edges"].push_back(je);
  }
  if (g.root())
    j["root"] = *g.root();
  else
    j["root"] = nullptr;
  return j.dump(2) + "\n";
}

TerminalGraph deserialize(const std::string& bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(std::string("graph parse error: ") + e.what());
  }
  try {
    if (!j.contains("vertices") || !j.contains("edges"))
      throw input_error("graph json needs 'vertices' and 'edges'");

    // Accept arbitrary ids; remap to dense ids preserving ascending order.
    std::map<long long, std::pair<VertexKind, VertexId>> vmap;
    for (const auto& jv : j["vertices"]) {
      long long id = jv.at("id").get<long long>();
      std::string kind = jv.at("kind").get<std::string>();
      if (kind != "terminal" && kind != "nonterminal")
        throw input_error("vertex kind must be terminal|nonterminal");
      if (vmap.count(id)) throw input_error("duplicate vertex id");
      vmap[id] = {kind == "terminal" ? VertexKind::Terminal : VertexKind::NonTerminal, -1};
    }
    TerminalGraph g;
    for (auto& [id, entry] : vmap) entry.second = g.add_vertex(entry.first);

    std::map<long long, const nlohmann::json*> emap;
    for (const auto& je : j["edges"]) {
      long long id = je.at("id").get<long long>();
      if (emap.count(id)) throw input_error("duplicate edge id");
      emap[id] = &je;
    }
    for (auto& [id, je] : emap) {
      long long u = je->at("u").get<long long>();
      long long v = je->at("v").get<long long>();
      if (!vmap.count(u) || !vmap.count(v))
        throw input_error("edge endpoint references unknown vertex");
      EdgeClass cls = EdgeClass::Unclassified;
      if (je->contains("class") && !(*je)["class"].is_null()) {
        std::string s = (*je)["class"].get<std::string>();
        if (s.size() != 1) throw input_error("edge class must be A|B|C");
        cls = class_from_letter(s[0]);
      }
      g.add_edge(vmap[u].second, vmap[v].second, cls);
    }
    if (j.contains("root") && !j["root"].is_null()) {
      long long r = j["root"].get<long long>();
      if (!vmap.count(r)) throw input_error("root references unknown vertex");
      g.set_root(vmap[r].second);
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("graph parse error: ") + e.what());
  }
}

std::string to_dot(const TerminalGraph& g, const std::string& name) {
  // Parallel edges are bundled into one drawn edge with a multiplicity label.
  std::ostringstream os;
  os << "graph " << name << " {\n";
  os << "  node [fontsize=10];\n";
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    os << "  v" << v << " [";
    if (g.is_terminal(v)) {
      os << "shape=circle, style=filled, fillcolor=black, fontcolor=white";
      if (g.root() && *g.root() == v) os << ", peripheries=2";
    } else {
      os << "shape=square, style=\"\"";
    }
    os << "];\n";
  }
  std::map<std::pair<VertexId, VertexId>, std::pair<int, std::string>> bundles;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    auto key = std::minmax(ed.u, ed.v);
    auto& b = bundles[{key.first, key.second}];
    b.first++;
    if (ed.cls != EdgeClass::Unclassified) {
      if (!b.second.empty()) b.second += '/';
      b.second += class_letter(ed.cls);
    }
  }
  for (const auto& [key, b] : bundles) {
    os << "  v" << key.first << " -- v" << key.second;
    std::string label;
    if (b.first > 1) label = "x" + std::to_string(b.first);
    if (!b.second.empty()) label += (label.empty() ? "" : " ") + b.second;
    if (!label.empty()) os << " [label=\"" << label << "\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace tconnect
