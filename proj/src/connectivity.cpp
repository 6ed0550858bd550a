#include "tconnect/connectivity.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <queue>

#include "tconnect/families.hpp"

namespace tconnect {

namespace {

// Dinic on the parallel-collapsed graph. Undirected edges are stored as
// arc pairs that act as each other's reverse, both with the bundle
// capacity.
class Dinic {
 public:
  explicit Dinic(int n) : n_(n), head_(n, -1) {}

  void add_undirected(int u, int v, int cap) {
    add_arc(u, v, cap);
    add_arc(v, u, cap);
  }

  int run(int s, int t) {
    int total = 0;
    while (bfs(s, t)) {
      it_ = head_;
      while (int pushed = dfs(s, t, INT32_MAX)) total += pushed;
    }
    return total;
  }

  std::vector<char> residual_reachable(int s) const {
    std::vector<char> seen(n_, 0);
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int a = head_[v]; a >= 0; a = arcs_[a].next) {
        if (arcs_[a].cap > 0 && !seen[arcs_[a].to]) {
          seen[arcs_[a].to] = 1;
          q.push(arcs_[a].to);
        }
      }
    }
    return seen;
  }

 private:
  struct Arc {
    int to, next, cap;
  };

  void add_arc(int u, int v, int cap) {
    arcs_.push_back(Arc{v, head_[u], cap});
    head_[u] = static_cast<int>(arcs_.size()) - 1;
  }

  bool bfs(int s, int t) {
    level_.assign(n_, -1);
    std::queue<int> q;
    q.push(s);
    level_[s] = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int a = head_[v]; a >= 0; a = arcs_[a].next) {
        if (arcs_[a].cap > 0 && level_[arcs_[a].to] < 0) {
          level_[arcs_[a].to] = level_[v] + 1;
          q.push(arcs_[a].to);
        }
      }
    }
    return level_[t] >= 0;
  }

  int dfs(int v, int t, int limit) {
    if (v == t) return limit;
    for (int& a = it_[v]; a >= 0; a = arcs_[a].next) {
      Arc& arc = arcs_[a];
      if (arc.cap > 0 && level_[arc.to] == level_[v] + 1) {
        int pushed = dfs(arc.to, t, std::min(limit, arc.cap));
        if (pushed > 0) {
          arc.cap -= pushed;
          arcs_[a ^ 1].cap += pushed;
          return pushed;
        }
      }
    }
    level_[v] = -2;
    return 0;
  }

  int n_;
  std::vector<int> head_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<int> it_;
};

struct CollapsedGraph {
  // bundles keyed by sorted endpoint pair, deterministic order
  std::vector<std::pair<std::pair<VertexId, VertexId>, std::vector<EdgeId>>> bundles;
};

CollapsedGraph collapse_parallel(const TerminalGraph& g) {
  std::map<std::pair<VertexId, VertexId>, std::vector<EdgeId>> m;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (ed.u == ed.v) continue;  // loops never carry flow
    auto key = std::minmax(ed.u, ed.v);
    m[{key.first, key.second}].push_back(e);
  }
  CollapsedGraph c;
  c.bundles.assign(m.begin(), m.end());
  return c;
}

}  // namespace

MaxFlowResult max_flow(const TerminalGraph& g, VertexId s, VertexId t) {
  g.check_vertex(s);
  g.check_vertex(t);
  if (s == t) throw input_error("max_flow: source equals sink");

  CollapsedGraph c = collapse_parallel(g);
  Dinic dinic(g.vertex_count());
  for (const auto& [key, ids] : c.bundles)
    dinic.add_undirected(key.first, key.second, static_cast<int>(ids.size()));

  MaxFlowResult res;
  res.value = dinic.run(s, t);

  std::vector<char> side = dinic.residual_reachable(s);
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (side[v]) res.source_side.push_back(v);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (ed.u != ed.v && side[ed.u] != side[ed.v]) res.min_cut.push_back(e);
  }
  return res;
}

SteinerConnectivity steiner_edge_connectivity(const TerminalGraph& g,
                                              std::span<const VertexId> terminals,
                                              int jobs) {
  std::vector<VertexId> ts(terminals.begin(), terminals.end());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  if (ts.size() < 2) throw input_error("steiner_edge_connectivity needs >= 2 terminals");
  VertexId t0 = ts[0];

  std::vector<VertexId> targets(ts.begin() + 1, ts.end());
  std::vector<int> values(targets.size(), 0);

  if (jobs <= 1) {
    for (size_t i = 0; i < targets.size(); ++i)
      values[i] = max_flow(g, t0, targets[i]).value;
  } else {
    std::vector<std::future<void>> futs;
    std::atomic<size_t> next{0};
    int workers = std::min<int>(jobs, static_cast<int>(targets.size()));
    for (int w = 0; w < workers; ++w) {
      futs.push_back(std::async(std::launch::async, [&]() {
        for (size_t i = next.fetch_add(1); i < targets.size(); i = next.fetch_add(1))
          values[i] = max_flow(g, t0, targets[i]).value;
      }));
    }
    for (auto& f : futs) f.get();
  }

  SteinerConnectivity out;
  size_t best = 0;
  for (size_t i = 0; i < targets.size(); ++i) {
    out.per_terminal_flow.emplace_back(targets[i], values[i]);
    if (values[i] < values[best]) best = i;
  }
  out.value = values[best];
  out.witness_cut = max_flow(g, t0, targets[best]).min_cut;
  return out;
}

SteinerConnectivity steiner_edge_connectivity(const TerminalGraph& g, int jobs) {
  auto ts = g.terminals();
  return steiner_edge_connectivity(g, ts, jobs);
}

bool is_aligned(const AtomRegistry& registry, const TerminalGraph& g,
                std::span<const VertexId> y) {
  std::vector<char> in(g.vertex_count(), 0);
  for (VertexId v : y) {
    g.check_vertex(v);
    in[v] = 1;
  }
  for (const auto& atom : registry.atoms) {
    int inside = 0, total = 0;
    for (VertexId v : atom.vertices()) {
      ++total;
      if (in[v]) ++inside;
    }
    if (inside != 0 && inside != total) return false;
  }
  return true;
}

std::vector<std::vector<VertexId>> components_without(const TerminalGraph& g,
                                                      std::span<const VertexId> removed) {
  std::vector<char> gone(g.vertex_count(), 0);
  for (VertexId v : removed) {
    g.check_vertex(v);
    gone[v] = 1;
  }
  std::vector<std::vector<VertexId>> comps;
  std::vector<char> seen(g.vertex_count(), 0);
  for (VertexId start = 0; start < g.vertex_count(); ++start) {
    if (gone[start] || seen[start]) continue;
    std::vector<VertexId> comp;
    std::queue<VertexId> q;
    q.push(start);
    seen[start] = 1;
    while (!q.empty()) {
      VertexId v = q.front();
      q.pop();
      comp.push_back(v);
      for (EdgeId e : g.incident_edges(v)) {
        VertexId w = g.edge(e).other(v);
        if (!gone[w] && !seen[w]) {
          seen[w] = 1;
          q.push(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

bool is_connected(const TerminalGraph& g) {
  if (g.vertex_count() == 0) return true;
  return components_without(g, {}).size() == 1;
}

BasicCutCheck is_basic_cut(const TerminalGraph& g, const AtomRegistry& registry,
                           std::span<const VertexId> x0) {
  BasicCutCheck out;

  int terminal_degree = -1;
  for (VertexId v : g.terminals()) {
    if (terminal_degree < 0) terminal_degree = g.degree(v);
    if (g.degree(v) != terminal_degree) {
      out.reason = "terminal degrees are not uniform";
      out.witness = {v};
      return out;
    }
  }
  if (terminal_degree < 0) {
    out.reason = "graph has no terminals";
    return out;
  }

  std::vector<char> in(g.vertex_count(), 0);
  for (VertexId v : x0) {
    g.check_vertex(v);
    if (g.is_terminal(v)) {
      out.reason = "X0 contains a terminal";
      out.witness = {v};
      return out;
    }
    if (in[v]) {
      out.reason = "X0 has a repeated vertex";
      out.witness = {v};
      return out;
    }
    in[v] = 1;
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (in[ed.u] && in[ed.v]) {
      out.reason = "X0 is not independent";
      out.witness = {ed.u, ed.v};
      return out;
    }
  }

  // atoms meeting X0 are dismantled by the removal and are not atoms of
  // G - X0, so alignment only quantifies over the surviving ones
  std::vector<const Atom*> live_atoms;
  for (const auto& atom : registry.atoms) {
    bool hit = false;
    for (VertexId v : atom.vertices())
      if (in[v]) hit = true;
    if (!hit) live_atoms.push_back(&atom);
  }

  auto comps = components_without(g, x0);
  for (size_t i = 0; i < comps.size(); ++i) {
    const auto& comp = comps[i];
    int deg = g.set_degree(comp);
    if (deg != terminal_degree) {
      out.reason = "component has degree " + std::to_string(deg) + ", expected " +
                   std::to_string(terminal_degree);
      out.witness = comp;
      return out;
    }
    std::vector<char> in_comp(g.vertex_count(), 0);
    for (VertexId v : comp) in_comp[v] = 1;
    bool aligned = true;
    for (const Atom* atom : live_atoms) {
      int inside = 0, total = 0;
      for (VertexId v : atom->vertices()) {
        ++total;
        if (in_comp[v]) ++inside;
      }
      if (inside != 0 && inside != total) aligned = false;
    }
    if (!aligned) {
      out.reason = "component is not aligned";
      out.witness = comp;
      return out;
    }
    bool has_terminal = false;
    for (VertexId v : comp)
      if (g.is_terminal(v)) has_terminal = true;
    if (!has_terminal) {
      out.reason = "component contains no terminal";
      out.witness = comp;
      return out;
    }
  }

  out.ok = true;
  for (size_t i = 0; i < comps.size(); ++i) {
    CutCertificate cert;
    cert.x0.assign(x0.begin(), x0.end());
    std::sort(cert.x0.begin(), cert.x0.end());
    cert.partition = comps;
    cert.y_index = static_cast<int>(i);
    cert.cut = g.boundary(comps[i]);
    out.certificates.push_back(std::move(cert));
  }
  return out;
}

}  // namespace tconnect
