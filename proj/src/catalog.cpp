#include "tconnect/catalog.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "catalog_data.hpp"
#include "tconnect/connectivity.hpp"

namespace tconnect {

namespace {

TerminalGraph from_edge_list(int n, const int edges[][2], std::size_t m) {
  TerminalGraph g;
  for (int i = 0; i < n; ++i) g.add_vertex(VertexKind::NonTerminal);
  for (std::size_t i = 0; i < m; ++i) g.add_edge(edges[i][0], edges[i][1]);
  return g;
}

TerminalGraph make_k33() {
  TerminalGraph g;
  for (int i = 0; i < 6; ++i) g.add_vertex(VertexKind::NonTerminal);
  for (int a = 0; a < 3; ++a)
    for (int b = 3; b < 6; ++b) g.add_edge(a, b);
  return g;
}

TerminalGraph make_cube() {
  TerminalGraph g;
  for (int i = 0; i < 8; ++i) g.add_vertex(VertexKind::NonTerminal);
  for (int u = 0; u < 8; ++u)
    for (int bit = 0; bit < 3; ++bit) {
      int v = u ^ (1 << bit);
      if (u < v) g.add_edge(u, v);
    }
  return g;
}

TerminalGraph make_heawood() {
  TerminalGraph g;
  for (int i = 0; i < 14; ++i) g.add_vertex(VertexKind::NonTerminal);
  for (int i = 0; i < 14; ++i) g.add_edge(i, (i + 1) % 14);
  for (int i = 0; i < 14; i += 2) g.add_edge(i, (i + 5) % 14);
  return g;
}

int max_vertex(const int edges[][2], std::size_t m) {
  int mx = -1;
  for (std::size_t i = 0; i < m; ++i) mx = std::max({mx, edges[i][0], edges[i][1]});
  return mx;
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"georges-50", "ellingham-horton-54", "ellingham-horton-78",
          "k33",        "cube-q3",             "heawood"};
}

NamedGraph catalog_get(const std::string& name) {
  NamedGraph out;
  out.name = name;
  if (name == "k33") {
    out.graph = make_k33();
    out.expected = {true, true, true, true};
  } else if (name == "cube-q3") {
    out.graph = make_cube();
    out.expected = {true, true, true, true};
  } else if (name == "heawood") {
    out.graph = make_heawood();
    out.expected = {true, true, true, true};
  } else if (name == "georges-50") {
    out.graph = from_edge_list(max_vertex(data::georges50_edges, data::georges50_edge_count) + 1,
                               data::georges50_edges, data::georges50_edge_count);
    out.expected = {true, true, true, false};
  } else if (name == "ellingham-horton-54") {
    out.graph = from_edge_list(
        max_vertex(data::ellingham_horton54_edges, data::ellingham_horton54_edge_count) + 1,
        data::ellingham_horton54_edges, data::ellingham_horton54_edge_count);
    out.expected = {true, true, true, false};
  } else if (name == "ellingham-horton-78") {
    out.graph = from_edge_list(
        max_vertex(data::ellingham_horton78_edges, data::ellingham_horton78_edge_count) + 1,
        data::ellingham_horton78_edges, data::ellingham_horton78_edge_count);
    out.expected = {true, true, true, false};
  } else {
    throw input_error("unknown catalog graph '" + name + "'");
  }
  out.graph6 = to_graph6(out.graph);
  return out;
}

TerminalGraph parse_graph6(const std::string& text) {
  std::string s = text;
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  if (!s.empty() && s.rfind(">>graph6<<", 0) == 0) s = s.substr(10);
  if (s.empty()) throw input_error("graph6: empty input");

  size_t pos = 0;
  auto next = [&]() -> int {
    if (pos >= s.size()) throw input_error("graph6: truncated input at byte " +
                                           std::to_string(pos));
    int c = static_cast<unsigned char>(s[pos++]);
    if (c < 63 || c > 126)
      throw input_error("graph6: invalid byte at position " + std::to_string(pos - 1));
    return c - 63;
  };

  long long n;
  int c0 = next();
  if (c0 < 63) {
    n = c0;
  } else {
    int c1 = next();
    if (c1 < 63) {
      int c2 = next();
      n = (static_cast<long long>(c1) << 12) | (c2 << 6) | next();
    } else {
      // 8-byte form for n >= 2^18
      long long v = 0;
      for (int i = 0; i < 6; ++i) v = (v << 6) | next();
      n = v;
    }
  }

  TerminalGraph g;
  for (long long i = 0; i < n; ++i) g.add_vertex(VertexKind::NonTerminal);

  long long bits_needed = n * (n - 1) / 2;
  long long bit = 0;
  int cur = 0, curbits = 0;
  for (long long col = 1; col < n; ++col) {
    for (long long row = 0; row < col; ++row) {
      if (curbits == 0) {
        cur = next();
        curbits = 6;
      }
      --curbits;
      if ((cur >> curbits) & 1)
        g.add_edge(static_cast<VertexId>(row), static_cast<VertexId>(col));
      ++bit;
    }
  }
  (void)bits_needed;
  return g;
}

std::string to_graph6(const TerminalGraph& g) {
  int n = g.vertex_count();
  std::set<std::pair<int, int>> adj;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (ed.u == ed.v) throw input_error("graph6: self-loops not representable");
    auto mm = std::minmax(ed.u, ed.v);
    if (!adj.insert({mm.first, mm.second}).second)
      throw input_error("graph6: parallel edges not representable");
  }

  std::string out;
  if (n <= 62) {
    out.push_back(static_cast<char>(n + 63));
  } else if (n <= 258047) {
    out.push_back(126);
    out.push_back(static_cast<char>(((n >> 12) & 63) + 63));
    out.push_back(static_cast<char>(((n >> 6) & 63) + 63));
    out.push_back(static_cast<char>((n & 63) + 63));
  } else {
    throw input_error("graph6: graph too large");
  }

  int cur = 0, curbits = 0;
  for (int col = 1; col < n; ++col) {
    for (int row = 0; row < col; ++row) {
      cur <<= 1;
      if (adj.count({row, col})) cur |= 1;
      if (++curbits == 6) {
        out.push_back(static_cast<char>(cur + 63));
        cur = 0;
        curbits = 0;
      }
    }
  }
  if (curbits > 0) out.push_back(static_cast<char>((cur << (6 - curbits)) + 63));
  return out;
}

bool is_bipartite(const TerminalGraph& g, std::vector<VertexId>* class_x,
                  std::vector<VertexId>* class_y) {
  std::vector<int> colour(g.vertex_count(), -1);
  for (VertexId start = 0; start < g.vertex_count(); ++start) {
    if (colour[start] >= 0) continue;
    colour[start] = 0;
    std::queue<VertexId> q;
    q.push(start);
    while (!q.empty()) {
      VertexId v = q.front();
      q.pop();
      for (EdgeId e : g.incident_edges(v)) {
        VertexId w = g.edge(e).other(v);
        if (w == v) return false;
        if (colour[w] < 0) {
          colour[w] = 1 - colour[v];
          q.push(w);
        } else if (colour[w] == colour[v]) {
          return false;
        }
      }
    }
  }
  if (class_x) {
    class_x->clear();
    class_y->clear();
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      (colour[v] == 0 ? *class_x : *class_y).push_back(v);
  }
  return true;
}

namespace {

// Directed Dinic for the split-vertex transform.
class DirectedDinic {
 public:
  explicit DirectedDinic(int n) : n_(n), head_(n, -1) {}
  void add(int u, int v, int cap) {
    arcs_.push_back({v, head_[u], cap});
    head_[u] = static_cast<int>(arcs_.size()) - 1;
    arcs_.push_back({u, head_[v], 0});
    head_[v] = static_cast<int>(arcs_.size()) - 1;
  }
  int run(int s, int t, int cap_limit) {
    int total = 0;
    while (total < cap_limit && bfs(s, t)) {
      it_ = head_;
      while (int pushed = dfs(s, t, cap_limit - total)) {
        total += pushed;
        if (total >= cap_limit) break;
      }
    }
    return total;
  }

 private:
  struct Arc {
    int to, next, cap;
  };
  bool bfs(int s, int t) {
    level_.assign(n_, -1);
    std::queue<int> q;
    q.push(s);
    level_[s] = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int a = head_[v]; a >= 0; a = arcs_[a].next)
        if (arcs_[a].cap > 0 && level_[arcs_[a].to] < 0) {
          level_[arcs_[a].to] = level_[v] + 1;
          q.push(arcs_[a].to);
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

// max internally-disjoint st-paths capped at `target`
int vertex_flow(const TerminalGraph& g, VertexId s, VertexId t, int target) {
  int n = g.vertex_count();
  DirectedDinic d(2 * n);
  const int inf = 1 << 20;
  for (VertexId v = 0; v < n; ++v) d.add(2 * v, 2 * v + 1, v == s || v == t ? inf : 1);
  std::set<std::pair<int, int>> seen;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (ed.u == ed.v) continue;
    auto mm = std::minmax(ed.u, ed.v);
    if (!seen.insert({mm.first, mm.second}).second) continue;
    d.add(2 * ed.u + 1, 2 * ed.v, inf);
    d.add(2 * ed.v + 1, 2 * ed.u, inf);
  }
  return d.run(2 * s + 1, 2 * t, target);
}

}  // namespace

bool vertex_connectivity_at_least(const TerminalGraph& g, int target) {
  int n = g.vertex_count();
  if (n <= target) return false;  // convention: needs > target vertices
  for (VertexId v = 0; v < n; ++v)
    if (g.degree(v) < target) return false;
  if (!is_connected(g)) return false;

  // Any vertex cut of size < target misses some vertex of {0} u N(0);
  // a source outside the cut reaches a non-adjacent vertex across it.
  std::vector<VertexId> sources = g.neighbours(0);
  sources.insert(sources.begin(), 0);
  for (VertexId s : sources) {
    std::vector<char> adj(n, 0);
    adj[s] = 1;
    for (VertexId w : g.neighbours(s)) adj[w] = 1;
    for (VertexId t = 0; t < n; ++t) {
      if (adj[t]) continue;
      if (vertex_flow(g, s, t, target) < target) return false;
    }
  }
  return true;
}

BaseReport verify_base(const TerminalGraph& g) {
  BaseReport rep;
  rep.cubic = g.vertex_count() > 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) != 3) rep.cubic = false;
  if (!rep.cubic) rep.failures.push_back("not cubic");

  rep.bipartite = is_bipartite(g, &rep.class_x, &rep.class_y);
  if (!rep.bipartite) rep.failures.push_back("not bipartite");

  rep.three_connected = vertex_connectivity_at_least(g, 3);
  if (!rep.three_connected) rep.failures.push_back("not 3-connected");
  return rep;
}

namespace {

struct HamiltonSolver {
  int n = 0;
  std::vector<std::pair<int, int>> ends;           // simple edge endpoints
  std::vector<std::vector<std::pair<int, int>>> inc;  // vertex -> (edge, other)
  std::vector<uint8_t> state;  // 0 undecided, 1 in, 2 out
  std::vector<int> cin, cav;
  std::vector<int> link;  // other endpoint of the segment, valid at endpoints
  int edges_in = 0;
  long long nodes = 0;
  long long budget = -1;
  bool out_of_budget = false;
  const std::function<bool(const std::vector<VertexId>&)>* callback = nullptr;
  bool stop = false;

  struct Undo {
    enum Kind { EdgeIn, EdgeOut, Link } kind;
    int a, b;
  };
  std::vector<Undo> trail;

  void undo_to(size_t mark) {
    while (trail.size() > mark) {
      Undo u = trail.back();
      trail.pop_back();
      if (u.kind == Undo::EdgeIn) {
        state[u.a] = 0;
        cin[ends[u.a].first]--;
        cin[ends[u.a].second]--;
        edges_in--;
      } else if (u.kind == Undo::EdgeOut) {
        state[u.a] = 0;
        cav[ends[u.a].first]++;
        cav[ends[u.a].second]++;
      } else {
        link[u.a] = u.b;
      }
    }
  }

  bool set_in(int e, std::vector<int>& dirty) {
    if (state[e] == 1) return true;
    if (state[e] == 2) return false;
    auto [u, v] = ends[e];
    if (cin[u] >= 2 || cin[v] >= 2) return false;
    int eu = link[u], ev = link[v];
    if (eu == v) {
      // closing a segment into a cycle
      if (edges_in + 1 == n) {
        state[e] = 1;
        cin[u]++;
        cin[v]++;
        edges_in++;
        trail.push_back({Undo::EdgeIn, e, 0});
        return true;  // complete: caller checks edges_in == n
      }
      return false;
    }
    state[e] = 1;
    cin[u]++;
    cin[v]++;
    edges_in++;
    trail.push_back({Undo::EdgeIn, e, 0});
    trail.push_back({Undo::Link, eu, link[eu]});
    trail.push_back({Undo::Link, ev, link[ev]});
    link[eu] = ev;
    link[ev] = eu;
    dirty.push_back(u);
    dirty.push_back(v);
    return true;
  }

  bool set_out(int e, std::vector<int>& dirty) {
    if (state[e] == 2) return true;
    if (state[e] == 1) return false;
    auto [u, v] = ends[e];
    state[e] = 2;
    cav[u]--;
    cav[v]--;
    trail.push_back({Undo::EdgeOut, e, 0});
    dirty.push_back(u);
    dirty.push_back(v);
    return true;
  }

  // forced-degree propagation from the given seed vertices
  bool propagate(std::vector<int> dirty) {
    while (!dirty.empty()) {
      int v = dirty.back();
      dirty.pop_back();
      if (cav[v] < 2 || cin[v] > 2) return false;
      if (cin[v] == 2) {
        for (auto [e, w] : inc[v])
          if (state[e] == 0 && !set_out(e, dirty)) return false;
      } else if (cav[v] == 2) {
        for (auto [e, w] : inc[v])
          if (state[e] == 0 && !set_in(e, dirty)) return false;
      }
    }
    return true;
  }

  bool connected_available() {
    // all vertices must lie in one component of the non-out subgraph
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int cnt = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto [e, w] : inc[v]) {
        if (state[e] != 2 && !seen[w]) {
          seen[w] = 1;
          ++cnt;
          stack.push_back(w);
        }
      }
    }
    return cnt == n;
  }

  std::vector<VertexId> extract_cycle() const {
    std::vector<std::vector<int>> adj(n);
    for (size_t e = 0; e < ends.size(); ++e)
      if (state[e] == 1) {
        adj[ends[e].first].push_back(ends[e].second);
        adj[ends[e].second].push_back(ends[e].first);
      }
    std::vector<VertexId> cyc;
    int prev = -1, cur = 0;
    do {
      cyc.push_back(cur);
      int nxt = (adj[cur][0] != prev) ? adj[cur][0] : adj[cur][1];
      prev = cur;
      cur = nxt;
    } while (cur != 0);
    return cyc;
  }

  bool report() {
    auto cyc = extract_cycle();
    if (callback && !(*callback)(cyc)) stop = true;
    return stop;
  }

  // returns false when the subtree is exhausted without being told to stop
  void search() {
    if (stop || out_of_budget) return;
    if (budget >= 0 && ++nodes > budget) {
      out_of_budget = true;
      return;
    }

    if (edges_in == n) {
      report();
      return;
    }

    // branch vertex: lowest id among smallest undecided degree
    int best = -1, best_und = 1 << 30;
    for (int v = 0; v < n; ++v) {
      if (cin[v] == 2) continue;
      int und = cav[v] - cin[v];
      if (und > 0 && und < best_und) {
        best_und = und;
        best = v;
      }
    }
    if (best < 0) return;  // nothing undecided but not a full cycle

    int e = -1;
    for (auto [ei, w] : inc[best])
      if (state[ei] == 0) {
        e = ei;
        break;
      }

    for (int choice = 0; choice < 2 && !stop && !out_of_budget; ++choice) {
      size_t mark = trail.size();
      std::vector<int> dirty;
      bool ok = choice == 0 ? set_in(e, dirty) : set_out(e, dirty);
      if (ok && edges_in == n) {
        report();
        undo_to(mark);
        continue;
      }
      if (ok) ok = propagate(std::move(dirty));
      if (ok && edges_in == n) {
        report();
        undo_to(mark);
        continue;
      }
      if (ok) ok = connected_available();
      if (ok) search();
      undo_to(mark);
    }
  }
};

bool run_hamilton(const TerminalGraph& g,
                  const std::function<bool(const std::vector<VertexId>&)>& fn,
                  long long node_budget, long long* nodes_out) {
  int n = g.vertex_count();
  if (n == 0) return true;
  if (n == 1) return true;  // no cycle
  if (n == 2) {
    // two parallel edges form the only possible cycle
    int parallel = 0;
    std::vector<EdgeId> used;
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (g.edge(e).u != g.edge(e).v) {
        ++parallel;
        used.push_back(e);
      }
    if (parallel >= 2) fn({0, 1});
    return true;
  }

  HamiltonSolver s;
  s.n = n;
  s.inc.assign(n, {});
  std::set<std::pair<int, int>> seen;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (ed.u == ed.v) continue;
    auto mm = std::minmax(ed.u, ed.v);
    if (!seen.insert({mm.first, mm.second}).second) continue;
    int id = static_cast<int>(s.ends.size());
    s.ends.push_back({mm.first, mm.second});
    s.inc[mm.first].push_back({id, mm.second});
    s.inc[mm.second].push_back({id, mm.first});
  }
  s.state.assign(s.ends.size(), 0);
  s.cin.assign(n, 0);
  s.cav.assign(n, 0);
  s.link.resize(n);
  for (int v = 0; v < n; ++v) {
    s.cav[v] = static_cast<int>(s.inc[v].size());
    s.link[v] = v;
  }
  s.budget = node_budget;
  s.callback = &fn;

  bool feasible = true;
  for (int v = 0; v < n; ++v)
    if (s.cav[v] < 2) feasible = false;
  if (feasible) {
    std::vector<int> dirty;
    for (int v = 0; v < n; ++v) dirty.push_back(v);
    if (s.propagate(std::move(dirty)) && s.connected_available()) {
      if (s.edges_in == s.n)
        s.report();
      else
        s.search();
    }
  }
  if (nodes_out) *nodes_out = s.nodes;
  return !s.out_of_budget;
}

}  // namespace

HamiltonResult find_hamiltonian_cycle(const TerminalGraph& g, long long node_budget) {
  HamiltonResult res;
  std::vector<VertexId> found;
  bool complete = run_hamilton(
      g,
      [&](const std::vector<VertexId>& cyc) {
        found = cyc;
        return false;  // stop at the first cycle
      },
      node_budget, &res.nodes);
  if (!found.empty()) {
    res.status = SearchStatus::Found;
    res.cycle = found;
  } else {
    res.status = complete ? SearchStatus::None : SearchStatus::BudgetExceeded;
  }
  return res;
}

bool for_each_hamiltonian_cycle(const TerminalGraph& g,
                                const std::function<bool(const std::vector<VertexId>&)>& fn,
                                long long node_budget) {
  return run_hamilton(g, fn, node_budget, nullptr);
}

bool check_cycle(const TerminalGraph& g, const std::vector<VertexId>& cycle) {
  if (static_cast<int>(cycle.size()) != g.vertex_count()) return false;
  std::vector<char> seen(g.vertex_count(), 0);
  for (VertexId v : cycle) {
    if (v < 0 || v >= g.vertex_count() || seen[v]) return false;
    seen[v] = 1;
  }
  if (cycle.size() == 2) {
    int parallel = 0;
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (g.edge(e).u != g.edge(e).v) ++parallel;
    return parallel >= 2;
  }
  for (size_t i = 0; i < cycle.size(); ++i) {
    VertexId a = cycle[i], b = cycle[(i + 1) % cycle.size()];
    bool adjacent = false;
    for (EdgeId e : g.incident_edges(a))
      if (g.edge(e).other(a) == b) adjacent = true;
    if (!adjacent) return false;
  }
  return true;
}

}  // namespace tconnect
