#include "tconnect/insertion.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tconnect {

InsertionResult insert(const TerminalGraph& g1, VertexId t1, const TerminalGraph& g2,
                       VertexId t2, const EdgeBijection& h) {
  g1.check_vertex(t1);
  g2.check_vertex(t2);
  if (!g1.is_terminal(t1)) throw input_error("insert: t1 is not a terminal");
  if (!g2.is_terminal(t2)) throw input_error("insert: t2 is not a terminal");
  if (g1.degree(t1) != g2.degree(t2))
    throw input_error("insert: terminal degrees differ (" + std::to_string(g1.degree(t1)) +
                      " vs " + std::to_string(g2.degree(t2)) + ")");
  if (h.host_terminal != t1 || h.guest_terminal != t2)
    throw input_error("insert: bijection is for different terminals");

  auto b1 = g1.boundary(std::vector<VertexId>{t1});
  auto b2 = g2.boundary(std::vector<VertexId>{t2});
  std::set<EdgeId> s1(b1.begin(), b1.end());
  std::set<EdgeId> s2(b2.begin(), b2.end());
  if (h.pairing.size() != s1.size())
    throw input_error("insert: bijection does not cover the boundary of t1");
  std::set<EdgeId> seen1, seen2;
  for (auto [e1, e2] : h.pairing) {
    if (!s1.count(e1) || !seen1.insert(e1).second)
      throw input_error("insert: bijection is not a bijection on the host boundary");
    if (!s2.count(e2) || !seen2.insert(e2).second)
      throw input_error("insert: bijection is not a bijection on the guest boundary");
  }

  InsertionResult res;
  res.host_vertex_map.assign(g1.vertex_count(), -1);
  res.guest_vertex_map.assign(g2.vertex_count(), -1);
  for (VertexId v = 0; v < g1.vertex_count(); ++v)
    if (v != t1) res.host_vertex_map[v] = res.graph.add_vertex(g1.kind(v));
  for (VertexId v = 0; v < g2.vertex_count(); ++v)
    if (v != t2) res.guest_vertex_map[v] = res.graph.add_vertex(g2.kind(v));

  res.host_edge_map.assign(g1.edge_count(), -1);
  res.guest_edge_map.assign(g2.edge_count(), -1);
  for (EdgeId e = 0; e < g1.edge_count(); ++e) {
    const Edge& ed = g1.edge(e);
    if (ed.incident(t1)) continue;
    EdgeId ne = res.graph.add_edge(res.host_vertex_map[ed.u], res.host_vertex_map[ed.v], ed.cls);
    res.graph.edge_mutable(ne).provenance = ed.provenance;
    res.host_edge_map[e] = ne;
  }
  for (EdgeId e = 0; e < g2.edge_count(); ++e) {
    const Edge& ed = g2.edge(e);
    if (ed.incident(t2)) continue;
    EdgeId ne =
        res.graph.add_edge(res.guest_vertex_map[ed.u], res.guest_vertex_map[ed.v], ed.cls);
    res.graph.edge_mutable(ne).provenance = ed.provenance;
    res.guest_edge_map[e] = ne;
  }

  // bridge edges in host boundary id order
  std::vector<std::pair<EdgeId, EdgeId>> pairs = h.pairing;
  std::sort(pairs.begin(), pairs.end());
  for (auto [e1, e2] : pairs) {
    VertexId a = res.host_vertex_map[g1.edge(e1).other(t1)];
    VertexId b = res.guest_vertex_map[g2.edge(e2).other(t2)];
    EdgeId ne = res.graph.add_edge(a, b, g1.edge(e1).cls);
    auto& prov = res.graph.edge_mutable(ne).provenance;
    prov = g1.edge(e1).provenance;
    for (const auto& p : g2.edge(e2).provenance) prov.push_back(p);
    res.host_edge_map[e1] = ne;
    res.guest_edge_map[e2] = ne;
  }

  if (g1.root() && *g1.root() != t1) res.graph.set_root(res.host_vertex_map[*g1.root()]);

  // classes only live on edges incident with the surviving root
  auto root = res.graph.root();
  for (EdgeId e = 0; e < res.graph.edge_count(); ++e) {
    const Edge& ed = res.graph.edge(e);
    if (ed.cls == EdgeClass::Unclassified) continue;
    if (!root || (ed.u != *root && ed.v != *root))
      res.graph.set_edge_class(e, EdgeClass::Unclassified);
  }
  return res;
}

EdgeBijection make_class_bijection(const TerminalGraph& host, VertexId t1,
                                   const TerminalGraph& guest,
                                   std::span<const BijectionGroup> groups) {
  if (!guest.root()) throw input_error("make_class_bijection: guest has no root");
  VertexId r = *guest.root();
  auto host_boundary = host.boundary(std::vector<VertexId>{t1});
  auto guest_boundary = guest.boundary(std::vector<VertexId>{r});

  std::set<EdgeId> host_left(host_boundary.begin(), host_boundary.end());
  std::set<EdgeId> guest_left(guest_boundary.begin(), guest_boundary.end());

  EdgeBijection h;
  h.host_terminal = t1;
  h.guest_terminal = r;

  for (const auto& grp : groups) {
    std::vector<EdgeId> hs = grp.host_edges;
    std::sort(hs.begin(), hs.end());
    for (EdgeId e : hs)
      if (!host_left.erase(e))
        throw input_error("group '" + grp.label +
                          "': host edge not available in the boundary of t1");

    std::vector<EdgeId> gs;
    if (grp.guest_class) {
      for (EdgeId e : guest_boundary)
        if (guest.edge(e).cls == *grp.guest_class && guest_left.count(e)) gs.push_back(e);
    } else {
      gs = grp.guest_edges;
    }
    std::sort(gs.begin(), gs.end());
    for (EdgeId e : gs)
      if (!guest_left.erase(e))
        throw input_error("group '" + grp.label +
                          "': guest edge not available in the root boundary");

    if (hs.size() != gs.size())
      throw input_error("group '" + grp.label + "': size mismatch, " +
                        std::to_string(hs.size()) + " host vs " + std::to_string(gs.size()) +
                        " guest edges");
    for (size_t i = 0; i < hs.size(); ++i) h.pairing.emplace_back(hs[i], gs[i]);
  }

  if (!host_left.empty() || !guest_left.empty())
    throw input_error("bijection groups do not partition the boundaries");
  return h;
}

}  // namespace tconnect
