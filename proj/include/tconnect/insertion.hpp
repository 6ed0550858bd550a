#pragma once

#include <optional>
#include <vector>

#include "tconnect/multigraph.hpp"

namespace tconnect {

// The bijection h between the boundary edges of two equal-degree
// terminals that drives an insertion.
struct EdgeBijection {
  VertexId host_terminal = -1;
  VertexId guest_terminal = -1;
  std::vector<std::pair<EdgeId, EdgeId>> pairing;  // (host edge, guest edge)
};

struct InsertionResult {
  TerminalGraph graph;
  std::vector<VertexId> host_vertex_map;   // host id -> result id, -1 for t1
  std::vector<VertexId> guest_vertex_map;  // guest id -> result id, -1 for t2
  std::vector<EdgeId> host_edge_map;       // total: boundary edges map to bridges
  std::vector<EdgeId> guest_edge_map;      // total
};

// Splice g2 into g1: drop t1 and t2, then join the loose ends of their
// boundary edges as prescribed by h. Result ids are host-first then
// guest, in source order, so repeated builds are identical.
InsertionResult insert(const TerminalGraph& g1, VertexId t1, const TerminalGraph& g2,
                       VertexId t2, const EdgeBijection& h);

// One group constraint for make_class_bijection: a set of host edges that
// must map onto either all guest edges of a class or an explicit guest
// edge set.
struct BijectionGroup {
  std::string label;
  std::vector<EdgeId> host_edges;
  std::optional<EdgeClass> guest_class;
  std::vector<EdgeId> guest_edges;  // used when guest_class is empty
};

// Builds a bijection between the boundary of t1 and the boundary of the
// guest's root that respects every group; within a group the pairing is
// by ascending edge id.
EdgeBijection make_class_bijection(const TerminalGraph& host, VertexId t1,
                                   const TerminalGraph& guest,
                                   std::span<const BijectionGroup> groups);

}  // namespace tconnect
