#pragma once

#include <string>
#include <vector>

#include "tconnect/multigraph.hpp"

namespace tconnect {

struct AtomRegistry;  // families.hpp

struct MaxFlowResult {
  int value = 0;
  std::vector<EdgeId> min_cut;   // edges of g achieving the value
  std::vector<VertexId> source_side;
};

// Max number of edge-disjoint st-paths (every parallel edge has capacity
// one); also returns a minimum cut witnessing the value. Parallel edges
// are collapsed to integer capacities internally and expanded back to
// edge ids in the reported cut.
MaxFlowResult max_flow(const TerminalGraph& g, VertexId s, VertexId t);

// Smallest edge-cut separating two terminals: min over t in T\{t0} of
// max_flow(t0, t) for a fixed t0. Any cut separating two terminals
// separates t0 from one of them, so the reduction is exact.
struct SteinerConnectivity {
  int value = 0;
  std::vector<EdgeId> witness_cut;
  std::vector<std::pair<VertexId, int>> per_terminal_flow;
};
SteinerConnectivity steiner_edge_connectivity(const TerminalGraph& g,
                                              std::span<const VertexId> terminals,
                                              int jobs = 1);
SteinerConnectivity steiner_edge_connectivity(const TerminalGraph& g, int jobs = 1);

// True iff every atom is contained in Y or disjoint from it.
bool is_aligned(const AtomRegistry& registry, const TerminalGraph& g,
                std::span<const VertexId> y);

struct CutCertificate {
  std::vector<VertexId> x0;             // independent non-terminals removed
  std::vector<std::vector<VertexId>> partition;  // components of G - X0
  int y_index = -1;                     // designated component
  std::vector<EdgeId> cut;              // boundary of the designated component
};

struct BasicCutCheck {
  bool ok = false;
  std::string reason;                    // empty when ok
  std::vector<VertexId> witness;         // offending vertices, if any
  std::vector<CutCertificate> certificates;  // one per component when ok
};

// Verifies that X0 is an independent set of non-terminals and that every
// component of G - X0 is aligned, contains a terminal, and has degree
// exactly 3k (3k inferred from the uniform terminal degree). On success
// every component boundary is a basic edge-cut for X0.
BasicCutCheck is_basic_cut(const TerminalGraph& g, const AtomRegistry& registry,
                           std::span<const VertexId> x0);

// Components of g - removed (vertex sets, each sorted ascending).
std::vector<std::vector<VertexId>> components_without(const TerminalGraph& g,
                                                      std::span<const VertexId> removed);

bool is_connected(const TerminalGraph& g);

}  // namespace tconnect
