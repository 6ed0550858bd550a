#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tconnect/multigraph.hpp"

namespace tconnect {

struct ExpectedProperties {
  bool cubic = false;
  bool bipartite = false;
  bool three_connected = false;
  bool hamiltonian = false;
};

struct NamedGraph {
  std::string name;
  TerminalGraph graph;  // no terminals marked
  ExpectedProperties expected;
  std::string graph6;
};

std::vector<std::string> catalog_names();
NamedGraph catalog_get(const std::string& name);

TerminalGraph parse_graph6(const std::string& text);
std::string to_graph6(const TerminalGraph& g);

struct BaseReport {
  bool cubic = false;
  bool bipartite = false;
  bool three_connected = false;
  std::vector<VertexId> class_x;  // colour class containing vertex 0
  std::vector<VertexId> class_y;
  std::vector<std::string> failures;
  bool ok() const { return cubic && bipartite && three_connected; }
};

// Checks cubic / bipartite (2-colouring returned) / vertex connectivity
// >= 3 via flow on the split-vertex transform.
BaseReport verify_base(const TerminalGraph& g);

bool is_bipartite(const TerminalGraph& g, std::vector<VertexId>* class_x = nullptr,
                  std::vector<VertexId>* class_y = nullptr);
bool vertex_connectivity_at_least(const TerminalGraph& g, int target);

enum class SearchStatus { Found, None, BudgetExceeded };

struct HamiltonResult {
  SearchStatus status = SearchStatus::None;
  std::vector<VertexId> cycle;  // vertex order when found
  long long nodes = 0;
};

// Exhaustive edge-state backtracking with forced-degree propagation and
// disconnection pruning; "None" is only reported after a complete search.
HamiltonResult find_hamiltonian_cycle(const TerminalGraph& g, long long node_budget = -1);

// Enumerates every Hamilton cycle, invoking fn with the vertex order.
// fn returning false stops the search. Returns false on budget exhaustion.
bool for_each_hamiltonian_cycle(const TerminalGraph& g,
                                const std::function<bool(const std::vector<VertexId>&)>& fn,
                                long long node_budget = -1);

bool check_cycle(const TerminalGraph& g, const std::vector<VertexId>& cycle);

}  // namespace tconnect
