#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tconnect/families.hpp"
#include "tconnect/multigraph.hpp"

namespace tconnect {

// A terminal-to-terminal path; edge ids disambiguate parallel edges.
struct TPath {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
};

struct ConnectorCertificate {
  std::vector<std::vector<TPath>> connectors;
};

std::string serialize_certificate(const ConnectorCertificate& cert);
ConnectorCertificate deserialize_certificate(const std::string& bytes);

// Remove the edges of p and add one edge joining its endpoints.
TerminalGraph shortcut(const TerminalGraph& g, const TPath& p);

struct Violation {
  std::string clause;  // "path-shape" | "edge-disjointness" | "connectivity"
  std::string detail;
  int connector = -1;
  int path = -1;
  std::vector<EdgeId> edges;
};

struct ValidationResult {
  bool ok = false;
  std::optional<Violation> violation;  // the first violated clause
};

ValidationResult validate_certificate(const TerminalGraph& g,
                                      const ConnectorCertificate& cert);

enum class PackStatus { Found, None, BudgetExceeded };

struct PackOutcome {
  PackStatus status = PackStatus::None;
  ConnectorCertificate certificate;
  long long nodes = 0;
};

// Complete backtracking search for k pairwise edge-disjoint connectors;
// "None" only after exhausting the space within budget.
PackOutcome pack_exact(const TerminalGraph& g, int k, long long node_budget = -1);

// k = 1 only: turns a Hamilton cycle of the base graph into a validated
// certificate by routing through each atom.
ConnectorCertificate lift_hamilton_cycle(const Assembly& a,
                                         std::span<const VertexId> cycle);

// Contract every atom touched by the edge set to a single vertex, drop
// loops, then suppress leftover degree-2 non-terminals.
TerminalGraph project_to_atom_graph(const TerminalGraph& g, const AtomRegistry& registry,
                                    std::span<const EdgeId> qi);

struct BaseProjection {
  bool ok = false;
  EdgeId witness = -1;                // base edge with a split fibre
  std::vector<EdgeId> base_edges;     // edges of N present in the projection
  bool two_regular = false;
  bool connected_spanning = false;
  bool hamilton_cycle = false;
};

BaseProjection project_to_base(const Assembly& a, std::span<const EdgeId> q);

struct AuditCount {
  std::string label;
  int count = 0;
  int expected = 0;  // exact for cuts, lower bound for aligned sets
  bool pass = false;
};

struct PackingAudit {
  bool certificate_valid = false;
  std::optional<Violation> violation;

  std::vector<AuditCount> basic_cuts;       // expect exactly 2k
  std::vector<AuditCount> aligned_sets;     // expect >= 2k
  std::vector<AuditCount> copy_deltas;      // observed per-copy boundary counts
  std::vector<AuditCount> copy_epsilons;    // observed per-copy induced counts

  struct FibreStatus {
    std::string label;
    int used = 0, size = 0;
    bool all_or_nothing = false;
  };
  std::vector<FibreStatus> output_fibres;
  std::vector<FibreStatus> base_fibres;

  std::vector<bool> connector_connected;    // Q_i - r connected
  bool degrees_ok = true;                   // Q meets non-terminals with degree 0 or 2
  std::vector<VertexId> degree_witnesses;

  bool projection_attempted = false;
  BaseProjection projection;

  bool cuts_pass = false;
  bool aligned_pass = false;
  bool connectors_pass = false;
  bool fibres_pass = false;
  bool pass = false;
};

struct AuditOptions {
  uint64_t seed = 1;
  int aligned_samples = 64;
};

PackingAudit audit_packing(const Assembly& a, const ConnectorCertificate& cert, VertexId r,
                           const AuditOptions& opts = {});

std::string audit_to_json(const PackingAudit& audit);

std::vector<EdgeId> certificate_edges(const ConnectorCertificate& cert);

}  // namespace tconnect
