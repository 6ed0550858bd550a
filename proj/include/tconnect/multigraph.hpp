#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tconnect {

using VertexId = int;
using EdgeId = int;

enum class VertexKind : uint8_t { Terminal, NonTerminal };

// Classes are only meaningful on edges incident with the root terminal.
enum class EdgeClass : uint8_t { A, B, C, Unclassified };

char class_letter(EdgeClass c);
EdgeClass class_from_letter(char c);

// One step of an edge's history: which construction stage and copy the
// edge came from, and its id in that copy's source graph.
struct ProvenanceStep {
  std::string stage;
  std::string copy;
  EdgeId source_edge = -1;

  bool operator==(const ProvenanceStep&) const = default;
};

struct Edge {
  VertexId u = -1;
  VertexId v = -1;
  EdgeClass cls = EdgeClass::Unclassified;
  std::vector<ProvenanceStep> provenance;

  VertexId other(VertexId w) const { return w == u ? v : u; }
  bool incident(VertexId w) const { return u == w || v == w; }
};

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct structure_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Undirected multigraph with a distinguished terminal subset and an
// optional root terminal. Vertex and edge ids are dense indices assigned
// in construction order; all family builders rely on that determinism.
class TerminalGraph {
 public:
  TerminalGraph() = default;

  VertexId add_vertex(VertexKind kind);
  EdgeId add_edge(VertexId u, VertexId v, EdgeClass cls = EdgeClass::Unclassified);
  void set_root(std::optional<VertexId> r);
  void set_edge_class(EdgeId e, EdgeClass cls);

  int vertex_count() const { return static_cast<int>(kinds_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  VertexKind kind(VertexId v) const { check_vertex(v); return kinds_[v]; }
  bool is_terminal(VertexId v) const { return kind(v) == VertexKind::Terminal; }
  const Edge& edge(EdgeId e) const { check_edge(e); return edges_[e]; }
  Edge& edge_mutable(EdgeId e) { check_edge(e); return edges_[e]; }
  std::optional<VertexId> root() const { return root_; }

  const std::vector<EdgeId>& incident_edges(VertexId v) const {
    check_vertex(v);
    return incidence_[v];
  }
  int degree(VertexId v) const { return static_cast<int>(incident_edges(v).size()); }

  std::vector<VertexId> vertices() const;
  std::vector<VertexId> terminals() const;
  std::vector<VertexId> non_terminals() const;

  // All edges with exactly one endvertex in X, parallel edges counted
  // individually. degree(X) is the size of this set.
  std::vector<EdgeId> boundary(std::span<const VertexId> x) const;
  int set_degree(std::span<const VertexId> x) const;

  // All edges with both endpoints in X.
  std::vector<EdgeId> induced_edge_set(std::span<const VertexId> x) const;

  std::vector<VertexId> neighbours(VertexId v) const;

  bool has_self_loop() const;

  void check_vertex(VertexId v) const;
  void check_edge(EdgeId e) const;

 private:
  std::vector<VertexKind> kinds_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> incidence_;
  std::optional<VertexId> root_;
};

struct ContractionResult {
  TerminalGraph graph;
  VertexId merged = -1;                 // the vertex X collapsed into
  std::vector<VertexId> vertex_map;     // old id -> new id (merged for members of X)
  std::vector<EdgeId> edge_map;         // old id -> new id, -1 for discarded loops
};

// Collapse X to a single vertex, keeping parallel edges and discarding
// loops. The merged vertex is a terminal iff X contains a terminal.
ContractionResult contract(const TerminalGraph& g, std::span<const VertexId> x);

struct SuppressionResult {
  TerminalGraph graph;
  std::vector<VertexId> vertex_map;  // old id -> new id, -1 for removed
};

// Replace every degree-2 non-terminal by a single edge joining its
// neighbours (iterated to a fixed point) and delete isolated
// non-terminals. Only defined on projected connector subgraphs: any
// remaining non-terminal of degree 1 or >= 3 is a structure_error.
SuppressionResult suppress_and_clean(const TerminalGraph& g);

// Canonical JSON form; byte-identical output for equal graphs.
std::string serialize(const TerminalGraph& g);
TerminalGraph deserialize(const std::string& bytes);

std::string to_dot(const TerminalGraph& g, const std::string& name = "g");

}  // namespace tconnect
