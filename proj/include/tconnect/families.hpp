#pragma once

#include <map>
#include <string>
#include <vector>

#include "tconnect/insertion.hpp"
#include "tconnect/multigraph.hpp"

namespace tconnect {

struct ConstructionParams {
  int k = 0;
  int ell = 0;  // ceil(log2 k)
  int x = 0;    // 2^(ell-1) - k/2, zero when k is a power of two
};

// Accepts k = 1 or even k; odd k >= 3 has no construction.
ConstructionParams params_for(int k);

// A gadget graph together with its named vertices ("r", "f1", "uA1", ...).
struct BuiltGadget {
  TerminalGraph graph;
  std::map<std::string, VertexId> names;
};

struct Prototype {
  std::string stage;  // "F0", "F1", ..., "Flevel", "K3x", "Nprime", "kH"
  TerminalGraph graph;
  std::map<std::string, VertexId> names;
};

// Where one instance of a prototype ended up in the final graph.
struct CopyRecord {
  std::string key;  // instance path: "", "x3", "x3/f12", "atom7", ...
  int prototype = -1;
  std::vector<VertexId> vertex_img;  // source vid -> final vid, -1 if consumed
  std::vector<EdgeId> edge_img;      // source eid -> final eid (total)
  std::map<VertexId, int> child;     // consumed source terminal -> copy index
};

struct EmbeddingMap {
  std::vector<Prototype> protos;
  std::vector<CopyRecord> copies;

  int find_copy(const std::string& key) const;        // -1 if absent
  const CopyRecord& copy(const std::string& key) const;
  const Prototype& proto(const CopyRecord& c) const { return protos[c.prototype]; }
  VertexId source_vertex(const CopyRecord& c, const std::string& name) const;
  VertexId final_vertex(const std::string& key, const std::string& name) const;

  // All final vertices descended from source vertex v of the given copy:
  // the vertex itself when alive, else everything inserted in its place.
  std::vector<VertexId> descendants(int copy_index, VertexId v) const;
  std::vector<VertexId> copy_vertices(int copy_index) const;  // whole lifted copy
};

// Final-graph edges corresponding to the boundary / induced edges of X in
// the copy's source graph (X given by source vertex ids).
std::vector<EdgeId> copy_delta(const EmbeddingMap& emb, const std::string& copy,
                               std::span<const VertexId> x);
std::vector<EdgeId> copy_epsilon(const EmbeddingMap& emb, const std::string& copy,
                                 std::span<const VertexId> x);
std::vector<EdgeId> copy_delta_names(const EmbeddingMap& emb, const std::string& copy,
                                     std::span<const std::string> names);
std::vector<EdgeId> copy_epsilon_names(const EmbeddingMap& emb, const std::string& copy,
                                       std::span<const std::string> names);

// A graph mid-construction with its instance records.
struct StagedGraph {
  TerminalGraph graph;
  EmbeddingMap emb;
};

struct Atom {
  std::vector<VertexId> terminals;      // 2
  std::vector<VertexId> non_terminals;  // 3k
  std::vector<EdgeId> bridges;          // the 3k boundary edges
  std::string key;                      // copy key of the gadget that formed it
  std::vector<VertexId> vertices() const;
};

struct AtomRegistry {
  std::vector<Atom> atoms;
  int find_by_vertex(VertexId v) const;  // -1 when v is in no atom
};

struct Assembly {
  ConstructionParams params;
  std::string base_name;
  TerminalGraph graph;
  EmbeddingMap emb;
  AtomRegistry atoms;

  TerminalGraph base;                 // the graph N the build started from
  std::vector<VertexId> base_x;       // terminal side of N
  std::vector<VertexId> base_y;
  std::vector<int> nprime_edge_base;  // N' edge -> N edge
  std::vector<int> nprime_edge_copy;  // N' edge -> copy index within the fibre

  std::vector<std::string> warnings;

  // all k final edges corresponding to one edge of N
  std::vector<EdgeId> base_edge_fibre(EdgeId base_edge) const;
};

struct BuildOptions {
  bool verify = true;               // degree/class/connectivity assertions
  long long hamilton_budget = 4000000;  // for the non-hamiltonicity warning
  int jobs = 1;
};

BuiltGadget build_F0(int k);
BuiltGadget build_Fi(int k, int i);      // 1 <= i <= ell-1
BuiltGadget build_Flevel(int k);         // k >= 2
StagedGraph build_Fstar(int k, int i);   // 0 <= i <= ell-1
StagedGraph build_Fstar_top(int k);      // k >= 2
BuiltGadget build_atom_gadget(int k);    // rooted K_{3,3k}

struct NprimeResult {
  TerminalGraph graph;
  std::vector<int> edge_base;  // N' edge -> N edge
  std::vector<int> edge_copy;
  std::vector<VertexId> x_terminals;
  std::vector<VertexId> base_x, base_y;
  std::vector<std::string> warnings;
};
NprimeResult build_Nprime(const TerminalGraph& base, int k,
                          const BuildOptions& opts = {});

Assembly assemble_G(const TerminalGraph& base, const std::string& base_name, int k,
                    const BuildOptions& opts = {});

// The verification harness: k-fold frame graph H (3-connected cubic,
// |V(H)| > 2k) with a copy of the assembly inserted at every vertex.
Assembly build_lemma_harness(const TerminalGraph& frame, const Assembly& g, VertexId r,
                             int k, const BuildOptions& opts = {});

struct RegisteredCut {
  std::string label;
  std::vector<EdgeId> cut;
  std::vector<VertexId> x0;
};
std::vector<RegisteredCut> registered_basic_cuts(const Assembly& a);

struct RegisteredAlignedSet {
  std::string label;
  std::vector<VertexId> set;
};
std::vector<RegisteredAlignedSet> registered_aligned_sets(const Assembly& a);

// terminals degree 3k, non-terminals degree 3; throws structure_error
void check_degree_invariants(const TerminalGraph& g, int k);
// class totals (3k/2, 3k/2 - 2^i, 2^i) on the root boundary
void check_class_totals(const TerminalGraph& g, int k, int i);

std::string serialize_embedding(const Assembly& a);
std::string serialize_atoms(const Assembly& a);

}  // namespace tconnect
