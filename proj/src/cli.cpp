#include "tconnect/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tconnect/catalog.hpp"
#include "tconnect/connectivity.hpp"
#include "tconnect/connectors.hpp"
#include "tconnect/families.hpp"
#include "tconnect/multigraph.hpp"

namespace tconnect::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct FamilyFlags {
  std::string family;
  int k = 1;
  int i = 0;
  std::string base = "georges-50";
  std::string hgraph = "k33";
  long long budget = 4000000;
  int jobs = 1;
  bool skip_verify = false;
};

void add_family_flags(CLI::App* cmd, FamilyFlags& f, bool family_required = true) {
  auto* opt = cmd->add_option("--family", f.family,
                              "one of F0|Fi|Fstar|Flevel|FstarTop|Nprime|G|harness");
  if (family_required) opt->required();
  cmd->add_option("--k", f.k, "connector count parameter (1 or even)");
  cmd->add_option("--i", f.i, "gadget level for Fi/Fstar");
  cmd->add_option("--base", f.base, "catalog name of the base graph");
  cmd->add_option("--hgraph", f.hgraph, "catalog name of the harness frame");
  cmd->add_option("--budget", f.budget, "search node budget");
  cmd->add_option("--jobs", f.jobs, "worker threads for flow batches");
  cmd->add_flag("--skip-verify", f.skip_verify, "skip build-time invariant checks");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write '" + path.string() + "'");
  out << bytes;
}

// Either a plain gadget or a full assembly, depending on the family.
struct BuiltFamily {
  TerminalGraph graph;
  bool has_assembly = false;
  Assembly assembly;
  std::vector<std::string> warnings;
};

BuiltFamily build_family(const FamilyFlags& f) {
  BuildOptions opts;
  opts.verify = !f.skip_verify;
  opts.hamilton_budget = f.budget;
  opts.jobs = f.jobs;

  BuiltFamily out;
  if (f.family == "F0") {
    out.graph = build_F0(f.k).graph;
  } else if (f.family == "Fi") {
    out.graph = build_Fi(f.k, f.i).graph;
  } else if (f.family == "Fstar") {
    out.graph = build_Fstar(f.k, f.i).graph;
  } else if (f.family == "Flevel") {
    out.graph = build_Flevel(f.k).graph;
  } else if (f.family == "FstarTop") {
    out.graph = build_Fstar_top(f.k).graph;
  } else if (f.family == "Nprime") {
    auto np = build_Nprime(catalog_get(f.base).graph, f.k, opts);
    out.graph = np.graph;
    out.warnings = np.warnings;
  } else if (f.family == "G") {
    out.assembly = assemble_G(catalog_get(f.base).graph, f.base, f.k, opts);
    out.graph = out.assembly.graph;
    out.has_assembly = true;
    out.warnings = out.assembly.warnings;
  } else if (f.family == "harness") {
    Assembly g = assemble_G(catalog_get(f.base).graph, f.base, f.k, opts);
    VertexId r = g.graph.terminals().front();
    out.assembly = build_lemma_harness(catalog_get(f.hgraph).graph, g, r, f.k, opts);
    out.graph = out.assembly.graph;
    out.has_assembly = true;
    out.warnings = out.assembly.warnings;
  } else {
    throw input_error("unknown family '" + f.family + "'");
  }
  return out;
}

int cmd_build(const FamilyFlags& f, const std::string& out_dir, std::ostream& out,
              std::ostream& err) {
  BuiltFamily built = build_family(f);
  fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  write_file(dir / "graph.json", serialize(built.graph));
  write_file(dir / "graph.dot", to_dot(built.graph));
  ordered_json rep;
  rep["family"] = f.family;
  rep["k"] = f.k;
  rep["vertices"] = built.graph.vertex_count();
  rep["edges"] = built.graph.edge_count();
  rep["terminals"] = static_cast<int>(built.graph.terminals().size());
  rep["files"] = {(dir / "graph.json").string(), (dir / "graph.dot").string()};
  if (built.has_assembly) {
    write_file(dir / "embedding.json", serialize_embedding(built.assembly));
    write_file(dir / "atoms.json", serialize_atoms(built.assembly));
    rep["atoms"] = static_cast<int>(built.assembly.atoms.atoms.size());
    rep["files"].push_back((dir / "embedding.json").string());
    rep["files"].push_back((dir / "atoms.json").string());
  }
  rep["warnings"] = built.warnings;
  out << rep.dump(2) << "\n";
  err << "built " << f.family << " (k=" << f.k << "): " << built.graph.vertex_count()
      << " vertices, " << built.graph.edge_count() << " edges\n";
  for (const auto& w : built.warnings) err << "warning: " << w << "\n";
  return kExitPass;
}

int cmd_check(const FamilyFlags& f, const std::string& what, std::ostream& out,
              std::ostream& err) {
  BuiltFamily built = build_family(f);
  ordered_json rep;
  rep["family"] = f.family;
  rep["k"] = f.k;
  bool pass = true;

  if (what == "connectivity" || what == "all") {
    auto conn = steiner_edge_connectivity(built.graph, f.jobs);
    ordered_json jc;
    jc["value"] = conn.value;
    jc["expected"] = 3 * f.k;
    jc["witness_cut"] = conn.witness_cut;
    ordered_json flows = ordered_json::array();
    for (auto [t, v] : conn.per_terminal_flow) flows.push_back({{"terminal", t}, {"flow", v}});
    jc["per_terminal_flow"] = flows;
    jc["pass"] = conn.value == 3 * f.k;
    pass = pass && conn.value == 3 * f.k;
    rep["connectivity"] = jc;
  }
  if (what == "degrees" || what == "all") {
    bool ok = true;
    std::string detail;
    try {
      check_degree_invariants(built.graph, f.k);
    } catch (const structure_error& e) {
      ok = false;
      detail = e.what();
    }
    rep["degrees"] = {{"pass", ok}, {"detail", detail}};
    pass = pass && ok;
  }
  if (what == "classes" || what == "all") {
    if (built.graph.root()) {
      bool ok = true;
      std::string detail;
      int i_for_class = f.family == "F0" ? 0 : (f.family == "FstarTop" ? -1 : f.i);
      if (f.family == "FstarTop" || f.family == "Flevel") {
        rep["classes"] = {{"pass", true}, {"detail", "no class structure at the hub root"}};
      } else {
        try {
          check_class_totals(built.graph, f.k, i_for_class);
        } catch (const structure_error& e) {
          ok = false;
          detail = e.what();
        }
        rep["classes"] = {{"pass", ok}, {"detail", detail}};
        pass = pass && ok;
      }
    } else {
      rep["classes"] = {{"pass", true}, {"detail", "graph has no root"}};
    }
  }
  if ((what == "cuts" || what == "all") && built.has_assembly) {
    auto cuts = registered_basic_cuts(built.assembly);
    int failed = 0;
    ordered_json arr = ordered_json::array();
    for (const auto& cut : cuts) {
      auto check = is_basic_cut(built.assembly.graph, built.assembly.atoms, cut.x0);
      bool found = false;
      if (check.ok) {
        for (const auto& cert : check.certificates)
          if (cert.cut == cut.cut) found = true;
      }
      bool ok = check.ok && found &&
                static_cast<int>(cut.cut.size()) == 3 * f.k;
      if (!ok) {
        ++failed;
        arr.push_back({{"label", cut.label},
                       {"pass", false},
                       {"reason", check.ok ? "cut not a component boundary" : check.reason}});
      }
    }
    rep["cuts"] = {{"total", static_cast<int>(cuts.size())},
                   {"failed", failed},
                   {"failures", arr},
                   {"pass", failed == 0}};
    pass = pass && failed == 0;
  }

  rep["pass"] = pass;
  out << rep.dump(2) << "\n";
  err << "check " << what << ": " << (pass ? "pass" : "FAIL") << "\n";
  return pass ? kExitPass : kExitViolation;
}

int cmd_catalog(const std::string& action, const std::string& name, long long budget,
                std::ostream& out, std::ostream& err) {
  if (action == "list") {
    ordered_json rep = ordered_json::array();
    for (const auto& n : catalog_names()) {
      NamedGraph g = catalog_get(n);
      rep.push_back({{"name", n},
                     {"vertices", g.graph.vertex_count()},
                     {"edges", g.graph.edge_count()},
                     {"graph6", g.graph6},
                     {"expected",
                      {{"cubic", g.expected.cubic},
                       {"bipartite", g.expected.bipartite},
                       {"three_connected", g.expected.three_connected},
                       {"hamiltonian", g.expected.hamiltonian}}}});
    }
    out << rep.dump(2) << "\n";
    return kExitPass;
  }
  if (action != "verify") throw CLI::ParseError("catalog action must be list|verify", kExitUsage);

  NamedGraph g = catalog_get(name);
  BaseReport rep = verify_base(g.graph);
  auto ham = find_hamiltonian_cycle(g.graph, budget);

  ordered_json j;
  j["name"] = name;
  j["vertices"] = g.graph.vertex_count();
  j["edges"] = g.graph.edge_count();
  j["cubic"] = rep.cubic;
  j["bipartite"] = rep.bipartite;
  j["three_connected"] = rep.three_connected;
  j["hamiltonian"] = ham.status == SearchStatus::Found
                         ? "yes"
                         : (ham.status == SearchStatus::None ? "no" : "budget-exceeded");
  if (ham.status == SearchStatus::Found) j["cycle"] = ham.cycle;
  j["search_nodes"] = ham.nodes;

  bool match = rep.cubic == g.expected.cubic && rep.bipartite == g.expected.bipartite &&
               rep.three_connected == g.expected.three_connected;
  bool ham_known = ham.status != SearchStatus::BudgetExceeded;
  if (ham_known) match = match && (ham.status == SearchStatus::Found) == g.expected.hamiltonian;
  j["matches_expected"] = match;
  out << j.dump(2) << "\n";
  err << "catalog verify " << name << ": " << (match ? "pass" : "FAIL") << "\n";
  if (!ham_known) return kExitBudget;
  return match ? kExitPass : kExitViolation;
}

int cmd_pack(const FamilyFlags& f, const std::string& graph_file, bool lift,
             const std::string& out_file, std::ostream& out, std::ostream& err) {
  if (lift) {
    BuiltFamily built = build_family(f);
    if (!built.has_assembly) throw input_error("--lift needs --family G");
    auto ham = find_hamiltonian_cycle(built.assembly.base, f.budget);
    if (ham.status == SearchStatus::BudgetExceeded) return kExitBudget;
    if (ham.status == SearchStatus::None) {
      err << "base graph has no Hamilton cycle; nothing to lift\n";
      return kExitViolation;
    }
    auto cert = lift_hamilton_cycle(built.assembly, ham.cycle);
    std::string bytes = serialize_certificate(cert);
    if (!out_file.empty()) write_file(out_file, bytes);
    out << bytes;
    err << "lifted certificate with " << cert.connectors[0].size() << " paths\n";
    return kExitPass;
  }

  TerminalGraph g;
  if (!graph_file.empty()) {
    g = deserialize(read_file(graph_file));
  } else {
    g = build_family(f).graph;
  }
  auto res = pack_exact(g, f.k, f.budget);
  ordered_json j;
  j["k"] = f.k;
  j["nodes"] = res.nodes;
  if (res.status == PackStatus::Found) {
    j["result"] = "found";
    std::string bytes = serialize_certificate(res.certificate);
    if (!out_file.empty()) write_file(out_file, bytes);
    j["certificate"] = nlohmann::ordered_json::parse(bytes);
  } else if (res.status == PackStatus::None) {
    j["result"] = "none";
  } else {
    j["result"] = "budget-exceeded";
  }
  out << j.dump(2) << "\n";
  err << "pack: " << j["result"].get<std::string>() << "\n";
  return res.status == PackStatus::BudgetExceeded ? kExitBudget : kExitPass;
}

int cmd_validate(const std::string& graph_file, const std::string& cert_file,
                 std::ostream& out, std::ostream& err) {
  TerminalGraph g = deserialize(read_file(graph_file));
  ConnectorCertificate cert = deserialize_certificate(read_file(cert_file));
  auto res = validate_certificate(g, cert);
  ordered_json j;
  j["ok"] = res.ok;
  if (res.violation) {
    j["violation"] = {{"clause", res.violation->clause},
                      {"detail", res.violation->detail},
                      {"connector", res.violation->connector},
                      {"path", res.violation->path},
                      {"edges", res.violation->edges}};
  }
  out << j.dump(2) << "\n";
  err << "validate: " << (res.ok ? "ok" : res.violation->clause) << "\n";
  return res.ok ? kExitPass : kExitViolation;
}

int cmd_audit(const FamilyFlags& f, const std::string& cert_file, int r, uint64_t seed,
              int samples, std::ostream& out, std::ostream& err) {
  BuiltFamily built = build_family(f);
  if (!built.has_assembly) throw input_error("audit needs --family G or harness");
  ConnectorCertificate cert = deserialize_certificate(read_file(cert_file));
  VertexId rv = r >= 0 ? r : built.assembly.graph.terminals().front();
  AuditOptions opts;
  opts.seed = seed;
  opts.aligned_samples = samples;
  auto audit = audit_packing(built.assembly, cert, rv, opts);
  out << audit_to_json(audit);
  err << "audit: " << (audit.pass ? "pass" : "FAIL") << "\n";
  return audit.pass ? kExitPass : kExitViolation;
}

int cmd_project(const FamilyFlags& f, const std::string& cert_file, const std::string& to,
                int connector, std::ostream& out, std::ostream& err) {
  BuiltFamily built = build_family(f);
  if (!built.has_assembly) throw input_error("project needs --family G or harness");
  ConnectorCertificate cert = deserialize_certificate(read_file(cert_file));

  ordered_json j;
  if (to == "base") {
    auto proj = project_to_base(built.assembly, certificate_edges(cert));
    j["ok"] = proj.ok;
    j["witness"] = proj.witness;
    j["base_edges"] = proj.base_edges;
    j["two_regular"] = proj.two_regular;
    j["connected_spanning"] = proj.connected_spanning;
    j["hamilton_cycle"] = proj.hamilton_cycle;
    out << j.dump(2) << "\n";
    err << "project to base: " << (proj.ok ? "ok" : "split fibre") << "\n";
    return proj.ok ? kExitPass : kExitViolation;
  }
  if (to == "atoms") {
    std::vector<EdgeId> edges;
    if (connector >= 0) {
      if (connector >= static_cast<int>(cert.connectors.size()))
        throw input_error("connector index out of range");
      for (const auto& p : cert.connectors[connector])
        edges.insert(edges.end(), p.edges.begin(), p.edges.end());
    } else {
      edges = certificate_edges(cert);
    }
    TerminalGraph proj = project_to_atom_graph(built.assembly.graph, built.assembly.atoms,
                                               edges);
    out << serialize(proj);
    err << "projected onto " << proj.vertex_count() << " atom vertices\n";
    return kExitPass;
  }
  throw input_error("--to must be base|atoms");
}

int cmd_export(const FamilyFlags& f, const std::string& format, const std::string& out_file,
               std::ostream& out, std::ostream& err) {
  BuiltFamily built = build_family(f);
  std::string bytes;
  if (format == "json")
    bytes = serialize(built.graph);
  else if (format == "dot")
    bytes = to_dot(built.graph);
  else if (format == "graph6")
    bytes = to_graph6(built.graph) + "\n";
  else
    throw input_error("--format must be json|dot|graph6");
  if (!out_file.empty())
    write_file(out_file, bytes);
  else
    out << bytes;
  err << "exported " << f.family << " as " << format << "\n";
  return kExitPass;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"terminal-connector counterexample toolkit"};
  app.require_subcommand(1);

  FamilyFlags fam;
  std::string out_dir, what = "all", action, name, graph_file, cert_file, to = "base",
              format = "json", out_file;
  bool lift = false;
  int r = -1, connector = -1, samples = 64;
  uint64_t seed = 1;

  auto* c_build = app.add_subcommand("build", "construct a family graph and write it out");
  add_family_flags(c_build, fam);
  c_build->add_option("--out", out_dir, "output directory");

  auto* c_check = app.add_subcommand("check", "verify family invariants");
  add_family_flags(c_check, fam);
  c_check->add_option("--what", what, "connectivity|degrees|classes|cuts|all");

  auto* c_catalog = app.add_subcommand("catalog", "list or verify stored base graphs");
  c_catalog->add_option("action", action, "list|verify")->required();
  c_catalog->add_option("name", name, "catalog graph name");
  c_catalog->add_option("--budget", fam.budget, "search node budget");

  auto* c_pack = app.add_subcommand("pack", "search for edge-disjoint connectors");
  add_family_flags(c_pack, fam, false);
  c_pack->add_option("--graph", graph_file, "graph JSON file (instead of --family)");
  c_pack->add_flag("--lift", lift, "lift a base Hamilton cycle (k = 1 families)");
  c_pack->add_option("--out", out_file, "certificate output file");

  auto* c_validate = app.add_subcommand("validate", "validate a connector certificate");
  c_validate->add_option("--graph", graph_file)->required();
  c_validate->add_option("--cert", cert_file)->required();

  auto* c_audit = app.add_subcommand("audit", "run the packing audit on a certificate");
  add_family_flags(c_audit, fam);
  c_audit->add_option("--cert", cert_file)->required();
  c_audit->add_option("--r", r, "designated terminal (default: lowest id)");
  c_audit->add_option("--seed", seed, "seed for sampled aligned sets");
  c_audit->add_option("--samples", samples, "number of sampled aligned sets");

  auto* c_project = app.add_subcommand("project", "project certificate edges");
  add_family_flags(c_project, fam);
  c_project->add_option("--cert", cert_file)->required();
  c_project->add_option("--to", to, "base|atoms");
  c_project->add_option("--connector", connector, "restrict to one connector");

  auto* c_export = app.add_subcommand("export", "export a family graph");
  add_family_flags(c_export, fam);
  c_export->add_option("--format", format, "json|dot|graph6");
  c_export->add_option("--out", out_file, "output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(c_build)) return cmd_build(fam, out_dir, out, err);
    if (app.got_subcommand(c_check)) return cmd_check(fam, what, out, err);
    if (app.got_subcommand(c_catalog)) return cmd_catalog(action, name, fam.budget, out, err);
    if (app.got_subcommand(c_pack)) return cmd_pack(fam, graph_file, lift, out_file, out, err);
    if (app.got_subcommand(c_validate)) return cmd_validate(graph_file, cert_file, out, err);
    if (app.got_subcommand(c_audit))
      return cmd_audit(fam, cert_file, r, seed, samples, out, err);
    if (app.got_subcommand(c_project))
      return cmd_project(fam, cert_file, to, connector, out, err);
    if (app.got_subcommand(c_export)) return cmd_export(fam, format, out_file, out, err);
  } catch (const input_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const structure_error& e) {
    err << "violation: " << e.what() << "\n";
    return kExitViolation;
  }
  return kExitUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace tconnect::cli
