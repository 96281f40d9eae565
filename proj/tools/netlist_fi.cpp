// SPDX-License-Identifier: Apache-2.0
//
// netlist-fi: SAT-based fault-injection verification on gate-level netlists.
//
//   netlist-fi run   --lib L.lib --netlist N.v --spec S.json [options]
//   netlist-fi demos --out DIR
//   netlist-fi solve CNF.dimacs
//
// Exit codes for `run`: 0 = clean campaign, 2 = effective faults found,
// 1 = error.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nfi/campaign.hpp"
#include "nfi/demos.hpp"
#include "nfi/errors.hpp"
#include "nfi/sat.hpp"

namespace {

int run_command(const std::string& lib, const std::string& netlist,
                const std::string& spec, nfi::CampaignOptions& opts,
                const std::string& report_path, const std::string& format,
                const std::string& submodules_path) {
  if (!submodules_path.empty()) {
    std::ifstream in(submodules_path);
    if (!in) {
      std::cerr << "error: cannot open '" << submodules_path << "'\n";
      return 1;
    }
    std::ostringstream os;
    os << in.rdbuf();
    nfi::CellLibrary subs = nfi::parse_cell_library_json(os.str());
    for (auto& [name, cell] : subs.cells) opts.submodules[name] = cell;
  }

  nfi::CampaignReport report = nfi::run_campaign(lib, netlist, spec, opts);
  if (format == "json")
    std::cout << report.to_json();
  else
    std::cout << nfi::summarize(report);
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) {
      std::cerr << "error: cannot write '" << report_path << "'\n";
      return 1;
    }
    out << report.to_json();
  }
  return report.any_effective() ? 2 : 0;
}

int solve_command(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    return 1;
  }
  nfi::CnfFormula cnf;
  std::string line;
  std::vector<int> clause;  // clauses may span lines
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == 'p') {
      std::istringstream ls(line);
      std::string p, fmt;
      int clauses;
      ls >> p >> fmt >> cnf.num_vars >> clauses;
      continue;
    }
    std::istringstream ls(line);
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        cnf.clauses.push_back(clause);
        clause.clear();
      } else {
        clause.push_back(lit);
      }
    }
  }
  auto solver = nfi::make_cdcl_solver({});
  nfi::SolveResult res = solver->solve(cnf);
  switch (res.status) {
    case nfi::SolveStatus::Sat: {
      std::cout << "s SATISFIABLE\n";
      std::ostringstream vs;
      vs << "v";
      for (int v = 1; v <= cnf.num_vars; ++v)
        vs << " " << (res.model[v] ? v : -v);
      vs << " 0";
      std::cout << vs.str() << "\n";
      return 10;
    }
    case nfi::SolveStatus::Unsat:
      std::cout << "s UNSATISFIABLE\n";
      return 20;
    default:
      std::cout << "s UNKNOWN\n";
      return 0;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SAT-based fault-injection verification on synthesized "
               "gate-level netlists"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a fault-injection campaign");
  std::string lib, netlist, spec, report_path, submodules;
  std::string format = "table";
  std::string solver_arg = "internal";
  std::string module_name, dump_target;
  int jobs = 1;
  uint64_t max_faults = 0;
  int simultaneous = -1;
  int64_t dump_differential = -1;
  uint64_t seed = 0;
  uint64_t conflict_limit = 0;
  run->add_option("--lib", lib, "cell library (.lib, or .json)")->required();
  run->add_option("--netlist", netlist, "netlist (.v, or Nodes/Edges .json)")
      ->required();
  run->add_option("--spec", spec, "fault specification (.json)")->required();
  run->add_option("--module", module_name,
                  "module to analyze (default: top module)");
  run->add_option("--simultaneous-faults", simultaneous,
                  "override the file's number of simultaneous faults");
  run->add_option("--jobs", jobs, "worker count for config evaluation");
  run->add_option("--max-faults", max_faults,
                  "truncate the config stream after N configs");
  run->add_option("--solver", solver_arg,
                  "internal | external:COMMAND (DIMACS subprocess)");
  run->add_option("--seed", seed, "internal solver seed");
  run->add_option("--conflict-limit", conflict_limit,
                  "internal solver conflict budget (0 = unlimited)");
  run->add_option("--report", report_path, "write the report JSON here");
  run->add_option("--dump-target", dump_target,
                  "write the extracted target (JSON + .dot)");
  run->add_option("--dump-differential", dump_differential,
                  "write the Nth differential graph as Graphviz");
  run->add_option("--format", format, "stdout format: table | json")
      ->check(CLI::IsMember({"table", "json"}));
  run->add_option("--submodules", submodules,
                  "JSON cell definitions for submodule instances");

  auto* demos = app.add_subcommand("demos", "write the bundled demo corpus");
  std::string out_dir = "demos";
  demos->add_option("--out", out_dir, "output directory")->required();

  auto* solve = app.add_subcommand("solve", "decide a DIMACS file");
  std::string cnf_path;
  solve->add_option("file", cnf_path, "DIMACS CNF file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run)) {
      nfi::CampaignOptions opts;
      opts.parallelism = jobs < 1 ? 1 : jobs;
      opts.max_faults = max_faults;
      if (simultaneous >= 0) opts.override_k = simultaneous;
      opts.module_name = module_name;
      opts.dump_target_path = dump_target;
      if (dump_differential >= 0)
        opts.dump_differential = static_cast<uint64_t>(dump_differential);
      opts.solver.seed = seed;
      opts.solver.conflict_limit = conflict_limit;
      if (solver_arg.rfind("external:", 0) == 0) {
        opts.solver.kind = nfi::SolverConfig::Kind::External;
        opts.solver.external_command = solver_arg.substr(9);
      } else if (solver_arg != "internal") {
        std::cerr << "error: unknown solver '" << solver_arg << "'\n";
        return 1;
      }
      return run_command(lib, netlist, spec, opts, report_path, format,
                         submodules);
    }
    if (app.got_subcommand(demos)) {
      for (const auto& path : nfi::generate_demos(out_dir))
        std::cout << path << "\n";
      return 0;
    }
    if (app.got_subcommand(solve)) return solve_command(cnf_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
