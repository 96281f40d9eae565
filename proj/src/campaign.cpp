// SPDX-License-Identifier: Apache-2.0
#include "nfi/campaign.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nfi/errors.hpp"
#include "nfi/liberty.hpp"
#include "nfi/netlist.hpp"

namespace nfi {

bool CampaignReport::any_effective() const {
  for (const auto& m : models)
    if (m.effective > 0) return true;
  return false;
}

std::unique_ptr<SatSolver> SolverConfig::make() const {
  if (kind == Kind::External) return make_external_solver(external_command);
  CdclOptions o;
  o.seed = seed;
  o.conflict_limit = conflict_limit;
  return make_cdcl_solver(o);
}

std::vector<Verdict> evaluate_configs(
    const TargetGraph& target, const CellLibrary& lib,
    const FaultSpecification& spec, EvaluationMode mode,
    const std::vector<FaultConfig>& configs, const SolverConfig& solver,
    bool parallel, int num_threads) {
  std::vector<Verdict> results(configs.size());
  auto eval_one = [&](size_t i) {
    try {
      CircuitGraph faulty = inject_faults(target, lib, configs[i]);
      DifferentialGraph diff = build_differential(target, faulty, spec, mode);
      auto s = solver.make();
      results[i] = evaluate(diff, *s);
    } catch (const std::exception& e) {
      // One bad config must not take the campaign down; the record shows up
      // as inconclusive instead.
      results[i].kind = VerdictKind::Inconclusive;
      results[i].note = std::string("evaluation failed: ") + e.what();
    }
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic, 4) num_threads(num_threads)
    for (int64_t i = 0; i < static_cast<int64_t>(configs.size()); ++i)
      eval_one(static_cast<size_t>(i));
  } else {
    // Serial reference path; must produce results identical to the kernel
    // above for any thread count.
    for (size_t i = 0; i < configs.size(); ++i) eval_one(i);
  }
  return results;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Err::Io, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Err::Io, "cannot write '" + path + "'");
  out << text;
}

ModelReport run_model(const CellLibrary& lib, const CircuitGraph& graph,
                      const NamedFaultModel& model, const CampaignOptions& opts,
                      bool single_model) {
  auto start = std::chrono::steady_clock::now();

  FaultSpecification spec = model.spec;
  if (opts.override_k) spec.simultaneous_faults = *opts.override_k;

  ModelReport report;
  report.name = model.name;
  report.setting = mode_setting(model.mode);
  report.simultaneous_faults = spec.simultaneous_faults;

  PreprocessOptions pre;
  pre.stage_carry_registers = spec.carry_names();
  CircuitGraph preprocessed = preprocess(graph, lib, pre);
  TargetGraph target = extract_target(preprocessed, lib, spec);
  report.circuit_ge = target.gate_equivalents;
  report.target_gates = target.kept_cells;
  report.undefined_input_count = target.undefined_inputs.size();
  report.notes = target.graph.diagnostics;

  if (!opts.dump_target_path.empty()) {
    std::string base = opts.dump_target_path;
    if (!single_model) base += "." + model.name;
    write_file(base, target.graph.to_json());
    write_file(base + ".dot", target.graph.to_dot());
  }

  auto defaults = default_mappings(lib);
  FaultConfigStream stream(target, lib, spec, defaults);
  uint64_t combinations = stream.total_count();

  std::vector<FaultConfig> configs;
  while (auto config = stream.next()) {
    if (opts.max_faults && configs.size() >= opts.max_faults) {
      report.notes.push_back("config stream truncated at " +
                             std::to_string(opts.max_faults) + " of " +
                             std::to_string(combinations));
      break;
    }
    configs.push_back(std::move(*config));
  }

  if (opts.dump_differential && *opts.dump_differential < configs.size()) {
    const FaultConfig& config = configs[*opts.dump_differential];
    CircuitGraph faulty = inject_faults(target, lib, config);
    DifferentialGraph diff = build_differential(target, faulty, spec,
                                                model.mode);
    write_file("differential_" + std::to_string(*opts.dump_differential) +
                   ".dot",
               diff.graph.to_dot());
  }

  std::vector<Verdict> verdicts =
      evaluate_configs(target, lib, spec, model.mode, configs, opts.solver,
                       opts.parallelism > 1, opts.parallelism);

  report.total = configs.size();
  for (size_t i = 0; i < verdicts.size(); ++i) {
    switch (verdicts[i].kind) {
      case VerdictKind::Effective: {
        ++report.effective;
        EffectiveFault record;
        record.config_index = i;
        for (const auto& f : configs[i].faults) {
          record.locations.push_back(target.graph.node(f.location).name);
          record.mappings.push_back(f.mapping.label());
        }
        record.witness = verdicts[i].witness;
        report.effective_faults.push_back(std::move(record));
        break;
      }
      case VerdictKind::Inconclusive:
        ++report.inconclusive;
        report.notes.push_back("config " + std::to_string(i) +
                               " inconclusive: " + verdicts[i].note);
        break;
      case VerdictKind::Ineffective:
        break;
    }
  }
  report.effective_percent =
      report.total == 0
          ? 0.0
          : 100.0 * static_cast<double>(report.effective) /
                static_cast<double>(report.total);
  report.execution_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace

CampaignReport run_campaign_loaded(const CellLibrary& lib,
                                   const CircuitGraph& graph,
                                   const std::vector<NamedFaultModel>& models,
                                   const CampaignOptions& opts) {
  CampaignReport report;
  for (const auto& model : models) {
    try {
      report.models.push_back(
          run_model(lib, graph, model, opts, models.size() == 1));
    } catch (const Error& e) {
      throw Error(e.kind(),
                  "model '" + model.name + "': " + e.what());
    }
  }
  return report;
}

CampaignReport run_campaign(const std::string& lib_path,
                            const std::string& netlist_path,
                            const std::string& spec_path,
                            const CampaignOptions& opts) {
  auto ends_with = [](const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
  };

  CellLibrary lib;
  try {
    std::string text = read_file(lib_path);
    lib = ends_with(lib_path, ".json") ? parse_cell_library_json(text)
                                       : parse_liberty(text);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("cell library: ") + e.what());
  }

  CircuitGraph graph;
  try {
    std::string text = read_file(netlist_path);
    if (ends_with(netlist_path, ".json")) {
      graph = parse_graph_json(text, lib, opts.submodules);
    } else {
      auto modules = parse_netlist(text);
      if (modules.empty())
        throw Error(Err::SyntaxError, "netlist defines no modules");
      const NetlistModule* chosen = nullptr;
      if (!opts.module_name.empty()) {
        for (const auto& m : modules)
          if (m.name == opts.module_name) chosen = &m;
        if (!chosen)
          throw Error(Err::UnknownNode,
                      "no module named '" + opts.module_name + "'");
      } else {
        // Top module: one that no other module instantiates.
        std::set<std::string> instantiated;
        for (const auto& m : modules)
          for (const auto& inst : m.instances) instantiated.insert(inst.type);
        for (const auto& m : modules)
          if (!instantiated.count(m.name)) chosen = &m;
        if (!chosen) chosen = &modules.back();
      }
      graph = build_graph(*chosen, lib, opts.submodules);
    }
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("netlist: ") + e.what());
  }

  std::vector<NamedFaultModel> models;
  try {
    models = parse_fault_spec(read_file(spec_path));
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("fault spec: ") + e.what());
  }

  return run_campaign_loaded(lib, graph, models, opts);
}

std::string CampaignReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["models"] = nlohmann::ordered_json::array();
  for (const auto& m : models) {
    nlohmann::ordered_json jm;
    jm["name"] = m.name;
    jm["setting"] = m.setting;
    jm["simultaneous_faults"] = m.simultaneous_faults;
    jm["total"] = m.total;
    jm["effective"] = m.effective;
    jm["inconclusive"] = m.inconclusive;
    jm["effective_percent"] = m.effective_percent;
    jm["execution_seconds"] = m.execution_seconds;
    jm["circuit_ge"] = m.circuit_ge;
    jm["target_gates"] = m.target_gates;
    jm["undefined_inputs"] = m.undefined_input_count;
    jm["effective_faults"] = nlohmann::ordered_json::array();
    for (const auto& f : m.effective_faults) {
      nlohmann::ordered_json jf;
      jf["index"] = f.config_index;
      jf["locations"] = f.locations;
      jf["mappings"] = f.mappings;
      nlohmann::ordered_json w = nlohmann::ordered_json::object();
      for (const auto& [name, bit] : f.witness) w[name] = bit ? 1 : 0;
      jf["witness"] = std::move(w);
      jm["effective_faults"].push_back(std::move(jf));
    }
    jm["notes"] = m.notes;
    doc["models"].push_back(std::move(jm));
  }
  return doc.dump(2) + "\n";
}

std::string summarize(const CampaignReport& report) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof(line), "%-40s %-8s %-14s %-12s %-10s %-11s %s\n",
                "Target", "Setting", "Simult. Faults", "Effective %", "Total",
                "Execution", "Circuit GE");
  os << line;
  os << std::string(110, '-') << "\n";
  for (const auto& m : report.models) {
    char exec[32];
    std::snprintf(exec, sizeof(exec), "%.2f s", m.execution_seconds);
    char pct[32];
    std::snprintf(pct, sizeof(pct), "%.2f %%", m.effective_percent);
    char ge[32];
    std::snprintf(ge, sizeof(ge), "%.2f", m.circuit_ge);
    std::snprintf(line, sizeof(line),
                  "%-40s %-8s %-14d %-12s %-10llu %-11s %s\n", m.name.c_str(),
                  m.setting.c_str(), m.simultaneous_faults, pct,
                  static_cast<unsigned long long>(m.total), exec, ge);
    os << line;
  }
  return os.str();
}

}  // namespace nfi
