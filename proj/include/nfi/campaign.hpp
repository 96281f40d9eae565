// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nfi/differential.hpp"
#include "nfi/sat.hpp"

namespace nfi {

struct EffectiveFault {
  uint64_t config_index = 0;
  std::vector<std::string> locations;  // node names
  std::vector<std::string> mappings;   // replacement labels
  std::map<std::string, bool> witness;
};

struct ModelReport {
  std::string name;
  std::string setting;  // FE / FD / FS
  int simultaneous_faults = 1;
  uint64_t total = 0;
  uint64_t effective = 0;
  uint64_t inconclusive = 0;
  double effective_percent = 0.0;
  double execution_seconds = 0.0;
  double circuit_ge = 0.0;
  size_t target_gates = 0;
  size_t undefined_input_count = 0;
  std::vector<EffectiveFault> effective_faults;
  std::vector<std::string> notes;
};

struct CampaignReport {
  std::vector<ModelReport> models;

  bool any_effective() const;
  /// Stable-key-order JSON; worker-count invariant except the timing fields.
  std::string to_json() const;
};

struct SolverConfig {
  enum class Kind { Internal, External } kind = Kind::Internal;
  std::string external_command;
  uint64_t seed = 0;
  uint64_t conflict_limit = 0;

  std::unique_ptr<SatSolver> make() const;
};

struct CampaignOptions {
  int parallelism = 1;
  uint64_t max_faults = 0;             // 0 = unlimited; truncates in stream order
  std::optional<int> override_k;       // --simultaneous-faults
  SolverConfig solver;
  std::string module_name;             // empty = top module of the netlist
  std::string dump_target_path;        // --dump-target
  std::optional<uint64_t> dump_differential;  // --dump-differential N
  std::map<std::string, CellDefinition> submodules;
};

/// Full pipeline: parse the cell library and netlist, then run every named
/// fault model end to end (preprocess, extract, enumerate, inject, build
/// differential, solve) across up to `parallelism` workers. Aggregation is
/// keyed by config index, so reports are identical for any worker count.
CampaignReport run_campaign(const std::string& lib_path,
                            const std::string& netlist_path,
                            const std::string& spec_path,
                            const CampaignOptions& opts = {});

/// Same pipeline over already-loaded inputs (test entry point).
CampaignReport run_campaign_loaded(const CellLibrary& lib,
                                   const CircuitGraph& graph,
                                   const std::vector<NamedFaultModel>& models,
                                   const CampaignOptions& opts = {});

/// Evaluates every config of one prepared model. `parallel` switches
/// between the OpenMP kernel and the serial reference loop; both produce
/// index-ordered verdicts and must agree exactly.
std::vector<Verdict> evaluate_configs(
    const TargetGraph& target, const CellLibrary& lib,
    const FaultSpecification& spec, EvaluationMode mode,
    const std::vector<FaultConfig>& configs, const SolverConfig& solver,
    bool parallel, int num_threads);

/// Fixed-width table: Target | Setting | Simult. Faults | Effective % |
/// Total | Execution | Circuit GE. One row per model, file order.
std::string summarize(const CampaignReport& report);

}  // namespace nfi
