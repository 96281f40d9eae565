// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nfi/extraction.hpp"
#include "nfi/fault_spec.hpp"

namespace nfi {

/// One injected fault: a target cell node and its replacement semantics.
struct Fault {
  NodeId location = kNoNode;
  FaultMapping mapping;

  bool operator==(const Fault&) const = default;
};

/// Exactly k faults at distinct locations.
struct FaultConfig {
  std::vector<Fault> faults;

  std::string signature(const CircuitGraph& g) const;
};

/// Deterministic lexicographic stream over every k-subset of mappable
/// locations crossed with every per-location replacement choice.
class FaultConfigStream {
 public:
  /// Locations default to all mappable cell nodes of the target (spec
  /// fault_locations narrow the set). Throws Err::NoMappableLocations when
  /// nothing in the target can be faulted.
  FaultConfigStream(const TargetGraph& target, const CellLibrary& lib,
                    const FaultSpecification& spec,
                    const std::map<std::string, std::vector<FaultMapping>>&
                        defaults);

  std::optional<FaultConfig> next();
  /// Total number of configs the stream will yield.
  uint64_t total_count() const;

 private:
  struct Location {
    NodeId node;
    std::vector<FaultMapping> options;
  };
  std::vector<Location> locations_;
  int k_ = 1;
  std::vector<size_t> subset_;   // current k-subset (indices, increasing)
  std::vector<size_t> choice_;   // current mapping index per subset slot
  bool exhausted_ = false;
  bool advance_subset();
};

/// Copies the target and applies the config: replacement cells rebind the
/// original input pins positionally (surplus fan-in is dropped), stuck-at
/// mappings turn the node into a ConstSource with no fan-in.
CircuitGraph inject_faults(const TargetGraph& target, const CellLibrary& lib,
                           const FaultConfig& config);

struct DifferentialGraph {
  CircuitGraph graph;
  NodeId root = kNoNode;
  // Shared input layer, the solver's free variables.
  std::vector<NamedGroup> undefined_inputs;
  // Observation points in each copy, for replay and debugging.
  std::vector<NamedGroup> nf_outputs, f_outputs, nf_alerts, f_alerts;
  size_t input_layer_nodes = 0;
  size_t output_logic_nodes = 0;
  size_t copy_nodes = 0;  // per copy
};

/// Assembles reference + faulty copies over a shared input layer and the
/// mode's output predicate:
///   Unspecific:            (O_NF == O_E) and (O_F != O_E)
///   UnspecificWithAlerts:  ... and (O_NFA == O_EA) and (O_FA == O_EA)
///   Specific:              (O_NF == O_E) and (O_F == O_EF)
///   SpecificWithAlerts:    ... and (O_NFA == O_EA) and (O_FA == O_EA)
/// Defined inputs become shared constant sources; undefined inputs become
/// shared free inputs driving the same pin in both copies. Equality against
/// the expected vectors expands to per-bit XNOR conjunctions, inequality to
/// per-bit XOR disjunctions; the single root node conjoins everything.
DifferentialGraph build_differential(const TargetGraph& target,
                                     const CircuitGraph& faulty,
                                     const FaultSpecification& spec,
                                     EvaluationMode mode);

struct SolverStats {
  uint64_t decisions = 0;
  uint64_t conflicts = 0;
  uint64_t propagations = 0;
};

enum class VerdictKind : uint8_t { Ineffective, Effective, Inconclusive };

struct Verdict {
  VerdictKind kind = VerdictKind::Ineffective;
  bool effective() const { return kind == VerdictKind::Effective; }
  // Present iff effective: undefined-input assignment witnessing the fault.
  std::map<std::string, bool> witness;
  SolverStats stats;
  std::string note;  // inconclusive reason
};

/// Evaluates the differential root under explicit input values: defined
/// inputs are baked into the graph, `undefined` supplies the rest. Used for
/// witness replay and the brute-force oracle.
bool evaluate_root(const DifferentialGraph& diff,
                   const std::map<std::string, bool>& undefined);

}  // namespace nfi
