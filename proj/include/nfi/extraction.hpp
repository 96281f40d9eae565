// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>
#include <vector>

#include "nfi/circuit_graph.hpp"
#include "nfi/fault_spec.hpp"

namespace nfi {

struct PreprocessOptions {
  // Register names that carry values between consecutive stages; these
  // become pass-throughs even when they sit on a cycle.
  std::set<std::string> stage_carry_registers;
};

/// Removes time dependencies: registers on a directed cycle are split into a
/// fresh AuxInput (the current-state Q side, one per output pin) and a
/// PortOut sink (the next-state D side); remaining pipeline registers become
/// PassThrough nodes (inverting for QN pins). Clock/reset pins are dropped.
/// The result is acyclic; a remaining cycle means combinational feedback and
/// raises Err::CombinationalCycle.
CircuitGraph preprocess(const CircuitGraph& g, const CellLibrary& lib,
                        const PreprocessOptions& opts = {});

/// A named slice of a target boundary: the spec name, its bit nodes, and
/// the values bound to them (driven values for inputs, expected values for
/// outputs/alerts, plus the fault-target values in specific modes).
struct NamedGroup {
  std::string name;
  std::vector<NodeId> bits;  // LSB first
  BitVector values;
  BitVector fault_values;  // defined_outputs in Specific modes only
};

struct TargetGraph {
  CircuitGraph graph;
  std::vector<NamedGroup> defined_inputs;
  std::vector<NamedGroup> defined_outputs;
  std::vector<NamedGroup> alert_outputs;
  std::vector<NodeId> undefined_inputs;  // deterministic order
  double gate_equivalents = 0.0;
  size_t kept_cells = 0;
};

/// Extracts the subcircuit between the spec's inputs and outputs (alerts
/// count as sinks): the induced subgraph over nodes_between, with defined
/// inputs converted to input boundaries and every severed fan-in pin
/// repaired with a fresh AuxInput. GE = sum of kept cell areas / nand2
/// area, falling back to the kept cell count when areas are absent.
TargetGraph extract_target(const CircuitGraph& g, const CellLibrary& lib,
                           const FaultSpecification& spec);

}  // namespace nfi
