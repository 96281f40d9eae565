// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "nfi/cell_library.hpp"
#include "nfi/circuit_graph.hpp"

namespace nfi {

enum class PortDir { In, Out };

/// One parsed structural module, bit-blasted: every ranged net appears as
/// individual net bits named "base[i]".
struct NetlistModule {
  struct Port {
    std::string name;  // base name
    PortDir dir = PortDir::In;
    int width = 1;      // bit count after blasting
    int low = 0;        // lowest declared index
    bool ranged = false;
  };
  struct Instance {
    std::string name;
    std::string type;  // cell or submodule name
    // pin -> net bit name, constant "1'b0"/"1'b1", or "" for unconnected
    std::map<std::string, std::string> connections;
  };

  std::string name;
  std::vector<Port> ports;
  std::vector<std::string> wires;  // net-bit names (ports excluded)
  std::vector<Instance> instances;
  // alias pairs from `assign lhs = rhs;` (single bits, already blasted)
  std::vector<std::pair<std::string, std::string>> aliases;
  std::map<std::string, bool> const_ties;  // net bit -> 0/1

  std::vector<std::string> port_bits(const Port& p) const;
};

/// Parses the structural Verilog subset: module/endmodule, input/output/wire
/// declarations with optional [msb:lsb] ranges, named-connection cell
/// instantiations, `assign` aliases and constant ties, comments. Behavioral
/// constructs are rejected with Err::UnknownConstruct.
std::vector<NetlistModule> parse_netlist(const std::string& text);

/// Builds the directed multigraph: one node per port bit / instance /
/// constant, one edge per driver->sink pin pair. Instance types resolve in
/// `lib` first, then `submodules`. Dangling instance inputs are repaired
/// with fresh AuxInput nodes and reported in graph.diagnostics.
CircuitGraph build_graph(
    const NetlistModule& module, const CellLibrary& lib,
    const std::map<std::string, CellDefinition>& submodules = {});

}  // namespace nfi
