// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>

#include "nfi/circuit_graph.hpp"

namespace nfi {

/// Value of every (node, output pin) in the graph. Keyed by node id and pin.
using SignalValues = std::map<std::pair<NodeId, std::string>, bool>;

/// Reference evaluator: computes every node output in topological order.
/// `inputs` must cover all PortIn and AuxInput nodes (by node id).
/// Throws Err::CyclicGraph on cyclic graphs and Err::MissingPin when an
/// input node has no supplied value.
SignalValues evaluate_graph(const CircuitGraph& g,
                            const std::map<NodeId, bool>& inputs);

/// Output value of a node under already-computed signal values. For sinks
/// (PortOut) this is the driver value; for cells the first output pin.
bool node_value(const CircuitGraph& g, const SignalValues& vals, NodeId id);

}  // namespace nfi
