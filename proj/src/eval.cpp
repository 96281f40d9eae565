// SPDX-License-Identifier: Apache-2.0
#include "nfi/eval.hpp"

#include "nfi/errors.hpp"

namespace nfi {

SignalValues evaluate_graph(const CircuitGraph& g,
                            const std::map<NodeId, bool>& inputs) {
  auto order = g.topo_order();
  if (!order)
    throw Error(Err::CyclicGraph, "cannot evaluate a cyclic graph");

  SignalValues vals;
  auto driver_value = [&](NodeId id, const std::string& pin) {
    auto e = g.in_edge_on_pin(id, pin);
    if (!e)
      throw Error(Err::MissingPin, "node '" + g.node(id).name +
                                       "': input pin '" + pin +
                                       "' has no driver");
    const Edge& edge = g.edges()[*e];
    return vals.at({edge.src, edge.src_pin});
  };

  for (NodeId id : *order) {
    const Node& n = g.node(id);
    switch (n.kind) {
      case NodeKind::PortIn:
      case NodeKind::AuxInput: {
        auto it = inputs.find(id);
        if (it == inputs.end())
          throw Error(Err::MissingPin,
                      "no value supplied for input node '" + n.name + "'");
        vals[{id, "o"}] = it->second;
        break;
      }
      case NodeKind::ConstSource:
        vals[{id, "o"}] = n.const_value;
        break;
      case NodeKind::PassThrough: {
        bool d = driver_value(id, "d");
        vals[{id, "q"}] = n.inverting ? !d : d;
        break;
      }
      case NodeKind::PortOut:
        vals[{id, "o"}] = driver_value(id, "i");
        break;
      case NodeKind::Cell: {
        std::map<std::string, bool> assignment;
        for (const auto& pin : n.cell->input_pins)
          assignment[pin] = driver_value(id, pin);
        for (const auto& pin : n.cell->output_pins) {
          if (n.cell->functions.count(pin))
            vals[{id, pin}] = evaluate_cell(*n.cell, pin, assignment);
        }
        break;
      }
      case NodeKind::OutputLogic: {
        std::vector<bool> in;
        for (uint32_t i = 0; i < n.arity; ++i)
          in.push_back(driver_value(id, "i" + std::to_string(i)));
        bool v = false;
        switch (n.op) {
          case LogicOp::And:
            v = true;
            for (bool b : in) v = v && b;
            break;
          case LogicOp::Or:
            for (bool b : in) v = v || b;
            break;
          case LogicOp::Xor:
            for (bool b : in) v = v != b;
            break;
          case LogicOp::Xnor:
            v = true;  // XNOR(a,b) over two inputs
            for (bool b : in) v = v != b;
            v = !v;
            break;
          case LogicOp::Not:
            v = !in.at(0);
            break;
          case LogicOp::Buf:
            v = in.at(0);
            break;
        }
        vals[{id, "o"}] = v;
        break;
      }
    }
  }
  return vals;
}

bool node_value(const CircuitGraph& g, const SignalValues& vals, NodeId id) {
  const Node& n = g.node(id);
  switch (n.kind) {
    case NodeKind::PassThrough:
      return vals.at({id, "q"});
    case NodeKind::Cell: {
      if (n.cell->output_pins.empty())
        throw Error(Err::NoFunctionForPin,
                    "node '" + n.name + "' has no outputs");
      return vals.at({id, n.cell->output_pins.front()});
    }
    default:
      return vals.at({id, "o"});
  }
}

}  // namespace nfi
