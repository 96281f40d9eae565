// SPDX-License-Identifier: Apache-2.0
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nfi/errors.hpp"
#include "nfi/netlist.hpp"

namespace nfi {
namespace {

// Union-find over net-bit names for `assign` alias classes.
class NetClasses {
 public:
  std::string find(const std::string& n) {
    auto it = parent_.find(n);
    if (it == parent_.end() || it->second == n) return n;
    std::string root = find(it->second);
    parent_[n] = root;
    return root;
  }
  void unite(const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    if (ra != rb) parent_[ra] = rb;
  }

 private:
  std::map<std::string, std::string> parent_;
};

struct Driver {
  NodeId node = kNoNode;
  std::string pin;
  std::string describe;  // for error messages
};

}  // namespace

CircuitGraph build_graph(const NetlistModule& module, const CellLibrary& lib,
                         const std::map<std::string, CellDefinition>& submodules) {
  CircuitGraph g;
  NetClasses classes;
  for (const auto& [lhs, rhs] : module.aliases) classes.unite(lhs, rhs);

  std::map<std::string, Driver> drivers;    // class root -> driver
  std::map<std::string, bool> const_class;  // class root -> tied value
  auto set_driver = [&](const std::string& net, NodeId node,
                        const std::string& pin, const std::string& what) {
    std::string root = classes.find(net);
    if (drivers.count(root) || const_class.count(root))
      throw Error(Err::MultipleDrivers, "net '" + net + "' driven by " + what +
                                            " and " +
                                            (drivers.count(root)
                                                 ? drivers[root].describe
                                                 : "a constant tie"));
    drivers[root] = {node, pin, what};
  };

  for (const auto& [net, value] : module.const_ties) {
    std::string root = classes.find(net);
    if (const_class.count(root) && const_class[root] != value)
      throw Error(Err::MultipleDrivers,
                  "net '" + net + "' tied to both constants");
    if (drivers.count(root))
      throw Error(Err::MultipleDrivers,
                  "net '" + net + "' tied to a constant and driven by " +
                      drivers[root].describe);
    const_class[root] = value;
  }

  // Ports first (declaration order), then instances, then constants/aux.
  for (const auto& port : module.ports) {
    std::vector<std::string> bit_nodes;
    for (const auto& bit : module.port_bits(port)) {
      Node n;
      n.name = bit;
      n.kind = port.dir == PortDir::In ? NodeKind::PortIn : NodeKind::PortOut;
      NodeId id = g.add_node(std::move(n));
      bit_nodes.push_back(bit);
      if (port.dir == PortDir::In)
        set_driver(bit, id, "o", "input port '" + bit + "'");
    }
    g.register_group(port.name, std::move(bit_nodes));
  }

  auto resolve_type = [&](const std::string& type) -> const CellDefinition* {
    if (const CellDefinition* c = lib.find(type)) return c;
    auto it = submodules.find(type);
    if (it != submodules.end()) return &it->second;
    throw Error(Err::UnresolvedCell,
                "instance type '" + type +
                    "' not in the cell library or submodule functions");
  };

  for (const auto& inst : module.instances) {
    const CellDefinition* cell = resolve_type(inst.type);
    Node n;
    n.name = inst.name;
    n.kind = NodeKind::Cell;
    n.cell = cell;
    NodeId id = g.add_node(std::move(n));
    for (const auto& [pin, net] : inst.connections) {
      if (!cell->has_input(pin) && !cell->has_output(pin))
        throw Error(Err::MissingPin, "cell '" + cell->name + "' (instance '" +
                                         inst.name + "') has no pin '" + pin +
                                         "'");
      if (cell->has_output(pin) && !net.empty())
        set_driver(net, id, pin, "'" + inst.name + "." + pin + "'");
    }
  }

  std::map<bool, NodeId> const_nodes;
  auto const_node = [&](bool value) {
    auto it = const_nodes.find(value);
    if (it != const_nodes.end()) return it->second;
    Node n;
    n.name = value ? "1'b1" : "1'b0";
    n.kind = NodeKind::ConstSource;
    n.const_value = value;
    NodeId id = g.add_node(std::move(n));
    const_nodes[value] = id;
    return id;
  };

  // Connect every sink pin to its net's driver; dangling pins are repaired
  // with fresh auxiliary inputs.
  auto connect_sink = [&](const std::string& net, NodeId dst,
                          const std::string& dst_pin,
                          const std::string& what) {
    if (net == "1'b0" || net == "1'b1") {
      g.add_edge(const_node(net == "1'b1"), "o", dst, dst_pin);
      return;
    }
    std::string root = net.empty() ? "" : classes.find(net);
    if (!net.empty() && const_class.count(root)) {
      g.add_edge(const_node(const_class[root]), "o", dst, dst_pin);
      return;
    }
    auto it = net.empty() ? drivers.end() : drivers.find(root);
    if (it == drivers.end()) {
      g.diagnostics.push_back("dangling input " + what +
                              ": attached auxiliary input");
      Node aux;
      aux.name = "aux:" + what;
      aux.kind = NodeKind::AuxInput;
      NodeId aid = g.add_node(std::move(aux));
      g.add_edge(aid, "o", dst, dst_pin);
      return;
    }
    g.add_edge(it->second.node, it->second.pin, dst, dst_pin);
  };

  for (const auto& inst : module.instances) {
    const CellDefinition* cell = resolve_type(inst.type);
    NodeId id = g.require(inst.name);
    for (const auto& pin : cell->input_pins) {
      auto conn = inst.connections.find(pin);
      std::string net = conn == inst.connections.end() ? "" : conn->second;
      connect_sink(net, id, pin, inst.name + "." + pin);
    }
  }

  for (const auto& port : module.ports) {
    if (port.dir != PortDir::Out) continue;
    for (const auto& bit : module.port_bits(port)) {
      NodeId id = g.require(bit);
      connect_sink(bit, id, "i", "output port '" + bit + "'");
    }
  }

  return g;
}

}  // namespace nfi
