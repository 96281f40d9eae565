// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nfi/cell_library.hpp"

namespace nfi {

using NodeId = uint32_t;
constexpr NodeId kNoNode = UINT32_MAX;

enum class NodeKind : uint8_t {
  PortIn,      // module input or defined-input boundary; output pin "o"
  PortOut,     // module output or next-state sink; input pin "i", value = i
  Cell,        // library cell or submodule; pins per CellDefinition
  PassThrough, // clock-free register stand-in; "d" -> "q", maybe negated
  AuxInput,    // unconstrained input attached where fan-in was severed
  ConstSource, // constant 0/1 driver; output pin "o"
  OutputLogic, // differential output layer gate; "i0".."iN" -> "o"
};

enum class LogicOp : uint8_t { And, Or, Xor, Xnor, Not, Buf };

struct Node {
  std::string name;
  NodeKind kind = NodeKind::AuxInput;
  const CellDefinition* cell = nullptr;  // Cell
  bool inverting = false;                // PassThrough
  bool const_value = false;              // ConstSource
  LogicOp op = LogicOp::Buf;             // OutputLogic
  uint32_t arity = 0;                    // OutputLogic fan-in

  bool is_source() const {
    return kind == NodeKind::PortIn || kind == NodeKind::AuxInput ||
           kind == NodeKind::ConstSource;
  }
  bool is_sequential_cell() const {
    return kind == NodeKind::Cell && cell && cell->is_sequential;
  }
};

struct Edge {
  NodeId src = kNoNode;
  std::string src_pin;
  NodeId dst = kNoNode;
  std::string dst_pin;

  bool operator==(const Edge&) const = default;
};

/// Where the Q and D sides of a split register ended up, keyed by the
/// original register node name. Q sides are per output pin.
struct SplitRecord {
  std::map<std::string, std::string> q_nodes;  // output pin -> node name
  std::string d_node;
};

/// Directed multigraph over ports, cells and helper nodes. Immutable once
/// built; every transformation produces a new graph.
class CircuitGraph {
 public:
  NodeId add_node(Node n);
  void add_edge(NodeId src, std::string src_pin, NodeId dst,
                std::string dst_pin);

  size_t node_count() const { return nodes_.size(); }
  size_t edge_count() const { return edges_.size(); }
  const Node& node(NodeId id) const;
  Node& node_mut(NodeId id);
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<uint32_t>& out_edges(NodeId id) const;
  const std::vector<uint32_t>& in_edges(NodeId id) const;

  std::optional<NodeId> find(const std::string& name) const;
  NodeId require(const std::string& name) const;  // throws Err::UnknownNode

  /// Driver (edge index) of a given input pin, if connected.
  std::optional<uint32_t> in_edge_on_pin(NodeId id,
                                         const std::string& pin) const;

  /// Input pins a node needs driven, by kind (cells: all declared inputs).
  std::vector<std::string> required_input_pins(NodeId id) const;

  /// Multi-bit name registry: base name -> node names, LSB first. Ports and
  /// registers are registered by the builders; survives subgraphing.
  void register_group(const std::string& base, std::vector<std::string> bits);
  const std::map<std::string, std::vector<std::string>>& groups() const {
    return groups_;
  }

  std::map<std::string, SplitRecord>& splits() { return splits_; }
  const std::map<std::string, SplitRecord>& splits() const { return splits_; }

  /// Resolves a fault-spec node name to an ordered bit list. `want_input`
  /// picks the Q side of a split register, otherwise the D side.
  std::vector<NodeId> resolve_group(const std::string& name,
                                    bool want_input) const;

  std::vector<std::string> diagnostics;

  // -- algorithms ------------------------------------------------------

  /// Nodes lying on some directed path from any source to any sink:
  /// forward-reachable(sources) intersected with backward-reachable(sinks).
  std::set<NodeId> nodes_between(const std::set<NodeId>& sources,
                                 const std::set<NodeId>& sinks) const;

  /// Sequential cell nodes on a directed cycle (nontrivial SCC membership or
  /// a self-loop), found with Tarjan's algorithm.
  std::set<NodeId> sequential_cycle_nodes() const;

  /// Subgraph over `keep`; edges with both endpoints kept. Groups and split
  /// records are filtered to surviving nodes.
  CircuitGraph induced_subgraph(const std::set<NodeId>& keep) const;

  /// Topological order, or nullopt when the graph has a cycle.
  std::optional<std::vector<NodeId>> topo_order() const;

  std::string to_dot() const;
  std::string to_json() const;  // Listing-style {"Nodes": .., "Edges": ..}

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<uint32_t>> out_edges_;
  std::vector<std::vector<uint32_t>> in_edges_;
  std::map<std::string, NodeId> by_name_;
  std::map<std::string, std::vector<std::string>> groups_;
  std::map<std::string, SplitRecord> splits_;
};

/// JSON graph frontend ({"Nodes": {...}, "Edges": {...}}); node types are
/// cell names from `lib`/`submodules`, "input", "output", "const0"/"const1".
CircuitGraph parse_graph_json(
    const std::string& text, const CellLibrary& lib,
    const std::map<std::string, CellDefinition>& submodules = {});

}  // namespace nfi
