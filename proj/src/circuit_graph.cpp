// SPDX-License-Identifier: Apache-2.0
#include "nfi/circuit_graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "json.hpp"
#include "nfi/errors.hpp"

namespace nfi {

NodeId CircuitGraph::add_node(Node n) {
  NodeId id = static_cast<NodeId>(nodes_.size());
  if (!n.name.empty()) {
    auto [it, inserted] = by_name_.emplace(n.name, id);
    if (!inserted)
      throw Error(Err::UnknownNode, "duplicate node name '" + n.name + "'");
  }
  nodes_.push_back(std::move(n));
  out_edges_.emplace_back();
  in_edges_.emplace_back();
  return id;
}

void CircuitGraph::add_edge(NodeId src, std::string src_pin, NodeId dst,
                            std::string dst_pin) {
  if (src >= nodes_.size() || dst >= nodes_.size())
    throw Error(Err::UnknownNode, "edge endpoint out of range");
  uint32_t idx = static_cast<uint32_t>(edges_.size());
  edges_.push_back({src, std::move(src_pin), dst, std::move(dst_pin)});
  out_edges_[src].push_back(idx);
  in_edges_[dst].push_back(idx);
}

const Node& CircuitGraph::node(NodeId id) const {
  if (id >= nodes_.size())
    throw Error(Err::UnknownNode, "node id " + std::to_string(id) +
                                      " out of range");
  return nodes_[id];
}

Node& CircuitGraph::node_mut(NodeId id) {
  if (id >= nodes_.size())
    throw Error(Err::UnknownNode, "node id " + std::to_string(id) +
                                      " out of range");
  return nodes_[id];
}

const std::vector<uint32_t>& CircuitGraph::out_edges(NodeId id) const {
  node(id);
  return out_edges_[id];
}

const std::vector<uint32_t>& CircuitGraph::in_edges(NodeId id) const {
  node(id);
  return in_edges_[id];
}

std::optional<NodeId> CircuitGraph::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

NodeId CircuitGraph::require(const std::string& name) const {
  auto id = find(name);
  if (!id) throw Error(Err::UnknownNode, "no node named '" + name + "'");
  return *id;
}

std::optional<uint32_t> CircuitGraph::in_edge_on_pin(
    NodeId id, const std::string& pin) const {
  for (uint32_t e : in_edges(id))
    if (edges_[e].dst_pin == pin) return e;
  return std::nullopt;
}

std::vector<std::string> CircuitGraph::required_input_pins(NodeId id) const {
  const Node& n = node(id);
  switch (n.kind) {
    case NodeKind::Cell:
      return n.cell ? n.cell->input_pins : std::vector<std::string>{};
    case NodeKind::PassThrough:
      return {"d"};
    case NodeKind::PortOut:
      return {"i"};
    case NodeKind::OutputLogic: {
      std::vector<std::string> pins;
      for (uint32_t i = 0; i < n.arity; ++i)
        pins.push_back("i" + std::to_string(i));
      return pins;
    }
    default:
      return {};
  }
}

void CircuitGraph::register_group(const std::string& base,
                                  std::vector<std::string> bits) {
  groups_[base] = std::move(bits);
}

std::vector<NodeId> CircuitGraph::resolve_group(const std::string& name,
                                                bool want_input) const {
  // Split registers resolve to the Q side when referenced as an input and
  // the D side when referenced as an output.
  auto resolve_one = [&](const std::string& n) -> std::optional<NodeId> {
    auto split = splits_.find(n);
    if (split != splits_.end()) {
      if (want_input) {
        if (split->second.q_nodes.empty()) return std::nullopt;
        return find(split->second.q_nodes.begin()->second);
      }
      return find(split->second.d_node);
    }
    return find(n);
  };

  auto group = groups_.find(name);
  if (group != groups_.end()) {
    std::vector<NodeId> ids;
    for (const auto& bit : group->second) {
      auto id = resolve_one(bit);
      if (!id)
        throw Error(Err::UnknownNode,
                    "group '" + name + "': bit '" + bit + "' not in graph");
      ids.push_back(*id);
    }
    return ids;
  }
  if (auto id = resolve_one(name)) return {*id};

  // Bit-pattern fallback: collect name[i] nodes.
  std::vector<std::pair<int, NodeId>> indexed;
  for (const auto& [n, id] : by_name_) {
    if (n.size() <= name.size() + 2 || n.compare(0, name.size(), name) != 0 ||
        n[name.size()] != '[' || n.back() != ']')
      continue;
    try {
      int idx = std::stoi(n.substr(name.size() + 1,
                                   n.size() - name.size() - 2));
      auto rid = resolve_one(n);
      if (rid) indexed.emplace_back(idx, *rid);
    } catch (...) {
      continue;
    }
  }
  if (indexed.empty())
    throw Error(Err::UnknownNode, "no node or group named '" + name + "'");
  std::sort(indexed.begin(), indexed.end());
  std::vector<NodeId> ids;
  for (auto& [idx, id] : indexed) ids.push_back(id);
  return ids;
}

std::set<NodeId> CircuitGraph::nodes_between(
    const std::set<NodeId>& sources, const std::set<NodeId>& sinks) const {
  for (NodeId id : sources) node(id);
  for (NodeId id : sinks) node(id);

  auto reach = [&](const std::set<NodeId>& seeds, bool forward) {
    std::vector<bool> seen(nodes_.size(), false);
    std::deque<NodeId> work(seeds.begin(), seeds.end());
    for (NodeId id : seeds) seen[id] = true;
    while (!work.empty()) {
      NodeId id = work.front();
      work.pop_front();
      const auto& next = forward ? out_edges_[id] : in_edges_[id];
      for (uint32_t e : next) {
        NodeId other = forward ? edges_[e].dst : edges_[e].src;
        if (!seen[other]) {
          seen[other] = true;
          work.push_back(other);
        }
      }
    }
    return seen;
  };

  std::vector<bool> fwd = reach(sources, true);
  std::vector<bool> bwd = reach(sinks, false);
  std::set<NodeId> result;
  for (NodeId id = 0; id < nodes_.size(); ++id)
    if (fwd[id] && bwd[id]) result.insert(id);
  return result;
}

std::set<NodeId> CircuitGraph::sequential_cycle_nodes() const {
  // Tarjan SCC, iterative to survive deep netlists.
  const size_t n = nodes_.size();
  std::vector<int> index(n, -1), lowlink(n, 0), scc(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<NodeId> stack;
  std::vector<int> scc_size;
  int next_index = 0;

  struct Frame {
    NodeId node;
    size_t edge = 0;
  };
  for (NodeId start = 0; start < n; ++start) {
    if (index[start] != -1) continue;
    std::vector<Frame> frames{{start}};
    index[start] = lowlink[start] = next_index++;
    stack.push_back(start);
    on_stack[start] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.edge < out_edges_[f.node].size()) {
        NodeId next = edges_[out_edges_[f.node][f.edge++]].dst;
        if (index[next] == -1) {
          index[next] = lowlink[next] = next_index++;
          stack.push_back(next);
          on_stack[next] = true;
          frames.push_back({next});
        } else if (on_stack[next]) {
          lowlink[f.node] = std::min(lowlink[f.node], index[next]);
        }
      } else {
        if (lowlink[f.node] == index[f.node]) {
          int id = static_cast<int>(scc_size.size());
          int size = 0;
          NodeId popped;
          do {
            popped = stack.back();
            stack.pop_back();
            on_stack[popped] = false;
            scc[popped] = id;
            ++size;
          } while (popped != f.node);
          scc_size.push_back(size);
        }
        NodeId done = f.node;
        frames.pop_back();
        if (!frames.empty())
          lowlink[frames.back().node] =
              std::min(lowlink[frames.back().node], lowlink[done]);
      }
    }
  }

  std::set<NodeId> result;
  for (NodeId id = 0; id < n; ++id) {
    if (!nodes_[id].is_sequential_cell()) continue;
    bool on_cycle = scc_size[scc[id]] > 1;
    if (!on_cycle)
      for (uint32_t e : out_edges_[id])
        if (edges_[e].dst == id) on_cycle = true;  // self-loop
    if (on_cycle) result.insert(id);
  }
  return result;
}

CircuitGraph CircuitGraph::induced_subgraph(const std::set<NodeId>& keep) const {
  CircuitGraph g;
  std::vector<NodeId> remap(nodes_.size(), kNoNode);
  for (NodeId id : keep) {
    node(id);
    remap[id] = g.add_node(nodes_[id]);
  }
  for (const auto& e : edges_) {
    if (remap[e.src] != kNoNode && remap[e.dst] != kNoNode)
      g.add_edge(remap[e.src], e.src_pin, remap[e.dst], e.dst_pin);
  }
  // Keep groups whose surviving bits are nonempty, dropping dead bits.
  for (const auto& [base, bits] : groups_) {
    std::vector<std::string> kept_bits;
    for (const auto& bit : bits)
      if (g.find(bit)) kept_bits.push_back(bit);
    if (!kept_bits.empty()) g.register_group(base, std::move(kept_bits));
  }
  for (const auto& [name, split] : splits_) {
    SplitRecord kept;
    for (const auto& [pin, qn] : split.q_nodes)
      if (g.find(qn)) kept.q_nodes[pin] = qn;
    if (g.find(split.d_node)) kept.d_node = split.d_node;
    if (!kept.q_nodes.empty() || !kept.d_node.empty()) g.splits_[name] = kept;
  }
  return g;
}

std::optional<std::vector<NodeId>> CircuitGraph::topo_order() const {
  std::vector<uint32_t> indegree(nodes_.size(), 0);
  for (const auto& e : edges_) ++indegree[e.dst];
  std::deque<NodeId> ready;
  for (NodeId id = 0; id < nodes_.size(); ++id)
    if (indegree[id] == 0) ready.push_back(id);
  std::vector<NodeId> order;
  order.reserve(nodes_.size());
  while (!ready.empty()) {
    NodeId id = ready.front();
    ready.pop_front();
    order.push_back(id);
    for (uint32_t e : out_edges_[id])
      if (--indegree[edges_[e].dst] == 0) ready.push_back(edges_[e].dst);
  }
  if (order.size() != nodes_.size()) return std::nullopt;
  return order;
}

namespace {

std::string node_type_label(const Node& n) {
  switch (n.kind) {
    case NodeKind::PortIn:
      return "input";
    case NodeKind::PortOut:
      return "output";
    case NodeKind::Cell:
      return n.cell ? n.cell->name : "cell";
    case NodeKind::PassThrough:
      return n.inverting ? "passthrough_inv" : "passthrough";
    case NodeKind::AuxInput:
      return "aux_input";
    case NodeKind::ConstSource:
      return n.const_value ? "const1" : "const0";
    case NodeKind::OutputLogic:
      switch (n.op) {
        case LogicOp::And: return "AND";
        case LogicOp::Or: return "OR";
        case LogicOp::Xor: return "XOR";
        case LogicOp::Xnor: return "XNOR";
        case LogicOp::Not: return "NOT";
        case LogicOp::Buf: return "BUF";
      }
  }
  return "?";
}

}  // namespace

std::string CircuitGraph::to_dot() const {
  std::ostringstream os;
  os << "digraph circuit {\n  rankdir=LR;\n";
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    const Node& n = nodes_[id];
    const char* shape = "box";
    if (n.kind == NodeKind::PortIn || n.kind == NodeKind::AuxInput)
      shape = "ellipse";
    else if (n.kind == NodeKind::PortOut)
      shape = "doublecircle";
    else if (n.kind == NodeKind::OutputLogic)
      shape = "diamond";
    os << "  n" << id << " [shape=" << shape << ", label=\"" << n.name << "\\n"
       << node_type_label(n) << "\"];\n";
  }
  for (const auto& e : edges_) {
    os << "  n" << e.src << " -> n" << e.dst << " [taillabel=\"" << e.src_pin
       << "\", headlabel=\"" << e.dst_pin << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string CircuitGraph::to_json() const {
  nlohmann::ordered_json doc;
  auto& nodes = doc["Nodes"];
  for (NodeId id = 0; id < nodes_.size(); ++id)
    nodes[nodes_[id].name]["type"] = node_type_label(nodes_[id]);
  auto& edges = doc["Edges"];
  for (size_t i = 0; i < edges_.size(); ++i) {
    nlohmann::ordered_json e;
    e["out"]["node"] = nodes_[edges_[i].src].name;
    e["out"]["port"] = edges_[i].src_pin;
    e["in"]["node"] = nodes_[edges_[i].dst].name;
    e["in"]["port"] = edges_[i].dst_pin;
    edges[std::to_string(i + 1)] = std::move(e);
  }
  return doc.dump(2);
}

CircuitGraph parse_graph_json(
    const std::string& text, const CellLibrary& lib,
    const std::map<std::string, CellDefinition>& submodules) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(Err::SchemaError, std::string("bad graph JSON: ") + e.what());
  }
  if (!doc.contains("Nodes"))
    throw Error(Err::SchemaError, "graph JSON: missing 'Nodes'");
  CircuitGraph g;
  for (auto it = doc["Nodes"].begin(); it != doc["Nodes"].end(); ++it) {
    std::string type = it.value().value("type", "");
    Node n;
    n.name = it.key();
    if (type == "input") {
      n.kind = NodeKind::PortIn;
    } else if (type == "output") {
      n.kind = NodeKind::PortOut;
    } else if (type == "const0" || type == "const1") {
      n.kind = NodeKind::ConstSource;
      n.const_value = type == "const1";
    } else if (const CellDefinition* cell = lib.find(type)) {
      n.kind = NodeKind::Cell;
      n.cell = cell;
    } else if (auto sub = submodules.find(type); sub != submodules.end()) {
      n.kind = NodeKind::Cell;
      n.cell = &sub->second;
    } else {
      throw Error(Err::UnresolvedCell,
                  "graph JSON: node '" + n.name + "' has unknown type '" +
                      type + "'");
    }
    g.add_node(std::move(n));
  }
  if (doc.contains("Edges")) {
    for (auto it = doc["Edges"].begin(); it != doc["Edges"].end(); ++it) {
      const auto& e = it.value();
      try {
        g.add_edge(g.require(e.at("out").at("node").get<std::string>()),
                   e.at("out").value("port", "o"),
                   g.require(e.at("in").at("node").get<std::string>()),
                   e.at("in").value("port", "i"));
      } catch (const nlohmann::json::exception& ex) {
        throw Error(Err::SchemaError,
                    "graph JSON: bad edge '" + it.key() + "': " + ex.what());
      }
    }
  }
  return g;
}

}  // namespace nfi
