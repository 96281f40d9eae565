// SPDX-License-Identifier: Apache-2.0
#include "nfi/differential.hpp"

#include <algorithm>

#include "nfi/errors.hpp"
#include "nfi/eval.hpp"

namespace nfi {

std::string FaultConfig::signature(const CircuitGraph& g) const {
  std::string s;
  for (const auto& f : faults) {
    if (!s.empty()) s += "+";
    s += g.node(f.location).name + ":" + f.mapping.label();
  }
  return s;
}

FaultConfigStream::FaultConfigStream(
    const TargetGraph& target, const CellLibrary& lib,
    const FaultSpecification& spec,
    const std::map<std::string, std::vector<FaultMapping>>& defaults) {
  const CircuitGraph& g = target.graph;

  // Replacement cells are resolved against the library up front so that the
  // stream yields concrete, deterministic configs.
  auto resolve_options = [&](NodeId id) {
    const Node& n = g.node(id);
    std::vector<FaultMapping> options;
    if (n.kind == NodeKind::Cell) {
      auto raw = mappings_for_type(n.cell->name, spec.fault_mappings, defaults);
      for (auto& m : raw) {
        if (m.kind == FaultMapping::Kind::Cell)
          m.cell = resolve_replacement_cell(lib, m.cell,
                                            n.cell->input_pins.size())
                       ->name;
        options.push_back(std::move(m));
      }
    } else {
      // Explicitly named pass-throughs and inputs only support stuck-at.
      options.push_back({FaultMapping::Kind::Const0, ""});
      options.push_back({FaultMapping::Kind::Const1, ""});
    }
    return options;
  };

  if (!spec.fault_locations.empty()) {
    for (const auto& name : spec.fault_locations) {
      NodeId id = g.require(name);
      auto options = resolve_options(id);
      if (options.empty()) continue;  // unmappable, skip
      locations_.push_back({id, std::move(options)});
    }
  } else {
    for (NodeId id = 0; id < g.node_count(); ++id) {
      if (g.node(id).kind != NodeKind::Cell) continue;
      auto options = resolve_options(id);
      if (options.empty()) continue;
      locations_.push_back({id, std::move(options)});
    }
  }
  if (locations_.empty())
    throw Error(Err::NoMappableLocations,
                "no fault location has a usable mapping");

  k_ = spec.simultaneous_faults;
  if (static_cast<size_t>(k_) > locations_.size()) {
    exhausted_ = true;  // impossible combination: empty stream
    return;
  }
  subset_.resize(k_);
  for (int i = 0; i < k_; ++i) subset_[i] = i;
  choice_.assign(k_, 0);
}

uint64_t FaultConfigStream::total_count() const {
  if (static_cast<size_t>(k_) > locations_.size()) return 0;
  // ways[j] = sum over j-subsets of the option-count product, built one
  // location at a time.
  std::vector<uint64_t> ways(k_ + 1, 0);
  ways[0] = 1;
  for (const auto& loc : locations_) {
    uint64_t opts = loc.options.size();
    for (int j = k_; j >= 1; --j) {
      uint64_t add = ways[j - 1] * opts;
      ways[j] = ways[j] + add;
    }
  }
  return ways[k_];
}

bool FaultConfigStream::advance_subset() {
  int i = k_ - 1;
  while (i >= 0 &&
         subset_[i] == locations_.size() - static_cast<size_t>(k_ - i))
    --i;
  if (i < 0) return false;
  ++subset_[i];
  for (int j = i + 1; j < k_; ++j) subset_[j] = subset_[j - 1] + 1;
  return true;
}

std::optional<FaultConfig> FaultConfigStream::next() {
  if (exhausted_) return std::nullopt;
  FaultConfig config;
  for (int i = 0; i < k_; ++i) {
    const Location& loc = locations_[subset_[i]];
    config.faults.push_back({loc.node, loc.options[choice_[i]]});
  }
  // Odometer over mapping choices, rightmost fastest; then next subset.
  int i = k_ - 1;
  while (i >= 0 &&
         choice_[i] + 1 == locations_[subset_[i]].options.size())
    --i;
  if (i >= 0) {
    ++choice_[i];
    for (int j = i + 1; j < k_; ++j) choice_[j] = 0;
  } else if (advance_subset()) {
    choice_.assign(k_, 0);
  } else {
    exhausted_ = true;
  }
  return config;
}

CircuitGraph inject_faults(const TargetGraph& target, const CellLibrary& lib,
                           const FaultConfig& config) {
  const CircuitGraph& g = target.graph;
  std::map<NodeId, const Fault*> by_node;
  for (const auto& f : config.faults) {
    g.node(f.location);
    if (!by_node.emplace(f.location, &f).second)
      throw Error(Err::SchemaError, "duplicate fault location in config");
  }

  // Same node order as the target, so ids line up between the copies.
  CircuitGraph out;
  struct Rebind {
    const CellDefinition* replacement = nullptr;  // null = stuck-at
    std::map<std::string, std::string> pin_map;   // old input pin -> new
    std::string out_pin;                          // new output pin
  };
  std::map<NodeId, Rebind> rebinds;

  for (NodeId id = 0; id < g.node_count(); ++id) {
    const Node& n = g.node(id);
    auto f = by_node.find(id);
    if (f == by_node.end()) {
      out.add_node(n);
      continue;
    }
    const FaultMapping& m = f->second->mapping;
    Node replaced;
    replaced.name = n.name;
    if (m.kind == FaultMapping::Kind::Cell) {
      const CellDefinition& repl = lib.at(m.cell);
      if (n.kind != NodeKind::Cell)
        throw Error(Err::ArityMismatch,
                    "cell replacement on non-cell node '" + n.name + "'");
      if (repl.input_pins.size() > n.cell->input_pins.size())
        throw Error(Err::ArityMismatch,
                    "replacement '" + repl.name + "' wider than '" +
                        n.cell->name + "'");
      replaced.kind = NodeKind::Cell;
      replaced.cell = &repl;
      Rebind rb;
      rb.replacement = &repl;
      // Positional binding; surplus original inputs disconnect.
      for (size_t i = 0; i < repl.input_pins.size(); ++i)
        rb.pin_map[n.cell->input_pins[i]] = repl.input_pins[i];
      rb.out_pin = repl.output_pins.empty() ? "o" : repl.output_pins.front();
      rebinds[id] = std::move(rb);
    } else {
      replaced.kind = NodeKind::ConstSource;
      replaced.const_value = m.kind == FaultMapping::Kind::Const1;
      rebinds[id] = Rebind{};  // stuck-at: drop fan-in
    }
    out.add_node(std::move(replaced));
  }

  for (const auto& e : g.edges()) {
    std::string src_pin = e.src_pin;
    std::string dst_pin = e.dst_pin;
    if (auto rb = rebinds.find(e.src); rb != rebinds.end())
      src_pin = rb->second.replacement ? rb->second.out_pin : "o";
    if (auto rb = rebinds.find(e.dst); rb != rebinds.end()) {
      if (!rb->second.replacement) continue;  // stuck-at eats its fan-in
      auto it = rb->second.pin_map.find(e.dst_pin);
      if (it == rb->second.pin_map.end()) continue;  // surplus input dropped
      dst_pin = it->second;
    }
    out.add_edge(e.src, src_pin, e.dst, dst_pin);
  }
  for (const auto& [base, bits] : g.groups()) {
    auto copy = bits;
    out.register_group(base, std::move(copy));
  }
  return out;
}

namespace {

std::string obs_pin(const Node& n) {
  switch (n.kind) {
    case NodeKind::PassThrough:
      return "q";
    case NodeKind::Cell:
      if (n.cell->output_pins.empty())
        throw Error(Err::NoFunctionForPin,
                    "node '" + n.name + "' has no output pin to observe");
      return n.cell->output_pins.front();
    default:
      return "o";
  }
}

}  // namespace

DifferentialGraph build_differential(const TargetGraph& target,
                                     const CircuitGraph& faulty,
                                     const FaultSpecification& /*spec*/,
                                     EvaluationMode mode) {
  const CircuitGraph& nf = target.graph;
  if (faulty.node_count() != nf.node_count())
    throw Error(Err::SchemaError,
                "faulty copy does not share the target's node set");

  DifferentialGraph diff;
  CircuitGraph& d = diff.graph;

  // Shared input layer: constants for defined inputs, free inputs for the
  // rest. Both copies hang off the same layer node.
  std::map<NodeId, NodeId> shared;  // target node -> layer node
  for (const auto& grp : target.defined_inputs) {
    for (size_t i = 0; i < grp.bits.size(); ++i) {
      Node c;
      c.name = "in:" + nf.node(grp.bits[i]).name;
      c.kind = NodeKind::ConstSource;
      c.const_value = grp.values.bit(i);
      shared[grp.bits[i]] = d.add_node(std::move(c));
    }
  }
  for (NodeId id : target.undefined_inputs) {
    Node u;
    u.name = "u:" + nf.node(id).name;
    u.kind = NodeKind::AuxInput;
    NodeId uid = d.add_node(std::move(u));
    shared[id] = uid;
    NamedGroup grp;
    grp.name = nf.node(id).name;
    grp.bits = {uid};
    diff.undefined_inputs.push_back(std::move(grp));
  }
  diff.input_layer_nodes = d.node_count();

  // The two copies. Ids line up, so one remap table per copy suffices.
  auto add_copy = [&](const CircuitGraph& src, const std::string& prefix) {
    std::vector<NodeId> remap(src.node_count(), kNoNode);
    for (NodeId id = 0; id < src.node_count(); ++id) {
      if (shared.count(id)) {
        remap[id] = shared[id];
        continue;
      }
      Node n = src.node(id);
      n.name = prefix + n.name;
      remap[id] = d.add_node(std::move(n));
    }
    for (const auto& e : src.edges()) {
      bool src_shared = shared.count(e.src) > 0;
      d.add_edge(remap[e.src], src_shared ? "o" : e.src_pin, remap[e.dst],
                 e.dst_pin);
    }
    return remap;
  };
  std::vector<NodeId> nf_map = add_copy(nf, "nf:");
  std::vector<NodeId> f_map = add_copy(faulty, "f:");
  diff.copy_nodes = nf.node_count() - shared.size();

  // Output layer.
  size_t layer_start = d.node_count();
  NodeId layer_const[2] = {kNoNode, kNoNode};
  auto const_node = [&](bool v) {
    if (layer_const[v] == kNoNode) {
      Node c;
      c.name = v ? "ol:const1" : "ol:const0";
      c.kind = NodeKind::ConstSource;
      c.const_value = v;
      layer_const[v] = d.add_node(std::move(c));
    }
    return layer_const[v];
  };
  int gate_counter = 0;
  auto named_gate = [&](LogicOp op,
                        const std::vector<std::pair<NodeId, std::string>>&
                            inputs,
                        const std::string& name) {
    Node n;
    n.name = name;
    n.kind = NodeKind::OutputLogic;
    n.op = op;
    n.arity = static_cast<uint32_t>(inputs.size());
    NodeId id = d.add_node(std::move(n));
    for (size_t i = 0; i < inputs.size(); ++i)
      d.add_edge(inputs[i].first, inputs[i].second, id,
                 "i" + std::to_string(i));
    return id;
  };
  auto gate = [&](LogicOp op, const std::vector<std::pair<NodeId, std::string>>&
                                  inputs) {
    return named_gate(op, inputs, "ol:" + std::to_string(gate_counter++));
  };
  auto bit_vs_const = [&](LogicOp op, NodeId copy_node, const Node& orig,
                          bool expected) {
    return gate(op, {{copy_node, obs_pin(orig)}, {const_node(expected), "o"}});
  };

  std::vector<std::pair<NodeId, std::string>> conjuncts;
  std::vector<std::pair<NodeId, std::string>> difference_bits;

  for (const auto& grp : target.defined_outputs) {
    NamedGroup nf_grp{grp.name, {}, grp.values, grp.fault_values};
    NamedGroup f_grp = nf_grp;
    for (size_t i = 0; i < grp.bits.size(); ++i) {
      NodeId orig = grp.bits[i];
      nf_grp.bits.push_back(nf_map[orig]);
      f_grp.bits.push_back(f_map[orig]);
      // (O_NF == O_E), bitwise.
      conjuncts.emplace_back(bit_vs_const(LogicOp::Xnor, nf_map[orig],
                                          nf.node(orig), grp.values.bit(i)),
                             "o");
      if (mode == EvaluationMode::Unspecific ||
          mode == EvaluationMode::UnspecificWithAlerts) {
        // (O_F != O_E) is a disjunction over bit differences.
        difference_bits.emplace_back(
            bit_vs_const(LogicOp::Xor, f_map[orig], nf.node(orig),
                         grp.values.bit(i)),
            "o");
      } else if (grp.fault_values.width() == grp.bits.size()) {
        // (O_F == O_EF), bitwise.
        conjuncts.emplace_back(
            bit_vs_const(LogicOp::Xnor, f_map[orig], nf.node(orig),
                         grp.fault_values.bit(i)),
            "o");
      }
    }
    diff.nf_outputs.push_back(std::move(nf_grp));
    diff.f_outputs.push_back(std::move(f_grp));
  }
  if (!difference_bits.empty())
    conjuncts.emplace_back(gate(LogicOp::Or, difference_bits), "o");

  if (mode == EvaluationMode::UnspecificWithAlerts ||
      mode == EvaluationMode::SpecificWithAlerts) {
    for (const auto& grp : target.alert_outputs) {
      NamedGroup nf_grp{grp.name, {}, grp.values, {}};
      NamedGroup f_grp = nf_grp;
      for (size_t i = 0; i < grp.bits.size(); ++i) {
        NodeId orig = grp.bits[i];
        nf_grp.bits.push_back(nf_map[orig]);
        f_grp.bits.push_back(f_map[orig]);
        conjuncts.emplace_back(bit_vs_const(LogicOp::Xnor, nf_map[orig],
                                            nf.node(orig), grp.values.bit(i)),
                               "o");
        conjuncts.emplace_back(bit_vs_const(LogicOp::Xnor, f_map[orig],
                                            nf.node(orig), grp.values.bit(i)),
                               "o");
      }
      diff.nf_alerts.push_back(std::move(nf_grp));
      diff.f_alerts.push_back(std::move(f_grp));
    }
  }

  if (conjuncts.empty())
    throw Error(Err::SchemaError, "output layer has nothing to compare");
  diff.root = named_gate(LogicOp::And, conjuncts, "root");
  diff.output_logic_nodes = d.node_count() - layer_start;
  return diff;
}

bool evaluate_root(const DifferentialGraph& diff,
                   const std::map<std::string, bool>& undefined) {
  std::map<NodeId, bool> inputs;
  for (const auto& grp : diff.undefined_inputs) {
    auto it = undefined.find(grp.name);
    if (it == undefined.end())
      throw Error(Err::MissingPin,
                  "no value for undefined input '" + grp.name + "'");
    inputs[grp.bits.front()] = it->second;
  }
  SignalValues vals = evaluate_graph(diff.graph, inputs);
  return vals.at({diff.root, "o"});
}

}  // namespace nfi
