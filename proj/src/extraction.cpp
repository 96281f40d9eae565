// SPDX-License-Identifier: Apache-2.0
#include "nfi/extraction.hpp"

#include <algorithm>
#include <map>

#include "nfi/errors.hpp"

namespace nfi {
namespace {

// Output pins of a sequential node that actually drive something.
std::vector<std::string> live_output_pins(const CircuitGraph& g, NodeId id) {
  std::vector<std::string> pins;
  for (uint32_t e : g.out_edges(id)) {
    const std::string& pin = g.edges()[e].src_pin;
    if (std::find(pins.begin(), pins.end(), pin) == pins.end())
      pins.push_back(pin);
  }
  return pins;
}

}  // namespace

CircuitGraph preprocess(const CircuitGraph& g, const CellLibrary& /*lib*/,
                        const PreprocessOptions& opts) {
  std::set<NodeId> on_cycle = g.sequential_cycle_nodes();

  CircuitGraph out;
  out.diagnostics = g.diagnostics;

  struct SeqReplacement {
    std::string data_pin;
    NodeId d_sink = kNoNode;                  // split only
    std::map<std::string, NodeId> q_per_pin;  // out pin -> aux or pass node
    bool split = false;
  };
  std::vector<NodeId> remap(g.node_count(), kNoNode);
  std::map<NodeId, SeqReplacement> seq;

  for (NodeId id = 0; id < g.node_count(); ++id) {
    const Node& n = g.node(id);
    if (!n.is_sequential_cell()) {
      remap[id] = out.add_node(n);
      continue;
    }
    if (!n.cell->data_pin || !n.cell->has_input(*n.cell->data_pin))
      throw Error(Err::UnknownSequentialSemantics,
                  "register '" + n.name + "' (cell '" + n.cell->name +
                      "'): data pin unknown; provide a sequential override");

    SeqReplacement rep;
    rep.data_pin = *n.cell->data_pin;
    rep.split = on_cycle.count(id) && !opts.stage_carry_registers.count(n.name);

    std::vector<std::string> pins = live_output_pins(g, id);
    auto pin_inverted = [&](const std::string& pin) {
      auto it = n.cell->output_inverted.find(pin);
      return it != n.cell->output_inverted.end() && it->second;
    };

    if (rep.split) {
      SplitRecord record;
      if (pins.size() > 1) {
        out.diagnostics.push_back("register '" + n.name +
                                  "' on a cycle drives several output pins; "
                                  "split produced one state input per pin");
      }
      for (const auto& pin : pins) {
        Node aux;
        bool inv = pin_inverted(pin);
        aux.name = n.name + (inv ? ".qn" : ".q");
        if (out.find(aux.name)) aux.name = n.name + ".q_" + pin;
        aux.kind = NodeKind::AuxInput;
        NodeId aid = out.add_node(std::move(aux));
        rep.q_per_pin[pin] = aid;
        record.q_nodes[pin] = out.node(aid).name;
      }
      Node sink;
      sink.name = n.name + ".d";
      sink.kind = NodeKind::PortOut;
      rep.d_sink = out.add_node(std::move(sink));
      record.d_node = n.name + ".d";
      out.splits()[n.name] = std::move(record);
    } else {
      if (pins.empty()) {
        out.diagnostics.push_back("register '" + n.name +
                                  "' drives nothing; dropped");
      }
      for (const auto& pin : pins) {
        Node pass;
        bool inv = pin_inverted(pin);
        pass.name = pins.size() == 1 ? n.name
                                     : (inv ? n.name + ".qn" : n.name);
        if (out.find(pass.name)) pass.name = n.name + ".q_" + pin;
        pass.kind = NodeKind::PassThrough;
        pass.inverting = inv;
        rep.q_per_pin[pin] = out.add_node(std::move(pass));
      }
    }
    seq[id] = std::move(rep);
  }

  // Names are stable across this rewrite (split registers are reachable
  // through the split records), so metadata carries over unchanged.
  for (const auto& [base, bits] : g.groups()) {
    auto copy = bits;
    out.register_group(base, std::move(copy));
  }
  for (const auto& [name, split] : g.splits()) out.splits()[name] = split;

  for (const auto& e : g.edges()) {
    // Source side: sequential outputs re-source from their replacement.
    std::vector<std::pair<NodeId, std::string>> sources;
    if (auto it = seq.find(e.src); it != seq.end()) {
      auto q = it->second.q_per_pin.find(e.src_pin);
      if (q == it->second.q_per_pin.end()) continue;  // dead pin
      const Node& qn = out.node(q->second);
      sources.emplace_back(q->second,
                           qn.kind == NodeKind::AuxInput ? "o" : "q");
    } else {
      sources.emplace_back(remap[e.src], e.src_pin);
    }

    // Destination side: the data pin feeds the d-sink (split) or every
    // pass-through replica; other sequential inputs (clock, reset) drop.
    std::vector<std::pair<NodeId, std::string>> dests;
    if (auto it = seq.find(e.dst); it != seq.end()) {
      if (e.dst_pin != it->second.data_pin) continue;
      if (it->second.split) {
        dests.emplace_back(it->second.d_sink, "i");
      } else {
        for (const auto& [pin, node] : it->second.q_per_pin)
          dests.emplace_back(node, "d");
      }
    } else {
      dests.emplace_back(remap[e.dst], e.dst_pin);
    }

    for (const auto& [src, src_pin] : sources)
      for (const auto& [dst, dst_pin] : dests)
        out.add_edge(src, src_pin, dst, dst_pin);
  }

  if (!out.topo_order())
    throw Error(Err::CombinationalCycle,
                "graph still has a cycle after register removal "
                "(combinational feedback, or a stage-carried register on a "
                "loop)");
  return out;
}

namespace {

BitVector normalize_bits(const std::string& name, const SpecBits& value,
                         size_t width) {
  if (value.exact && value.bits.width() != width)
    throw Error(Err::WidthMismatch,
                "'" + name + "': value is " +
                    std::to_string(value.bits.width()) + " bits, net is " +
                    std::to_string(width));
  if (value.bits.width() > width)
    throw Error(Err::WidthMismatch,
                "'" + name + "': value needs " +
                    std::to_string(value.bits.width()) + " bits, net has " +
                    std::to_string(width));
  BitVector bv(width);
  for (size_t i = 0; i < value.bits.width(); ++i)
    bv.bits[i] = value.bits.bit(i);
  return bv;
}

}  // namespace

TargetGraph extract_target(const CircuitGraph& g, const CellLibrary& lib,
                           const FaultSpecification& spec) {
  // Boundary name lists: stage boundaries first, then names that only
  // appear in the value maps (extra defined inputs tighten the analysis).
  std::vector<std::string> input_names = spec.effective_inputs();
  for (const auto& [name, v] : spec.input_values)
    if (std::find(input_names.begin(), input_names.end(), name) ==
        input_names.end())
      input_names.push_back(name);
  std::vector<std::string> output_names = spec.effective_outputs();
  for (const auto& [name, v] : spec.output_values)
    if (std::find(output_names.begin(), output_names.end(), name) ==
        output_names.end())
      output_names.push_back(name);
  for (const auto& [name, v] : spec.output_fault_values)
    if (!spec.output_values.count(name))
      throw Error(Err::SchemaError, "output_fault_values." + name +
                                        ": no matching output_values entry");

  std::map<std::string, std::vector<NodeId>> input_bits, output_bits,
      alert_bits;
  std::set<NodeId> sources, sinks;
  for (const auto& name : input_names) {
    auto bits = g.resolve_group(name, /*want_input=*/true);
    sources.insert(bits.begin(), bits.end());
    input_bits[name] = std::move(bits);
  }
  for (const auto& name : output_names) {
    auto bits = g.resolve_group(name, /*want_input=*/false);
    sinks.insert(bits.begin(), bits.end());
    output_bits[name] = std::move(bits);
  }
  for (const auto& [name, v] : spec.alert_values) {
    auto bits = g.resolve_group(name, /*want_input=*/false);
    sinks.insert(bits.begin(), bits.end());
    alert_bits[name] = std::move(bits);
  }

  std::set<NodeId> kept = g.nodes_between(sources, sinks);
  if (kept.empty())
    throw Error(Err::EmptyTarget, "no path from any input to any output");

  std::vector<std::string> notes;
  for (const auto& [name, bits] : output_bits)
    for (NodeId id : bits)
      if (!kept.count(id))
        notes.push_back("output '" + name + "' not reachable from the inputs");
  for (const auto& [name, bits] : alert_bits)
    for (NodeId id : bits)
      if (!kept.count(id))
        notes.push_back("alert '" + name + "' not reachable from the inputs");
  // Boundaries stay part of the target even when off every path, so their
  // observation points exist.
  for (NodeId id : sources) kept.insert(id);
  for (NodeId id : sinks) kept.insert(id);

  std::set<NodeId> defined_input_nodes;
  for (const auto& [name, bits] : input_bits)
    defined_input_nodes.insert(bits.begin(), bits.end());

  // Rebuild the kept region; defined inputs become input boundaries (their
  // own fan-in and function are cut).
  TargetGraph target;
  CircuitGraph& t = target.graph;
  t.diagnostics = notes;
  std::vector<NodeId> remap(g.node_count(), kNoNode);
  for (NodeId id : kept) {
    const Node& n = g.node(id);
    if (defined_input_nodes.count(id)) {
      Node boundary;
      boundary.name = n.name;
      boundary.kind = NodeKind::PortIn;
      remap[id] = t.add_node(std::move(boundary));
    } else {
      remap[id] = t.add_node(n);
    }
  }
  for (const auto& e : g.edges()) {
    if (remap[e.src] == kNoNode || remap[e.dst] == kNoNode) continue;
    if (defined_input_nodes.count(e.dst)) continue;  // severed fan-in
    std::string src_pin = e.src_pin;
    if (defined_input_nodes.count(e.src)) {
      // An input boundary carries one value; multi-output cells cannot
      // serve as defined inputs.
      const Node& src = g.node(e.src);
      if (src.kind == NodeKind::Cell && src.cell->output_pins.size() > 1)
        throw Error(Err::SchemaError,
                    "multi-output cell '" + src.name +
                        "' cannot be a defined input");
      src_pin = "o";
    }
    t.add_edge(remap[e.src], src_pin, remap[e.dst], e.dst_pin);
  }
  for (const auto& [base, bits] : g.groups()) {
    std::vector<std::string> kept_bits;
    for (const auto& bit : bits)
      if (t.find(bit)) kept_bits.push_back(bit);
    if (!kept_bits.empty()) t.register_group(base, std::move(kept_bits));
  }
  for (const auto& [name, split] : g.splits()) {
    SplitRecord kept_split;
    for (const auto& [pin, qn] : split.q_nodes)
      if (t.find(qn)) kept_split.q_nodes[pin] = qn;
    if (t.find(split.d_node)) kept_split.d_node = split.d_node;
    if (!kept_split.q_nodes.empty() || !kept_split.d_node.empty())
      t.splits()[name] = kept_split;
  }

  // Repair severed fan-in with fresh auxiliary inputs (node order, then
  // declared pin order, keeps this deterministic).
  const size_t rebuilt = t.node_count();
  for (NodeId id = 0; id < rebuilt; ++id) {
    for (const auto& pin : t.required_input_pins(id)) {
      if (t.in_edge_on_pin(id, pin)) continue;
      Node aux;
      aux.name = "aux:" + t.node(id).name + "." + pin;
      aux.kind = NodeKind::AuxInput;
      NodeId aid = t.add_node(std::move(aux));
      t.add_edge(aid, "o", id, pin);
    }
  }

  // Bind values.
  auto remap_bits = [&](const std::vector<NodeId>& bits) {
    std::vector<NodeId> out;
    for (NodeId id : bits) out.push_back(remap[id]);
    return out;
  };
  for (const auto& name : input_names) {
    NamedGroup grp;
    grp.name = name;
    grp.bits = remap_bits(input_bits[name]);
    auto v = spec.input_values.find(name);
    if (v == spec.input_values.end()) continue;  // boundary without a value
    grp.values = normalize_bits(name, v->second, grp.bits.size());
    target.defined_inputs.push_back(std::move(grp));
  }
  for (const auto& name : output_names) {
    auto v = spec.output_values.find(name);
    if (v == spec.output_values.end()) continue;  // sink without comparison
    NamedGroup grp;
    grp.name = name;
    grp.bits = remap_bits(output_bits[name]);
    grp.values = normalize_bits(name, v->second, grp.bits.size());
    if (auto f = spec.output_fault_values.find(name);
        f != spec.output_fault_values.end())
      grp.fault_values = normalize_bits(name, f->second, grp.bits.size());
    target.defined_outputs.push_back(std::move(grp));
  }
  for (const auto& [name, bits] : alert_bits) {
    NamedGroup grp;
    grp.name = name;
    grp.bits = remap_bits(bits);
    grp.values =
        normalize_bits(name, spec.alert_values.at(name), grp.bits.size());
    target.alert_outputs.push_back(std::move(grp));
  }

  // Undefined inputs: every free source that is not a defined input.
  std::set<NodeId> bound;
  for (const auto& grp : target.defined_inputs)
    bound.insert(grp.bits.begin(), grp.bits.end());
  for (NodeId id = 0; id < t.node_count(); ++id) {
    const Node& n = t.node(id);
    if ((n.kind == NodeKind::AuxInput || n.kind == NodeKind::PortIn) &&
        !bound.count(id))
      target.undefined_inputs.push_back(id);
  }

  // Gate-equivalent size of the kept region.
  bool all_areas = true;
  double area_sum = 0.0;
  for (NodeId id = 0; id < t.node_count(); ++id) {
    const Node& n = t.node(id);
    if (n.kind != NodeKind::Cell) continue;
    ++target.kept_cells;
    if (n.cell->area)
      area_sum += *n.cell->area;
    else
      all_areas = false;
  }
  if (all_areas && target.kept_cells > 0 && lib.nand2_area)
    target.gate_equivalents = area_sum / *lib.nand2_area;
  else
    target.gate_equivalents = static_cast<double>(target.kept_cells);

  return target;
}

}  // namespace nfi
