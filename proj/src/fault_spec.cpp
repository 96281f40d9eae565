// SPDX-License-Identifier: Apache-2.0
#include "nfi/fault_spec.hpp"

#include <algorithm>

#include "json.hpp"
#include "nfi/errors.hpp"

namespace nfi {

using ojson = nlohmann::ordered_json;

std::string mode_setting(EvaluationMode m) {
  switch (m) {
    case EvaluationMode::Unspecific:
      return "FE";
    case EvaluationMode::UnspecificWithAlerts:
      return "FD";
    case EvaluationMode::Specific:
    case EvaluationMode::SpecificWithAlerts:
      return "FS";
  }
  return "?";
}

std::string FaultMapping::label() const {
  switch (kind) {
    case Kind::Cell:
      return cell;
    case Kind::Const0:
      return "const0";
    case Kind::Const1:
      return "const1";
  }
  return "?";
}

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& msg) {
  throw Error(Err::SchemaError, path + ": " + msg);
}

SpecBits parse_value(const ojson& v, const std::string& path) {
  SpecBits out;
  if (v.is_boolean()) {
    out.bits = BitVector(1, v.get<bool>() ? 1 : 0);
    return out;
  }
  if (v.is_number_unsigned() || v.is_number_integer()) {
    long long n = v.get<long long>();
    if (n < 0) schema_fail(path, "negative value");
    out.bits = parse_bit_literal(std::to_string(n));
    out.exact = false;
    return out;
  }
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    try {
      out.bits = parse_bit_literal(s);
    } catch (const Error& e) {
      schema_fail(path, e.what());
    }
    out.exact = s.find('\'') != std::string::npos;
    return out;
  }
  if (v.is_object()) {
    // Either the wrapped form {"i": {...}} / {"o": {...}} or a bare
    // bit-index map {"0": 1, "1": 0}.
    const ojson* bits = &v;
    if (v.size() == 1 && (v.contains("i") || v.contains("o")))
      bits = &v.begin().value();
    if (!bits->is_object()) schema_fail(path, "expected a bit map");
    size_t width = 0;
    std::map<size_t, bool> entries;
    for (auto it = bits->begin(); it != bits->end(); ++it) {
      size_t idx = 0;
      try {
        idx = std::stoul(it.key());
      } catch (...) {
        schema_fail(path, "bad bit index '" + it.key() + "'");
      }
      bool bit;
      if (it.value().is_boolean())
        bit = it.value().get<bool>();
      else if (it.value().is_number_integer() ||
               it.value().is_number_unsigned())
        bit = it.value().get<int>() != 0;
      else
        schema_fail(path + "." + it.key(), "bit must be 0 or 1");
      entries[idx] = bit;
      width = std::max(width, idx + 1);
    }
    if (width == 0) schema_fail(path, "empty bit map");
    out.bits = BitVector(width);
    for (const auto& [idx, bit] : entries) out.bits.bits[idx] = bit;
    return out;
  }
  schema_fail(path, "unsupported value type");
}

std::map<std::string, SpecBits> parse_value_map(const ojson& obj,
                                                const std::string& path) {
  std::map<std::string, SpecBits> out;
  if (!obj.is_object()) schema_fail(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    out[it.key()] = parse_value(it.value(), path + "." + it.key());
  return out;
}

FaultMapping parse_mapping_entry(const ojson& v, const std::string& path) {
  FaultMapping m;
  if (v.is_number_integer() || v.is_number_unsigned()) {
    int n = v.get<int>();
    if (n != 0 && n != 1) schema_fail(path, "constant replacement must be 0/1");
    m.kind = n ? FaultMapping::Kind::Const1 : FaultMapping::Kind::Const0;
    return m;
  }
  if (!v.is_string()) schema_fail(path, "replacement must be a string or 0/1");
  std::string s = v.get<std::string>();
  if (s == "0") {
    m.kind = FaultMapping::Kind::Const0;
  } else if (s == "1") {
    m.kind = FaultMapping::Kind::Const1;
  } else {
    m.kind = FaultMapping::Kind::Cell;
    m.cell = s;
  }
  return m;
}

NamedFaultModel parse_model(const std::string& name, const ojson& obj,
                            const std::string& path) {
  NamedFaultModel model;
  model.name = name;
  FaultSpecification& spec = model.spec;

  if (obj.contains("simultaneous_faults")) {
    if (!obj.at("simultaneous_faults").is_number_integer() &&
        !obj.at("simultaneous_faults").is_number_unsigned())
      schema_fail(path + ".simultaneous_faults", "expected an integer");
    spec.simultaneous_faults = obj.at("simultaneous_faults").get<int>();
  }
  if (spec.simultaneous_faults < 1)
    schema_fail(path + ".simultaneous_faults", "must be >= 1");

  if (!obj.contains("stages") || !obj.at("stages").is_object() ||
      obj.at("stages").empty())
    schema_fail(path + ".stages", "at least one stage is required");
  for (auto it = obj.at("stages").begin(); it != obj.at("stages").end(); ++it) {
    Stage st;
    st.name = it.key();
    const auto& body = it.value();
    std::string spath = path + ".stages." + st.name;
    if (body.contains("inputs"))
      for (const auto& n : body.at("inputs"))
        st.inputs.push_back(n.get<std::string>());
    if (body.contains("outputs"))
      for (const auto& n : body.at("outputs"))
        st.outputs.push_back(n.get<std::string>());
    if (body.contains("type")) st.type_tag = body.at("type").get<std::string>();
    if (st.inputs.empty() && st.outputs.empty())
      schema_fail(spath, "stage declares neither inputs nor outputs");
    spec.stages.push_back(std::move(st));
  }

  if (obj.contains("input_values"))
    spec.input_values =
        parse_value_map(obj.at("input_values"), path + ".input_values");
  if (obj.contains("output_values"))
    spec.output_values =
        parse_value_map(obj.at("output_values"), path + ".output_values");
  if (obj.contains("output_fault_values"))
    spec.output_fault_values = parse_value_map(obj.at("output_fault_values"),
                                               path + ".output_fault_values");
  if (obj.contains("alert_values"))
    spec.alert_values =
        parse_value_map(obj.at("alert_values"), path + ".alert_values");

  if (obj.contains("node_fault_mapping")) {
    const auto& nm = obj.at("node_fault_mapping");
    if (!nm.is_object())
      schema_fail(path + ".node_fault_mapping", "expected an object");
    for (auto it = nm.begin(); it != nm.end(); ++it) {
      std::vector<FaultMapping> list;
      std::string mpath = path + ".node_fault_mapping." + it.key();
      if (!it.value().is_array()) schema_fail(mpath, "expected an array");
      for (size_t i = 0; i < it.value().size(); ++i)
        list.push_back(parse_mapping_entry(it.value()[i],
                                           mpath + "[" + std::to_string(i) +
                                               "]"));
      spec.fault_mappings[it.key()] = std::move(list);
    }
  }

  if (obj.contains("fault_locations")) {
    const auto& fl = obj.at("fault_locations");
    if (fl.is_array()) {
      for (const auto& loc : fl)
        spec.fault_locations.push_back(loc.get<std::string>());
    } else if (fl.is_object()) {
      // Listing form: location -> [stage names]; the stage tags carry no
      // semantics here.
      for (auto it = fl.begin(); it != fl.end(); ++it)
        spec.fault_locations.push_back(it.key());
    } else {
      schema_fail(path + ".fault_locations", "expected an array or object");
    }
  }

  if (spec.output_values.empty())
    schema_fail(path + ".output_values", "at least one output value required");

  bool specific = !spec.output_fault_values.empty();
  bool with_alerts = !spec.alert_values.empty();
  model.mode = specific ? (with_alerts ? EvaluationMode::SpecificWithAlerts
                                       : EvaluationMode::Specific)
                        : (with_alerts ? EvaluationMode::UnspecificWithAlerts
                                       : EvaluationMode::Unspecific);

  if (obj.contains("setting")) {
    std::string s = obj.at("setting").get<std::string>();
    if (s != mode_setting(model.mode))
      schema_fail(path + ".setting",
                  "explicit setting '" + s + "' disagrees with field-derived " +
                      mode_setting(model.mode));
  }
  return model;
}

}  // namespace

std::vector<NamedFaultModel> parse_fault_spec(const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const std::exception& e) {
    throw Error(Err::SchemaError, std::string("bad fault spec JSON: ") +
                                      e.what());
  }
  if (!doc.contains("fimodels") || !doc.at("fimodels").is_object())
    schema_fail("fimodels", "missing or not an object");
  std::vector<NamedFaultModel> models;
  for (auto it = doc.at("fimodels").begin(); it != doc.at("fimodels").end();
       ++it)
    models.push_back(parse_model(it.key(), it.value(), "fimodels." + it.key()));
  if (models.empty()) schema_fail("fimodels", "no models defined");
  return models;
}

// -- stage stitching --------------------------------------------------

std::set<std::string> FaultSpecification::carry_names() const {
  std::set<std::string> carried;
  for (size_t i = 0; i + 1 < stages.size(); ++i) {
    for (const auto& out : stages[i].outputs) {
      bool adjacent = std::find(stages[i + 1].inputs.begin(),
                                stages[i + 1].inputs.end(),
                                out) != stages[i + 1].inputs.end();
      for (size_t j = i + 2; j < stages.size(); ++j) {
        if (std::find(stages[j].inputs.begin(), stages[j].inputs.end(), out) !=
            stages[j].inputs.end())
          throw Error(Err::SchemaError,
                      "stage connection for '" + out +
                          "' is ambiguous (matches inputs of a non-adjacent "
                          "stage)");
      }
      if (adjacent) carried.insert(out);
    }
  }
  return carried;
}

std::vector<std::string> FaultSpecification::effective_inputs() const {
  std::set<std::string> carried = carry_names();
  std::vector<std::string> result;
  std::set<std::string> seen;
  for (const auto& st : stages) {
    for (const auto& in : st.inputs) {
      if (carried.count(in)) continue;
      if (seen.insert(in).second) result.push_back(in);
    }
  }
  return result;
}

std::vector<std::string> FaultSpecification::effective_outputs() const {
  std::set<std::string> carried = carry_names();
  std::vector<std::string> result;
  std::set<std::string> seen;
  for (const auto& st : stages) {
    for (const auto& out : st.outputs) {
      if (carried.count(out)) continue;
      if (seen.insert(out).second) result.push_back(out);
    }
  }
  return result;
}

// -- mappings ----------------------------------------------------------

std::map<std::string, std::vector<FaultMapping>> default_mappings(
    const CellLibrary& lib) {
  std::map<std::string, std::vector<FaultMapping>> out;
  for (const auto& [name, cell] : lib.cells) {
    if (cell.is_sequential) continue;
    std::string family = cell_family(name);
    if (family.empty()) continue;
    size_t arity = cell.input_pins.size();
    if (arity < 1 || arity > 2) continue;

    std::vector<FaultMapping> list;
    std::string counter_family = inverted_family(family);
    const CellDefinition* counterpart = nullptr;
    for (const auto& [cname, ccell] : lib.cells) {
      if (ccell.is_sequential) continue;
      if (cell_family(cname) != counter_family) continue;
      if (ccell.input_pins.size() != arity) continue;
      if (!counterpart || cname < counterpart->name) counterpart = &ccell;
    }
    if (counterpart) {
      FaultMapping m;
      m.kind = FaultMapping::Kind::Cell;
      m.cell = counterpart->name;
      list.push_back(std::move(m));
    }
    list.push_back({FaultMapping::Kind::Const0, ""});
    list.push_back({FaultMapping::Kind::Const1, ""});
    out[name] = std::move(list);
  }
  return out;
}

std::vector<FaultMapping> mappings_for_type(
    const std::string& cell_type,
    const std::map<std::string, std::vector<FaultMapping>>& user,
    const std::map<std::string, std::vector<FaultMapping>>& defaults) {
  const std::vector<FaultMapping>* best = nullptr;
  size_t best_len = 0;
  for (const auto& [key, list] : user) {
    if (cell_type.rfind(key, 0) != 0) continue;
    if (key.size() >= best_len) {
      best = &list;
      best_len = key.size();
    }
  }
  if (best) return *best;
  auto it = defaults.find(cell_type);
  if (it != defaults.end()) return it->second;
  return {};
}

const CellDefinition* resolve_replacement_cell(const CellLibrary& lib,
                                               const std::string& name,
                                               size_t max_arity) {
  if (const CellDefinition* exact = lib.find(name)) {
    if (exact->input_pins.size() > max_arity)
      throw Error(Err::ArityMismatch,
                  "replacement '" + name + "' has " +
                      std::to_string(exact->input_pins.size()) +
                      " inputs, faulted cell has " + std::to_string(max_arity));
    return exact;
  }
  const CellDefinition* best = nullptr;
  bool any_prefix = false;
  for (const auto& [cname, cell] : lib.cells) {
    if (cell.is_sequential || cname.rfind(name, 0) != 0) continue;
    any_prefix = true;
    size_t arity = cell.input_pins.size();
    if (arity > max_arity) continue;
    if (!best) {
      best = &cell;
      continue;
    }
    size_t best_arity = best->input_pins.size();
    // Prefer matching the original arity, then wider, then smaller names.
    if (arity > best_arity || (arity == best_arity && cname < best->name))
      best = &cell;
  }
  if (!best) {
    if (any_prefix)
      throw Error(Err::ArityMismatch,
                  "every '" + name + "' cell is wider than the faulted cell (" +
                      std::to_string(max_arity) + " inputs)");
    throw Error(Err::UnresolvedCell,
                "replacement cell '" + name + "' not found in the library");
  }
  return best;
}

}  // namespace nfi
