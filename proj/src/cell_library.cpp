// SPDX-License-Identifier: Apache-2.0
#include "nfi/cell_library.hpp"

#include <algorithm>
#include <array>

#include "json.hpp"
#include "nfi/errors.hpp"

namespace nfi {

bool CellDefinition::has_input(const std::string& pin) const {
  return std::find(input_pins.begin(), input_pins.end(), pin) !=
         input_pins.end();
}

bool CellDefinition::has_output(const std::string& pin) const {
  return std::find(output_pins.begin(), output_pins.end(), pin) !=
         output_pins.end();
}

const CellDefinition& CellLibrary::at(const std::string& name) const {
  auto it = cells.find(name);
  if (it == cells.end())
    throw Error(Err::UnresolvedCell, "no cell '" + name + "' in library");
  return it->second;
}

void CellLibrary::add(CellDefinition cell) {
  if (cells.count(cell.name))
    throw Error(Err::DuplicateCell, "duplicate cell '" + cell.name + "'");
  cells.emplace(cell.name, std::move(cell));
}

void CellLibrary::finalize() {
  nand2_area.reset();
  for (const auto& [name, cell] : cells) {
    if (!cell.area) continue;
    if (cell_family(name) == "NAND" && cell.input_pins.size() == 2) {
      if (!nand2_area || *cell.area < *nand2_area) nand2_area = *cell.area;
    }
  }
  if (!nand2_area) {
    // No NAND2 with area: any area data still enables GE via the smallest
    // 2-input cell as a stand-in.
    for (const auto& [name, cell] : cells) {
      if (cell.area && cell.input_pins.size() == 2) {
        if (!nand2_area || *cell.area < *nand2_area) nand2_area = *cell.area;
      }
    }
  }
}

bool evaluate_cell(const CellDefinition& cell, const std::string& output_pin,
                   const std::map<std::string, bool>& assignment) {
  auto it = cell.functions.find(output_pin);
  if (it == cell.functions.end())
    throw Error(Err::NoFunctionForPin,
                "cell '" + cell.name + "' has no function for pin '" +
                    output_pin + "'");
  for (const auto& pin : cell.input_pins) {
    if (!assignment.count(pin))
      throw Error(Err::MissingPin, "cell '" + cell.name +
                                       "': assignment misses pin '" + pin +
                                       "'");
  }
  return it->second.evaluate(assignment);
}

std::string cell_family(const std::string& cell_name) {
  static const std::array<const char*, 9> families = {
      "XNOR", "NAND", "XOR", "NOR", "AND", "OR", "INV", "BUF", "NOT"};
  for (const char* f : families) {
    if (cell_name.rfind(f, 0) == 0) return f == std::string("NOT") ? "INV" : f;
  }
  return "";
}

std::string inverted_family(const std::string& family) {
  if (family == "INV") return "BUF";
  if (family == "BUF") return "INV";
  if (family == "AND") return "NAND";
  if (family == "NAND") return "AND";
  if (family == "OR") return "NOR";
  if (family == "NOR") return "OR";
  if (family == "XOR") return "XNOR";
  if (family == "XNOR") return "XOR";
  return "";
}

namespace {

CellDefinition cell_from_json(const std::string& name,
                              const nlohmann::json& obj) {
  CellDefinition cell;
  cell.name = name;
  if (obj.contains("input_pins")) {
    for (const auto& p : obj.at("input_pins"))
      cell.input_pins.push_back(p.get<std::string>());
  }
  if (obj.contains("output_pins")) {
    const auto& op = obj.at("output_pins");
    if (op.is_string())
      cell.output_pins.push_back(op.get<std::string>());
    else
      for (const auto& p : op) cell.output_pins.push_back(p.get<std::string>());
  }
  if (obj.contains("area")) cell.area = obj.at("area").get<double>();
  if (obj.contains("is_sequential"))
    cell.is_sequential = obj.at("is_sequential").get<bool>();
  if (obj.contains("data_pin"))
    cell.data_pin = obj.at("data_pin").get<std::string>();
  if (obj.contains("clock_pin"))
    cell.clock_pin = obj.at("clock_pin").get<std::string>();

  std::set<std::string> pins(cell.input_pins.begin(), cell.input_pins.end());
  auto assign_function = [&](const std::string& pin, const std::string& expr) {
    if (!cell.has_output(pin)) {
      cell.output_pins.push_back(pin);
    }
    cell.functions[pin] = parse_bool_expr(expr, pins);
  };
  if (obj.contains("boolean_function")) {
    const auto& bf = obj.at("boolean_function");
    if (bf.is_string()) {
      std::string s = bf.get<std::string>();
      auto eq = s.find('=');
      if (eq != std::string::npos) {
        std::string pin = s.substr(0, eq);
        pin.erase(0, pin.find_first_not_of(" \t"));
        pin.erase(pin.find_last_not_of(" \t") + 1);
        assign_function(pin, s.substr(eq + 1));
      } else if (cell.output_pins.size() == 1) {
        assign_function(cell.output_pins[0], s);
      } else {
        throw Error(Err::SchemaError,
                    "cell '" + name +
                        "': boolean_function needs a 'PIN = EXPR' form or a "
                        "single output pin");
      }
    } else if (bf.is_object()) {
      for (auto it = bf.begin(); it != bf.end(); ++it)
        assign_function(it.key(), it.value().get<std::string>());
    }
  }
  if (cell.is_sequential) {
    if (obj.contains("output_inverted")) {
      for (auto it = obj.at("output_inverted").begin();
           it != obj.at("output_inverted").end(); ++it)
        cell.output_inverted[it.key()] = it.value().get<bool>();
    } else {
      for (const auto& p : cell.output_pins) cell.output_inverted[p] = false;
    }
  }
  return cell;
}

}  // namespace

CellLibrary parse_cell_library_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(Err::SchemaError, std::string("bad cell library JSON: ") +
                                      e.what());
  }
  const nlohmann::json* root = &doc;
  if (doc.contains("Cell Library")) root = &doc.at("Cell Library");
  CellLibrary lib;
  for (auto it = root->begin(); it != root->end(); ++it)
    lib.add(cell_from_json(it.key(), it.value()));
  lib.finalize();
  return lib;
}

CellDefinition parse_cell_json(const std::string& name,
                               const std::string& object_text) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(object_text);
  } catch (const std::exception& e) {
    throw Error(Err::SchemaError,
                std::string("bad cell JSON for '") + name + "': " + e.what());
  }
  return cell_from_json(name, obj);
}

}  // namespace nfi
