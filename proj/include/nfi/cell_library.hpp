// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nfi/bool_expr.hpp"

namespace nfi {

/// One standard cell: pin lists plus a boolean function per output pin.
/// Sequential cells carry data/clock pin identities instead of functions;
/// downstream they only ever need D-type pass-through semantics.
struct CellDefinition {
  std::string name;
  std::vector<std::string> input_pins;
  std::vector<std::string> output_pins;
  std::map<std::string, BoolExpr> functions;  // output pin -> expr
  bool is_sequential = false;
  std::optional<std::string> clock_pin;
  std::optional<std::string> data_pin;
  // Sequential only: true when the output pin drives the negated state (QN).
  std::map<std::string, bool> output_inverted;
  std::optional<double> area;

  bool has_input(const std::string& pin) const;
  bool has_output(const std::string& pin) const;
};

struct CellLibrary {
  std::map<std::string, CellDefinition> cells;
  // Smallest 2-input NAND area; present iff any cell carries area data.
  std::optional<double> nand2_area;

  const CellDefinition* find(const std::string& name) const {
    auto it = cells.find(name);
    return it == cells.end() ? nullptr : &it->second;
  }
  const CellDefinition& at(const std::string& name) const;

  void add(CellDefinition cell);  // throws Err::DuplicateCell
  void finalize();                // computes nand2_area
};

/// Evaluates one output of a combinational cell under a complete input
/// assignment. Throws Err::NoFunctionForPin / Err::MissingPin.
bool evaluate_cell(const CellDefinition& cell, const std::string& output_pin,
                   const std::map<std::string, bool>& assignment);

/// JSON cell-library frontend: {"CELL": {"input_pins": [...], "output_pins":
/// ..., "boolean_function": "ZN = ..."}}. Accepts a single pin name or an
/// array for output_pins, and either "PIN = EXPR" strings or a map of
/// pin -> expr for multi-output cells. Optional keys: "area",
/// "is_sequential", "data_pin", "clock_pin".
CellLibrary parse_cell_library_json(const std::string& text);

/// Parses one CellDefinition-shaped JSON object (used for user-provided
/// submodule functions).
CellDefinition parse_cell_json(const std::string& name,
                               const std::string& object_text);

/// Gate family detection by name prefix: INV, BUF, AND, NAND, OR, NOR, XOR,
/// XNOR. Longest prefix wins; empty when the name matches none.
std::string cell_family(const std::string& cell_name);

/// Family with the pointwise-inverted function (INV<->BUF, AND<->NAND,
/// OR<->NOR, XOR<->XNOR).
std::string inverted_family(const std::string& family);

}  // namespace nfi
