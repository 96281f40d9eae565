// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "nfi/cell_library.hpp"
#include "nfi/errors.hpp"
#include "nfi/liberty.hpp"
#include "test_util.hpp"

using namespace nfi;

namespace {

const char* kAoiLib = R"(
library (mini) {
  delay_model : table_lookup;
  cell (AOI21_X2) {
    area : 2.1;
    pin (A1) { direction : input; capacitance : 0.001; }
    pin (B1) { direction : input; }
    pin (B2) { direction : input; }
    pin (ZN) {
      direction : output;
      function : "!(A1 & (B1 | B2))";
      timing () { related_pin : "A1"; cell_rise (tmpl) { values ("0.1"); } }
    }
  }
}
)";

}  // namespace

TEST_CASE("liberty: extracts name, pins and function of a compound gate") {
  CellLibrary lib = parse_liberty(kAoiLib);
  const CellDefinition& cell = lib.at("AOI21_X2");
  CHECK(cell.input_pins == std::vector<std::string>{"A1", "B1", "B2"});
  CHECK(cell.output_pins == std::vector<std::string>{"ZN"});
  CHECK(cell.area == doctest::Approx(2.1));
  CHECK_FALSE(cell.is_sequential);
  std::set<std::string> pins{"A1", "B1", "B2"};
  CHECK(cell.functions.at("ZN") == parse_bool_expr("!(A1 & (B1 | B2))", pins));
}

TEST_CASE("liberty: filler cells without logic are omitted") {
  CellLibrary lib = parse_liberty(R"(
library (l) {
  cell (FILL1) { area : 0.25; }
  cell (DECAP) { area : 0.5; cell_footprint : decap; }
  cell (INV) {
    pin (A) { direction : input; }
    pin (Z) { direction : output; function : "!A"; }
  }
}
)");
  CHECK(lib.cells.size() == 1);
  CHECK(lib.find("FILL1") == nullptr);
  CHECK(lib.find("DECAP") == nullptr);
  CHECK(lib.find("INV") != nullptr);
}

TEST_CASE("liberty: ff group marks the cell sequential with data/clock pins") {
  CellLibrary lib = parse_liberty(R"(
library (l) {
  cell (DFFQN) {
    area : 5;
    ff (IQ, IQN) { next_state : "D"; clocked_on : "CK"; }
    pin (D)  { direction : input; }
    pin (CK) { direction : input; clock : true; }
    pin (Q)  { direction : output; function : "IQ"; }
    pin (QN) { direction : output; function : "IQN"; }
  }
}
)");
  const CellDefinition& ff = lib.at("DFFQN");
  CHECK(ff.is_sequential);
  CHECK(ff.data_pin == "D");
  CHECK(ff.clock_pin == "CK");
  CHECK_FALSE(ff.output_inverted.at("Q"));
  CHECK(ff.output_inverted.at("QN"));
}

TEST_CASE("liberty: duplicate cells and unbalanced braces are errors") {
  CHECK_THROWS_AS(parse_liberty(R"(
library (l) {
  cell (X) { pin (A) { direction : input; }
             pin (Z) { direction : output; function : "A"; } }
  cell (X) { pin (A) { direction : input; }
             pin (Z) { direction : output; function : "A"; } }
}
)"),
                  Error);
  try {
    parse_liberty("library (l) { cell (X) { ");
    FAIL("expected malformed-liberty");
  } catch (const Error& e) {
    CHECK(e.kind() == Err::MalformedLiberty);
  }
  try {
    parse_liberty(R"(
library (l) {
  cell (X) {
    pin (A) { direction : input; }
    pin (Z) { direction : output; function : "A &&& "; }
  }
}
)");
    FAIL("expected malformed-liberty for a bad function");
  } catch (const Error& e) {
    CHECK(e.kind() == Err::MalformedLiberty);
  }
}

TEST_CASE("liberty: sequential override for libraries without ff groups") {
  LibertyOptions opts;
  opts.sequential_overrides = {"MYREG"};
  opts.override_data_pin = "DIN";
  CellLibrary lib = parse_liberty(R"(
library (l) {
  cell (MYREG) {
    pin (DIN) { direction : input; }
    pin (CLK) { direction : input; clock : true; }
    pin (Q)   { direction : output; }
  }
}
)",
                                  opts);
  const CellDefinition& reg = lib.at("MYREG");
  CHECK(reg.is_sequential);
  CHECK(reg.data_pin == "DIN");
  CHECK(reg.clock_pin == "CLK");
}

TEST_CASE("evaluate_cell on the compound gate") {
  CellLibrary lib = parse_liberty(kAoiLib);
  const CellDefinition& cell = lib.at("AOI21_X2");
  CHECK(evaluate_cell(cell, "ZN", {{"A1", 1}, {"B1", 0}, {"B2", 1}}) == false);
  CHECK(evaluate_cell(cell, "ZN", {{"A1", 0}, {"B1", 1}, {"B2", 1}}) == true);
  CHECK_THROWS_AS(evaluate_cell(cell, "ZN", {{"A1", 1}}), Error);
  CHECK_THROWS_AS(evaluate_cell(cell, "Y", {{"A1", 1}, {"B1", 0}, {"B2", 1}}),
                  Error);
}

TEST_CASE("property: every demo cell matches exhaustive tree evaluation") {
  const CellLibrary& lib = test::demo_lib();
  CHECK(lib.nand2_area == doctest::Approx(1.0));
  for (const auto& [name, cell] : lib.cells) {
    if (cell.is_sequential) continue;
    size_t n = cell.input_pins.size();
    REQUIRE(n <= 6);
    for (uint64_t bits = 0; bits < (uint64_t(1) << n); ++bits) {
      std::map<std::string, bool> assign;
      for (size_t i = 0; i < n; ++i)
        assign[cell.input_pins[i]] = (bits >> i) & 1;
      for (const auto& pin : cell.output_pins) {
        bool expected = cell.functions.at(pin).evaluate(assign);
        CHECK(evaluate_cell(cell, pin, assign) == expected);
      }
    }
  }
}

TEST_CASE("json cell library mirrors the liberty frontend") {
  CellLibrary lib = parse_cell_library_json(R"({
    "AOI21_X2": {
      "input_pins": ["A1", "B1", "B2"],
      "output_pins": "ZN",
      "boolean_function": "ZN = !(A1 & (B1 | B2))"
    }
  })");
  const CellDefinition& cell = lib.at("AOI21_X2");
  CHECK(cell.input_pins.size() == 3);
  CHECK(evaluate_cell(cell, "ZN", {{"A1", 1}, {"B1", 1}, {"B2", 0}}) == false);
}
