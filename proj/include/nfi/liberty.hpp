// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>

#include "nfi/cell_library.hpp"

namespace nfi {

struct LibertyOptions {
  // Cell names to force-classify as sequential when the library lacks
  // ff/latch groups; data/clock pins are then taken from these hints.
  std::set<std::string> sequential_overrides;
  std::string override_data_pin = "D";
  std::string override_clock_pin = "CK";
};

/// Parses the liberty subset: `library(...) { cell(NAME) { area: R;
/// pin(P) { direction: in|out; function: "EXPR"; clock: true; } ff(..) {..}
/// } }`. Groups and attributes outside the subset are skipped by balanced-
/// brace scanning. Cells with neither an output function nor an ff/latch
/// group (e.g. fillers) are omitted.
CellLibrary parse_liberty(const std::string& text,
                          const LibertyOptions& opts = {});

}  // namespace nfi
