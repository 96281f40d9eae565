// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <optional>
#include <string>
#include <vector>

#include "nfi/bits.hpp"
#include "nfi/cell_library.hpp"

namespace nfi {

/// Which output-layer predicate the differential graph gets.
enum class EvaluationMode {
  Unspecific,            // FE: reference matches expected, faulty differs
  UnspecificWithAlerts,  // FD: FE plus both alert sides quiet
  Specific,              // FS: faulty hits the given target value
  SpecificWithAlerts,    // FS with alert constraints on both sides
};

std::string mode_setting(EvaluationMode m);  // "FE" / "FD" / "FS"

/// One replacement option for a faulted gate.
struct FaultMapping {
  enum class Kind { Cell, Const0, Const1 };
  Kind kind = Kind::Const0;
  std::string cell;  // Kind::Cell: replacement cell type

  bool operator==(const FaultMapping&) const = default;
  std::string label() const;
};

struct Stage {
  std::string name;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string type_tag;  // opaque ("inout" in the wild); no semantics
};

/// A value literal from the spec file. Values written as per-bit maps or
/// sized literals ("4'b0010") must match the net width exactly; bare
/// integers are zero-extended to it.
struct SpecBits {
  BitVector bits;
  bool exact = true;
};

struct FaultSpecification {
  std::vector<Stage> stages;
  std::map<std::string, SpecBits> input_values;
  std::map<std::string, SpecBits> output_values;
  std::map<std::string, SpecBits> output_fault_values;
  std::map<std::string, SpecBits> alert_values;
  int simultaneous_faults = 1;
  // Empty = exhaustive over all mappable gates of the target.
  std::vector<std::string> fault_locations;
  // User mapping, key matched against cell types by longest prefix.
  std::map<std::string, std::vector<FaultMapping>> fault_mappings;

  /// Boundary names after stage stitching: consecutive stages connect
  /// through identically named output/input pairs, which then count as
  /// neither module inputs nor outputs. Ambiguous connections (one stage
  /// output feeding several later stages) are rejected.
  std::vector<std::string> effective_inputs() const;
  std::vector<std::string> effective_outputs() const;
  /// Names carried between consecutive stages; the named registers keep
  /// value flow (pass-through) instead of being split.
  std::set<std::string> carry_names() const;
};

struct NamedFaultModel {
  std::string name;
  FaultSpecification spec;
  EvaluationMode mode;
};

/// Parses the fault specification document: `{"fimodels": {NAME: {...}}}`.
/// Models come back in file order. The mode derives from field presence
/// (output_fault_values present -> Specific*, alert_values nonempty ->
/// *WithAlerts); an optional explicit "setting" must agree.
/// Bit values accept the per-bit map form ({"i": {"0": 1, ...}}), compact
/// literals ("4'b0010"), plain integers, and bare bit maps.
std::vector<NamedFaultModel> parse_fault_spec(const std::string& text);

/// Default transient + stuck-at mapping for every 1- and 2-input cell of a
/// standard family present in `lib`: the inverted-function counterpart cell
/// (when the library has one of equal arity), then const 0, const 1.
/// Keyed by concrete cell type.
std::map<std::string, std::vector<FaultMapping>> default_mappings(
    const CellLibrary& lib);

/// Mapping list for a concrete cell type: the longest-prefix user entry if
/// any, else the default entry. Empty when neither applies.
std::vector<FaultMapping> mappings_for_type(
    const std::string& cell_type,
    const std::map<std::string, std::vector<FaultMapping>>& user,
    const std::map<std::string, std::vector<FaultMapping>>& defaults);

/// Resolves a replacement cell name against the library: exact match, else
/// the unique family cell with input arity <= `max_arity` (preferring equal
/// arity, then lexicographically smallest). Throws Err::ArityMismatch when
/// every candidate is wider than the faulted cell.
const CellDefinition* resolve_replacement_cell(const CellLibrary& lib,
                                               const std::string& name,
                                               size_t max_arity);

}  // namespace nfi
