// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace nfi {

/// Error categories raised across the pipeline. Each carries a
/// human-readable message with the offending name/line/path baked in.
enum class Err {
  MalformedLiberty,
  DuplicateCell,
  UndeclaredPin,
  SyntaxError,
  UnknownConstruct,
  UnresolvedCell,
  MultipleDrivers,
  UnknownNode,
  EmptyTarget,
  CombinationalCycle,
  UnknownSequentialSemantics,
  SchemaError,
  WidthMismatch,
  NoMappableLocations,
  ArityMismatch,
  CyclicGraph,
  ResourceLimit,
  TooManyInputs,
  MissingPin,
  NoFunctionForPin,
  SolverFailure,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(Err kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  Err kind() const { return kind_; }

 private:
  Err kind_;
};

}  // namespace nfi
