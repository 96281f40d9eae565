// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace nfi {

/// Writes the bundled demo corpus into `out_dir`: a small open cell library
/// plus netlist/fault-spec pairs (hamming-distance-3 encoded signal driver,
/// triple-redundant up/down counter with sum-check alert, sparsely encoded
/// FSM next-state logic, a two-gate sanity circuit, and a ~500-gate adder
/// chain for throughput runs). Returns the created file paths.
std::vector<std::string> generate_demos(const std::string& out_dir);

// In-memory accessors for the same content (used by the test suites).
std::string demo_cell_library();
std::string demo_netlist(const std::string& name);
std::string demo_fault_spec(const std::string& name);

}  // namespace nfi
