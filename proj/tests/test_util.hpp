// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "nfi/demos.hpp"
#include "nfi/liberty.hpp"
#include "nfi/netlist.hpp"

namespace nfi::test {

// Deterministic xorshift64* generator for property tests.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545f4914f6cdd1dull;
  }
  uint64_t below(uint64_t n) { return next() % n; }
  bool flip() { return next() & 1; }

 private:
  uint64_t state_;
};

inline const CellLibrary& demo_lib() {
  static CellLibrary lib = parse_liberty(demo_cell_library());
  return lib;
}

inline CircuitGraph load_demo_graph(const std::string& name) {
  auto modules = parse_netlist(demo_netlist(name));
  return build_graph(modules.front(), demo_lib());
}

// The worked extraction example: three input ports, one output port, a
// register on a loop (U3 <-> U1) and a pipeline register (U6).
inline const char* fig3_netlist() {
  return R"(
module fig3 (in1, in2, in3, clk, out1);
  input in1, in2, in3, clk;
  output out1;
  wire w_u2, w_u1, u3_q, w_u4, u6_q;
  AOI21_X1 U2 ( .A1(in1), .B1(in2), .B2(in3), .ZN(w_u2) );
  NAND2_X1 U1 ( .A(u3_q), .B(w_u2), .ZN(w_u1) );
  DFF_X1   U3 ( .D(w_u1), .CK(clk), .Q(u3_q) );
  INV_X1   U4 ( .A(u3_q), .ZN(w_u4) );
  DFF_X1   U6 ( .D(w_u4), .CK(clk), .Q(u6_q) );
  BUF_X1   U5 ( .A(u6_q), .Z(out1) );
endmodule
)";
}

inline CircuitGraph fig3_graph() {
  auto modules = parse_netlist(fig3_netlist());
  return build_graph(modules.front(), demo_lib());
}

}  // namespace nfi::test
