// SPDX-License-Identifier: Apache-2.0
#include "nfi/demos.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nfi/errors.hpp"

namespace nfi {
namespace {

std::string cells_lib() {
  return R"(/* Small open cell library for the bundled demo circuits. */
library (demo_cells) {
  cell (INV_X1) {
    area : 0.75;
    pin (A)  { direction : input; }
    pin (ZN) { direction : output; function : "!A"; }
  }
  cell (BUF_X1) {
    area : 1.00;
    pin (A) { direction : input; }
    pin (Z) { direction : output; function : "A"; }
  }
  cell (NAND2_X1) {
    area : 1.00;
    pin (A)  { direction : input; }
    pin (B)  { direction : input; }
    pin (ZN) { direction : output; function : "!(A & B)"; }
  }
  cell (NOR2_X1) {
    area : 1.00;
    pin (A)  { direction : input; }
    pin (B)  { direction : input; }
    pin (ZN) { direction : output; function : "!(A | B)"; }
  }
  cell (AND2_X1) {
    area : 1.25;
    pin (A) { direction : input; }
    pin (B) { direction : input; }
    pin (Z) { direction : output; function : "A & B"; }
  }
  cell (OR2_X1) {
    area : 1.25;
    pin (A) { direction : input; }
    pin (B) { direction : input; }
    pin (Z) { direction : output; function : "A | B"; }
  }
  cell (XOR2_X1) {
    area : 2.00;
    pin (A) { direction : input; }
    pin (B) { direction : input; }
    pin (Z) { direction : output; function : "A ^ B"; }
  }
  cell (XNOR2_X1) {
    area : 2.00;
    pin (A)  { direction : input; }
    pin (B)  { direction : input; }
    pin (ZN) { direction : output; function : "!(A ^ B)"; }
  }
  cell (AOI21_X1) {
    area : 1.75;
    pin (A1) { direction : input; }
    pin (B1) { direction : input; }
    pin (B2) { direction : input; }
    pin (ZN) { direction : output; function : "!(A1 & (B1 | B2))"; }
  }
  cell (DFF_X1) {
    area : 4.50;
    ff (IQ, IQN) {
      next_state : "D";
      clocked_on : "CK";
    }
    pin (D)  { direction : input; }
    pin (CK) { direction : input; clock : true; }
    pin (Q)  { direction : output; function : "IQ"; }
    pin (QN) { direction : output; function : "IQN"; }
  }
  cell (FILL_X1) {
    area : 0.50;
  }
}
)";
}

// -- sp2v: 3-bit hamming-distance-3 encoded signal, one buffer path per bit.
std::string sp2v_netlist() {
  std::ostringstream os;
  os << "// Encoded signal driver: HIGH = 3'b011, LOW = 3'b100.\n";
  os << "module sp2v (sig_i, sig_o);\n";
  os << "  input [2:0] sig_i;\n  output [2:0] sig_o;\n";
  for (int j = 0; j < 3; ++j) os << "  wire n" << j << ";\n";
  for (int j = 0; j < 3; ++j) {
    os << "  INV_X1 inv_a" << j << " ( .A(sig_i[" << j << "]), .ZN(n" << j
       << ") );\n";
    os << "  INV_X1 inv_b" << j << " ( .A(n" << j << "), .ZN(sig_o[" << j
       << "]) );\n";
  }
  os << "endmodule\n";
  return os.str();
}

std::string sp2v_spec() {
  return R"({
  "fimodels": {
    "sp2v_low_to_high": {
      "simultaneous_faults": 1,
      "stages": {
        "stage_sig": {
          "inputs": ["sig_i"],
          "outputs": ["sig_o"],
          "type": "inout"
        }
      },
      "input_values": { "sig_i": "3'b100" },
      "output_values": { "sig_o": "3'b100" },
      "output_fault_values": { "sig_o": "3'b011" },
      "alert_values": {},
      "node_fault_mapping": {},
      "fault_locations": []
    }
  }
}
)";
}

// -- tmr_counter: three copies of a 2-bit up/down counter pair, OR-combined,
// with a sum check (u' + d' == 3) driving the alert.
std::string tmr_counter_netlist() {
  std::ostringstream os;
  os << "// Triple-redundant up/down counter with sum-check error logic.\n";
  os << "module tmr_counter (u_q_i, d_q_i, u_d_o, d_d_o, err_o);\n";
  os << "  input [1:0] u_q_i;\n  input [1:0] d_q_i;\n";
  os << "  output [1:0] u_d_o;\n  output [1:0] d_d_o;\n  output err_o;\n";
  for (int c = 0; c < 3; ++c)
    os << "  wire mru" << c << "_0, mru" << c << "_1, mrd" << c << "_0, mrd"
       << c << "_1;\n";
  os << "  wire tu0, tu1, td0, td1;\n";
  os << "  wire s0, s1, c0, t1, sum_ok;\n";
  for (int c = 0; c < 3; ++c) {
    // up: u0' = !u0, u1' = u1 ^ u0; down: d0' = !d0, d1' = !(d1 ^ d0)
    os << "  INV_X1  inc" << c << "_b0 ( .A(u_q_i[0]), .ZN(mru" << c
       << "_0) );\n";
    os << "  XOR2_X1 inc" << c << "_b1 ( .A(u_q_i[1]), .B(u_q_i[0]), .Z(mru"
       << c << "_1) );\n";
    os << "  INV_X1  dec" << c << "_b0 ( .A(d_q_i[0]), .ZN(mrd" << c
       << "_0) );\n";
    os << "  XNOR2_X1 dec" << c << "_b1 ( .A(d_q_i[1]), .B(d_q_i[0]), .ZN(mrd"
       << c << "_1) );\n";
  }
  auto combine = [&](const std::string& tag, const std::string& tmp,
                     const std::string& out) {
    os << "  OR2_X1 comb_" << tag << "_a ( .A(mr" << tag.substr(0, 1) << "0_"
       << tag.substr(1) << "), .B(mr" << tag.substr(0, 1) << "1_"
       << tag.substr(1) << "), .Z(" << tmp << ") );\n";
    os << "  OR2_X1 comb_" << tag << "_b ( .A(" << tmp << "), .B(mr"
       << tag.substr(0, 1) << "2_" << tag.substr(1) << "), .Z(" << out
       << ") );\n";
  };
  combine("u0", "tu0", "u_d_o[0]");
  combine("u1", "tu1", "u_d_o[1]");
  combine("d0", "td0", "d_d_o[0]");
  combine("d1", "td1", "d_d_o[1]");
  // sum = u' + d' (mod 4); alert when sum != 3.
  os << "  XOR2_X1 add_s0 ( .A(u_d_o[0]), .B(d_d_o[0]), .Z(s0) );\n";
  os << "  AND2_X1 add_c0 ( .A(u_d_o[0]), .B(d_d_o[0]), .Z(c0) );\n";
  os << "  XOR2_X1 add_t1 ( .A(u_d_o[1]), .B(d_d_o[1]), .Z(t1) );\n";
  os << "  XOR2_X1 add_s1 ( .A(t1), .B(c0), .Z(s1) );\n";
  os << "  NAND2_X1 err_cmp ( .A(s1), .B(s0), .ZN(err_o) );\n";
  os << "endmodule\n";
  return os.str();
}

std::string tmr_counter_spec() {
  return R"({
  "fimodels": {
    "tmr_counter_detect": {
      "simultaneous_faults": 1,
      "stages": {
        "stage_cntr": {
          "inputs": ["u_q_i", "d_q_i"],
          "outputs": ["u_d_o", "d_d_o"],
          "type": "inout"
        }
      },
      "input_values": {
        "u_q_i": { "i": { "0": 1, "1": 0 } },
        "d_q_i": { "i": { "0": 0, "1": 1 } }
      },
      "output_values": {
        "u_d_o": { "o": { "0": 0, "1": 1 } },
        "d_d_o": { "o": { "0": 1, "1": 0 } }
      },
      "alert_values": { "err_o": "1'b0" },
      "node_fault_mapping": {},
      "fault_locations": []
    }
  }
}
)";
}

// -- sparse_fsm: next-state logic over the 6-bit, distance-3 state encoding.
struct FsmState {
  const char* name;
  unsigned code;
  unsigned next;       // next-state code (unconditional part)
  bool conditional;    // ROUND advances only when adv_i is set
};

constexpr unsigned kIdle = 0b001001, kInit = 0b100011, kRound = 0b111101,
                   kFinish = 0b010000, kPrng = 0b100100, kClearS = 0b111010,
                   kClearKd = 0b001110, kError = 0b010111;

const FsmState kStates[] = {
    {"IDLE", kIdle, kInit, false},     {"INIT", kInit, kRound, false},
    {"ROUND", kRound, kFinish, true},  {"FINISH", kFinish, kIdle, false},
    {"PRNG", kPrng, kIdle, false},     {"CLEAR_S", kClearS, kIdle, false},
    {"CLEAR_KD", kClearKd, kIdle, false},
    {"ERROR", kError, kError, false},
};

std::string sparse_fsm_netlist() {
  std::ostringstream os;
  os << "// Sparsely encoded FSM next-state logic (distance-3 state codes,\n";
  os << "// invalid states fall into the terminal error state).\n";
  os << "module sparse_fsm (state_q_i, adv_i, state_d_o);\n";
  os << "  input [5:0] state_q_i;\n  input adv_i;\n";
  os << "  output [5:0] state_d_o;\n";

  std::ostringstream body;
  std::ostringstream wires;
  std::vector<std::string> wire_names;
  auto wire = [&](const std::string& n) {
    wire_names.push_back(n);
    return n;
  };

  // Buffered state bits (the fault targets) and their complements.
  for (int j = 0; j < 6; ++j) {
    body << "  BUF_X1 buf_state_" << j << " ( .A(state_q_i[" << j
         << "]), .Z(" << wire("sb" + std::to_string(j)) << ") );\n";
    body << "  INV_X1 inv_state_" << j << " ( .A(sb" << j << "), .ZN("
         << wire("nb" + std::to_string(j)) << ") );\n";
  }
  body << "  INV_X1 inv_adv ( .A(adv_i), .ZN(" << wire("nadv") << ") );\n";

  // One matcher per state: AND tree over the 6 bit literals.
  int gate_id = 0;
  auto and_tree = [&](std::vector<std::string> terms, const std::string& out,
                      const std::string& prefix) {
    while (terms.size() > 1) {
      std::vector<std::string> next;
      for (size_t i = 0; i + 1 < terms.size(); i += 2) {
        bool last_pair = next.empty() && terms.size() == 2;
        std::string o = last_pair
                            ? out
                            : wire(prefix + "_t" + std::to_string(gate_id));
        body << "  AND2_X1 " << prefix << "_g" << gate_id++ << " ( .A("
             << terms[i] << "), .B(" << terms[i + 1] << "), .Z(" << o
             << ") );\n";
        next.push_back(o);
      }
      if (terms.size() % 2) next.push_back(terms.back());
      terms = std::move(next);
    }
  };
  auto or_tree = [&](std::vector<std::string> terms, const std::string& out,
                     const std::string& prefix) {
    if (terms.size() == 1) {
      body << "  BUF_X1 " << prefix << "_g" << gate_id++ << " ( .A("
           << terms[0] << "), .Z(" << out << ") );\n";
      return;
    }
    while (terms.size() > 1) {
      std::vector<std::string> next;
      for (size_t i = 0; i + 1 < terms.size(); i += 2) {
        bool last_pair = next.empty() && terms.size() == 2;
        std::string o = last_pair
                            ? out
                            : wire(prefix + "_t" + std::to_string(gate_id));
        body << "  OR2_X1 " << prefix << "_g" << gate_id++ << " ( .A("
             << terms[i] << "), .B(" << terms[i + 1] << "), .Z(" << o
             << ") );\n";
        next.push_back(o);
      }
      if (terms.size() % 2) next.push_back(terms.back());
      terms = std::move(next);
    }
  };

  std::vector<std::string> hit_names;
  for (const auto& st : kStates) {
    std::vector<std::string> lits;
    for (int j = 0; j < 6; ++j)
      lits.push_back(((st.code >> j) & 1) ? "sb" + std::to_string(j)
                                          : "nb" + std::to_string(j));
    std::string hit = wire(std::string("hit_") + st.name);
    and_tree(lits, hit, std::string("m_") + st.name);
    hit_names.push_back(hit);
  }
  std::string valid = wire("valid");
  or_tree(hit_names, valid, "valid");
  body << "  INV_X1 inv_valid ( .A(valid), .ZN(" << wire("no_hit") << ") );\n";

  body << "  AND2_X1 round_go ( .A(hit_ROUND), .B(adv_i), .Z("
       << wire("round_adv") << ") );\n";
  body << "  AND2_X1 round_hold ( .A(hit_ROUND), .B(nadv), .Z("
       << wire("round_stay") << ") );\n";

  for (int j = 0; j < 6; ++j) {
    std::vector<std::string> contrib;
    for (const auto& st : kStates) {
      if (st.conditional) {
        if ((st.next >> j) & 1) contrib.push_back("round_adv");
        if ((st.code >> j) & 1) contrib.push_back("round_stay");
      } else if ((st.next >> j) & 1) {
        contrib.push_back(std::string("hit_") + st.name);
      }
    }
    if ((kError >> j) & 1) contrib.push_back("no_hit");
    or_tree(contrib, "state_d_o[" + std::to_string(j) + "]",
            "d" + std::to_string(j));
  }

  for (const auto& w : wire_names) wires << "  wire " << w << ";\n";
  os << wires.str() << body.str() << "endmodule\n";
  return os.str();
}

std::string bits_json(unsigned code, int width) {
  std::ostringstream os;
  os << "\"" << width << "'b";
  for (int j = width - 1; j >= 0; --j) os << ((code >> j) & 1);
  os << "\"";
  return os.str();
}

std::string sparse_fsm_spec() {
  std::ostringstream os;
  os << R"({
  "fimodels": {
    "sparse_fsm_state_skip": {
      "simultaneous_faults": 1,
      "stages": {
        "stage_fsm": {
          "inputs": ["state_q_i"],
          "outputs": ["state_d_o"],
          "type": "inout"
        }
      },
      "input_values": { "state_q_i": )"
     << bits_json(kRound, 6) << R"( },
      "output_values": { "state_d_o": )"
     << bits_json(kFinish, 6) << R"( },
      "output_fault_values": { "state_d_o": )"
     << bits_json(kInit, 6) << R"( },
      "alert_values": {},
      "node_fault_mapping": {},
      "fault_locations": ["buf_state_0", "buf_state_1", "buf_state_2",
                          "buf_state_3", "buf_state_4", "buf_state_5"]
    }
  }
}
)";
  return os.str();
}

// -- sanity: the two-gate NAND2 -> AOI21 circuit.
std::string sanity_netlist() {
  return R"(// Two-gate sanity circuit.
module sanity (a, b, c, d, y);
  input a, b, c, d;
  output y;
  wire n1;
  NAND2_X1 U1 ( .A(a), .B(b), .ZN(n1) );
  AOI21_X1 U2 ( .A1(n1), .B1(c), .B2(d), .ZN(y) );
endmodule
)";
}

std::string sanity_spec() {
  return R"({
  "fimodels": {
    "sanity_any_effect": {
      "simultaneous_faults": 1,
      "stages": {
        "stage_y": {
          "inputs": ["a"],
          "outputs": ["y"],
          "type": "inout"
        }
      },
      "input_values": { "a": "1'b1" },
      "output_values": { "y": "1'b1" },
      "alert_values": {},
      "node_fault_mapping": { "AOI21": ["0", "1"] },
      "fault_locations": []
    }
  }
}
)";
}

// -- adder_chain: six chained 16-bit ripple-carry adders plus an output
// buffer row (496 cells), sized for throughput runs.
std::string adder_chain_netlist() {
  std::ostringstream os;
  constexpr int kWidth = 16;
  const char* operands[] = {"a_i", "b_i", "c_i", "d_i", "e_i", "f_i", "g_i"};
  os << "// Six chained " << kWidth
     << "-bit ripple-carry adders; throughput-sized demo.\n";
  os << "module adder_chain (";
  for (const char* op : operands) os << op << ", ";
  os << "sum_o);\n";
  for (const char* op : operands)
    os << "  input [" << kWidth - 1 << ":0] " << op << ";\n";
  os << "  output [" << kWidth - 1 << ":0] sum_o;\n";

  std::ostringstream body;
  std::ostringstream wires;
  auto full_adder = [&](const std::string& tag, const std::string& a,
                        const std::string& b, const std::string& cin,
                        const std::string& s, const std::string& cout) {
    wires << "  wire " << tag << "_x, " << tag << "_g, " << tag << "_p;\n";
    body << "  XOR2_X1 " << tag << "_fx ( .A(" << a << "), .B(" << b
         << "), .Z(" << tag << "_x) );\n";
    body << "  XOR2_X1 " << tag << "_fs ( .A(" << tag << "_x), .B(" << cin
         << "), .Z(" << s << ") );\n";
    body << "  AND2_X1 " << tag << "_fg ( .A(" << a << "), .B(" << b
         << "), .Z(" << tag << "_g) );\n";
    body << "  AND2_X1 " << tag << "_fp ( .A(" << tag << "_x), .B(" << cin
         << "), .Z(" << tag << "_p) );\n";
    body << "  OR2_X1  " << tag << "_fc ( .A(" << tag << "_g), .B(" << tag
         << "_p), .Z(" << cout << ") );\n";
  };

  std::string acc = "a_i";
  for (int stage = 1; stage < 7; ++stage) {
    std::string sum = "st" + std::to_string(stage);
    wires << "  wire [" << kWidth - 1 << ":0] " << sum << ";\n";
    for (int j = 0; j < kWidth; ++j) {
      std::string tag = sum + "_fa" + std::to_string(j);
      std::string cin = j == 0 ? "1'b0" : sum + "_c" + std::to_string(j - 1);
      std::string cout = sum + "_c" + std::to_string(j);
      wires << "  wire " << cout << ";\n";
      full_adder(tag, acc + "[" + std::to_string(j) + "]",
                 std::string(operands[stage]) + "[" + std::to_string(j) + "]",
                 cin, sum + "[" + std::to_string(j) + "]", cout);
    }
    acc = sum;
  }
  for (int j = 0; j < kWidth; ++j)
    body << "  BUF_X1 out_buf" << j << " ( .A(" << acc << "[" << j
         << "]), .Z(sum_o[" << j << "]) );\n";

  os << wires.str() << body.str() << "endmodule\n";
  return os.str();
}

std::string adder_chain_spec() {
  return R"({
  "fimodels": {
    "adder_chain_any_effect": {
      "simultaneous_faults": 1,
      "stages": {
        "stage_sum": {
          "inputs": ["a_i"],
          "outputs": ["sum_o"],
          "type": "inout"
        }
      },
      "input_values": { "a_i": "16'h0001" },
      "output_values": { "sum_o": "16'h0001" },
      "alert_values": {},
      "node_fault_mapping": {},
      "fault_locations": []
    }
  }
}
)";
}

}  // namespace

std::string demo_cell_library() { return cells_lib(); }

std::string demo_netlist(const std::string& name) {
  if (name == "sp2v") return sp2v_netlist();
  if (name == "tmr_counter") return tmr_counter_netlist();
  if (name == "sparse_fsm") return sparse_fsm_netlist();
  if (name == "sanity") return sanity_netlist();
  if (name == "adder_chain") return adder_chain_netlist();
  throw Error(Err::UnknownNode, "no demo netlist named '" + name + "'");
}

std::string demo_fault_spec(const std::string& name) {
  if (name == "sp2v") return sp2v_spec();
  if (name == "tmr_counter") return tmr_counter_spec();
  if (name == "sparse_fsm") return sparse_fsm_spec();
  if (name == "sanity") return sanity_spec();
  if (name == "adder_chain") return adder_chain_spec();
  throw Error(Err::UnknownNode, "no demo fault spec named '" + name + "'");
}

std::vector<std::string> generate_demos(const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(Err::Io, "cannot create '" + out_dir + "'");

  std::vector<std::string> written;
  auto write = [&](const std::string& name, const std::string& text) {
    fs::path path = fs::path(out_dir) / name;
    std::ofstream out(path);
    if (!out) throw Error(Err::Io, "cannot write '" + path.string() + "'");
    out << text;
    written.push_back(path.string());
  };

  write("demo_cells.lib", cells_lib());
  for (const char* name :
       {"sp2v", "tmr_counter", "sparse_fsm", "sanity", "adder_chain"}) {
    write(std::string(name) + ".v", demo_netlist(name));
    write(std::string(name) + ".json", demo_fault_spec(name));
  }
  return written;
}

}  // namespace nfi
