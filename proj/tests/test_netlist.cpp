// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "nfi/errors.hpp"
#include "nfi/netlist.hpp"
#include "test_util.hpp"

using namespace nfi;

TEST_CASE("netlist: two instances with a connecting net") {
  auto modules = parse_netlist(R"(
// listing-style scenario
module pair (a, b, c, d, y);
  input a, b, c, d;
  output y;
  wire n1;
  NAND2_X1 U1 ( .A(a), .B(b), .ZN(n1) );
  AOI21_X1 U2 ( .A1(n1), .B1(c), .B2(d), .ZN(y) );
endmodule
)");
  REQUIRE(modules.size() == 1);
  const NetlistModule& m = modules[0];
  CHECK(m.name == "pair");
  CHECK(m.ports.size() == 5);
  CHECK(m.instances.size() == 2);
  CHECK(m.instances[0].connections.at("ZN") == "n1");
  CHECK(m.instances[1].connections.at("A1") == "n1");

  CircuitGraph g = build_graph(m, test::demo_lib());
  // The connecting edge carries its pin pair.
  bool found = false;
  for (const auto& e : g.edges()) {
    if (g.node(e.src).name == "U1" && g.node(e.dst).name == "U2") {
      CHECK(e.src_pin == "ZN");
      CHECK(e.dst_pin == "A1");
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("netlist: assign alias resolves to the same net") {
  auto modules = parse_netlist(R"(
module m (a, y);
  input a;
  output y;
  assign y = a;
endmodule
)");
  CircuitGraph g = build_graph(modules[0], test::demo_lib());
  // Only port nodes plus one port-to-port edge.
  CHECK(g.node_count() == 2);
  REQUIRE(g.edge_count() == 1);
  CHECK(g.node(g.edges()[0].src).name == "a");
  CHECK(g.node(g.edges()[0].dst).name == "y");
}

TEST_CASE("netlist: ranged wire bit-blasts into individual bits") {
  auto modules = parse_netlist(R"(
module m (x, y);
  input x;
  output y;
  wire [3:0] rnd_ctr;
  assign rnd_ctr = 4'b0101;
  assign y = x;
endmodule
)");
  const NetlistModule& m = modules[0];
  REQUIRE(m.wires.size() == 4);
  CHECK(m.wires[0] == "rnd_ctr[0]");
  CHECK(m.wires[3] == "rnd_ctr[3]");
  CHECK(m.const_ties.at("rnd_ctr[0]") == true);
  CHECK(m.const_ties.at("rnd_ctr[1]") == false);
  CHECK(m.const_ties.at("rnd_ctr[2]") == true);
  CHECK(m.const_ties.at("rnd_ctr[3]") == false);
}

TEST_CASE("netlist: behavioral constructs are rejected by name") {
  try {
    parse_netlist("module m (a); input a; always @(posedge a) x <= 1; "
                  "endmodule");
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.kind() == Err::UnknownConstruct);
  }
  CHECK_THROWS_AS(parse_netlist("module m (y); output y; assign y = {1'b0}; "
                                "endmodule"),
                  Error);
}

TEST_CASE("netlist: ANSI header and non-ANSI body declarations agree") {
  auto ansi = parse_netlist(R"(
module m (input a, input [1:0] b, output y);
  BUF_X1 u0 ( .A(a), .Z(y) );
endmodule
)");
  auto classic = parse_netlist(R"(
module m (a, b, y);
  input a;
  input [1:0] b;
  output y;
  BUF_X1 u0 ( .A(a), .Z(y) );
endmodule
)");
  REQUIRE(ansi[0].ports.size() == 3);
  REQUIRE(classic[0].ports.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(ansi[0].ports[i].name == classic[0].ports[i].name);
    CHECK(ansi[0].ports[i].width == classic[0].ports[i].width);
  }
}

TEST_CASE("graph build: fan-out makes one edge per sink") {
  auto modules = parse_netlist(R"(
module fanout (a, y0, y1, y2);
  input a;
  output y0, y1, y2;
  wire n;
  INV_X1 inv ( .A(a), .ZN(n) );
  BUF_X1 b0 ( .A(n), .Z(y0) );
  BUF_X1 b1 ( .A(n), .Z(y1) );
  BUF_X1 b2 ( .A(n), .Z(y2) );
endmodule
)");
  const NetlistModule& m = modules[0];
  CircuitGraph g = build_graph(m, test::demo_lib());

  // Oracle: count sinks of net n by scanning the module text itself.
  size_t sink_count = 0;
  for (const auto& inst : m.instances)
    for (const auto& [pin, net] : inst.connections)
      if (net == "n" && pin == "A") ++sink_count;
  NodeId inv = g.require("inv");
  CHECK(g.out_edges(inv).size() == sink_count);
  CHECK(sink_count == 3);

  // Node count = ports + instances (no constants or aux here).
  CHECK(g.node_count() == 4 + 4);
  // Edge count = one per (driver, sink-pin) pair.
  CHECK(g.edge_count() == 1 + 3 + 3);
  // Single-driver rule: every cell input pin has exactly one in-edge.
  for (NodeId id = 0; id < g.node_count(); ++id) {
    for (const auto& pin : g.required_input_pins(id)) {
      size_t drivers = 0;
      for (uint32_t e : g.in_edges(id))
        if (g.edges()[e].dst_pin == pin) ++drivers;
      CHECK(drivers == 1);
    }
  }
}

TEST_CASE("graph build: multiple drivers are a hard error") {
  auto modules = parse_netlist(R"(
module bad (a, b, y);
  input a, b;
  output y;
  BUF_X1 u0 ( .A(a), .Z(y) );
  BUF_X1 u1 ( .A(b), .Z(y) );
endmodule
)");
  try {
    build_graph(modules[0], test::demo_lib());
    FAIL("expected multiple-driver rejection");
  } catch (const Error& e) {
    CHECK(e.kind() == Err::MultipleDrivers);
  }
}

TEST_CASE("graph build: dangling input is repaired with an aux node") {
  auto modules = parse_netlist(R"(
module dangle (a, y);
  input a;
  output y;
  wire unconnected;
  NAND2_X1 u0 ( .A(a), .B(unconnected), .ZN(y) );
endmodule
)");
  CircuitGraph g = build_graph(modules[0], test::demo_lib());
  CHECK(!g.diagnostics.empty());
  NodeId aux = g.require("aux:u0.B");
  CHECK(g.node(aux).kind == NodeKind::AuxInput);
  CHECK(g.out_edges(aux).size() == 1);
}

TEST_CASE("graph build: unresolved instance type") {
  auto modules = parse_netlist(R"(
module m (a, y);
  input a;
  output y;
  MYSTERY u0 ( .A(a), .Z(y) );
endmodule
)");
  try {
    build_graph(modules[0], test::demo_lib());
    FAIL("expected unresolved cell");
  } catch (const Error& e) {
    CHECK(e.kind() == Err::UnresolvedCell);
  }
  // Submodule functions resolve the same name.
  CellDefinition sub = parse_cell_json("MYSTERY", R"({
    "input_pins": ["A"], "output_pins": "Z", "boolean_function": "Z = A"
  })");
  CircuitGraph g =
      build_graph(modules[0], test::demo_lib(), {{"MYSTERY", sub}});
  CHECK(g.node(g.require("u0")).cell->name == "MYSTERY");
}

TEST_CASE("graph json frontend round-trips the listing shape") {
  const char* text = R"({
    "Nodes": {
      "a":  { "type": "input" },
      "b":  { "type": "input" },
      "U1": { "type": "NAND2_X1" },
      "y":  { "type": "output" }
    },
    "Edges": {
      "1": { "out": { "node": "a", "port": "o" },
             "in":  { "node": "U1", "port": "A" } },
      "2": { "out": { "node": "b", "port": "o" },
             "in":  { "node": "U1", "port": "B" } },
      "3": { "out": { "node": "U1", "port": "ZN" },
             "in":  { "node": "y", "port": "i" } }
    }
  })";
  CircuitGraph g = parse_graph_json(text, test::demo_lib());
  CHECK(g.node_count() == 4);
  CHECK(g.edge_count() == 3);
  CircuitGraph round = parse_graph_json(g.to_json(), test::demo_lib());
  CHECK(round.node_count() == g.node_count());
  CHECK(round.edge_count() == g.edge_count());
}
