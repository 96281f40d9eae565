// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "doctest.h"
#include "nfi/circuit_graph.hpp"
#include "nfi/errors.hpp"
#include "test_util.hpp"

using namespace nfi;

namespace {

// Exhaustive simple-path enumeration oracle for nodes_between.
void all_path_nodes(const CircuitGraph& g, NodeId at,
                    const std::set<NodeId>& sinks, std::vector<bool>& on_path,
                    std::set<NodeId>& result) {
  on_path[at] = true;
  if (sinks.count(at)) {
    for (NodeId id = 0; id < g.node_count(); ++id)
      if (on_path[id]) result.insert(id);
  }
  for (uint32_t e : g.out_edges(at)) {
    NodeId next = g.edges()[e].dst;
    if (!on_path[next]) all_path_nodes(g, next, sinks, on_path, result);
  }
  on_path[at] = false;
}

std::set<NodeId> oracle_nodes_between(const CircuitGraph& g,
                                      const std::set<NodeId>& sources,
                                      const std::set<NodeId>& sinks) {
  std::set<NodeId> result;
  for (NodeId s : sources) {
    std::vector<bool> on_path(g.node_count(), false);
    all_path_nodes(g, s, sinks, on_path, result);
  }
  return result;
}

CircuitGraph random_dag(test::Rng& rng, size_t n) {
  CircuitGraph g;
  const CellDefinition& buf = test::demo_lib().at("BUF_X1");
  for (size_t i = 0; i < n; ++i) {
    Node node;
    node.name = "n" + std::to_string(i);
    node.kind = NodeKind::Cell;
    node.cell = &buf;
    g.add_node(std::move(node));
  }
  for (size_t i = 1; i < n; ++i) {
    size_t edges = rng.below(3);
    for (size_t k = 0; k < edges; ++k)
      g.add_edge(static_cast<NodeId>(rng.below(i)), "Z",
                 static_cast<NodeId>(i), "A");
  }
  return g;
}

}  // namespace

TEST_CASE("nodes_between on the worked example excludes U2 and the inputs") {
  CircuitGraph g = test::fig3_graph();
  // Paths from the state register around the loop and to the output port.
  std::set<NodeId> sources{g.require("U3")};
  std::set<NodeId> sinks{g.require("U3"), g.require("out1")};
  std::set<NodeId> between = g.nodes_between(sources, sinks);

  std::set<std::string> names;
  for (NodeId id : between) names.insert(g.node(id).name);
  CHECK(names ==
        std::set<std::string>{"U1", "U3", "U4", "U5", "U6", "out1"});
  CHECK(names.count("U2") == 0);
  CHECK(names.count("in1") == 0);
}

TEST_CASE("nodes_between degenerate case: single node, no cycle") {
  CircuitGraph g;
  Node n;
  n.name = "x";
  n.kind = NodeKind::AuxInput;
  NodeId id = g.add_node(std::move(n));
  CHECK(g.nodes_between({id}, {id}) == std::set<NodeId>{id});
}

TEST_CASE("property: nodes_between equals exhaustive path enumeration") {
  test::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    CircuitGraph g = random_dag(rng, 6 + rng.below(7));
    std::set<NodeId> sources, sinks;
    size_t n = g.node_count();
    for (size_t i = 0; i < 1 + rng.below(3); ++i)
      sources.insert(static_cast<NodeId>(rng.below(n)));
    for (size_t i = 0; i < 1 + rng.below(3); ++i)
      sinks.insert(static_cast<NodeId>(rng.below(n)));
    CHECK(g.nodes_between(sources, sinks) ==
          oracle_nodes_between(g, sources, sinks));
  }
}

TEST_CASE("property: nodes_between is monotone in sources and sinks") {
  test::Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    CircuitGraph g = random_dag(rng, 10);
    std::set<NodeId> sources{static_cast<NodeId>(rng.below(10))};
    std::set<NodeId> sinks{static_cast<NodeId>(rng.below(10))};
    auto base = g.nodes_between(sources, sinks);
    sources.insert(static_cast<NodeId>(rng.below(10)));
    sinks.insert(static_cast<NodeId>(rng.below(10)));
    auto wider = g.nodes_between(sources, sinks);
    CHECK(std::includes(wider.begin(), wider.end(), base.begin(), base.end()));
  }
}

TEST_CASE("sequential_cycle_nodes finds the looped register only") {
  CircuitGraph g = test::fig3_graph();
  std::set<NodeId> cyc = g.sequential_cycle_nodes();
  REQUIRE(cyc.size() == 1);
  CHECK(g.node(*cyc.begin()).name == "U3");
}

TEST_CASE("sequential_cycle_nodes: acyclic pipeline reports nothing") {
  auto modules = parse_netlist(R"(
module pipe (d, clk, q);
  input d, clk;
  output q;
  wire q1, q2;
  DFF_X1 r1 ( .D(d),  .CK(clk), .Q(q1) );
  DFF_X1 r2 ( .D(q1), .CK(clk), .Q(q2) );
  BUF_X1 b  ( .A(q2), .Z(q) );
endmodule
)");
  CircuitGraph g = build_graph(modules[0], test::demo_lib());
  CHECK(g.sequential_cycle_nodes().empty());
}

TEST_CASE("sequential_cycle_nodes: interlocked loops report the register once") {
  // One register on two distinct loops through different gates.
  auto modules = parse_netlist(R"(
module locked (clk, q);
  input clk;
  output q;
  wire qr, l1, l2, d;
  DFF_X1 r ( .D(d), .CK(clk), .Q(qr) );
  INV_X1 g1 ( .A(qr), .ZN(l1) );
  BUF_X1 g2 ( .A(qr), .Z(l2) );
  NAND2_X1 g3 ( .A(l1), .B(l2), .ZN(d) );
  BUF_X1 ob ( .A(qr), .Z(q) );
endmodule
)");
  CircuitGraph g = build_graph(modules[0], test::demo_lib());
  std::set<NodeId> cyc = g.sequential_cycle_nodes();
  REQUIRE(cyc.size() == 1);
  CHECK(g.node(*cyc.begin()).name == "r");

  // Oracle: a sequential node is on a cycle iff it reaches itself.
  for (NodeId id = 0; id < g.node_count(); ++id) {
    if (!g.node(id).is_sequential_cell()) continue;
    std::set<NodeId> fwd = g.nodes_between({id}, {id});
    bool on_cycle = false;
    for (uint32_t e : g.in_edges(id))
      if (fwd.count(g.edges()[e].src)) on_cycle = true;
    CHECK(on_cycle == (cyc.count(id) > 0));
  }
}

TEST_CASE("induced_subgraph identity, empty and filtered cases") {
  test::Rng rng(17);
  CircuitGraph g = random_dag(rng, 12);
  std::set<NodeId> all;
  for (NodeId id = 0; id < g.node_count(); ++id) all.insert(id);

  CircuitGraph same = g.induced_subgraph(all);
  CHECK(same.node_count() == g.node_count());
  CHECK(same.edge_count() == g.edge_count());

  CircuitGraph empty = g.induced_subgraph({});
  CHECK(empty.node_count() == 0);
  CHECK(empty.edge_count() == 0);

  std::set<NodeId> keep;
  for (NodeId id = 0; id < g.node_count(); ++id)
    if (rng.flip()) keep.insert(id);
  CircuitGraph sub = g.induced_subgraph(keep);
  size_t expected_edges = 0;
  for (const auto& e : g.edges())
    if (keep.count(e.src) && keep.count(e.dst)) ++expected_edges;
  CHECK(sub.node_count() == keep.size());
  CHECK(sub.edge_count() == expected_edges);
}

TEST_CASE("unknown nodes are reported") {
  CircuitGraph g = test::fig3_graph();
  CHECK_THROWS_AS(g.require("nope"), Error);
  CHECK_THROWS_AS(g.nodes_between({9999}, {0}), Error);
}

TEST_CASE("dot export names every node") {
  CircuitGraph g = test::fig3_graph();
  std::string dot = g.to_dot();
  CHECK(dot.find("U3") != std::string::npos);
  CHECK(dot.find("digraph") != std::string::npos);
}
