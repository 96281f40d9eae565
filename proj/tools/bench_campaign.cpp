// SPDX-License-Identifier: Apache-2.0
//
// Compares the serial reference evaluation loop against the OpenMP kernel
// on the throughput demo. Usage: bench_campaign [max_configs]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <omp.h>

#include "nfi/campaign.hpp"
#include "nfi/demos.hpp"
#include "nfi/liberty.hpp"
#include "nfi/netlist.hpp"

using namespace nfi;

int main(int argc, char** argv) {
  uint64_t max_configs = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 600;

  CellLibrary lib = parse_liberty(demo_cell_library());
  auto modules = parse_netlist(demo_netlist("adder_chain"));
  CircuitGraph graph = build_graph(modules.front(), lib);
  auto models = parse_fault_spec(demo_fault_spec("adder_chain"));
  const NamedFaultModel& model = models.front();

  CircuitGraph pre = preprocess(graph, lib);
  TargetGraph target = extract_target(pre, lib, model.spec);
  auto defaults = default_mappings(lib);
  FaultConfigStream stream(target, lib, model.spec, defaults);
  std::vector<FaultConfig> configs;
  while (auto c = stream.next()) {
    if (configs.size() >= max_configs) break;
    configs.push_back(std::move(*c));
  }

  std::printf("target: %zu gates, %zu configs, %.2f GE\n", target.kept_cells,
              configs.size(), target.gate_equivalents);

  SolverConfig solver;
  auto time_run = [&](bool parallel, int threads) {
    auto start = std::chrono::steady_clock::now();
    auto verdicts = evaluate_configs(target, lib, model.spec, model.mode,
                                     configs, solver, parallel, threads);
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    uint64_t effective = 0;
    for (const auto& v : verdicts)
      if (v.effective()) ++effective;
    return std::pair<double, uint64_t>(secs, effective);
  };

  auto [serial_s, serial_eff] = time_run(false, 1);
  std::printf("%-24s %8.3f s   (%llu effective)\n", "serial reference",
              serial_s, static_cast<unsigned long long>(serial_eff));
  for (int threads : {2, 4, 8}) {
    if (threads > omp_get_max_threads() * 4) break;
    auto [par_s, par_eff] = time_run(true, threads);
    std::printf("%-21s %2d %8.3f s   (%llu effective, %.2fx)\n",
                "openmp kernel, jobs", threads, par_s,
                static_cast<unsigned long long>(par_eff), serial_s / par_s);
    if (par_eff != serial_eff) {
      std::printf("MISMATCH between serial and parallel results\n");
      return 1;
    }
  }
  return 0;
}
