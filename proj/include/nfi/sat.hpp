// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nfi/differential.hpp"

namespace nfi {

/// CNF with 1-indexed variables; literals are nonzero signed indices.
struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  // (node, output pin) -> variable, for model replay and witnesses.
  std::map<std::pair<NodeId, std::string>, int> var_map;
  int root_var = 0;
  // Sum over encoded primitives of max(arity, 1); the linearity bound in
  // the acceptance suite is clauses <= 4 * operator_count.
  uint64_t operator_count = 0;

  int fresh_var() { return ++num_vars; }
  void add_clause(std::vector<int> lits) { clauses.push_back(std::move(lits)); }
};

/// Tseitin transformation of a differential graph: one variable per node
/// output (and per operator inside cell function trees), the standard
/// clause schema per operator (n-ary AND/OR encoded directly), defined
/// inputs as unit clauses, and the root asserted true. Equisatisfiable with
/// "some undefined-input assignment makes the root 1".
CnfFormula tseitin(const DifferentialGraph& diff);

/// DIMACS text: "p cnf V C" then zero-terminated clauses, in stable order.
std::string emit_dimacs(const CnfFormula& cnf);

enum class SolveStatus : uint8_t { Sat, Unsat, Unknown };

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  std::vector<bool> model;  // model[v] for v in 1..num_vars; index 0 unused
  SolverStats stats;
  std::string note;
};

class SatSolver {
 public:
  virtual ~SatSolver() = default;
  virtual SolveResult solve(const CnfFormula& cnf) = 0;
};

struct CdclOptions {
  uint64_t conflict_limit = 0;  // 0 = unlimited
  uint64_t seed = 0;            // nonzero adds tiny deterministic activity jitter
};

/// Internal CDCL solver with two-watched-literal propagation, VSIDS-style
/// activities, first-UIP learning and Luby restarts. Deterministic for a
/// given formula and seed.
std::unique_ptr<SatSolver> make_cdcl_solver(const CdclOptions& opts = {});

/// External DIMACS solver run as a subprocess; accepts both the SAT-
/// competition output protocol ("s SATISFIABLE" / "v ..." lines) and the
/// bare "SAT\n<model>" format.
std::unique_ptr<SatSolver> make_external_solver(const std::string& command);

/// SAT-path verdict: effective iff the root is satisfiable; the witness is
/// the model restricted to the shared undefined inputs. Resource limits
/// surface as an inconclusive verdict.
Verdict evaluate(const DifferentialGraph& diff, SatSolver& solver);

/// Independent oracle: enumerates every undefined-input assignment (first
/// witness in lexicographic order, inputs in diff order). Throws
/// Err::TooManyInputs above `max_inputs`.
Verdict brute_force_verdict(const DifferentialGraph& diff,
                            size_t max_inputs = 20);

}  // namespace nfi
