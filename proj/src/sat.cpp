// SPDX-License-Identifier: Apache-2.0
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nfi/errors.hpp"
#include "nfi/sat.hpp"

namespace nfi {

Verdict evaluate(const DifferentialGraph& diff, SatSolver& solver) {
  CnfFormula cnf = tseitin(diff);
  SolveResult res = solver.solve(cnf);
  Verdict verdict;
  verdict.stats = res.stats;
  switch (res.status) {
    case SolveStatus::Unsat:
      verdict.kind = VerdictKind::Ineffective;
      break;
    case SolveStatus::Unknown:
      verdict.kind = VerdictKind::Inconclusive;
      verdict.note = res.note.empty() ? "solver gave up" : res.note;
      break;
    case SolveStatus::Sat: {
      verdict.kind = VerdictKind::Effective;
      for (const auto& grp : diff.undefined_inputs) {
        int var = cnf.var_map.at({grp.bits.front(), "o"});
        verdict.witness[grp.name] = res.model.at(var);
      }
      break;
    }
  }
  return verdict;
}

Verdict brute_force_verdict(const DifferentialGraph& diff, size_t max_inputs) {
  const size_t n = diff.undefined_inputs.size();
  if (n > max_inputs)
    throw Error(Err::TooManyInputs,
                std::to_string(n) + " undefined inputs exceed the oracle "
                                    "bound of " +
                    std::to_string(max_inputs));
  Verdict verdict;
  const uint64_t total = uint64_t(1) << n;
  for (uint64_t counter = 0; counter < total; ++counter) {
    std::map<std::string, bool> assignment;
    for (size_t j = 0; j < n; ++j) {
      // Lexicographic order over the input tuple: the last input varies
      // fastest.
      bool bit = (counter >> (n - 1 - j)) & 1;
      assignment[diff.undefined_inputs[j].name] = bit;
    }
    if (evaluate_root(diff, assignment)) {
      verdict.kind = VerdictKind::Effective;
      verdict.witness = std::move(assignment);
      return verdict;
    }
  }
  verdict.kind = VerdictKind::Ineffective;
  return verdict;
}

namespace {

class ExternalSolver final : public SatSolver {
 public:
  explicit ExternalSolver(std::string command) : command_(std::move(command)) {}

  SolveResult solve(const CnfFormula& cnf) override {
    namespace fs = std::filesystem;
    std::string tmpl =
        (fs::temp_directory_path() / "netlist-fi-XXXXXX").string();
    std::vector<char> path(tmpl.begin(), tmpl.end());
    path.push_back('\0');
    int fd = mkstemp(path.data());
    if (fd < 0)
      throw Error(Err::Io, "cannot create a temporary DIMACS file");
    std::string cnf_path(path.data());
    {
      std::string text = emit_dimacs(cnf);
      FILE* f = fdopen(fd, "w");
      fwrite(text.data(), 1, text.size(), f);
      fclose(f);
    }

    std::string cmd = command_ + " " + cnf_path + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
      fs::remove(cnf_path);
      throw Error(Err::SolverFailure, "cannot run '" + command_ + "'");
    }
    std::string output;
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
      output.append(buf.data(), got);
    pclose(pipe);
    fs::remove(cnf_path);
    return parse_output(output, cnf.num_vars);
  }

 private:
  std::string command_;

  // Accepts the competition protocol ("s SATISFIABLE" + "v ..." lines) and
  // the bare "SAT\n1 -2 0" format.
  static SolveResult parse_output(const std::string& output, int num_vars) {
    SolveResult res;
    res.model.assign(num_vars + 1, false);
    bool have_status = false;
    std::istringstream is(output);
    std::string line;
    auto read_lits = [&](std::istringstream& ls) {
      int lit;
      while (ls >> lit) {
        if (lit == 0) break;
        int v = std::abs(lit);
        if (v <= num_vars) res.model[v] = lit > 0;
      }
    };
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == 'c') continue;
      if (line[0] == 's' && line.size() > 1 && line[1] == ' ') {
        have_status = true;
        if (line.find("UNSATISFIABLE") != std::string::npos)
          res.status = SolveStatus::Unsat;
        else if (line.find("SATISFIABLE") != std::string::npos)
          res.status = SolveStatus::Sat;
        else
          res.status = SolveStatus::Unknown;
      } else if (line[0] == 'v' && line.size() > 1 && line[1] == ' ') {
        std::istringstream ls(line.substr(2));
        read_lits(ls);
      } else if (!have_status &&
                 (line.rfind("UNSAT", 0) == 0 || line.rfind("SAT", 0) == 0)) {
        have_status = true;
        res.status = line.rfind("UNSAT", 0) == 0 ? SolveStatus::Unsat
                                                 : SolveStatus::Sat;
      } else if (have_status && res.status == SolveStatus::Sat) {
        std::istringstream ls(line);
        read_lits(ls);
      }
    }
    if (!have_status) {
      res.status = SolveStatus::Unknown;
      res.note = "external solver produced no recognizable status";
    }
    return res;
  }
};

}  // namespace

std::unique_ptr<SatSolver> make_external_solver(const std::string& command) {
  return std::make_unique<ExternalSolver>(command);
}

}  // namespace nfi
