// SPDX-License-Identifier: Apache-2.0
//
// Internal CDCL solver: two-watched-literal propagation, VSIDS-style decay
// activities with an indexed max-heap, first-UIP conflict analysis, phase
// saving and Luby restarts. No randomization, so runs are reproducible.
#include <algorithm>
#include <cmath>
#include <vector>

#include "nfi/errors.hpp"
#include "nfi/sat.hpp"

namespace nfi {
namespace {

using Lit = int32_t;  // 2*var for positive, 2*var+1 for negative; var 0-based

inline Lit mk_lit(int var, bool sign) { return 2 * var + (sign ? 1 : 0); }
inline int lit_var(Lit l) { return l >> 1; }
inline bool lit_sign(Lit l) { return l & 1; }  // true = negated
inline Lit lit_neg(Lit l) { return l ^ 1; }

constexpr int8_t kUndef = -1;

struct Clause {
  std::vector<Lit> lits;
  bool learnt = false;
  double activity = 0.0;
};

struct Watcher {
  int clause = -1;
  Lit blocker = -1;
};

// Max-heap over variable activities with stable tie-breaking by index.
class VarHeap {
 public:
  void grow(int n) { pos_.resize(n, -1); }

  bool contains(int v) const { return pos_[v] >= 0; }
  bool empty() const { return heap_.empty(); }

  template <typename Better>
  void insert(int v, Better better) {
    if (contains(v)) return;
    pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    up(pos_[v], better);
  }

  template <typename Better>
  int pop(Better better) {
    int top = heap_[0];
    heap_[0] = heap_.back();
    pos_[heap_[0]] = 0;
    heap_.pop_back();
    pos_[top] = -1;
    if (!heap_.empty()) down(0, better);
    return top;
  }

  template <typename Better>
  void increased(int v, Better better) {
    if (contains(v)) up(pos_[v], better);
  }

 private:
  std::vector<int> heap_;
  std::vector<int> pos_;

  template <typename Better>
  void up(int i, Better better) {
    while (i > 0) {
      int parent = (i - 1) / 2;
      if (!better(heap_[i], heap_[parent])) break;
      std::swap(pos_[heap_[i]], pos_[heap_[parent]]);
      std::swap(heap_[i], heap_[parent]);
      i = parent;
    }
  }

  template <typename Better>
  void down(int i, Better better) {
    while (true) {
      int l = 2 * i + 1, r = 2 * i + 2, best = i;
      if (l < static_cast<int>(heap_.size()) && better(heap_[l], heap_[best]))
        best = l;
      if (r < static_cast<int>(heap_.size()) && better(heap_[r], heap_[best]))
        best = r;
      if (best == i) break;
      std::swap(pos_[heap_[i]], pos_[heap_[best]]);
      std::swap(heap_[i], heap_[best]);
      i = best;
    }
  }
};

double luby(uint64_t i) {
  // Knuth's closed form over the Luby sequence 1 1 2 1 1 2 4 ...
  uint64_t k = 1;
  while ((uint64_t(1) << k) < i + 2) ++k;
  while ((uint64_t(1) << (k - 1)) - 1 != i) {
    i -= (uint64_t(1) << (k - 1)) - 1;
    k = 1;
    while ((uint64_t(1) << k) < i + 2) ++k;
  }
  return static_cast<double>(uint64_t(1) << (k - 1));
}

class Cdcl final : public SatSolver {
 public:
  explicit Cdcl(const CdclOptions& opts) : opts_(opts) {}

  SolveResult solve(const CnfFormula& cnf) override {
    init(cnf.num_vars);
    SolveResult result;

    for (const auto& clause : cnf.clauses) {
      if (!add_input_clause(clause)) {
        result.status = SolveStatus::Unsat;
        result.stats = stats_;
        return result;
      }
    }
    if (propagate() != -1) {
      result.status = SolveStatus::Unsat;
      result.stats = stats_;
      return result;
    }

    uint64_t restarts = 0;
    uint64_t conflicts_until_restart =
        static_cast<uint64_t>(luby(restarts) * 100);
    uint64_t conflict_budget = conflicts_until_restart;

    while (true) {
      int confl = propagate();
      if (confl != -1) {
        ++stats_.conflicts;
        if (decision_level() == 0) {
          result.status = SolveStatus::Unsat;
          result.stats = stats_;
          return result;
        }
        std::vector<Lit> learnt;
        int backtrack_level = 0;
        analyze(confl, learnt, backtrack_level);
        cancel_until(backtrack_level);
        if (learnt.size() == 1) {
          enqueue(learnt[0], -1);
        } else {
          int ci = attach_clause(learnt, /*learnt=*/true);
          bump_clause(ci);
          enqueue(learnt[0], ci);
        }
        var_inc_ /= 0.95;
        cla_inc_ /= 0.999;
        if (opts_.conflict_limit && stats_.conflicts >= opts_.conflict_limit) {
          result.status = SolveStatus::Unknown;
          result.note = "conflict limit of " +
                        std::to_string(opts_.conflict_limit) + " reached";
          result.stats = stats_;
          return result;
        }
        if (--conflict_budget == 0) {
          ++restarts;
          conflicts_until_restart =
              static_cast<uint64_t>(luby(restarts) * 100);
          conflict_budget = conflicts_until_restart;
          cancel_until(0);
          if (learnts_.size() > 4000 + 500 * reductions_) reduce_db();
        }
      } else {
        if (trail_.size() == static_cast<size_t>(num_vars_)) {
          result.status = SolveStatus::Sat;
          result.model.assign(num_vars_ + 1, false);
          for (int v = 0; v < num_vars_; ++v)
            result.model[v + 1] = assigns_[v] == 1;
          result.stats = stats_;
          return result;
        }
        decide();
      }
    }
  }

 private:
  CdclOptions opts_;
  int num_vars_ = 0;
  std::vector<Clause> clauses_;
  std::vector<int> learnts_;  // indices into clauses_
  std::vector<std::vector<Watcher>> watches_;
  std::vector<int8_t> assigns_;  // kUndef / 0 / 1
  std::vector<int8_t> phase_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  size_t qhead_ = 0;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  VarHeap heap_;
  std::vector<uint8_t> seen_;
  uint64_t reductions_ = 0;
  SolverStats stats_;

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  auto better() {
    return [this](int a, int b) {
      if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
      return a < b;
    };
  }

  int8_t value(Lit l) const {
    int8_t a = assigns_[lit_var(l)];
    if (a == kUndef) return kUndef;
    return lit_sign(l) ? static_cast<int8_t>(1 - a) : a;
  }

  void init(int num_vars) {
    num_vars_ = num_vars;
    watches_.assign(2 * num_vars, {});
    assigns_.assign(num_vars, kUndef);
    phase_.assign(num_vars, 0);
    level_.assign(num_vars, 0);
    reason_.assign(num_vars, -1);
    activity_.assign(num_vars, 0.0);
    seen_.assign(num_vars, 0);
    heap_.grow(num_vars);
    if (opts_.seed) {
      // Deterministic per-seed jitter diversifies the initial decision
      // order without introducing run-to-run noise.
      uint64_t state = opts_.seed;
      for (int v = 0; v < num_vars; ++v) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        activity_[v] = static_cast<double>(state >> 40) * 1e-12;
      }
    }
    for (int v = 0; v < num_vars; ++v) heap_.insert(v, better());
  }

  auto better() {
    return [this](int a, int b) {
      if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
      return a < b;
    };
  }

  bool add_input_clause(const std::vector<int>& ext) {
    std::vector<Lit> lits;
    for (int l : ext) {
      if (l == 0 || std::abs(l) > num_vars_)
        throw Error(Err::SolverFailure,
                    "literal " + std::to_string(l) + " out of range");
      lits.push_back(mk_lit(std::abs(l) - 1, l < 0));
    }
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (size_t i = 0; i + 1 < lits.size(); ++i)
      if (lits[i] == lit_neg(lits[i + 1])) return true;  // tautology
    // Drop already-false literals at level 0, stop on true ones.
    std::vector<Lit> pruned;
    for (Lit l : lits) {
      int8_t v = value(l);
      if (v == 1) return true;
      if (v == kUndef) pruned.push_back(l);
    }
    if (pruned.empty()) return false;
    if (pruned.size() == 1) return enqueue(pruned[0], -1);
    attach_clause(pruned, /*learnt=*/false);
    return true;
  }

  int attach_clause(const std::vector<Lit>& lits, bool learnt) {
    int ci = static_cast<int>(clauses_.size());
    clauses_.push_back({lits, learnt, 0.0});
    watches_[lit_neg(lits[0])].push_back({ci, lits[1]});
    watches_[lit_neg(lits[1])].push_back({ci, lits[0]});
    if (learnt) learnts_.push_back(ci);
    return ci;
  }

  bool enqueue(Lit l, int reason) {
    int v = lit_var(l);
    if (assigns_[v] != kUndef) return value(l) == 1;
    assigns_[v] = lit_sign(l) ? 0 : 1;
    phase_[v] = assigns_[v];
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
    return true;
  }

  // Returns the conflicting clause index, or -1.
  int propagate() {
    while (qhead_ < trail_.size()) {
      Lit p = trail_[qhead_++];
      ++stats_.propagations;
      std::vector<Watcher>& ws = watches_[p];
      size_t keep = 0;
      for (size_t i = 0; i < ws.size(); ++i) {
        Watcher w = ws[i];
        if (value(w.blocker) == 1) {
          ws[keep++] = w;
          continue;
        }
        Clause& c = clauses_[w.clause];
        Lit not_p = lit_neg(p);
        if (c.lits[0] == not_p) std::swap(c.lits[0], c.lits[1]);
        // c.lits[1] == not_p now.
        if (value(c.lits[0]) == 1) {
          ws[keep++] = {w.clause, c.lits[0]};
          continue;
        }
        bool moved = false;
        for (size_t j = 2; j < c.lits.size(); ++j) {
          if (value(c.lits[j]) != 0) {
            std::swap(c.lits[1], c.lits[j]);
            watches_[lit_neg(c.lits[1])].push_back({w.clause, c.lits[0]});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        // Unit or conflicting.
        ws[keep++] = {w.clause, c.lits[0]};
        if (value(c.lits[0]) == 0) {
          for (size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
          ws.resize(keep);
          qhead_ = trail_.size();
          return w.clause;
        }
        enqueue(c.lits[0], w.clause);
      }
      ws.resize(keep);
    }
    return -1;
  }

  void bump_var(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (auto& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    heap_.increased(v, better());
  }

  void bump_clause(int ci) {
    Clause& c = clauses_[ci];
    c.activity += cla_inc_;
    if (c.activity > 1e20) {
      for (int idx : learnts_) clauses_[idx].activity *= 1e-20;
      cla_inc_ *= 1e-20;
    }
  }

  void analyze(int confl, std::vector<Lit>& learnt, int& backtrack_level) {
    learnt.push_back(-1);  // slot for the asserting literal
    int counter = 0;
    Lit p = -1;
    size_t index = trail_.size();

    do {
      Clause& c = clauses_[confl];
      if (c.learnt) bump_clause(confl);
      for (size_t j = (p == -1 ? 0 : 1); j < c.lits.size(); ++j) {
        Lit q = c.lits[j];
        int v = lit_var(q);
        if (!seen_[v] && level_[v] > 0) {
          seen_[v] = 1;
          bump_var(v);
          if (level_[v] >= decision_level())
            ++counter;
          else
            learnt.push_back(q);
        }
      }
      while (!seen_[lit_var(trail_[index - 1])]) --index;
      p = trail_[--index];
      seen_[lit_var(p)] = 0;
      --counter;
      confl = reason_[lit_var(p)];
    } while (counter > 0);
    learnt[0] = lit_neg(p);

    // Cheap self-subsumption: drop literals implied by the rest.
    size_t keep = 1;
    for (size_t i = 1; i < learnt.size(); ++i) {
      int v = lit_var(learnt[i]);
      int r = reason_[v];
      bool redundant = r != -1;
      if (redundant) {
        for (size_t j = 1; j < clauses_[r].lits.size() && redundant; ++j) {
          int vj = lit_var(clauses_[r].lits[j]);
          if (!seen_[vj] && level_[vj] > 0) redundant = false;
        }
      }
      if (!redundant) learnt[keep++] = learnt[i];
    }
    learnt.resize(keep);

    if (learnt.size() == 1) {
      backtrack_level = 0;
    } else {
      size_t max_i = 1;
      for (size_t i = 2; i < learnt.size(); ++i)
        if (level_[lit_var(learnt[i])] > level_[lit_var(learnt[max_i])])
          max_i = i;
      std::swap(learnt[1], learnt[max_i]);
      backtrack_level = level_[lit_var(learnt[1])];
    }
    for (size_t i = 0; i < learnt.size(); ++i) seen_[lit_var(learnt[i])] = 0;
  }

  void cancel_until(int target_level) {
    if (decision_level() <= target_level) return;
    int bound = trail_lim_[target_level];
    for (int i = static_cast<int>(trail_.size()) - 1; i >= bound; --i) {
      int v = lit_var(trail_[i]);
      assigns_[v] = kUndef;
      reason_[v] = -1;
      heap_.insert(v, better());
    }
    trail_.resize(bound);
    trail_lim_.resize(target_level);
    qhead_ = trail_.size();
  }

  void decide() {
    int v = -1;
    while (!heap_.empty()) {
      v = heap_.pop(better());
      if (assigns_[v] == kUndef) break;
      v = -1;
    }
    if (v < 0)
      throw Error(Err::SolverFailure, "no decision variable available");
    ++stats_.decisions;
    trail_lim_.push_back(static_cast<int>(trail_.size()));
    enqueue(mk_lit(v, phase_[v] == 0), -1);
  }

  void reduce_db() {
    ++reductions_;
    std::vector<int> sorted = learnts_;
    std::sort(sorted.begin(), sorted.end(), [this](int a, int b) {
      return clauses_[a].activity < clauses_[b].activity;
    });
    // Drop the least active half, except binary and locked clauses. The
    // clause array itself is not compacted; dead clauses are detached.
    std::vector<bool> locked(clauses_.size(), false);
    for (int v = 0; v < num_vars_; ++v)
      if (assigns_[v] != kUndef && reason_[v] >= 0) locked[reason_[v]] = true;
    size_t removed = 0;
    std::vector<bool> dead(clauses_.size(), false);
    for (size_t i = 0; i < sorted.size() / 2; ++i) {
      int ci = sorted[i];
      if (locked[ci] || clauses_[ci].lits.size() <= 2) continue;
      dead[ci] = true;
      ++removed;
    }
    if (removed == 0) return;
    for (auto& ws : watches_) {
      size_t keep = 0;
      for (const auto& w : ws)
        if (!dead[w.clause]) ws[keep++] = w;
      ws.resize(keep);
    }
    std::vector<int> alive;
    for (int ci : learnts_)
      if (!dead[ci]) alive.push_back(ci);
    learnts_ = std::move(alive);
  }
};

}  // namespace

std::unique_ptr<SatSolver> make_cdcl_solver(const CdclOptions& opts) {
  return std::make_unique<Cdcl>(opts);
}

}  // namespace nfi
