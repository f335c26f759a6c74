#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <vector>

namespace nfasat::sat {

enum class Status { Sat, Unsat, Unknown };

struct Limits {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// 0 means unlimited.
  std::uint64_t max_conflicts = 0;
};

struct Stats {
  std::uint64_t decisions = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learnt_clauses = 0;
};

/// Conflict-driven clause-learning solver.
///
/// Two watched literals with blockers, first-UIP learning with local clause
/// minimization, VSIDS with phase saving, Luby restarts, and periodic
/// reduction of learnt clauses by LBD. Deterministic: no randomness.
class CdclSolver {
 public:
  /// Adds a new variable and returns its 1-based index.
  int new_var();
  int var_count() const { return static_cast<int>(assigns_.size()); }

  /// Adds a DIMACS-style clause; variables are created on demand. Returns
  /// false once the formula is known to be unsatisfiable.
  bool add_clause(std::span<const int> lits);

  Status solve(const Limits& limits = {});

  /// Model value of variable `v` after a Sat answer.
  bool model_value(int v) const { return model_[static_cast<std::size_t>(v - 1)]; }

  const Stats& stats() const { return stats_; }

 private:
  using Lit = std::uint32_t;  // 2*var + sign, var 0-based
  static constexpr std::uint32_t kNoReason = UINT32_MAX;

  static Lit make_lit(int dimacs) {
    return static_cast<Lit>(2 * (std::abs(dimacs) - 1) + (dimacs < 0 ? 1 : 0));
  }
  static std::uint32_t var_of(Lit l) { return l >> 1; }
  static Lit neg(Lit l) { return l ^ 1u; }

  struct Clause {
    std::vector<Lit> lits;
    bool learnt = false;
    bool deleted = false;
    std::uint32_t lbd = 0;
    double activity = 0;
  };
  struct Watcher {
    std::uint32_t clause;
    Lit blocker;
  };

  // 1 true, -1 false, 0 unassigned
  int value(Lit l) const {
    const int v = assigns_[var_of(l)];
    return (l & 1u) ? -v : v;
  }

  void ensure_var(std::uint32_t v);
  void enqueue(Lit l, std::uint32_t reason);
  std::uint32_t propagate();
  void analyze(std::uint32_t conflict, std::vector<Lit>& learnt, std::uint32_t& backtrack_level);
  bool redundant(Lit l) const;
  void backtrack(std::uint32_t level);
  std::optional<Lit> pick_branch();
  std::uint32_t attach(std::vector<Lit> lits, bool learnt, std::uint32_t lbd);
  void reduce_learnts();
  bool locked(std::uint32_t c) const;
  std::uint32_t decision_level() const { return static_cast<std::uint32_t>(trail_lim_.size()); }

  void bump_var(std::uint32_t v);
  void bump_clause(Clause& c);
  void heap_insert(std::uint32_t v);
  void heap_up(std::size_t pos);
  void heap_down(std::size_t pos);
  std::uint32_t heap_pop();
  bool heap_less(std::uint32_t a, std::uint32_t b) const { return activity_[a] > activity_[b]; }

  static double luby(double y, std::uint64_t x);

  std::vector<Clause> clauses_;
  std::vector<std::uint32_t> learnts_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<int> assigns_;
  std::vector<std::uint32_t> level_;
  std::vector<std::uint32_t> reason_;
  std::vector<bool> polarity_;
  std::vector<char> seen_;
  std::vector<double> activity_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<std::uint32_t> heap_;
  std::vector<std::int64_t> heap_index_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  bool unsat_ = false;
  std::vector<bool> model_;
  Stats stats_;
  std::vector<std::uint32_t> level_stamp_;
  std::uint32_t stamp_ = 0;
};

}  // namespace nfasat::sat
