#include "nfasat/sat.hpp"

#include <algorithm>
#include <cmath>

namespace nfasat::sat {
namespace {

constexpr double kVarDecay = 0.95;
constexpr double kClauseDecay = 0.999;
constexpr double kRestartBase = 100;
constexpr std::uint32_t kUndefLit = UINT32_MAX;

}  // namespace

int CdclSolver::new_var() {
  ensure_var(static_cast<std::uint32_t>(assigns_.size()));
  return var_count();
}

void CdclSolver::ensure_var(std::uint32_t v) {
  if (v < assigns_.size()) return;
  const std::size_t count = static_cast<std::size_t>(v) + 1;
  const std::size_t old = assigns_.size();
  assigns_.resize(count, 0);
  level_.resize(count, 0);
  reason_.resize(count, kNoReason);
  polarity_.resize(count, true);
  seen_.resize(count, 0);
  activity_.resize(count, 0.0);
  heap_index_.resize(count, -1);
  watches_.resize(2 * count);
  for (std::size_t i = old; i < count; ++i) heap_insert(static_cast<std::uint32_t>(i));
}

bool CdclSolver::add_clause(std::span<const int> dimacs) {
  if (unsat_) return false;
  std::vector<Lit> lits;
  lits.reserve(dimacs.size());
  for (int d : dimacs) {
    const Lit l = make_lit(d);
    ensure_var(var_of(l));
    lits.push_back(l);
  }
  std::sort(lits.begin(), lits.end());
  std::vector<Lit> kept;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i > 0 && lits[i] == lits[i - 1]) continue;
    if (i > 0 && lits[i] == neg(lits[i - 1])) return true;  // tautology
    const int v = value(lits[i]);
    if (v == 1) return true;
    if (v == -1) continue;  // false at level 0
    kept.push_back(lits[i]);
  }
  if (kept.empty()) {
    unsat_ = true;
    return false;
  }
  if (kept.size() == 1) {
    enqueue(kept[0], kNoReason);
    if (propagate() != kNoReason) unsat_ = true;
    return !unsat_;
  }
  attach(std::move(kept), false, 0);
  return true;
}

std::uint32_t CdclSolver::attach(std::vector<Lit> lits, bool learnt, std::uint32_t lbd) {
  const auto idx = static_cast<std::uint32_t>(clauses_.size());
  watches_[lits[0]].push_back({idx, lits[1]});
  watches_[lits[1]].push_back({idx, lits[0]});
  Clause c;
  c.lits = std::move(lits);
  c.learnt = learnt;
  c.lbd = lbd;
  clauses_.push_back(std::move(c));
  if (learnt) {
    learnts_.push_back(idx);
    ++stats_.learnt_clauses;
  }
  return idx;
}

void CdclSolver::enqueue(Lit l, std::uint32_t reason) {
  const std::uint32_t v = var_of(l);
  assigns_[v] = (l & 1u) ? -1 : 1;
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(l);
}

std::uint32_t CdclSolver::propagate() {
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++];
    const Lit false_lit = neg(p);
    auto& ws = watches_[false_lit];
    ++stats_.propagations;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ws.size()) {
      const Watcher w = ws[i];
      if (value(w.blocker) == 1) {
        ws[j++] = ws[i++];
        continue;
      }
      Clause& c = clauses_[w.clause];
      ++i;
      if (c.deleted) continue;
      if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
      const Lit first = c.lits[0];
      const Watcher kept{w.clause, first};
      if (first != w.blocker && value(first) == 1) {
        ws[j++] = kept;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.lits.size(); ++k) {
        if (value(c.lits[k]) != -1) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[c.lits[1]].push_back(kept);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = kept;
      if (value(first) == -1) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return w.clause;
      }
      enqueue(first, w.clause);
    }
    ws.resize(j);
  }
  return kNoReason;
}

bool CdclSolver::redundant(Lit l) const {
  const std::uint32_t r = reason_[var_of(l)];
  if (r == kNoReason) return false;
  const auto& lits = clauses_[r].lits;
  for (std::size_t q = 1; q < lits.size(); ++q) {
    const std::uint32_t v = var_of(lits[q]);
    if (!seen_[v] && level_[v] > 0) return false;
  }
  return true;
}

void CdclSolver::analyze(std::uint32_t conflict, std::vector<Lit>& learnt, std::uint32_t& backtrack_level) {
  learnt.assign(1, kUndefLit);
  int open = 0;
  Lit p = kUndefLit;
  std::size_t idx = trail_.size();
  std::uint32_t confl = conflict;
  do {
    Clause& c = clauses_[confl];
    if (c.learnt) bump_clause(c);
    for (std::size_t q = (p == kUndefLit ? 0 : 1); q < c.lits.size(); ++q) {
      const Lit l = c.lits[q];
      const std::uint32_t v = var_of(l);
      if (seen_[v] || level_[v] == 0) continue;
      seen_[v] = 1;
      bump_var(v);
      if (level_[v] >= decision_level())
        ++open;
      else
        learnt.push_back(l);
    }
    while (!seen_[var_of(trail_[--idx])]) {
    }
    p = trail_[idx];
    confl = reason_[var_of(p)];
    seen_[var_of(p)] = 0;
    --open;
  } while (open > 0);
  learnt[0] = neg(p);

  const std::vector<Lit> original = learnt;
  std::size_t out = 1;
  for (std::size_t i = 1; i < learnt.size(); ++i)
    if (!redundant(learnt[i])) learnt[out++] = learnt[i];
  learnt.resize(out);
  for (Lit l : original) seen_[var_of(l)] = 0;

  backtrack_level = 0;
  if (learnt.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t i = 2; i < learnt.size(); ++i)
      if (level_[var_of(learnt[i])] > level_[var_of(learnt[max_i])]) max_i = i;
    std::swap(learnt[1], learnt[max_i]);
    backtrack_level = level_[var_of(learnt[1])];
  }
}

void CdclSolver::backtrack(std::uint32_t level) {
  if (decision_level() <= level) return;
  for (std::size_t i = trail_.size(); i-- > trail_lim_[level];) {
    const std::uint32_t v = var_of(trail_[i]);
    polarity_[v] = (trail_[i] & 1u) != 0;
    assigns_[v] = 0;
    reason_[v] = kNoReason;
    if (heap_index_[v] < 0) heap_insert(v);
  }
  trail_.resize(trail_lim_[level]);
  qhead_ = trail_.size();
  trail_lim_.resize(level);
}

std::optional<CdclSolver::Lit> CdclSolver::pick_branch() {
  while (!heap_.empty()) {
    const std::uint32_t v = heap_pop();
    if (assigns_[v] == 0) return 2 * v + (polarity_[v] ? 1u : 0u);
  }
  return std::nullopt;
}

bool CdclSolver::locked(std::uint32_t c) const {
  const auto& cl = clauses_[c];
  return !cl.lits.empty() && reason_[var_of(cl.lits[0])] == c && value(cl.lits[0]) == 1;
}

void CdclSolver::reduce_learnts() {
  std::sort(learnts_.begin(), learnts_.end(), [this](std::uint32_t a, std::uint32_t b) {
    const auto& ca = clauses_[a];
    const auto& cb = clauses_[b];
    if (ca.lbd != cb.lbd) return ca.lbd > cb.lbd;
    return ca.activity < cb.activity;
  });
  const std::size_t half = learnts_.size() / 2;
  std::vector<std::uint32_t> keep;
  for (std::size_t i = 0; i < learnts_.size(); ++i) {
    auto& c = clauses_[learnts_[i]];
    if (i < half && c.lbd > 2 && c.lits.size() > 2 && !locked(learnts_[i])) {
      c.deleted = true;
      std::vector<Lit>().swap(c.lits);
    } else {
      keep.push_back(learnts_[i]);
    }
  }
  learnts_ = std::move(keep);
}

void CdclSolver::bump_var(std::uint32_t v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_index_[v] >= 0) heap_up(static_cast<std::size_t>(heap_index_[v]));
}

void CdclSolver::bump_clause(Clause& c) {
  c.activity += clause_inc_;
  if (c.activity > 1e20) {
    for (auto idx : learnts_) clauses_[idx].activity *= 1e-20;
    clause_inc_ *= 1e-20;
  }
}

void CdclSolver::heap_insert(std::uint32_t v) {
  heap_index_[v] = static_cast<std::int64_t>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

void CdclSolver::heap_up(std::size_t pos) {
  const std::uint32_t v = heap_[pos];
  while (pos > 0) {
    const std::size_t parent = (pos - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[pos] = heap_[parent];
    heap_index_[heap_[pos]] = static_cast<std::int64_t>(pos);
    pos = parent;
  }
  heap_[pos] = v;
  heap_index_[v] = static_cast<std::int64_t>(pos);
}

void CdclSolver::heap_down(std::size_t pos) {
  const std::uint32_t v = heap_[pos];
  for (;;) {
    std::size_t child = 2 * pos + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[pos] = heap_[child];
    heap_index_[heap_[pos]] = static_cast<std::int64_t>(pos);
    pos = child;
  }
  heap_[pos] = v;
  heap_index_[v] = static_cast<std::int64_t>(pos);
}

std::uint32_t CdclSolver::heap_pop() {
  const std::uint32_t top = heap_.front();
  heap_index_[top] = -1;
  const std::uint32_t last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_index_[last] = 0;
    heap_down(0);
  }
  return top;
}

double CdclSolver::luby(double y, std::uint64_t x) {
  std::uint64_t size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

Status CdclSolver::solve(const Limits& limits) {
  model_.clear();
  if (unsat_) return Status::Unsat;
  if (propagate() != kNoReason) {
    unsat_ = true;
    return Status::Unsat;
  }
  auto out_of_time = [&]() { return limits.deadline && std::chrono::steady_clock::now() >= *limits.deadline; };
  if (limits.deadline && out_of_time()) return Status::Unknown;

  double max_learnts = std::max<double>(static_cast<double>(clauses_.size()) / 3.0, 2000.0);
  const std::uint64_t start_conflicts = stats_.conflicts;
  std::vector<Lit> learnt;
  std::uint32_t ticks = 0;

  for (;;) {
    const double restart_budget = luby(2, stats_.restarts) * kRestartBase;
    std::uint64_t conflicts_here = 0;
    for (;;) {
      const std::uint32_t conflict = propagate();
      if (conflict != kNoReason) {
        ++stats_.conflicts;
        ++conflicts_here;
        if (decision_level() == 0) {
          unsat_ = true;
          return Status::Unsat;
        }
        std::uint32_t bt = 0;
        analyze(conflict, learnt, bt);
        backtrack(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          ++stamp_;
          level_stamp_.resize(trail_lim_.size() + 2, 0);
          std::uint32_t lbd = 0;
          for (Lit l : learnt) {
            const auto lv = level_[var_of(l)];
            if (lv >= level_stamp_.size()) level_stamp_.resize(lv + 1, 0);
            if (level_stamp_[lv] != stamp_) {
              level_stamp_[lv] = stamp_;
              ++lbd;
            }
          }
          const Lit asserting = learnt[0];
          const std::uint32_t c = attach(learnt, true, lbd);
          enqueue(asserting, c);
        }
        var_inc_ /= kVarDecay;
        clause_inc_ /= kClauseDecay;
        if (limits.max_conflicts && stats_.conflicts - start_conflicts >= limits.max_conflicts) {
          backtrack(0);
          return Status::Unknown;
        }
        if ((stats_.conflicts & 63u) == 0 && out_of_time()) {
          backtrack(0);
          return Status::Unknown;
        }
        continue;
      }
      if (static_cast<double>(conflicts_here) >= restart_budget) {
        backtrack(0);
        ++stats_.restarts;
        break;
      }
      if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >= max_learnts) {
        reduce_learnts();
        max_learnts *= 1.1;
      }
      if ((++ticks & 1023u) == 0 && out_of_time()) {
        backtrack(0);
        return Status::Unknown;
      }
      const auto next = pick_branch();
      if (!next) {
        model_.resize(assigns_.size());
        for (std::size_t v = 0; v < assigns_.size(); ++v) model_[v] = assigns_[v] == 1;
        backtrack(0);
        return Status::Sat;
      }
      ++stats_.decisions;
      trail_lim_.push_back(trail_.size());
      enqueue(*next, kNoReason);
    }
  }
}

}  // namespace nfasat::sat
