#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nfasat/sample.hpp"

namespace nfasat {

/// Families of Boolean variables used by the encodings.
enum class VarKind : std::uint8_t {
  Final,       // f_i
  Trans,       // delta(a, i, j)
  PrefPath,    // trp(w, i): a path for prefix w from state 1 to i
  SufPath,     // paths(w, i, j): a path for suffix w from i to j
  AuxAccept,   // aux_{w,i} <-> path(w,1,i) & f_i
  AuxPathD,    // direct model: aux_{w,j,d} <-> c_path d & f_j
  AuxPrefRec,  // aux_{v,a,j,i} <-> trp(v,j) & delta(a,j,i)
  AuxSufRec,   // aux_{v,a,i,k,j} <-> delta(a,i,k) & paths(v,k,j)
  AuxHyb,      // aux_{w,j,k} <-> trp(p,j) & paths(s,j,k) & f_k
};

inline constexpr std::size_t kVarKindCount = 9;

std::string_view to_string(VarKind kind);

/// Semantic name of a variable. States are 1-based, symbols are alphabet ids
/// and words are ids into the owning instance's WordPool.
struct VarName {
  VarKind kind = VarKind::Final;
  WordId word = 0;
  std::array<std::uint32_t, 4> args{};

  static VarName final_state(std::uint32_t i) { return {VarKind::Final, 0, {i, 0, 0, 0}}; }
  static VarName trans(Symbol a, std::uint32_t i, std::uint32_t j) { return {VarKind::Trans, 0, {id(a), i, j, 0}}; }
  static VarName pref_path(WordId w, std::uint32_t i) { return {VarKind::PrefPath, w, {i, 0, 0, 0}}; }
  static VarName suf_path(WordId w, std::uint32_t i, std::uint32_t j) { return {VarKind::SufPath, w, {i, j, 0, 0}}; }
  static VarName aux_accept(WordId w, std::uint32_t i) { return {VarKind::AuxAccept, w, {i, 0, 0, 0}}; }
  static VarName aux_path(WordId w, std::uint32_t j, std::uint32_t d) { return {VarKind::AuxPathD, w, {j, d, 0, 0}}; }
  static VarName aux_pref_rec(WordId v, Symbol a, std::uint32_t j, std::uint32_t i) {
    return {VarKind::AuxPrefRec, v, {id(a), j, i, 0}};
  }
  static VarName aux_suf_rec(WordId v, Symbol a, std::uint32_t i, std::uint32_t k, std::uint32_t j) {
    return {VarKind::AuxSufRec, v, {id(a), i, k, j}};
  }
  static VarName aux_hyb(WordId w, std::uint32_t j, std::uint32_t k) { return {VarKind::AuxHyb, w, {j, k, 0, 0}}; }

  friend bool operator==(const VarName&, const VarName&) = default;
};

struct VarNameHash {
  std::size_t operator()(const VarName& n) const;
};

/// DIMACS literal: +v or -v for variable v >= 1.
using Lit = int;

struct ClauseTagStats {
  std::uint64_t clauses = 0;
  std::uint64_t literals = 0;
  std::size_t max_arity = 0;
};

struct CnfLimits {
  /// Maximum total number of stored literals; 0 disables the check.
  std::uint64_t literal_budget = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// A CNF formula under construction together with the registry mapping
/// semantic variable names to dense solver indices 1..var_count().
///
/// Indices are handed out in first-use order, so building the same formula
/// twice yields byte-identical DIMACS.
class CnfInstance {
 public:
  using Tag = std::uint16_t;

  /// Returns the index of `name`, registering it if new.
  int fresh_var(const VarName& name);

  /// Registers a new variable that name_of() knows but find() does not.
  /// For families too large to index that are never looked up by name.
  int unindexed_var(const VarName& name);

  /// Makes `name` resolve to the variable of `existing` without creating a
  /// new one. Throws InvalidArgument if `existing` is unknown or `name` is
  /// already bound to a different variable.
  int alias_var(const VarName& name, const VarName& existing);

  std::optional<int> find(const VarName& name) const;
  /// Throws InvalidArgument when `name` is not registered.
  int index_of(const VarName& name) const;
  /// The name under which variable `index` was created.
  const VarName& name_of(int index) const;

  /// Adds a clause. Repeated literals are merged and tautologies dropped; an
  /// empty clause is kept and makes the instance trivially unsatisfiable.
  /// Throws InstanceTooLarge / GenerationTimeout when a limit is hit.
  void add_clause(std::span<const Lit> lits, Tag tag = 0);
  void add_clause(std::initializer_list<Lit> lits, Tag tag = 0) {
    add_clause(std::span<const Lit>(lits.begin(), lits.size()), tag);
  }

  /// Creates `count` unnamed variables (used when loading plain DIMACS).
  void add_anonymous_vars(int count);

  int var_count() const { return var_count_; }
  std::size_t clause_count() const { return offsets_.size(); }
  std::span<const Lit> clause(std::size_t i) const;
  std::uint64_t literal_count() const { return literals_.size(); }
  bool trivially_unsat() const { return trivially_unsat_; }
  std::size_t alias_count() const { return aliases_; }

  /// Number of clauses per arity.
  const std::map<std::size_t, std::uint64_t>& arity_histogram() const { return histogram_; }
  ClauseTagStats tag_stats(Tag tag) const;
  /// Number of (non-alias) variables of a kind.
  std::uint64_t var_count(VarKind kind) const { return kind_counts_[static_cast<std::size_t>(kind)]; }

  WordPool& words() { return words_; }
  const WordPool& words() const { return words_; }

  void set_limits(const CnfLimits& limits) { limits_ = limits; }

  /// Human-readable form of a variable, e.g. "trp(ab,2)".
  std::string describe(int index) const;

 private:
  void check_deadline();

  WordPool words_;
  std::unordered_map<VarName, int, VarNameHash> index_;
  std::vector<VarName> names_{VarName{}};
  std::vector<bool> named_{false};
  int var_count_ = 0;
  std::size_t aliases_ = 0;
  std::array<std::uint64_t, kVarKindCount> kind_counts_{};

  std::vector<Lit> literals_;
  std::vector<std::size_t> offsets_;
  std::map<std::size_t, std::uint64_t> histogram_;
  std::vector<ClauseTagStats> tags_;
  bool trivially_unsat_ = false;

  CnfLimits limits_;
  std::uint32_t since_clock_check_ = 0;
  std::vector<Lit> scratch_;
};

/// Writes `p cnf <vars> <clauses>` followed by one zero-terminated clause per
/// line, in insertion order. Throws Error if the stream fails.
void write_dimacs(const CnfInstance& cnf, std::ostream& out);
std::string to_dimacs(const CnfInstance& cnf);

/// Reads DIMACS CNF into an instance of anonymous variables.
CnfInstance read_dimacs(std::istream& in);
CnfInstance read_dimacs(std::string_view text);

/// JSON sidecar {vars, clauses, arity_histogram, generation_seconds}.
std::string stats_json(const CnfInstance& cnf, double generation_seconds);

}  // namespace nfasat
