#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nfasat/sample.hpp"

namespace nfasat {

struct Transition {
  std::uint32_t from;
  Symbol symbol;
  std::uint32_t to;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Nondeterministic finite automaton with states 1..k and initial state 1.
class Nfa {
 public:
  Nfa(std::uint32_t states, std::size_t alphabet_size);

  std::uint32_t state_count() const { return k_; }
  std::size_t alphabet_size() const { return n_; }

  void add_transition(std::uint32_t from, Symbol a, std::uint32_t to);
  bool has_transition(std::uint32_t from, Symbol a, std::uint32_t to) const;
  void set_final(std::uint32_t q, bool final = true);
  bool is_final(std::uint32_t q) const;

  /// Sorted by (from, symbol, to).
  std::vector<Transition> transitions() const;
  std::vector<std::uint32_t> finals() const;

  /// States reachable from state 1 by reading `w` (subset propagation).
  std::vector<bool> reach(const Word& w) const;

  friend bool operator==(const Nfa&, const Nfa&) = default;

 private:
  std::size_t slot(std::uint32_t from, Symbol a, std::uint32_t to) const;
  void check_state(std::uint32_t q) const;

  std::uint32_t k_;
  std::size_t n_;
  std::vector<bool> delta_;
  std::vector<bool> final_;
};

/// True iff some run from state 1 on `w` ends in a final state.
bool accepts(const Nfa& nfa, const Word& w);

struct Counterexample {
  Word word;
  bool positive;  // the label the word carries in the sample
};

struct VerifyReport {
  bool ok = true;
  std::vector<Counterexample> counterexamples;
};

VerifyReport verify(const Nfa& nfa, const Sample& sample);

struct OracleResult {
  bool exists = false;
  std::optional<Nfa> witness;
};

/// Largest n*k^2 + k the exhaustive oracle accepts.
inline constexpr std::size_t kOracleMaxBits = 26;

/// Exhaustive search over every transition relation and final-state set,
/// returning the first consistent NFA in a fixed order (transition bitmask
/// ascending, then final-state bitmask ascending). Throws InvalidArgument
/// when n*k^2 + k exceeds kOracleMaxBits.
OracleResult oracle_exists(const Sample& sample, std::uint32_t k);

/// {"k":..,"n":..,"finals":[..],"transitions":[[i,"a",j],..]}
std::string to_json(const Nfa& nfa);
Nfa nfa_from_json(std::string_view text);
std::string to_dot(const Nfa& nfa);

}  // namespace nfasat
