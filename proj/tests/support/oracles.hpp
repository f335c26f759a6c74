#pragma once

// Reference implementations used only by the tests. Each one recomputes a
// quantity from its definition, without going through the code under test.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "nfasat/cnf.hpp"
#include "nfasat/nfa.hpp"
#include "nfasat/rng.hpp"
#include "nfasat/sample.hpp"

namespace nfasat::testing {

/// Depth-first search over explicit state sequences.
bool dfs_accepts(const Nfa& nfa, const Word& w);

/// True iff some run on `w` leads from state `from` to state `to`.
bool has_path(const Nfa& nfa, const Word& w, std::uint32_t from, std::uint32_t to);

/// The value every registered variable must take when F and delta are fixed
/// to `nfa`: each auxiliary is evaluated from its defining conjunction.
/// `cuts` maps each split word to its cut (hybrid instances only).
std::vector<bool> semantic_assignment(const CnfInstance& cnf, const Nfa& nfa,
                                      const std::map<Word, std::uint32_t, ShortLex>& cuts = {});

bool satisfies(const CnfInstance& cnf, const std::vector<bool>& assignment);

/// Satisfiability by enumerating every assignment (var_count <= 24).
std::optional<std::vector<bool>> brute_force_sat(const CnfInstance& cnf);

/// |Pref(S_p)| + k |Suf(S_s)| from explicit word sets.
std::uint64_t set_fitness(const Sample& sample, unsigned k, const SplitAssignment& cuts);

Word random_word(Rng& rng, std::size_t n, std::size_t max_len);
Sample random_sample(Rng& rng, std::size_t n, std::size_t max_words, std::size_t max_len);
Nfa random_nfa(Rng& rng, std::uint32_t k, std::size_t n, double density = 0.35);
SplitAssignment random_split(Rng& rng, const Sample& sample);

std::map<Word, std::uint32_t, ShortLex> cut_map(const Sample& sample, const SplitAssignment& cuts);

Sample make_sample(std::size_t n, std::initializer_list<const char*> pos, std::initializer_list<const char*> neg);

}  // namespace nfasat::testing
