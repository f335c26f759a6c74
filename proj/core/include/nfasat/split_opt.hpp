#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "nfasat/rng.hpp"
#include "nfasat/sample.hpp"

namespace nfasat {

/// |Pref(S_p)| + k * |Suf(S_s)| for the split given by `cuts`. Empty parts
/// are not counted. Throws InvalidArgument for invalid cuts.
std::uint64_t fitness(const Sample& sample, unsigned k, const SplitAssignment& cuts);

/// Incremental fitness of one split assignment over a fixed sample.
class SplitEvaluator {
 public:
  SplitEvaluator(const Sample& sample, unsigned k);

  std::size_t word_count() const { return index_.word_count(); }
  std::size_t length(std::size_t word) const { return index_.length(word); }

  /// Installs a whole assignment and returns its fitness.
  std::uint64_t assign(const SplitAssignment& cuts);
  std::uint64_t value() const { return value_; }
  const SplitAssignment& cuts() const { return cuts_; }

  /// Fitness after changing the cut of `word` to each of 0..|w|, all other
  /// cuts unchanged.
  std::vector<std::uint64_t> recut_values(std::size_t word);
  void recut(std::size_t word, std::uint32_t cut);

  /// Fitness of an arbitrary assignment; does not change the installed one.
  std::uint64_t evaluate(const SplitAssignment& cuts);

 private:
  void add(std::size_t word, std::uint32_t cut, int delta);

  AffixIndex index_;
  unsigned k_;
  std::vector<std::uint32_t> prefix_refs_;
  std::vector<std::uint32_t> suffix_refs_;
  SplitAssignment cuts_;
  std::uint64_t value_ = 0;
  std::vector<std::uint32_t> prefix_stamp_;
  std::vector<std::uint32_t> suffix_stamp_;
  std::uint32_t stamp_ = 0;
};

/// Roulette weights: share_fixed / m + share_length * |w| / sum |w_i| over
/// the m splittable words.
struct WeightShares {
  double fixed = 0.75;
  double length = 0.25;
};

/// One weight per splittable word, in Sample::splittable_words() order.
/// Throws InvalidArgument when the sample has no non-empty word or the
/// shares are negative or do not sum to 1.
std::vector<double> word_weights(const Sample& sample, const WeightShares& shares = {});

struct IlsParams {
  std::uint64_t max_iter = 10'000;
  std::uint64_t max_iter_without_improv = 100;
  std::uint64_t seed = 1;
  WeightShares shares;

  /// Throws InvalidArgument unless both iteration limits are positive.
  void validate() const;
};

struct GaParams {
  std::uint32_t population_size = 100;
  std::uint64_t max_gen = 3'000;
  std::uint64_t max_gen_without_improv = 100;
  double p_mut = 0.05;
  double p_parents = 0.03;
  std::uint64_t seed = 1;

  /// Throws InvalidArgument unless population_size >= 2, 0 <= p_mut < 1,
  /// 0 < p_parents < 1 and both generation limits are positive.
  void validate() const;
  /// ceil(p_parents * population_size), at least 2.
  std::uint32_t parent_count() const;
};

struct TracePoint {
  std::uint64_t step = 0;  // 0 is the initial assignment/population
  std::uint64_t best_fitness = 0;
  double elapsed_seconds = 0.0;
};

struct OptimizeResult {
  SplitAssignment cuts;
  std::uint64_t best_fitness = 0;
  /// Fitness of the random starting point (the best initial individual for
  /// the GA).
  std::uint64_t initial_fitness = 0;
  std::vector<TracePoint> trace;
  /// GA only: the population after the last generation.
  std::vector<SplitAssignment> population;
};

/// Called after each local-search step with the re-cut word and the current
/// assignment.
using IlsObserver = std::function<void(std::size_t word, const SplitAssignment& current)>;

OptimizeResult ils_optimize(const Sample& sample, unsigned k, const IlsParams& params,
                            const IlsObserver& observer = {});

/// `initial` replaces the random initial population when non-empty; it must
/// hold population_size valid assignments.
OptimizeResult ga_optimize(const Sample& sample, unsigned k, const GaParams& params,
                           const std::vector<SplitAssignment>& initial = {});

/// Uniformly random cut in 0..|w| per splittable word.
SplitAssignment random_cuts(const Sample& sample, Rng& rng);

/// CSV with header `step,best_fitness,elapsed_seconds`.
void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace);

}  // namespace nfasat
