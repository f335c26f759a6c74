#include "nfasat/split_opt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>

#include "nfasat/error.hpp"
#include "nfasat/rng.hpp"

namespace nfasat {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

SplitEvaluator::SplitEvaluator(const Sample& sample, unsigned k)
    : index_(sample),
      k_(k),
      prefix_refs_(index_.prefix_node_count(), 0),
      suffix_refs_(index_.suffix_node_count(), 0),
      prefix_stamp_(index_.prefix_node_count(), 0),
      suffix_stamp_(index_.suffix_node_count(), 0) {
  if (k == 0) throw InvalidArgument("number of states k must be at least 1");
  cuts_.cuts.resize(index_.word_count());
  for (std::size_t w = 0; w < index_.word_count(); ++w) {
    cuts_.cuts[w] = static_cast<std::uint32_t>(index_.length(w));
    add(w, cuts_.cuts[w], +1);
  }
}

void SplitEvaluator::add(std::size_t word, std::uint32_t cut, int delta) {
  const auto pre = index_.prefix_nodes(word).first(cut);
  const auto suf = index_.suffix_nodes(word).first(index_.length(word) - cut);
  for (auto node : pre) {
    if (delta > 0) {
      if (prefix_refs_[node]++ == 0) value_ += 1;
    } else if (--prefix_refs_[node] == 0) {
      value_ -= 1;
    }
  }
  for (auto node : suf) {
    if (delta > 0) {
      if (suffix_refs_[node]++ == 0) value_ += k_;
    } else if (--suffix_refs_[node] == 0) {
      value_ -= k_;
    }
  }
}

std::uint64_t SplitEvaluator::assign(const SplitAssignment& cuts) {
  if (cuts.cuts.size() != word_count()) throw InvalidArgument("cut count does not match the sample");
  for (std::size_t w = 0; w < word_count(); ++w)
    if (cuts.cuts[w] > length(w)) throw InvalidArgument("cut out of range");
  for (std::size_t w = 0; w < word_count(); ++w) {
    add(w, cuts_.cuts[w], -1);
    cuts_.cuts[w] = cuts.cuts[w];
    add(w, cuts_.cuts[w], +1);
  }
  return value_;
}

std::vector<std::uint64_t> SplitEvaluator::recut_values(std::size_t word) {
  const std::size_t len = length(word);
  add(word, cuts_.cuts[word], -1);
  const std::uint64_t base = value_;
  const auto pre = index_.prefix_nodes(word);
  const auto suf = index_.suffix_nodes(word);
  // new_prefix[c]: prefixes of length <= c not already present; likewise for
  // suffixes of length <= m.
  std::vector<std::uint64_t> new_prefix(len + 1, 0), new_suffix(len + 1, 0);
  for (std::size_t i = 0; i < len; ++i) {
    new_prefix[i + 1] = new_prefix[i] + (prefix_refs_[pre[i]] == 0 ? 1 : 0);
    new_suffix[i + 1] = new_suffix[i] + (suffix_refs_[suf[i]] == 0 ? 1 : 0);
  }
  std::vector<std::uint64_t> out(len + 1);
  for (std::size_t c = 0; c <= len; ++c) out[c] = base + new_prefix[c] + k_ * new_suffix[len - c];
  add(word, cuts_.cuts[word], +1);
  return out;
}

void SplitEvaluator::recut(std::size_t word, std::uint32_t cut) {
  if (cut > length(word)) throw InvalidArgument("cut out of range");
  add(word, cuts_.cuts[word], -1);
  cuts_.cuts[word] = cut;
  add(word, cut, +1);
}

std::uint64_t SplitEvaluator::evaluate(const SplitAssignment& cuts) {
  if (cuts.cuts.size() != word_count()) throw InvalidArgument("cut count does not match the sample");
  if (++stamp_ == 0) {
    std::fill(prefix_stamp_.begin(), prefix_stamp_.end(), 0);
    std::fill(suffix_stamp_.begin(), suffix_stamp_.end(), 0);
    stamp_ = 1;
  }
  std::uint64_t total = 0;
  for (std::size_t w = 0; w < word_count(); ++w) {
    const std::uint32_t cut = cuts.cuts[w];
    if (cut > length(w)) throw InvalidArgument("cut out of range");
    for (auto node : index_.prefix_nodes(w).first(cut))
      if (prefix_stamp_[node] != stamp_) {
        prefix_stamp_[node] = stamp_;
        total += 1;
      }
    for (auto node : index_.suffix_nodes(w).first(length(w) - cut))
      if (suffix_stamp_[node] != stamp_) {
        suffix_stamp_[node] = stamp_;
        total += k_;
      }
  }
  return total;
}

std::uint64_t fitness(const Sample& sample, unsigned k, const SplitAssignment& cuts) {
  validate_cuts(sample, cuts);
  SplitEvaluator eval(sample, k);
  return eval.evaluate(cuts);
}

std::vector<double> word_weights(const Sample& sample, const WeightShares& shares) {
  const auto& words = sample.splittable_words();
  if (words.empty()) throw InvalidArgument("word weights need at least one non-empty word");
  if (shares.fixed < 0 || shares.length < 0 || std::abs(shares.fixed + shares.length - 1.0) > 1e-9)
    throw InvalidArgument("weight shares must be non-negative and sum to 1");
  double total = 0;
  for (const auto& w : words) total += static_cast<double>(w.size());
  std::vector<double> out;
  out.reserve(words.size());
  const double m = static_cast<double>(words.size());
  for (const auto& w : words) out.push_back(shares.fixed / m + shares.length * static_cast<double>(w.size()) / total);
  return out;
}

void IlsParams::validate() const {
  if (max_iter == 0) throw InvalidArgument("max_iter must be positive");
  if (max_iter_without_improv == 0) throw InvalidArgument("max_iter_without_improv must be positive");
}

void GaParams::validate() const {
  if (population_size < 2) throw InvalidArgument("population size must be at least 2");
  if (!(p_mut >= 0 && p_mut < 1)) throw InvalidArgument("p_mut must lie in [0, 1)");
  if (!(p_parents > 0 && p_parents < 1)) throw InvalidArgument("p_parents must lie in (0, 1)");
  if (max_gen == 0) throw InvalidArgument("max_gen must be positive");
  if (max_gen_without_improv == 0) throw InvalidArgument("max_gen_without_improv must be positive");
}

std::uint32_t GaParams::parent_count() const {
  const auto p = static_cast<std::uint32_t>(std::ceil(p_parents * population_size - 1e-9));
  return std::min(population_size, std::max<std::uint32_t>(2, p));
}

SplitAssignment random_cuts(const Sample& sample, Rng& rng) {
  SplitAssignment out;
  out.cuts.reserve(sample.splittable_words().size());
  for (const auto& w : sample.splittable_words()) out.cuts.push_back(static_cast<std::uint32_t>(rng.below(w.size() + 1)));
  return out;
}

OptimizeResult ils_optimize(const Sample& sample, unsigned k, const IlsParams& params, const IlsObserver& observer) {
  params.validate();
  const auto start = Clock::now();
  Rng rng(params.seed);
  SplitEvaluator eval(sample, k);
  OptimizeResult result;
  result.initial_fitness = eval.assign(random_cuts(sample, rng));
  result.best_fitness = result.initial_fitness;
  result.cuts = eval.cuts();
  result.trace.push_back({0, result.best_fitness, seconds_since(start)});
  if (eval.word_count() == 0) return result;

  const auto weights = word_weights(sample, params.shares);
  std::vector<double> cumulative(weights.size());
  std::partial_sum(weights.begin(), weights.end(), cumulative.begin());

  std::uint64_t stagnant = 0;
  for (std::uint64_t it = 1; it <= params.max_iter && stagnant < params.max_iter_without_improv; ++it) {
    const double u = rng.unit() * cumulative.back();
    const auto pos = std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
    const std::size_t word = std::min<std::size_t>(static_cast<std::size_t>(pos), cumulative.size() - 1);

    const auto values = eval.recut_values(word);
    const auto best = std::min_element(values.begin(), values.end()) - values.begin();
    eval.recut(word, static_cast<std::uint32_t>(best));
    if (observer) observer(word, eval.cuts());

    if (eval.value() < result.best_fitness) {
      result.best_fitness = eval.value();
      result.cuts = eval.cuts();
      stagnant = 0;
    } else {
      ++stagnant;
    }
    result.trace.push_back({it, result.best_fitness, seconds_since(start)});
  }
  return result;
}

OptimizeResult ga_optimize(const Sample& sample, unsigned k, const GaParams& params,
                           const std::vector<SplitAssignment>& initial) {
  params.validate();
  const auto start = Clock::now();
  Rng rng(params.seed);
  SplitEvaluator eval(sample, k);
  const std::size_t size = params.population_size;
  const std::size_t words = eval.word_count();

  struct Individual {
    SplitAssignment cuts;
    std::uint64_t fitness = 0;
  };
  std::vector<Individual> population(size);
  if (!initial.empty()) {
    if (initial.size() != size) throw InvalidArgument("initial population size does not match population_size");
    for (std::size_t i = 0; i < size; ++i) {
      validate_cuts(sample, initial[i]);
      population[i].cuts = initial[i];
    }
  } else {
    for (auto& ind : population) ind.cuts = random_cuts(sample, rng);
  }
  for (auto& ind : population) ind.fitness = eval.evaluate(ind.cuts);

  auto ranked = [](const Individual& a, const Individual& b) {
    if (a.fitness != b.fitness) return a.fitness < b.fitness;
    return a.cuts < b.cuts;
  };

  OptimizeResult result;
  {
    const auto& best = *std::min_element(population.begin(), population.end(), ranked);
    result.initial_fitness = best.fitness;
    result.best_fitness = best.fitness;
    result.cuts = best.cuts;
  }
  result.trace.push_back({0, result.best_fitness, seconds_since(start)});

  const std::size_t parents = params.parent_count();
  std::uint64_t stagnant = 0;
  for (std::uint64_t gen = 1; gen <= params.max_gen && stagnant < params.max_gen_without_improv; ++gen) {
    std::sort(population.begin(), population.end(), ranked);
    for (std::size_t c = parents; c < size; ++c) {
      const std::size_t a = rng.below(parents);
      std::size_t b = rng.below(parents - 1);
      if (b >= a) ++b;
      auto& child = population[c].cuts;
      for (std::size_t w = 0; w < words; ++w)
        child.cuts[w] = (rng.next() >> 63) ? population[a].cuts.cuts[w] : population[b].cuts.cuts[w];
    }
    if (params.p_mut > 0)
      for (auto& ind : population)
        for (std::size_t w = 0; w < words; ++w)
          if (rng.chance(params.p_mut)) ind.cuts.cuts[w] = static_cast<std::uint32_t>(rng.below(eval.length(w) + 1));

    bool improved = false;
    for (auto& ind : population) {
      ind.fitness = eval.evaluate(ind.cuts);
      if (ind.fitness < result.best_fitness) {
        result.best_fitness = ind.fitness;
        result.cuts = ind.cuts;
        improved = true;
      }
    }
    stagnant = improved ? 0 : stagnant + 1;
    result.trace.push_back({gen, result.best_fitness, seconds_since(start)});
  }
  result.population.reserve(size);
  for (auto& ind : population) result.population.push_back(std::move(ind.cuts));
  return result;
}

void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace) {
  out << "step,best_fitness,elapsed_seconds\n";
  for (const auto& p : trace) out << p.step << ',' << p.best_fitness << ',' << p.elapsed_seconds << '\n';
}

}  // namespace nfasat
