#include <benchmark/benchmark.h>

#include "commands.hpp"
#include "nfasat/split_opt.hpp"

namespace {

using namespace nfasat;

Sample corpus(std::size_t words) { return cli::random_sample(cli::RandomSampleParams{2, words, 12, 0.5, 7}); }

void BM_Fitness(benchmark::State& state) {
  const Sample s = corpus(static_cast<std::size_t>(state.range(0)));
  Rng rng(1);
  const SplitAssignment cuts = random_cuts(s, rng);
  for (auto _ : state) benchmark::DoNotOptimize(fitness(s, 4, cuts));
}
BENCHMARK(BM_Fitness)->Arg(50)->Arg(500);

void BM_RecutValues(benchmark::State& state) {
  const Sample s = corpus(static_cast<std::size_t>(state.range(0)));
  Rng rng(1);
  SplitEvaluator eval(s, 4);
  eval.assign(random_cuts(s, rng));
  std::size_t word = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval.recut_values(word));
    word = (word + 1) % eval.word_count();
  }
}
BENCHMARK(BM_RecutValues)->Arg(50)->Arg(500);

void BM_Ils(benchmark::State& state) {
  const Sample s = corpus(static_cast<std::size_t>(state.range(0)));
  IlsParams p;
  for (auto _ : state) {
    const OptimizeResult r = ils_optimize(s, 4, p);
    state.counters["fitness"] = static_cast<double>(r.best_fitness);
    ++p.seed;
  }
}
BENCHMARK(BM_Ils)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Ga(benchmark::State& state) {
  const Sample s = corpus(50);
  GaParams p;
  p.max_gen = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    const OptimizeResult r = ga_optimize(s, 4, p);
    state.counters["fitness"] = static_cast<double>(r.best_fitness);
    ++p.seed;
  }
}
BENCHMARK(BM_Ga)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
