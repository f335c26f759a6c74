#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nfasat/cnf.hpp"
#include "nfasat/encoders.hpp"
#include "nfasat/nfa.hpp"
#include "nfasat/sample.hpp"
#include "nfasat/solver.hpp"
#include "nfasat/split_opt.hpp"

namespace nfasat::cli {

enum class CutsSource { Prefix, Suffix, Ils, Ga, File };

struct CutsSpec {
  CutsSource source = CutsSource::Ils;
  std::filesystem::path file;

  /// prefix | suffix | ils | ga | file:<path>
  static CutsSpec parse(std::string_view text);
  std::string label() const;
};

struct PipelineOptions {
  ModelKind model = ModelKind::Prefix;
  unsigned k = 2;
  CutsSpec cuts;
  std::uint64_t seed = 1;
  IlsParams ils;
  GaParams ga;
  /// Applies to generation and to solving separately.
  double timeout_seconds = 600;
  std::uint64_t literal_budget = 50'000'000;
  /// Shell command template; the embedded solver is used when empty.
  std::string solver_command;
  std::string decisions_pattern = ExternalSolver{}.decisions_pattern;

  bool stochastic() const {
    return model == ModelKind::Hybrid && (cuts.source == CutsSource::Ils || cuts.source == CutsSource::Ga);
  }
  /// "pm", "hm-ils", ...
  std::string model_label() const;
};

/// Outcome of one pipeline run. Status is SAT, UNSAT, UNKNOWN, TOO_LARGE or
/// GEN_TIMEOUT; the last two mean no instance was produced.
struct RunReport {
  std::string instance;
  std::string model;
  unsigned k = 0;
  std::uint64_t vars = 0;
  std::uint64_t clauses = 0;
  double t_m = 0;
  std::string status;
  std::optional<std::uint64_t> decisions;
  double t_s = 0;
  double t_t = 0;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> fitness;

  bool generated() const { return status != "TOO_LARGE" && status != "GEN_TIMEOUT"; }
  bool completed() const { return status == "SAT" || status == "UNSAT"; }
};

std::string to_json(const RunReport& report, bool include_timing = true);

struct Generated {
  std::optional<CnfInstance> cnf;  // empty when generation failed
  RunReport report;
  std::optional<SplitAssignment> cuts;
  std::optional<OptimizeResult> optimization;
};

/// Optimizes the split when needed and encodes. Budget and time-limit
/// failures are reported in the status instead of thrown.
Generated generate(const Sample& sample, const std::string& instance, const PipelineOptions& options);

SolveOutcome solve(const CnfInstance& cnf, const PipelineOptions& options);

struct Inference {
  RunReport report;
  std::optional<Nfa> nfa;
};

/// generate -> solve -> decode -> verify. Throws Error when a decoded NFA
/// fails verification.
Inference infer(const Sample& sample, const std::string& instance, const PipelineOptions& options);

/// Writes DIMACS to `out` and the stats sidecar to `<out>.stats.json`.
RunReport cmd_generate(const std::filesystem::path& sample_path, const PipelineOptions& options,
                       const std::filesystem::path& out);

RunReport cmd_solve(const std::filesystem::path& cnf_path, const PipelineOptions& options);

/// Optimizes the split only; returns the result and writes the cuts file
/// and, when requested, the trace CSV.
OptimizeResult cmd_optimize(const std::filesystem::path& sample_path, const PipelineOptions& options,
                            const std::filesystem::path& cuts_out,
                            const std::optional<std::filesystem::path>& trace_out);

struct BenchOptions {
  std::filesystem::path sample_dir;
  /// Entries like "pm" or "hm:ils".
  std::vector<std::string> models;
  unsigned k = 2;
  /// Per-instance overrides from a `<instance> <k>` file.
  std::optional<std::filesystem::path> k_map;
  unsigned runs = 30;
  PipelineOptions base;
};

/// Mean of the runs of one model on one instance.
struct BenchRow {
  std::string instance;
  unsigned k = 0;
  std::string model;
  unsigned runs = 0;
  unsigned completed = 0;
  double vars = 0;
  double clauses = 0;
  double t_m = 0;
  std::string status;
  std::optional<double> decisions;
  double t_s = 0;
  double t_t = 0;
  std::optional<double> fitness;
};

struct BenchResult {
  std::vector<BenchRow> rows;        // instance-major, models in the given order
  std::vector<BenchRow> cumulative;  // one per model
  /// Spearman correlation of fitness with hybrid variable counts.
  std::optional<double> fitness_var_correlation;
};

BenchResult run_bench(const BenchOptions& options, std::ostream* log = nullptr);
void write_bench_csv(std::ostream& out, const BenchResult& result);

/// Cumulative rows: sums over instances where a failed generation costs
/// `credit_seconds` of t_M and an unsolved instance costs the largest t_S /
/// decisions any other model needed on it (the timeout if none solved it).
std::vector<BenchRow> cumulative_rows(const std::vector<BenchRow>& rows, const std::vector<std::string>& models,
                                      double credit_seconds, double timeout_seconds);

/// Spearman rank correlation with average ranks for ties; nullopt when
/// either side is constant or fewer than two points are given.
std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y);

struct RandomSampleParams {
  std::size_t alphabet_size = 2;
  std::size_t word_count = 20;
  std::size_t max_length = 8;
  double positive_fraction = 0.5;
  std::uint64_t seed = 1;
};

/// Distinct random words, each of uniformly drawn length 0..max_length;
/// round(positive_fraction * count) of them positive. word_count is clamped
/// to the number of words that exist.
Sample random_sample(const RandomSampleParams& params);

}  // namespace nfasat::cli
