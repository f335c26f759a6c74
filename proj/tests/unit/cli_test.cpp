#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "commands.hpp"
#include "nfasat/error.hpp"
#include "oracles.hpp"

namespace nfasat::cli {
namespace {

namespace fs = std::filesystem;
using nfasat::testing::make_sample;

class TempDir {
 public:
  TempDir() {
    std::string pattern = (fs::temp_directory_path() / "nfasat-test-XXXXXX").string();
    if (!mkdtemp(pattern.data())) throw std::runtime_error("mkdtemp failed");
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  fs::path operator/(const std::string& name) const { return path_ / name; }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

int run_cli(const std::string& args) {
  const int status = std::system((std::string(NFASAT_CLI_BIN) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

PipelineOptions quick(ModelKind model, unsigned k) {
  PipelineOptions o;
  o.model = model;
  o.k = k;
  o.timeout_seconds = 60;
  o.ils.max_iter = 200;
  o.ga.population_size = 10;
  o.ga.max_gen = 20;
  return o;
}

TEST(Cli, CutsSpecParsing) {
  EXPECT_EQ(CutsSpec::parse("ga").source, CutsSource::Ga);
  const CutsSpec f = CutsSpec::parse("file:cuts.txt");
  EXPECT_EQ(f.source, CutsSource::File);
  EXPECT_EQ(f.file, fs::path("cuts.txt"));
  EXPECT_THROW(CutsSpec::parse("random"), InvalidArgument);
  EXPECT_THROW(CutsSpec::parse("file:"), InvalidArgument);
  PipelineOptions o;
  o.model = ModelKind::Hybrid;
  o.cuts = CutsSpec::parse("ils");
  EXPECT_EQ(o.model_label(), "hm-ils");
  EXPECT_TRUE(o.stochastic());
  o.cuts = CutsSpec::parse("prefix");
  EXPECT_FALSE(o.stochastic());
}

TEST(Cli, GenerateWritesDimacsAndMatchingStats) {
  TempDir dir;
  write_file(dir / "s.txt", "n=2\nab+\nb-\nabb+\n");
  const RunReport r = cmd_generate(dir / "s.txt", quick(ModelKind::Prefix, 2), dir / "s.cnf");
  EXPECT_EQ(r.status, "GENERATED");
  const std::string dimacs = slurp(dir / "s.cnf");
  std::istringstream header(dimacs);
  std::string p, cnf;
  std::uint64_t vars = 0, clauses = 0;
  header >> p >> cnf >> vars >> clauses;
  const auto stats = nlohmann::json::parse(slurp(dir / "s.cnf.stats.json"));
  EXPECT_EQ(stats["vars"].get<std::uint64_t>(), vars);
  EXPECT_EQ(stats["clauses"].get<std::uint64_t>(), clauses);
  EXPECT_EQ(r.vars, vars);
  EXPECT_EQ(r.clauses, clauses);
}

TEST(Cli, HybridGenerationIsDeterministic) {
  TempDir dir;
  write_file(dir / "s.txt", to_string(random_sample(RandomSampleParams{2, 25, 7, 0.5, 4})));
  for (const char* cuts : {"ils", "ga"}) {
    PipelineOptions o = quick(ModelKind::Hybrid, 3);
    o.cuts = CutsSpec::parse(cuts);
    o.seed = 17;
    const RunReport a = cmd_generate(dir / "s.txt", o, dir / "a.cnf");
    const RunReport b = cmd_generate(dir / "s.txt", o, dir / "b.cnf");
    EXPECT_EQ(slurp(dir / "a.cnf"), slurp(dir / "b.cnf"));
    EXPECT_EQ(to_json(a, false), to_json(b, false));
    EXPECT_TRUE(a.fitness.has_value());
  }
}

TEST(Cli, DirectModelHitsTheLiteralBudget) {
  TempDir dir;
  write_file(dir / "long.txt", "n=2\n" + std::string(30, 'a') + "+\n");
  EXPECT_THROW(cmd_generate(dir / "long.txt", quick(ModelKind::Direct, 5), dir / "x.cnf"), InstanceTooLarge);
  const Generated g = generate(load_sample(dir / "long.txt"), "long", quick(ModelKind::Direct, 5));
  EXPECT_EQ(g.report.status, "TOO_LARGE");
  EXPECT_FALSE(g.cnf);
}

TEST(Cli, SolveReports) {
  TempDir dir;
  write_file(dir / "sat.cnf", "p cnf 1 1\n1 0\n");
  write_file(dir / "unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n");
  PipelineOptions o;
  EXPECT_EQ(cmd_solve(dir / "sat.cnf", o).status, "SAT");
  EXPECT_EQ(cmd_solve(dir / "unsat.cnf", o).status, "UNSAT");
  o.solver_command = std::string(NFASAT_CDCL_BIN) + " {input}";
  EXPECT_EQ(cmd_solve(dir / "unsat.cnf", o).status, "UNSAT");
  o.timeout_seconds = 0;
  EXPECT_EQ(cmd_solve(dir / "sat.cnf", o).status, "UNKNOWN");
  EXPECT_EQ(cmd_solve(dir / "sat.cnf", o).model, "dimacs");
}

TEST(Cli, InferExamples) {
  const Sample ab = make_sample(2, {"a"}, {"b"});
  const Sample lambda = make_sample(1, {""}, {});
  for (const char* spec : {"dm", "pm", "sm", "hm:prefix", "hm:suffix", "hm:ils", "hm:ga"}) {
    PipelineOptions o = quick(parse_model_kind(std::string(spec).substr(0, 2)), 1);
    if (o.model == ModelKind::Hybrid) o.cuts = CutsSpec::parse(std::string(spec).substr(3));
    const Inference r = infer(ab, "ab", o);
    ASSERT_EQ(r.report.status, "SAT") << spec;
    EXPECT_TRUE(verify(*r.nfa, ab).ok);
    EXPECT_NEAR(r.report.t_t, r.report.t_m + r.report.t_s, 1e-6);
    // A single final state that loops on a accepts every a^n.
    const Sample contradiction = make_sample(1, {"", "aa"}, {"a"});
    EXPECT_EQ(infer(contradiction, "c", o).report.status, "UNSAT") << spec;
    EXPECT_EQ(infer(lambda, "l", o).report.status, "SAT") << spec;
  }
}

TEST(Cli, InferMatchesOracleAcrossK) {
  Rng rng(31);
  for (int i = 0; i < 12; ++i) {
    const Sample s = nfasat::testing::random_sample(rng, 2, 6, 4);
    for (unsigned k = 1; k <= 2; ++k) {
      const bool expected = oracle_exists(s, k).exists;
      for (ModelKind m : {ModelKind::Prefix, ModelKind::Suffix, ModelKind::Hybrid}) {
        PipelineOptions o = quick(m, k);
        o.seed = static_cast<std::uint64_t>(i);
        EXPECT_EQ(infer(s, "r", o).report.status, expected ? "SAT" : "UNSAT");
      }
    }
  }
}

TEST(Cli, RandomSampleExamples) {
  const RandomSampleParams p{3, 40, 6, 0.5, 9};
  EXPECT_EQ(to_string(random_sample(p)), to_string(random_sample(p)));
  const Sample s = random_sample(p);
  EXPECT_EQ(s.positives().size(), 20u);
  EXPECT_EQ(s.negatives().size(), 20u);
  EXPECT_TRUE(random_sample(RandomSampleParams{2, 10, 5, 1.0, 1}).negatives().empty());
  const Sample only_lambda = random_sample(RandomSampleParams{2, 5, 0, 0.5, 1});
  EXPECT_EQ(only_lambda.positives().size() + only_lambda.negatives().size(), 1u);
  EXPECT_THROW(random_sample(RandomSampleParams{0, 5, 2, 0.5, 1}), InvalidArgument);
  EXPECT_THROW(random_sample(RandomSampleParams{2, 5, 2, 1.5, 1}), InvalidArgument);
}

TEST(Cli, Spearman) {
  EXPECT_NEAR(*spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0, 1e-12);
  EXPECT_NEAR(*spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0, 1e-12);
  // Ranks with ties: x = (1, 2.5, 2.5, 4), y = (1, 2, 3, 4).
  const double mx = 2.5;
  const double num = (1 - mx) * (1 - 2.5) + 0 + 0 + (4 - mx) * (4 - 2.5);
  const double den = std::sqrt(((1 - mx) * (1 - mx) + (4 - mx) * (4 - mx)) * 5.0);
  EXPECT_NEAR(*spearman({1, 2, 2, 3}, {1, 2, 3, 4}), num / den, 1e-12);
  EXPECT_FALSE(spearman({1, 1, 1}, {1, 2, 3}));
  EXPECT_FALSE(spearman({1}, {1}));
}

BenchRow row(const std::string& instance, const std::string& model, const std::string& status, double t_m, double t_s,
             std::optional<double> decisions) {
  BenchRow r;
  r.instance = instance;
  r.model = model;
  r.runs = 1;
  r.status = status;
  r.completed = status == "SAT" || status == "UNSAT";
  r.t_m = t_m;
  r.t_s = t_s;
  r.t_t = t_m + t_s;
  r.decisions = decisions;
  return r;
}

TEST(Cli, CumulativeRowsApplyCreditAndSubstitution) {
  const std::vector<BenchRow> rows{
      row("i1", "pm", "SAT", 1, 2, 10),        row("i1", "dm", "TOO_LARGE", 0, 0, std::nullopt),
      row("i1", "sm", "SAT", 1, 5, 40),        row("i2", "pm", "UNKNOWN", 2, 600, std::nullopt),
      row("i2", "dm", "SAT", 3, 4, 7),         row("i2", "sm", "UNKNOWN", 1, 600, std::nullopt),
      row("i3", "pm", "UNKNOWN", 1, 600, 99),  row("i3", "dm", "UNKNOWN", 1, 600, std::nullopt),
      row("i3", "sm", "UNKNOWN", 1, 600, std::nullopt)};
  const auto c = cumulative_rows(rows, {"pm", "dm", "sm"}, 600, 600);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_DOUBLE_EQ(c[0].t_m, 4);
  EXPECT_DOUBLE_EQ(c[0].t_s, 2 + 4 + 600);
  EXPECT_DOUBLE_EQ(*c[0].decisions, 10 + 7);
  // dm failed to generate on i1: 600 s credit, and the slowest other solver's time.
  EXPECT_DOUBLE_EQ(c[1].t_m, 600 + 3 + 1);
  EXPECT_DOUBLE_EQ(c[1].t_s, 5 + 4 + 600);
  EXPECT_DOUBLE_EQ(*c[1].decisions, 40 + 7);
  EXPECT_DOUBLE_EQ(c[2].t_s, 5 + 4 + 600);
  EXPECT_DOUBLE_EQ(c[2].t_t, c[2].t_m + c[2].t_s);
  EXPECT_EQ(c[2].completed, 1u);
}

TEST(Cli, BenchRowsAndCsv) {
  TempDir dir;
  fs::create_directory(dir / "samples");
  for (int i = 0; i < 3; ++i)
    write_file(dir / ("samples/s" + std::to_string(i) + ".txt"),
               to_string(random_sample(RandomSampleParams{2, 8, 4, 0.5, static_cast<std::uint64_t>(i + 1)})));
  write_file(dir / "kmap.txt", "s1 1\n");
  BenchOptions b;
  b.sample_dir = dir / "samples";
  b.models = {"pm", "hm:ils", "dm"};
  b.k = 2;
  b.k_map = dir / "kmap.txt";
  b.runs = 3;
  b.base = quick(ModelKind::Prefix, 2);
  std::ostringstream log;
  const BenchResult r = run_bench(b, &log);
  ASSERT_EQ(r.rows.size(), 9u);
  ASSERT_EQ(r.cumulative.size(), 3u);
  EXPECT_EQ(r.rows[0].runs, 1u);
  EXPECT_EQ(r.rows[1].runs, 3u);
  EXPECT_EQ(r.rows[1].model, "hm-ils");
  EXPECT_EQ(r.rows[3].k, 1u);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.completed, row.runs);
    if (row.model == "hm-ils") EXPECT_TRUE(row.fitness.has_value());
  }
  EXPECT_NE(log.str().find("spearman"), std::string::npos);

  std::ostringstream csv;
  write_bench_csv(csv, r);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "instance,k,model,runs,completed,vars,clauses,t_M,status,decisions,t_S,t_T,fitness");
  int count = 0;
  while (std::getline(lines, line)) {
    ++count;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 12) << line;
  }
  EXPECT_EQ(count, 9 + 3);

  // A deterministic model gives the same row on a second run.
  const BenchResult again = run_bench(b);
  EXPECT_EQ(again.rows[0].vars, r.rows[0].vars);
  EXPECT_EQ(again.rows[0].status, r.rows[0].status);
  EXPECT_EQ(again.rows[1].vars, r.rows[1].vars);

  b.base.solver_command = "/nonexistent/solver {input}";
  EXPECT_THROW(run_bench(b), InvalidArgument);
}

TEST(Cli, OptimizeWritesCutsAndTrace) {
  TempDir dir;
  write_file(dir / "s.txt", to_string(random_sample(RandomSampleParams{2, 15, 6, 0.5, 2})));
  PipelineOptions o = quick(ModelKind::Hybrid, 3);
  const OptimizeResult r = cmd_optimize(dir / "s.txt", o, dir / "cuts.txt", dir / "trace.csv");
  const Sample s = load_sample(dir / "s.txt");
  std::ifstream in(dir / "cuts.txt");
  EXPECT_EQ(read_cuts(in, s), r.cuts);
  EXPECT_EQ(slurp(dir / "trace.csv").substr(0, 4), "step");

  o.cuts = CutsSpec::parse("file:" + (dir / "cuts.txt").string());
  const Generated g = generate(s, "s", o);
  ASSERT_TRUE(g.cnf);
  EXPECT_EQ(*g.cuts, r.cuts);
}

TEST(Cli, BinaryExitCodes) {
  TempDir dir;
  write_file(dir / "s.txt", "n=2\na+\nb-\n");
  write_file(dir / "bad.txt", "n=2\nab+\na+\nb-\n");
  const std::string s = (dir / "s.txt").string();
  EXPECT_EQ(run_cli("random-sample --n 2 --words 6 --seed 3 -o " + (dir / "r.txt").string()), 0);
  EXPECT_EQ(slurp(dir / "r.txt"), to_string(random_sample(RandomSampleParams{2, 6, 8, 0.5, 3})));
  EXPECT_EQ(run_cli("generate " + s + " --model sm --k 1 -o " + (dir / "s.cnf").string()), 0);
  EXPECT_EQ(run_cli("solve " + (dir / "s.cnf").string()), 10);
  EXPECT_EQ(run_cli("infer " + s + " --model hm --k 1 -o " + (dir / "nfa.json").string()), 10);
  EXPECT_EQ(run_cli("verify " + (dir / "nfa.json").string() + " " + s), 0);
  EXPECT_EQ(run_cli("verify " + (dir / "nfa.json").string() + " " + (dir / "bad.txt").string()), 1);
  EXPECT_EQ(run_cli("infer " + (dir / "bad.txt").string() + " --model pm --k 1"), 20);
  EXPECT_EQ(run_cli("infer " + (dir / "bad.txt").string() + " --model pm --k 1 --k-max 3"), 10);
  EXPECT_EQ(run_cli("generate " + s + " --model xx --k 1 -o " + (dir / "x.cnf").string()), 105);
  EXPECT_EQ(run_cli("generate /nonexistent --k 1 -o x"), 105);
}

}  // namespace
}  // namespace nfasat::cli
