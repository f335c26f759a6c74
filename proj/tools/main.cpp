#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "nfasat/error.hpp"

namespace {

using namespace nfasat;
using namespace nfasat::cli;

struct Flags {
  std::string model = "pm";
  std::string cuts = "ils";
};

void add_model_flags(CLI::App* cmd, PipelineOptions& o, Flags& f) {
  cmd->add_option("--model", f.model, "Encoding: dm, pm, sm or hm")->check(CLI::IsMember({"dm", "pm", "sm", "hm"}));
  cmd->add_option("--k", o.k, "Number of NFA states")->check(CLI::PositiveNumber);
  cmd->add_option("--cuts", f.cuts, "Split source for hm: prefix, suffix, ils, ga or file:<path>");
  cmd->add_option("--seed", o.seed, "Optimizer seed");
  cmd->add_option("--budget-literals", o.literal_budget, "Literal budget of the encoder (0 disables)");
  cmd->add_option("--timeout", o.timeout_seconds, "Time limit in seconds for generation and for solving");
  cmd->add_option("--ils-max-iter", o.ils.max_iter);
  cmd->add_option("--ils-max-iter-without-improv", o.ils.max_iter_without_improv);
  cmd->add_option("--ga-population", o.ga.population_size);
  cmd->add_option("--ga-max-gen", o.ga.max_gen);
  cmd->add_option("--ga-max-gen-without-improv", o.ga.max_gen_without_improv);
  cmd->add_option("--ga-p-mut", o.ga.p_mut);
  cmd->add_option("--ga-p-parents", o.ga.p_parents);
}

void add_solver_flags(CLI::App* cmd, PipelineOptions& o) {
  cmd->add_option("--solver", o.solver_command,
                  "Solver command template with {input} and {timeout}; the built-in solver when omitted");
  cmd->add_option("--decisions-regex", o.decisions_pattern, "Regex whose first group is the decision count");
}

void resolve(PipelineOptions& o, const Flags& f) {
  o.model = parse_model_kind(f.model);
  o.cuts = CutsSpec::parse(f.cuts);
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn k-state NFAs from labelled samples through SAT"};
  app.set_config("--config");
  app.require_subcommand(1);

  PipelineOptions opts;
  Flags flags;
  std::string sample_path, out_path, cnf_path, dot_path, trace_path, nfa_path;
  int exit_code = 0;

  auto* gen = app.add_subcommand("generate", "Write the CNF of a sample");
  gen->add_option("sample", sample_path)->required()->check(CLI::ExistingFile);
  gen->add_option("-o,--output", out_path, "DIMACS output; stats go to <output>.stats.json")->required();
  add_model_flags(gen, opts, flags);
  gen->callback([&] {
    resolve(opts, flags);
    std::cout << to_json(cmd_generate(sample_path, opts, out_path)) << '\n';
  });

  auto* slv = app.add_subcommand("solve", "Solve a DIMACS file");
  slv->add_option("cnf", cnf_path)->required()->check(CLI::ExistingFile);
  slv->add_option("--timeout", opts.timeout_seconds);
  add_solver_flags(slv, opts);
  slv->callback([&] {
    const RunReport r = cmd_solve(cnf_path, opts);
    std::cout << to_json(r) << '\n';
    exit_code = r.status == "SAT" ? 10 : r.status == "UNSAT" ? 20 : 0;
  });

  unsigned k_max = 0;
  auto* inf = app.add_subcommand("infer", "Generate, solve, decode and verify");
  inf->add_option("sample", sample_path)->required()->check(CLI::ExistingFile);
  inf->add_option("-o,--output", out_path, "NFA JSON output (stdout when omitted)");
  inf->add_option("--dot", dot_path, "Graphviz output");
  inf->add_option("--k-max", k_max, "Try k, k+1, ... up to this value until satisfiable");
  add_model_flags(inf, opts, flags);
  add_solver_flags(inf, opts);
  inf->callback([&] {
    resolve(opts, flags);
    const Sample sample = load_sample(sample_path);
    const std::string name = std::filesystem::path(sample_path).stem().string();
    const unsigned last = std::max(k_max, opts.k);
    Inference result;
    for (unsigned k = opts.k; k <= last; ++k) {
      PipelineOptions o = opts;
      o.k = k;
      result = infer(sample, name, o);
      std::cerr << to_json(result.report) << '\n';
      if (result.report.status != "UNSAT") break;
    }
    if (result.nfa) {
      write_or_print(out_path, to_json(*result.nfa));
      if (!dot_path.empty()) write_or_print(dot_path, to_dot(*result.nfa));
    }
    exit_code = result.report.status == "SAT" ? 10 : result.report.status == "UNSAT" ? 20 : 0;
  });

  auto* opt = app.add_subcommand("optimize", "Optimize the split of the hybrid model");
  opt->add_option("sample", sample_path)->required()->check(CLI::ExistingFile);
  opt->add_option("-o,--output", out_path, "Cuts file")->required();
  opt->add_option("--trace", trace_path, "Trace CSV");
  add_model_flags(opt, opts, flags);
  opt->callback([&] {
    resolve(opts, flags);
    const auto r = cmd_optimize(sample_path, opts, out_path,
                                trace_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(trace_path));
    std::cout << "initial_fitness " << r.initial_fitness << "\nbest_fitness " << r.best_fitness << '\n';
  });

  auto* ver = app.add_subcommand("verify", "Check an NFA against a sample");
  ver->add_option("nfa", nfa_path)->required()->check(CLI::ExistingFile);
  ver->add_option("sample", sample_path)->required()->check(CLI::ExistingFile);
  ver->callback([&] {
    std::ifstream in(nfa_path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const Nfa nfa = nfa_from_json(text);
    const Sample sample = load_sample(sample_path);
    const VerifyReport report = verify(nfa, sample);
    for (const auto& c : report.counterexamples)
      std::cout << (c.positive ? "rejects positive " : "accepts negative ") << '\''
                << format_word(c.word, sample.alphabet_size()) << "'\n";
    std::cout << (report.ok ? "OK" : "FAILED") << '\n';
    exit_code = report.ok ? 0 : 1;
  });

  BenchOptions bench;
  std::string models = "pm,sm,hm:ils,hm:ga";
  std::string k_map;
  auto* bch = app.add_subcommand("bench", "Run every model on every sample of a directory");
  bch->add_option("dir", bench.sample_dir)->required()->check(CLI::ExistingDirectory);
  bch->add_option("-o,--output", out_path, "CSV output (stdout when omitted)");
  bch->add_option("--models", models, "Comma separated, e.g. dm,pm,sm,hm:ils,hm:ga");
  bch->add_option("--k-map", k_map, "File of '<instance> <k>' lines");
  bch->add_option("--runs", bench.runs, "Runs of stochastic models")->check(CLI::PositiveNumber);
  add_model_flags(bch, opts, flags);
  add_solver_flags(bch, opts);
  bch->callback([&] {
    bench.base = opts;
    bench.k = opts.k;
    if (!k_map.empty()) bench.k_map = k_map;
    std::stringstream list(models);
    for (std::string m; std::getline(list, m, ',');)
      if (!m.empty()) bench.models.push_back(m);
    const BenchResult result = run_bench(bench, &std::cerr);
    std::ostringstream csv;
    write_bench_csv(csv, result);
    write_or_print(out_path, csv.str());
  });

  RandomSampleParams rs;
  auto* rnd = app.add_subcommand("random-sample", "Write a reproducible random sample");
  rnd->add_option("-o,--output", out_path, "Sample file (stdout when omitted)");
  rnd->add_option("--n", rs.alphabet_size, "Alphabet size")->check(CLI::PositiveNumber);
  rnd->add_option("--words", rs.word_count, "Number of words")->check(CLI::PositiveNumber);
  rnd->add_option("--max-len", rs.max_length, "Maximum word length");
  rnd->add_option("--positive-fraction", rs.positive_fraction)->check(CLI::Range(0.0, 1.0));
  rnd->add_option("--seed", rs.seed);
  rnd->callback([&] { write_or_print(out_path, to_string(random_sample(rs))); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const nfasat::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return exit_code;
}
