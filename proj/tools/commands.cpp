#include "commands.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <set>
#include <sstream>

#include "nfasat/error.hpp"
#include "nfasat/rng.hpp"

namespace nfasat::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

SplitAssignment load_cuts(const std::filesystem::path& path, const Sample& sample) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open cuts file " + path.string());
  return read_cuts(in, sample);
}

std::string trimmed_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

std::string seconds(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << v;
  return os.str();
}

bool solver_available(const std::string& command) {
  std::istringstream in(command);
  std::string program;
  in >> program;
  if (program.empty()) return false;
  if (program.find('/') != std::string::npos) return ::access(program.c_str(), X_OK) == 0;
  const char* path = std::getenv("PATH");
  if (!path) return false;
  std::istringstream dirs(path);
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) dir = ".";
    if (::access((std::filesystem::path(dir) / program).c_str(), X_OK) == 0) return true;
  }
  return false;
}

}  // namespace

CutsSpec CutsSpec::parse(std::string_view text) {
  CutsSpec spec;
  if (text == "prefix") {
    spec.source = CutsSource::Prefix;
  } else if (text == "suffix") {
    spec.source = CutsSource::Suffix;
  } else if (text == "ils") {
    spec.source = CutsSource::Ils;
  } else if (text == "ga") {
    spec.source = CutsSource::Ga;
  } else if (text.starts_with("file:") && text.size() > 5) {
    spec.source = CutsSource::File;
    spec.file = std::string(text.substr(5));
  } else {
    throw InvalidArgument("unknown cuts source '" + std::string(text) + "' (expected prefix, suffix, ils, ga or file:<path>)");
  }
  return spec;
}

std::string CutsSpec::label() const {
  switch (source) {
    case CutsSource::Prefix: return "prefix";
    case CutsSource::Suffix: return "suffix";
    case CutsSource::Ils: return "ils";
    case CutsSource::Ga: return "ga";
    case CutsSource::File: return "file";
  }
  return "?";
}

std::string PipelineOptions::model_label() const {
  std::string label(to_string(model));
  if (model == ModelKind::Hybrid) label += "-" + cuts.label();
  return label;
}

std::string to_json(const RunReport& r, bool include_timing) {
  nlohmann::ordered_json j;
  j["instance"] = r.instance;
  j["model"] = r.model;
  j["k"] = r.k;
  j["vars"] = r.vars;
  j["clauses"] = r.clauses;
  if (include_timing) j["t_M"] = r.t_m;
  j["status"] = r.status;
  j["decisions"] = r.decisions ? nlohmann::ordered_json(*r.decisions) : nlohmann::ordered_json(nullptr);
  if (include_timing) {
    j["t_S"] = r.t_s;
    j["t_T"] = r.t_t;
  }
  j["seed"] = r.seed;
  j["fitness"] = r.fitness ? nlohmann::ordered_json(*r.fitness) : nlohmann::ordered_json(nullptr);
  return j.dump();
}

Generated generate(const Sample& sample, const std::string& instance, const PipelineOptions& options) {
  Generated out;
  RunReport& report = out.report;
  report.instance = instance;
  report.model = options.model_label();
  report.k = options.k;
  report.seed = options.seed;
  const auto start = Clock::now();

  const SplitAssignment* cuts = nullptr;
  if (options.model == ModelKind::Hybrid) {
    switch (options.cuts.source) {
      case CutsSource::Prefix: out.cuts = all_prefix_cuts(sample); break;
      case CutsSource::Suffix: out.cuts = all_suffix_cuts(sample); break;
      case CutsSource::File: out.cuts = load_cuts(options.cuts.file, sample); break;
      case CutsSource::Ils: {
        IlsParams params = options.ils;
        params.seed = options.seed;
        out.optimization = ils_optimize(sample, options.k, params);
        out.cuts = out.optimization->cuts;
        break;
      }
      case CutsSource::Ga: {
        GaParams params = options.ga;
        params.seed = options.seed;
        out.optimization = ga_optimize(sample, options.k, params);
        out.cuts = out.optimization->cuts;
        break;
      }
    }
    cuts = &*out.cuts;
    report.fitness = fitness(sample, options.k, *cuts);
  }

  EncodeOptions enc;
  enc.literal_budget = options.literal_budget;
  const double remaining = options.timeout_seconds - seconds_since(start);
  if (remaining <= 0) {
    report.status = "GEN_TIMEOUT";
    report.t_m = seconds_since(start);
    report.t_t = report.t_m;
    return out;
  }
  enc.time_limit = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(remaining));
  try {
    out.cnf = encode(options.model, sample, options.k, cuts, enc);
    report.vars = static_cast<std::uint64_t>(out.cnf->var_count());
    report.clauses = out.cnf->clause_count();
  } catch (const InstanceTooLarge&) {
    report.status = "TOO_LARGE";
  } catch (const GenerationTimeout&) {
    report.status = "GEN_TIMEOUT";
  }
  report.t_m = seconds_since(start);
  report.t_t = report.t_m;
  return out;
}

SolveOutcome solve(const CnfInstance& cnf, const PipelineOptions& options) {
  if (options.solver_command.empty()) return solve_embedded(cnf, options.timeout_seconds);
  return solve_external(cnf, ExternalSolver{options.solver_command, options.decisions_pattern},
                        options.timeout_seconds);
}

Inference infer(const Sample& sample, const std::string& instance, const PipelineOptions& options) {
  Inference out;
  Generated gen = generate(sample, instance, options);
  out.report = gen.report;
  if (!gen.cnf) return out;
  const SolveOutcome outcome = solve(*gen.cnf, options);
  RunReport& r = out.report;
  r.status = std::string(to_string(outcome.status));
  r.decisions = outcome.decisions;
  r.t_s = outcome.solve_seconds;
  r.t_t = r.t_m + r.t_s;
  if (outcome.status == SatStatus::Sat) {
    Nfa nfa = decode_nfa(*outcome.assignment, *gen.cnf, options.k, sample.alphabet_size());
    const VerifyReport check = verify(nfa, sample);
    if (!check.ok) {
      const auto& bad = check.counterexamples.front();
      throw Error("decoded NFA fails verification on " + std::string(bad.positive ? "positive" : "negative") +
                  " word '" + format_word(bad.word, sample.alphabet_size()) + "' (" + r.model + ", k=" +
                  std::to_string(options.k) + ")");
    }
    out.nfa = std::move(nfa);
  }
  return out;
}

RunReport cmd_generate(const std::filesystem::path& sample_path, const PipelineOptions& options,
                       const std::filesystem::path& out) {
  const Sample sample = load_sample(sample_path);
  Generated gen = generate(sample, sample_path.stem().string(), options);
  if (!gen.cnf) {
    if (gen.report.status == "TOO_LARGE")
      throw InstanceTooLarge("instance too large for the literal budget of " + std::to_string(options.literal_budget));
    throw GenerationTimeout("generation exceeded " + std::to_string(options.timeout_seconds) + " s");
  }
  {
    std::ofstream os(out, std::ios::binary);
    if (!os) throw Error("cannot write " + out.string());
    write_dimacs(*gen.cnf, os);
  }
  write_text(out.string() + ".stats.json", stats_json(*gen.cnf, gen.report.t_m));
  gen.report.status = "GENERATED";
  return gen.report;
}

RunReport cmd_solve(const std::filesystem::path& cnf_path, const PipelineOptions& options) {
  const auto start = Clock::now();
  const CnfInstance cnf = read_dimacs(read_text(cnf_path));
  RunReport r;
  r.instance = cnf_path.stem().string();
  r.model = "dimacs";
  r.vars = static_cast<std::uint64_t>(cnf.var_count());
  r.clauses = cnf.clause_count();
  r.t_m = seconds_since(start);
  const SolveOutcome outcome = solve(cnf, options);
  r.status = std::string(to_string(outcome.status));
  r.decisions = outcome.decisions;
  r.t_s = outcome.solve_seconds;
  r.t_t = r.t_m + r.t_s;
  return r;
}

OptimizeResult cmd_optimize(const std::filesystem::path& sample_path, const PipelineOptions& options,
                            const std::filesystem::path& cuts_out,
                            const std::optional<std::filesystem::path>& trace_out) {
  const Sample sample = load_sample(sample_path);
  OptimizeResult result;
  if (options.cuts.source == CutsSource::Ga) {
    GaParams params = options.ga;
    params.seed = options.seed;
    result = ga_optimize(sample, options.k, params);
  } else if (options.cuts.source == CutsSource::Ils) {
    IlsParams params = options.ils;
    params.seed = options.seed;
    result = ils_optimize(sample, options.k, params);
  } else {
    throw InvalidArgument("optimize needs --cuts ils or --cuts ga");
  }
  std::ofstream os(cuts_out);
  if (!os) throw Error("cannot write " + cuts_out.string());
  write_cuts(os, sample, result.cuts);
  if (trace_out) {
    std::ofstream ts(*trace_out);
    if (!ts) throw Error("cannot write " + trace_out->string());
    write_trace_csv(ts, result.trace);
  }
  return result;
}

std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("spearman needs equally long series");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

namespace {

PipelineOptions model_options(const PipelineOptions& base, const std::string& entry) {
  PipelineOptions o = base;
  const auto colon = entry.find(':');
  o.model = parse_model_kind(entry.substr(0, colon));
  if (o.model == ModelKind::Hybrid)
    o.cuts = CutsSpec::parse(colon == std::string::npos ? std::string("ils") : entry.substr(colon + 1));
  else if (colon != std::string::npos)
    throw InvalidArgument("only the hybrid model takes a cuts source: '" + entry + "'");
  return o;
}

std::map<std::string, unsigned> read_k_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open k map " + path.string());
  std::map<std::string, unsigned> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string name;
    long long k = 0;
    if (!(ls >> name >> k) || k < 1) throw ParseError("k map line " + std::to_string(number) + ": expected '<instance> <k>'");
    out[name] = static_cast<unsigned>(k);
  }
  return out;
}

BenchRow summarize(const std::vector<RunReport>& runs) {
  BenchRow row;
  row.instance = runs.front().instance;
  row.k = runs.front().k;
  row.model = runs.front().model;
  row.runs = static_cast<unsigned>(runs.size());
  double gen = 0, fit = 0;
  std::size_t fit_count = 0;
  double dec = 0;
  std::size_t dec_count = 0;
  double solved_t_s = 0, all_t_s = 0, all_t_m = 0, gen_t_m = 0;
  for (const auto& r : runs) {
    all_t_m += r.t_m;
    all_t_s += r.t_s;
    if (r.generated()) {
      gen += 1;
      row.vars += static_cast<double>(r.vars);
      row.clauses += static_cast<double>(r.clauses);
      gen_t_m += r.t_m;
    }
    if (r.completed()) {
      row.completed += 1;
      solved_t_s += r.t_s;
      if (r.decisions) {
        dec += static_cast<double>(*r.decisions);
        ++dec_count;
      }
    }
    if (r.fitness) {
      fit += static_cast<double>(*r.fitness);
      ++fit_count;
    }
  }
  const double n = static_cast<double>(runs.size());
  if (gen > 0) {
    row.vars /= gen;
    row.clauses /= gen;
    row.t_m = gen_t_m / gen;
  } else {
    row.t_m = all_t_m / n;
  }
  row.t_s = row.completed ? solved_t_s / row.completed : all_t_s / n;
  if (dec_count) row.decisions = dec / static_cast<double>(dec_count);
  if (fit_count) row.fitness = fit / static_cast<double>(fit_count);
  row.t_t = row.t_m + row.t_s;

  auto any = [&](const char* s) {
    return std::any_of(runs.begin(), runs.end(), [s](const RunReport& r) { return r.status == s; });
  };
  row.status = any("SAT") ? "SAT" : any("UNSAT") ? "UNSAT" : runs.front().status;
  return row;
}

bool generation_failed(const BenchRow& row) { return row.status == "TOO_LARGE" || row.status == "GEN_TIMEOUT"; }

}  // namespace

std::vector<BenchRow> cumulative_rows(const std::vector<BenchRow>& rows, const std::vector<std::string>& models,
                                      double credit_seconds, double timeout_seconds) {
  std::vector<BenchRow> out;
  for (const auto& model : models) {
    BenchRow c;
    c.instance = "cumulative";
    c.model = model;
    c.status = "CUMULATIVE";
    bool fitness_everywhere = true;
    double fit = 0;
    double dec = 0;
    bool any_decisions = false;
    for (const auto& row : rows) {
      if (row.model != model) continue;
      c.runs += row.runs;
      c.completed += row.completed;
      c.vars += row.vars;
      c.clauses += row.clauses;
      c.t_m += generation_failed(row) ? credit_seconds : row.t_m;
      if (row.completed) {
        c.t_s += row.t_s;
        if (row.decisions) {
          dec += *row.decisions;
          any_decisions = true;
        }
      } else {
        std::optional<double> worst_t;
        std::optional<double> worst_d;
        for (const auto& other : rows) {
          if (other.instance != row.instance || other.model == model || !other.completed) continue;
          worst_t = std::max(worst_t.value_or(0.0), other.t_s);
          if (other.decisions) worst_d = std::max(worst_d.value_or(0.0), *other.decisions);
        }
        c.t_s += worst_t.value_or(timeout_seconds);
        if (worst_d) {
          dec += *worst_d;
          any_decisions = true;
        }
      }
      if (row.fitness)
        fit += *row.fitness;
      else
        fitness_everywhere = false;
    }
    c.t_t = c.t_m + c.t_s;
    if (any_decisions) c.decisions = dec;
    if (fitness_everywhere && c.runs) c.fitness = fit;
    out.push_back(c);
  }
  return out;
}

BenchResult run_bench(const BenchOptions& options, std::ostream* log) {
  if (options.models.empty()) throw InvalidArgument("bench needs at least one model");
  if (options.runs == 0) throw InvalidArgument("bench needs at least one run");
  if (!options.base.solver_command.empty() && !solver_available(options.base.solver_command))
    throw InvalidArgument("solver not found: " + options.base.solver_command);
  if (!std::filesystem::is_directory(options.sample_dir))
    throw InvalidArgument("not a directory: " + options.sample_dir.string());

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(options.sample_dir))
    if (entry.is_regular_file() && !entry.path().filename().string().starts_with(".")) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  const auto k_map = options.k_map ? read_k_map(*options.k_map) : std::map<std::string, unsigned>{};

  std::vector<PipelineOptions> per_model;
  std::vector<std::string> labels;
  for (const auto& entry : options.models) {
    per_model.push_back(model_options(options.base, entry));
    labels.push_back(per_model.back().model_label());
  }

  BenchResult result;
  std::vector<double> fitness_values, hybrid_vars;
  for (const auto& file : files) {
    const Sample sample = load_sample(file);
    const std::string name = file.stem().string();
    const auto it = k_map.find(name);
    const unsigned k = it != k_map.end() ? it->second : options.k;
    for (PipelineOptions o : per_model) {
      o.k = k;
      const unsigned runs = o.stochastic() ? options.runs : 1;
      std::vector<RunReport> reports;
      for (unsigned r = 0; r < runs; ++r) {
        o.seed = options.base.seed + r;
        reports.push_back(infer(sample, name, o).report);
        const auto& rep = reports.back();
        if (rep.fitness && rep.generated()) {
          fitness_values.push_back(static_cast<double>(*rep.fitness));
          hybrid_vars.push_back(static_cast<double>(rep.vars));
        }
        if (log)
          *log << name << ' ' << rep.model << " k=" << k << " seed=" << rep.seed << ": " << rep.status << " vars=" << rep.vars
               << " t_T=" << seconds(rep.t_t) << '\n';
      }
      result.rows.push_back(summarize(reports));
    }
  }
  result.cumulative = cumulative_rows(result.rows, labels, options.base.timeout_seconds, options.base.timeout_seconds);
  result.fitness_var_correlation = spearman(fitness_values, hybrid_vars);
  if (log) {
    if (result.fitness_var_correlation)
      *log << "spearman(fitness, hybrid vars) = " << *result.fitness_var_correlation << " over " << fitness_values.size()
           << " runs\n";
    else
      *log << "spearman(fitness, hybrid vars) undefined (" << fitness_values.size() << " runs)\n";
  }
  return result;
}

void write_bench_csv(std::ostream& out, const BenchResult& result) {
  out << "instance,k,model,runs,completed,vars,clauses,t_M,status,decisions,t_S,t_T,fitness\n";
  auto emit = [&](const BenchRow& r) {
    out << r.instance << ',' << r.k << ',' << r.model << ',' << r.runs << ',' << r.completed << ','
        << trimmed_number(r.vars) << ',' << trimmed_number(r.clauses) << ',' << seconds(r.t_m) << ',' << r.status << ','
        << (r.decisions ? trimmed_number(*r.decisions) : "") << ',' << seconds(r.t_s) << ',' << seconds(r.t_t) << ','
        << (r.fitness ? trimmed_number(*r.fitness) : "") << '\n';
  };
  for (const auto& r : result.rows) emit(r);
  for (const auto& r : result.cumulative) emit(r);
}

Sample random_sample(const RandomSampleParams& params) {
  if (params.alphabet_size == 0) throw InvalidArgument("alphabet size must be positive");
  if (params.word_count == 0) throw InvalidArgument("word count must be positive");
  if (!(params.positive_fraction >= 0 && params.positive_fraction <= 1))
    throw InvalidArgument("positive fraction must lie in [0, 1]");

  std::uint64_t universe = 0;
  std::uint64_t layer = 1;
  for (std::size_t len = 0; len <= params.max_length && universe < params.word_count; ++len) {
    universe += layer;
    layer = layer > UINT64_MAX / params.alphabet_size ? UINT64_MAX : layer * params.alphabet_size;
  }
  const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(universe, params.word_count));
  const auto positives = static_cast<std::size_t>(std::llround(params.positive_fraction * static_cast<double>(count)));

  Rng rng(params.seed);
  std::set<Word, ShortLex> seen;
  std::vector<Word> drawn;
  const std::uint64_t budget = 1024 + 256 * static_cast<std::uint64_t>(count);
  for (std::uint64_t attempt = 0; drawn.size() < count; ++attempt) {
    if (attempt == budget) throw InvalidArgument("could not draw " + std::to_string(count) + " distinct words");
    Word w(rng.below(params.max_length + 1));
    for (auto& s : w) s = sym(static_cast<std::uint32_t>(rng.below(params.alphabet_size)));
    if (seen.insert(w).second) drawn.push_back(std::move(w));
  }
  WordSet pos, neg;
  for (std::size_t i = 0; i < drawn.size(); ++i) (i < positives ? pos : neg).insert(drawn[i]);
  return Sample(params.alphabet_size, std::move(pos), std::move(neg));
}

}  // namespace nfasat::cli
