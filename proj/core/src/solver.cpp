#include "nfasat/solver.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include "nfasat/error.hpp"
#include "nfasat/sat.hpp"

namespace nfasat {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Removes its file on destruction.
class TempFile {
 public:
  explicit TempFile(const char* suffix) {
    std::string pattern = (std::filesystem::temp_directory_path() / "nfasat-XXXXXX").string() + suffix;
    const int fd = mkstemps(pattern.data(), static_cast<int>(std::strlen(suffix)));
    if (fd < 0) throw SolverError("cannot create temporary file: " + std::string(std::strerror(errno)));
    ::close(fd);
    path_ = pattern;
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
  for (std::size_t pos = text.find(from); pos != std::string::npos; pos = text.find(from, pos + to.size()))
    text.replace(pos, from.size(), to);
  return text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

std::string_view to_string(SatStatus status) {
  switch (status) {
    case SatStatus::Sat: return "SAT";
    case SatStatus::Unsat: return "UNSAT";
    case SatStatus::Unknown: return "UNKNOWN";
  }
  return "?";
}

SolveOutcome solve_embedded(const CnfInstance& cnf, double timeout_seconds) {
  SolveOutcome out;
  const auto start = Clock::now();
  if (timeout_seconds <= 0) return out;

  sat::CdclSolver solver;
  for (int v = 0; v < cnf.var_count(); ++v) solver.new_var();
  bool ok = !cnf.trivially_unsat();
  for (std::size_t c = 0; ok && c < cnf.clause_count(); ++c) ok = solver.add_clause(cnf.clause(c));

  sat::Status status = sat::Status::Unsat;
  if (ok) {
    sat::Limits limits;
    limits.deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(timeout_seconds));
    status = solver.solve(limits);
  }
  out.decisions = solver.stats().decisions;
  switch (status) {
    case sat::Status::Sat: {
      out.status = SatStatus::Sat;
      std::vector<bool> assignment(static_cast<std::size_t>(cnf.var_count()) + 1, false);
      for (int v = 1; v <= cnf.var_count(); ++v) assignment[static_cast<std::size_t>(v)] = solver.model_value(v);
      out.assignment = std::move(assignment);
      break;
    }
    case sat::Status::Unsat: out.status = SatStatus::Unsat; break;
    case sat::Status::Unknown: out.status = SatStatus::Unknown; break;
  }
  out.solve_seconds = seconds_since(start);
  return out;
}

SolveOutcome parse_solver_output(std::string_view text, int var_count, std::string_view decisions_pattern) {
  SolveOutcome out;
  std::optional<SatStatus> status;
  std::vector<bool> assignment(static_cast<std::size_t>(var_count) + 1, false);
  bool saw_values = false;
  const std::regex decisions_re{std::string(decisions_pattern), std::regex::icase};

  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.starts_with("s ")) {
      const std::string word = line.substr(2);
      if (word.find("UNSATISFIABLE") != std::string::npos)
        status = SatStatus::Unsat;
      else if (word.find("SATISFIABLE") != std::string::npos)
        status = SatStatus::Sat;
      else if (word.find("UNKNOWN") != std::string::npos || word.find("INDETERMINATE") != std::string::npos)
        status = SatStatus::Unknown;
      else
        throw SolverError("unrecognised status line: " + line);
    } else if (line.starts_with("v ") || line == "v") {
      saw_values = true;
      std::istringstream values(line.substr(1));
      std::string token;
      while (values >> token) {
        long long lit = 0;
        try {
          std::size_t used = 0;
          lit = std::stoll(token, &used);
          if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
          throw SolverError("malformed value line: " + line);
        }
        if (lit == 0) continue;
        const long long v = std::llabs(lit);
        if (v > var_count) throw SolverError("value line mentions variable " + std::to_string(v) + " beyond " +
                                             std::to_string(var_count));
        assignment[static_cast<std::size_t>(v)] = lit > 0;
      }
    } else if (!out.decisions) {
      std::smatch m;
      if (std::regex_search(line, m, decisions_re) && m.size() > 1) {
        try {
          out.decisions = std::stoull(m[1].str());
        } catch (const std::exception&) {
        }
      }
    }
  }
  if (!status) throw SolverError("solver output has no status line");
  out.status = *status;
  if (out.status == SatStatus::Sat) {
    if (!saw_values) throw SolverError("satisfiable answer without a model");
    out.assignment = std::move(assignment);
  }
  return out;
}

SolveOutcome solve_external(const CnfInstance& cnf, const ExternalSolver& solver, double timeout_seconds) {
  if (solver.command.empty()) throw InvalidArgument("empty solver command");
  SolveOutcome unknown;
  if (timeout_seconds <= 0) return unknown;

  TempFile input(".cnf");
  TempFile output(".out");
  {
    std::ofstream out(input.path(), std::ios::binary);
    write_dimacs(cnf, out);
  }
  std::string command = solver.command;
  if (command.find("{input}") == std::string::npos) command += " {input}";
  command = replace_all(command, "{input}", shell_quote(input.path()));
  command = replace_all(command, "{timeout}",
                        std::to_string(static_cast<long long>(std::max(1.0, std::ceil(timeout_seconds)))));

  const auto start = Clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) throw SolverError("fork failed: " + std::string(std::strerror(errno)));
  if (pid == 0) {
    ::setpgid(0, 0);
    const int fd = ::open(output.path().c_str(), O_WRONLY | O_TRUNC);
    if (fd >= 0) {
      ::dup2(fd, STDOUT_FILENO);
      ::close(fd);
    }
    const int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) {
      ::dup2(devnull, STDIN_FILENO);
      ::close(devnull);
    }
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);

  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(timeout_seconds));
  int wstatus = 0;
  auto pause = std::chrono::microseconds(200);
  for (;;) {
    const pid_t r = ::waitpid(pid, &wstatus, WNOHANG);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) throw SolverError("waitpid failed: " + std::string(std::strerror(errno)));
    if (Clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &wstatus, 0);
      unknown.solve_seconds = seconds_since(start);
      return unknown;
    }
    std::this_thread::sleep_for(pause);
    pause = std::min(pause * 2, std::chrono::microseconds(20'000));
  }
  const double elapsed = seconds_since(start);

  if (WIFSIGNALED(wstatus))
    throw SolverError("solver terminated by signal " + std::to_string(WTERMSIG(wstatus)));
  const int code = WIFEXITED(wstatus) ? WEXITSTATUS(wstatus) : -1;
  if (code == 127) throw SolverError("solver command not found: " + solver.command);

  const std::string text = read_file(output.path());
  SolveOutcome out;
  try {
    out = parse_solver_output(text, cnf.var_count(), solver.decisions_pattern);
  } catch (const SolverError& e) {
    throw SolverError(std::string(e.what()) + " (exit code " + std::to_string(code) + ")");
  }
  out.solve_seconds = elapsed;
  return out;
}

Nfa decode_nfa(const std::vector<bool>& assignment, const CnfInstance& registry, std::uint32_t k,
               std::size_t alphabet_size) {
  Nfa nfa(k, alphabet_size);
  auto value = [&](const VarName& name) {
    const auto v = registry.find(name);
    if (!v) throw InvalidArgument("variable " + std::string(to_string(name.kind)) + " missing from the registry");
    if (static_cast<std::size_t>(*v) >= assignment.size())
      throw InvalidArgument("assignment does not cover variable " + std::to_string(*v));
    return static_cast<bool>(assignment[static_cast<std::size_t>(*v)]);
  };
  for (std::uint32_t i = 1; i <= k; ++i)
    if (value(VarName::final_state(i))) nfa.set_final(i);
  for (std::uint32_t a = 0; a < alphabet_size; ++a)
    for (std::uint32_t i = 1; i <= k; ++i)
      for (std::uint32_t j = 1; j <= k; ++j)
        if (value(VarName::trans(sym(a), i, j))) nfa.add_transition(i, sym(a), j);
  return nfa;
}

}  // namespace nfasat
