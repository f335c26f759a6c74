#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nfasat/cnf.hpp"
#include "nfasat/nfa.hpp"

namespace nfasat {

enum class SatStatus { Sat, Unsat, Unknown };

std::string_view to_string(SatStatus status);

struct SolveOutcome {
  SatStatus status = SatStatus::Unknown;
  /// Present iff status == Sat. Index 0 is unused; variables the solver did
  /// not mention are false.
  std::optional<std::vector<bool>> assignment;
  std::optional<std::uint64_t> decisions;
  double solve_seconds = 0.0;
};

/// Command line of a DIMACS solver. `{input}` is replaced by the CNF path
/// (appended when absent) and `{timeout}` by the timeout in whole seconds.
struct ExternalSolver {
  std::string command;
  /// First capture group is the decision count.
  std::string decisions_pattern = R"(decisions\s*:?\s*(\d+))";
};

/// Runs the in-process CDCL solver.
SolveOutcome solve_embedded(const CnfInstance& cnf, double timeout_seconds);

/// Writes the instance to a temporary DIMACS file, runs the solver through
/// /bin/sh and parses its competition-format output. A solver still running
/// at the timeout is killed and reported as Unknown; timeout <= 0 yields
/// Unknown without starting it. Throws SolverError on crashes or
/// unrecognised output.
SolveOutcome solve_external(const CnfInstance& cnf, const ExternalSolver& solver, double timeout_seconds);

/// Parses "s ..." and "v ..." lines. Throws SolverError when no status line
/// is present or a value line is malformed.
SolveOutcome parse_solver_output(std::string_view text, int var_count,
                                 std::string_view decisions_pattern = R"(decisions\s*:?\s*(\d+))");

/// Builds the NFA given by the final-state and transition variables of a
/// satisfying assignment. Throws InvalidArgument if any of those variables is
/// missing from the registry or the assignment.
Nfa decode_nfa(const std::vector<bool>& assignment, const CnfInstance& registry, std::uint32_t k,
               std::size_t alphabet_size);

}  // namespace nfasat
