// Stand-alone DIMACS solver with competition-format output, so the external
// solver bridge can be exercised without a third-party binary.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "nfasat/cnf.hpp"
#include "nfasat/error.hpp"
#include "nfasat/sat.hpp"

int main(int argc, char** argv) {
  double timeout = 0;
  const char* path = nullptr;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--timeout" && i + 1 < argc)
      timeout = std::atof(argv[++i]);
    else if (!path)
      path = argv[i];
    else {
      std::cerr << "usage: nfasat-cdcl [--timeout seconds] file.cnf\n";
      return 1;
    }
  }
  if (!path) {
    std::cerr << "usage: nfasat-cdcl [--timeout seconds] file.cnf\n";
    return 1;
  }

  nfasat::CnfInstance cnf;
  try {
    std::ifstream in(path);
    if (!in) throw nfasat::Error(std::string("cannot open ") + path);
    cnf = nfasat::read_dimacs(in);
  } catch (const nfasat::Error& e) {
    std::cerr << "c error: " << e.what() << '\n';
    return 1;
  }

  nfasat::sat::CdclSolver solver;
  for (int v = 0; v < cnf.var_count(); ++v) solver.new_var();
  bool ok = !cnf.trivially_unsat();
  for (std::size_t c = 0; ok && c < cnf.clause_count(); ++c) ok = solver.add_clause(cnf.clause(c));

  nfasat::sat::Status status = nfasat::sat::Status::Unsat;
  if (ok) {
    nfasat::sat::Limits limits;
    if (timeout > 0)
      limits.deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(timeout));
    status = solver.solve(limits);
  }

  const auto& stats = solver.stats();
  std::ostringstream out;
  out << "c conflicts : " << stats.conflicts << '\n';
  out << "c decisions : " << stats.decisions << '\n';
  out << "c propagations : " << stats.propagations << '\n';
  switch (status) {
    case nfasat::sat::Status::Sat: {
      out << "s SATISFIABLE\n";
      std::string line = "v";
      for (int v = 1; v <= cnf.var_count(); ++v) {
        std::string lit = ' ' + std::to_string(solver.model_value(v) ? v : -v);
        if (line.size() + lit.size() > 78) {
          out << line << '\n';
          line = "v";
        }
        line += lit;
      }
      out << line << " 0\n";
      std::cout << out.str();
      return 10;
    }
    case nfasat::sat::Status::Unsat:
      out << "s UNSATISFIABLE\n";
      std::cout << out.str();
      return 20;
    case nfasat::sat::Status::Unknown:
      out << "s UNKNOWN\n";
      std::cout << out.str();
      return 0;
  }
  return 0;
}
