#include "nfasat/cnf.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "nfasat/error.hpp"

namespace nfasat {

std::string_view to_string(VarKind kind) {
  switch (kind) {
    case VarKind::Final: return "final";
    case VarKind::Trans: return "delta";
    case VarKind::PrefPath: return "trp";
    case VarKind::SufPath: return "paths";
    case VarKind::AuxAccept: return "aux_accept";
    case VarKind::AuxPathD: return "aux_path";
    case VarKind::AuxPrefRec: return "aux_pref";
    case VarKind::AuxSufRec: return "aux_suf";
    case VarKind::AuxHyb: return "aux_hyb";
  }
  return "?";
}

std::size_t VarNameHash::operator()(const VarName& n) const {
  std::uint64_t h = static_cast<std::uint64_t>(n.kind) * 0x9E3779B97F4A7C15ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  };
  mix(n.word);
  for (auto a : n.args) mix(a);
  return static_cast<std::size_t>(h);
}

int CnfInstance::fresh_var(const VarName& name) {
  auto [it, inserted] = index_.try_emplace(name, var_count_ + 1);
  if (!inserted) return it->second;
  ++var_count_;
  names_.push_back(name);
  named_.push_back(true);
  ++kind_counts_[static_cast<std::size_t>(name.kind)];
  return var_count_;
}

int CnfInstance::unindexed_var(const VarName& name) {
  ++var_count_;
  names_.push_back(name);
  named_.push_back(true);
  ++kind_counts_[static_cast<std::size_t>(name.kind)];
  return var_count_;
}

int CnfInstance::alias_var(const VarName& name, const VarName& existing) {
  auto target = index_.find(existing);
  if (target == index_.end()) throw InvalidArgument("alias target is not registered");
  const int idx = target->second;
  auto [it, inserted] = index_.try_emplace(name, idx);
  if (!inserted && it->second != idx) throw InvalidArgument("name already bound to a different variable");
  if (inserted) ++aliases_;
  return idx;
}

std::optional<int> CnfInstance::find(const VarName& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int CnfInstance::index_of(const VarName& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw InvalidArgument("variable '" + std::string(to_string(name.kind)) + "' is not registered");
  return it->second;
}

const VarName& CnfInstance::name_of(int index) const {
  if (index < 1 || index > var_count_ || !named_[static_cast<std::size_t>(index)])
    throw InvalidArgument("no named variable with index " + std::to_string(index));
  return names_[static_cast<std::size_t>(index)];
}

void CnfInstance::add_anonymous_vars(int count) {
  for (int i = 0; i < count; ++i) {
    ++var_count_;
    names_.emplace_back();
    named_.push_back(false);
  }
}

void CnfInstance::check_deadline() {
  if (!limits_.deadline) return;
  if (++since_clock_check_ < 4096) return;
  since_clock_check_ = 0;
  if (std::chrono::steady_clock::now() > *limits_.deadline) throw GenerationTimeout("instance generation timed out");
}

void CnfInstance::add_clause(std::span<const Lit> lits, Tag tag) {
  check_deadline();
  scratch_.clear();
  if (lits.size() <= 32) {
    for (Lit l : lits) {
      if (l == 0 || std::abs(l) > var_count_) throw InvalidArgument("literal " + std::to_string(l) + " out of range");
      bool duplicate = false;
      for (Lit seen : scratch_) {
        if (seen == l) {
          duplicate = true;
          break;
        }
        if (seen == -l) return;  // tautology
      }
      if (!duplicate) scratch_.push_back(l);
    }
  } else {
    std::vector<Lit> sorted(lits.begin(), lits.end());
    for (Lit l : sorted)
      if (l == 0 || std::abs(l) > var_count_) throw InvalidArgument("literal " + std::to_string(l) + " out of range");
    std::sort(sorted.begin(), sorted.end(), [](Lit a, Lit b) { return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b; });
    bool duplicates = false;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i] == -sorted[i - 1]) return;  // tautology
      if (sorted[i] == sorted[i - 1]) duplicates = true;
    }
    if (!duplicates) {
      scratch_.assign(lits.begin(), lits.end());
    } else {
      std::vector<bool> seen(static_cast<std::size_t>(var_count_) + 1, false);
      for (Lit l : lits) {
        auto v = static_cast<std::size_t>(std::abs(l));
        if (!seen[v]) scratch_.push_back(l);
        seen[v] = true;
      }
    }
  }
  if (limits_.literal_budget && literals_.size() + scratch_.size() > limits_.literal_budget)
    throw InstanceTooLarge("instance too large: literal budget of " + std::to_string(limits_.literal_budget) +
                           " exceeded");
  offsets_.push_back(literals_.size());
  literals_.insert(literals_.end(), scratch_.begin(), scratch_.end());
  if (scratch_.empty()) trivially_unsat_ = true;
  ++histogram_[scratch_.size()];
  if (tags_.size() <= tag) tags_.resize(static_cast<std::size_t>(tag) + 1);
  auto& ts = tags_[tag];
  ++ts.clauses;
  ts.literals += scratch_.size();
  ts.max_arity = std::max(ts.max_arity, scratch_.size());
}

std::span<const Lit> CnfInstance::clause(std::size_t i) const {
  const std::size_t begin = offsets_[i];
  const std::size_t end = i + 1 < offsets_.size() ? offsets_[i + 1] : literals_.size();
  return {literals_.data() + begin, end - begin};
}

ClauseTagStats CnfInstance::tag_stats(Tag tag) const { return tag < tags_.size() ? tags_[tag] : ClauseTagStats{}; }

std::string CnfInstance::describe(int index) const {
  if (index < 1 || index > var_count_) return "?";
  if (!named_[static_cast<std::size_t>(index)]) return "x" + std::to_string(index);
  const VarName& n = names_[static_cast<std::size_t>(index)];
  auto word = [&]() {
    const Word& w = words_.word(n.word);
    return w.empty() ? std::string("λ") : format_word(w, 26);
  };
  auto letter = [](std::uint32_t a) { return format_word(Word{sym(a)}, 26); };
  std::ostringstream os;
  os << to_string(n.kind) << '(';
  switch (n.kind) {
    case VarKind::Final: os << n.args[0]; break;
    case VarKind::Trans: os << letter(n.args[0]) << ',' << n.args[1] << ',' << n.args[2]; break;
    case VarKind::PrefPath:
    case VarKind::AuxAccept: os << word() << ',' << n.args[0]; break;
    case VarKind::SufPath:
    case VarKind::AuxPathD:
    case VarKind::AuxHyb: os << word() << ',' << n.args[0] << ',' << n.args[1]; break;
    case VarKind::AuxPrefRec: os << word() << ',' << letter(n.args[0]) << ',' << n.args[1] << ',' << n.args[2]; break;
    case VarKind::AuxSufRec:
      os << word() << ',' << letter(n.args[0]) << ',' << n.args[1] << ',' << n.args[2] << ',' << n.args[3];
      break;
  }
  os << ')';
  return os.str();
}

void write_dimacs(const CnfInstance& cnf, std::ostream& out) {
  out << "p cnf " << cnf.var_count() << ' ' << cnf.clause_count() << '\n';
  std::string line;
  char buf[16];
  for (std::size_t i = 0; i < cnf.clause_count(); ++i) {
    line.clear();
    for (Lit l : cnf.clause(i)) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, l);
      line.append(buf, end);
      line.push_back(' ');
    }
    line += "0\n";
    out << line;
  }
  out.flush();
  if (!out) throw Error("failed to write DIMACS output");
}

std::string to_dimacs(const CnfInstance& cnf) {
  std::ostringstream out;
  write_dimacs(cnf, out);
  return out.str();
}

CnfInstance read_dimacs(std::istream& in) {
  CnfInstance cnf;
  std::string token;
  bool header = false;
  long declared_clauses = 0;
  long read_clauses = 0;
  std::vector<Lit> clause;
  while (in >> token) {
    if (token == "c") {
      std::getline(in, token);
      continue;
    }
    if (token == "p") {
      std::string fmt;
      long vars = 0;
      if (!(in >> fmt >> vars >> declared_clauses) || fmt != "cnf" || vars < 0 || declared_clauses < 0)
        throw ParseError("malformed DIMACS header");
      cnf.add_anonymous_vars(static_cast<int>(vars));
      header = true;
      continue;
    }
    if (!header) throw ParseError("DIMACS clause before header");
    Lit l = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), l);
    if (ec != std::errc{} || ptr != token.data() + token.size()) throw ParseError("bad DIMACS literal '" + token + "'");
    if (l == 0) {
      cnf.add_clause(clause);
      clause.clear();
      ++read_clauses;
    } else {
      if (std::abs(l) > cnf.var_count()) throw ParseError("DIMACS literal " + token + " exceeds declared variables");
      clause.push_back(l);
    }
  }
  if (!header) throw ParseError("missing DIMACS header");
  if (!clause.empty()) throw ParseError("unterminated DIMACS clause");
  if (read_clauses != declared_clauses)
    throw ParseError("DIMACS header declares " + std::to_string(declared_clauses) + " clauses, found " +
                     std::to_string(read_clauses));
  return cnf;
}

CnfInstance read_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_dimacs(in);
}

std::string stats_json(const CnfInstance& cnf, double generation_seconds) {
  nlohmann::ordered_json j;
  j["vars"] = cnf.var_count();
  j["clauses"] = cnf.clause_count();
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [arity, count] : cnf.arity_histogram()) hist[std::to_string(arity)] = count;
  j["arity_histogram"] = hist;
  j["generation_seconds"] = generation_seconds;
  return j.dump(2) + "\n";
}

}  // namespace nfasat
