#include "nfasat/nfa.hpp"

#include <nlohmann/json.hpp>
#include <sstream>

#include "nfasat/error.hpp"

namespace nfasat {

Nfa::Nfa(std::uint32_t states, std::size_t alphabet_size)
    : k_(states), n_(alphabet_size), delta_(static_cast<std::size_t>(states) * states * alphabet_size), final_(states) {
  if (states == 0) throw InvalidArgument("an NFA needs at least one state");
  if (alphabet_size == 0) throw InvalidArgument("alphabet must not be empty");
}

void Nfa::check_state(std::uint32_t q) const {
  if (q < 1 || q > k_) throw InvalidArgument("state " + std::to_string(q) + " out of range 1.." + std::to_string(k_));
}

std::size_t Nfa::slot(std::uint32_t from, Symbol a, std::uint32_t to) const {
  check_state(from);
  check_state(to);
  if (id(a) >= n_) throw InvalidArgument("symbol " + std::to_string(id(a)) + " out of range");
  return (static_cast<std::size_t>(id(a)) * k_ + (from - 1)) * k_ + (to - 1);
}

void Nfa::add_transition(std::uint32_t from, Symbol a, std::uint32_t to) { delta_[slot(from, a, to)] = true; }

bool Nfa::has_transition(std::uint32_t from, Symbol a, std::uint32_t to) const { return delta_[slot(from, a, to)]; }

void Nfa::set_final(std::uint32_t q, bool final) {
  check_state(q);
  final_[q - 1] = final;
}

bool Nfa::is_final(std::uint32_t q) const {
  check_state(q);
  return final_[q - 1];
}

std::vector<Transition> Nfa::transitions() const {
  std::vector<Transition> out;
  for (std::uint32_t i = 1; i <= k_; ++i)
    for (std::uint32_t a = 0; a < n_; ++a)
      for (std::uint32_t j = 1; j <= k_; ++j)
        if (has_transition(i, sym(a), j)) out.push_back({i, sym(a), j});
  return out;
}

std::vector<std::uint32_t> Nfa::finals() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t q = 1; q <= k_; ++q)
    if (final_[q - 1]) out.push_back(q);
  return out;
}

std::vector<bool> Nfa::reach(const Word& w) const {
  std::vector<bool> cur(k_, false);
  std::vector<bool> next(k_);
  cur[0] = true;
  for (Symbol a : w) {
    if (id(a) >= n_) throw InvalidArgument("symbol " + std::to_string(id(a)) + " out of range");
    std::fill(next.begin(), next.end(), false);
    const std::size_t base = static_cast<std::size_t>(id(a)) * k_ * k_;
    for (std::uint32_t i = 0; i < k_; ++i) {
      if (!cur[i]) continue;
      for (std::uint32_t j = 0; j < k_; ++j)
        if (delta_[base + static_cast<std::size_t>(i) * k_ + j]) next[j] = true;
    }
    cur.swap(next);
  }
  return cur;
}

bool accepts(const Nfa& nfa, const Word& w) {
  const auto states = nfa.reach(w);
  for (std::uint32_t q = 1; q <= nfa.state_count(); ++q)
    if (states[q - 1] && nfa.is_final(q)) return true;
  return false;
}

VerifyReport verify(const Nfa& nfa, const Sample& sample) {
  VerifyReport report;
  for (const auto& w : sample.positives())
    if (!accepts(nfa, w)) report.counterexamples.push_back({w, true});
  for (const auto& w : sample.negatives())
    if (accepts(nfa, w)) report.counterexamples.push_back({w, false});
  report.ok = report.counterexamples.empty();
  return report;
}

OracleResult oracle_exists(const Sample& sample, std::uint32_t k) {
  if (k == 0) throw InvalidArgument("number of states k must be at least 1");
  const std::size_t n = sample.alphabet_size();
  const std::size_t bits = n * k * k + k;
  if (bits > kOracleMaxBits)
    throw InvalidArgument("oracle search space 2^" + std::to_string(bits) + " exceeds 2^" +
                          std::to_string(kOracleMaxBits));
  const std::uint32_t trans_bits = static_cast<std::uint32_t>(n * k * k);
  const std::uint32_t state_mask = (1u << k) - 1;

  // Bit (a*k + i)*k + j of a transition mask is delta(a, i+1, j+1).
  std::vector<std::uint32_t> row(static_cast<std::size_t>(n) * k);
  auto reach = [&](const Word& w) {
    std::uint32_t cur = 1;
    for (Symbol a : w) {
      std::uint32_t next = 0;
      for (std::uint32_t i = 0; i < k; ++i)
        if (cur >> i & 1u) next |= row[static_cast<std::size_t>(id(a)) * k + i];
      cur = next;
      if (!cur) break;
    }
    return cur;
  };

  const std::vector<Word> pos(sample.positives().begin(), sample.positives().end());
  const std::vector<Word> neg(sample.negatives().begin(), sample.negatives().end());
  std::vector<std::uint32_t> pos_reach(pos.size());

  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << trans_bits); ++mask) {
    for (std::size_t r = 0; r < row.size(); ++r) row[r] = static_cast<std::uint32_t>(mask >> (r * k)) & state_mask;
    bool dead = false;
    for (std::size_t p = 0; p < pos.size(); ++p) {
      pos_reach[p] = reach(pos[p]);
      if (!pos_reach[p]) {
        dead = true;
        break;
      }
    }
    if (dead) continue;
    std::uint32_t forbidden = 0;
    for (const auto& w : neg) forbidden |= reach(w);
    for (std::uint32_t finals = 0; finals <= state_mask; ++finals) {
      if (finals & forbidden) continue;
      bool ok = true;
      for (auto r : pos_reach)
        if (!(r & finals)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      Nfa witness(k, n);
      for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t i = 0; i < k; ++i)
          for (std::uint32_t j = 0; j < k; ++j)
            if (row[a * k + i] >> j & 1u) witness.add_transition(i + 1, sym(a), j + 1);
      for (std::uint32_t q = 0; q < k; ++q)
        if (finals >> q & 1u) witness.set_final(q + 1);
      return {true, std::move(witness)};
    }
  }
  return {false, std::nullopt};
}

std::string to_json(const Nfa& nfa) {
  nlohmann::ordered_json j;
  j["k"] = nfa.state_count();
  j["n"] = nfa.alphabet_size();
  j["finals"] = nfa.finals();
  auto transitions = nlohmann::ordered_json::array();
  for (const auto& t : nfa.transitions())
    transitions.push_back({t.from, format_word(Word{t.symbol}, nfa.alphabet_size()), t.to});
  j["transitions"] = transitions;
  return j.dump() + "\n";
}

Nfa nfa_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Nfa nfa(j.at("k").get<std::uint32_t>(), j.at("n").get<std::size_t>());
    for (const auto& q : j.at("finals")) nfa.set_final(q.get<std::uint32_t>());
    for (const auto& t : j.at("transitions")) {
      if (!t.is_array() || t.size() != 3) throw ParseError("transition must be [from, symbol, to]");
      const Word a = parse_word(t[1].get<std::string>());
      if (a.size() != 1) throw ParseError("transition symbol must be a single symbol");
      nfa.add_transition(t[0].get<std::uint32_t>(), a[0], t[2].get<std::uint32_t>());
    }
    return nfa;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed NFA JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("invalid NFA: ") + e.what());
  }
}

std::string to_dot(const Nfa& nfa) {
  std::ostringstream os;
  os << "digraph nfa {\n  rankdir=LR;\n  start [shape=point];\n";
  for (std::uint32_t q = 1; q <= nfa.state_count(); ++q)
    os << "  q" << q << " [shape=" << (nfa.is_final(q) ? "doublecircle" : "circle") << "];\n";
  os << "  start -> q1;\n";
  for (const auto& t : nfa.transitions()) {
    std::string label = format_word(Word{t.symbol}, nfa.alphabet_size());
    if (!label.empty() && label.back() == ',') label.pop_back();
    os << "  q" << t.from << " -> q" << t.to << " [label=\"" << label << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace nfasat
