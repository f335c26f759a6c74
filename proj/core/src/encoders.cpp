#include "nfasat/encoders.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>

#include "nfasat/error.hpp"

namespace nfasat {
namespace {

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSat - b ? kSat : a + b; }
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSat / b ? kSat : a * b;
}
std::uint64_t sat_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

std::size_t count_longer_than_one(const WordSet& words) {
  return static_cast<std::size_t>(std::count_if(words.begin(), words.end(), [](const Word& w) { return w.size() > 1; }));
}

Word drop_last(const Word& w) { return Word(w.begin(), w.end() - 1); }
Word drop_first(const Word& w) { return Word(w.begin() + 1, w.end()); }

/// Shared construction machinery for all four models.
class Encoder {
 public:
  Encoder(const Sample& sample, unsigned k, const EncodeOptions& options) : sample_(sample), k_(k) {
    if (k == 0) throw InvalidArgument("number of states k must be at least 1");
    CnfLimits limits;
    limits.literal_budget = options.literal_budget;
    if (options.time_limit) limits.deadline = std::chrono::steady_clock::now() + *options.time_limit;
    cnf_.set_limits(limits);
  }

  /// f_1..f_k then delta(a,i,j) for every symbol and state pair.
  void declare_core() {
    for (std::uint32_t i = 1; i <= k_; ++i) cnf_.fresh_var(VarName::final_state(i));
    for (std::uint32_t a = 0; a < sample_.alphabet_size(); ++a)
      for (std::uint32_t i = 1; i <= k_; ++i)
        for (std::uint32_t j = 1; j <= k_; ++j) cnf_.fresh_var(VarName::trans(sym(a), i, j));
  }

  void lambda_units() {
    if (sample_.lambda_positive()) cnf_.add_clause({final_var(1)}, tag(ClauseFamily::Lambda));
    if (sample_.lambda_negative()) cnf_.add_clause({-final_var(1)}, tag(ClauseFamily::Lambda));
  }

  /// Path variables trp(x,i) for every x of a prefix-closed set, defined by
  /// trp(va,i) <-> OR_j trp(v,j) & delta(a,j,i). Single symbols alias delta.
  void prefix_machinery(const WordSet& closed_prefixes) {
    for (const Word& x : closed_prefixes) {
      const WordId xid = cnf_.words().intern(x);
      const Symbol a = x.back();
      if (x.size() == 1) {
        for (std::uint32_t i = 1; i <= k_; ++i)
          cnf_.alias_var(VarName::pref_path(xid, i), VarName::trans(a, 1, i));
        continue;
      }
      const WordId vid = cnf_.words().intern(drop_last(x));
      for (std::uint32_t i = 1; i <= k_; ++i) {
        const int w_i = cnf_.fresh_var(VarName::pref_path(xid, i));
        cover_.assign(1, -w_i);
        for (std::uint32_t j = 1; j <= k_; ++j) {
          const int aux = cnf_.fresh_var(VarName::aux_pref_rec(vid, a, j, i));
          const int v_j = pref_path(vid, j);
          const int d = delta(a, j, i);
          cnf_.add_clause({-aux, v_j}, tag(ClauseFamily::PrefRecPath));
          cnf_.add_clause({-aux, d}, tag(ClauseFamily::PrefRecTrans));
          cnf_.add_clause({aux, -v_j, -d}, tag(ClauseFamily::PrefRecRev));
          cnf_.add_clause({w_i, -aux}, tag(ClauseFamily::PrefRecImply));
          cover_.push_back(aux);
        }
        cnf_.add_clause(cover_, tag(ClauseFamily::PrefRecCover));
      }
    }
  }

  /// Path variables paths(x,i,j) for every x of a suffix-closed set, defined
  /// by paths(av,i,j) <-> OR_m delta(a,i,m) & paths(v,m,j). Strings outside
  /// `all_starts` only get start state 1.
  void suffix_machinery(const WordSet& closed_suffixes, const WordSet& all_starts) {
    for (const Word& x : closed_suffixes) {
      const WordId xid = cnf_.words().intern(x);
      const Symbol a = x.front();
      const std::uint32_t last_start = all_starts.contains(x) ? k_ : 1;
      if (x.size() == 1) {
        for (std::uint32_t i = 1; i <= last_start; ++i)
          for (std::uint32_t j = 1; j <= k_; ++j)
            cnf_.alias_var(VarName::suf_path(xid, i, j), VarName::trans(a, i, j));
        continue;
      }
      const WordId vid = cnf_.words().intern(drop_first(x));
      for (std::uint32_t i = 1; i <= last_start; ++i) {
        for (std::uint32_t j = 1; j <= k_; ++j) {
          const int w_ij = cnf_.fresh_var(VarName::suf_path(xid, i, j));
          cover_.assign(1, -w_ij);
          for (std::uint32_t m = 1; m <= k_; ++m) {
            const int aux = cnf_.fresh_var(VarName::aux_suf_rec(vid, a, i, m, j));
            const int v_mj = suf_path(vid, m, j);
            const int d = delta(a, i, m);
            cnf_.add_clause({-aux, v_mj}, tag(ClauseFamily::SufRecPath));
            cnf_.add_clause({-aux, d}, tag(ClauseFamily::SufRecTrans));
            cnf_.add_clause({aux, -v_mj, -d}, tag(ClauseFamily::SufRecRev));
            cnf_.add_clause({w_ij, -aux}, tag(ClauseFamily::SufRecImply));
            cover_.push_back(aux);
          }
          cnf_.add_clause(cover_, tag(ClauseFamily::SufRecCover));
        }
      }
    }
  }

  /// OR_i path(i) & f_i through auxiliaries aux_{w,i}.
  void accept(const Word& w, const std::function<int(std::uint32_t)>& path) {
    const WordId wid = cnf_.words().intern(w);
    std::vector<Lit> any;
    for (std::uint32_t i = 1; i <= k_; ++i) {
      const int aux = cnf_.fresh_var(VarName::aux_accept(wid, i));
      const int p = path(i);
      const int f = final_var(i);
      cnf_.add_clause({-aux, p}, tag(ClauseFamily::AcceptDef));
      cnf_.add_clause({-aux, f}, tag(ClauseFamily::AcceptDef));
      cnf_.add_clause({aux, -p, -f}, tag(ClauseFamily::AcceptRev));
      any.push_back(aux);
    }
    cnf_.add_clause(any, tag(ClauseFamily::AcceptOr));
  }

  void reject(const std::function<int(std::uint32_t)>& path) {
    for (std::uint32_t i = 1; i <= k_; ++i) cnf_.add_clause({-path(i), -final_var(i)}, tag(ClauseFamily::Reject));
  }

  /// w = p.s with both parts non-empty: OR_{j,m} trp(p,j) & paths(s,j,m) & f_m.
  void link_positive(const Word& w, const Word& p, const Word& s) {
    const WordId wid = cnf_.words().intern(w);
    const WordId pid = cnf_.words().intern(p);
    const WordId sid = cnf_.words().intern(s);
    std::vector<Lit> any;
    for (std::uint32_t j = 1; j <= k_; ++j) {
      for (std::uint32_t m = 1; m <= k_; ++m) {
        const int aux = cnf_.fresh_var(VarName::aux_hyb(wid, j, m));
        const int pj = pref_path(pid, j);
        const int sjm = suf_path(sid, j, m);
        const int f = final_var(m);
        cnf_.add_clause({-aux, pj}, tag(ClauseFamily::HybDef));
        cnf_.add_clause({-aux, sjm}, tag(ClauseFamily::HybDef));
        cnf_.add_clause({-aux, f}, tag(ClauseFamily::HybDef));
        cnf_.add_clause({aux, -pj, -sjm, -f}, tag(ClauseFamily::HybRev));
        any.push_back(aux);
      }
    }
    cnf_.add_clause(any, tag(ClauseFamily::HybOr));
  }

  void link_negative(const Word& p, const Word& s) {
    const WordId pid = cnf_.words().intern(p);
    const WordId sid = cnf_.words().intern(s);
    for (std::uint32_t j = 1; j <= k_; ++j)
      for (std::uint32_t m = 1; m <= k_; ++m)
        cnf_.add_clause({-pref_path(pid, j), -suf_path(sid, j, m), -final_var(m)}, tag(ClauseFamily::HybReject));
  }

  std::function<int(std::uint32_t)> prefix_path_of(const Word& w) {
    const WordId wid = cnf_.words().intern(w);
    return [this, wid](std::uint32_t i) { return pref_path(wid, i); };
  }
  std::function<int(std::uint32_t)> suffix_path_of(const Word& w) {
    const WordId wid = cnf_.words().intern(w);
    return [this, wid](std::uint32_t i) { return suf_path(wid, 1, i); };
  }

  int final_var(std::uint32_t i) const { return cnf_.index_of(VarName::final_state(i)); }
  int delta(Symbol a, std::uint32_t i, std::uint32_t j) const { return cnf_.index_of(VarName::trans(a, i, j)); }
  int pref_path(WordId w, std::uint32_t i) const { return cnf_.index_of(VarName::pref_path(w, i)); }
  int suf_path(WordId w, std::uint32_t i, std::uint32_t j) const { return cnf_.index_of(VarName::suf_path(w, i, j)); }

  CnfInstance& cnf() { return cnf_; }
  CnfInstance take() { return std::move(cnf_); }
  unsigned k() const { return k_; }

 private:
  const Sample& sample_;
  unsigned k_;
  CnfInstance cnf_;
  std::vector<Lit> cover_;
};

/// Elements of a suffix-closed set that are proper suffixes of another element.
WordSet inner_suffixes(const WordSet& closed_suffixes) {
  WordSet inner;
  for (const auto& x : closed_suffixes)
    if (x.size() > 1) inner.insert(drop_first(x));
  return inner;
}

/// Literal count of the direct model, computed per word without building it.
std::uint64_t direct_literal_count(const Sample& sample, unsigned k) {
  std::uint64_t total = 0;
  for (const auto& w : sample.positives()) {
    if (w.empty()) continue;
    const std::uint64_t paths = sat_pow(k, w.size());
    const std::uint64_t per_path = 2 * (w.size() + 1) + (w.size() + 2) + 1;
    total = sat_add(total, sat_mul(paths, per_path));
  }
  for (const auto& w : sample.negatives()) {
    if (w.empty()) continue;
    total = sat_add(total, sat_mul(sat_pow(k, w.size()), w.size() + 1));
  }
  return total;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Direct: return "dm";
    case ModelKind::Prefix: return "pm";
    case ModelKind::Suffix: return "sm";
    case ModelKind::Hybrid: return "hm";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view text) {
  std::string lower;
  for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "dm") return ModelKind::Direct;
  if (lower == "pm") return ModelKind::Prefix;
  if (lower == "sm") return ModelKind::Suffix;
  if (lower == "hm") return ModelKind::Hybrid;
  throw InvalidArgument("unknown model '" + std::string(text) + "' (expected dm, pm, sm or hm)");
}

std::string_view to_string(ClauseFamily family) {
  switch (family) {
    case ClauseFamily::Lambda: return "lambda";
    case ClauseFamily::DmPathDef: return "dm_path_def";
    case ClauseFamily::DmPathRev: return "dm_path_rev";
    case ClauseFamily::DmPathOr: return "dm_path_or";
    case ClauseFamily::DmReject: return "dm_reject";
    case ClauseFamily::AcceptDef: return "accept_def";
    case ClauseFamily::AcceptRev: return "accept_rev";
    case ClauseFamily::AcceptOr: return "accept_or";
    case ClauseFamily::Reject: return "reject";
    case ClauseFamily::PrefRecPath: return "pref_rec_path";
    case ClauseFamily::PrefRecTrans: return "pref_rec_trans";
    case ClauseFamily::PrefRecRev: return "pref_rec_rev";
    case ClauseFamily::PrefRecCover: return "pref_rec_cover";
    case ClauseFamily::PrefRecImply: return "pref_rec_imply";
    case ClauseFamily::SufRecPath: return "suf_rec_path";
    case ClauseFamily::SufRecTrans: return "suf_rec_trans";
    case ClauseFamily::SufRecRev: return "suf_rec_rev";
    case ClauseFamily::SufRecCover: return "suf_rec_cover";
    case ClauseFamily::SufRecImply: return "suf_rec_imply";
    case ClauseFamily::HybReject: return "hyb_reject";
    case ClauseFamily::HybDef: return "hyb_def";
    case ClauseFamily::HybRev: return "hyb_rev";
    case ClauseFamily::HybOr: return "hyb_or";
  }
  return "?";
}

CnfInstance encode_dm(const Sample& sample, unsigned k, const EncodeOptions& options) {
  if (k == 0) throw InvalidArgument("number of states k must be at least 1");
  if (options.literal_budget) {
    const auto needed = direct_literal_count(sample, k);
    if (needed > options.literal_budget)
      throw InstanceTooLarge("instance too large: direct model needs " +
                             (needed == kSat ? std::string("more than 2^64") : std::to_string(needed)) +
                             " literals, budget is " + std::to_string(options.literal_budget));
  }
  Encoder enc(sample, k, options);
  enc.declare_core();
  enc.lambda_units();
  CnfInstance& cnf = enc.cnf();

  // Visits every c_path of w from state 1 in lexicographic order of the state
  // sequence, passing the distinct transition literals and the end state.
  auto for_each_path = [&](const Word& w, auto&& visit) {
    std::vector<std::uint32_t> states(w.size() + 1, 1);
    std::vector<Lit> lits;
    for (std::uint32_t d = 0;; ++d) {
      lits.clear();
      for (std::size_t t = 0; t < w.size(); ++t) {
        const Lit l = enc.delta(w[t], states[t], states[t + 1]);
        if (std::find(lits.begin(), lits.end(), l) == lits.end()) lits.push_back(l);
      }
      visit(d, lits, states.back());
      std::size_t pos = w.size();
      while (pos >= 1 && states[pos] == k) states[pos--] = 1;
      if (pos == 0) break;
      ++states[pos];
    }
  };

  std::vector<Lit> clause;
  for (const auto& w : sample.positives()) {
    if (w.empty()) continue;
    const WordId wid = cnf.words().intern(w);
    std::vector<Lit> any;
    for_each_path(w, [&](std::uint32_t d, const std::vector<Lit>& lits, std::uint32_t j) {
      const int aux = cnf.unindexed_var(VarName::aux_path(wid, j, d));
      const int f = enc.final_var(j);
      for (Lit l : lits) cnf.add_clause({-aux, l}, tag(ClauseFamily::DmPathDef));
      cnf.add_clause({-aux, f}, tag(ClauseFamily::DmPathDef));
      clause.assign(1, aux);
      for (Lit l : lits) clause.push_back(-l);
      clause.push_back(-f);
      cnf.add_clause(clause, tag(ClauseFamily::DmPathRev));
      any.push_back(aux);
    });
    cnf.add_clause(any, tag(ClauseFamily::DmPathOr));
  }
  for (const auto& w : sample.negatives()) {
    if (w.empty()) continue;
    for_each_path(w, [&](std::uint32_t, const std::vector<Lit>& lits, std::uint32_t j) {
      clause.clear();
      for (Lit l : lits) clause.push_back(-l);
      clause.push_back(-enc.final_var(j));
      cnf.add_clause(clause, tag(ClauseFamily::DmReject));
    });
  }
  return enc.take();
}

CnfInstance encode_pm(const Sample& sample, unsigned k, const EncodeOptions& options) {
  Encoder enc(sample, k, options);
  enc.declare_core();
  enc.lambda_units();
  enc.prefix_machinery(prefixes(sample.all_words()));
  const auto& words = sample.splittable_words();
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i < sample.splittable_positive_count())
      enc.accept(words[i], enc.prefix_path_of(words[i]));
    else
      enc.reject(enc.prefix_path_of(words[i]));
  }
  return enc.take();
}

CnfInstance encode_sm(const Sample& sample, unsigned k, const EncodeOptions& options) {
  Encoder enc(sample, k, options);
  enc.declare_core();
  enc.lambda_units();
  const WordSet closed = suffixes(sample.all_words());
  enc.suffix_machinery(closed, inner_suffixes(closed));
  const auto& words = sample.splittable_words();
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i < sample.splittable_positive_count())
      enc.accept(words[i], enc.suffix_path_of(words[i]));
    else
      enc.reject(enc.suffix_path_of(words[i]));
  }
  return enc.take();
}

CnfInstance encode_hm(const Sample& sample, unsigned k, const SplitAssignment& cuts, const EncodeOptions& options) {
  const SplitSets split = split_sets(sample, cuts);
  Encoder enc(sample, k, options);
  enc.declare_core();
  enc.lambda_units();
  enc.prefix_machinery(prefixes(split.prefixes));

  const WordSet closed = suffixes(split.suffixes);
  WordSet all_starts = inner_suffixes(closed);
  for (const auto& part : split.parts)
    if (!part.prefix.empty() && !part.suffix.empty()) all_starts.insert(part.suffix);
  enc.suffix_machinery(closed, all_starts);

  const auto& words = sample.splittable_words();
  for (std::size_t i = 0; i < words.size(); ++i) {
    const bool positive = i < sample.splittable_positive_count();
    const auto& [p, s] = split.parts[i];
    if (s.empty()) {
      if (positive)
        enc.accept(words[i], enc.prefix_path_of(words[i]));
      else
        enc.reject(enc.prefix_path_of(words[i]));
    } else if (p.empty()) {
      if (positive)
        enc.accept(words[i], enc.suffix_path_of(words[i]));
      else
        enc.reject(enc.suffix_path_of(words[i]));
    } else if (positive) {
      enc.link_positive(words[i], p, s);
    } else {
      enc.link_negative(p, s);
    }
  }
  return enc.take();
}

CnfInstance encode(ModelKind kind, const Sample& sample, unsigned k, const SplitAssignment* cuts,
                   const EncodeOptions& options) {
  switch (kind) {
    case ModelKind::Direct: return encode_dm(sample, k, options);
    case ModelKind::Prefix: return encode_pm(sample, k, options);
    case ModelKind::Suffix: return encode_sm(sample, k, options);
    case ModelKind::Hybrid:
      if (!cuts) throw InvalidArgument("hybrid model requires a split assignment");
      return encode_hm(sample, k, *cuts, options);
  }
  throw InvalidArgument("unknown model kind");
}

std::uint64_t SizeEstimate::var_bound() const {
  std::uint64_t total = 0;
  for (const auto& [kind, count] : vars) total = sat_add(total, count);
  return total;
}

std::uint64_t SizeEstimate::clause_bound() const {
  std::uint64_t total = 0;
  for (const auto& [family, bound] : clauses) total = sat_add(total, bound.clauses);
  return total;
}

std::uint64_t SizeEstimate::table_var_bound() const {
  std::uint64_t total = 0;
  for (const auto& [kind, count] : vars)
    if (kind != VarKind::PrefPath && kind != VarKind::SufPath) total = sat_add(total, count);
  return total;
}

std::uint64_t SizeEstimate::literal_bound() const {
  std::uint64_t total = 0;
  for (const auto& [family, bound] : clauses) total = sat_add(total, sat_mul(bound.clauses, bound.max_arity));
  return total;
}

SizeEstimate estimate_size(ModelKind kind, const Sample& sample, unsigned k, const SplitAssignment* cuts) {
  if (k == 0) throw InvalidArgument("number of states k must be at least 1");
  SizeEstimate est;
  const std::uint64_t kk = k;
  const std::uint64_t k2 = kk * kk;
  const std::uint64_t k3 = k2 * kk;
  const std::uint64_t n = sample.alphabet_size();
  const std::uint64_t s_plus = sample.positives().size();
  const std::uint64_t s_minus = sample.negatives().size();

  est.vars[VarKind::Final] = kk;
  est.vars[VarKind::Trans] = sat_mul(n, k2);
  if (sample.lambda_positive() || sample.lambda_negative()) est.clauses[ClauseFamily::Lambda] = {1, 1};

  auto acceptance = [&](std::uint64_t pos, std::uint64_t neg) {
    if (pos) {
      est.vars[VarKind::AuxAccept] = sat_mul(pos, kk);
      est.clauses[ClauseFamily::AcceptDef] = {sat_mul(2 * kk, pos), 2};
      est.clauses[ClauseFamily::AcceptRev] = {sat_mul(kk, pos), 3};
      est.clauses[ClauseFamily::AcceptOr] = {pos, k + 1};
    }
    if (neg) est.clauses[ClauseFamily::Reject] = {sat_mul(kk, neg), 2};
  };
  auto prefix_rec = [&](std::uint64_t pi) {
    if (!pi) return;
    est.vars[VarKind::PrefPath] = sat_mul(pi, kk);
    est.vars[VarKind::AuxPrefRec] = sat_mul(pi, k2);
    est.clauses[ClauseFamily::PrefRecPath] = {sat_mul(pi, k2), 2};
    est.clauses[ClauseFamily::PrefRecTrans] = {sat_mul(pi, k2), 2};
    est.clauses[ClauseFamily::PrefRecRev] = {sat_mul(pi, k2), 3};
    est.clauses[ClauseFamily::PrefRecCover] = {sat_mul(pi, kk), k + 1};
    est.clauses[ClauseFamily::PrefRecImply] = {sat_mul(pi, k2), 2};
  };
  auto suffix_rec = [&](std::uint64_t pi) {
    if (!pi) return;
    est.vars[VarKind::SufPath] = sat_mul(pi, k2);
    est.vars[VarKind::AuxSufRec] = sat_mul(pi, k3);
    est.clauses[ClauseFamily::SufRecPath] = {sat_mul(pi, k3), 2};
    est.clauses[ClauseFamily::SufRecTrans] = {sat_mul(pi, k3), 2};
    est.clauses[ClauseFamily::SufRecRev] = {sat_mul(pi, k3), 3};
    est.clauses[ClauseFamily::SufRecCover] = {sat_mul(pi, k2), k + 1};
    est.clauses[ClauseFamily::SufRecImply] = {sat_mul(pi, k3), 2};
  };

  switch (kind) {
    case ModelKind::Direct: {
      std::size_t longest_pos = 0;
      std::size_t longest_neg = 0;
      for (const auto& w : sample.positives()) longest_pos = std::max(longest_pos, w.size());
      for (const auto& w : sample.negatives()) longest_neg = std::max(longest_neg, w.size());
      const std::uint64_t paths_pos = sat_pow(kk, longest_pos);
      const std::uint64_t paths_neg = sat_pow(kk, longest_neg);
      if (s_plus) {
        est.vars[VarKind::AuxPathD] = sat_mul(s_plus, paths_pos);
        est.clauses[ClauseFamily::DmPathDef] = {sat_mul(sat_mul(s_plus, longest_pos + 1), paths_pos), 2};
        est.clauses[ClauseFamily::DmPathRev] = {sat_mul(s_plus, paths_pos), longest_pos + 2};
        est.clauses[ClauseFamily::DmPathOr] = {s_plus, paths_pos > SIZE_MAX ? SIZE_MAX : static_cast<std::size_t>(paths_pos)};
      }
      if (s_minus) est.clauses[ClauseFamily::DmReject] = {sat_mul(s_minus, paths_neg), longest_neg + 1};
      break;
    }
    case ModelKind::Prefix:
      acceptance(s_plus, s_minus);
      prefix_rec(count_longer_than_one(prefixes(sample.all_words())));
      break;
    case ModelKind::Suffix:
      acceptance(s_plus, s_minus);
      suffix_rec(count_longer_than_one(suffixes(sample.all_words())));
      break;
    case ModelKind::Hybrid: {
      if (!cuts) throw InvalidArgument("hybrid model requires a split assignment");
      const SplitSets split = split_sets(sample, *cuts);
      std::uint64_t linked_pos = 0;
      std::uint64_t linked_neg = 0;
      for (std::size_t i = 0; i < split.parts.size(); ++i) {
        if (split.parts[i].prefix.empty() || split.parts[i].suffix.empty()) continue;
        (i < sample.splittable_positive_count() ? linked_pos : linked_neg) += 1;
      }
      acceptance(s_plus, s_minus);
      prefix_rec(count_longer_than_one(prefixes(split.prefixes)));
      suffix_rec(count_longer_than_one(suffixes(split.suffixes)));
      if (linked_pos) {
        est.vars[VarKind::AuxHyb] = sat_mul(linked_pos, k2);
        est.clauses[ClauseFamily::HybDef] = {sat_mul(3 * k2, linked_pos), 2};
        est.clauses[ClauseFamily::HybRev] = {sat_mul(k2, linked_pos), 4};
        est.clauses[ClauseFamily::HybOr] = {linked_pos, static_cast<std::size_t>(k2)};
      }
      if (linked_neg) est.clauses[ClauseFamily::HybReject] = {sat_mul(k2, linked_neg), 3};
      break;
    }
  }
  return est;
}

std::vector<std::string> bound_violations(const CnfInstance& cnf, const SizeEstimate& estimate) {
  std::vector<std::string> out;
  for (ClauseFamily family : kAllClauseFamilies) {
    const auto stats = cnf.tag_stats(tag(family));
    if (stats.clauses == 0) continue;
    auto it = estimate.clauses.find(family);
    const FamilyBound bound = it == estimate.clauses.end() ? FamilyBound{} : it->second;
    if (stats.clauses > bound.clauses || stats.max_arity > bound.max_arity)
      out.push_back(std::string(to_string(family)) + ": " + std::to_string(stats.clauses) + " clauses (bound " +
                    std::to_string(bound.clauses) + "), arity " + std::to_string(stats.max_arity) + " (bound " +
                    std::to_string(bound.max_arity) + ")");
  }
  for (std::size_t i = 0; i < kVarKindCount; ++i) {
    const auto kind = static_cast<VarKind>(i);
    const auto count = cnf.var_count(kind);
    if (count == 0) continue;
    auto it = estimate.vars.find(kind);
    const std::uint64_t bound = it == estimate.vars.end() ? 0 : it->second;
    if (count > bound)
      out.push_back(std::string(to_string(kind)) + ": " + std::to_string(count) + " variables (bound " +
                    std::to_string(bound) + ")");
  }
  return out;
}

}  // namespace nfasat
