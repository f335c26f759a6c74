#include <gtest/gtest.h>

#include <chrono>

#include "nfasat/encoders.hpp"
#include "nfasat/error.hpp"
#include "nfasat/solver.hpp"
#include "oracles.hpp"

namespace nfasat {
namespace {

using testing::make_sample;

std::vector<std::vector<Lit>> clauses_of(const CnfInstance& cnf) {
  std::vector<std::vector<Lit>> out;
  for (std::size_t i = 0; i < cnf.clause_count(); ++i) out.emplace_back(cnf.clause(i).begin(), cnf.clause(i).end());
  return out;
}

WordId word_id(const CnfInstance& cnf, const char* text) {
  const auto id = cnf.words().find(parse_word(text));
  if (!id) throw std::logic_error(std::string("word not interned: ") + text);
  return *id;
}

bool solved_sat(const CnfInstance& cnf) {
  const auto out = solve_embedded(cnf, 60);
  EXPECT_NE(out.status, SatStatus::Unknown);
  return out.status == SatStatus::Sat;
}

TEST(Encoders, ParseModelKind) {
  EXPECT_EQ(parse_model_kind("dm"), ModelKind::Direct);
  EXPECT_EQ(parse_model_kind("PM"), ModelKind::Prefix);
  EXPECT_EQ(parse_model_kind("sm"), ModelKind::Suffix);
  EXPECT_EQ(parse_model_kind("Hm"), ModelKind::Hybrid);
  EXPECT_THROW(parse_model_kind("xm"), InvalidArgument);
  EXPECT_EQ(to_string(ModelKind::Hybrid), "hm");
}

TEST(Encoders, RejectBadArguments) {
  const Sample s = make_sample(2, {"a"}, {});
  EXPECT_THROW(encode_pm(s, 0), InvalidArgument);
  EXPECT_THROW(encode(ModelKind::Hybrid, s, 2), InvalidArgument);
  EXPECT_THROW(encode_hm(s, 2, SplitAssignment{{2}}), InvalidArgument);
}

TEST(Encoders, DirectModelSingleWord) {
  const Sample s = make_sample(1, {"a"}, {});
  const CnfInstance cnf = encode_dm(s, 1);
  ASSERT_EQ(cnf.var_count(), 3);
  const int f = cnf.index_of(VarName::final_state(1));
  const int d = cnf.index_of(VarName::trans(sym(0), 1, 1));
  const int aux = 3;
  EXPECT_EQ(cnf.name_of(aux).kind, VarKind::AuxPathD);
  const std::vector<std::vector<Lit>> expected{{-aux, d}, {-aux, f}, {aux, -d, -f}, {aux}};
  EXPECT_EQ(clauses_of(cnf), expected);
  EXPECT_TRUE(testing::brute_force_sat(cnf).has_value());
}

TEST(Encoders, LambdaUnits) {
  for (ModelKind kind : {ModelKind::Direct, ModelKind::Prefix, ModelKind::Suffix}) {
    const CnfInstance pos = encode(kind, make_sample(1, {""}, {}), 2);
    const CnfInstance neg = encode(kind, make_sample(1, {}, {""}), 2);
    EXPECT_EQ(clauses_of(pos), (std::vector<std::vector<Lit>>{{1}}));
    EXPECT_EQ(clauses_of(neg), (std::vector<std::vector<Lit>>{{-1}}));
  }
  const Sample s = make_sample(1, {""}, {"a"});
  EXPECT_TRUE(testing::brute_force_sat(encode_pm(s, 1)).has_value());
  EXPECT_FALSE(testing::brute_force_sat(encode_pm(make_sample(1, {"", "aa"}, {"a"}), 1)).has_value());
}

TEST(Encoders, DirectModelHasOneAuxiliaryPerPath) {
  const Sample s = make_sample(2, {"ab"}, {});
  const CnfInstance cnf = encode_dm(s, 2);
  EXPECT_EQ(cnf.var_count(VarKind::AuxPathD), 4u);
  EXPECT_EQ(cnf.tag_stats(tag(ClauseFamily::DmPathOr)).max_arity, 4u);
}

TEST(Encoders, DirectModelBudget) {
  Word long_word(30, sym(0));
  const Sample s(1, WordSet{long_word}, {});
  EXPECT_THROW(encode_dm(s, 5), InstanceTooLarge);
  EncodeOptions small;
  small.literal_budget = 10;
  EXPECT_THROW(encode_dm(make_sample(2, {"abab"}, {}), 2, small), InstanceTooLarge);
  EXPECT_THROW(encode_pm(make_sample(2, {"abab"}, {"ba"}), 3, small), InstanceTooLarge);
}

TEST(Encoders, GenerationTimeLimit) {
  Rng rng(3);
  WordSet pos;
  for (int i = 0; i < 200; ++i) pos.insert(testing::random_word(rng, 2, 20));
  const Sample s(2, pos, {});
  EncodeOptions opts;
  opts.time_limit = std::chrono::nanoseconds(0);
  EXPECT_THROW(encode_sm(s, 4, opts), GenerationTimeout);
}

TEST(Encoders, PrefixModelExample) {
  const Sample s = make_sample(2, {"ab"}, {"b"});
  const CnfInstance cnf = encode_pm(s, 2);
  const WordId a = word_id(cnf, "a");
  const WordId ab = word_id(cnf, "ab");
  for (std::uint32_t i = 1; i <= 2; ++i) {
    EXPECT_EQ(cnf.index_of(VarName::pref_path(a, i)), cnf.index_of(VarName::trans(sym(0), 1, i)));
    EXPECT_EQ(cnf.name_of(cnf.index_of(VarName::pref_path(ab, i))).kind, VarKind::PrefPath);
  }
  const auto out = solve_embedded(cnf, 60);
  ASSERT_EQ(out.status, SatStatus::Sat);
  const Nfa nfa = decode_nfa(*out.assignment, cnf, 2, 2);
  EXPECT_TRUE(accepts(nfa, parse_word("ab")));
  EXPECT_FALSE(accepts(nfa, parse_word("b")));
  EXPECT_TRUE(oracle_exists(s, 2).exists);
}

TEST(Encoders, PrefixModelAcceptanceFamily) {
  const Sample s = make_sample(2, {"ab", "b", "aab"}, {"a"});
  for (unsigned k = 1; k <= 4; ++k) {
    const CnfInstance cnf = encode_pm(s, k);
    EXPECT_EQ(cnf.var_count(VarKind::AuxAccept), 3u * k);
    const auto acc = cnf.tag_stats(tag(ClauseFamily::AcceptOr));
    EXPECT_EQ(acc.clauses, 3u);
    EXPECT_EQ(acc.literals, 3u * k);
  }
}

TEST(Encoders, SuffixModelAliasesAndPruning) {
  const Sample s = make_sample(2, {"ab"}, {});
  const CnfInstance cnf = encode_sm(s, 2);
  const WordId b = word_id(cnf, "b");
  const WordId ab = word_id(cnf, "ab");
  for (std::uint32_t i = 1; i <= 2; ++i)
    for (std::uint32_t j = 1; j <= 2; ++j)
      EXPECT_EQ(cnf.index_of(VarName::suf_path(b, i, j)), cnf.index_of(VarName::trans(sym(1), i, j)));
  EXPECT_EQ(cnf.alias_count(), 4u);
  EXPECT_TRUE(cnf.find(VarName::suf_path(ab, 1, 1)));
  EXPECT_TRUE(cnf.find(VarName::suf_path(ab, 1, 2)));
  EXPECT_FALSE(cnf.find(VarName::suf_path(ab, 2, 1)));
  EXPECT_EQ(cnf.var_count(VarKind::AuxSufRec), 4u);
  EXPECT_TRUE(solved_sat(cnf));
}

TEST(Encoders, SuffixModelKeepsAllStartsForInnerSuffixes) {
  const Sample s = make_sample(2, {"ab", "aab"}, {});
  const CnfInstance cnf = encode_sm(s, 3);
  const WordId ab = word_id(cnf, "ab");
  const WordId aab = word_id(cnf, "aab");
  for (std::uint32_t i = 1; i <= 3; ++i) EXPECT_TRUE(cnf.find(VarName::suf_path(ab, i, 1)));
  EXPECT_FALSE(cnf.find(VarName::suf_path(aab, 2, 1)));
  // ab is an inner suffix (k^3 recursion auxiliaries), aab is pruned (k^2).
  EXPECT_EQ(cnf.var_count(VarKind::AuxSufRec), 27u + 9u);
}

TEST(Encoders, SuffixModelSingleState) {
  const Sample s = make_sample(2, {"a"}, {"b"});
  const auto out = solve_embedded(encode_sm(s, 1), 60);
  ASSERT_EQ(out.status, SatStatus::Sat);
  const Nfa nfa = decode_nfa(*out.assignment, encode_sm(s, 1), 1, 2);
  EXPECT_TRUE(nfa.is_final(1));
  EXPECT_TRUE(nfa.has_transition(1, sym(0), 1));
  EXPECT_FALSE(nfa.has_transition(1, sym(1), 1));
}

TEST(Encoders, HybridDegenerateSplitsReproducePrefixAndSuffixModels) {
  Rng rng(5);
  for (int i = 0; i < 40; ++i) {
    const Sample s = testing::random_sample(rng, 2, 8, 6);
    for (unsigned k = 1; k <= 3; ++k) {
      EXPECT_EQ(to_dimacs(encode_hm(s, k, all_prefix_cuts(s))), to_dimacs(encode_pm(s, k)));
      EXPECT_EQ(to_dimacs(encode_hm(s, k, all_suffix_cuts(s))), to_dimacs(encode_sm(s, k)));
    }
  }
}

TEST(Encoders, HybridExample) {
  const Sample s = make_sample(2, {"ab"}, {"b"});
  const SplitAssignment cuts{{1, 0}};
  const CnfInstance cnf = encode_hm(s, 2, cuts);
  const auto out = solve_embedded(cnf, 60);
  ASSERT_EQ(out.status, SatStatus::Sat);
  const Nfa nfa = decode_nfa(*out.assignment, cnf, 2, 2);
  EXPECT_TRUE(accepts(nfa, parse_word("ab")));
  EXPECT_FALSE(accepts(nfa, parse_word("b")));
  for (ModelKind kind : {ModelKind::Direct, ModelKind::Prefix, ModelKind::Suffix})
    EXPECT_TRUE(solved_sat(encode(kind, s, 2)));
  EXPECT_EQ(cnf.var_count(VarKind::AuxHyb), 4u);
}

TEST(Encoders, SizeBoundsOfSmallExample) {
  const Sample s = make_sample(2, {"ab"}, {});
  const SizeEstimate pm = estimate_size(ModelKind::Prefix, s, 2);
  const SizeEstimate sm = estimate_size(ModelKind::Suffix, s, 2);
  EXPECT_EQ(pm.table_var_bound(), 16u);
  EXPECT_EQ(sm.table_var_bound(), 20u);
  EXPECT_TRUE(bound_violations(encode_pm(s, 2), pm).empty());
  EXPECT_TRUE(bound_violations(encode_sm(s, 2), sm).empty());
  const CnfInstance cnf = encode_pm(s, 2);
  EXPECT_LE(static_cast<std::uint64_t>(cnf.var_count()), pm.var_bound());
  EXPECT_LE(cnf.clause_count(), pm.clause_bound());
}

TEST(Encoders, BoundViolationsAreReported) {
  const Sample small = make_sample(2, {"a"}, {});
  const Sample big = make_sample(2, {"abab", "bb", "a"}, {"ba"});
  const auto v = bound_violations(encode_pm(big, 3), estimate_size(ModelKind::Prefix, small, 3));
  EXPECT_FALSE(v.empty());
}

TEST(Encoders, Deterministic) {
  Rng rng(9);
  const Sample s = testing::random_sample(rng, 3, 10, 6);
  const SplitAssignment cuts = testing::random_split(rng, s);
  for (ModelKind kind : {ModelKind::Direct, ModelKind::Prefix, ModelKind::Suffix, ModelKind::Hybrid})
    EXPECT_EQ(to_dimacs(encode(kind, s, 2, &cuts)), to_dimacs(encode(kind, s, 2, &cuts)));
}

class EncoderProperties : public ::testing::TestWithParam<int> {};

// With F and delta fixed to an NFA, every auxiliary is determined by its
// definition. The formula holds under those values exactly when the NFA is
// consistent with the sample.
TEST_P(EncoderProperties, FormulaHoldsExactlyForConsistentAutomata) {
  Rng rng(static_cast<std::uint64_t>(GetParam()));
  int consistent = 0;
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 1 + rng.below(2);
    const Sample s = testing::random_sample(rng, n, 6, 5);
    const auto k = static_cast<std::uint32_t>(1 + rng.below(3));
    const SplitAssignment cuts = testing::random_split(rng, s);
    const auto map = testing::cut_map(s, cuts);
    const CnfInstance models[] = {encode_dm(s, k), encode_pm(s, k), encode_sm(s, k), encode_hm(s, k, cuts)};
    for (int t = 0; t < 8; ++t) {
      const Nfa nfa = testing::random_nfa(rng, k, n, 0.2 + 0.6 * rng.unit());
      const bool ok = verify(nfa, s).ok;
      consistent += ok;
      for (const auto& cnf : models) {
        const auto values = testing::semantic_assignment(cnf, nfa, map);
        EXPECT_EQ(testing::satisfies(cnf, values), ok) << to_string(s) << "k=" << k << "\n" << to_json(nfa);
      }
    }
  }
  EXPECT_GT(consistent, 0);
}

TEST_P(EncoderProperties, VerdictsMatchExhaustiveSearch) {
  Rng rng(static_cast<std::uint64_t>(GetParam()) + 1000);
  for (int i = 0; i < 25; ++i) {
    const Sample s = testing::random_sample(rng, 2, 6, 4);
    for (std::uint32_t k = 1; k <= 2; ++k) {
      const bool expected = oracle_exists(s, k).exists;
      const SplitAssignment cuts = testing::random_split(rng, s);
      for (ModelKind kind : {ModelKind::Direct, ModelKind::Prefix, ModelKind::Suffix, ModelKind::Hybrid}) {
        const CnfInstance cnf = encode(kind, s, k, &cuts);
        const auto out = solve_embedded(cnf, 60);
        ASSERT_NE(out.status, SatStatus::Unknown);
        EXPECT_EQ(out.status == SatStatus::Sat, expected) << to_string(kind) << " k=" << k << "\n" << to_string(s);
        if (out.status == SatStatus::Sat) EXPECT_TRUE(verify(decode_nfa(*out.assignment, cnf, k, 2), s).ok);
      }
    }
  }
}

TEST_P(EncoderProperties, GeneratedSizesStayWithinBounds) {
  Rng rng(static_cast<std::uint64_t>(GetParam()) + 2000);
  for (int i = 0; i < 30; ++i) {
    const std::size_t n = 1 + rng.below(4);
    const Sample s = testing::random_sample(rng, n, 10, 7);
    const auto k = static_cast<unsigned>(1 + rng.below(4));
    const SplitAssignment cuts = testing::random_split(rng, s);
    for (ModelKind kind : {ModelKind::Direct, ModelKind::Prefix, ModelKind::Suffix, ModelKind::Hybrid}) {
      if (kind == ModelKind::Direct && k > 3) continue;
      const CnfInstance cnf = encode(kind, s, k, &cuts);
      const SizeEstimate est = estimate_size(kind, s, k, &cuts);
      const auto violations = bound_violations(cnf, est);
      EXPECT_TRUE(violations.empty()) << to_string(kind) << ": " << (violations.empty() ? "" : violations.front());
      EXPECT_LE(static_cast<std::uint64_t>(cnf.var_count()), est.var_bound());
      EXPECT_LE(cnf.clause_count(), est.clause_bound());
      EXPECT_LE(cnf.literal_count(), est.literal_bound());
    }
  }
}

TEST_P(EncoderProperties, DirectModelArities) {
  Rng rng(static_cast<std::uint64_t>(GetParam()) + 3000);
  for (int i = 0; i < 20; ++i) {
    const Sample s = testing::random_sample(rng, 2, 5, 5);
    const auto k = static_cast<unsigned>(1 + rng.below(3));
    const CnfInstance cnf = encode_dm(s, k);
    std::size_t longest = 0;
    for (const auto& w : s.all_words()) longest = std::max(longest, w.size());
    const bool any_positive = s.splittable_positive_count() > 0;
    EXPECT_EQ(cnf.tag_stats(tag(ClauseFamily::DmPathDef)).max_arity, any_positive ? 2u : 0u);
    EXPECT_LE(cnf.tag_stats(tag(ClauseFamily::DmPathRev)).max_arity, longest + 2);
    EXPECT_LE(cnf.tag_stats(tag(ClauseFamily::DmReject)).max_arity, longest + 1);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, EncoderProperties, ::testing::Range(1, 5));

}  // namespace
}  // namespace nfasat
