#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace nct;

namespace {

const RealBasis& bg() {
  static const RealBasis b({"1", "beta", "gamma"});
  return b;
}

SymReal sr(Rational a, Rational b = 0, Rational c = 0) { return SymReal(bg(), {a, b, c}); }

SkewMatrix example(Rational q) {
  std::vector<SymReal> up{sr(0, 1), sr(0, 0, 1), sr(q)};
  return SkewMatrix::from_upper(3, bg(), up);
}

LinearFunctionalZ functional(std::vector<SymReal> v) { return LinearFunctionalZ(bg(), std::move(v)); }

Rational small_fraction(oracle::Rng& rng, long den) { return make_rational(rng.uniform(-2 * den, 2 * den), den); }

// (1, r, beta + s): N = 3, kernel rank 1 whenever r != 0.
LinearFunctionalZ random_rank_one(oracle::Rng& rng) {
  long den = rng.uniform(2, 6);
  Rational r = 0;
  while (r == 0) r = small_fraction(rng, den);
  return functional({sr(1), sr(r), sr(small_fraction(rng, den), 1)});
}

}  // namespace

TEST(Classify, ThreeTorusPairIsNotIsomorphic) {
  DecisionOutcome o = decide_isomorphic(example(Rational(2, 5)), example(Rational(1, 5)));
  ASSERT_EQ(o.verdict, Verdict::negative);
  const auto* c = std::get_if<UnimodularityObstruction>(&o.certificate);
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->gcd, 5);
  EXPECT_EQ(c->constant, 2);
  EXPECT_EQ(affine_form_text(*c), "2 + 5r");
  EXPECT_EQ(c->base, (IntMatrix{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 2}}));
  IntVector w = c->kernel.row_vector(0);
  EXPECT_EQ(w, (IntVector{-1, 0, 0, 5}));

  LinearFunctionalZ f1 = LinearFunctionalZ::from(exterior_exp(example(Rational(2, 5))), bg());
  LinearFunctionalZ f2 = LinearFunctionalZ::from(exterior_exp(example(Rational(1, 5))), bg());
  EXPECT_TRUE(verify_certificate(f1, f2, o.certificate));
  // independent check: no admissible matrix with entries in [-1, 1]
  EXPECT_FALSE(oracle::brute_force_equivalence(f1, f2, 1).has_value());

  DecisionOutcome back = decide_isomorphic(example(Rational(1, 5)), example(Rational(2, 5)));
  EXPECT_EQ(back.verdict, Verdict::negative);
}

TEST(Classify, ThreeTorusPairIsMoritaEquivalent) {
  DecisionOutcome o = decide_morita(example(Rational(2, 5)), example(Rational(1, 5)));
  EXPECT_EQ(o.verdict, Verdict::positive);
  EXPECT_EQ(*o.scale, 1);
}

TEST(Classify, ShearedCopyIsIsomorphic) {
  // theta_23 = 2/5 + gamma is a basis change of the example; the cheap path finds it.
  std::vector<SymReal> up{sr(0, 1), sr(0, 0, 1), sr(Rational(2, 5), 0, 1)};
  SkewMatrix sheared = SkewMatrix::from_upper(3, bg(), up);
  DecisionOutcome o = decide_isomorphic(example(Rational(2, 5)), sheared);
  ASSERT_EQ(o.verdict, Verdict::positive);
  ASSERT_TRUE(o.witness.has_value());
  LinearFunctionalZ f1 = LinearFunctionalZ::from(exterior_exp(example(Rational(2, 5))), bg());
  LinearFunctionalZ f2 = LinearFunctionalZ::from(exterior_exp(sheared), bg());
  EXPECT_TRUE(verify_isomorphism_witness(f1, f2, *o.witness));
  if (o.basis_change) {
    EXPECT_EQ(conjugate(sheared, *o.basis_change), example(Rational(2, 5)));
  }
  // without the shortcut the functional decision must agree
  DecisionOptions opt;
  opt.cheap_path = false;
  DecisionOutcome slow = decide_isomorphic(example(Rational(2, 5)), sheared, opt);
  EXPECT_EQ(slow.verdict, Verdict::positive);
  EXPECT_TRUE(verify_isomorphism_witness(f1, f2, *slow.witness));
}

TEST(Classify, MoritaScaleAndRank) {
  RealBasis b4({"1", "beta", "gamma", "delta"});
  auto s4 = [&](Rational a, Rational b, Rational c, Rational d) { return SymReal(b4, {a, b, c, d}); };
  std::vector<SymReal> u1{s4(0, 1, 0, 0), s4(0, 0, 1, 0), s4(Rational(2, 5), 0, 0, 0)};
  std::vector<SymReal> u2{s4(0, 5, 0, 0), s4(0, 0, 5, 0), s4(0, 0, 0, 0)};
  std::vector<SymReal> u3{s4(0, 1, 0, 0), s4(0, 0, 1, 0), s4(0, 0, 0, 1)};
  SkewMatrix t1 = SkewMatrix::from_upper(3, b4, u1);
  SkewMatrix t2 = SkewMatrix::from_upper(3, b4, u2);
  SkewMatrix t3 = SkewMatrix::from_upper(3, b4, u3);
  DecisionOutcome o = decide_morita(t1, t2);
  ASSERT_EQ(o.verdict, Verdict::positive);
  EXPECT_EQ(*o.scale, Rational(1, 5));
  EXPECT_EQ(subgroup_scale(trace_range(t2), *o.scale), trace_range(t1));
  DecisionOutcome r = decide_morita(t1, t3);
  EXPECT_EQ(r.verdict, Verdict::negative);
  const auto* rm = std::get_if<RankMismatch>(&r.certificate);
  ASSERT_NE(rm, nullptr);
  EXPECT_EQ(rm->first, 3u);
  EXPECT_EQ(rm->second, 4u);
}

TEST(Classify, RejectsDegenerateAndMismatchedInputs) {
  RatMatrix q{{0, Rational(1, 2)}, {Rational(-1, 2), 0}};
  SkewMatrix rat = SkewMatrix::from_rational(q, bg());
  std::vector<SymReal> up{sr(0, 1)};
  SkewMatrix irr = SkewMatrix::from_upper(2, bg(), up);
  EXPECT_THROW(decide_isomorphic(rat, irr), ValidationError);
  EXPECT_THROW(decide_isomorphic(irr, example(1)), ValidationError);
}

TEST(Classify, RangeMismatchCertificate) {
  LinearFunctionalZ f1 = functional({sr(1), sr(0, 1)});
  LinearFunctionalZ f2 = functional({sr(1), sr(0, 2)});
  DecisionOutcome o = decide_equivalence(f1, f2);
  EXPECT_EQ(o.verdict, Verdict::negative);
  EXPECT_TRUE(std::holds_alternative<RangeMismatch>(o.certificate));
  EXPECT_TRUE(verify_certificate(f1, f2, o.certificate));
}

TEST(Classify, DeterminantFormLemma) {
  // det(G0 + w r^t) == constant + coefficients . r, checked by cofactor expansion.
  oracle::Rng rng(51);
  int checked = 0;
  for (int t = 0; t < 2000 && checked < 100; ++t) {
    long den = rng.uniform(2, 7);
    LinearFunctionalZ f1 = functional({sr(1), sr(small_fraction(rng, den)), sr(small_fraction(rng, den), 1),
                                       sr(small_fraction(rng, den), 0, 1)});
    LinearFunctionalZ f2 = functional({sr(1), sr(small_fraction(rng, den)), sr(small_fraction(rng, den), 1),
                                       sr(small_fraction(rng, den), 0, 1)});
    if (!(f1.range() == f2.range())) continue;
    auto c = detail::particular_solution(f1, f2);
    ASSERT_TRUE(c.has_value());
    if (c->kernel.rows() != 1) continue;
    ++checked;
    DecisionOutcome o = detail::decide_rank_one(f1, f2, *c);
    if (o.verdict == Verdict::positive) {
      EXPECT_TRUE(verify_isomorphism_witness(f1, f2, *o.witness));
      continue;
    }
    const auto& cert = std::get<UnimodularityObstruction>(o.certificate);
    EXPECT_TRUE(verify_certificate(f1, f2, o.certificate));
    IntVector w = cert.kernel.row_vector(0);
    for (int s = 0; s < 5; ++s) {
      IntVector r(4);
      for (std::size_t j = 1; j < 4; ++j) r[j] = rng.uniform(-4, 4);
      IntMatrix g = cert.base;
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) g(i, j) += w[i] * r[j];
      Integer lin = cert.constant;
      for (std::size_t j = 0; j < 4; ++j) lin += cert.coefficients[j] * r[j];
      EXPECT_EQ(oracle::det_cofactor(g), Rational(lin));
      EXPECT_TRUE(intertwines(f1, f2, g));
      EXPECT_TRUE(lin != 1 && lin != -1);
    }
  }
  EXPECT_EQ(checked, 100);
}

TEST(Classify, RankOneAgreesWithBruteForce) {
  oracle::Rng rng(52);
  int pairs = 0, positive = 0, negative = 0;
  for (int t = 0; t < 3000 && pairs < 60; ++t) {
    LinearFunctionalZ f1 = random_rank_one(rng);
    LinearFunctionalZ f2 = random_rank_one(rng);
    if (!(f1.range() == f2.range())) continue;
    ++pairs;
    DecisionOutcome o = decide_equivalence(f1, f2);
    DecisionOutcome rev = decide_equivalence(f2, f1);
    EXPECT_EQ(o.verdict, rev.verdict) << "symmetry";
    EXPECT_NE(o.verdict, Verdict::undecided);
    auto brute = oracle::brute_force_equivalence(f1, f2, 2);
    if (o.verdict == Verdict::positive) {
      ++positive;
      EXPECT_TRUE(verify_isomorphism_witness(f1, f2, *o.witness));
    } else {
      ++negative;
      EXPECT_FALSE(brute.has_value());
      EXPECT_TRUE(verify_certificate(f1, f2, o.certificate));
    }
    if (brute) {
      EXPECT_EQ(o.verdict, Verdict::positive);
    }
  }
  EXPECT_EQ(pairs, 60);
  EXPECT_GT(positive, 0);
  EXPECT_GT(negative, 0);
}

TEST(Classify, ComposedWithUnimodularIsPositive) {
  oracle::Rng rng(53);
  for (int t = 0; t < 30; ++t) {
    long den = rng.uniform(2, 6);
    LinearFunctionalZ f2 = functional({sr(1), sr(small_fraction(rng, den)), sr(small_fraction(rng, den), 1),
                                       sr(small_fraction(rng, den), 0, 1)});
    IntMatrix u = oracle::random_unimodular(rng, 3, 8);
    IntMatrix g = IntMatrix::identity(4);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) g(i + 1, j + 1) = u(i, j);
    for (std::size_t i = 1; i < 4; ++i) g(0, i) = rng.uniform(-2, 2);
    LinearFunctionalZ f1 = f2.compose(g);
    DecisionOutcome o = decide_equivalence(f1, f2);
    ASSERT_EQ(o.verdict, Verdict::positive);
    EXPECT_TRUE(verify_isomorphism_witness(f1, f2, *o.witness));
    EXPECT_EQ(decide_equivalence(f2, f1).verdict, Verdict::positive);
  }
}

TEST(Classify, HighKernelRankNeverContradictsBruteForce) {
  oracle::Rng rng(54);
  int done = 0;
  for (int t = 0; t < 400 && done < 6; ++t) {
    long den = rng.uniform(2, 4);
    auto make = [&] {
      return functional({sr(1), sr(small_fraction(rng, den)), sr(small_fraction(rng, den)),
                         sr(small_fraction(rng, den), 1)});
    };
    LinearFunctionalZ f1 = make(), f2 = make();
    if (!(f1.range() == f2.range())) continue;
    auto c = detail::particular_solution(f1, f2);
    if (!c || c->kernel.rows() < 2) continue;
    ++done;
    DecisionOutcome o = decide_equivalence(f1, f2);
    if (o.verdict == Verdict::positive) {
      EXPECT_TRUE(verify_isomorphism_witness(f1, f2, *o.witness));
    } else {
      EXPECT_EQ(o.verdict, Verdict::undecided);
      EXPECT_FALSE(oracle::brute_force_equivalence(f1, f2, 1).has_value());
    }
  }
  EXPECT_GT(done, 0);
}

TEST(EqOfMaps, MatchesEqualRanges) {
  oracle::Rng rng(55);
  for (int t = 0; t < 40; ++t) {
    long den = rng.uniform(2, 6);
    LinearFunctionalZ f2 = functional({sr(1), sr(small_fraction(rng, den)), sr(small_fraction(rng, den), 1)});
    IntMatrix u = oracle::random_unimodular(rng, 3, 8);
    LinearFunctionalZ f1 = f2.compose(u);
    auto g = eq_of_maps(f1, f2);
    ASSERT_TRUE(g.has_value());
    EXPECT_TRUE(is_unimodular(*g));
    EXPECT_TRUE(intertwines(f1, f2, *g));
  }
  EXPECT_FALSE(eq_of_maps(functional({sr(1), sr(0, 1)}), functional({sr(1), sr(0, 2)})).has_value());
}

TEST(AdaptedBasis, Shape) {
  LinearFunctionalZ f = LinearFunctionalZ::from(exterior_exp(example(Rational(2, 5))), bg());
  AdaptedBasis a = adapted_basis(f);
  EXPECT_EQ(a.range_rank, 3u);
  EXPECT_TRUE(is_unimodular(a.vectors));
  RealSubgroup range = f.range();
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(f.apply(a.vectors.col_vector(i)), range.generator(i));
  EXPECT_TRUE(f.apply(a.vectors.col_vector(3)).is_zero());
}

TEST(ReportFacts, SimpleAndDegenerate) {
  TorusFacts f = report_facts(example(Rational(2, 5)));
  EXPECT_TRUE(f.simple);
  EXPECT_TRUE(f.unique_trace);
  EXPECT_EQ(f.k_ranks, (KRanks{4, 4}));
  EXPECT_EQ(f.derived.size(), 3u);
  RatMatrix q{{0, Rational(1, 2)}, {Rational(-1, 2), 0}};
  TorusFacts g = report_facts(SkewMatrix::from_rational(q));
  EXPECT_FALSE(g.simple);
  EXPECT_TRUE(g.witness.has_value());
  EXPECT_TRUE(g.derived.empty());
  std::vector<SymReal> up{sr(0, 1), sr(1), sr(0), sr(0), sr(0), sr(0, 0, 1)};
  TorusFacts h = report_facts(SkewMatrix::from_upper(4, bg(), up));
  EXPECT_FALSE(h.trace_range.has_value());
  EXPECT_FALSE(h.trace_range_error.empty());
}
