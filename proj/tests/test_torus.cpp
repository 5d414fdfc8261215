#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace nct;

namespace {

const RealBasis& bg() {
  static const RealBasis b({"1", "beta", "gamma"});
  return b;
}

SymReal sr(Rational a, Rational b = 0, Rational c = 0) { return SymReal(bg(), {a, b, c}); }

// theta_12 = beta, theta_13 = gamma, theta_23 = q
SkewMatrix example(Rational q) {
  std::vector<SymReal> up{sr(0, 1), sr(0, 0, 1), sr(q)};
  return SkewMatrix::from_upper(3, bg(), up);
}

RatVector unit(std::size_t d, std::size_t i) {
  RatVector e(d);
  e[i] = 1;
  return e;
}

// Direct check of the degeneracy definition on one integer vector.
bool pairs_rationally(const SkewMatrix& t, const IntVector& x) {
  RatVector xr = to_rational(x);
  for (std::size_t j = 0; j < t.dim(); ++j)
    if (!pairing(t, xr, unit(t.dim(), j)).is_rational()) return false;
  return true;
}

}  // namespace

TEST(SkewMatrix, ReportsFirstViolation) {
  std::vector<SymReal> e(9, sr(0));
  e[1] = sr(1);  // (1,2) set, (2,1) left zero
  try {
    SkewMatrix::validate(3, bg(), e);
    FAIL() << "expected SkewError";
  } catch (const SkewError& err) {
    EXPECT_EQ(err.row(), 1u);
    EXPECT_EQ(err.col(), 0u);
    EXPECT_NE(std::string(err.what()).find("(2,1)"), std::string::npos);
  }
  std::vector<SymReal> diag(4, sr(0));
  diag[3] = sr(0, 1);
  EXPECT_THROW(SkewMatrix::validate(2, bg(), diag), SkewError);
}

TEST(Nondegeneracy, Examples) {
  EXPECT_TRUE(is_nondegenerate(example(Rational(2, 5))).nondegenerate);
  RatMatrix q{{0, Rational(1, 2)}, {Rational(-1, 2), 0}};
  Nondegeneracy r = is_nondegenerate(SkewMatrix::from_rational(q));
  EXPECT_FALSE(r.nondegenerate);
  ASSERT_TRUE(r.witness.has_value());
  // d = 1 is always degenerate
  EXPECT_FALSE(is_nondegenerate(SkewMatrix::from_rational(RatMatrix(1, 1))).nondegenerate);
  // beta in a single slot of a 3x3: e3 pairs rationally with everything
  std::vector<SymReal> up{sr(0, 1), sr(0), sr(0)};
  Nondegeneracy s = is_nondegenerate(SkewMatrix::from_upper(3, bg(), up));
  ASSERT_TRUE(s.witness.has_value());
  IntVector e3{0, 0, 1};
  IntVector me3{0, 0, -1};
  EXPECT_TRUE(*s.witness == e3 || *s.witness == me3);
}

TEST(Nondegeneracy, AgreesWithBruteForce) {
  oracle::Rng rng(31);
  int degenerate = 0;
  for (int t = 0; t < 80; ++t) {
    std::size_t d = rng.uniform(2, 4);
    SkewMatrix th = oracle::random_symbolic_skew(rng, bg(), d, 55);
    Nondegeneracy r = is_nondegenerate(th);
    if (!r.nondegenerate) {
      ++degenerate;
      ASSERT_TRUE(r.witness.has_value());
      bool nonzero = std::any_of(r.witness->begin(), r.witness->end(), [](const Integer& x) { return x != 0; });
      EXPECT_TRUE(nonzero);
      EXPECT_TRUE(pairs_rationally(th, *r.witness));
    } else {
      EXPECT_FALSE(r.witness.has_value());
      auto found = oracle::brute_force_min(d, 2, [&](const IntVector& x) {
        bool zero = std::all_of(x.begin(), x.end(), [](const Integer& a) { return a == 0; });
        return !zero && pairs_rationally(th, x);
      });
      EXPECT_FALSE(found.has_value());
    }
  }
  EXPECT_GT(degenerate, 0);
}

TEST(Conjugate, PairingIdentity) {
  oracle::Rng rng(32);
  for (int t = 0; t < 30; ++t) {
    std::size_t d = rng.uniform(2, 4);
    SkewMatrix th = oracle::random_symbolic_skew(rng, bg(), d);
    RatMatrix b = oracle::random_invertible_rational(rng, d);
    SkewMatrix c = conjugate(th, b);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        RatVector bi = b.col_vector(i), bj = b.col_vector(j);
        EXPECT_EQ(c(i, j), pairing(th, bi, bj));
      }
    EXPECT_EQ(conjugate(c, inverse_q(b)), th);
  }
  EXPECT_THROW(conjugate(example(1), RatMatrix(3, 3)), ValidationError);
}

TEST(Restrict, CoordinateSubgroupIsPrincipalSubmatrix) {
  SkewMatrix th = example(Rational(2, 5));
  std::vector<std::size_t> idx{0, 2};
  EXPECT_EQ(restrict(th, Subgroup::coordinates(3, idx)), th.principal(idx));
  std::vector<std::size_t> bad{0, 3};
  EXPECT_THROW(Subgroup::coordinates(3, bad), ValidationError);
  EXPECT_THROW(Subgroup(3, IntMatrix{{1, 0, 0}, {2, 0, 0}}), ValidationError);
}

TEST(BlockDecompose, FourDimensional) {
  // theta_12 = beta, theta_13 = 1, theta_34 = gamma with H = <e1, e2>
  std::vector<SymReal> up{sr(0, 1), sr(1), sr(0), sr(0), sr(0), sr(0, 0, 1)};
  SkewMatrix th = SkewMatrix::from_upper(4, bg(), up);
  std::vector<std::size_t> h{0, 1};
  BlockDecomposition bd = block_decompose(th, Subgroup::coordinates(4, h));
  EXPECT_EQ(bd.split, 2u);
  EXPECT_EQ(bd.result, conjugate(th, bd.transform));
  EXPECT_EQ(leading_block(bd), th.principal(h));
  EXPECT_NE(det(bd.transform), 0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 2; j < 4; ++j) {
      const SymReal& e = bd.result(i, j);
      EXPECT_TRUE(e.is_rational());
      EXPECT_EQ(e.rational_part().get_den(), 1);
    }
  EXPECT_TRUE(is_nondegenerate(trailing_block(bd)).nondegenerate);
}

TEST(BlockDecompose, NondegenerateExtensionIsReported) {
  std::vector<std::size_t> h{0, 1};
  EXPECT_THROW(block_decompose(example(Rational(2, 5)), Subgroup::coordinates(3, h)), ValidationError);
}

TEST(BlockDecompose, RandomProperties) {
  // Symbolic 2x2 diagonal blocks with rational coupling, conjugated by a
  // unimodular M preserving span(e1, e2), so H = <e1, e2> stays valid.
  oracle::Rng rng(33);
  RealBasis b4({"1", "a", "b", "c"});
  for (int t = 0; t < 25; ++t) {
    std::size_t d = t % 2 ? 4 : 6;
    std::vector<SymReal> e(d * d, SymReal(b4));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        RatVector c(b4.size());
        c[0] = oracle::canon(rng.rational(3, 4));
        if (j == i + 1 && i % 2 == 0) c[1 + i / 2] = rng.uniform(1, 3);
        e[i * d + j] = SymReal(b4, c);
        e[j * d + i] = -e[i * d + j];
      }
    SkewMatrix th0 = SkewMatrix::validate(d, b4, e);
    IntMatrix m = IntMatrix::identity(d);
    IntMatrix top = oracle::random_unimodular(rng, 2, 4);
    IntMatrix rest = oracle::random_unimodular(rng, d - 2, 6);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        if (i < 2 && j < 2) m(i, j) = top(i, j);
        else if (i >= 2 && j >= 2) m(i, j) = rest(i - 2, j - 2);
        else if (i < 2) m(i, j) = rng.uniform(-2, 2);
        else m(i, j) = 0;
      }
    SkewMatrix th = conjugate(th0, m);
    ASSERT_TRUE(is_nondegenerate(th).nondegenerate);
    std::vector<std::size_t> h{0, 1};
    Subgroup sub = Subgroup::coordinates(d, h);
    BlockDecomposition bd = block_decompose(th, sub);
    EXPECT_EQ(bd.result, conjugate(th, bd.transform));
    EXPECT_EQ(leading_block(bd), restrict(th, sub));
    EXPECT_NE(det(bd.transform), 0);
    for (std::size_t a = 0; a < bd.split; ++a)
      for (std::size_t c = bd.split; c < d; ++c) {
        EXPECT_TRUE(bd.result(a, c).is_rational());
        EXPECT_EQ(bd.result(a, c).rational_part().get_den(), 1);
      }
    EXPECT_EQ(trailing_block(bd).dim(), d - 2);
  }
}

TEST(BlockDecompose, RejectsDegenerateInputs) {
  SkewMatrix th = example(Rational(2, 5));
  std::vector<std::size_t> h{1, 2};
  EXPECT_THROW(block_decompose(th, Subgroup::coordinates(3, h)), ValidationError);
  RatMatrix q{{0, 1}, {-1, 0}};
  std::vector<std::size_t> one{0};
  EXPECT_THROW(block_decompose(SkewMatrix::from_rational(q), Subgroup::coordinates(2, one)), ValidationError);
}

TEST(CoordinateRestriction, LargestFirst) {
  SkewMatrix th = example(Rational(2, 5));
  CoordinateRestriction c = find_nondeg_coordinate_restriction(th);
  EXPECT_EQ(c.rank, 3u);
  std::vector<SymReal> up{sr(0, 1), sr(0), sr(0)};
  CoordinateRestriction c2 = find_nondeg_coordinate_restriction(SkewMatrix::from_upper(3, bg(), up));
  EXPECT_EQ(c2.rank, 2u);
  EXPECT_EQ(c2.coords, (std::vector<std::size_t>{0, 1}));
}
