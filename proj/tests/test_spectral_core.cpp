#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "hilscale/errors.hpp"
#include "hilscale/spectral_core.hpp"

using namespace hilscale;

namespace {

CoeffVector random_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  return CoeffVector(std::move(v));
}

ScaleOperator random_generator(std::mt19937_64& rng, std::size_t n, double lo = 1.0) {
  std::uniform_real_distribution<double> unif(0.0, 3.0);
  std::vector<double> eigs(n);
  for (double& l : eigs) l = lo * std::pow(10.0, unif(rng));
  return ScaleOperator(std::move(eigs));
}

double rel_diff(const CoeffVector& a, const CoeffVector& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST(CoeffVector, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(CoeffVector(std::vector<double>{}), PreconditionError);
  EXPECT_THROW((CoeffVector{1.0, std::numeric_limits<double>::quiet_NaN()}), PreconditionError);
  EXPECT_THROW((CoeffVector{std::numeric_limits<double>::infinity()}), PreconditionError);
  EXPECT_NO_THROW(CoeffVector::zeros(3));
}

TEST(CoeffVector, UnitVectorAndArithmetic) {
  const CoeffVector e = CoeffVector::unit(3, 1);
  EXPECT_EQ(e, (CoeffVector{0.0, 1.0, 0.0}));
  EXPECT_EQ((CoeffVector{1, 2} + CoeffVector{3, 4}), (CoeffVector{4, 6}));
  EXPECT_EQ((CoeffVector{1, 2} - CoeffVector{3, 4}), (CoeffVector{-2, -2}));
  EXPECT_EQ((2.0 * CoeffVector{1, 2}), (CoeffVector{2, 4}));
  EXPECT_DOUBLE_EQ((CoeffVector{3, 4}).norm(), 5.0);
  EXPECT_THROW(CoeffVector::unit(3, 3), PreconditionError);
  CoeffVector a{1, 2};
  EXPECT_THROW(a += CoeffVector{1.0}, DimensionError);
}

TEST(ScaleOperator, EnforcesPositiveLowerBound) {
  EXPECT_THROW(ScaleOperator(std::vector<double>{1.0, 0.0}), PreconditionError);
  EXPECT_THROW(ScaleOperator(std::vector<double>{1.0, -2.0}), PreconditionError);
  EXPECT_THROW(ScaleOperator(std::vector<double>{}), PreconditionError);
  EXPECT_THROW(ScaleOperator(std::vector<double>{1.0, 2.0}, 1.5), PreconditionError);
  EXPECT_THROW(ScaleOperator(std::vector<double>{1.0}, 0.0), PreconditionError);
  const ScaleOperator L(std::vector<double>{3.0, 2.0, 5.0});
  EXPECT_DOUBLE_EQ(L.gamma(), 2.0);
  EXPECT_DOUBLE_EQ(ScaleOperator(std::vector<double>{3.0, 2.0}, 0.5).gamma(), 0.5);
}

TEST(ApplyPower, ZeroPowerIsIdentity) {
  const ScaleOperator L(std::vector<double>{1.0, 2.0});
  EXPECT_EQ(apply_power(L, 0.0, CoeffVector{3, 4}), (CoeffVector{3, 4}));
}

TEST(ApplyPower, SquareRoot) {
  const ScaleOperator L(std::vector<double>{4.0});
  EXPECT_NEAR(apply_power(L, 0.5, CoeffVector{1})[0], 2.0, 1e-15);
}

TEST(ApplyPower, InverseEigenvalues) {
  const ScaleOperator L(std::vector<double>{1.0, 2.0, 3.0});
  const CoeffVector out = apply_power(L, -1.0, CoeffVector{1, 2, 3});
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(out[j], 1.0, 1e-15);
}

TEST(ApplyPower, LengthMismatch) {
  const ScaleOperator L(std::vector<double>{1.0, 2.0});
  EXPECT_THROW(apply_power(L, 1.0, CoeffVector{1}), DimensionError);
  EXPECT_THROW(scale_norm(L, 1.0, CoeffVector{1}), DimensionError);
  EXPECT_THROW(scale_inner(L, 1.0, CoeffVector{1, 2}, CoeffVector{1}), DimensionError);
}

TEST(ApplyPower, InverseRoundTrip) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const ScaleOperator L = random_generator(rng, 64, 0.1);
    const CoeffVector x = random_vector(rng, 64);
    const double t = std::uniform_real_distribution<double>(-4, 4)(rng);
    EXPECT_LT(rel_diff(apply_power(L, -t, apply_power(L, t, x)), x), 1e-13);
  }
}

TEST(ScaleNorm, UnitEigenvaluesCollapseToEuclidean) {
  const ScaleOperator L(std::vector<double>{1.0, 1.0});
  EXPECT_DOUBLE_EQ(scale_norm(L, 7.0, CoeffVector{3, 4}), 5.0);
}

TEST(ScaleNorm, SingleEntry) {
  EXPECT_DOUBLE_EQ(scale_norm(ScaleOperator(std::vector<double>{2.0}), 1.0, CoeffVector{1}), 2.0);
}

TEST(ScaleNorm, NegativePowerMatchesDirectSum) {
  const ScaleOperator L(std::vector<double>{1.0, 2.0, 3.0});
  // sum_j j^{-2} j^2 = 3
  EXPECT_NEAR(scale_norm(L, -1.0, CoeffVector{1, 2, 3}), std::sqrt(3.0), 1e-15);
}

TEST(ScaleNorm, ZeroIndexIsEuclidean) {
  std::mt19937_64 rng(3);
  const ScaleOperator L = random_generator(rng, 100);
  const CoeffVector x = random_vector(rng, 100);
  EXPECT_DOUBLE_EQ(scale_norm(L, 0.0, x), x.norm());
}

TEST(ScaleInner, OrthogonalCoordinates) {
  const ScaleOperator L(std::vector<double>{2.0, 5.0});
  for (double t : {-2.0, 0.0, 1.3}) {
    EXPECT_EQ(scale_inner(L, t, CoeffVector::unit(2, 0), CoeffVector::unit(2, 1)), 0.0);
  }
}

TEST(ScaleInner, SingleEntry) {
  EXPECT_DOUBLE_EQ(scale_inner(ScaleOperator(std::vector<double>{2.0}), 1.0, CoeffVector{1}, CoeffVector{3}),
                   12.0);
}

TEST(ScaleInner, DiagonalMatchesSquaredNorm) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const ScaleOperator L = random_generator(rng, 40);
    const CoeffVector x = random_vector(rng, 40);
    const double t = std::uniform_real_distribution<double>(-3, 3)(rng);
    const double n = scale_norm(L, t, x);
    EXPECT_LE(std::abs(scale_inner(L, t, x, x) - n * n), 1e-12 * n * n);
  }
}

TEST(RealPower, ZeroExponentIsExactlyOne) {
  EXPECT_EQ(real_power(7.3, 0.0), 1.0);
  EXPECT_EQ(real_power(1e-300, 0.0), 1.0);
}

TEST(Properties, Semigroup) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> t_dist(-4.0, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    const ScaleOperator L = random_generator(rng, 32);
    const CoeffVector x = random_vector(rng, 32);
    const double t1 = t_dist(rng), t2 = t_dist(rng);
    const CoeffVector lhs = apply_power(L, t1, apply_power(L, t2, x));
    const CoeffVector rhs = apply_power(L, t1 + t2, x);
    for (std::size_t j = 0; j < x.size(); ++j) {
      EXPECT_LE(std::abs(lhs[j] - rhs[j]), 1e-12 * std::abs(rhs[j])) << "t1=" << t1 << " t2=" << t2;
    }
  }
}

TEST(Properties, NormOrderingForUnitLowerBound) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> t_dist(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const ScaleOperator L = random_generator(rng, 32, 1.0);
    ASSERT_GE(L.gamma(), 1.0);
    const CoeffVector x = random_vector(rng, 32);
    double s = t_dist(rng), t = t_dist(rng);
    if (s > t) std::swap(s, t);
    EXPECT_LE(scale_norm(L, s, x), scale_norm(L, t, x) * (1.0 + 1e-15));
  }
}

TEST(Properties, InterpolationInequality) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> t_dist(-3.0, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    const ScaleOperator L = random_generator(rng, 32, 0.5);
    const CoeffVector x = random_vector(rng, 32);
    double v[3] = {t_dist(rng), t_dist(rng), t_dist(rng)};
    std::sort(v, v + 3);
    const double q = v[0], r = v[1], s = v[2];
    if (s - q < 1e-6) continue;
    const double lhs = scale_norm(L, r, x);
    const double rhs = std::pow(scale_norm(L, q, x), (s - r) / (s - q)) *
                       std::pow(scale_norm(L, s, x), (r - q) / (s - q));
    EXPECT_GE(rhs - lhs, -1e-10 * rhs);
  }
}
