#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hilscale/errors.hpp"
#include "hilscale/problems.hpp"
#include "hilscale/scales_single.hpp"

using namespace hilscale;

namespace {

std::vector<double> range_eigs(std::size_t n) {
  std::vector<double> l(n);
  for (std::size_t j = 0; j < n; ++j) l[j] = static_cast<double>(j + 1);
  return l;
}

Problem tiny_synthetic() {
  const ScaleOperator L(range_eigs(4));
  return make_problem(L, ForwardOperator(synthetic_svals(4, 1.0)), 1.0, power_law_solution(L, 0.0, 0.5), 0.0);
}

CoeffVector random_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  return CoeffVector(std::move(v));
}

}  // namespace

TEST(BSquared, ZeroOrderIsSquaredSingularValues) {
  const Problem p = synthetic_diagonal(100, 1.0, 1.0);
  const CoeffVector b2 = b_squared(p, 0.0);
  for (std::size_t j = 0; j < p.n(); ++j) EXPECT_DOUBLE_EQ(b2[j], p.T().sval(j) * p.T().sval(j));
}

TEST(BSquared, SyntheticFirstOrder) {
  const Problem p = synthetic_diagonal(100, 1.0, 1.0);
  const CoeffVector b2 = b_squared(p, 1.0);
  for (std::size_t j = 0; j < p.n(); ++j) {
    const double jj = static_cast<double>(j + 1);
    EXPECT_NEAR(b2[j], std::pow(jj, -4.0), 1e-14 * std::pow(jj, -4.0));
  }
}

TEST(BSquared, MaximumIsOperatorNormSquared) {
  const Problem p = integration_problem(200, 1.0);
  const CoeffVector b2 = b_squared(p, 0.5);
  double max_scan = 0.0;
  for (std::size_t j = 0; j < p.n(); ++j) {
    const double b = p.T().sval(j) * std::pow(p.L().eig(j), -0.5);
    max_scan = std::max(max_scan, b * b);
  }
  EXPECT_NEAR(*std::max_element(b2.coeffs().begin(), b2.coeffs().end()), max_scan, 1e-15);
}

TEST(Regularize, TsvdRecoversExactSolution) {
  const Problem p = synthetic_diagonal(500, 1.0, 1.0);
  for (double s : {0.0, 0.5, 1.0}) {
    const CoeffVector b2 = b_squared(p, s);
    const double alpha = 0.5 * *std::min_element(b2.coeffs().begin(), b2.coeffs().end());
    const CoeffVector x = regularize(p, ScaleConfig{s, RegFamily::tsvd()}, alpha, p.y());
    EXPECT_LE((x - p.x_dag()).norm(), 1e-12 * p.x_dag().norm()) << s;
  }
}

TEST(Regularize, ScalarTikhonov) {
  const ScaleOperator L(std::vector<double>{1.0});
  const Problem p = make_problem(L, ForwardOperator({1.0}), 1.0, CoeffVector{1.0}, 0.0);
  EXPECT_DOUBLE_EQ(regularize(p, ScaleConfig{0.0, RegFamily::tikhonov()}, 1.0, CoeffVector{1.0})[0], 0.5);
}

TEST(Regularize, TikhonovElementwiseOracle) {
  const Problem p = tiny_synthetic();
  const CoeffVector x = regularize(p, ScaleConfig{0.0, RegFamily::tikhonov()}, 0.01, p.y());
  for (std::size_t j = 0; j < 4; ++j) {
    const double sg = 1.0 / static_cast<double>(j + 1);
    const double y = sg * sg;
    EXPECT_NEAR(x[j], sg * y / (sg * sg + 0.01), 1e-15);
  }
}

TEST(Regularize, RejectsBadArguments) {
  const Problem p = tiny_synthetic();
  EXPECT_THROW(regularize(p, ScaleConfig{0.0, RegFamily::tikhonov()}, 0.0, p.y()), PreconditionError);
  EXPECT_THROW(regularize(p, ScaleConfig{-1.0, RegFamily::tikhonov()}, 0.1, p.y()), PreconditionError);
  EXPECT_THROW(regularize(p, ScaleConfig{0.0, RegFamily::tikhonov()}, 0.1, CoeffVector{1.0}), DimensionError);
}

TEST(AlphaFromRule, NattererUnitRatio) {
  EXPECT_DOUBLE_EQ(alpha_from_rule(ParamRule::natterer(1.0), 0.3, 1.0, 0.5, 2.0, 0.3), 1.0);
}

TEST(AlphaFromRule, PowerRule) {
  EXPECT_NEAR(alpha_from_rule(ParamRule::power(1.0, 1.0), 0.01, 1.0, 0.0, 1.0, 1.0), 0.01, 1e-17);
}

TEST(AlphaFromRule, NattererUnitExponent) {
  EXPECT_NEAR(alpha_from_rule(ParamRule::natterer(1.0), 1e-4, 1.0, 0.0, 1.0, 1.0), 1e-4, 1e-18);
}

TEST(AlphaFromRule, PowerRuleInterval) {
  // (0, 2(a+s)/a) = (0, 2) for a = 1, s = 0
  EXPECT_THROW(alpha_from_rule(ParamRule::power(1.0, 2.0), 0.01, 1.0, 0.0, 1.0, 1.0), InvalidRuleError);
  EXPECT_THROW(alpha_from_rule(ParamRule::power(1.0, 0.0), 0.01, 1.0, 0.0, 1.0, 1.0), InvalidRuleError);
  EXPECT_THROW(alpha_from_rule(ParamRule::power(1.0, -0.5), 0.01, 1.0, 0.0, 1.0, 1.0), InvalidRuleError);
  EXPECT_NO_THROW(alpha_from_rule(ParamRule::power(1.0, 1.99), 0.01, 1.0, 0.0, 1.0, 1.0));
  EXPECT_THROW(alpha_from_rule(ParamRule::power(0.0, 1.0), 0.01, 1.0, 0.0, 1.0, 1.0), InvalidRuleError);
}

TEST(AlphaFromRule, ClosedEndpointForNonzeroR) {
  // 2(a+s)/(a+r) = 4/1.5 for a = 1, s = 1, r = 0.5
  const ParamRule rule = ParamRule::power(1.0, 4.0 / 1.5);
  EXPECT_DOUBLE_EQ(power_rule_upper(1.0, 1.0, 0.5), 4.0 / 1.5);
  EXPECT_NO_THROW(alpha_from_rule(rule, 0.01, 1.0, 1.0, 1.0, 1.0, 0.5));
  EXPECT_TRUE(power_rule_at_endpoint(rule, 1.0, 1.0, 0.5));
  EXPECT_FALSE(power_rule_at_endpoint(ParamRule::power(1.0, 1.0), 1.0, 1.0, 0.5));
  EXPECT_THROW(alpha_from_rule(ParamRule::power(1.0, 2.7), 0.01, 1.0, 1.0, 1.0, 1.0, 0.5), InvalidRuleError);
  EXPECT_NEAR(theoretical_order(1.0, 1.0, 1.0, 0.5, 4.0 / 1.5), 0.0, 1e-15);
}

TEST(OptimalEpsilon, Values) {
  EXPECT_DOUBLE_EQ(optimal_epsilon(1.0, 0.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(optimal_epsilon(1.0, 1.0, 2.0), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(optimal_epsilon(1.0, 0.5, 0.0), power_rule_upper(1.0, 0.5));
  EXPECT_THROW(alpha_from_rule(ParamRule::power(1.0, optimal_epsilon(1.0, 0.5, 0.0)), 0.01, 1.0, 0.5, 0.0, 1.0),
               InvalidRuleError);
}

TEST(ErrorRNorm, ExactSolutionHasZeroError) {
  const Problem p = synthetic_diagonal(100, 1.0, 1.0);
  EXPECT_EQ(error_r_norm(p, 0.3, p.x_dag(), 1.0).value, 0.0);
}

TEST(ErrorRNorm, ZeroIndexIsPlainNorm) {
  const Problem p = synthetic_diagonal(100, 1.0, 1.0);
  const CoeffVector x = 0.9 * p.x_dag();
  EXPECT_DOUBLE_EQ(error_r_norm(p, 0.0, x, 0.0).value, (x - p.x_dag()).norm());
}

TEST(ErrorRNorm, SingleCoefficientPerturbation) {
  const Problem p = synthetic_diagonal(100, 1.0, 1.0);
  const double h = 1e-3;
  for (std::size_t j : {0u, 9u, 99u}) {
    const CoeffVector x = p.x_dag() + h * CoeffVector::unit(p.n(), j);
    for (double r : {-0.5, 0.5, 1.0}) {
      const double expect = std::pow(p.L().eig(j), r) * h;
      EXPECT_NEAR(error_r_norm(p, r, x, 1.0).value, expect, 1e-9 * expect);
    }
  }
}

TEST(ErrorRNorm, FlagsIndexOutsideEstimateRange) {
  const Problem p = synthetic_diagonal(100, 1.0, 1.0);
  EXPECT_TRUE(error_r_norm(p, 0.5, p.x_dag(), 1.0).in_estimate_range);
  EXPECT_TRUE(error_r_norm(p, -1.0, p.x_dag(), 1.0).in_estimate_range);
  EXPECT_FALSE(error_r_norm(p, 0.5, p.x_dag(), 0.0).in_estimate_range);
  EXPECT_FALSE(error_r_norm(p, -1.5, p.x_dag(), 1.0).in_estimate_range);
}

TEST(TheoreticalOrder, Values) {
  EXPECT_DOUBLE_EQ(theoretical_order(1.0, 0.0, 1.0, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(theoretical_order(1.0, 0.0, 1.0, 0.0, 0.5), 0.25);
  EXPECT_DOUBLE_EQ(theoretical_order(1.0, 1.0, 1.0, -0.5), 0.75);
  // the optimal epsilon reproduces the optimal order
  for (double s : {0.0, 0.5, 1.0}) {
    for (double u : {0.5, 1.0, 2.0}) {
      EXPECT_NEAR(theoretical_order(1.0, s, u, 0.0, optimal_epsilon(1.0, s, u)), theoretical_order(1.0, s, u, 0.0),
                  1e-14);
    }
  }
}

TEST(Properties, Linearity) {
  const Problem p = integration_problem(300, 1.0);
  std::mt19937_64 rng(41);
  for (const RegFamily& f : {RegFamily::tikhonov(), RegFamily::tsvd(), RegFamily::showalter()}) {
    const ScaleConfig cfg{0.5, f};
    for (int trial = 0; trial < 10; ++trial) {
      const CoeffVector y1 = random_vector(rng, p.n()), y2 = random_vector(rng, p.n());
      const double c = std::normal_distribution<double>()(rng);
      const CoeffVector lhs = regularize(p, cfg, 1e-3, y1 + c * y2);
      const CoeffVector rhs = regularize(p, cfg, 1e-3, y1) + c * regularize(p, cfg, 1e-3, y2);
      EXPECT_LE((lhs - rhs).norm(), 1e-12 * rhs.norm());
    }
  }
}

TEST(Properties, ErrorSplitMonotoneInAlpha) {
  const Problem p = synthetic_diagonal(2000, 1.0, 1.0);
  std::mt19937_64 rng(43);
  const CoeffVector e = 1e-3 * random_vector(rng, p.n());
  for (double s : {0.0, 1.0}) {
    const ScaleConfig cfg{s, RegFamily::tikhonov()};
    double prev_reg = std::numeric_limits<double>::infinity(), prev_noise = 0.0;
    for (double log_alpha = -1.0; log_alpha >= -8.0; log_alpha -= 0.25) {
      const double alpha = std::pow(10.0, log_alpha);
      const double reg = (regularize(p, cfg, alpha, p.y()) - p.x_dag()).norm();
      const double noise = regularize(p, cfg, alpha, e).norm();
      EXPECT_LE(reg, prev_reg * (1 + 1e-12));
      EXPECT_GE(noise, prev_noise * (1 - 1e-12));
      prev_reg = reg;
      prev_noise = noise;
    }
  }
}

TEST(Properties, NoisePropagationBound) {
  const Problem p = synthetic_diagonal(2000, 1.0, 1.0);
  std::mt19937_64 rng(47);
  for (const RegFamily& f : {RegFamily::tikhonov(), RegFamily::tsvd(), RegFamily::landweber(1.0), RegFamily::showalter()}) {
    for (double s : {0.0, 0.5, 1.0}) {
      const double a = 1.0;
      for (int trial = 0; trial < 5; ++trial) {
        const CoeffVector e = random_vector(rng, p.n());
        const double delta = e.norm();
        for (double alpha : {1e-2, 1e-4, 1e-6}) {
          const double lhs = regularize(p, ScaleConfig{s, f}, alpha, e).norm();
          EXPECT_LE(lhs, f.k_const() * delta * std::pow(alpha, -a / (2 * (a + s))) * (1 + 1e-12))
              << f.name() << " s=" << s << " alpha=" << alpha;
        }
      }
    }
  }
}
