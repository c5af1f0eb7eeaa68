#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hilscale/errors.hpp"
#include "hilscale/problems.hpp"

using namespace hilscale;

namespace {

// Independent tail-share oracle: plain loop over the definition.
double tail_oracle(const std::vector<double>& l, double u, const std::vector<double>& x) {
  double total = 0.0, tail = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double term = std::pow(l[j], 2 * u) * x[j] * x[j];
    total += term;
    if (j + 1 > x.size() / 2) tail += term;
  }
  return tail / total;
}

std::vector<double> range_eigs(std::size_t n) {
  std::vector<double> l(n);
  for (std::size_t j = 0; j < n; ++j) l[j] = static_cast<double>(j + 1);
  return l;
}

}  // namespace

TEST(SyntheticDiagonal, FourCoefficientInstance) {
  // n = 4 is below the generator's minimum size; assemble it from the same building blocks.
  const ScaleOperator L(range_eigs(4));
  const ForwardOperator T(synthetic_svals(4, 1.0));
  const CoeffVector x = power_law_solution(L, 0.0, 0.5);
  const Problem p = make_problem(L, T, 1.0, x, 0.0);
  const double expect_s[] = {1.0, 0.5, 1.0 / 3, 0.25};
  const double expect_y[] = {1.0, 0.25, 1.0 / 9, 1.0 / 16};
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_NEAR(p.T().sval(j), expect_s[j], 1e-15);
    EXPECT_NEAR(p.x_dag()[j], expect_s[j], 1e-15);
    EXPECT_NEAR(p.y()[j], expect_y[j], 1e-15);
  }
  EXPECT_THROW(synthetic_diagonal(4, 1.0, 0.0), PreconditionError);
}

TEST(SyntheticDiagonal, ExactUnitLink) {
  for (std::size_t n : {200u, 2000u}) {
    const Problem p = synthetic_diagonal(n, 1.0, 0.5);
    EXPECT_EQ(p.link().m, 1.0);
    EXPECT_EQ(p.link().M, 1.0);
    EXPECT_TRUE(link_holds(SmoothingLink{1.0, 1.0, 1.0}, p.L(), p.T()));
  }
  const Problem p = synthetic_diagonal(500, 2.0, 1.0);
  EXPECT_TRUE(link_holds(SmoothingLink{2.0, 1.0, 1.0}, p.L(), p.T()));
  const ScaleOperator L16(range_eigs(16));
  EXPECT_TRUE(link_holds(SmoothingLink{1.0, 1.0, 1.0}, L16, ForwardOperator(synthetic_svals(16, 1.0))));
}

TEST(SyntheticDiagonal, TailFractionAtDefaultSize) {
  const Problem p = synthetic_diagonal(2000, 1.0, 1.0);
  const std::vector<double> l = range_eigs(2000);
  const double oracle = tail_oracle(l, 1.0, p.x_dag().coeffs());
  EXPECT_LT(oracle, 0.01);
  EXPECT_NEAR(p.exact().tail_fraction, oracle, 1e-12);
  EXPECT_NEAR(p.exact().u_norm, scale_norm(p.L(), 1.0, p.x_dag()), 0.0);
}

TEST(SyntheticDiagonal, TooSmallTruncationNamesMinimalSize) {
  try {
    synthetic_diagonal(20, 1.0, 1.0, 0.4);
    FAIL() << "expected TruncationError";
  } catch (const TruncationError& e) {
    ASSERT_GT(e.minimal_n(), 20u);
    // The estimate comes within a factor 2 of the true minimal size.
    EXPECT_NO_THROW(synthetic_diagonal(2 * e.minimal_n(), 1.0, 1.0, 0.4));
    EXPECT_THROW(synthetic_diagonal(e.minimal_n() / 2, 1.0, 1.0, 0.4), TruncationError);
  }
}

TEST(IntegrationProblem, ReciprocalPair) {
  const Problem p = integration_problem(64, 1.0);
  EXPECT_NEAR(p.T().sval(0), 2.0 / M_PI, 1e-15);
  EXPECT_NEAR(p.L().eig(0), M_PI / 2.0, 1e-15);
  EXPECT_NEAR(p.T().sval(0) * p.L().eig(0), 1.0, 1e-15);
  EXPECT_TRUE(link_holds(SmoothingLink{1.0, 1.0, 1.0}, p.L(), p.T()));
}

TEST(IntegrationProblem, TailFraction) {
  const Problem p = integration_problem(1000, 2.0, 0.5);
  std::vector<double> l(1000);
  for (std::size_t j = 0; j < l.size(); ++j) l[j] = (static_cast<double>(j) + 0.5) * M_PI;
  EXPECT_LT(tail_oracle(l, 2.0, p.x_dag().coeffs()), 0.01);
}

TEST(MultiScaleProblem, ExactLinks) {
  const Problem p = multi_scale_problem(400, {1.0, 2.0}, 1.0);
  ASSERT_EQ(p.num_scales(), 2u);
  for (std::size_t j = 0; j < p.n(); ++j) {
    const double jj = static_cast<double>(j + 1);
    EXPECT_NEAR(p.L(1).eig(j), std::sqrt(jj), 1e-12 * std::sqrt(jj));
    EXPECT_NEAR(p.T().sval(j) * p.L(1).eig(j) * p.L(1).eig(j), 1.0, 1e-12);
  }
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(p.link(i).m, 1.0);
    EXPECT_NEAR(p.link(i).M, 1.0, 1e-12);
  }
}

TEST(MultiScaleProblem, PerScaleSmoothnessFromGrid) {
  // x_j = j^{-2}: sum j^{2u-4} converges only for u < 1.5.
  const Problem p = multi_scale_problem(2000, {1.0, 1.0}, 1.0, 0.5);
  ASSERT_NEAR(p.x_dag()[9], std::pow(10.0, -2.0), 1e-15);
  EXPECT_LE(p.exact(0).u, 1.5);
  EXPECT_GE(p.exact(0).u, 1.0);
  EXPECT_EQ(std::fmod(p.exact(0).u, 0.25), 0.0);
  EXPECT_LT(p.exact(0).tail_fraction, kTailThreshold);
}

TEST(MultiScaleProblem, RejectsSingleScale) {
  EXPECT_THROW(multi_scale_problem(100, {1.0}, 1.0), PreconditionError);
  EXPECT_THROW(multi_scale_problem(100, {1.0, -1.0}, 1.0), PreconditionError);
}

TEST(MoorePenrose, ExactData) {
  const Problem p = synthetic_diagonal(200, 1.0, 1.0);
  const CoeffVector x = moore_penrose(p.T(), p.y());
  EXPECT_LE((x - p.x_dag()).norm(), 1e-14 * p.x_dag().norm());
}

TEST(MoorePenrose, ScalarCase) {
  EXPECT_DOUBLE_EQ(moore_penrose(ForwardOperator({2.0}), CoeffVector{1.0})[0], 0.5);
}

TEST(MoorePenrose, LastCoefficientAmplification) {
  const Problem p = synthetic_diagonal(200, 1.0, 1.0);
  const double delta = 1e-3;
  const CoeffVector y = p.y() + delta * CoeffVector::unit(p.n(), p.n() - 1);
  const double err = (moore_penrose(p.T(), y) - p.x_dag()).norm();
  EXPECT_NEAR(err, delta / p.T().sval(p.n() - 1), 1e-12 * err);
}

TEST(Properties, LinkExactnessForGenerators) {
  for (const Problem& p : {synthetic_diagonal(300, 1.0, 1.0), integration_problem(300, 1.0)}) {
    for (std::size_t j = 0; j < p.n(); ++j) {
      EXPECT_NEAR(p.T().sval(j) * p.L().eig(j), 1.0, 1e-14);
    }
  }
}

TEST(Properties, ReconstructionOfRandomElements) {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> normal;
  const Problem p = integration_problem(500, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(p.n());
    for (double& x : v) x = normal(rng);
    const CoeffVector x(v);
    EXPECT_LE((moore_penrose(p.T(), apply_forward(p.T(), x)) - x).norm(), 1e-14 * x.norm());
  }
}

TEST(Properties, DegradationGrowsWithFrequency) {
  const Problem p = synthetic_diagonal(300, 1.0, 1.0);
  double prev = 0.0;
  for (std::size_t j = 0; j < p.n(); ++j) {
    const CoeffVector y = p.y() + 1e-4 * CoeffVector::unit(p.n(), j);
    const double err = (moore_penrose(p.T(), y) - p.x_dag()).norm();
    EXPECT_GE(err, prev * (1 - 1e-12));
    prev = err;
  }
}

TEST(Problem, RejectsBrokenLinkOrMismatchedSolutions) {
  const ScaleOperator L(range_eigs(4));
  const ForwardOperator T(synthetic_svals(4, 1.0));
  const CoeffVector x = power_law_solution(L, 0.0, 0.5);
  ScaleComponent good{L, SmoothingLink{1.0, 1.0, 1.0}, ExactSolution{x, 0.0, x.norm(), 0.0}};
  ScaleComponent bad_link = good;
  bad_link.link = SmoothingLink{1.0, 1.5, 2.0};
  EXPECT_THROW(Problem(ProblemSpec{}, T, {bad_link}), PreconditionError);
  ScaleComponent other = good;
  other.exact.x_dag = 2.0 * x;
  EXPECT_THROW(Problem(ProblemSpec{}, T, {good, other}), PreconditionError);
}

TEST(Problem, PerturbedSingularValuesRefitLink) {
  const Problem p = synthetic_diagonal(200, 1.0, 1.0);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> f(0.9, 1.1);
  std::vector<double> factors(p.n());
  for (double& v : factors) v = f(rng);
  const Problem q = perturb_svals(p, factors);
  EXPECT_GE(q.link().m, 0.9);
  EXPECT_LE(q.link().M, 1.1);
  EXPECT_LT(q.link().m, q.link().M);
  EXPECT_TRUE(link_holds(q.link(), q.L(), q.T()));
  for (std::size_t j = 0; j < q.n(); ++j) EXPECT_DOUBLE_EQ(q.y()[j], q.T().sval(j) * q.x_dag()[j]);
}

TEST(Json, DocumentLayoutAndRebuild) {
  const Problem p = multi_scale_problem(300, {1.0, 2.0}, 1.0);
  const nlohmann::json doc = to_json(p);
  EXPECT_EQ(doc.at("n"), 300);
  EXPECT_EQ(doc.at("generator").at("kind"), "multi_scale");
  EXPECT_TRUE(doc.contains("svals_rule"));
  EXPECT_TRUE(doc.at("x_dag_rule").contains("u"));
  EXPECT_TRUE(doc.at("x_dag_rule").contains("tau"));
  ASSERT_EQ(doc.at("per_scale").size(), 2u);
  for (const char* key : {"a", "m", "M", "u_i"}) EXPECT_TRUE(doc.at("per_scale")[0].contains(key)) << key;
  const Problem q = build_problem(problem_spec_from_json(doc));
  EXPECT_EQ(q.x_dag(), p.x_dag());
  EXPECT_EQ(q.L(1), p.L(1));
}
