#include "hilscale/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "hilscale/errors.hpp"
#include "hilscale/random.hpp"
#include "hilscale/scales_single.hpp"

namespace hilscale {

namespace {

IneqReport finish(std::string name, double worst, std::size_t samples, double lo = 0.0,
                  double hi = 0.0) {
  return IneqReport{std::move(name), worst, samples, worst >= -kSlackTolerance, lo, hi};
}

// Unit vector with a random power-law envelope, so that the sampled elements
// range from rough to smooth relative to L.
CoeffVector random_shaped(const ScaleOperator& L, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> decay(0.0, 3.0);
  const double p = decay(rng);
  std::vector<double> x(L.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    x[j] = normal(rng) * real_power(L.eig(j), -p);
    sum += x[j] * x[j];
  }
  const double inv = sum > 0.0 ? 1.0 / std::sqrt(sum) : 1.0;
  for (double& v : x) v *= inv;
  return CoeffVector(std::move(x));
}

}  // namespace

CoeffVector random_unit(std::size_t n, std::uint64_t seed, std::uint64_t index) {
  std::mt19937_64 rng(mix_seed(seed, index));
  std::normal_distribution<double> normal;
  std::vector<double> x(n);
  double sum = 0.0;
  for (double& v : x) {
    v = normal(rng);
    sum += v * v;
  }
  for (double& v : x) v /= std::sqrt(sum);
  return CoeffVector(std::move(x));
}

IneqReport interpolation_check(const ScaleOperator& L, std::size_t trials, std::uint64_t seed,
                               double t_lo, double t_hi) {
  if (trials == 0 || !(t_hi > t_lo)) throw PreconditionError("interpolation_check: bad arguments");
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < trials; ++k) {
    std::mt19937_64 rng(mix_seed(seed, k));
    std::uniform_real_distribution<double> pick(t_lo, t_hi);
    double t[3] = {pick(rng), pick(rng), pick(rng)};
    std::sort(t, t + 3);
    if (t[2] - t[0] < 1e-9) t[2] = t[0] + 1.0;
    if (t[1] <= t[0] || t[1] >= t[2]) t[1] = 0.5 * (t[0] + t[2]);
    const double q = t[0], r = t[1], s = t[2];
    const CoeffVector x = random_shaped(L, rng);
    const double lhs = scale_norm(L, r, x);
    const double rhs = std::pow(scale_norm(L, q, x), (s - r) / (s - q)) *
                       std::pow(scale_norm(L, s, x), (r - q) / (s - q));
    worst = std::min(worst, (rhs - lhs) / rhs);
  }
  return finish("interpolation", worst, trials);
}

LinkEstimate norm_equivalence(const Problem& problem, std::size_t scale_index) {
  const SmoothingLink fitted =
      fit_link(problem.link(scale_index).a, problem.L(scale_index), problem.T());
  return LinkEstimate{fitted.m, fitted.M};
}

IneqReport norm_equivalence_check(const Problem& problem, std::size_t scale_index,
                                  std::size_t trials, std::uint64_t seed) {
  const LinkEstimate est = norm_equivalence(problem, scale_index);
  const ScaleOperator& L = problem.L(scale_index);
  const double a = problem.link(scale_index).a;
  double worst = std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t k = 0; k < trials; ++k) {
    std::mt19937_64 rng(mix_seed(seed, k));
    const CoeffVector x = random_shaped(L, rng);
    const double image = apply_forward(problem.T(), x).norm();
    const double weak = scale_norm(L, -a, x);
    const double ratio = image / weak;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    worst = std::min(worst, std::min(ratio - est.m, est.M - ratio) / est.M);
  }
  return finish("norm_equivalence", worst, trials, lo, hi);
}

IneqReport power_range_check(const Problem& problem, double s, double nu, std::size_t trials,
                             std::uint64_t seed, std::size_t scale_index) {
  if (nu < 0.0 || s < 0.0) throw PreconditionError("power_range_check: need nu >= 0, s >= 0");
  const LinkEstimate est = norm_equivalence(problem, scale_index);
  const ScaleOperator& L = problem.L(scale_index);
  const double a = problem.link(scale_index).a;
  const CoeffVector bb = b_squared(problem, s, scale_index);
  const double lo_bound = std::pow(est.m, nu);
  const double hi_bound = std::pow(est.M, nu);
  double worst = std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t k = 0; k < trials; ++k) {
    std::mt19937_64 rng(mix_seed(seed, k));
    const CoeffVector x = random_shaped(L, rng);
    double image = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double v = real_power(bb[j], 0.5 * nu) * x[j];
      image += v * v;
    }
    const double ratio = std::sqrt(image) / scale_norm(L, -nu * (a + s), x);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    worst = std::min(worst, std::min(ratio - lo_bound, hi_bound - ratio) / hi_bound);
  }
  char name[48];
  std::snprintf(name, sizeof name, "power_range(nu=%g)", nu);
  return finish(name, worst, trials, lo, hi);
}

IneqReport heinz_check(std::span<const double> A_eigs, std::span<const double> L_eigs,
                       std::span<const double> nu_grid, std::size_t trials, std::uint64_t seed) {
  require_same_size(A_eigs.size(), L_eigs.size(), "heinz_check");
  for (std::size_t j = 0; j < A_eigs.size(); ++j) {
    if (!(L_eigs[j] > 0.0) || L_eigs[j] > A_eigs[j]) {
      throw PreconditionError("heinz_check: hypothesis ||Lx|| <= ||Ax|| fails at index " +
                              std::to_string(j));
    }
  }
  const ScaleOperator A(std::vector<double>(A_eigs.begin(), A_eigs.end()));
  const ScaleOperator L(std::vector<double>(L_eigs.begin(), L_eigs.end()));
  double worst = std::numeric_limits<double>::infinity();
  std::size_t samples = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    std::mt19937_64 rng(mix_seed(seed, k));
    const CoeffVector x = random_shaped(L, rng);
    for (double nu : nu_grid) {
      const double lhs = scale_norm(L, nu, x);
      const double rhs = scale_norm(A, nu, x);
      worst = std::min(worst, rhs > 0.0 ? (rhs - lhs) / rhs : 0.0);
      ++samples;
    }
  }
  return finish("heinz", worst, samples);
}

SourceCheck source_condition_check(const Problem& problem, const CoeffVector& x, double s,
                                   double u, std::size_t scale_index) {
  if (u < 0.0) throw PreconditionError("source_condition_check: u must be nonnegative");
  require_same_size(problem.n(), x.size(), "source_condition_check");
  const double a = problem.link(scale_index).a;
  const CoeffVector bb = b_squared(problem, s, scale_index);
  const double exponent = -u / (2.0 * (a + s));
  double total = 0.0, tail = 0.0;
  const std::size_t start = x.size() - x.size() / 4;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double v = x[j] * real_power(bb[j], exponent);
    total += v * v;
    if (j >= start) tail += v * v;
  }
  SourceCheck out;
  out.v_norm = std::sqrt(total);
  out.tail_share = total > 0.0 ? tail / total : 0.0;
  out.pass = out.tail_share < kTailThreshold;
  return out;
}

SourceCheck source_condition_check(const Problem& problem, double s, double u,
                                   std::size_t scale_index) {
  return source_condition_check(problem, problem.x_dag(), s, u, scale_index);
}

nlohmann::json to_json(const IneqReport& report) {
  return {{"name", report.name},           {"worst_slack", report.worst_slack},
          {"samples", report.samples},     {"pass", report.pass},
          {"observed_min", report.observed_min}, {"observed_max", report.observed_max}};
}

}  // namespace hilscale
