#include "hilscale/scales_single.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hilscale/errors.hpp"

namespace hilscale {

CoeffVector b_squared(const Problem& problem, double s, std::size_t scale) {
  if (s < 0.0) throw PreconditionError("b_squared: s must be nonnegative");
  const ScaleOperator& L = problem.L(scale);
  std::vector<double> out(problem.n());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double b = problem.T().sval(j) * real_power(L.eig(j), -s);
    out[j] = b * b;
  }
  return CoeffVector(std::move(out));
}

std::vector<double> amplification(const Problem& problem, const ScaleConfig& cfg, double alpha,
                                  std::size_t scale) {
  if (cfg.s < 0.0) throw PreconditionError("ScaleConfig: s must be nonnegative");
  if (!(alpha > 0.0)) throw PreconditionError("regularize: alpha must be positive");
  const ScaleOperator& L = problem.L(scale);
  std::vector<double> amp(problem.n());
  for (std::size_t j = 0; j < amp.size(); ++j) {
    const double ls = real_power(L.eig(j), -cfg.s);
    const double b = problem.T().sval(j) * ls;
    amp[j] = ls * filter(cfg.family, alpha, b * b) * b;
  }
  return amp;
}

CoeffVector regularize(const Problem& problem, const ScaleConfig& cfg, double alpha,
                       const CoeffVector& y_obs, std::size_t scale) {
  require_same_size(problem.n(), y_obs.size(), "regularize");
  const std::vector<double> amp = amplification(problem, cfg, alpha, scale);
  std::vector<double> x(amp.size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = amp[j] * y_obs[j];
  return CoeffVector(std::move(x));
}

double power_rule_upper(double a, double s, double r) { return 2.0 * (a + s) / (a + r); }

bool power_rule_at_endpoint(const ParamRule& rule, double a, double s, double r) {
  if (rule.kind != ParamRule::Kind::power || r == 0.0) return false;
  const double hi = power_rule_upper(a, s, r);
  return std::abs(rule.epsilon - hi) <= 1e-12 * hi;
}

double alpha_from_rule(const ParamRule& rule, double delta, double a, double s, double u,
                       double u_norm, double r) {
  if (!(delta > 0.0)) throw PreconditionError("alpha_from_rule: delta must be positive");
  if (!(rule.c > 0.0)) throw InvalidRuleError("alpha_from_rule: c must be positive");
  if (!(a > 0.0) || s < 0.0) throw PreconditionError("alpha_from_rule: need a > 0, s >= 0");
  switch (rule.kind) {
    case ParamRule::Kind::natterer:
      if (u < 0.0 || !(u_norm > 0.0)) {
        throw PreconditionError("alpha_from_rule: natterer rule needs u >= 0 and ||x||_u > 0");
      }
      return rule.c * std::pow(delta / u_norm, 2.0 * (a + s) / (a + u));
    case ParamRule::Kind::power: {
      const double hi = power_rule_upper(a, s, r);
      const bool closed = r != 0.0;
      const bool inside = rule.epsilon > 0.0 &&
                          (rule.epsilon < hi || (closed && power_rule_at_endpoint(rule, a, s, r)));
      if (!inside) {
        std::ostringstream msg;
        msg << "power rule epsilon=" << rule.epsilon << " outside (0, " << hi
            << (closed ? "]" : ")");
        throw InvalidRuleError(msg.str());
      }
      return rule.c * std::pow(delta, rule.epsilon);
    }
  }
  return 0.0;
}

double rule_exponent(const ParamRule& rule, double a, double s, double u) {
  return rule.kind == ParamRule::Kind::natterer ? optimal_epsilon(a, s, u) : rule.epsilon;
}

double optimal_epsilon(double a, double s, double u) {
  if (!(a > 0.0)) throw PreconditionError("optimal_epsilon: a must be positive");
  return 2.0 * (a + s) / (a + u);
}

RNormError error_r_norm(const Problem& problem, double r, const CoeffVector& x, double s,
                        std::size_t scale) {
  const ExactSolution& exact = problem.exact(scale);
  const double a = problem.link(scale).a;
  RNormError out;
  out.value = scale_norm(problem.L(scale), r, x - exact.x_dag);
  out.in_estimate_range = r >= -a && r <= std::min(exact.u, s);
  return out;
}

double theoretical_order(double a, double s, double u, double r, std::optional<double> epsilon) {
  if (!epsilon) return (u - r) / (a + u);
  const double e = *epsilon;
  return std::min(1.0 - e * (a + r) / (2.0 * (a + s)), e * (u - r) / (2.0 * (a + s)));
}

}  // namespace hilscale
