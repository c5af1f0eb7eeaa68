#pragma once

// Regularization in a single Hilbert scale:
//   x_alpha = L^{-s} g_alpha(B*B) B* y,   B = T L^{-s},
// evaluated coefficientwise with b_j = sigma_j l_j^{-s}.

#include <cstddef>
#include <optional>

#include "hilscale/problems.hpp"
#include "hilscale/regularizers.hpp"

namespace hilscale {

struct ScaleConfig {
  double s = 0.0;
  RegFamily family = RegFamily::tikhonov();
};

/// a-priori parameter choice. The natterer rule reads ||x_dag||_u from the
/// problem metadata, so it is an oracle rule meant for rate verification.
struct ParamRule {
  enum class Kind { natterer, power };
  Kind kind = Kind::natterer;
  double c = 1.0;
  double epsilon = 1.0;  // power rule only

  static ParamRule natterer(double c = 1.0) { return {Kind::natterer, c, 0.0}; }
  static ParamRule power(double c, double epsilon) { return {Kind::power, c, epsilon}; }
};

/// Eigenvalues b_j^2 of B*B = L^{-s} T*T L^{-s} for scale `scale`.
CoeffVector b_squared(const Problem& problem, double s, std::size_t scale = 0);

/// Diagonal of R_alpha: l_j^{-s} g_alpha(b_j^2) b_j.
std::vector<double> amplification(const Problem& problem, const ScaleConfig& cfg, double alpha,
                                  std::size_t scale = 0);

CoeffVector regularize(const Problem& problem, const ScaleConfig& cfg, double alpha,
                       const CoeffVector& y_obs, std::size_t scale = 0);

/// Upper end of the admissible power-rule interval: 2(a+s)/(a+r). Open for
/// r = 0, closed otherwise.
double power_rule_upper(double a, double s, double r = 0.0);

/// True when a power rule sits on the closed endpoint 2(a+s)/(a+r) (r != 0),
/// where the noise term exponent vanishes.
bool power_rule_at_endpoint(const ParamRule& rule, double a, double s, double r);

/// natterer: c (delta/u_norm)^{2(a+s)/(a+u)}; power: c delta^epsilon.
/// Throws InvalidRuleError for epsilon outside the admissible interval.
double alpha_from_rule(const ParamRule& rule, double delta, double a, double s, double u,
                       double u_norm, double r = 0.0);

/// delta-exponent of alpha under a rule: epsilon, or 2(a+s)/(a+u) for natterer.
double rule_exponent(const ParamRule& rule, double a, double s, double u);

/// 2(a+s)/(a+u).
double optimal_epsilon(double a, double s, double u);

struct RNormError {
  double value = 0.0;
  /// r within [-a, min(u, s)], where the r-norm estimate is stated.
  bool in_estimate_range = true;
};

RNormError error_r_norm(const Problem& problem, double r, const CoeffVector& x, double s,
                        std::size_t scale = 0);

/// min{1 - eps(a+r)/(2(a+s)), eps(u-r)/(2(a+s))}, or (u-r)/(a+u) when no
/// epsilon is given (the optimal rule).
double theoretical_order(double a, double s, double u, double r,
                         std::optional<double> epsilon = std::nullopt);

}  // namespace hilscale
