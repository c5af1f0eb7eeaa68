#pragma once

// Diagonal test problems Tx = y with exactly known link constants.
//
// The forward operator T has singular values sigma_j in the basis that also
// diagonalizes every generator L_i, so T*T and L_i commute and the smoothing
// link m ||x||_{-a} <= ||Tx|| <= M ||x||_{-a} reduces to the elementwise
// bounds m l_j^{-a} <= sigma_j <= M l_j^{-a}.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hilscale/spectral_core.hpp"
#include <json.hpp>

namespace hilscale {

/// Singular values of T; all strictly positive (T injective).
class ForwardOperator {
 public:
  explicit ForwardOperator(std::vector<double> svals);

  std::size_t size() const noexcept { return svals_.size(); }
  double sval(std::size_t j) const { return svals_[j]; }
  std::span<const double> svals() const noexcept { return svals_; }

 private:
  std::vector<double> svals_;
};

/// Constants (a, m, M) of the smoothing link between T and L.
struct SmoothingLink {
  double a = 1.0;
  double m = 1.0;
  double M = 1.0;
};

/// True iff m l_j^{-a} <= sigma_j <= M l_j^{-a} for every j, up to a relative
/// roundoff allowance.
bool link_holds(const SmoothingLink& link, const ScaleOperator& L, const ForwardOperator& T,
                double rel_tol = 1e-12);

/// Tightest (m, M) for a given exponent a: extremal values of sigma_j l_j^a.
SmoothingLink fit_link(double a, const ScaleOperator& L, const ForwardOperator& T);

struct ExactSolution {
  CoeffVector x_dag;
  double u = 0.0;          // claimed smoothness
  double u_norm = 0.0;     // ||x_dag||_u at truncation
  double tail_fraction = 0.0;
};

/// Share of ||x||_u^2 carried by the upper half of the coefficients (j > n/2).
double tail_fraction(const ScaleOperator& L, double u, const CoeffVector& x);

/// Tail criterion threshold for accepting "x in X_u" at a given truncation.
inline constexpr double kTailThreshold = 0.01;

/// One generator of the scale together with its link and smoothness data.
struct ScaleComponent {
  ScaleOperator L;
  SmoothingLink link;
  ExactSolution exact;
};

enum class GeneratorKind { synthetic, integration, multi_scale, custom };

/// Recipe that produced a problem; enough to rebuild it.
struct ProblemSpec {
  GeneratorKind kind = GeneratorKind::synthetic;
  std::size_t n = 2000;
  double a = 1.0;                 // synthetic
  std::vector<double> a_list;     // multi_scale
  double u = 1.0;                 // synthetic / integration: claimed u; multi_scale: u_target
  double tau = 0.5;
};

class Problem {
 public:
  Problem(ProblemSpec spec, ForwardOperator T, std::vector<ScaleComponent> scales);

  const ProblemSpec& spec() const noexcept { return spec_; }
  std::size_t n() const noexcept { return T_.size(); }
  const ForwardOperator& T() const noexcept { return T_; }
  std::size_t num_scales() const noexcept { return scales_.size(); }
  const ScaleComponent& scale(std::size_t i) const;
  const ScaleOperator& L(std::size_t i = 0) const { return scale(i).L; }
  const SmoothingLink& link(std::size_t i = 0) const { return scale(i).link; }
  const ExactSolution& exact(std::size_t i = 0) const { return scale(i).exact; }
  const CoeffVector& x_dag() const noexcept { return scales_.front().exact.x_dag; }
  /// Exact data y = T x_dag.
  const CoeffVector& y() const noexcept { return y_; }

 private:
  ProblemSpec spec_;
  ForwardOperator T_;
  std::vector<ScaleComponent> scales_;
  CoeffVector y_;
};

/// sigma_j = j^{-a}, j = 1..n.
std::vector<double> synthetic_svals(std::size_t n, double a);
/// x_j = l_j^{-u-1/2-tau}.
CoeffVector power_law_solution(const ScaleOperator& L, double u, double tau);

/// Assemble a single-scale problem without the truncation check. The link is
/// fitted with the given exponent a.
Problem make_problem(ScaleOperator L, ForwardOperator T, double a, CoeffVector x_dag, double u);

/// l_j = j, sigma_j = j^{-a}, x_j = j^{-u-1/2-tau}. Requires n >= 16 and a
/// tail fraction below kTailThreshold.
Problem synthetic_diagonal(std::size_t n, double a, double u, double tau = 0.5);

/// Integration operator on [0,1]: sigma_j = 1/((j-1/2) pi), l_j = (j-1/2) pi.
Problem integration_problem(std::size_t n, double u, double tau = 0.5);

/// Shared T with sigma_j = 1/j and generators l_{i,j} = j^{1/a_i}; one x_dag
/// built against l_j = j, with per-scale smoothness taken from the grid
/// {0, 0.25, ..., 4} as the largest value passing the tail criterion.
Problem multi_scale_problem(std::size_t n, const std::vector<double>& a_list, double u_target,
                            double tau = 0.5);

/// Rebuild from a recipe (custom problems cannot be rebuilt).
Problem build_problem(const ProblemSpec& spec);

/// Same problem with sigma_j multiplied by factors[j]; y and (m, M) refitted.
Problem perturb_svals(const Problem& problem, std::span<const double> factors);

/// T x, coefficientwise.
CoeffVector apply_forward(const ForwardOperator& T, const CoeffVector& x);

/// T^dagger y, coefficientwise y_j / sigma_j.
CoeffVector moore_penrose(const ForwardOperator& T, const CoeffVector& y);

nlohmann::json to_json(const Problem& problem);
ProblemSpec problem_spec_from_json(const nlohmann::json& doc);
std::string to_string(GeneratorKind kind);

}  // namespace hilscale
