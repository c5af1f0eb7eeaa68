#pragma once

// Sampling certificates for the structural inequalities of Hilbert scales on
// diagonal problems. Each check draws seeded random unit vectors; sample k
// uses its own generator seeded from (seed, k), so trials are independent of
// evaluation order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hilscale/problems.hpp"

namespace hilscale {

struct IneqReport {
  std::string name;
  double worst_slack = 0.0;  // relative, min over samples
  std::size_t samples = 0;
  bool pass = false;
  double observed_min = 0.0;  // extreme ratios, where the check has one
  double observed_max = 0.0;
};

inline constexpr double kSlackTolerance = 1e-10;

/// ||x||_r <= ||x||_q^{(s-r)/(s-q)} ||x||_s^{(r-q)/(s-q)} for random q < r < s
/// drawn from [t_lo, t_hi].
IneqReport interpolation_check(const ScaleOperator& L, std::size_t trials, std::uint64_t seed,
                               double t_lo = -3.0, double t_hi = 3.0);

struct LinkEstimate {
  double m = 0.0;
  double M = 0.0;
};

/// Extremal values of sigma_j l_j^a over the basis.
LinkEstimate norm_equivalence(const Problem& problem, std::size_t scale_index = 0);

/// m ||x||_{-a} <= ||Tx|| <= M ||x||_{-a} on random x, with (m, M) from
/// norm_equivalence.
IneqReport norm_equivalence_check(const Problem& problem, std::size_t scale_index,
                                  std::size_t trials, std::uint64_t seed);

/// ||(B*B)^{nu/2} x|| / ||x||_{-nu(a+s)} within [m^nu, M^nu].
IneqReport power_range_check(const Problem& problem, double s, double nu, std::size_t trials,
                             std::uint64_t seed, std::size_t scale_index = 0);

/// ||L^nu x|| <= ||A^nu x|| for every nu in the grid, given l_j <= a_j.
/// Throws PreconditionError when the hypothesis fails.
IneqReport heinz_check(std::span<const double> A_eigs, std::span<const double> L_eigs,
                       std::span<const double> nu_grid, std::size_t trials, std::uint64_t seed);

struct SourceCheck {
  double v_norm = 0.0;
  bool pass = false;
  double tail_share = 0.0;  // last-quarter share of ||v||^2
};

/// Representer v of x_dag = (B*B)^{u/(2(a+s))} v, with v_j = x_j (b_j^2)^{-u/(2(a+s))};
/// passes when the last quarter carries under 1% of ||v||^2.
SourceCheck source_condition_check(const Problem& problem, double s, double u,
                                   std::size_t scale_index = 0);

/// Same test run on an arbitrary element instead of the problem's x_dag.
SourceCheck source_condition_check(const Problem& problem, const CoeffVector& x, double s,
                                   double u, std::size_t scale_index = 0);

nlohmann::json to_json(const IneqReport& report);

/// Draws a standard-normal vector normalized to unit length.
CoeffVector random_unit(std::size_t n, std::uint64_t seed, std::uint64_t index);

}  // namespace hilscale
