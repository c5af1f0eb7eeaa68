#pragma once

// Regularization over a vectorial Hilbert scale generated by L_1..L_N.
// The regularized solution is the eta-weighted combination of the per-scale
// solutions L_i^{-s_i} g^i_{alpha_i}(B_i*B_i) B_i* y_i; all terms are
// diagonal in the shared basis, so the vector-valued spectral integral is a
// per-scale elementwise filter.

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "hilscale/problems.hpp"
#include "hilscale/regularizers.hpp"
#include "hilscale/scales_single.hpp"

namespace hilscale {

struct MultiConfig {
  std::vector<double> s;
  std::vector<double> eta;
  std::vector<RegFamily> families;
  std::vector<double> u;
  std::vector<double> a;

  std::size_t size() const noexcept { return s.size(); }
  /// Throws PreconditionError on inconsistent lengths, eta not summing to 1
  /// (1e-12), negative s_i or nonpositive a_i.
  void validate() const;
  ScaleConfig term(std::size_t i) const { return ScaleConfig{s.at(i), families.at(i)}; }
};

/// uniform eta = 1/N.
std::vector<double> uniform_weights(std::size_t N);

/// One observation per scale with its noise level.
struct ObservationSet {
  std::vector<CoeffVector> obs;
  std::vector<double> deltas;

  ObservationSet(std::vector<CoeffVector> obs, std::vector<double> deltas);
  /// Same as the constructor plus the check ||obs_i - y|| <= deltas_i.
  static ObservationSet checked(const CoeffVector& y, std::vector<CoeffVector> obs,
                                std::vector<double> deltas);
  std::size_t size() const noexcept { return obs.size(); }
};

/// Single observation, scalar alpha, replicated across the N scales. All
/// families must coincide (one scalar filter).
CoeffVector regularize_multi(const Problem& problem, const MultiConfig& cfg, double alpha,
                             const CoeffVector& y_obs);

/// Vector-valued filters and parameters with one observation per scale. The
/// N terms may be evaluated concurrently; they are summed in index order.
CoeffVector regularize_multi_vec(const Problem& problem, const MultiConfig& cfg,
                                 const std::vector<double>& alpha_vec, const ObservationSet& obs,
                                 bool concurrent = false);

struct OptimalEps {
  double epsilon = 0.0;
  double sigma_c = 0.0;
};

/// epsilon = (max a_i/(2(a_i+s_i)) + min u_i/(2(a_i+s_i)))^{-1} and the
/// resulting order sigma_c = min-term / (min-term + max-term).
OptimalEps optimal_eps_multi(const MultiConfig& cfg);

/// min_i u_i/(a_i+u_i): optimal order with vector-valued parameters.
double sigma_star(const MultiConfig& cfg);

/// Per-scale optimal exponents 2(a_i+s_i)/(a_i+u_i).
std::vector<double> optimal_eps_vec(const MultiConfig& cfg);

struct NoisePlan {
  std::vector<double> p;       // delta_i = delta^{p_i}
  std::vector<double> deltas;  // delta_i
  std::vector<double> alpha;   // c_i delta_i^{2(a_i+s_i)/(a_i+u_i)}
  double sigma_hat = 0.0;      // max_i u_i/(a_i+u_i)
};

/// p_i at the lower bound max_k rate_k / rate_i, rate_i = u_i/(a_i+u_i).
NoisePlan multi_noise_plan(const MultiConfig& cfg, double delta,
                           const std::vector<double>& c = {});

/// Order of the combined solution in the r-norm when term i uses
/// alpha_i ~ delta^{alpha_exp[i]} and noise delta^{noise_exp[i]}:
///   min_i min{noise_exp_i - alpha_exp_i (a_i+r)/(2(a_i+s_i)),
///             alpha_exp_i (u_i - r)/(2(a_i+s_i))}.
double combined_order(const MultiConfig& cfg, const std::vector<double>& alpha_exp,
                      const std::vector<double>& noise_exp, double r = 0.0);

nlohmann::json to_json(const MultiConfig& cfg);
MultiConfig multi_config_from_json(const nlohmann::json& doc);

}  // namespace hilscale
