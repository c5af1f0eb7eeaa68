#include "hilscale/scales_multi.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include "hilscale/errors.hpp"

namespace hilscale {

void MultiConfig::validate() const {
  const std::size_t N = s.size();
  if (N == 0) throw PreconditionError("MultiConfig: no scales");
  if (eta.size() != N || families.size() != N || u.size() != N || a.size() != N) {
    throw PreconditionError("MultiConfig: s, eta, families, u, a must have equal length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    if (s[i] < 0.0) throw PreconditionError("MultiConfig: s_i must be nonnegative");
    if (!(a[i] > 0.0)) throw PreconditionError("MultiConfig: a_i must be positive");
    if (!(eta[i] >= 0.0)) throw PreconditionError("MultiConfig: eta_i must be nonnegative");
    if (u[i] < 0.0) throw PreconditionError("MultiConfig: u_i must be nonnegative");
    sum += eta[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) throw PreconditionError("MultiConfig: eta must sum to 1");
}

std::vector<double> uniform_weights(std::size_t N) {
  if (N == 0) throw PreconditionError("uniform_weights: N must be positive");
  return std::vector<double>(N, 1.0 / static_cast<double>(N));
}

ObservationSet::ObservationSet(std::vector<CoeffVector> o, std::vector<double> d)
    : obs(std::move(o)), deltas(std::move(d)) {
  if (obs.empty() || obs.size() != deltas.size()) {
    throw PreconditionError("ObservationSet: need one noise level per observation");
  }
  for (double delta : deltas) {
    if (!(delta > 0.0)) throw PreconditionError("ObservationSet: noise levels must be positive");
  }
  for (const auto& v : obs) require_same_size(v.size(), obs.front().size(), "ObservationSet");
}

ObservationSet ObservationSet::checked(const CoeffVector& y, std::vector<CoeffVector> obs,
                                       std::vector<double> deltas) {
  ObservationSet set(std::move(obs), std::move(deltas));
  for (std::size_t i = 0; i < set.size(); ++i) {
    if ((set.obs[i] - y).norm() > set.deltas[i] * (1.0 + 1e-12)) {
      throw PreconditionError("ObservationSet: observation " + std::to_string(i) +
                              " exceeds its noise level");
    }
  }
  return set;
}

namespace {

void require_scales(const Problem& problem, const MultiConfig& cfg) {
  cfg.validate();
  if (cfg.size() > problem.num_scales()) {
    throw PreconditionError("multi-scale config has more scales than the problem");
  }
}

CoeffVector weighted_sum(const std::vector<CoeffVector>& terms, const std::vector<double>& eta) {
  std::vector<double> out(terms.front().size(), 0.0);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += eta[i] * terms[i][j];
  }
  return CoeffVector(std::move(out));
}

}  // namespace

CoeffVector regularize_multi(const Problem& problem, const MultiConfig& cfg, double alpha,
                             const CoeffVector& y_obs) {
  require_scales(problem, cfg);
  for (const auto& f : cfg.families) {
    if (!(f == cfg.families.front())) {
      throw PreconditionError("regularize_multi: scalar filter requires identical families");
    }
  }
  std::vector<CoeffVector> terms;
  terms.reserve(cfg.size());
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    terms.push_back(regularize(problem, cfg.term(i), alpha, y_obs, i));
  }
  return weighted_sum(terms, cfg.eta);
}

CoeffVector regularize_multi_vec(const Problem& problem, const MultiConfig& cfg,
                                 const std::vector<double>& alpha_vec, const ObservationSet& obs,
                                 bool concurrent) {
  require_scales(problem, cfg);
  if (alpha_vec.size() != cfg.size() || obs.size() != cfg.size()) {
    throw PreconditionError("regularize_multi_vec: need one alpha and one observation per scale");
  }
  auto term = [&](std::size_t i) {
    return regularize(problem, cfg.term(i), alpha_vec[i], obs.obs[i], i);
  };
  std::vector<CoeffVector> terms;
  terms.reserve(cfg.size());
  if (concurrent) {
    std::vector<std::future<CoeffVector>> pending;
    for (std::size_t i = 0; i < cfg.size(); ++i) pending.push_back(std::async(std::launch::async, term, i));
    for (auto& f : pending) terms.push_back(f.get());
  } else {
    for (std::size_t i = 0; i < cfg.size(); ++i) terms.push_back(term(i));
  }
  return weighted_sum(terms, cfg.eta);
}

OptimalEps optimal_eps_multi(const MultiConfig& cfg) {
  cfg.validate();
  double max_a = -std::numeric_limits<double>::infinity();
  double min_u = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    const double denom = 2.0 * (cfg.a[i] + cfg.s[i]);
    max_a = std::max(max_a, cfg.a[i] / denom);
    min_u = std::min(min_u, cfg.u[i] / denom);
  }
  return OptimalEps{1.0 / (max_a + min_u), min_u / (min_u + max_a)};
}

double sigma_star(const MultiConfig& cfg) {
  cfg.validate();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    best = std::min(best, cfg.u[i] / (cfg.a[i] + cfg.u[i]));
  }
  return best;
}

std::vector<double> optimal_eps_vec(const MultiConfig& cfg) {
  cfg.validate();
  std::vector<double> eps(cfg.size());
  for (std::size_t i = 0; i < eps.size(); ++i) eps[i] = optimal_epsilon(cfg.a[i], cfg.s[i], cfg.u[i]);
  return eps;
}

NoisePlan multi_noise_plan(const MultiConfig& cfg, double delta, const std::vector<double>& c) {
  cfg.validate();
  if (!(delta > 0.0)) throw PreconditionError("multi_noise_plan: delta must be positive");
  if (!c.empty() && c.size() != cfg.size()) {
    throw PreconditionError("multi_noise_plan: one constant c_i per scale");
  }
  std::vector<double> rate(cfg.size());
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    if (!(cfg.u[i] > 0.0)) {
      throw PlanUndefinedError("multi_noise_plan: u_" + std::to_string(i) + " = 0");
    }
    rate[i] = cfg.u[i] / (cfg.a[i] + cfg.u[i]);
  }
  NoisePlan plan;
  plan.sigma_hat = *std::max_element(rate.begin(), rate.end());
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    const double p = plan.sigma_hat / rate[i];
    const double d = std::pow(delta, p);
    const double ci = c.empty() ? 1.0 : c[i];
    plan.p.push_back(p);
    plan.deltas.push_back(d);
    plan.alpha.push_back(ci * std::pow(d, optimal_epsilon(cfg.a[i], cfg.s[i], cfg.u[i])));
  }
  return plan;
}

double combined_order(const MultiConfig& cfg, const std::vector<double>& alpha_exp,
                      const std::vector<double>& noise_exp, double r) {
  cfg.validate();
  if (alpha_exp.size() != cfg.size() || noise_exp.size() != cfg.size()) {
    throw PreconditionError("combined_order: one exponent pair per scale");
  }
  double order = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    const double denom = 2.0 * (cfg.a[i] + cfg.s[i]);
    const double noise = noise_exp[i] - alpha_exp[i] * (cfg.a[i] + r) / denom;
    const double reg = alpha_exp[i] * (cfg.u[i] - r) / denom;
    order = std::min({order, noise, reg});
  }
  return order;
}

nlohmann::json to_json(const MultiConfig& cfg) {
  nlohmann::json families = nlohmann::json::array();
  for (const auto& f : cfg.families) families.push_back(to_json(f));
  return {{"s", cfg.s}, {"eta", cfg.eta}, {"families", families}, {"a", cfg.a}, {"u", cfg.u}};
}

MultiConfig multi_config_from_json(const nlohmann::json& doc) {
  try {
    MultiConfig cfg;
    cfg.s = doc.at("s").get<std::vector<double>>();
    cfg.a = doc.at("a").get<std::vector<double>>();
    cfg.u = doc.at("u").get<std::vector<double>>();
    cfg.eta = doc.contains("eta") ? doc.at("eta").get<std::vector<double>>()
                                  : uniform_weights(cfg.s.size());
    for (const auto& f : doc.at("families")) cfg.families.push_back(reg_family_from_json(f));
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("multi config JSON: ") + e.what());
  }
}

}  // namespace hilscale
