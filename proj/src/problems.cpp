#include "hilscale/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hilscale/errors.hpp"

namespace hilscale {

namespace {

constexpr std::size_t kMinimalSize = 16;

std::vector<double> arange_eigs(std::size_t n, double exponent) {
  std::vector<double> l(n);
  for (std::size_t j = 0; j < n; ++j) l[j] = real_power(static_cast<double>(j + 1), exponent);
  return l;
}

// Integral estimate of the truncation that would push the tail fraction of
// f_j = l_j^{2u} x_j^2 below the threshold, assuming f_j ~ C j^{-p} locally.
// Smallest truncation whose upper-half share drops below the threshold, with the
// terms beyond n extrapolated by the power law fitted to f(n/2) and f(n).
std::size_t estimate_minimal_n(const ScaleOperator& L, double u, const CoeffVector& x) {
  constexpr std::size_t kNoEstimate = std::numeric_limits<std::size_t>::max();
  const std::size_t n = x.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double v = real_power(L.eig(j), u) * x[j];
    prefix[j + 1] = prefix[j] + v * v;
  }
  const double f_hi = prefix[n] - prefix[n - 1];
  const double f_mid = prefix[n / 2] - prefix[n / 2 - 1];
  if (!(f_hi > 0.0) || !(f_mid > 0.0)) return kNoEstimate;
  const double p = -std::log(f_hi / f_mid) / std::log(static_cast<double>(n) / static_cast<double>(n / 2));
  if (!(p > 1.0)) return kNoEstimate;
  const double C = f_hi * std::pow(static_cast<double>(n), p);
  // sum over 1-based indices lo..hi
  auto sum = [&](double lo, double hi) {
    double total = 0.0;
    if (lo <= static_cast<double>(n)) {
      const auto a = static_cast<std::size_t>(lo) - 1;
      const auto b = static_cast<std::size_t>(std::min(hi, static_cast<double>(n)));
      total += prefix[b] - prefix[a];
    }
    const double from = std::max(lo, static_cast<double>(n) + 1.0) - 0.5;
    const double to = hi + 0.5;
    if (to > from) total += C / (p - 1.0) * (std::pow(from, 1.0 - p) - std::pow(to, 1.0 - p));
    return total;
  };
  auto share = [&](double N) { return sum(std::floor(N / 2) + 1, N) / sum(1, N); };
  double lo = static_cast<double>(n), hi = lo;
  while (share(hi) >= kTailThreshold) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e15) return kNoEstimate;
  }
  while (hi - lo > 1.0) {
    const double mid = std::floor(0.5 * (lo + hi));
    (share(mid) >= kTailThreshold ? lo : hi) = mid;
  }
  return static_cast<std::size_t>(hi);
}

ExactSolution make_exact(const ScaleOperator& L, CoeffVector x, double u) {
  const double u_norm = scale_norm(L, u, x);
  const double tail = tail_fraction(L, u, x);
  return ExactSolution{std::move(x), u, u_norm, tail};
}

void enforce_tail(const ScaleOperator& L, const ExactSolution& exact) {
  if (exact.tail_fraction >= kTailThreshold) {
    const std::size_t n_min = estimate_minimal_n(L, exact.u, exact.x_dag);
    std::ostringstream msg;
    msg << "truncation too small: tail fraction " << exact.tail_fraction << " >= "
        << kTailThreshold << " at n=" << exact.x_dag.size() << " for u=" << exact.u
        << "; estimated minimal n=" << n_min;
    throw TruncationError(msg.str(), n_min);
  }
}

void require_size(std::size_t n, const char* where) {
  if (n < kMinimalSize) {
    throw PreconditionError(std::string(where) + ": need n >= " + std::to_string(kMinimalSize));
  }
}

}  // namespace

ForwardOperator::ForwardOperator(std::vector<double> svals) : svals_(std::move(svals)) {
  if (svals_.empty()) throw PreconditionError("ForwardOperator: no singular values");
  for (std::size_t j = 0; j < svals_.size(); ++j) {
    if (!(svals_[j] > 0.0) || !std::isfinite(svals_[j])) {
      throw PreconditionError("ForwardOperator: singular value " + std::to_string(j) +
                              " must be finite and positive");
    }
  }
}

bool link_holds(const SmoothingLink& link, const ScaleOperator& L, const ForwardOperator& T,
                double rel_tol) {
  require_same_size(L.size(), T.size(), "link_holds");
  if (!(link.a > 0.0) || !(link.m > 0.0) || link.m > link.M) return false;
  for (std::size_t j = 0; j < T.size(); ++j) {
    const double ref = real_power(L.eig(j), -link.a);
    const double sigma = T.sval(j);
    if (sigma < link.m * ref * (1.0 - rel_tol) || sigma > link.M * ref * (1.0 + rel_tol)) {
      return false;
    }
  }
  return true;
}

SmoothingLink fit_link(double a, const ScaleOperator& L, const ForwardOperator& T) {
  require_same_size(L.size(), T.size(), "fit_link");
  if (!(a > 0.0)) throw PreconditionError("fit_link: a must be positive");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t j = 0; j < T.size(); ++j) {
    const double ratio = T.sval(j) * real_power(L.eig(j), a);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return SmoothingLink{a, lo, hi};
}

double tail_fraction(const ScaleOperator& L, double u, const CoeffVector& x) {
  require_same_size(L.size(), x.size(), "tail_fraction");
  double total = 0.0;
  double tail = 0.0;
  const std::size_t half = x.size() / 2;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double v = real_power(L.eig(j), u) * x[j];
    total += v * v;
    if (j >= half) tail += v * v;
  }
  return total > 0.0 ? tail / total : 0.0;
}

Problem::Problem(ProblemSpec spec, ForwardOperator T, std::vector<ScaleComponent> scales)
    : spec_(std::move(spec)),
      T_(std::move(T)),
      scales_(std::move(scales)),
      y_(CoeffVector::zeros(1)) {
  if (scales_.empty()) throw PreconditionError("Problem: at least one scale required");
  for (const auto& sc : scales_) {
    require_same_size(sc.L.size(), T_.size(), "Problem");
    require_same_size(sc.exact.x_dag.size(), T_.size(), "Problem");
    if (!link_holds(sc.link, sc.L, T_)) {
      throw PreconditionError("Problem: smoothing link bounds violated");
    }
    if (!(sc.exact.x_dag == scales_.front().exact.x_dag)) {
      throw PreconditionError("Problem: all scales must share one exact solution");
    }
  }
  y_ = apply_forward(T_, scales_.front().exact.x_dag);
}

const ScaleComponent& Problem::scale(std::size_t i) const {
  if (i >= scales_.size()) throw PreconditionError("Problem: scale index out of range");
  return scales_[i];
}

std::vector<double> synthetic_svals(std::size_t n, double a) { return arange_eigs(n, -a); }

CoeffVector power_law_solution(const ScaleOperator& L, double u, double tau) {
  std::vector<double> x(L.size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = real_power(L.eig(j), -u - 0.5 - tau);
  return CoeffVector(std::move(x));
}

Problem make_problem(ScaleOperator L, ForwardOperator T, double a, CoeffVector x_dag, double u) {
  SmoothingLink link = fit_link(a, L, T);
  ExactSolution exact = make_exact(L, std::move(x_dag), u);
  ProblemSpec spec{GeneratorKind::custom, T.size(), a, {}, u, 0.0};
  std::vector<ScaleComponent> scales{ScaleComponent{std::move(L), link, std::move(exact)}};
  return Problem(std::move(spec), std::move(T), std::move(scales));
}

Problem synthetic_diagonal(std::size_t n, double a, double u, double tau) {
  require_size(n, "synthetic_diagonal");
  if (!(a > 0.0) || u < 0.0 || !(tau > 0.0)) {
    throw PreconditionError("synthetic_diagonal: need a > 0, u >= 0, tau > 0");
  }
  ScaleOperator L(arange_eigs(n, 1.0));
  ForwardOperator T(synthetic_svals(n, a));
  ExactSolution exact = make_exact(L, power_law_solution(L, u, tau), u);
  enforce_tail(L, exact);
  // sigma_j l_j^a = 1 exactly up to roundoff
  const SmoothingLink link{a, 1.0, 1.0};
  ProblemSpec spec{GeneratorKind::synthetic, n, a, {}, u, tau};
  std::vector<ScaleComponent> scales{ScaleComponent{std::move(L), link, std::move(exact)}};
  return Problem(std::move(spec), std::move(T), std::move(scales));
}

Problem integration_problem(std::size_t n, double u, double tau) {
  require_size(n, "integration_problem");
  if (u < 0.0 || !(tau > 0.0)) throw PreconditionError("integration_problem: need u >= 0, tau > 0");
  std::vector<double> l(n), sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    l[j] = (static_cast<double>(j + 1) - 0.5) * std::numbers::pi;
    sigma[j] = 1.0 / l[j];
  }
  ScaleOperator L(std::move(l));
  ForwardOperator T(std::move(sigma));
  ExactSolution exact = make_exact(L, power_law_solution(L, u, tau), u);
  enforce_tail(L, exact);
  const SmoothingLink link{1.0, 1.0, 1.0};
  ProblemSpec spec{GeneratorKind::integration, n, 1.0, {}, u, tau};
  std::vector<ScaleComponent> scales{ScaleComponent{std::move(L), link, std::move(exact)}};
  return Problem(std::move(spec), std::move(T), std::move(scales));
}

Problem multi_scale_problem(std::size_t n, const std::vector<double>& a_list, double u_target,
                            double tau) {
  require_size(n, "multi_scale_problem");
  if (a_list.size() < 2) throw PreconditionError("multi_scale_problem: need N >= 2 scales");
  for (double a : a_list) {
    if (!(a > 0.0)) throw PreconditionError("multi_scale_problem: all a_i must be positive");
  }
  if (u_target < 0.0 || !(tau > 0.0)) {
    throw PreconditionError("multi_scale_problem: need u_target >= 0, tau > 0");
  }
  const ScaleOperator reference(arange_eigs(n, 1.0));
  const CoeffVector x = power_law_solution(reference, u_target, tau);
  ForwardOperator T(synthetic_svals(n, 1.0));

  std::vector<ScaleComponent> scales;
  for (std::size_t i = 0; i < a_list.size(); ++i) {
    ScaleOperator L(arange_eigs(n, 1.0 / a_list[i]));
    double best = -1.0;
    for (int k = 0; k <= 16; ++k) {
      const double u = 0.25 * k;
      if (tail_fraction(L, u, x) < kTailThreshold) best = u;
    }
    if (best < 0.0) {
      throw TruncationError("exact solution too rough for scale " + std::to_string(i), 0);
    }
    ExactSolution exact = make_exact(L, x, best);
    const SmoothingLink link{a_list[i], 1.0, 1.0};
    scales.push_back(ScaleComponent{std::move(L), link, std::move(exact)});
  }
  ProblemSpec spec{GeneratorKind::multi_scale, n, 1.0, a_list, u_target, tau};
  return Problem(std::move(spec), std::move(T), std::move(scales));
}

Problem build_problem(const ProblemSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::synthetic:
      return synthetic_diagonal(spec.n, spec.a, spec.u, spec.tau);
    case GeneratorKind::integration:
      return integration_problem(spec.n, spec.u, spec.tau);
    case GeneratorKind::multi_scale:
      return multi_scale_problem(spec.n, spec.a_list, spec.u, spec.tau);
    case GeneratorKind::custom:
      break;
  }
  throw PreconditionError("build_problem: custom problems carry no recipe");
}

Problem perturb_svals(const Problem& problem, std::span<const double> factors) {
  require_same_size(problem.n(), factors.size(), "perturb_svals");
  std::vector<double> sigma(problem.n());
  for (std::size_t j = 0; j < sigma.size(); ++j) sigma[j] = problem.T().sval(j) * factors[j];
  ForwardOperator T(std::move(sigma));
  std::vector<ScaleComponent> scales;
  for (std::size_t i = 0; i < problem.num_scales(); ++i) {
    const ScaleComponent& sc = problem.scale(i);
    scales.push_back(ScaleComponent{sc.L, fit_link(sc.link.a, sc.L, T), sc.exact});
  }
  ProblemSpec spec = problem.spec();
  spec.kind = GeneratorKind::custom;
  return Problem(std::move(spec), std::move(T), std::move(scales));
}

CoeffVector apply_forward(const ForwardOperator& T, const CoeffVector& x) {
  require_same_size(T.size(), x.size(), "apply_forward");
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = T.sval(j) * x[j];
  return CoeffVector(std::move(out));
}

CoeffVector moore_penrose(const ForwardOperator& T, const CoeffVector& y) {
  require_same_size(T.size(), y.size(), "moore_penrose");
  std::vector<double> out(y.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = y[j] / T.sval(j);
  return CoeffVector(std::move(out));
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::synthetic: return "synthetic";
    case GeneratorKind::integration: return "integration";
    case GeneratorKind::multi_scale: return "multi_scale";
    case GeneratorKind::custom: return "custom";
  }
  return "unknown";
}

nlohmann::json to_json(const Problem& problem) {
  using nlohmann::json;
  const ProblemSpec& spec = problem.spec();
  json params = json::object();
  std::string svals_rule;
  switch (spec.kind) {
    case GeneratorKind::synthetic:
      params["a"] = spec.a;
      svals_rule = "j^(-a)";
      break;
    case GeneratorKind::integration:
      svals_rule = "1/((j-1/2)*pi)";
      break;
    case GeneratorKind::multi_scale:
      params["a_list"] = spec.a_list;
      svals_rule = "j^(-1)";
      break;
    case GeneratorKind::custom:
      params["eigs"] = std::vector<double>(problem.L().eigs().begin(), problem.L().eigs().end());
      params["svals"] = std::vector<double>(problem.T().svals().begin(), problem.T().svals().end());
      params["x_dag"] = problem.x_dag().coeffs();
      svals_rule = "explicit";
      break;
  }
  json per_scale = json::array();
  for (std::size_t i = 0; i < problem.num_scales(); ++i) {
    const ScaleComponent& sc = problem.scale(i);
    per_scale.push_back({{"a", sc.link.a}, {"m", sc.link.m}, {"M", sc.link.M}, {"u_i", sc.exact.u}});
  }
  return json{{"n", problem.n()},
              {"generator", {{"kind", to_string(spec.kind)}, {"params", params}}},
              {"svals_rule", svals_rule},
              {"x_dag_rule", {{"u", spec.u}, {"tau", spec.tau}}},
              {"per_scale", per_scale}};
}

ProblemSpec problem_spec_from_json(const nlohmann::json& doc) {
  try {
    ProblemSpec spec;
    spec.n = doc.at("n").get<std::size_t>();
    const auto& gen = doc.at("generator");
    const std::string kind = gen.at("kind").get<std::string>();
    const nlohmann::json params = gen.value("params", nlohmann::json::object());
    if (kind == "synthetic") {
      spec.kind = GeneratorKind::synthetic;
      spec.a = params.value("a", 1.0);
    } else if (kind == "integration") {
      spec.kind = GeneratorKind::integration;
      spec.a = 1.0;
    } else if (kind == "multi_scale") {
      spec.kind = GeneratorKind::multi_scale;
      spec.a_list = params.at("a_list").get<std::vector<double>>();
    } else {
      throw PreconditionError("problem JSON: generator kind '" + kind + "' cannot be rebuilt");
    }
    const nlohmann::json rule = doc.value("x_dag_rule", nlohmann::json::object());
    spec.u = rule.value("u", 1.0);
    spec.tau = rule.value("tau", 0.5);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("problem JSON: ") + e.what());
  }
}

}  // namespace hilscale
