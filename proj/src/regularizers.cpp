#include "hilscale/regularizers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hilscale/errors.hpp"
#include "hilscale/spectral_core.hpp"

namespace hilscale {

RegFamily RegFamily::landweber(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw PreconditionError("landweber: omega must be a finite positive step");
  }
  return RegFamily(FilterKind::landweber, omega);
}

double RegFamily::mu0() const noexcept {
  return kind_ == FilterKind::tikhonov ? 1.0 : std::numeric_limits<double>::infinity();
}

double RegFamily::c_hat() const noexcept {
  return kind_ == FilterKind::landweber ? 2.0 * omega_ : 1.0;
}

double RegFamily::k_const() const noexcept {
  // sup |r_alpha| = 1 for all four families
  return std::max(2.0, c_hat());
}

std::string RegFamily::name() const {
  switch (kind_) {
    case FilterKind::tikhonov: return "tikhonov";
    case FilterKind::tsvd: return "tsvd";
    case FilterKind::landweber: {
      std::ostringstream os;
      os << "landweber(omega=" << omega_ << ")";
      return os.str();
    }
    case FilterKind::showalter: return "showalter";
  }
  return "unknown";
}

long long landweber_steps(double alpha) {
  return static_cast<long long>(std::ceil(1.0 / alpha));
}

double filter(const RegFamily& family, double alpha, double lambda) {
  if (!(alpha > 0.0)) throw PreconditionError("filter: alpha must be positive");
  if (!(lambda >= 0.0)) throw PreconditionError("filter: lambda must be nonnegative");
  switch (family.kind()) {
    case FilterKind::tikhonov:
      return 1.0 / (lambda + alpha);
    case FilterKind::tsvd:
      return lambda >= alpha ? 1.0 / lambda : 0.0;
    case FilterKind::landweber: {
      const double w = family.omega();
      if (w * lambda > 1.0 + 1e-12) {
        throw DivergenceError("landweber: omega * lambda > 1 (omega=" + std::to_string(w) +
                              ", lambda=" + std::to_string(lambda) + ")");
      }
      const auto m = static_cast<double>(landweber_steps(alpha));
      if (lambda == 0.0) return m * w;
      // 1 - (1 - w lambda)^m without cancellation for small lambda
      const double wl = std::min(w * lambda, 1.0);
      return -std::expm1(m * std::log1p(-wl)) / lambda;
    }
    case FilterKind::showalter:
      if (lambda == 0.0) return 1.0 / alpha;
      return -std::expm1(-lambda / alpha) / lambda;
  }
  return 0.0;
}

double residual(const RegFamily& family, double alpha, double lambda) {
  switch (family.kind()) {
    case FilterKind::tikhonov:
      return alpha / (lambda + alpha);
    case FilterKind::landweber: {
      if (lambda == 0.0) return 1.0;
      const double wl = std::min(family.omega() * lambda, 1.0);
      return std::exp(static_cast<double>(landweber_steps(alpha)) * std::log1p(-wl));
    }
    case FilterKind::showalter:
      return std::exp(-lambda / alpha);
    case FilterKind::tsvd:
      break;
  }
  return lambda >= alpha ? 0.0 : 1.0;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) {
    throw PreconditionError("log_grid: need 0 < lo <= hi and count >= 1");
  }
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = hi;
    return grid;
  }
  const double l0 = std::log(lo);
  const double step = (std::log(hi) - l0) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) grid[k] = std::exp(l0 + step * static_cast<double>(k));
  grid.back() = hi;
  return grid;
}

std::vector<double> default_mu_grid(const RegFamily& family) {
  const double top = std::min(family.mu0(), 4.0);
  std::vector<double> mus;
  for (int k = 0; 0.25 * k <= top + 1e-12; ++k) mus.push_back(0.25 * k);
  return mus;
}

namespace {

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

CertReport certify(const RegFamily& family, double Lambda, std::span<const double> alphas,
                   std::span<const double> mus) {
  if (alphas.empty() || mus.empty()) throw PreconditionError("certify: empty grid");
  if (!(Lambda > 0.0)) throw PreconditionError("certify: Lambda must be positive");
  if (family.kind() == FilterKind::landweber && family.omega() * Lambda > 1.0 + 1e-12) {
    throw DivergenceError("certify: landweber needs omega * Lambda <= 1");
  }

  std::vector<double> sorted_alphas(alphas.begin(), alphas.end());
  std::sort(sorted_alphas.begin(), sorted_alphas.end(), std::greater<>());
  const double alpha_min = sorted_alphas.back();
  const std::vector<double> lambdas =
      log_grid(std::min(alpha_min * 1e-6, Lambda), Lambda, kLambdaGridSize);

  CertReport report;
  report.family = family.name();
  report.c_hat = family.c_hat();

  // C2
  for (double alpha : sorted_alphas) {
    for (double lambda : lambdas) {
      report.c2_worst = std::max(report.c2_worst, alpha * std::abs(filter(family, alpha, lambda)));
    }
    report.c2_worst = std::max(report.c2_worst, alpha * std::abs(filter(family, alpha, 0.0)));
  }
  report.c2 = report.c2_worst <= report.c_hat * (1.0 + 1e-12);

  // C1: |r_alpha(lambda)| = lambda |g_alpha - 1/lambda| decreases along alpha
  // and is small at the finest alpha, for lambda in the upper part of the grid.
  {
    const std::vector<double> probe = log_grid(std::sqrt(alpha_min * Lambda), Lambda, 8);
    bool ok = true;
    for (double lambda : probe) {
      double prev = std::numeric_limits<double>::infinity();
      for (double alpha : sorted_alphas) {
        const double gap = std::abs(filter(family, alpha, lambda) - 1.0 / lambda) * lambda;
        if (gap > prev * (1.0 + 1e-12) + 1e-15) ok = false;
        prev = gap;
      }
      if (prev > 0.01) ok = false;
    }
    report.c1 = ok;
  }

  // C3
  const double mu_top = std::min(family.mu0(), 4.0);
  report.c3_pass = true;
  for (double mu : mus) {
    C3Entry entry;
    entry.mu = mu;
    std::vector<double> log_inv_alpha, log_ratio;
    for (double alpha : sorted_alphas) {
      double sup = 0.0;
      for (double lambda : lambdas) {
        sup = std::max(sup, real_power(lambda, mu) * std::abs(residual(family, alpha, lambda)));
      }
      const double ratio = sup / std::pow(alpha, mu);
      entry.c_mu = std::max(entry.c_mu, ratio);
      log_inv_alpha.push_back(-std::log(alpha));
      log_ratio.push_back(std::log(std::max(ratio, 1e-300)));
    }
    entry.growth = sorted_alphas.size() > 1 ? slope(log_inv_alpha, log_ratio) : 0.0;
    entry.pass = entry.growth <= kGrowthThreshold;
    if (mu <= mu_top + 1e-12 && !entry.pass) report.c3_pass = false;
    report.c3.push_back(entry);
  }
  return report;
}

nlohmann::json to_json(const CertReport& report) {
  nlohmann::json c3 = nlohmann::json::array();
  for (const auto& e : report.c3) {
    c3.push_back({{"mu", e.mu}, {"c_mu", e.c_mu}, {"growth", e.growth}, {"pass", e.pass}});
  }
  return {{"family", report.family},
          {"conditions",
           {{"C1", report.c1},
            {"C2", {{"c_hat", report.c_hat}, {"worst", report.c2_worst}, {"pass", report.c2}}},
            {"C3", c3}}}};
}

nlohmann::json to_json(const RegFamily& family) {
  if (family.kind() == FilterKind::landweber) {
    return {{"kind", "landweber"}, {"omega", family.omega()}};
  }
  return family.name();
}

RegFamily reg_family_from_json(const nlohmann::json& doc) {
  std::string kind;
  double omega = 1.0;
  if (doc.is_string()) {
    kind = doc.get<std::string>();
  } else if (doc.is_object()) {
    kind = doc.at("kind").get<std::string>();
    omega = doc.value("omega", 1.0);
  } else {
    throw PreconditionError("family JSON must be a string or an object");
  }
  if (kind == "tikhonov") return RegFamily::tikhonov();
  if (kind == "tsvd") return RegFamily::tsvd();
  if (kind == "landweber") return RegFamily::landweber(omega);
  if (kind == "showalter") return RegFamily::showalter();
  throw PreconditionError("unknown filter family '" + kind + "'");
}

}  // namespace hilscale
