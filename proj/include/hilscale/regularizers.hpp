#pragma once

// Filter families g_alpha approximating 1/lambda, their residuals
// r_alpha = 1 - lambda g_alpha, and grid certification of the conditions
//   C1  g_alpha(lambda) -> 1/lambda as alpha -> 0+,
//   C2  |g_alpha(lambda)| <= c_hat / alpha,
//   C3  lambda^mu |r_alpha(lambda)| <= c_mu alpha^mu for mu in [0, mu0].

#include <limits>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace hilscale {

enum class FilterKind { tikhonov, tsvd, landweber, showalter };

class RegFamily {
 public:
  static RegFamily tikhonov() { return RegFamily(FilterKind::tikhonov, 0.0); }
  static RegFamily tsvd() { return RegFamily(FilterKind::tsvd, 0.0); }
  /// Landweber with step omega; alpha maps to ceil(1/alpha) iterations.
  static RegFamily landweber(double omega);
  static RegFamily showalter() { return RegFamily(FilterKind::showalter, 0.0); }

  FilterKind kind() const noexcept { return kind_; }
  double omega() const noexcept { return omega_; }
  /// Qualification; +infinity for every family except Tikhonov.
  double mu0() const noexcept;
  double c_hat() const noexcept;
  /// Constant of lambda^beta |g_alpha| <= k alpha^{beta-1}: max(1 + c_0, c_hat).
  double k_const() const noexcept;
  std::string name() const;

  friend bool operator==(const RegFamily&, const RegFamily&) = default;

 private:
  RegFamily(FilterKind kind, double omega) : kind_(kind), omega_(omega) {}
  FilterKind kind_;
  double omega_;
};

/// Landweber iteration count for a given alpha.
long long landweber_steps(double alpha);

double filter(const RegFamily& family, double alpha, double lambda);
double residual(const RegFamily& family, double alpha, double lambda);

struct C3Entry {
  double mu = 0.0;
  double c_mu = 0.0;    // max over the grids of lambda^mu |r_alpha| / alpha^mu
  double growth = 0.0;  // slope of log(ratio) against log(1/alpha)
  bool pass = false;
};

struct CertReport {
  std::string family;
  bool c1 = false;
  double c_hat = 0.0;
  double c2_worst = 0.0;  // max alpha |g_alpha(lambda)|
  bool c2 = false;
  std::vector<C3Entry> c3;
  /// C3 holds on every mu up to min(mu0, 4).
  bool c3_pass = false;

  bool passed() const noexcept { return c1 && c2 && c3_pass; }
};

/// The ratio growth above which a C3 entry is declared unbounded.
inline constexpr double kGrowthThreshold = 0.1;
inline constexpr std::size_t kLambdaGridSize = 512;

/// count log-uniform points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// mu grid {0, 0.25, ..., min(mu0, 4)}.
std::vector<double> default_mu_grid(const RegFamily& family);

CertReport certify(const RegFamily& family, double Lambda, std::span<const double> alphas,
                   std::span<const double> mus);

nlohmann::json to_json(const CertReport& report);
nlohmann::json to_json(const RegFamily& family);
RegFamily reg_family_from_json(const nlohmann::json& doc);

}  // namespace hilscale
