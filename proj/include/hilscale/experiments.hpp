#pragma once

// delta-sweeps and convergence-order fitting.
//
// A sweep fixes a problem, a regularization method and a parameter rule,
// perturbs the exact data at a decreasing sequence of noise levels, and fits
// the slope of log(median error) against log(delta). The fitted slope is
// compared with the exponent predicted for the configuration.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hilscale/problems.hpp"
#include "hilscale/scales_multi.hpp"
#include "hilscale/scales_single.hpp"

namespace hilscale {

/// gaussian: seeded white noise. tail: delta e_n. adversarial: seeded
/// Gaussian supported where the error-weighted amplification of the
/// regularization operator is at least `band` times its maximum, so the
/// perturbation sits in the directions the method amplifies most.
enum class NoiseMode { gaussian, tail, adversarial };

struct NoiseSpec {
  NoiseMode mode = NoiseMode::adversarial;
  std::uint64_t seed = 1;
  double band = 0.8;
};

/// y + e with ||e|| = delta. The adversarial mode needs `sensitivity`, one
/// nonnegative weight per coefficient; the other modes ignore it.
CoeffVector make_noise(const NoiseSpec& spec, const CoeffVector& y, double delta,
                       std::span<const double> sensitivity = {});

/// The perturbation e alone, so pure-noise sweeps avoid cancellation in (y + e) - y.
CoeffVector noise_vector(const NoiseSpec& spec, std::size_t n, double delta,
                         std::span<const double> sensitivity = {});

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

/// Ordinary least squares through (log delta, log error) pairs.
FitResult fit_order(std::span<const std::pair<double, double>> points);

/// Which part of the error a sweep measures: the full error, the
/// regularization error on exact data, or the propagated noise R_alpha e.
enum class ErrorComponent { total, regularization, noise };

struct SingleMethod {
  ScaleConfig cfg;
  ParamRule rule = ParamRule::natterer();
};

struct MultiMethod {
  enum class Plan { scalar, vector, multi_noise };
  MultiConfig cfg;
  Plan plan = Plan::scalar;
  std::optional<double> epsilon;   // scalar plan; optimal when empty
  std::vector<double> epsilons;    // vector plan; optimal when empty
  std::vector<double> c;           // per-scale constants, default 1
};

struct SweepConfig {
  std::string label;
  ProblemSpec problem;
  std::variant<SingleMethod, MultiMethod> method;
  std::vector<double> deltas;  // strictly decreasing
  double r = 0.0;
  std::size_t repeats = 5;
  NoiseSpec noise;
  ErrorComponent component = ErrorComponent::total;
  double tolerance = 0.07;
  std::size_t threads = 0;  // 0: HILSCALE_THREADS or hardware default
};

/// count points from 10^{log10_max} down to 10^{log10_min}.
std::vector<double> log_deltas(double log10_max, double log10_min, std::size_t count);
/// The default grid 10^{-1.5} ... 10^{-4.5}, 7 points.
std::vector<double> default_deltas();

/// Validates count >= 6, strict decrease and a step ratio of at most 10^{-1/2}.
void validate_deltas(std::span<const double> deltas);

struct RateRecord {
  double delta = 0.0;
  std::size_t repeat = 0;
  std::vector<double> alpha;
  double error = 0.0;
  double r = 0.0;

  friend bool operator==(const RateRecord&, const RateRecord&) = default;
};

struct RateReport {
  std::string label;
  std::vector<RateRecord> records;
  double fitted_order = 0.0;
  double theoretical_order = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  friend bool operator==(const RateReport&, const RateReport&) = default;
};

/// Exponent the sweep is expected to reproduce.
double expected_order(const SweepConfig& cfg, const Problem& problem);

RateReport run_sweep(const SweepConfig& cfg);
RateReport run_sweep(const SweepConfig& cfg, const Problem& problem);

struct SolveResult {
  std::vector<double> alpha;
  double error = 0.0;  // r-norm error, or the propagated-noise norm for the noise component
  CoeffVector x;
};

/// One regularized solve at noise level delta, repeat 0 of a sweep seeded with `seed`.
SolveResult solve_once(const SweepConfig& cfg, const Problem& problem, double delta,
                       std::uint64_t seed);

/// Median error per delta, in the order of cfg.deltas.
std::vector<double> median_errors(const RateReport& report);

/// Worker count: explicit request, else HILSCALE_THREADS, else hardware.
std::size_t worker_count(std::size_t requested);

enum class ReportFormat { csv, json };

void emit_report(const RateReport& report, const std::filesystem::path& path, ReportFormat format);
RateReport read_report(const std::filesystem::path& path);

nlohmann::json to_json(const RateReport& report);
RateReport rate_report_from_json(const nlohmann::json& doc);

SweepConfig sweep_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SweepConfig& cfg);

/// Number rendering used by every report writer: 17 significant digits.
std::string format_number(double value);

}  // namespace hilscale
