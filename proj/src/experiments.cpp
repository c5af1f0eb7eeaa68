#include "hilscale/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "hilscale/errors.hpp"
#include "hilscale/random.hpp"

namespace hilscale {

// ---------------------------------------------------------------- noise ----

CoeffVector noise_vector(const NoiseSpec& spec, std::size_t n, double delta,
                         std::span<const double> sensitivity) {
  if (!(delta > 0.0)) throw PreconditionError("make_noise: delta must be positive");
  std::vector<double> e(n, 0.0);
  if (spec.mode == NoiseMode::tail) {
    e.back() = delta;
    return CoeffVector(std::move(e));
  }
  std::mt19937_64 rng(mix_seed(spec.seed, std::bit_cast<std::uint64_t>(delta)));
  std::normal_distribution<double> normal;
  for (double& v : e) v = normal(rng);
  if (spec.mode == NoiseMode::adversarial) {
    if (sensitivity.size() != n) {
      throw PreconditionError("make_noise: adversarial mode needs one sensitivity per coefficient");
    }
    if (!(spec.band > 0.0) || spec.band > 1.0) {
      throw PreconditionError("make_noise: band must lie in (0, 1]");
    }
    const auto peak = std::max_element(sensitivity.begin(), sensitivity.end());
    const double cutoff = spec.band * *peak;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(sensitivity[j] >= cutoff)) e[j] = 0.0;
    }
    if (std::all_of(e.begin(), e.end(), [](double v) { return v == 0.0; })) {
      e[static_cast<std::size_t>(peak - sensitivity.begin())] = 1.0;
    }
  }
  double sum = 0.0;
  for (double v : e) sum += v * v;
  const double scale = delta / std::sqrt(sum);
  for (double& v : e) v *= scale;
  return CoeffVector(std::move(e));
}

CoeffVector make_noise(const NoiseSpec& spec, const CoeffVector& y, double delta,
                       std::span<const double> sensitivity) {
  return y + noise_vector(spec, y.size(), delta, sensitivity);
}

// ------------------------------------------------------------------ fit ----

FitResult fit_order(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw FitError("fit_order: need at least 3 points");
  const auto n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    if (!std::isfinite(x) || !std::isfinite(y)) throw FitError("fit_order: non-finite point");
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 1e-24 * std::max(1.0, mx * mx))) throw FitError("fit_order: degenerate abscissae");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (const auto& [x, y] : points) {
    const double res = y - (fit.intercept + fit.slope * x);
    ss += res * res;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

// --------------------------------------------------------------- deltas ----

std::vector<double> log_deltas(double log10_max, double log10_min, std::size_t count) {
  if (count < 2 || !(log10_max > log10_min)) {
    throw PreconditionError("log_deltas: need count >= 2 and max > min");
  }
  std::vector<double> d(count);
  const double step = (log10_max - log10_min) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) {
    d[k] = std::pow(10.0, log10_max - step * static_cast<double>(k));
  }
  return d;
}

std::vector<double> default_deltas() { return log_deltas(-1.5, -4.5, 7); }

void validate_deltas(std::span<const double> deltas) {
  if (deltas.size() < 6) throw PreconditionError("sweep: need at least 6 noise levels");
  const double max_ratio = std::pow(10.0, -0.5) * (1.0 + 1e-9);
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    if (!(deltas[k] > 0.0)) throw PreconditionError("sweep: noise levels must be positive");
    if (k > 0 && !(deltas[k] < deltas[k - 1])) {
      throw PreconditionError("sweep: noise levels must be strictly decreasing");
    }
    if (k > 0 && deltas[k] / deltas[k - 1] > max_ratio) {
      throw PreconditionError("sweep: consecutive noise levels must shrink by 10^{-1/2} or more");
    }
  }
}

// ---------------------------------------------------------------- sweep ----

namespace {

struct ExponentPair {
  std::vector<double> alpha_exp;
  std::vector<double> noise_exp;
};

ExponentPair multi_exponents(const MultiMethod& m) {
  const std::size_t N = m.cfg.size();
  ExponentPair ex;
  switch (m.plan) {
    case MultiMethod::Plan::scalar: {
      const double eps = m.epsilon ? *m.epsilon : optimal_eps_multi(m.cfg).epsilon;
      ex.alpha_exp.assign(N, eps);
      ex.noise_exp.assign(N, 1.0);
      break;
    }
    case MultiMethod::Plan::vector:
      ex.alpha_exp = m.epsilons.empty() ? optimal_eps_vec(m.cfg) : m.epsilons;
      ex.noise_exp.assign(N, 1.0);
      break;
    case MultiMethod::Plan::multi_noise: {
      // delta-independent exponents; evaluate the plan at delta = 1/2 to read p
      const NoisePlan plan = multi_noise_plan(m.cfg, 0.5, m.c);
      const std::vector<double> eps = optimal_eps_vec(m.cfg);
      for (std::size_t i = 0; i < N; ++i) ex.alpha_exp.push_back(plan.p[i] * eps[i]);
      ex.noise_exp = plan.p;
      break;
    }
  }
  if (ex.alpha_exp.size() != N) throw PreconditionError("sweep: one epsilon per scale required");
  return ex;
}

double component_order(const MultiConfig& cfg, const ExponentPair& ex, double r,
                       ErrorComponent component) {
  double order = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    const double denom = 2.0 * (cfg.a[i] + cfg.s[i]);
    const double noise = ex.noise_exp[i] - ex.alpha_exp[i] * (cfg.a[i] + r) / denom;
    const double reg = ex.alpha_exp[i] * (cfg.u[i] - r) / denom;
    switch (component) {
      case ErrorComponent::total: order = std::min({order, noise, reg}); break;
      case ErrorComponent::regularization: order = std::min(order, reg); break;
      case ErrorComponent::noise: order = std::min(order, noise); break;
    }
  }
  return order;
}

double constant_at(const std::vector<double>& c, std::size_t i) { return c.empty() ? 1.0 : c.at(i); }

struct CellResult {
  std::vector<double> alpha;
  double error = 0.0;
  std::vector<double> x;
};

std::vector<double> weighted_sensitivity(const std::vector<double>& amp, const ScaleOperator& L,
                                         double r) {
  std::vector<double> w(amp.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::abs(amp[j]) * real_power(L.eig(j), r);
  return w;
}

NoiseSpec cell_noise(const NoiseSpec& base, std::size_t repeat, std::size_t observation) {
  NoiseSpec spec = base;
  spec.seed = mix_seed(mix_seed(base.seed, repeat), observation);
  return spec;
}

CellResult run_single(const SweepConfig& cfg, const SingleMethod& m, const Problem& problem,
                      double delta, std::size_t repeat) {
  const double a = problem.link(0).a;
  const ExactSolution& exact = problem.exact(0);
  const double alpha = alpha_from_rule(m.rule, delta, a, m.cfg.s, exact.u, exact.u_norm, cfg.r);
  const std::vector<double> amp = amplification(problem, m.cfg, alpha);
  const ScaleOperator& L = problem.L(0);
  CellResult out{{alpha}, 0.0, {}};
  if (cfg.component == ErrorComponent::regularization) {
    const CoeffVector x = regularize(problem, m.cfg, alpha, problem.y());
    out.error = error_r_norm(problem, cfg.r, x, m.cfg.s).value;
    out.x = x.coeffs();
    return out;
  }
  const std::vector<double> sens = weighted_sensitivity(amp, L, cfg.r);
  const CoeffVector e = noise_vector(cell_noise(cfg.noise, repeat, 0), problem.n(), delta, sens);
  if (cfg.component == ErrorComponent::noise) {
    const CoeffVector x = regularize(problem, m.cfg, alpha, e);
    out.error = scale_norm(L, cfg.r, x);
    out.x = x.coeffs();
  } else {
    const CoeffVector x = regularize(problem, m.cfg, alpha, problem.y() + e);
    out.error = error_r_norm(problem, cfg.r, x, m.cfg.s).value;
    out.x = x.coeffs();
  }
  return out;
}

CellResult run_multi(const SweepConfig& cfg, const MultiMethod& m, const Problem& problem,
                     double delta, std::size_t repeat) {
  const MultiConfig& mc = m.cfg;
  const std::size_t N = mc.size();
  const ScaleOperator& L = problem.L(0);
  const CoeffVector& x_dag = problem.x_dag();
  CellResult out;
  auto measure = [&](const CoeffVector& x, bool pure_noise) {
    out.x = x.coeffs();
    return pure_noise ? scale_norm(L, cfg.r, x) : scale_norm(L, cfg.r, x - x_dag);
  };

  if (m.plan == MultiMethod::Plan::scalar) {
    const double eps = m.epsilon ? *m.epsilon : optimal_eps_multi(mc).epsilon;
    const double alpha = constant_at(m.c, 0) * std::pow(delta, eps);
    out.alpha = {alpha};
    if (cfg.component == ErrorComponent::regularization) {
      out.error = measure(regularize_multi(problem, mc, alpha, problem.y()), false);
      return out;
    }
    std::vector<double> combined(problem.n(), 0.0);
    for (std::size_t i = 0; i < N; ++i) {
      const std::vector<double> amp = amplification(problem, mc.term(i), alpha, i);
      for (std::size_t j = 0; j < combined.size(); ++j) combined[j] += mc.eta[i] * amp[j];
    }
    const CoeffVector e = noise_vector(cell_noise(cfg.noise, repeat, 0), problem.n(), delta,
                                       weighted_sensitivity(combined, L, cfg.r));
    const bool pure = cfg.component == ErrorComponent::noise;
    out.error = measure(regularize_multi(problem, mc, alpha, pure ? e : problem.y() + e), pure);
    return out;
  }

  std::vector<double> alphas(N), levels(N, delta);
  if (m.plan == MultiMethod::Plan::vector) {
    const std::vector<double> eps = m.epsilons.empty() ? optimal_eps_vec(mc) : m.epsilons;
    if (eps.size() != N) throw PreconditionError("sweep: one epsilon per scale required");
    for (std::size_t i = 0; i < N; ++i) alphas[i] = constant_at(m.c, i) * std::pow(delta, eps[i]);
  } else {
    const NoisePlan plan = multi_noise_plan(mc, delta, m.c);
    alphas = plan.alpha;
    levels = plan.deltas;
  }
  out.alpha = alphas;
  std::vector<CoeffVector> obs;
  const bool pure = cfg.component == ErrorComponent::noise;
  for (std::size_t i = 0; i < N; ++i) {
    if (cfg.component == ErrorComponent::regularization) {
      obs.push_back(problem.y());
      continue;
    }
    std::vector<double> amp = amplification(problem, mc.term(i), alphas[i], i);
    for (double& v : amp) v *= mc.eta[i];
    const CoeffVector e = noise_vector(cell_noise(cfg.noise, repeat, i), problem.n(), levels[i],
                                       weighted_sensitivity(amp, L, cfg.r));
    obs.push_back(pure ? e : problem.y() + e);
  }
  const ObservationSet set(std::move(obs), levels);
  out.error = measure(regularize_multi_vec(problem, mc, alphas, set), pure);
  return out;
}

double tail_energy(const Problem& problem, double r) {
  const ScaleOperator& L = problem.L(0);
  const CoeffVector& x = problem.x_dag();
  double sum = 0.0;
  for (std::size_t j = x.size() - x.size() / 4; j < x.size(); ++j) {
    const double v = real_power(L.eig(j), r) * x[j];
    sum += v * v;
  }
  return std::sqrt(sum);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

SolveResult solve_once(const SweepConfig& cfg, const Problem& problem, double delta,
                       std::uint64_t seed) {
  SweepConfig one = cfg;
  one.noise.seed = seed;
  const CellResult cell = std::holds_alternative<SingleMethod>(one.method)
                              ? run_single(one, std::get<SingleMethod>(one.method), problem, delta, 0)
                              : run_multi(one, std::get<MultiMethod>(one.method), problem, delta, 0);
  return SolveResult{cell.alpha, cell.error, CoeffVector(cell.x)};
}

std::size_t worker_count(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HILSCALE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

double expected_order(const SweepConfig& cfg, const Problem& problem) {
  if (const auto* m = std::get_if<SingleMethod>(&cfg.method)) {
    const double a = problem.link(0).a;
    const double u = problem.exact(0).u;
    const double s = m->cfg.s;
    const double eps = rule_exponent(m->rule, a, s, u);
    const double denom = 2.0 * (a + s);
    switch (cfg.component) {
      case ErrorComponent::total:
        return m->rule.kind == ParamRule::Kind::natterer
                   ? theoretical_order(a, s, u, cfg.r)
                   : theoretical_order(a, s, u, cfg.r, eps);
      case ErrorComponent::regularization: return eps * (u - cfg.r) / denom;
      case ErrorComponent::noise: return 1.0 - eps * (a + cfg.r) / denom;
    }
  }
  const auto& m = std::get<MultiMethod>(cfg.method);
  return component_order(m.cfg, multi_exponents(m), cfg.r, cfg.component);
}

std::vector<double> median_errors(const RateReport& report) {
  std::vector<double> deltas;
  for (const auto& rec : report.records) {
    if (std::find(deltas.begin(), deltas.end(), rec.delta) == deltas.end()) deltas.push_back(rec.delta);
  }
  std::vector<double> out;
  for (double d : deltas) {
    std::vector<double> errs;
    for (const auto& rec : report.records) {
      if (rec.delta == d) errs.push_back(rec.error);
    }
    out.push_back(median(std::move(errs)));
  }
  return out;
}

RateReport run_sweep(const SweepConfig& cfg) { return run_sweep(cfg, build_problem(cfg.problem)); }

RateReport run_sweep(const SweepConfig& cfg, const Problem& problem) {
  validate_deltas(cfg.deltas);
  if (cfg.repeats == 0) throw PreconditionError("sweep: repeats must be positive");
  if (const auto* m = std::get_if<MultiMethod>(&cfg.method)) {
    m->cfg.validate();
    for (std::size_t i = 0; i < m->cfg.size() && i < problem.num_scales(); ++i) {
      if (m->cfg.u[i] > problem.exact(i).u + 1e-12) {
        throw PreconditionError("sweep: claimed u_" + std::to_string(i) +
                                " exceeds the certified smoothness of the problem");
      }
    }
  }

  const std::size_t D = cfg.deltas.size();
  const std::size_t R = cfg.repeats;
  std::vector<CellResult> cells(D * R);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++) {
      try {
        const double delta = cfg.deltas[k / R];
        const std::size_t repeat = k % R;
        if (const auto* m = std::get_if<SingleMethod>(&cfg.method)) {
          cells[k] = run_single(cfg, *m, problem, delta, repeat);
        } else {
          cells[k] = run_multi(cfg, std::get<MultiMethod>(cfg.method), problem, delta, repeat);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(worker_count(cfg.threads), cells.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  RateReport report;
  report.label = cfg.label;
  report.tolerance = cfg.tolerance;
  report.theoretical_order = expected_order(cfg, problem);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    report.records.push_back(
        RateRecord{cfg.deltas[k / R], k % R, cells[k].alpha, cells[k].error, cfg.r});
  }

  const std::vector<double> med = median_errors(report);
  std::vector<std::pair<double, double>> points;
  for (std::size_t d = 0; d < D; ++d) {
    if (!(med[d] > 0.0)) throw FitError("sweep: zero error at delta=" + format_number(cfg.deltas[d]));
    points.emplace_back(std::log(cfg.deltas[d]), std::log(med[d]));
  }

  const double sigma = report.theoretical_order;
  if (cfg.component != ErrorComponent::noise && sigma > 0.0) {
    const double C = med.front() / std::pow(cfg.deltas.front(), sigma);
    const double predicted = C * std::pow(cfg.deltas.back(), sigma);
    const double floor = 10.0 * tail_energy(problem, cfg.r);
    if (!(predicted > floor)) {
      const double usable = std::pow(floor / C, 1.0 / sigma);
      throw SaturationError("sweep: predicted error " + format_number(predicted) +
                                " at the smallest delta is below 10x the truncation tail; "
                                "smallest usable delta is " + format_number(usable),
                            usable);
    }
  }

  const FitResult fit = fit_order(points);
  report.fitted_order = fit.slope;
  report.residual = fit.rms;
  report.pass = std::abs(report.fitted_order - report.theoretical_order) <= report.tolerance;
  return report;
}

// --------------------------------------------------------------- output ----

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

void write_json(const nlohmann::json& j, std::ostream& os, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << nlohmann::json(it.key()).dump() << ": ";
        write_json(it.value(), os, indent, depth + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[";
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ", ";
        first = false;
        write_json(v, os, indent, depth + 1);
      }
      os << "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      os << format_number(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

std::string join_alpha(const std::vector<double>& alpha) {
  std::string out;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (i > 0) out += ';';
    out += format_number(alpha[i]);
  }
  return out;
}

}  // namespace

nlohmann::json to_json(const RateReport& report) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& rec : report.records) {
    records.push_back({{"delta", rec.delta},
                       {"repeat", rec.repeat},
                       {"alpha", rec.alpha},
                       {"error", rec.error},
                       {"r", rec.r}});
  }
  return {{"label", report.label},
          {"records", records},
          {"fitted_order", report.fitted_order},
          {"theoretical_order", report.theoretical_order},
          {"residual", report.residual},
          {"tolerance", report.tolerance},
          {"pass", report.pass}};
}

RateReport rate_report_from_json(const nlohmann::json& doc) {
  try {
    RateReport report;
    report.label = doc.value("label", std::string());
    for (const auto& rec : doc.at("records")) {
      RateRecord r;
      r.delta = rec.at("delta").get<double>();
      r.repeat = rec.at("repeat").get<std::size_t>();
      const auto& alpha = rec.at("alpha");
      r.alpha = alpha.is_array() ? alpha.get<std::vector<double>>()
                                 : std::vector<double>{alpha.get<double>()};
      r.error = rec.at("error").get<double>();
      r.r = rec.at("r").get<double>();
      report.records.push_back(std::move(r));
    }
    report.fitted_order = doc.at("fitted_order").get<double>();
    report.theoretical_order = doc.at("theoretical_order").get<double>();
    report.residual = doc.at("residual").get<double>();
    report.tolerance = doc.value("tolerance", 0.0);
    report.pass = doc.at("pass").get<bool>();
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("rate report JSON: ") + e.what());
  }
}

void emit_report(const RateReport& report, const std::filesystem::path& path, ReportFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("emit_report: cannot open '" + path.string() + "' for writing");
  if (format == ReportFormat::csv) {
    out << "delta,repeat,alpha,error,r\n";
    for (const auto& rec : report.records) {
      out << format_number(rec.delta) << ',' << rec.repeat << ',' << join_alpha(rec.alpha) << ','
          << format_number(rec.error) << ',' << format_number(rec.r) << '\n';
    }
  } else {
    write_json(to_json(report), out, 2, 0);
    out << '\n';
  }
  out.flush();
  if (!out) throw IoError("emit_report: write to '" + path.string() + "' failed");
}

RateReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("read_report: cannot open '" + path.string() + "'");
  if (path.extension() != ".csv") {
    try {
      return rate_report_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw IoError("read_report: '" + path.string() + "' is not valid JSON: " + e.what());
    }
  }
  // CSV carries records only; the fit is recomputed and no prediction exists.
  RateReport report;
  report.label = path.stem().string();
  std::string line;
  std::getline(in, line);
  if (line != "delta,repeat,alpha,error,r") {
    throw IoError("read_report: '" + path.string() + "' has an unexpected CSV header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string delta, repeat, alpha, error, r;
    std::getline(row, delta, ',');
    std::getline(row, repeat, ',');
    std::getline(row, alpha, ',');
    std::getline(row, error, ',');
    std::getline(row, r, ',');
    RateRecord rec;
    try {
      rec.delta = std::stod(delta);
      rec.repeat = std::stoul(repeat);
      std::stringstream parts(alpha);
      for (std::string a; std::getline(parts, a, ';');) rec.alpha.push_back(std::stod(a));
      rec.error = std::stod(error);
      rec.r = std::stod(r);
    } catch (const std::exception&) {
      throw IoError("read_report: malformed row in '" + path.string() + "': " + line);
    }
    report.records.push_back(std::move(rec));
  }
  std::vector<double> deltas;
  for (const auto& rec : report.records) {
    if (std::find(deltas.begin(), deltas.end(), rec.delta) == deltas.end()) deltas.push_back(rec.delta);
  }
  const std::vector<double> med = median_errors(report);
  std::vector<std::pair<double, double>> points;
  for (std::size_t d = 0; d < deltas.size(); ++d) points.emplace_back(std::log(deltas[d]), std::log(med[d]));
  const FitResult fit = fit_order(points);
  report.fitted_order = fit.slope;
  report.residual = fit.rms;
  report.theoretical_order = std::numeric_limits<double>::quiet_NaN();
  return report;
}

// --------------------------------------------------------------- config ----

namespace {

ParamRule rule_from_json(const nlohmann::json& doc) {
  const std::string kind = doc.at("kind").get<std::string>();
  const double c = doc.value("c", 1.0);
  if (kind == "natterer") return ParamRule::natterer(c);
  if (kind == "power") return ParamRule::power(c, doc.at("epsilon").get<double>());
  throw PreconditionError("unknown parameter rule '" + kind + "'");
}

nlohmann::json to_json(const ParamRule& rule) {
  if (rule.kind == ParamRule::Kind::natterer) return {{"kind", "natterer"}, {"c", rule.c}};
  return {{"kind", "power"}, {"c", rule.c}, {"epsilon", rule.epsilon}};
}

NoiseMode noise_mode_from(const std::string& s) {
  if (s == "gaussian") return NoiseMode::gaussian;
  if (s == "tail") return NoiseMode::tail;
  if (s == "adversarial") return NoiseMode::adversarial;
  throw PreconditionError("unknown noise mode '" + s + "'");
}

std::string to_string(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::gaussian: return "gaussian";
    case NoiseMode::tail: return "tail";
    case NoiseMode::adversarial: return "adversarial";
  }
  return "unknown";
}

std::string to_string(ErrorComponent c) {
  switch (c) {
    case ErrorComponent::total: return "total";
    case ErrorComponent::regularization: return "regularization";
    case ErrorComponent::noise: return "noise";
  }
  return "unknown";
}

std::string to_string(MultiMethod::Plan plan) {
  switch (plan) {
    case MultiMethod::Plan::scalar: return "scalar";
    case MultiMethod::Plan::vector: return "vector";
    case MultiMethod::Plan::multi_noise: return "multi_noise";
  }
  return "unknown";
}

}  // namespace

SweepConfig sweep_config_from_json(const nlohmann::json& doc) {
  try {
    SweepConfig cfg;
    cfg.label = doc.value("label", std::string("sweep"));
    cfg.problem = problem_spec_from_json(doc.at("problem"));
    const auto& method = doc.at("method");
    const std::string kind = method.value("kind", std::string("single"));
    if (kind == "single") {
      SingleMethod m;
      m.cfg.s = method.value("s", 0.0);
      m.cfg.family = reg_family_from_json(method.value("family", nlohmann::json("tikhonov")));
      m.rule = rule_from_json(method.value("rule", nlohmann::json{{"kind", "natterer"}}));
      cfg.method = m;
    } else if (kind == "multi") {
      MultiMethod m;
      m.cfg = multi_config_from_json(method.at("config"));
      const std::string plan = method.value("plan", std::string("scalar"));
      if (plan == "scalar") {
        m.plan = MultiMethod::Plan::scalar;
      } else if (plan == "vector") {
        m.plan = MultiMethod::Plan::vector;
      } else if (plan == "multi_noise") {
        m.plan = MultiMethod::Plan::multi_noise;
      } else {
        throw PreconditionError("unknown multi plan '" + plan + "'");
      }
      if (method.contains("epsilon") && !method.at("epsilon").is_null()) {
        m.epsilon = method.at("epsilon").get<double>();
      }
      m.epsilons = method.value("epsilons", std::vector<double>{});
      m.c = method.value("c", std::vector<double>{});
      cfg.method = m;
    } else {
      throw PreconditionError("unknown method kind '" + kind + "'");
    }
    if (!doc.contains("deltas")) {
      cfg.deltas = default_deltas();
    } else if (doc.at("deltas").is_array()) {
      cfg.deltas = doc.at("deltas").get<std::vector<double>>();
    } else {
      const auto& d = doc.at("deltas");
      cfg.deltas = log_deltas(d.value("log10_max", -1.5), d.value("log10_min", -4.5),
                              d.value("count", std::size_t{7}));
    }
    cfg.r = doc.value("r", 0.0);
    cfg.repeats = doc.value("repeats", std::size_t{5});
    if (doc.contains("noise")) {
      const auto& n = doc.at("noise");
      if (n.is_string()) {
        cfg.noise.mode = noise_mode_from(n.get<std::string>());
      } else {
        cfg.noise.mode = noise_mode_from(n.value("mode", std::string("adversarial")));
        cfg.noise.seed = n.value("seed", cfg.noise.seed);
        cfg.noise.band = n.value("band", cfg.noise.band);
      }
    }
    cfg.noise.seed = doc.value("seed", cfg.noise.seed);
    const std::string component = doc.value("component", std::string("total"));
    if (component == "total") {
      cfg.component = ErrorComponent::total;
    } else if (component == "regularization") {
      cfg.component = ErrorComponent::regularization;
    } else if (component == "noise") {
      cfg.component = ErrorComponent::noise;
    } else {
      throw PreconditionError("unknown error component '" + component + "'");
    }
    cfg.tolerance = doc.value("tolerance", 0.07);
    cfg.threads = doc.value("threads", std::size_t{0});
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("sweep config JSON: ") + e.what());
  }
}

nlohmann::json to_json(const SweepConfig& cfg) {
  nlohmann::json method;
  if (const auto* m = std::get_if<SingleMethod>(&cfg.method)) {
    method = {{"kind", "single"}, {"s", m->cfg.s}, {"family", to_json(m->cfg.family)},
              {"rule", to_json(m->rule)}};
  } else {
    const auto& mm = std::get<MultiMethod>(cfg.method);
    method = {{"kind", "multi"}, {"config", to_json(mm.cfg)}, {"plan", to_string(mm.plan)}};
    if (mm.epsilon) method["epsilon"] = *mm.epsilon;
    if (!mm.epsilons.empty()) method["epsilons"] = mm.epsilons;
    if (!mm.c.empty()) method["c"] = mm.c;
  }
  nlohmann::json problem = {{"n", cfg.problem.n},
                            {"x_dag_rule", {{"u", cfg.problem.u}, {"tau", cfg.problem.tau}}}};
  nlohmann::json params = nlohmann::json::object();
  if (cfg.problem.kind == GeneratorKind::synthetic) params["a"] = cfg.problem.a;
  if (cfg.problem.kind == GeneratorKind::multi_scale) params["a_list"] = cfg.problem.a_list;
  problem["generator"] = {{"kind", hilscale::to_string(cfg.problem.kind)}, {"params", params}};
  return {{"label", cfg.label},
          {"problem", problem},
          {"method", method},
          {"deltas", cfg.deltas},
          {"r", cfg.r},
          {"repeats", cfg.repeats},
          {"noise", {{"mode", to_string(cfg.noise.mode)}, {"seed", cfg.noise.seed}, {"band", cfg.noise.band}}},
          {"component", to_string(cfg.component)},
          {"tolerance", cfg.tolerance},
          {"threads", cfg.threads}};
}

}  // namespace hilscale
