// hilscale command-line driver: sweep, solve, verify, report.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hilscale/errors.hpp"
#include "hilscale/experiments.hpp"
#include "hilscale/problems.hpp"
#include "hilscale/regularizers.hpp"
#include "hilscale/verify.hpp"

using namespace hilscale;
using nlohmann::json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitError = 2;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void print_report(const RateReport& rep) {
  const bool has_theory = std::isfinite(rep.theoretical_order);
  std::printf("%-6s %s: fitted %.4f", has_theory ? (rep.pass ? "PASS" : "FAIL") : "-",
              rep.label.c_str(), rep.fitted_order);
  if (has_theory) std::printf(", theoretical %.4f, tol %.3f", rep.theoretical_order, rep.tolerance);
  std::printf(", rms %.3g, %zu records\n", rep.residual, rep.records.size());
}

int cmd_sweep(const std::string& config, const std::string& out, const std::string& format) {
  const SweepConfig cfg = sweep_config_from_json(load_json(config));
  const RateReport rep = run_sweep(cfg);
  emit_report(rep, out, format == "csv" ? ReportFormat::csv : ReportFormat::json);
  print_report(rep);
  return rep.pass ? 0 : kExitFail;
}

int cmd_solve(const std::string& config, double delta, std::uint64_t seed) {
  const SweepConfig cfg = sweep_config_from_json(load_json(config));
  const Problem problem = build_problem(cfg.problem);
  const SolveResult res = solve_once(cfg, problem, delta, seed);
  json out = {{"delta", delta}, {"seed", seed}, {"alpha", res.alpha}, {"r", cfg.r},
              {"error", res.error}, {"x_norm", res.x.norm()}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct Row {
  std::string name;
  bool pass;
  std::string detail;
};

int cmd_verify(const std::string& config) {
  const json doc = load_json(config);
  const Problem problem = build_problem(problem_spec_from_json(doc.at("problem")));
  const std::size_t trials = doc.value("trials", std::size_t{1000});
  const std::uint64_t seed = doc.value("seed", std::uint64_t{1});
  double s = doc.value("s", 0.0);
  if (doc.contains("method") && doc["method"].contains("s") && doc["method"]["s"].is_number()) {
    s = doc["method"]["s"].get<double>();
  }
  const std::vector<double> nus = doc.value("nu_grid", std::vector<double>{0.5, 1.0, 1.5, 2.0});

  std::vector<Row> rows;
  auto add = [&](const IneqReport& r) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "worst slack %.3g over %zu samples", r.worst_slack, r.samples);
    rows.push_back({r.name, r.pass, buf});
  };
  for (std::size_t i = 0; i < problem.num_scales(); ++i) {
    add(interpolation_check(problem.L(i), trials, seed));
    add(norm_equivalence_check(problem, i, trials, seed + 1));
    for (double nu : nus) add(power_range_check(problem, s, nu, trials, seed + 2, i));
    const SourceCheck sc = source_condition_check(problem, s, problem.exact(i).u, i);
    char buf[96];
    std::snprintf(buf, sizeof buf, "v_norm %.4g, tail share %.3g", sc.v_norm, sc.tail_share);
    rows.push_back({"source_condition(scale " + std::to_string(i) + ")", sc.pass, buf});
  }
  const std::vector<double> alphas = log_grid(1e-8, 1e-1, 29);
  json families = doc.value("families", json::array({"tikhonov", "tsvd", "landweber", "showalter"}));
  for (const json& f : families) {
    const RegFamily family = reg_family_from_json(f);
    const CertReport rep = certify(family, 1.0, alphas, default_mu_grid(family));
    rows.push_back({"certify(" + rep.family + ")", rep.passed(),
                    std::string("C1 ") + (rep.c1 ? "ok" : "fail") + ", C2 " + (rep.c2 ? "ok" : "fail") +
                        ", C3 " + (rep.c3_pass ? "ok" : "fail")});
  }

  bool all = true;
  for (const Row& r : rows) {
    all = all && r.pass;
    std::printf("%-4s  %-36s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
  }
  return all ? 0 : kExitFail;
}

int cmd_report(const std::string& in) {
  const RateReport rep = read_report(in);
  print_report(rep);
  if (!std::isfinite(rep.theoretical_order)) return 0;
  return rep.pass ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hilscale: regularization in Hilbert scales on diagonal problems"};
  app.require_subcommand(1);

  std::string config, out, format = "json", in;
  double delta = 0.0;
  std::uint64_t seed = 1;

  auto* sweep = app.add_subcommand("sweep", "run a delta-sweep and write its report");
  sweep->add_option("--config", config, "sweep configuration (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out, "report path")->required();
  sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* solve = app.add_subcommand("solve", "one regularized solve at a given noise level");
  solve->add_option("--config", config, "sweep configuration (JSON)")->required()->check(CLI::ExistingFile);
  solve->add_option("--delta", delta, "noise level")->required()->check(CLI::PositiveNumber);
  solve->add_option("--seed", seed, "noise seed");

  auto* verify = app.add_subcommand("verify", "inequality and filter certificates");
  verify->add_option("--config", config, "verification configuration (JSON)")->required()->check(CLI::ExistingFile);

  auto* report = app.add_subcommand("report", "print fitted and theoretical orders of a report");
  report->add_option("--in", in, "report path (JSON or CSV)")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  try {
    if (*sweep) return cmd_sweep(config, out, format);
    if (*solve) return cmd_solve(config, delta, seed);
    if (*verify) return cmd_verify(config);
    if (*report) return cmd_report(in);
  } catch (const SaturationError& e) {
    std::fprintf(stderr, "error: %s (minimal usable delta %.6g)\n", e.what(), e.minimal_delta());
    return kExitError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
