#include "ratreg/harness.hpp"
#include "ratreg/io.hpp"
#include "ratreg/polydiag.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ratreg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitExhaustion = 3;
constexpr int kExitDataCondition = 4;
constexpr int kExitDiagnosticFailure = 5;

struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::GeometricFloor;
  ScheduleParams params{};
};

ScheduleSpec parseScheduleSpec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind_name = text.substr(0, colon);
  std::vector<double> values;
  if (colon != std::string::npos) {
    std::istringstream rest(text.substr(colon + 1));
    std::string field;
    while (std::getline(rest, field, ',')) values.push_back(std::stod(field));
  }
  ScheduleSpec spec;
  spec.kind = scheduleKindFromString(kind_name);
  switch (spec.kind) {
    case ScheduleKind::ConstantFloor:
      if (values.size() != 1) throw CLI::ValidationError("--schedule", "expected constant:c0");
      spec.params.c0 = values[0];
      break;
    case ScheduleKind::GeometricFloor:
      if (values.size() != 3)
        throw CLI::ValidationError("--schedule", "expected geometric:alpha1,q,c0");
      spec.params.alpha1 = values[0];
      spec.params.q = values[1];
      spec.params.c0 = values[2];
      break;
    case ScheduleKind::DeltaScaled:
      if (values.empty() || values.size() > 2)
        throw CLI::ValidationError("--schedule", "expected delta:C[,c0]");
      spec.params.C = values[0];
      spec.params.c0 = values.size() > 1 ? values[1] : 0.0;
      break;
  }
  return spec;
}

void writeFile(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << content;
}

ScheduleSpec scheduleFromJson(const json& j) {
  ScheduleSpec spec;
  spec.kind = scheduleKindFromString(j.value("kind", "geometric_floor"));
  spec.params.alpha1 = j.value("alpha1", 8.0);
  spec.params.q = j.value("q", 0.5);
  spec.params.c0 = j.value("c0", 1.0);
  spec.params.C = j.value("C", 1.0);
  return spec;
}

json checkReportToJson(const CheckReport& report) {
  json items = json::array();
  for (const CheckItem& item : report.items) {
    json j;
    j["name"] = item.name;
    j["pass"] = item.pass;
    j["skipped"] = item.skipped;
    j["margin"] = item.margin;
    if (!item.note.empty()) j["note"] = item.note;
    items.push_back(j);
  }
  return items;
}

int cmdGen(const std::string& type, int m, double s, double mu, double d, double delta,
           std::uint64_t seed, const fs::path& out) {
  InverseProblem problem;
  double shape = 0.0;
  if (type == "diagonal") {
    problem = makeDiagonalProblem(m, s, mu, NoiseSpec{delta, seed});
    shape = s;
  } else if (type == "gravity") {
    problem = makeGravityProblem(m, d, NoiseSpec{delta, seed});
    shape = d;
  } else {
    std::cerr << "unknown problem type: " << type << "\n";
    return kExitUsage;
  }
  saveProblemBundle(out, problem, type, shape);
  std::cout << out.string() << "\n";
  return kExitOk;
}

int cmdSolve(const fs::path& problem_dir, const std::string& method_name,
             const ScheduleSpec& sched, double tau, double tau2, int max_n,
             const std::string& path_name, const fs::path& out) {
  InverseProblem problem = loadProblemBundle(problem_dir);
  if (!(problem.delta > 0.0)) {
    std::cerr << "problem bundle carries no noise level; discrepancy stopping needs delta > 0\n";
    return kExitUsage;
  }
  const Method method = methodFromString(method_name);
  const SolvePath path = solvePathFromString(path_name);
  const double mu_star = problem.mu ? *problem.mu + 0.5 : 1.0;
  AlphaSchedule schedule = makeSchedule(sched.kind, sched.params, problem.delta, mu_star, max_n);
  DiscrepancyConfig config{tau, tau2, problem.delta, max_n};

  DiscrepancyRun run;
  try {
    run = runWithDiscrepancy(method, problem, schedule, config, path);
  } catch (const SignalConditionError& e) {
    std::cerr << "data condition failed: " << e.what() << "\n";
    return kExitDataCondition;
  } catch (const ExhaustionError& e) {
    std::cerr << "exhaustion: " << e.what() << "\n";
    return kExitExhaustion;
  }

  json result;
  result["method"] = toString(method);
  result["path"] = toString(path);
  result["n_star"] = run.n_star;
  result["residual_norms"] = run.trace.residual_norms;
  result["sigma_values"] = run.trace.sigma_values;
  result["effective_rank"] = run.effective_rank;
  result["tau"] = tau;
  result["delta"] = problem.delta;
  if (run.trace.breakdown_index) result["breakdown_index"] = *run.trace.breakdown_index;
  if (problem.x_true.size() == run.x.size())
    result["error_norm"] = (run.x - problem.x_true).norm();
  if (method != Method::Cgne && path != SolvePath::Factorized) {
    const AggregationResult at_stop =
        method == Method::Aggregation
            ? aggregate(*problem.op, problem.y_noisy, schedule, run.n_star, path)
            : ratcg(*problem.op, problem.y_noisy, schedule, run.n_star, path);
    result["coefficients"] =
        std::vector<double>(at_stop.coefficients.begin(), at_stop.coefficients.end());
  }

  fs::create_directories(out);
  writeFile(out / "result.json", result.dump(2) + "\n");
  {
    std::ostringstream os;
    os << "n,residual,sigma_n\n";
    for (std::size_t i = 0; i < run.trace.residual_norms.size(); ++i)
      os << i << ',' << formatDouble(run.trace.residual_norms[i]) << ','
         << formatDouble(run.trace.sigma_values[i]) << '\n';
    writeFile(out / "trace.csv", os.str());
  }
  {
    std::ostringstream os;
    writeVectorCsv(os, run.x);
    writeFile(out / "solution.csv", os.str());
  }
  std::cout << "n_star=" << run.n_star
            << " residual=" << formatDouble(run.trace.residual_norms.back())
            << " threshold=" << formatDouble(tau * problem.delta) << "\n";
  return kExitOk;
}

int cmdRates(const std::optional<fs::path>& config_path, std::optional<std::string> method_name,
             std::vector<double> mu_list, std::optional<std::string> schedule_text, int workers,
             const fs::path& out) {
  RateStudyConfig config;
  if (config_path) {
    std::ifstream is(*config_path);
    if (!is) throw std::runtime_error("cannot read config " + config_path->string());
    const json j = json::parse(is);
    if (j.contains("method")) config.method = methodFromString(j["method"].get<std::string>());
    if (j.contains("mu_list")) config.mu_list = j["mu_list"].get<std::vector<double>>();
    if (j.contains("delta_list")) config.delta_list = j["delta_list"].get<std::vector<double>>();
    config.seeds_per_cell = j.value("seeds_per_cell", config.seeds_per_cell);
    config.base_seed = j.value("base_seed", config.base_seed);
    config.tau = j.value("tau", config.tau);
    config.tau2 = j.value("tau2", config.tau2);
    config.max_n = j.value("max_n", config.max_n);
    config.workers = j.value("workers", config.workers);
    if (j.contains("problem")) {
      config.problem_m = j["problem"].value("m", config.problem_m);
      config.decay_s = j["problem"].value("s", config.decay_s);
    }
    if (j.contains("schedule")) {
      const ScheduleSpec spec = scheduleFromJson(j["schedule"]);
      config.schedule_kind = spec.kind;
      config.schedule_params = spec.params;
    }
    if (j.contains("path")) config.path = solvePathFromString(j["path"].get<std::string>());
  }
  if (method_name) config.method = methodFromString(*method_name);
  if (!mu_list.empty()) config.mu_list = mu_list;
  if (schedule_text) {
    const ScheduleSpec spec = parseScheduleSpec(*schedule_text);
    config.schedule_kind = spec.kind;
    config.schedule_params = spec.params;
  }
  if (workers > 0) config.workers = workers;

  const RateStudyResult result = runRateStudy(config);

  fs::create_directories(out);
  {
    std::ostringstream os;
    writeRatesCsv(os, result);
    writeFile(out / "rates.csv", os.str());
  }
  {
    std::ostringstream os;
    writeRatesSummaryJson(os, result);
    writeFile(out / "summary.json", os.str());
  }
  for (const auto& [mu, fit] : result.slope_per_mu)
    std::cout << "mu=" << mu << " slope=" << fit.slope << " theoretical=" << mu / (mu + 0.5)
              << " r2=" << fit.r2 << "\n";
  std::cout << "dropped=" << result.dropped << "\n";
  return kExitOk;
}

int cmdDiagnose(const fs::path& problem_dir, const ScheduleSpec& sched, int n_max,
                const fs::path& out) {
  InverseProblem problem = loadProblemBundle(problem_dir);
  const double mu_star = problem.mu ? *problem.mu + 0.5 : 1.0;
  const double delta = problem.delta > 0.0 ? problem.delta : 1e-3;
  AlphaSchedule schedule = makeSchedule(sched.kind, sched.params, delta, mu_star,
                                        std::max(2 * n_max, 2));
  const SpectralProblem sp = spectralForm(problem);

  CheckReport all;
  const auto absorb = [&all](const CheckReport& r) {
    all.items.insert(all.items.end(), r.items.begin(), r.items.end());
  };
  for (const bool hatted : {false, true}) {
    absorb(checkRootLemmas(sp, schedule, n_max, hatted));
    for (int n = 2; n <= n_max; ++n) absorb(checkEnergyIdentity(sp, schedule, n, hatted));
    for (int n = 1; n <= n_max; ++n)
      absorb(verifyResidualFactorization(sp, schedule, n, hatted, 50, problem.seed));
  }

  json report;
  report["problem"] = problem_dir.string();
  report["n_max"] = n_max;
  report["checks"] = checkReportToJson(all);
  report["failures"] = all.failures();
  report["skipped"] = all.skips();
  fs::create_directories(out);
  writeFile(out / "diagnostics.json", report.dump(2) + "\n");

  std::cout << "check                                      status   margin\n";
  for (const CheckItem& item : all.items) {
    std::string status = item.skipped ? "skip" : (item.pass ? "pass" : "FAIL");
    std::printf("%-42s %-8s %.3e%s\n", item.name.c_str(), status.c_str(), item.margin,
                item.note.empty() ? "" : (" (" + item.note + ")").c_str());
  }
  std::cout << "failures=" << all.failures() << " skipped=" << all.skips() << "\n";
  return all.failures() == 0 ? kExitOk : kExitDiagnosticFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational Krylov regularization toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a reproducible problem bundle");
  std::string gen_type = "diagonal";
  int gen_m = 400;
  double gen_s = 1.0, gen_mu = 0.5, gen_d = 0.25, gen_delta = 0.0;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "problem";
  gen->add_option("--type", gen_type, "problem type: diagonal or gravity");
  gen->add_option("--m", gen_m, "dimension");
  gen->add_option("--s", gen_s, "singular value decay exponent (diagonal)");
  gen->add_option("--mu", gen_mu, "source exponent (diagonal)");
  gen->add_option("--d", gen_d, "kernel depth (gravity)");
  gen->add_option("--delta", gen_delta, "noise level")->required();
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output directory");

  // solve
  auto* solve = app.add_subcommand("solve", "solve a bundle with discrepancy stopping");
  std::string solve_method = "agg", solve_schedule, solve_path = "qr", solve_out = "solve_out";
  std::string solve_problem;
  std::string solve_config;
  double solve_tau = 1.5, solve_tau2 = 3.0;
  int solve_max_n = 100;
  solve->add_option("problem", solve_problem, "problem bundle directory")->required();
  solve->add_option("--config", solve_config, "JSON config (flags override)");
  solve->add_option("--method", solve_method, "agg | ratcg | cgne");
  solve->add_option("--schedule", solve_schedule,
                    "constant:c0 | geometric:alpha1,q,c0 | delta:C[,c0]");
  solve->add_option("--tau", solve_tau, "discrepancy multiplier");
  solve->add_option("--tau2", solve_tau2, "signal condition multiplier");
  solve->add_option("--max-n", solve_max_n, "iteration cap");
  solve->add_option("--path", solve_path, "gram | qr | factorized");
  solve->add_option("--out", solve_out, "output directory");

  // rates
  auto* rates = app.add_subcommand("rates", "convergence-rate study");
  std::string rates_config, rates_method, rates_schedule, rates_out = "rates_out";
  std::vector<double> rates_mu;
  int rates_workers = 0;
  rates->add_option("--config", rates_config, "JSON config (flags override)");
  rates->add_option("--method", rates_method, "agg | ratcg | cgne");
  rates->add_option("--mu", rates_mu, "source exponents");
  rates->add_option("--schedule", rates_schedule, "schedule spec");
  rates->add_option("--workers", rates_workers, "worker pool size");
  rates->add_option("--out", rates_out, "output directory");

  // diagnose
  auto* diagnose = app.add_subcommand("diagnose", "orthogonal-polynomial diagnostics");
  std::string diag_problem, diag_schedule = "geometric:8,0.5,0.001", diag_out = "diagnose_out";
  int diag_n_max = 8;
  diagnose->add_option("problem", diag_problem, "problem bundle directory")->required();
  diagnose->add_option("--schedule", diag_schedule, "schedule spec");
  diagnose->add_option("--n-max", diag_n_max, "largest level to check");
  diagnose->add_option("--out", diag_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed())
      return cmdGen(gen_type, gen_m, gen_s, gen_mu, gen_d, gen_delta, gen_seed, gen_out);
    if (solve->parsed()) {
      ScheduleSpec sched;  // default geometric:8,0.5,1
      sched.params.c0 = 1.0;
      if (!solve_config.empty()) {
        std::ifstream is(solve_config);
        if (!is) throw std::runtime_error("cannot read config " + solve_config);
        const json j = json::parse(is);
        solve_tau = j.value("tau", solve_tau);
        solve_tau2 = j.value("tau2", solve_tau2);
        solve_max_n = j.value("max_n", solve_max_n);
        if (j.contains("schedule")) sched = scheduleFromJson(j["schedule"]);
      }
      if (!solve_schedule.empty()) sched = parseScheduleSpec(solve_schedule);
      return cmdSolve(solve_problem, solve_method, sched, solve_tau, solve_tau2, solve_max_n,
                      solve_path, solve_out);
    }
    if (rates->parsed()) {
      return cmdRates(rates_config.empty() ? std::nullopt : std::optional<fs::path>(rates_config),
                      rates_method.empty() ? std::nullopt : std::optional<std::string>(rates_method),
                      rates_mu,
                      rates_schedule.empty() ? std::nullopt
                                             : std::optional<std::string>(rates_schedule),
                      rates_workers, rates_out);
    }
    if (diagnose->parsed())
      return cmdDiagnose(diag_problem, parseScheduleSpec(diag_schedule), diag_n_max, diag_out);
  } catch (const CLI::ParseError& e) {
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
