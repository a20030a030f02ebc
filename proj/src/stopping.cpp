#include "ratreg/stopping.hpp"

#include <algorithm>
#include <cmath>

namespace ratreg {

bool checkSignalCondition(const Vector& y_noisy, const DiscrepancyConfig& config) {
  if (!(config.tau > 1.0) || !(config.tau2 > config.tau))
    throw std::invalid_argument("discrepancy configuration requires 1 < tau < tau2");
  return y_noisy.norm() >= config.tau2 * config.delta;
}

std::string toString(Method method) {
  switch (method) {
    case Method::Aggregation: return "agg";
    case Method::RatCG: return "ratcg";
    case Method::Cgne: return "cgne";
  }
  return "unknown";
}

Method methodFromString(const std::string& name) {
  if (name == "agg" || name == "aggregation") return Method::Aggregation;
  if (name == "ratcg") return Method::RatCG;
  if (name == "cgne") return Method::Cgne;
  throw std::invalid_argument("unknown method: " + name);
}

namespace {

DiscrepancyRun runCgneDiscrepancy(const InverseProblem& problem, const AlphaSchedule& schedule,
                                  const DiscrepancyConfig& config) {
  CgneOptions opts;
  opts.max_iter = config.max_n;
  opts.target_residual = config.tau * config.delta;
  CgneOutcome out = cgne(*problem.op, problem.y_noisy, opts);

  DiscrepancyRun run;
  run.trace = out.trace;
  run.trace.method_tag = "cgne";
  run.x = out.x;
  const int last = static_cast<int>(run.trace.residual_norms.size()) - 1;
  if (run.trace.residual_norms[static_cast<std::size_t>(last)] >= config.tau * config.delta) {
    run.trace.stop_index.reset();
    throw ExhaustionError("CGNE did not reach the discrepancy level within max_n", run.trace);
  }
  run.n_star = last;
  run.trace.stop_index = run.n_star;
  run.effective_rank = last;
  // sigma bookkeeping only applies to the alpha-based methods; still record
  // the schedule sums for shared reporting.
  run.trace.sigma_values.resize(run.trace.residual_norms.size(), 0.0);
  for (std::size_t i = 0; i < run.trace.sigma_values.size(); ++i) {
    const int n = std::min(static_cast<int>(i), schedule.size());
    run.trace.sigma_values[i] = schedule.sigma(n);
  }
  return run;
}

}  // namespace

DiscrepancyRun runWithDiscrepancy(Method method, const InverseProblem& problem,
                                  const AlphaSchedule& schedule, const DiscrepancyConfig& config,
                                  SolvePath path, bool reorthogonalize) {
  if (!(config.delta > 0.0)) throw std::invalid_argument("discrepancy stopping requires delta > 0");
  if (!checkSignalCondition(problem.y_noisy, config))
    throw SignalConditionError("signal condition ||y|| >= tau2 * delta violated (pathological data)");

  if (method == Method::Cgne) return runCgneDiscrepancy(problem, schedule, config);

  const double threshold = config.tau * config.delta;
  DiscrepancyRun run;
  run.trace.method_tag = toString(method) + ":" + toString(path);
  run.trace.residual_norms.push_back(problem.y_noisy.norm());
  run.trace.sigma_values.push_back(0.0);

  const int n_cap = std::min(config.max_n,
                             method == Method::Aggregation ? schedule.size() : 2 * schedule.size());
  for (int n = 1; n <= n_cap; ++n) {
    AggregationResult res;
    switch (path) {
      case SolvePath::Factorized:
        res = method == Method::Aggregation
                  ? factorizedAggregate(*problem.op, problem.y_noisy, schedule, n, reorthogonalize)
                  : factorizedRatCg(*problem.op, problem.y_noisy, schedule, n, reorthogonalize);
        break;
      default:
        res = method == Method::Aggregation
                  ? aggregate(*problem.op, problem.y_noisy, schedule, n, path)
                  : ratcg(*problem.op, problem.y_noisy, schedule, n, path);
        break;
    }
    run.trace.residual_norms.push_back(res.residual_norm);
    run.trace.sigma_values.push_back(method == Method::Aggregation ? schedule.sigma(std::min(n, schedule.size()))
                                                                   : schedule.sigmaHat(n));
    if (res.breakdown && !run.trace.breakdown_index) run.trace.breakdown_index = n;
    if (res.residual_norm < threshold) {
      run.x = res.x;
      run.n_star = n;
      run.trace.stop_index = n;
      run.effective_rank = res.effective_rank;
      return run;
    }
  }
  throw ExhaustionError("discrepancy level not reached within max_n", run.trace);
}

std::string toString(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::ConstantFloor: return "constant_floor";
    case ScheduleKind::GeometricFloor: return "geometric_floor";
    case ScheduleKind::DeltaScaled: return "delta_scaled";
  }
  return "unknown";
}

ScheduleKind scheduleKindFromString(const std::string& name) {
  if (name == "constant_floor" || name == "constant") return ScheduleKind::ConstantFloor;
  if (name == "geometric_floor" || name == "geometric") return ScheduleKind::GeometricFloor;
  if (name == "delta_scaled" || name == "delta") return ScheduleKind::DeltaScaled;
  throw std::invalid_argument("unknown schedule kind: " + name);
}

AlphaSchedule makeSchedule(ScheduleKind kind, const ScheduleParams& params, double delta,
                           double mu_star, int n) {
  if (n < 1) throw std::invalid_argument("schedule length must be at least 1");
  constexpr double kEpsSep = 1e-6;

  std::vector<double> alphas(static_cast<std::size_t>(n));
  double c0 = 0.0;
  switch (kind) {
    case ScheduleKind::ConstantFloor: {
      if (!(params.c0 > 0.0)) throw std::invalid_argument("constant_floor requires c0 > 0");
      for (int i = 1; i <= n; ++i)
        alphas[static_cast<std::size_t>(i - 1)] = params.c0 * (1.0 + i * kEpsSep);
      c0 = params.c0;
      break;
    }
    case ScheduleKind::GeometricFloor: {
      if (!(params.c0 > 0.0)) throw std::invalid_argument("geometric_floor requires c0 > 0");
      if (!(params.q > 0.0) || params.q >= 1.0)
        throw std::invalid_argument("geometric_floor requires 0 < q < 1");
      if (!(params.alpha1 > 0.0)) throw std::invalid_argument("alpha1 must be positive");
      for (int i = 1; i <= n; ++i) {
        const double geo = params.alpha1 * std::pow(params.q, i - 1);
        alphas[static_cast<std::size_t>(i - 1)] = std::max(geo, params.c0 * (1.0 + i * kEpsSep));
      }
      c0 = params.c0;
      break;
    }
    case ScheduleKind::DeltaScaled: {
      if (!(params.C > 0.0)) throw std::invalid_argument("delta_scaled requires C > 0");
      if (!(delta > 0.0) || !(mu_star > 0.0))
        throw std::invalid_argument("delta_scaled requires delta > 0 and mu_star > 0");
      const double base = std::max(params.C * std::pow(delta, 1.0 / mu_star),
                                   params.c0 > 0.0 ? params.c0 : 0.0);
      for (int i = 1; i <= n; ++i)
        alphas[static_cast<std::size_t>(i - 1)] = base * (1.0 + i * kEpsSep);
      c0 = base;
      break;
    }
  }
  AlphaSchedule schedule(std::move(alphas), c0);
  // Rebuild with the achieved Hanke-Groetsch constant recorded on it.
  const double c_it = schedule.achievedCIt();
  return AlphaSchedule(schedule.alphas(), c0, c_it > 0.0 ? std::optional<double>(c_it) : std::nullopt);
}

}  // namespace ratreg
