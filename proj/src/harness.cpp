#include "ratreg/harness.hpp"

#include "ratreg/problems.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <thread>

namespace ratreg {

std::vector<double> defaultDeltaSweep() {
  std::vector<double> deltas;
  for (int i = 0; i < 9; ++i) deltas.push_back(std::pow(10.0, -2.0 - 0.5 * i));
  return deltas;
}

SlopeFit fitSlope(const std::vector<std::pair<double, double>>& log_pairs) {
  if (log_pairs.size() < 3) throw std::invalid_argument("slope fit needs at least 3 points");
  const double n = static_cast<double>(log_pairs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : log_pairs) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("slope fit needs distinct abscissae");
  SlopeFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  const double sst = syy - sy * sy / n;
  double ssr = 0.0;
  for (const auto& [x, y] : log_pairs) {
    const double e = y - (fit.slope * x + fit.intercept);
    ssr += e * e;
  }
  fit.r2 = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
  fit.points = static_cast<int>(log_pairs.size());
  return fit;
}

namespace {

RateCell runCell(const RateStudyConfig& config, double mu, double delta, std::uint64_t seed) {
  RateCell cell;
  cell.mu = mu;
  cell.delta = delta;
  cell.seed = seed;
  try {
    InverseProblem problem =
        makeDiagonalProblem(config.problem_m, config.decay_s, mu, NoiseSpec{delta, seed});
    const int max_n = config.max_n > 0 ? config.max_n : 2 * config.problem_m + 1;
    AlphaSchedule schedule =
        makeSchedule(config.schedule_kind, config.schedule_params, delta, mu + 0.5, max_n);
    DiscrepancyConfig dc{config.tau, config.tau2, delta, max_n};
    DiscrepancyRun run = runWithDiscrepancy(config.method, problem, schedule, dc, config.path,
                                            config.reorthogonalize);
    cell.ok = true;
    cell.n_star = run.n_star;
    cell.error = (run.x - problem.x_true).norm();
    cell.residual_at_stop = run.trace.residual_norms.back();
    cell.sigma_n = run.trace.sigma_values.back();
    cell.effective_rank = run.effective_rank;
  } catch (const SignalConditionError&) {
    cell.drop_reason = "signal_condition";
  } catch (const ExhaustionError&) {
    cell.drop_reason = "exhaustion";
  }
  return cell;
}

}  // namespace

RateStudyResult runRateStudy(const RateStudyConfig& config) {
  RateStudyResult result;
  result.config = config;
  if (result.config.delta_list.empty()) result.config.delta_list = defaultDeltaSweep();
  const auto& deltas = result.config.delta_list;
  for (std::size_t i = 1; i < deltas.size(); ++i)
    if (!(deltas[i] < deltas[i - 1]))
      throw std::invalid_argument("delta list must be strictly decreasing");
  for (double mu : config.mu_list)
    if (!(mu > 0.0)) throw std::invalid_argument("all mu must be positive");

  struct CellKey {
    double mu, delta;
    std::uint64_t seed;
  };
  std::vector<CellKey> keys;
  for (double mu : config.mu_list)
    for (double delta : deltas)
      for (int s = 0; s < config.seeds_per_cell; ++s)
        keys.push_back({mu, delta, config.base_seed + static_cast<std::uint64_t>(s)});

  result.cells.resize(keys.size());
  const int workers = std::max(config.workers, 1);
  if (workers == 1) {
    for (std::size_t i = 0; i < keys.size(); ++i)
      result.cells[i] = runCell(result.config, keys[i].mu, keys[i].delta, keys[i].seed);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < keys.size(); i = next.fetch_add(1))
          result.cells[i] = runCell(result.config, keys[i].mu, keys[i].delta, keys[i].seed);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (const RateCell& cell : result.cells)
    if (!cell.ok) ++result.dropped;

  // Per-mu slope over the seed-averaged log errors.
  for (double mu : config.mu_list) {
    std::vector<std::pair<double, double>> pts;
    for (double delta : deltas) {
      double sum = 0.0;
      int count = 0;
      for (const RateCell& cell : result.cells) {
        if (cell.ok && cell.mu == mu && cell.delta == delta && cell.error > 0.0) {
          sum += std::log10(cell.error);
          ++count;
        }
      }
      if (count > 0) pts.emplace_back(std::log10(delta), sum / count);
    }
    if (pts.size() >= 3) result.slope_per_mu[mu] = fitSlope(pts);
  }
  return result;
}

namespace {

std::string numberField(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void writeRatesCsv(std::ostream& os, const RateStudyResult& result) {
  os << "method,mu,delta,seed,n_star,error,residual_at_stop,sigma_n,effective_rank\n";
  for (const RateCell& cell : result.cells) {
    if (!cell.ok) continue;  // dropped cells are listed in the summary
    os << toString(result.config.method) << ',' << numberField(cell.mu) << ','
       << numberField(cell.delta) << ',' << cell.seed << ',' << cell.n_star << ','
       << numberField(cell.error) << ',' << numberField(cell.residual_at_stop) << ','
       << numberField(cell.sigma_n) << ',' << cell.effective_rank << '\n';
  }
}

void writeRatesSummaryJson(std::ostream& os, const RateStudyResult& result) {
  os << "{\n  \"method\": \"" << toString(result.config.method) << "\",\n  \"dropped\": "
     << result.dropped << ",\n  \"dropped_cells\": [";
  bool first = true;
  for (const RateCell& cell : result.cells) {
    if (cell.ok) continue;
    if (!first) os << ',';
    first = false;
    os << "\n    {\"mu\": " << numberField(cell.mu) << ", \"delta\": " << numberField(cell.delta)
       << ", \"seed\": " << cell.seed << ", \"reason\": \"" << cell.drop_reason << "\"}";
  }
  os << (first ? "]" : "\n  ]") << ",\n  \"slopes\": [\n";
  first = true;
  for (const auto& [mu, fit] : result.slope_per_mu) {
    if (!first) os << ",\n";
    first = false;
    os << "    {\"mu\": " << numberField(mu) << ", \"theoretical\": "
       << numberField(mu / (mu + 0.5)) << ", \"slope\": " << numberField(fit.slope)
       << ", \"intercept\": " << numberField(fit.intercept) << ", \"r2\": "
       << numberField(fit.r2) << ", \"points\": " << fit.points << "}";
  }
  os << "\n  ]\n}\n";
}

}  // namespace ratreg
