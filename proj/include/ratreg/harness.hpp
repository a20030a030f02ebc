#pragma once

#include "ratreg/stopping.hpp"

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace ratreg {

struct RateStudyConfig {
  Method method = Method::Aggregation;
  SolvePath path = SolvePath::Factorized;
  std::vector<double> mu_list{0.5, 1.0, 2.0};
  std::vector<double> delta_list;  // strictly decreasing; empty -> default sweep
  int seeds_per_cell = 5;
  std::uint64_t base_seed = 1;
  ScheduleKind schedule_kind = ScheduleKind::ConstantFloor;
  ScheduleParams schedule_params{};
  double tau = 1.5;
  double tau2 = 3.0;
  int problem_m = 400;
  double decay_s = 1.0;
  int max_n = 0;  // 0 -> 2 * problem_m + 1
  int workers = 1;
  bool reorthogonalize = false;
};

/// Nine log-spaced noise levels from 1e-2 down to 1e-6.
std::vector<double> defaultDeltaSweep();

struct RateCell {
  double mu = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string drop_reason;  // set when the cell was dropped
  int n_star = 0;
  double error = 0.0;  // ||x_{n*} - x_true||
  double residual_at_stop = 0.0;
  double sigma_n = 0.0;
  int effective_rank = 0;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
};

struct RateStudyResult {
  RateStudyConfig config;
  std::vector<RateCell> cells;  // fixed (mu, delta, seed) order
  std::map<double, SlopeFit> slope_per_mu;
  int dropped = 0;
};

/// Ordinary least squares on (log delta, log error) pairs; needs >= 3 points.
SlopeFit fitSlope(const std::vector<std::pair<double, double>>& log_pairs);

/// Runs every (mu, delta, seed) cell with discrepancy stopping and fits the
/// per-mu slope of log error against log delta (seed-averaged per delta).
/// Dropped cells (signal condition, exhaustion) are counted, not fatal.
RateStudyResult runRateStudy(const RateStudyConfig& config);

/// CSV with one row per cell; stable formatting so identical configurations
/// produce byte-identical output.
void writeRatesCsv(std::ostream& os, const RateStudyResult& result);
void writeRatesSummaryJson(std::ostream& os, const RateStudyResult& result);

}  // namespace ratreg
