#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ratreg/harness.hpp"
#include "ratreg/rng.hpp"

#include <cmath>
#include <sstream>

using namespace ratreg;

TEST_CASE("slope fit oracles") {
  SUBCASE("exact power data") {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 6; ++i) {
      const double logd = -2.0 - 0.5 * i;
      pts.emplace_back(logd, 0.5 * logd);  // error = delta^{0.5}
    }
    const SlopeFit fit = fitSlope(pts);
    CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("constant errors give slope zero") {
    std::vector<std::pair<double, double>> pts{{-2, -1}, {-3, -1}, {-4, -1}};
    CHECK(fitSlope(pts).slope == doctest::Approx(0.0));
  }
  SUBCASE("jittered 2/3 slope stays within 0.02") {
    CounterRng rng(77);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 9; ++i) {
      const double logd = -2.0 - 0.5 * i;
      const double jitter = std::log10(1.0 + 0.01 * rng.normal(static_cast<std::uint64_t>(i)));
      pts.emplace_back(logd, (2.0 / 3.0) * logd + jitter);
    }
    CHECK(std::abs(fitSlope(pts).slope - 2.0 / 3.0) <= 0.02);
  }
  SUBCASE("fewer than three points fail") {
    std::vector<std::pair<double, double>> pts{{-2, -1}, {-3, -2}};
    CHECK_THROWS_AS(fitSlope(pts), std::invalid_argument);
  }
}

TEST_CASE("default sweep is nine strictly decreasing deltas") {
  const auto deltas = defaultDeltaSweep();
  REQUIRE(deltas.size() == 9);
  CHECK(deltas.front() == doctest::Approx(1e-2));
  CHECK(deltas.back() == doctest::Approx(1e-6));
  for (std::size_t i = 1; i < deltas.size(); ++i) CHECK(deltas[i] < deltas[i - 1]);
}

namespace {

RateStudyConfig smallConfig() {
  RateStudyConfig config;
  config.method = Method::Aggregation;
  config.mu_list = {1.0};
  config.delta_list = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  config.seeds_per_cell = 2;
  config.problem_m = 60;
  config.schedule_kind = ScheduleKind::GeometricFloor;
  config.schedule_params = ScheduleParams{8.0, 0.5, 1e-4, 1.0};
  config.max_n = 130;
  return config;
}

}  // namespace

TEST_CASE("small rate study produces a sensible slope") {
  const RateStudyResult result = runRateStudy(smallConfig());
  REQUIRE(result.slope_per_mu.count(1.0) == 1);
  const SlopeFit fit = result.slope_per_mu.at(1.0);
  MESSAGE("slope=", fit.slope, " r2=", fit.r2, " dropped=", result.dropped);
  // generous sanity band for a short sweep on a small problem
  CHECK(fit.slope > 0.3);
  CHECK(fit.slope < 1.2);
  SUBCASE("recorded cells satisfied the sandwich") {
    for (const RateCell& cell : result.cells) {
      if (!cell.ok) continue;
      CHECK(cell.residual_at_stop < 1.5 * cell.delta);
      CHECK(cell.n_star >= 1);
    }
  }
}

TEST_CASE("error stays above the projection floor of the same span") {
  // sanity lower bound: no solver output from span{x_alpha_1..x_alpha_n} can
  // be closer to x_true than the orthogonal projection of x_true
  RateStudyConfig config = smallConfig();
  config.delta_list = {1e-2, 3e-3, 1e-3};
  const RateStudyResult result = runRateStudy(config);
  for (const RateCell& cell : result.cells) {
    if (!cell.ok || cell.n_star > 12) continue;
    InverseProblem p =
        makeDiagonalProblem(config.problem_m, config.decay_s, cell.mu, {cell.delta, cell.seed});
    AlphaSchedule schedule = makeSchedule(config.schedule_kind, config.schedule_params, cell.delta,
                                          cell.mu + 0.5, config.max_n);
    RationalBasis basis = buildAggregationBasis(*p.op, p.y_noisy, schedule, cell.n_star);
    Matrix span(p.x_true.size(), cell.n_star);
    for (int j = 0; j < cell.n_star; ++j) span.col(j) = basis.vectors[static_cast<std::size_t>(j)];
    const Vector c = span.completeOrthogonalDecomposition().solve(p.x_true);
    const double floor = (p.x_true - span * c).norm();
    CHECK(cell.error >= floor * (1.0 - 1e-10));
  }
}

TEST_CASE("csv output is deterministic") {
  const RateStudyConfig config = smallConfig();
  const RateStudyResult a = runRateStudy(config);
  const RateStudyResult b = runRateStudy(config);
  std::ostringstream csv_a, csv_b, sum_a, sum_b;
  writeRatesCsv(csv_a, a);
  writeRatesCsv(csv_b, b);
  writeRatesSummaryJson(sum_a, a);
  writeRatesSummaryJson(sum_b, b);
  CHECK(csv_a.str() == csv_b.str());
  CHECK(sum_a.str() == sum_b.str());
  CHECK(csv_a.str().find("method,mu,delta,seed,n_star,error") == 0);
}

TEST_CASE("worker pool does not change the result") {
  RateStudyConfig config = smallConfig();
  config.delta_list = {1e-2, 3e-3, 1e-3};
  const RateStudyResult serial = runRateStudy(config);
  config.workers = 4;
  const RateStudyResult parallel = runRateStudy(config);
  std::ostringstream a, b;
  writeRatesCsv(a, serial);
  writeRatesCsv(b, parallel);
  CHECK(a.str() == b.str());
}

TEST_CASE("config validation") {
  RateStudyConfig config = smallConfig();
  config.delta_list = {1e-3, 1e-2};  // increasing: invalid
  CHECK_THROWS_AS(runRateStudy(config), std::invalid_argument);
  config = smallConfig();
  config.mu_list = {-1.0};
  CHECK_THROWS_AS(runRateStudy(config), std::invalid_argument);
}
