#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ratreg/stopping.hpp"

#include <cmath>

using namespace ratreg;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("signal condition") {
  DiscrepancyConfig config{1.5, 3.0, 0.1, 50};
  CHECK(checkSignalCondition(vec({1.0, 0.0}), config));
  CHECK_FALSE(checkSignalCondition(vec({0.2, 0.0}), config));
  SUBCASE("boundary counts as satisfied") {
    // exact binary values so tau2 * delta is representable
    DiscrepancyConfig exact{1.5, 3.0, 0.25, 50};
    CHECK(checkSignalCondition(vec({0.75, 0.0}), exact));
  }
  SUBCASE("invalid tau ordering is rejected") {
    DiscrepancyConfig bad{1.5, 1.2, 0.1, 50};
    CHECK_THROWS_AS(checkSignalCondition(vec({1.0}), bad), std::invalid_argument);
  }
}

TEST_CASE("discrepancy run stops with the exact sandwich") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    InverseProblem p = makeDiagonalProblem(40, 1.0, 0.5, NoiseSpec{1e-3, seed});
    AlphaSchedule schedule = makeSchedule(ScheduleKind::GeometricFloor,
                                          ScheduleParams{8.0, 0.5, 1e-4, 1.0}, p.delta, 1.0, 80);
    DiscrepancyConfig config{1.5, 3.0, p.delta, 80};
    for (Method method : {Method::Aggregation, Method::RatCG, Method::Cgne}) {
      DiscrepancyRun run = runWithDiscrepancy(method, p, schedule, config);
      const double threshold = config.tau * config.delta;
      REQUIRE(run.n_star >= 1);
      CHECK(run.trace.residual_norms[static_cast<std::size_t>(run.n_star)] < threshold);
      CHECK(run.trace.residual_norms[static_cast<std::size_t>(run.n_star - 1)] >= threshold);
      CHECK(run.trace.stop_index.value() == run.n_star);
    }
  }
}

TEST_CASE("rank-2 problem stops by span exhaustion") {
  InverseProblem p;
  p.op = std::make_shared<DiagonalOperator>(vec({2.0, 1.0}));
  p.x_true = vec({0.5, 1.0});
  p.y_exact = p.op->apply(p.x_true);
  p.delta = 1e-8;
  p.y_noisy = addNoise(p.y_exact, NoiseSpec{p.delta, 5}, *p.op);
  AlphaSchedule schedule({4.0, 2.0, 1.0, 0.5});
  DiscrepancyConfig config{1.5, 3.0, p.delta, 10};
  DiscrepancyRun run = runWithDiscrepancy(Method::Aggregation, p, schedule, config);
  CHECK(run.n_star <= 2);
}

TEST_CASE("large delta stops immediately") {
  InverseProblem p = makeDiagonalProblem(20, 1.0, 1.0, NoiseSpec{1e-3, 2});
  // enlarge delta artificially: residual after one step is already tiny
  const double big_delta = p.y_noisy.norm() / 4.0;
  InverseProblem q = p;
  q.delta = big_delta;
  AlphaSchedule schedule = makeSchedule(ScheduleKind::GeometricFloor,
                                        ScheduleParams{8.0, 0.5, 1e-4, 1.0}, big_delta, 1.0, 40);
  DiscrepancyConfig config{1.5, 3.0, big_delta, 40};
  DiscrepancyRun run = runWithDiscrepancy(Method::Aggregation, q, schedule, config);
  CHECK(run.n_star >= 1);
  const double rho1 = run.trace.residual_norms[1];
  if (rho1 < config.tau * big_delta) CHECK(run.n_star == 1);
}

TEST_CASE("signal violation raises the data-condition error") {
  InverseProblem p = makeDiagonalProblem(10, 1.0, 1.0, NoiseSpec{1e-3, 7});
  InverseProblem q = p;
  q.delta = p.y_noisy.norm();  // certainly violates ||y|| >= 3 delta
  AlphaSchedule schedule({1.0});
  DiscrepancyConfig config{1.5, 3.0, q.delta, 10};
  CHECK_THROWS_AS(runWithDiscrepancy(Method::Aggregation, q, schedule, config),
                  SignalConditionError);
}

TEST_CASE("exhaustion carries the trace") {
  InverseProblem p = makeDiagonalProblem(40, 1.0, 0.5, NoiseSpec{1e-6, 3});
  AlphaSchedule schedule({8.0, 4.0});  // far too short to reach 1.5e-6
  DiscrepancyConfig config{1.5, 3.0, p.delta, 2};
  try {
    runWithDiscrepancy(Method::Aggregation, p, schedule, config);
    FAIL("expected exhaustion");
  } catch (const ExhaustionError& e) {
    CHECK(e.trace.residual_norms.size() == 3);  // rho_0, rho_1, rho_2
    CHECK_FALSE(e.trace.stop_index.has_value());
  }
}

TEST_CASE("iteration counts are ordered across methods") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    InverseProblem p = makeDiagonalProblem(40, 1.0, 1.0, NoiseSpec{1e-4, seed});
    AlphaSchedule schedule = makeSchedule(ScheduleKind::GeometricFloor,
                                          ScheduleParams{8.0, 0.5, 1e-5, 1.0}, p.delta, 1.5, 160);
    DiscrepancyConfig config{1.5, 3.0, p.delta, 160};
    const int n_agg = runWithDiscrepancy(Method::Aggregation, p, schedule, config).n_star;
    const int n_rat = runWithDiscrepancy(Method::RatCG, p, schedule, config).n_star;
    const int n_cg = runWithDiscrepancy(Method::Cgne, p, schedule, config).n_star;
    CHECK(n_agg <= n_rat);
    CHECK(n_rat <= n_cg);
    CHECK(n_agg <= n_cg);
  }
}

TEST_CASE("schedule constructors") {
  SUBCASE("constant floor") {
    AlphaSchedule s = makeSchedule(ScheduleKind::ConstantFloor, ScheduleParams{8.0, 0.5, 1.0, 1.0},
                                   1e-3, 1.0, 3);
    CHECK(s.alpha(1) == doctest::Approx(1.000001).epsilon(1e-12));
    CHECK(s.alpha(2) == doctest::Approx(1.000002).epsilon(1e-12));
    CHECK(s.alpha(3) == doctest::Approx(1.000003).epsilon(1e-12));
    for (int i = 1; i <= 3; ++i) CHECK(s.alpha(i) >= 1.0);
    CHECK(s.c0() == 1.0);
  }
  SUBCASE("geometric floor matches the floor-rule arithmetic") {
    AlphaSchedule s = makeSchedule(ScheduleKind::GeometricFloor, ScheduleParams{8.0, 0.5, 1.0, 1.0},
                                   1e-3, 1.0, 5);
    CHECK(s.alpha(1) == doctest::Approx(8.0));
    CHECK(s.alpha(2) == doctest::Approx(4.0));
    CHECK(s.alpha(3) == doctest::Approx(2.0));
    CHECK(s.alpha(4) == doctest::Approx(1.000004).epsilon(1e-12));
    CHECK(s.alpha(5) == doctest::Approx(1.000005).epsilon(1e-12));
  }
  SUBCASE("delta scaled uses C delta^{1/mu*}") {
    AlphaSchedule s = makeSchedule(ScheduleKind::DeltaScaled, ScheduleParams{8.0, 0.5, 0.0, 1.0},
                                   1e-4, 1.0, 2);
    CHECK(s.alpha(1) == doctest::Approx(1e-4 * 1.000001).epsilon(1e-12));
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(makeSchedule(ScheduleKind::GeometricFloor,
                                 ScheduleParams{8.0, 1.5, 1.0, 1.0}, 1e-3, 1.0, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS(makeSchedule(ScheduleKind::ConstantFloor,
                                 ScheduleParams{8.0, 0.5, -1.0, 1.0}, 1e-3, 1.0, 4),
                    std::invalid_argument);
  }
  SUBCASE("every produced schedule reports a valid c_it") {
    for (ScheduleKind kind :
         {ScheduleKind::ConstantFloor, ScheduleKind::GeometricFloor, ScheduleKind::DeltaScaled}) {
      AlphaSchedule s = makeSchedule(kind, ScheduleParams{8.0, 0.5, 1.0, 1.0}, 1e-3, 1.0, 12);
      REQUIRE(s.cIt().has_value());
      for (int n = 2; n <= s.size(); ++n)
        CHECK(1.0 / s.alpha(n) <= *s.cIt() * s.sigma(n - 1) * (1.0 + 1e-12));
      // pairwise distinct
      for (int i = 1; i <= s.size(); ++i)
        for (int j = i + 1; j <= s.size(); ++j) CHECK(s.alpha(i) != s.alpha(j));
    }
  }
}

TEST_CASE("n_star is reported non-increasing in delta (observational)") {
  // observed-property check across a delta sweep; reported, not asserted
  std::vector<int> stops;
  for (double delta : {1e-2, 1e-3, 1e-4}) {
    InverseProblem p = makeDiagonalProblem(40, 1.0, 1.0, NoiseSpec{delta, 11});
    AlphaSchedule schedule = makeSchedule(ScheduleKind::GeometricFloor,
                                          ScheduleParams{8.0, 0.5, 1e-5, 1.0}, delta, 1.5, 160);
    DiscrepancyConfig config{1.5, 3.0, delta, 160};
    stops.push_back(runWithDiscrepancy(Method::Aggregation, p, schedule, config).n_star);
  }
  MESSAGE("n_star across delta sweep: ", stops[0], " ", stops[1], " ", stops[2]);
  CHECK(stops.size() == 3);
}
