#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ratreg/problems.hpp"

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

TEST_CASE("diagonal problem with explicit source element matches the filter formula") {
  SUBCASE("m=2, s=1, mu=1/2, w=e1") {
    InverseProblem p = makeDiagonalProblem(2, 1.0, 0.5, NoiseSpec{0.0, 1}, vec({1.0, 0.0}));
    const auto* op = dynamic_cast<const DiagonalOperator*>(p.op.get());
    REQUIRE(op != nullptr);
    CHECK(op->singularValues()[0] == doctest::Approx(1.0));
    CHECK(op->singularValues()[1] == doctest::Approx(0.5));
    CHECK(p.x_true[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.x_true[1] == doctest::Approx(0.0));
    CHECK(p.y_exact[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.y_noisy == p.y_exact);
  }
  SUBCASE("m=3, s=1, mu=1, w=e3") {
    InverseProblem p = makeDiagonalProblem(3, 1.0, 1.0, NoiseSpec{0.0, 1}, vec({0.0, 0.0, 1.0}));
    CHECK(p.x_true[2] == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(p.y_exact[2] == doctest::Approx(1.0 / 27.0).epsilon(1e-14));
  }
}

TEST_CASE("source-condition consistency on generated problems") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    InverseProblem p = makeDiagonalProblem(20, 1.5, 0.75, NoiseSpec{1e-3, seed});
    const auto* op = dynamic_cast<const DiagonalOperator*>(p.op.get());
    REQUIRE(op != nullptr);
    CHECK(std::abs(p.w.norm() - 1.0) <= 1e-14);
    const Vector regenerated = op->singularValues().array().pow(2.0 * *p.mu) * p.w.array();
    CHECK((regenerated - p.x_true).lpNorm<Eigen::Infinity>() <= 1e-14);
  }
}

TEST_CASE("noise has the exact requested norm and is deterministic") {
  InverseProblem base = makeDiagonalProblem(50, 1.0, 1.0, NoiseSpec{0.0, 3});
  SUBCASE("norm is exact") {
    for (double delta : {0.1, 1e-3, 1e-6}) {
      const Vector noisy = addNoise(base.y_exact, NoiseSpec{delta, 3}, *base.op);
      const double achieved = (noisy - base.y_exact).norm();
      CHECK(std::abs(achieved / delta - 1.0) <= 1e-12);
    }
  }
  SUBCASE("same seed reproduces, different seed differs") {
    const Vector a = addNoise(base.y_exact, NoiseSpec{0.1, 3}, *base.op);
    const Vector b = addNoise(base.y_exact, NoiseSpec{0.1, 3}, *base.op);
    const Vector c = addNoise(base.y_exact, NoiseSpec{0.1, 4}, *base.op);
    CHECK((a - b).norm() == 0.0);
    CHECK((a - c).norm() > 0.0);
  }
}

TEST_CASE("noise is projected onto the operator range") {
  // Rank-1 dense embedding in 2-d with range = span(e1).
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  DenseOperator op(a);
  const Vector y = vec({1.0, 0.0});
  const Vector noisy = addNoise(y, NoiseSpec{0.25, 9}, op);
  CHECK(std::abs(noisy[1]) <= 1e-14);
  CHECK(std::abs((noisy - y).norm() - 0.25) <= 1e-13);
}

TEST_CASE("problem invariants across seeds") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    InverseProblem p = makeDiagonalProblem(30, 1.0, 0.5, NoiseSpec{1e-2, seed});
    CHECK(std::abs((p.y_noisy - p.y_exact).norm() / p.delta - 1.0) <= 1e-12);
  }
}

TEST_CASE("gravity problem matches the kernel oracle") {
  InverseProblem p = makeGravityProblem(8, 0.25, NoiseSpec{0.0, 1});
  const auto* op = dynamic_cast<const DenseOperator*>(p.op.get());
  REQUIRE(op != nullptr);
  // K(s1, t1) = 0.25 * (0.0625)^{-3/2} = 16, scaled by 1/m.
  CHECK(op->entries()(0, 0) == doctest::Approx(2.0).epsilon(1e-13));
  // independent quadrature oracle for an off-diagonal entry
  const double s = 0.5 / 8.0, t = 1.5 / 8.0;
  const double expected = (1.0 / 8.0) * 0.25 / std::pow(0.0625 + (s - t) * (s - t), 1.5);
  CHECK(op->entries()(0, 1) == doctest::Approx(expected).epsilon(1e-13));

  SUBCASE("kernel symmetry") {
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        CHECK(op->entries()(i, j) == doctest::Approx(op->entries()(j, i)).epsilon(1e-14));
  }
  SUBCASE("zero noise keeps data exact") { CHECK(p.y_noisy == p.y_exact); }
  SUBCASE("x_true samples the prescribed profile") {
    const double t0 = 0.5 / 8.0;
    CHECK(p.x_true[0] ==
          doctest::Approx(std::sin(M_PI * t0) + 0.5 * std::sin(2 * M_PI * t0)).epsilon(1e-14));
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(makeDiagonalProblem(1, 1.0, 0.5, NoiseSpec{0.0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(makeDiagonalProblem(4, -1.0, 0.5, NoiseSpec{0.0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(makeGravityProblem(4, 0.25, NoiseSpec{0.0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(addNoise(Vector::Zero(3), NoiseSpec{0.0, 1}, DiagonalOperator(vec({1.0}))),
                  std::invalid_argument);
}
