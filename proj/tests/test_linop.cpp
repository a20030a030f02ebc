#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ratreg/linop.hpp"
#include "ratreg/rng.hpp"

using namespace ratreg;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("diagonal apply scales componentwise") {
  DiagonalOperator op(vec({2.0, 1.0}));
  CHECK((op.apply(vec({1.0, 1.0})) - vec({2.0, 1.0})).norm() == 0.0);

  DiagonalOperator scalar(vec({3.0}));
  CHECK(scalar.apply(vec({0.0}))[0] == 0.0);
}

TEST_CASE("dense apply is the matrix-vector product") {
  DenseOperator op(mat2(1, 2, 3, 4));
  CHECK((op.apply(vec({1.0, 1.0})) - vec({3.0, 7.0})).norm() == doctest::Approx(0.0));
}

TEST_CASE("apply rejects mismatched dimensions") {
  DiagonalOperator op(vec({2.0, 1.0}));
  CHECK_THROWS_AS(op.apply(vec({1.0})), DimensionError);
  CHECK_THROWS_AS(op.applyAdjoint(vec({1.0, 2.0, 3.0})), DimensionError);
}

TEST_CASE("adjoint of a diagonal operator is itself") {
  DiagonalOperator op(vec({2.0, 1.0}));
  CHECK((op.applyAdjoint(vec({1.0, 1.0})) - vec({2.0, 1.0})).norm() == 0.0);
}

TEST_CASE("dense adjoint is the transpose product") {
  DenseOperator op(mat2(1, 2, 3, 4));
  CHECK((op.applyAdjoint(vec({1.0, 0.0})) - vec({1.0, 2.0})).norm() == doctest::Approx(0.0));
  CHECK(op.applyAdjoint(Vector::Zero(2)).norm() == 0.0);
}

TEST_CASE("operator norms") {
  CHECK(DiagonalOperator(vec({2.0, 1.0})).operatorNorm() == 2.0);
  CHECK(DenseOperator(mat2(3, 0, 0, 4)).operatorNorm() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(DenseOperator(mat2(0, 1, 1, 0)).operatorNorm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("svd reconstruction and orthogonality") {
  SUBCASE("diagonal matrix") {
    SvdDecomposition dec = svd(DenseOperator(mat2(2, 0, 0, 1)));
    CHECK(dec.singular_values[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(dec.singular_values[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("permutation matrix has unit spectrum") {
    SvdDecomposition dec = svd(DenseOperator(mat2(0, 1, 1, 0)));
    CHECK(dec.singular_values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dec.singular_values[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("rank-1 matrix") {
    SvdDecomposition dec = svd(DenseOperator(mat2(1, 1, 1, 1)));
    CHECK(dec.singular_values[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(dec.singular_values[1] == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("random reconstruction") {
    CounterRng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
      const int m = 3 + trial % 4;
      const int p = 2 + trial % 3;
      Matrix a(m, p);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < p; ++j)
          a(i, j) = rng.substream(static_cast<std::uint64_t>(trial))
                        .normal(static_cast<std::uint64_t>(i * p + j));
      DenseOperator op(a);
      SvdDecomposition dec = svd(op);
      const Matrix rebuilt =
          dec.left_vectors * dec.singular_values.asDiagonal() * dec.right_vectors.transpose();
      CHECK((rebuilt - a).norm() <= 1e-10 * op.operatorNorm());
      const auto r = dec.singular_values.size();
      CHECK((dec.left_vectors.transpose() * dec.left_vectors - Matrix::Identity(r, r)).norm() <=
            1e-12);
      CHECK((dec.right_vectors.transpose() * dec.right_vectors - Matrix::Identity(r, r)).norm() <=
            1e-12);
      for (Eigen::Index i = 1; i < r; ++i)
        CHECK(dec.singular_values[i] <= dec.singular_values[i - 1]);
    }
  }
}

TEST_CASE("adjoint consistency over random triples") {
  CounterRng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    CounterRng sub = rng.substream(static_cast<std::uint64_t>(trial));
    const int m = 2 + trial % 5;
    const int p = 2 + (trial / 2) % 4;
    Matrix a(m, p);
    for (int i = 0; i < m * p; ++i) a(i / p, i % p) = sub.normal(static_cast<std::uint64_t>(i));
    DenseOperator op(a);
    Vector x(p), y(m);
    for (int i = 0; i < p; ++i) x[i] = sub.normal(static_cast<std::uint64_t>(1000 + i));
    for (int i = 0; i < m; ++i) y[i] = sub.normal(static_cast<std::uint64_t>(2000 + i));
    const Vector ax = op.apply(x);
    const double lhs = ax.dot(y);
    const double rhs = x.dot(op.applyAdjoint(y));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(ax.norm() * y.norm(), 1e-30));
    CHECK(ax.norm() <= op.operatorNorm() * x.norm() * (1 + 1e-12));
  }
}

TEST_CASE("diagonal and dense embeddings agree") {
  CounterRng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    CounterRng sub = rng.substream(static_cast<std::uint64_t>(trial));
    const int m = 2 + trial % 6;
    Vector sigma(m);
    for (int i = 0; i < m; ++i) sigma[i] = 2.0 - 1.5 * i / std::max(m - 1, 1);
    DiagonalOperator diag(sigma);
    DenseOperator dense = toDense(diag);
    Vector x(m);
    for (int i = 0; i < m; ++i) x[i] = sub.normal(static_cast<std::uint64_t>(i));
    CHECK((diag.apply(x) - dense.apply(x)).lpNorm<Eigen::Infinity>() <= 1e-14);
    CHECK((diag.applyAdjoint(x) - dense.applyAdjoint(x)).lpNorm<Eigen::Infinity>() <= 1e-14);
  }
}

TEST_CASE("diagonal operator validates its invariants") {
  CHECK_THROWS_AS(DiagonalOperator(vec({1.0, 2.0})), std::invalid_argument);
  CHECK_THROWS_AS(DiagonalOperator(vec({1.0, 0.0})), std::invalid_argument);
  CHECK_THROWS_AS(DiagonalOperator(vec({-1.0})), std::invalid_argument);
}

TEST_CASE("canonical problem keeps spectrum and data paired") {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;  // out of order on purpose
  DenseOperator op(a);
  const Vector y = vec({3.0, 4.0, 5.0});
  CanonicalProblem cp = canonicalProblem(spectralForm(op, y));
  CHECK(cp.op->singularValues()[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(cp.op->singularValues()[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(cp.y[0]) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(std::abs(cp.y[1]) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(cp.out_of_range_mass == doctest::Approx(5.0).epsilon(1e-10));
}
