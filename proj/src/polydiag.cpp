#include "ratreg/polydiag.hpp"

#include "ratreg/ratkrylov.hpp"
#include "ratreg/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ratreg {

namespace {

constexpr double kWeightTol = 1e-14;   // kappa counting, relative to max weight
constexpr double kNodeMergeTol = 1e-12;
constexpr double kRelSlack = 1e-8;     // slack for the lemma checks
constexpr int kDegreeCap = 12;

double relMargin(double lhs, double rhs) {
  // signed slack of the inequality lhs <= rhs, relative to the scale
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return (rhs - lhs) / scale;
}

CheckItem inequalityItem(std::string name, double lhs, double rhs, std::string note = {}) {
  CheckItem item;
  item.name = std::move(name);
  item.margin = relMargin(lhs, rhs);
  item.pass = item.margin >= -kRelSlack;
  item.note = std::move(note);
  return item;
}

CheckItem skippedItem(std::string name, std::string note) {
  CheckItem item;
  item.name = std::move(name);
  item.skipped = true;
  item.note = std::move(note);
  return item;
}

/// Ascending monomial coefficients of prod_j (1 - x/root_j); [0] == 1 exactly.
Vector coefficientsFromRoots(const Vector& roots) {
  std::vector<double> c{1.0};
  for (Eigen::Index j = 0; j < roots.size(); ++j) {
    const double inv = 1.0 / roots[j];
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= c[i] * inv;
    }
    c = std::move(next);
  }
  Vector out(static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) out[static_cast<Eigen::Index>(i)] = c[i];
  return out;
}

Vector tridiagonalEigenvalues(const std::vector<double>& a, const std::vector<double>& b, int k) {
  Vector diag(k), sub(std::max(k - 1, 0));
  for (int i = 0; i < k; ++i) diag[i] = a[static_cast<std::size_t>(i)];
  for (int i = 0; i + 1 < k; ++i) sub[i] = b[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("tridiagonal eigenvalue computation failed");
  return solver.eigenvalues();
}

struct SolverPair {
  double rho_nm1 = 0.0;
  double rho_n = 0.0;
  double normal_residual_sq = 0.0;  // ||A*(A x_n - y)||^2
};

SolverPair runSolverPair(const SpectralProblem& sp, const AlphaSchedule& schedule, int n,
                         bool hatted) {
  CanonicalProblem cp = canonicalProblem(sp);
  // The factorized path with reorthogonalized CGNE is the numerically exact
  // evaluator of the minimizers; the explicit mixed basis loses rank well
  // before the degree cap.
  const auto solve = [&](int level) {
    return hatted ? factorizedRatCg(*cp.op, cp.y, schedule, level)
                  : factorizedAggregate(*cp.op, cp.y, schedule, level);
  };
  SolverPair out;
  out.rho_nm1 = n - 1 >= 1 ? solve(n - 1).residual_norm : cp.y.norm();
  AggregationResult at_n = solve(n);
  out.rho_n = at_n.residual_norm;
  const Vector r = cp.y - cp.op->apply(at_n.x);
  out.normal_residual_sq = cp.op->applyAdjoint(r).squaredNorm();
  return out;
}

}  // namespace

DiscreteMeasure residualMeasure(const SpectralProblem& problem, const AlphaSchedule& schedule,
                                int n, bool hatted) {
  if (problem.lambda.size() != problem.y_coeff.size())
    throw std::invalid_argument("spectral problem arrays must have equal length");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(problem.lambda.size()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return problem.lambda[a] < problem.lambda[b]; });

  std::vector<double> nodes, mass;
  const double scale = problem.lambda.size() > 0 ? problem.lambda.maxCoeff() : 0.0;
  for (Eigen::Index idx : order) {
    const double l = problem.lambda[idx];
    if (!(l > 0.0)) continue;  // zero eigenvalues carry no measure
    const double m = problem.y_coeff[idx] * problem.y_coeff[idx];
    if (!nodes.empty() && l - nodes.back() <= kNodeMergeTol * scale) {
      mass.back() += m;
    } else {
      nodes.push_back(l);
      mass.push_back(m);
    }
  }
  if (nodes.empty()) throw DegenerateMeasureError("operator spectrum is empty");

  DiscreteMeasure out;
  const auto count = static_cast<Eigen::Index>(nodes.size());
  out.nodes.resize(count);
  out.weights.resize(count);
  out.data_mass.resize(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const double l = nodes[static_cast<std::size_t>(i)];
    const double g = hatted ? schedule.evalGHat(n, l) : schedule.evalG(n, l);
    out.nodes[i] = l;
    out.data_mass[i] = mass[static_cast<std::size_t>(i)];
    out.weights[i] = l * g * g * out.data_mass[i];
  }
  out.total_mass = out.weights.sum();
  if (!(out.total_mass > 0.0))
    throw DegenerateMeasureError("data is orthogonal to the operator range (zero total mass)");
  const double wmax = out.weights.maxCoeff();
  for (Eigen::Index i = 0; i < count; ++i)
    if (out.weights[i] > kWeightTol * wmax) ++out.kappa;
  return out;
}

double ResidualPolynomial::operator()(double x) const {
  double v = 1.0;
  for (Eigen::Index j = 0; j < roots.size(); ++j) v *= 1.0 - x / roots[j];
  return v;
}

double ResidualPolynomial::derivativeAtZero() const {
  double s = 0.0;
  for (Eigen::Index j = 0; j < roots.size(); ++j) s -= 1.0 / roots[j];
  return s;
}

std::vector<ResidualPolynomial> orthonormalResidualPolys(const DiscreteMeasure& measure,
                                                         int k_max) {
  if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
  if (k_max > measure.kappa)
    throw DegenerateMeasureError("requested degree exceeds the points of increase of the measure");

  // Work on the positive-weight atoms only.
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < measure.nodes.size(); ++i)
    if (measure.weights[i] > 0.0) support.push_back(i);
  const auto K = static_cast<Eigen::Index>(support.size());

  Vector w(K), lam(K);
  for (Eigen::Index i = 0; i < K; ++i) {
    w[i] = measure.weights[support[static_cast<std::size_t>(i)]];
    lam[i] = measure.nodes[support[static_cast<std::size_t>(i)]];
  }
  const auto dotW = [&](const Vector& u, const Vector& v) { return (u.array() * v.array() * w.array()).sum(); };

  const double m0 = w.sum();
  const double beta_floor = 1e-14 * lam.maxCoeff();
  std::vector<Vector> q;
  q.push_back(Vector::Constant(K, 1.0 / std::sqrt(m0)));

  std::vector<double> a, b;  // recurrence; b[j] is the off-diagonal beta_{j+1}
  for (int j = 0; j < k_max; ++j) {
    const Vector lq = lam.cwiseProduct(q.back());
    a.push_back(dotW(lq, q.back()));
    Vector v = lq - a.back() * q.back();
    if (j > 0) v -= b.back() * q[static_cast<std::size_t>(j - 1)];
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& qq : q) v -= dotW(v, qq) * qq;
    const double beta = std::sqrt(std::max(dotW(v, v), 0.0));
    b.push_back(beta);
    if (static_cast<Eigen::Index>(j) + 1 >= K || beta <= beta_floor) {
      if (j + 1 < k_max)
        throw DegenerateMeasureError("measure degenerated before the requested degree");
      break;
    }
    q.push_back(v / beta);
  }

  // Orthonormal-polynomial values at zero: t_{j+1} = (-a_j t_j - b_j t_{j-1}) / b_{j+1}.
  std::vector<double> t{1.0 / std::sqrt(m0)};
  for (int j = 0; j < k_max && static_cast<std::size_t>(j) < b.size(); ++j) {
    const double bj1 = b[static_cast<std::size_t>(j)];
    if (bj1 <= beta_floor) {
      t.push_back(0.0);  // degree-K polynomial vanishes on the support
      break;
    }
    const double prev = j > 0 ? t[static_cast<std::size_t>(j - 1)] : 0.0;
    const double bj = j > 0 ? b[static_cast<std::size_t>(j - 1)] : 0.0;
    t.push_back((-a[static_cast<std::size_t>(j)] * t[static_cast<std::size_t>(j)] - bj * prev) /
                bj1);
  }

  std::vector<ResidualPolynomial> polys;
  polys.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    ResidualPolynomial p;
    p.degree = k;
    p.jacobi_a.assign(a.begin(), a.begin() + k);
    p.jacobi_b.assign(b.begin(), b.begin() + (k - 1));
    p.roots = tridiagonalEigenvalues(p.jacobi_a, p.jacobi_b, k);
    p.value_at_zero_normalizer =
        static_cast<std::size_t>(k) < t.size() ? t[static_cast<std::size_t>(k)] : 0.0;
    // Values on the support come from the Lanczos vectors (orthogonal by
    // construction); the factored form only fills zero-weight nodes.
    p.node_values.resize(measure.nodes.size());
    for (Eigen::Index i = 0; i < measure.nodes.size(); ++i)
      p.node_values[i] = p(measure.nodes[i]);
    if (static_cast<std::size_t>(k) < q.size() && p.value_at_zero_normalizer != 0.0) {
      for (Eigen::Index s = 0; s < K; ++s)
        p.node_values[support[static_cast<std::size_t>(s)]] =
            q[static_cast<std::size_t>(k)][s] / p.value_at_zero_normalizer;
    } else if (static_cast<Eigen::Index>(k) >= K) {
      for (Eigen::Index s = 0; s < K; ++s)
        p.node_values[support[static_cast<std::size_t>(s)]] = 0.0;
    }
    polys.push_back(std::move(p));
  }
  return polys;
}

Vector polyRoots(const ResidualPolynomial& p) {
  return tridiagonalEigenvalues(p.jacobi_a, p.jacobi_b, p.degree);
}

WPolynomial wPolynomial(const ResidualPolynomial& p_prev, const ResidualPolynomial& p_curr) {
  if (p_curr.degree != p_prev.degree + 1)
    throw std::invalid_argument("w-polynomial needs consecutive degrees n-1 and n");
  if (p_curr.degree > kDegreeCap)
    throw std::invalid_argument("w-polynomial degree cap (12) exceeded");

  const Vector c_prev = coefficientsFromRoots(p_prev.roots);
  const Vector c_curr = coefficientsFromRoots(p_curr.roots);
  const int n = p_curr.degree;

  Vector numerator = -c_curr;
  numerator.head(c_prev.size()) += c_prev;  // constant terms are both exactly 1
  if (numerator.cwiseAbs().maxCoeff() <= 0.0)
    throw std::invalid_argument("polynomials must differ");

  WPolynomial w;
  w.degree = n - 1;
  w.coefficients = numerator.tail(n);  // deflation by x
  w.pi_value = w.coefficients[0];
  w.pi_root_sum = p_prev.derivativeAtZero() - p_curr.derivativeAtZero();

  // Roots from the companion matrix of the monic form.
  const int d = w.degree;
  if (d == 0) {
    w.smallest_root = std::numeric_limits<double>::infinity();
    return w;
  }
  const double lead = w.coefficients[d];
  if (lead == 0.0) throw std::invalid_argument("leading w-polynomial coefficient vanished");
  Matrix companion = Matrix::Zero(d, d);
  for (int i = 0; i + 1 < d; ++i) companion(i + 1, i) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -w.coefficients[i] / lead;
  Eigen::EigenSolver<Matrix> solver(companion);
  if (solver.info() != Eigen::Success) throw std::runtime_error("companion eigensolve failed");

  std::vector<double> reals;
  double imag_residue = 0.0;
  for (int i = 0; i < d; ++i) {
    const auto ev = solver.eigenvalues()[i];
    reals.push_back(ev.real());
    imag_residue = std::max(imag_residue,
                            std::abs(ev.imag()) / std::max(std::abs(ev), 1e-300));
  }
  std::sort(reals.begin(), reals.end());
  w.roots.resize(d);
  for (int i = 0; i < d; ++i) w.roots[i] = reals[static_cast<std::size_t>(i)];
  w.smallest_root = w.roots[0];
  w.max_imag_residue = imag_residue;
  return w;
}

bool CheckReport::allPass() const {
  return std::all_of(items.begin(), items.end(),
                     [](const CheckItem& i) { return i.pass || i.skipped; });
}

int CheckReport::failures() const {
  return static_cast<int>(std::count_if(items.begin(), items.end(), [](const CheckItem& i) {
    return !i.pass && !i.skipped;
  }));
}

int CheckReport::skips() const {
  return static_cast<int>(
      std::count_if(items.begin(), items.end(), [](const CheckItem& i) { return i.skipped; }));
}

CheckReport checkRootLemmas(const SpectralProblem& problem, const AlphaSchedule& schedule,
                            int n_max, bool hatted) {
  CheckReport report;
  const DiscreteMeasure base = residualMeasure(problem, schedule, 0, hatted);
  const int kappa = base.kappa;
  const double op_norm_sq = problem.op_norm * problem.op_norm;

  for (int n = 2; n <= n_max; ++n) {
    const std::string tag = (hatted ? "hat:" : "") + std::string("n=") + std::to_string(n);
    if (n > std::min<int>(kDegreeCap, kappa)) {
      report.items.push_back(skippedItem(tag, "degenerate (kappa or degree cap)"));
      continue;
    }
    const DiscreteMeasure meas_n = residualMeasure(problem, schedule, n, hatted);
    const DiscreteMeasure meas_nm1 = residualMeasure(problem, schedule, n - 1, hatted);
    const auto polys_n = orthonormalResidualPolys(meas_n, n);
    const auto polys_nm1 = orthonormalResidualPolys(meas_nm1, n - 1);

    // (a) interlacing of consecutive polynomials within the level-n measure
    {
      double margin = 1.0;
      for (int k = 1; k < n; ++k) {
        const Vector& rk = polys_n[static_cast<std::size_t>(k - 1)].roots;
        const Vector& rk1 = polys_n[static_cast<std::size_t>(k)].roots;
        for (int i = 0; i < k; ++i) {
          margin = std::min(margin, relMargin(rk1[i], rk[i]));
          margin = std::min(margin, relMargin(rk[i], rk1[i + 1]));
        }
      }
      CheckItem item;
      item.name = tag + ":interlacing";
      item.margin = margin;
      item.pass = margin >= -kRelSlack;
      report.items.push_back(item);
    }

    // (b) cross-measure monotonicity of the roots
    {
      double margin = 1.0;
      for (int k = 1; k <= n - 1; ++k) {
        const Vector& high = polys_n[static_cast<std::size_t>(k - 1)].roots;
        const Vector& low = polys_nm1[static_cast<std::size_t>(k - 1)].roots;
        for (int i = 0; i < k; ++i) margin = std::min(margin, relMargin(high[i], low[i]));
      }
      CheckItem item;
      item.name = tag + ":cross-measure";
      item.margin = margin;
      item.pass = margin >= -kRelSlack;
      report.items.push_back(item);
    }

    // (c) smallest w-polynomial root bounds
    const ResidualPolynomial& p_prev = polys_nm1[static_cast<std::size_t>(n - 2)];
    const ResidualPolynomial& p_curr = polys_n[static_cast<std::size_t>(n - 1)];
    const WPolynomial w = wPolynomial(p_prev, p_curr);
    report.items.push_back(
        inequalityItem(tag + ":w-roots-real", w.max_imag_residue, kRelSlack));
    report.items.push_back(inequalityItem(tag + ":pi-positive", 0.0, w.pi_value));
    const Vector& rn_low = polys_n[static_cast<std::size_t>(n - 2)].roots;  // p_{n-1}^{[n]}
    report.items.push_back(inequalityItem(tag + ":mu1-lower", rn_low[0], w.smallest_root));
    const double anoy_lhs = std::min(p_prev.roots[0], p_curr.roots[1]);
    report.items.push_back(inequalityItem(tag + ":mu1-min-bound", anoy_lhs, w.smallest_root));

    // (d) e^2 comparison of the smallest roots across measures
    {
      double factor = 1.0;
      if (!hatted) {
        const double r = op_norm_sq / schedule.alpha(n);
        factor = std::max(r * r, 1.0);
      } else if (n % 2 == 0) {
        const double r = op_norm_sq / schedule.alpha(n / 2);
        factor = std::max(r * r, 1.0);
      }
      const double e2 = std::exp(2.0);
      report.items.push_back(
          inequalityItem(tag + ":e2-bound", p_prev.roots[0], e2 * factor * rn_low[0]));
    }

    // (e) lambda_{1,k} >= |p_k'(0)|^{-1}
    {
      double margin = 1.0;
      for (const auto& p : polys_n)
        margin = std::min(margin, relMargin(1.0 / std::abs(p.derivativeAtZero()), p.roots[0]));
      CheckItem item;
      item.name = tag + ":first-root-derivative";
      item.margin = margin;
      item.pass = margin >= -kRelSlack;
      report.items.push_back(item);
    }
  }
  return report;
}

CheckReport checkEnergyIdentity(const SpectralProblem& problem, const AlphaSchedule& schedule,
                                int n, bool hatted) {
  CheckReport report;
  const std::string tag = (hatted ? "hat:" : "") + std::string("energy:n=") + std::to_string(n);
  if (n < 2) {
    report.items.push_back(skippedItem(tag, "needs n >= 2"));
    return report;
  }
  const DiscreteMeasure meas_n = residualMeasure(problem, schedule, n, hatted);
  if (n > std::min<int>(kDegreeCap, meas_n.kappa)) {
    report.items.push_back(skippedItem(tag, "degenerate (kappa or degree cap)"));
    return report;
  }
  const DiscreteMeasure meas_nm1 = residualMeasure(problem, schedule, n - 1, hatted);
  const ResidualPolynomial p_prev =
      orthonormalResidualPolys(meas_nm1, n - 1)[static_cast<std::size_t>(n - 2)];
  const ResidualPolynomial p_curr =
      orthonormalResidualPolys(meas_n, n)[static_cast<std::size_t>(n - 1)];

  double lhs = 0.0;
  for (Eigen::Index i = 0; i < meas_n.nodes.size(); ++i) {
    const double l = meas_n.nodes[i];
    const double wv = (p_prev(l) - p_curr(l)) / l;
    const double g = hatted ? schedule.evalGHat(n - 1, l) : schedule.evalG(n - 1, l);
    lhs += l * wv * g * wv * g * meas_n.data_mass[i];
  }

  const double pi = p_prev.derivativeAtZero() - p_curr.derivativeAtZero();
  const SolverPair run = runSolverPair(problem, schedule, n, hatted);
  double factor = 0.0;
  if (!hatted) {
    factor = 1.0 / (schedule.alpha(n) * schedule.alpha(n));
  } else if (n % 2 == 0) {
    factor = 1.0 / (schedule.alpha(n / 2) * schedule.alpha(n / 2));
  }
  const double rhs = pi * (run.rho_nm1 * run.rho_nm1 - run.rho_n * run.rho_n) +
                     factor * run.normal_residual_sq;

  CheckItem item;
  item.name = tag;
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  item.margin = kRelSlack - std::abs(lhs - rhs) / scale;
  item.pass = std::abs(lhs - rhs) <= kRelSlack * scale;
  report.items.push_back(item);
  report.items.push_back(inequalityItem(tag + ":sign", -kRelSlack * scale, rhs));
  return report;
}

CheckReport verifyResidualFactorization(const SpectralProblem& problem,
                                        const AlphaSchedule& schedule, int n, bool hatted,
                                        int competitors, std::uint64_t seed) {
  CheckReport report;
  const std::string tag = (hatted ? "hat:" : "") + std::string("factorization:n=") + std::to_string(n);
  const DiscreteMeasure meas = residualMeasure(problem, schedule, n, hatted);
  if (n > std::min<int>(kDegreeCap, meas.kappa)) {
    report.items.push_back(skippedItem(tag, "degenerate (kappa or degree cap)"));
    return report;
  }
  const ResidualPolynomial p_n =
      orthonormalResidualPolys(meas, n)[static_cast<std::size_t>(n - 1)];

  CanonicalProblem cp = canonicalProblem(problem);
  const AggregationResult res = hatted ? factorizedRatCg(*cp.op, cp.y, schedule, n)
                                       : factorizedAggregate(*cp.op, cp.y, schedule, n);
  const Vector actual = cp.y - cp.op->apply(res.x);

  Vector predicted(cp.y.size());
  for (Eigen::Index i = 0; i < cp.y.size(); ++i) {
    const double l = cp.op->singularValues()[i] * cp.op->singularValues()[i];
    const double g = hatted ? schedule.evalGHat(n, l) : schedule.evalG(n, l);
    predicted[i] = p_n(l) * g * cp.y[i];
  }
  const double ynorm = std::max(cp.y.norm(), 1e-300);
  {
    CheckItem item;
    item.name = tag;
    const double mismatch = (actual - predicted).norm() / ynorm;
    item.margin = kRelSlack - mismatch;
    item.pass = mismatch <= kRelSlack;
    report.items.push_back(item);
  }

  // Optimality: no competitor p in P_1^n may produce a smaller weighted
  // residual than the solver.
  const double op_norm_sq = problem.op_norm * problem.op_norm;
  const auto weightedResidual = [&](const std::vector<double>& roots) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < cp.y.size(); ++i) {
      const double l = cp.op->singularValues()[i] * cp.op->singularValues()[i];
      double p = 1.0;
      for (double r : roots) p *= 1.0 - l / r;
      const double g = hatted ? schedule.evalGHat(n, l) : schedule.evalG(n, l);
      sum += p * g * p * g * cp.y[i] * cp.y[i];
    }
    return std::sqrt(sum);
  };

  CounterRng rng = CounterRng(seed).substream(7);
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t draw = 0;
  for (int c = 0; c < competitors; ++c) {
    std::vector<double> roots(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) roots[static_cast<std::size_t>(j)] = rng.uniform(draw++) * op_norm_sq;
    best = std::min(best, weightedResidual(roots));
  }
  best = std::min(best, weightedResidual(std::vector<double>(static_cast<std::size_t>(n), op_norm_sq)));
  report.items.push_back(
      inequalityItem(tag + ":optimality", res.residual_norm, best + kRelSlack * ynorm,
                     "solver residual vs best competitor"));
  return report;
}

CheckReport checkPolynomialInequalities(const ResidualPolynomial& p,
                                        const std::vector<double>& nus, int grid_points) {
  CheckReport report;
  const std::string tag = "poly:k=" + std::to_string(p.degree);
  const double l1 = p.roots[0];
  const double dp0 = std::abs(p.derivativeAtZero());

  double margin_bound = 1.0, margin_quotient = 1.0, margin_weighted = 1.0;
  for (int i = 0; i <= grid_points; ++i) {
    const double x = l1 * i / grid_points;
    const double v = p(x);
    margin_bound = std::min(margin_bound, relMargin(std::abs(v), 1.0));
    if (i > 0) {
      const double quotient = (1.0 - v) / x;
      // 0 <= (1 - p)/x <= |p'(0)|, both sides measured on the |p'(0)| scale
      margin_quotient =
          std::min({margin_quotient, quotient / dp0, (dp0 - quotient) / dp0});
    }
    if (i < grid_points) {
      const double xw = l1 * (1.0 - 1e-6) * i / grid_points;
      const double vw = p(xw);
      margin_weighted = std::min(margin_weighted, relMargin(vw * vw * l1 / (l1 - xw), 1.0));
    }
  }
  CheckItem bound{tag + ":abs-bound", margin_bound >= -kRelSlack, false, margin_bound, ""};
  CheckItem quo{tag + ":convex-quotient", margin_quotient >= -kRelSlack, false, margin_quotient, ""};
  CheckItem wei{tag + ":weighted-bound", margin_weighted >= -kRelSlack, false, margin_weighted, ""};
  report.items.push_back(bound);
  report.items.push_back(quo);
  report.items.push_back(wei);

  for (double nu : nus) {
    const double cap = std::pow(nu, nu) * std::pow(dp0, -nu);
    double margin = 1.0;
    for (int i = 0; i < grid_points; ++i) {
      const double x = l1 * (1.0 - 1e-6) * i / grid_points;
      const double v = p(x);
      margin = std::min(margin, relMargin(v * v * l1 / (l1 - x) * std::pow(x, nu), cap));
    }
    CheckItem item;
    item.name = tag + ":weighted-nu=" + std::to_string(nu);
    item.margin = margin;
    item.pass = margin >= -kRelSlack;
    report.items.push_back(item);
  }
  return report;
}

}  // namespace ratreg
