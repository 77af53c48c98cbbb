#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qma/hessians.hpp"
#include "qma/poly_forms.hpp"
#include "test_support.hpp"

using namespace qma;

using P = Polynomial<ExactComplex>;

namespace {

std::vector<double> random_point(std::size_t n, std::mt19937_64& rng, double scale = 0.5) {
  std::normal_distribution<double> d(0.0, scale);
  std::vector<double> x(4 * n);
  for (auto& v : x) v = d(rng);
  return x;
}

double sq(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

ScalarField radial(std::size_t n, std::function<double(double)> g, Domain dom = Domain::whole()) {
  return {n, [g](const std::vector<double>& x) { return g(sq(x)); }, dom};
}

P norm2(std::size_t vars) {
  P p(vars);
  for (std::size_t i = 0; i < vars; ++i) p += P::z(vars, i) * P::zbar(vars, i);
  return p;
}

// Exact quaternionic Hessian of a polynomial at x, through the symbolic complex split.
HyperhermitianMatrix exact_quat_hessian(const P& u, std::size_t n, const std::vector<double>& x) {
  std::vector<P> g, h;
  quat_hessian_split(u, n, g, h);
  const auto z = complex_coordinates(x);
  std::vector<Quaternion> e(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    e[i] = Quaternion::from_split(g[i].cast<Complex>().evaluate(z), h[i].cast<Complex>().evaluate(z));
  }
  return HyperhermitianMatrix::symmetrized(n, e);
}

double max_entry_diff(const HyperhermitianMatrix& a, const HyperhermitianMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) m = std::max(m, max_abs_diff(a.entries()[i], b.entries()[i]));
  return m;
}

// Random positive semidefinite Hermitian matrix of size m, rank r.
ComplexMatrix random_psd(Eigen::Index m, Eigen::Index r, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  ComplexMatrix x(r, m);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < m; ++j) x(i, j) = Complex(d(rng), d(rng));
  return x.adjoint() * x;
}

// sum A_ij z_i zb_j + 2 Re sum B_ij z_i z_j, real for Hermitian A.
Polynomial<Complex> quadratic_from(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t m = static_cast<std::size_t>(a.rows());
  using CP = Polynomial<Complex>;
  CP p(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      p += a(ii, jj) * (CP::z(m, i) * CP::zbar(m, j));
      p += b(ii, jj) * (CP::z(m, i) * CP::z(m, j));
      p += std::conj(b(ii, jj)) * (CP::zbar(m, i) * CP::zbar(m, j));
    }
  }
  return p;
}

ComplexMatrix random_complex(Eigen::Index m, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  ComplexMatrix x(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) x(i, j) = Complex(d(rng), d(rng));
  return x;
}

}  // namespace

TEST(RealHessian, Quadratics) {
  const ScalarField u = radial(1, [](double s) { return s; });
  const std::vector<double> p{0.1, -0.2, 0.3, 0.4};
  EXPECT_LT((real_hessian(u, p) - 2.0 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-8);

  const ScalarField v{1, [](const std::vector<double>& x) { return x[0] * x[1]; }, Domain::whole()};
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(4, 4);
  expect(0, 1) = expect(1, 0) = 1.0;
  EXPECT_LT((real_hessian(v, p) - expect).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(RealHessian, NormFourthIsSecondOrder) {
  // s^2: d_a d_b = 8 x_a x_b + 4 s delta_ab
  const ScalarField u = radial(2, [](double s) { return s * s; });
  std::mt19937_64 rng(3);
  const auto p = random_point(2, rng);
  Eigen::MatrixXd exact(8, 8);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) exact(a, b) = 8.0 * p[a] * p[b] + (a == b ? 4.0 * sq(p) : 0.0);
  const double e1 = (real_hessian(u, p, {2e-3}) - exact).cwiseAbs().maxCoeff();
  const double e2 = (real_hessian(u, p, {1e-3}) - exact).cwiseAbs().maxCoeff();
  EXPECT_LT(e1, 1e-4);
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.3);
}

TEST(RealHessian, Errors) {
  const ScalarField u = radial(1, [](double s) { return s; }, Domain::ball(1.0));
  EXPECT_THROW(real_hessian(u, {0.0, 0.0, 0.0}), InputError);
  EXPECT_THROW(real_hessian(u, {0.999, 0.0, 0.0, 0.0}), InputError);
  EXPECT_THROW(real_hessian(u, {0.0, 0.0, 0.0, 0.0}, {0.0}), InputError);
  const ScalarField bad = radial(1, [](double) { return std::nan(""); });
  EXPECT_THROW(real_hessian(bad, {0.0, 0.0, 0.0, 0.0}), NumericalError);
}

TEST(ComplexHessian, Examples) {
  const std::vector<double> p{0.3, -0.1, 0.2, 0.5, -0.4, 0.1, 0.0, 0.2};
  const ScalarField u = radial(2, [](double s) { return s; });
  EXPECT_LT((complex_hessian(u, p) - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-8);

  Polynomial<Complex> re_z0sq(4);
  re_z0sq += Polynomial<Complex>::z(4, 0) * Polynomial<Complex>::z(4, 0);
  re_z0sq += Polynomial<Complex>::zbar(4, 0) * Polynomial<Complex>::zbar(4, 0);
  EXPECT_LT(complex_hessian(field_from_polynomial(re_z0sq), p).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(ComplexHessian, RecoversKnownHermitianMatrix) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index m = 2 * (1 + t % 3);
    const ComplexMatrix x = random_complex(m, rng);
    const ComplexMatrix a = 0.5 * (x + x.adjoint());
    const ComplexMatrix b = 0.5 * random_complex(m, rng);
    const auto u = field_from_polynomial(quadratic_from(a, b));
    const auto c = complex_hessian(u, random_point(static_cast<std::size_t>(m / 2), rng));
    EXPECT_LT((c - a).cwiseAbs().maxCoeff(), 1e-7);
  }
}

TEST(QuatHessian, NormSquaredIsEightIdentity) {
  std::mt19937_64 rng(7);
  for (std::size_t n = 1; n <= 3; ++n) {
    const ScalarField u = radial(n, [](double s) { return s; });
    const auto p = random_point(n, rng);
    const auto eight = 8.0 * HyperhermitianMatrix::identity(n);
    EXPECT_LT(max_entry_diff(quat_hessian_direct(u, p), eight), 1e-7);
    EXPECT_LT(max_entry_diff(quat_hessian_via_complex(u, p), eight), 1e-7);
    double expect = 1.0;
    for (std::size_t k = 1; k <= n; ++k) expect *= 2.0 * static_cast<double>(k);
    EXPECT_NEAR(qma_density(u, p), expect, 1e-6 * expect);
  }
}

TEST(QuatHessian, SingleCoordinateDependence) {
  const ScalarField u{2, [](const std::vector<double>& x) { return std::pow(x[0], 4); }, Domain::whole()};
  const std::vector<double> p{0.5, 0.1, 0.2, 0.3, -0.1, 0.2, 0.3, 0.4};
  const auto h = quat_hessian_direct(u, p, {1e-4});
  EXPECT_NEAR(h(0, 0).w, 12.0 * 0.25, 1e-6);
  EXPECT_TRUE(h(0, 0).is_real());
  for (std::size_t i = 1; i < 4; ++i) EXPECT_LT(h.entries()[i].norm(), 1e-6);
}

TEST(QuatHessian, FundamentalSolutionIsHarmonicInOneVariable) {
  // n = 1: the 1x1 quaternionic Hessian is the R^4 Laplacian, and -1/|x|^2 is harmonic.
  const ScalarField u = radial(1, [](double s) { return -1.0 / s; });
  const std::vector<double> p{0.5, 0.5, 0.5, 0.5};
  const double e1 = std::abs(quat_hessian_direct(u, p, {4e-3})(0, 0).w);
  const double e2 = std::abs(quat_hessian_direct(u, p, {2e-3})(0, 0).w);
  EXPECT_LT(e2, 1e-4);
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.3);
}

TEST(QuatHessian, FundamentalSolutionHasZeroDensityAwayFromOrigin) {
  std::mt19937_64 rng(11);
  for (std::size_t n = 2; n <= 3; ++n) {
    const ScalarField u = radial(n, [](double s) { return -1.0 / s; });
    for (int t = 0; t < 5; ++t) {
      auto p = random_point(n, rng);
      const double r = std::sqrt(sq(p));
      for (auto& v : p) v /= r;  // unit sphere
      EXPECT_LT(std::abs(qma_density(u, p, {1e-3})), 1e-3) << n;
    }
  }
}

TEST(QuatHessian, RoutesAgreeOnQuadratics) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 3);
    const P u = random_real_quadratic(rng, 2 * n);
    const auto f = field_from_polynomial(u);
    const auto p = random_point(n, rng);
    const auto direct = quat_hessian_direct(f, p);
    EXPECT_LT(max_entry_diff(direct, quat_hessian_via_complex(f, p)), 1e-9);
    EXPECT_LT(max_entry_diff(direct, exact_quat_hessian(u, n, p)), 1e-6);
  }
}

TEST(QuatHessian, RichardsonOrderOnQuartics) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 12; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 3);
    const P u = norm2(2 * n) * norm2(2 * n) + random_real_polynomial(rng, 2 * n, 4, 6);
    const auto f = field_from_polynomial(u);
    const auto p = random_point(n, rng);
    const auto exact = exact_quat_hessian(u, n, p);
    const double e1 = max_entry_diff(quat_hessian_direct(f, p, {4e-3}), exact);
    const double e2 = max_entry_diff(quat_hessian_direct(f, p, {2e-3}), exact);
    EXPECT_NEAR(e1 / e2, 4.0, 0.8) << "t=" << t;
    const double c1 = max_entry_diff(quat_hessian_via_complex(f, p, {4e-3}), exact);
    const double c2 = max_entry_diff(quat_hessian_via_complex(f, p, {2e-3}), exact);
    EXPECT_NEAR(std::log2(c1 / c2), 2.0, 0.3) << "t=" << t;
  }
}

TEST(QmaDensity, ConstantForQuadraticsAndMatchesForms) {
  std::mt19937_64 rng(19);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int t = 0; t < 5; ++t) {
      const P u = random_real_quadratic(rng, 2 * n);
      const double top = to_complex(qma_form_power(u, n).top_coefficient().coefficient(Monomial{})).real();
      const auto f = field_from_polynomial(u);
      // Central differences are exact on quadratics for any h; a wide step keeps round-off small.
      for (int k = 0; k < 5; ++k) {
        const double d = qma_density(f, random_point(n, rng), {0.25});
        EXPECT_LT(std::abs(d - top), 1e-10 * std::max(1.0, std::abs(top))) << "n=" << n;
      }
    }
  }
}

TEST(Cpr, NormSquared) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const ScalarField u = radial(n, [](double s) { return s; });
    const CprResult r = cpr_check(u, std::vector<double>(4 * n, 0.1));
    EXPECT_NEAR(r.lhs, std::pow(8.0, 2.0 * n), 1e-5 * std::pow(8.0, 2.0 * n));
    EXPECT_NEAR(r.rhs, std::pow(4.0, 2.0 * n), 1e-5 * std::pow(4.0, 2.0 * n));
    EXPECT_TRUE(r.holds);
  }
}

TEST(Cpr, RandomPshQuadratics) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 90; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 3);
    const auto m = static_cast<Eigen::Index>(2 * n);
    const ComplexMatrix a = random_psd(m, 1 + t % m, rng);
    const auto u = field_from_polynomial(quadratic_from(a, 0.5 * random_complex(m, rng)));
    EXPECT_TRUE(cpr_check(u, random_point(n, rng)).holds) << t;
  }
}

TEST(Cpr, PluriharmonicHasZeroRightSide) {
  Polynomial<Complex> p(2);
  p += Polynomial<Complex>::z(2, 0) * Polynomial<Complex>::z(2, 1);
  p += Polynomial<Complex>::zbar(2, 0) * Polynomial<Complex>::zbar(2, 1);
  const CprResult r = cpr_check(field_from_polynomial(p), {0.1, 0.2, 0.3, 0.4});
  EXPECT_NEAR(r.rhs, 0.0, 1e-6);
  EXPECT_TRUE(r.holds);
}

TEST(Cpr, RejectsNonPlurisubharmonic) {
  const ScalarField u = radial(1, [](double s) { return -s; });
  EXPECT_THROW(cpr_check(u, {0.1, 0.2, 0.3, 0.4}), InputError);
}
