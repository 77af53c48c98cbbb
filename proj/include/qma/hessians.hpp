#pragma once

// Finite-difference Hessians of scalar fields on R^{4n} = C^{2n} = H^n.
//
// Real coordinates x_0..x_{4n-1}; complex chart z_j = x_{2j} + (-1)^j x_{2j+1} i;
// quaternionic chart q_l = x_{4l} + x_{4l+1} i + x_{4l+2} j + x_{4l+3} k = z_{2l} + j z_{2l+1}.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qma/error.hpp"
#include "qma/polynomial.hpp"
#include "qma/quat_linalg.hpp"

namespace qma {

struct Domain {
  enum class Kind { Whole, Ball, Box };
  Kind kind = Kind::Whole;
  double radius = 0.0;  // ball radius, or box half-width

  static Domain whole() { return {}; }
  static Domain ball(double r) { return {Kind::Ball, r}; }
  static Domain box(double half_width) { return {Kind::Box, half_width}; }

  /// True if the closed cube of half-width `margin` around p lies in the domain.
  bool contains(const std::vector<double>& p, double margin = 0.0) const {
    switch (kind) {
      case Kind::Whole:
        return true;
      case Kind::Ball: {
        double s = 0.0;
        for (double v : p) s += v * v;
        return std::sqrt(s) + margin * std::sqrt(static_cast<double>(p.size())) <= radius;
      }
      case Kind::Box:
        for (double v : p) {
          if (std::abs(v) + margin > radius) return false;
        }
        return true;
    }
    return false;
  }
};

/// u : R^{4n} -> R. `eval` may be called concurrently.
struct ScalarField {
  std::size_t n = 1;
  std::function<double(const std::vector<double>&)> eval;
  Domain domain;

  std::size_t real_dim() const { return 4 * n; }
};

struct FDConfig {
  double h = 1e-3;
};

/// Real part of a polynomial in z, zb viewed as a field on R^{4n}.
template <class S>
ScalarField field_from_polynomial(const Polynomial<S>& p, Domain domain = Domain::whole()) {
  if (p.vars() == 0 || p.vars() % 2 != 0) throw InputError("field_from_polynomial: need 2n complex variables");
  const auto q = p.template cast<std::complex<double>>();
  return {p.vars() / 2, [q](const std::vector<double>& x) { return q.evaluate(complex_coordinates(x)).real(); },
          domain};
}

namespace hessian_detail {

inline void check_point(const ScalarField& u, const std::vector<double>& p, const FDConfig& cfg) {
  if (!(cfg.h > 0.0)) throw InputError("finite differences: step must be positive");
  if (u.n == 0 || u.n > kMaxQuatDim) throw InputError("scalar field: n out of range");
  if (!u.eval) throw InputError("scalar field: no evaluator");
  if (p.size() != u.real_dim()) {
    throw InputError("point has dimension " + std::to_string(p.size()) + ", expected " +
                     std::to_string(u.real_dim()));
  }
  if (!u.domain.contains(p, 2.0 * cfg.h)) throw InputError("point too close to the domain boundary for the FD stencil");
}

inline double eval_checked(const ScalarField& u, const std::vector<double>& x) {
  const double v = u.eval(x);
  if (!std::isfinite(v)) throw NumericalError("scalar field returned a non-finite value");
  return v;
}

}  // namespace hessian_detail

/// Central second differences, O(h^2); symmetric by construction.
inline Eigen::MatrixXd real_hessian(const ScalarField& u, const std::vector<double>& p, const FDConfig& cfg = {}) {
  using hessian_detail::eval_checked;
  hessian_detail::check_point(u, p, cfg);
  const std::size_t d = u.real_dim();
  const double h = cfg.h;
  Eigen::MatrixXd r(d, d);
  std::vector<double> x = p;
  const double u0 = eval_checked(u, p);
  for (std::size_t a = 0; a < d; ++a) {
    x[a] = p[a] + h;
    const double up = eval_checked(u, x);
    x[a] = p[a] - h;
    const double um = eval_checked(u, x);
    x[a] = p[a];
    r(a, a) = (up - 2.0 * u0 + um) / (h * h);
    for (std::size_t b = a + 1; b < d; ++b) {
      double s = 0.0;
      for (int sa : {1, -1}) {
        for (int sb : {1, -1}) {
          x[a] = p[a] + sa * h;
          x[b] = p[b] + sb * h;
          s += sa * sb * eval_checked(u, x);
        }
      }
      x[a] = p[a];
      x[b] = p[b];
      r(a, b) = r(b, a) = s / (4.0 * h * h);
    }
  }
  return r;
}

/// C_ij = d^2 u / dz_i dzb_j from the real Hessian, with
/// d_zi = (d_x{2i} - i s_i d_x{2i+1}) / 2, d_zbj = (d_x{2j} + i s_j d_x{2j+1}) / 2, s_j = (-1)^j.
inline ComplexMatrix complex_hessian_from_real(const Eigen::MatrixXd& r) {
  const Eigen::Index m = r.rows() / 2;
  ComplexMatrix c(m, m);
  const Complex I(0.0, 1.0);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double si = (i % 2 == 0) ? 1.0 : -1.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double sj = (j % 2 == 0) ? 1.0 : -1.0;
      c(i, j) = 0.25 * (r(2 * i, 2 * j) + I * sj * r(2 * i, 2 * j + 1) - I * si * r(2 * i + 1, 2 * j) +
                        si * sj * r(2 * i + 1, 2 * j + 1));
    }
  }
  return c;
}

inline ComplexMatrix complex_hessian(const ScalarField& u, const std::vector<double>& p, const FDConfig& cfg = {}) {
  return complex_hessian_from_real(real_hessian(u, p, cfg));
}

/// Hess_lk = sum_{a,b} e_a (d^2 u / dx_{4l+a} dx_{4k+b}) conj(e_b), e = (1, i, j, k), unsymmetrized.
inline std::vector<Quaternion> quat_hessian_entries_from_real(const Eigen::MatrixXd& r) {
  static const Quaternion kUnits[4] = {Quaternion::one(), Quaternion::i(), Quaternion::j(), Quaternion::k()};
  const std::size_t n = static_cast<std::size_t>(r.rows()) / 4;
  std::vector<Quaternion> e(n * n);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < n; ++k) {
      Quaternion s;
      for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) {
          s += kUnits[a] * kUnits[b].conj() *
               r(static_cast<Eigen::Index>(4 * l + a), static_cast<Eigen::Index>(4 * k + b));
        }
      }
      e[l * n + k] = s;
    }
  }
  return e;
}

/// G + jH with G_lk = 4(C_{2k,2l} + C_{2l+1,2k+1}), H_lk = 4(C_{2k,2l+1} - C_{2l,2k+1}), unsymmetrized.
inline std::vector<Quaternion> quat_hessian_entries_from_complex(const ComplexMatrix& c) {
  const std::size_t n = static_cast<std::size_t>(c.rows()) / 2;
  std::vector<Quaternion> e(n * n);
  auto at = [&](std::size_t i, std::size_t j) { return c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); };
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex g = 4.0 * (at(2 * k, 2 * l) + at(2 * l + 1, 2 * k + 1));
      const Complex h = 4.0 * (at(2 * k, 2 * l + 1) - at(2 * l, 2 * k + 1));
      e[l * n + k] = Quaternion::from_split(g, h);
    }
  }
  return e;
}

inline HyperhermitianMatrix quat_hessian_direct(const ScalarField& u, const std::vector<double>& p,
                                                const FDConfig& cfg = {}) {
  return HyperhermitianMatrix::symmetrized(u.n, quat_hessian_entries_from_real(real_hessian(u, p, cfg)));
}

inline HyperhermitianMatrix quat_hessian_via_complex(const ScalarField& u, const std::vector<double>& p,
                                                     const FDConfig& cfg = {}) {
  return HyperhermitianMatrix::symmetrized(u.n, quat_hessian_entries_from_complex(complex_hessian(u, p, cfg)));
}

inline double factorial_over_four_pow(std::size_t n) {
  double c = 1.0;
  for (std::size_t k = 1; k <= n; ++k) c *= static_cast<double>(k) / 4.0;
  return c;
}

/// Coefficient of (d d_J u)^n against dz_0 ^ ... ^ dz_{2n-1}: (n!/4^n) moore_det(Hess(u, H)).
inline double qma_density(const ScalarField& u, const std::vector<double>& p, const FDConfig& cfg = {}) {
  return factorial_over_four_pow(u.n) * moore_det(quat_hessian_direct(u, p, cfg));
}

struct CprResult {
  double lhs = 0.0;  // moore_det(Hess(u, H))^2
  double rhs = 0.0;  // 4^{2n} det Hess(u, C)
  bool holds = false;
};

/// Compares the two sides of moore_det(Hess(u,H))^2 >= 4^{2n} det Hess(u,C) for given Hessians.
/// Both sides are bounded by (4 lambda_max)^{2n}, which sets the scale for `tol`.
/// Throws if the complex Hessian has an eigenvalue below -(psd_tol lambda_max + psd_abs).
inline CprResult cpr_compare(const HyperhermitianMatrix& quat, const ComplexMatrix& cplx, double tol = 1e-10,
                             double psd_tol = 1e-8, double psd_abs = 1e-6) {
  const ComplexMatrix herm = 0.5 * (cplx + cplx.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double lmax = ev.cwiseAbs().maxCoeff();
  if (ev.minCoeff() < -(psd_tol * lmax + psd_abs)) {
    throw InputError("cpr_check: complex Hessian is not positive semidefinite (min eigenvalue " +
                     std::to_string(ev.minCoeff()) + ")");
  }
  const double two_n = 2.0 * static_cast<double>(quat.n());
  const double md = moore_det(quat);
  CprResult r;
  r.lhs = md * md;
  r.rhs = std::pow(4.0, two_n) * ev.prod();
  r.holds = r.lhs >= r.rhs - tol * std::pow(4.0 * lmax, two_n);
  return r;
}

inline CprResult cpr_check(const ScalarField& u, const std::vector<double>& p, const FDConfig& cfg = {},
                           double tol = 1e-10) {
  const Eigen::MatrixXd r = real_hessian(u, p, cfg);
  return cpr_compare(HyperhermitianMatrix::symmetrized(u.n, quat_hessian_entries_from_real(r)),
                     complex_hessian_from_real(r), tol);
}

}  // namespace qma
