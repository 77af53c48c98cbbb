#pragma once

// Hyperhermitian matrices, the complex embedding psi, Pfaffians and the Moore
// determinant.
//
// A quaternionic matrix M is split as M = G + j H with G, H complex. Its
// embedding psi(M) = [[G, -conj(H)], [H, conj(G)]] is a ring homomorphism into
// complex 2n x 2n matrices; for hyperhermitian M it is Hermitian and every
// eigenvalue appears twice. With J = [[0, -I], [I, 0]] the product J psi(M) is
// skew-symmetric and its Pfaffian, normalised by Pf(J), is the Moore
// determinant.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qma/error.hpp"
#include "qma/quaternion.hpp"

namespace qma {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr std::size_t kMaxQuatDim = 8;
inline constexpr std::size_t kMaxPfaffianDim = 2 * kMaxQuatDim;
inline constexpr std::size_t kMaxExpansionDim = 8;

class HyperhermitianMatrix {
 public:
  HyperhermitianMatrix() = default;

  /// Validates the hyperhermitian invariants. `tol` is an absolute tolerance
  /// scaled by max(1, |entry|); violations name the offending index pair.
  static HyperhermitianMatrix from_entries(std::size_t n, std::vector<Quaternion> entries,
                                           double tol = 0.0) {
    check_shape(n, entries.size());
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t k = l; k < n; ++k) {
        const Quaternion& a = entries[l * n + k];
        const Quaternion& b = entries[k * n + l];
        if (!a.is_finite() || !b.is_finite()) {
          throw InputError(pair_message("non-finite entry at", l, k));
        }
        const double scale = std::max({1.0, a.norm(), b.norm()});
        if (l == k) {
          if (std::max({std::abs(a.x), std::abs(a.y), std::abs(a.z)}) > tol * scale) {
            throw InputError(pair_message("diagonal entry has a non-real part at", l, k));
          }
          entries[l * n + k] = Quaternion(a.w);
        } else if (max_abs_diff(a, b.conj()) > tol * scale) {
          throw InputError(pair_message("entries are not quaternionic conjugates at", l, k));
        }
      }
    }
    // Snap to the exact structure so that psi is exactly Hermitian.
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t k = l + 1; k < n; ++k) entries[k * n + l] = entries[l * n + k].conj();
    }
    return HyperhermitianMatrix(n, std::move(entries));
  }

  /// Projects an arbitrary quaternionic matrix onto the hyperhermitian ones by
  /// averaging with its conjugate transpose (used on finite-difference output).
  static HyperhermitianMatrix symmetrized(std::size_t n, const std::vector<Quaternion>& entries) {
    check_shape(n, entries.size());
    std::vector<Quaternion> out(n * n);
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t k = 0; k < n; ++k) {
        out[l * n + k] = 0.5 * (entries[l * n + k] + entries[k * n + l].conj());
      }
      out[l * n + l] = Quaternion(out[l * n + l].w);
    }
    return HyperhermitianMatrix(n, std::move(out));
  }

  static HyperhermitianMatrix identity(std::size_t n) {
    return diagonal(std::vector<double>(n, 1.0));
  }

  static HyperhermitianMatrix diagonal(const std::vector<double>& d) {
    const std::size_t n = d.size();
    check_shape(n, n * n);
    std::vector<Quaternion> e(n * n);
    for (std::size_t l = 0; l < n; ++l) e[l * n + l] = Quaternion(d[l]);
    return HyperhermitianMatrix(n, std::move(e));
  }

  std::size_t n() const { return n_; }
  const Quaternion& operator()(std::size_t l, std::size_t k) const { return entries_[l * n_ + k]; }
  const std::vector<Quaternion>& entries() const { return entries_; }

  friend HyperhermitianMatrix operator+(const HyperhermitianMatrix& a, const HyperhermitianMatrix& b) {
    if (a.n_ != b.n_) throw InputError("hyperhermitian sum: dimension mismatch");
    std::vector<Quaternion> e(a.entries_.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = a.entries_[i] + b.entries_[i];
    return HyperhermitianMatrix(a.n_, std::move(e));
  }

  friend HyperhermitianMatrix operator*(double s, const HyperhermitianMatrix& a) {
    std::vector<Quaternion> e(a.entries_);
    for (auto& q : e) q *= s;
    return HyperhermitianMatrix(a.n_, std::move(e));
  }

 private:
  HyperhermitianMatrix(std::size_t n, std::vector<Quaternion> e) : n_(n), entries_(std::move(e)) {}

  static void check_shape(std::size_t n, std::size_t count) {
    if (n == 0) throw InputError("hyperhermitian matrix: n must be positive");
    if (n > kMaxQuatDim) throw InputError("hyperhermitian matrix: n exceeds " + std::to_string(kMaxQuatDim));
    if (count != n * n) {
      throw InputError("hyperhermitian matrix: expected " + std::to_string(n * n) + " entries, got " +
                       std::to_string(count));
    }
  }

  static std::string pair_message(const char* what, std::size_t l, std::size_t k) {
    std::ostringstream os;
    os << "hyperhermitian matrix: " << what << " (" << l << ", " << k << ")";
    return os.str();
  }

  std::size_t n_ = 0;
  std::vector<Quaternion> entries_;
};

/// psi(G + jH) = [[G, -conj(H)], [H, conj(G)]].
inline ComplexMatrix psi_embed(const HyperhermitianMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.n());
  ComplexMatrix out(2 * n, 2 * n);
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const Quaternion& q = m(static_cast<std::size_t>(l), static_cast<std::size_t>(k));
      const Complex g = q.complex_part();
      const Complex h = q.j_part();
      out(l, k) = g;
      out(l, n + k) = -std::conj(h);
      out(n + l, k) = h;
      out(n + l, n + k) = std::conj(g);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Skew-symmetric matrices and Pfaffians

template <class T>
class SkewMatrix {
 public:
  /// Row-major m x m input; requires A^T = -A and an exactly zero diagonal.
  static SkewMatrix from_rows(std::size_t m, std::vector<T> a) {
    if (a.size() != m * m) throw InputError("skew matrix: entry count does not match dimension");
    for (std::size_t i = 0; i < m; ++i) {
      if (!(a[i * m + i] == T(0))) throw InputError("skew matrix: non-zero diagonal at " + std::to_string(i));
      for (std::size_t j = i + 1; j < m; ++j) {
        if (!(a[i * m + j] == -a[j * m + i])) {
          throw InputError("skew matrix: not skew-symmetric at (" + std::to_string(i) + ", " +
                           std::to_string(j) + ")");
        }
      }
    }
    return SkewMatrix(m, std::move(a));
  }

  template <class Derived>
  static SkewMatrix from_eigen(const Eigen::MatrixBase<Derived>& a) {
    if (a.rows() != a.cols()) throw InputError("skew matrix: not square");
    const auto m = static_cast<std::size_t>(a.rows());
    std::vector<T> e(m * m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        e[i * m + j] = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
    return from_rows(m, std::move(e));
  }

  std::size_t dim() const { return m_; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * m_ + j]; }
  const std::vector<T>& data() const { return a_; }

 private:
  SkewMatrix(std::size_t m, std::vector<T> a) : m_(m), a_(std::move(a)) {}
  std::size_t m_ = 0;
  std::vector<T> a_;
};

namespace detail {

inline void check_pfaffian_dim(std::size_t m, std::size_t cap) {
  if (m % 2 != 0) throw InputError("pfaffian: odd dimension " + std::to_string(m));
  if (m > cap) throw InputError("pfaffian: dimension " + std::to_string(m) + " exceeds " + std::to_string(cap));
}

template <class T>
T pfaffian_expand(const SkewMatrix<T>& a, std::vector<std::size_t>& idx) {
  if (idx.empty()) return T(1);
  const std::size_t first = idx[0];
  T sum(0);
  std::vector<std::size_t> rest;
  rest.reserve(idx.size() - 2);
  for (std::size_t p = 1; p < idx.size(); ++p) {
    const T& entry = a(first, idx[p]);
    if (entry == T(0)) continue;
    rest.clear();
    for (std::size_t r = 1; r < idx.size(); ++r) {
      if (r != p) rest.push_back(idx[r]);
    }
    T term = entry * pfaffian_expand(a, rest);
    if (p % 2 == 1) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return sum;
}

}  // namespace detail

/// Recursive expansion along the first row. Exact for exact scalar types.
template <class T>
T pfaffian_expansion(const SkewMatrix<T>& a) {
  detail::check_pfaffian_dim(a.dim(), kMaxPfaffianDim);
  std::vector<std::size_t> idx(a.dim());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return detail::pfaffian_expand(a, idx);
}

/// Skew Gaussian elimination with 2x2 pivots and full pivoting: each step
/// moves the largest remaining |a_pq| to position (k, k+1) and replaces the
/// trailing block by the Schur complement C + B^T P^{-1} B.
template <class T>
T pfaffian_elimination(const SkewMatrix<T>& skew) {
  const std::size_t m = skew.dim();
  detail::check_pfaffian_dim(m, kMaxPfaffianDim);
  std::vector<T> a = skew.data();
  auto at = [&](std::size_t i, std::size_t j) -> T& { return a[i * m + j]; };
  auto swap_index = [&](std::size_t p, std::size_t q) {
    for (std::size_t c = 0; c < m; ++c) std::swap(at(p, c), at(q, c));
    for (std::size_t r = 0; r < m; ++r) std::swap(at(r, p), at(r, q));
  };

  T result(1);
  for (std::size_t k = 0; k + 1 < m; k += 2) {
    std::size_t bp = k;
    std::size_t bq = k + 1;
    double best = -1.0;
    for (std::size_t p = k; p < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        const double v = std::abs(at(p, q));
        if (v > best) {
          best = v;
          bp = p;
          bq = q;
        }
      }
    }
    if (best == 0.0) return T(0);
    if (bp != k) {
      swap_index(k, bp);
      result = -result;
      if (bq == k) bq = bp;
    }
    if (bq != k + 1) {
      swap_index(k + 1, bq);
      result = -result;
    }
    const T pivot = at(k, k + 1);
    result *= pivot;
    for (std::size_t i = k + 2; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const T upd = (at(k + 1, i) * at(k, j) - at(k, i) * at(k + 1, j)) / pivot;
        at(i, j) += upd;
        at(j, i) = -at(i, j);
      }
    }
  }
  return result;
}

template <class T>
concept PivotableScalar = requires(T a) {
  { std::abs(a) } -> std::convertible_to<double>;
  a / a;
};

/// Expansion for m <= 8, elimination above (when the scalar type supports it).
template <class T>
T pfaffian(const SkewMatrix<T>& a) {
  if constexpr (PivotableScalar<T>) {
    if (a.dim() > kMaxExpansionDim) return pfaffian_elimination(a);
  }
  return pfaffian_expansion(a);
}

// ---------------------------------------------------------------------------
// Moore determinant

/// Pf of J = [[0, -I_n], [I_n, 0]]; equals (-1)^{n(n+1)/2}.
constexpr int pfaffian_of_symplectic_unit(std::size_t n) {
  return ((n * (n + 1) / 2) % 2 == 0) ? 1 : -1;
}

/// J psi(M) from the complex split of M, for any complex scalar type C with
/// an ADL-visible conj(). G and H are row-major n x n.
template <class C>
SkewMatrix<C> moore_skew_representative(std::size_t n, const std::vector<C>& g, const std::vector<C>& h) {
  using std::conj;
  const std::size_t m = 2 * n;
  std::vector<C> a(m * m, C(0));
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < n; ++k) {
      const C& gv = g[l * n + k];
      const C& hv = h[l * n + k];
      // J psi = [[-H, -conj(G)], [G, -conj(H)]]
      a[l * m + k] = -hv;
      a[l * m + n + k] = -conj(gv);
      a[(n + l) * m + k] = gv;
      a[(n + l) * m + n + k] = -conj(hv);
    }
  }
  return SkewMatrix<C>::from_rows(m, std::move(a));
}

template <class C>
C moore_det_from_split(std::size_t n, const std::vector<C>& g, const std::vector<C>& h) {
  const C pf = pfaffian(moore_skew_representative(n, g, h));
  return pfaffian_of_symplectic_unit(n) == 1 ? pf : -pf;
}

inline void split_hyperhermitian(const HyperhermitianMatrix& m, std::vector<Complex>& g, std::vector<Complex>& h) {
  const std::size_t n = m.n();
  g.resize(n * n);
  h.resize(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    g[i] = m.entries()[i].complex_part();
    h[i] = m.entries()[i].j_part();
  }
}

/// Moore determinant via the Pfaffian of J psi(M).
inline double moore_det(const HyperhermitianMatrix& m) {
  std::vector<Complex> g;
  std::vector<Complex> h;
  split_hyperhermitian(m, g, h);
  return moore_det_from_split(m.n(), g, h).real();
}

/// Moore determinant via the doubled spectrum of psi(M): sort, pair adjacent
/// eigenvalues, multiply one value per pair.
inline double moore_det_eigen(const HyperhermitianMatrix& m, double pair_tol = 1e-8) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(psi_embed(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("moore_det_eigen: eigen-decomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  const double radius = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  double det = 1.0;
  for (Eigen::Index i = 0; i + 1 < ev.size(); i += 2) {
    if (std::abs(ev(i) - ev(i + 1)) > pair_tol * std::max(radius, 1e-300)) {
      std::ostringstream os;
      os << "moore_det_eigen: eigenvalues " << ev(i) << " and " << ev(i + 1)
         << " do not pair (hyperhermitian structure broken)";
      throw NumericalError(os.str());
    }
    det *= 0.5 * (ev(i) + ev(i + 1));
  }
  return det;
}

struct MooreDeterminant {
  double pfaffian_route = 0.0;
  double eigen_route = 0.0;
  double relative_gap = 0.0;
};

/// Both routes; throws when they disagree beyond `rel_tol` (relative to the
/// spectral scale |lambda_max|^n so that near-singular inputs are not flagged).
inline MooreDeterminant moore_det_cross_checked(const HyperhermitianMatrix& m, double rel_tol = 1e-10) {
  MooreDeterminant out;
  out.pfaffian_route = moore_det(m);
  out.eigen_route = moore_det_eigen(m);
  const double scale = std::max({std::abs(out.pfaffian_route), std::abs(out.eigen_route), 1e-300});
  out.relative_gap = std::abs(out.pfaffian_route - out.eigen_route) / scale;
  if (out.relative_gap > rel_tol) {
    std::ostringstream os;
    os << "moore_det: routes disagree, pfaffian " << out.pfaffian_route << " vs eigen " << out.eigen_route;
    throw NumericalError(os.str());
  }
  return out;
}

inline Eigen::VectorXd psi_spectrum(const HyperhermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(psi_embed(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("psi_spectrum: eigen-decomposition failed");
  return es.eigenvalues();
}

/// All eigenvalues of psi(M) >= -1e-12 * spectral radius.
inline bool is_hyperhermitian_positive(const HyperhermitianMatrix& m, double rel_tol = 1e-12) {
  const Eigen::VectorXd ev = psi_spectrum(m);
  const double radius = ev.cwiseAbs().maxCoeff();
  return ev(0) >= -rel_tol * radius;
}

inline bool is_hyperhermitian_strictly_positive(const HyperhermitianMatrix& m, double rel_tol = 1e-12) {
  const Eigen::VectorXd ev = psi_spectrum(m);
  const double radius = ev.cwiseAbs().maxCoeff();
  return ev(0) > rel_tol * radius;
}

// Seeded generators

inline Quaternion random_quaternion(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  return {d(rng), d(rng), d(rng), d(rng)};
}

/// Gaussian entries above the diagonal, real Gaussian diagonal.
inline HyperhermitianMatrix random_hyperhermitian(std::size_t n, std::mt19937_64& rng) {
  std::vector<Quaternion> e(n * n);
  std::normal_distribution<double> d(0.0, 1.0);
  for (std::size_t l = 0; l < n; ++l) {
    e[l * n + l] = Quaternion(d(rng));
    for (std::size_t k = l + 1; k < n; ++k) {
      e[l * n + k] = random_quaternion(rng);
      e[k * n + l] = e[l * n + k].conj();
    }
  }
  return HyperhermitianMatrix::from_entries(n, std::move(e));
}

/// X^* X + shift * I for a random quaternionic X; positive definite for shift > 0.
inline HyperhermitianMatrix random_positive_hyperhermitian(std::size_t n, std::mt19937_64& rng, double shift = 0.1) {
  std::vector<Quaternion> x(n * n);
  for (auto& q : x) q = random_quaternion(rng);
  std::vector<Quaternion> e(n * n);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < n; ++k) {
      Quaternion s;
      for (std::size_t r = 0; r < n; ++r) s += x[r * n + l].conj() * x[r * n + k];
      e[l * n + k] = s;
    }
    e[l * n + l] = Quaternion(e[l * n + l].w + shift);
  }
  return HyperhermitianMatrix::symmetrized(n, e);
}

}  // namespace qma
