#pragma once

// Dirichlet problems (d d_J u)^n = f Omega_n on balls in H^n.
//
// Radial data: u(q) = g(||q||^2) with the first integral
//   s^{2n} g'(s)^n = K int_0^s t^{2n-1} f(t) dt,   K = n / (n! 2^{n-1}),
// and g(s) = c - int_s^{R^2} g'.
//
// n = 1: the operator is Delta u / 4, solved on a uniform 4-D grid.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "qma/error.hpp"
#include "qma/models.hpp"
#include "qma/quadrature.hpp"

namespace qma {

struct Sample {
  double radius = 0.0;
  double value = 0.0;
};

struct SolveReport {
  std::string mode;
  std::vector<Sample> samples;
  double residual_sup = 0.0;
  std::size_t iterations = 0;
  double solution_sup = 0.0;
  double wall_time = 0.0;  // seconds
  std::vector<double> residual_history;
};

inline std::vector<double> uniform_radii(double radius, std::size_t count) {
  if (count < 2) throw InputError("sample grid needs at least two points");
  std::vector<double> r(count);
  for (std::size_t i = 0; i < count; ++i) r[i] = radius * static_cast<double>(i) / static_cast<double>(count - 1);
  return r;
}

// ---------------------------------------------------------------------------
// Radial solver

struct RadialProblem {
  std::size_t n = 1;
  double radius = 1.0;
  RealFunction f;  // density as a function of s = ||q||^2, s in (0, R^2]
  double boundary = 0.0;
  double tol = 1e-9;
};

class RadialSolution {
 public:
  explicit RadialSolution(RadialProblem p) : p_(std::move(p)) {
    if (p_.n == 0 || p_.n > kMaxQuatDim) throw InputError("radial problem: n out of range");
    if (!(p_.radius > 0.0) || !std::isfinite(p_.radius)) throw InputError("radial problem: radius must be positive");
    if (!p_.f) throw InputError("radial problem: no density");
    if (!std::isfinite(p_.boundary)) throw InputError("radial problem: boundary value must be finite");
    if (!(p_.tol > 0.0)) throw InputError("radial problem: tolerance must be positive");
    const double r2 = p_.radius * p_.radius;
    for (int k = 1; k <= 1000; ++k) check_density(r2 * k / 1000.0);
    for (int k = 1; k <= 60; ++k) check_density(r2 * std::ldexp(1.0, -k));
    nd_ = static_cast<double>(p_.n);
    k_ = nd_ / (factorial(p_.n) * std::pow(2.0, nd_ - 1.0));
    try {
      build_table();
    } catch (const NumericalError& e) {
      throw InputError(std::string("density is not integrable against t^{2n-1} near 0: ") + e.what());
    }
  }

  const RadialProblem& problem() const { return p_; }
  std::size_t n() const { return p_.n; }

  /// int_0^s t^{2n-1} f(t) dt
  double inner_integral(double s) const {
    if (s <= 0.0) return 0.0;
    const double r2 = p_.radius * p_.radius;
    if (s < nodes_.back()) return integrate_from_zero(weighted(), s, graded_options());
    // start from the tabulated dyadic node just below s
    std::size_t k = 0;
    if (s < r2) {
      k = static_cast<std::size_t>(std::max(0.0, std::floor(std::log2(r2 / s))));
      while (k > 0 && nodes_[k] > s) --k;
      while (k + 1 < nodes_.size() && nodes_[k] > s) ++k;
    }
    return cumulative_[k] + integrate(weighted(), nodes_[k], s, graded_options().rel_tol);
  }

  double dg(double s) const {
    if (s <= 0.0) throw InputError("radial solution: g' needs s > 0");
    const double m = k_ * inner_integral(s);
    return std::pow(std::max(m, 0.0), 1.0 / nd_) / (s * s);
  }

  /// From d/ds(s^{2n} g'^n) = K s^{2n-1} f.
  double d2g(double s) const {
    const double d1 = dg(s);
    if (d1 == 0.0) return 0.0;
    return k_ * density(s) / (nd_ * s * std::pow(d1, nd_ - 1.0)) - 2.0 * d1 / s;
  }

  /// g(s); -infinity if g' is not integrable down to s = 0.
  double g(double s) const {
    const double r2 = p_.radius * p_.radius;
    if (s < 0.0 || s > r2 * (1.0 + 1e-12)) throw InputError("radial solution: s outside [0, R^2]");
    if (s >= r2) return p_.boundary;
    const RealFunction gp = [this](double t) { return dg(t); };
    if (s == 0.0) {
      try {
        // 60 flat pieces stay inside the tabulated range of I
        return p_.boundary - integrate_from_zero(gp, r2, GradedOptions{p_.tol * 1e-2, 400, 3, 60});
      } catch (const NumericalError&) {
        return -std::numeric_limits<double>::infinity();
      }
    }
    // dyadic split towards s keeps g' well resolved when it varies on the scale of s
    double sum = 0.0;
    double hi = r2;
    while (hi > 2.0 * s) {
      sum += integrate(gp, hi * 0.5, hi, p_.tol * 1e-2);
      hi *= 0.5;
    }
    sum += integrate(gp, s, hi, p_.tol * 1e-2);
    return p_.boundary - sum;
  }

  RadialProfile profile() const {
    // copies, so the profile outlives this object
    return {p_.n, [self = *this](double s) { return self.g(s); }, [self = *this](double s) { return self.dg(s); },
            [self = *this](double s) { return self.d2g(s); }};
  }

  /// Density recovered from the solution with a centered difference for g''.
  double recovered_density(double s) const {
    const double eta = 1e-4 * s;
    const double d2 = (dg(s + eta) - dg(s - eta)) / (2.0 * eta);
    return radial_qma_density(p_.n, dg(s), d2, s);
  }

 private:
  double density(double t) const {
    const double v = p_.f(t);
    if (!(v >= 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "density must be finite and non-negative, got " << v << " at s = " << t;
      throw InputError(os.str());
    }
    return v;
  }
  void check_density(double t) const { density(t); }

  RealFunction weighted() const {
    return [this](double t) { return std::pow(t, 2.0 * nd_ - 1.0) * density(t); };
  }
  GradedOptions graded_options() const {
    GradedOptions opt;
    opt.rel_tol = std::min(1e-11, p_.tol * 1e-2);
    return opt;
  }

  // I at the nodes R^2 2^{-k}, k = 0..100
  void build_table() {
    const double r2 = p_.radius * p_.radius;
    constexpr int kLevels = 100;
    nodes_.resize(kLevels + 1);
    cumulative_.resize(kLevels + 1);
    for (int k = 0; k <= kLevels; ++k) nodes_[static_cast<std::size_t>(k)] = std::ldexp(r2, -k);
    cumulative_[kLevels] = integrate_from_zero(weighted(), nodes_[kLevels], graded_options());
    for (int k = kLevels - 1; k >= 0; --k) {
      const auto ku = static_cast<std::size_t>(k);
      cumulative_[ku] = cumulative_[ku + 1] + integrate(weighted(), nodes_[ku + 1], nodes_[ku], graded_options().rel_tol);
    }
  }

  RadialProblem p_;
  double nd_ = 1.0;
  double k_ = 1.0;
  std::vector<double> nodes_;
  std::vector<double> cumulative_;
};

struct RadialSolveResult {
  RadialSolution solution;
  SolveReport report;
};

inline RadialSolveResult solve_radial(const RadialProblem& problem, std::vector<double> radii = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  RadialSolution sol(problem);
  if (radii.empty()) radii = uniform_radii(problem.radius, 101);
  SolveReport rep;
  rep.mode = "radial";
  for (double r : radii) {
    if (r < 0.0 || r > problem.radius) throw InputError("sample radius outside the ball");
    const double v = sol.g(r * r);
    rep.samples.push_back({r, v});
    if (std::isfinite(v)) {
      rep.solution_sup = std::max(rep.solution_sup, std::abs(v));
    } else {
      rep.solution_sup = std::numeric_limits<double>::infinity();
    }
    const double s = r * r;
    if (s > 0.0 && r < problem.radius) {
      const double f = problem.f(s);
      const double res = std::abs(sol.recovered_density(s) - f) / std::max(1.0, f);
      rep.residual_sup = std::max(rep.residual_sup, res);
    }
  }
  rep.iterations = 1;
  rep.residual_history.push_back(rep.residual_sup);
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(sol), std::move(rep)};
}

// ---------------------------------------------------------------------------
// Grid solver, n = 1

using PointFunction = std::function<double(const std::array<double, 4>&)>;

struct GridProblem {
  double radius = 1.0;
  double spacing = 0.125;  // 2R / spacing must be an even integer
  PointFunction f;         // density, Delta u = 4 f
  PointFunction boundary;  // Dirichlet data, evaluated on the sphere
  double tol = 1e-8;
  std::size_t max_iters = 20000;
  std::size_t check_every = 10;
};

struct GridSolution {
  std::size_t points = 0;  // per axis
  double h = 0.0;
  double radius = 0.0;
  std::vector<double> u;                 // full box, exterior nodes hold 0
  std::vector<std::uint32_t> interior;   // indices of unknowns
  SolveReport report;

  std::array<double, 4> coordinates(std::uint32_t idx) const {
    std::array<double, 4> x{};
    for (int a = 3; a >= 0; --a) {
      x[static_cast<std::size_t>(a)] = -radius + h * static_cast<double>(idx % points);
      idx /= static_cast<std::uint32_t>(points);
    }
    return x;
  }
};

namespace grid_detail {

struct IrregularRow {
  std::uint32_t idx = 0;
  std::array<std::int64_t, 8> nb{};  // -1 marks a boundary arm
  std::array<double, 8> w{};
  double constant = 0.0;  // sum of boundary arms minus 4 f
  double diag = 0.0;
};

}  // namespace grid_detail

/// Red-black SOR for Delta u = 4 f on the ball with Shortley-Weller arms at the sphere.
/// The relaxation factor comes from the Jacobi spectral radius 1 - h^2 j_{1,1}^2 / (8 R^2).
inline GridSolution solve_grid_n1(const GridProblem& p) {
  using grid_detail::IrregularRow;
  const auto t0 = std::chrono::steady_clock::now();
  if (!(p.radius > 0.0) || !(p.spacing > 0.0)) throw InputError("grid problem: radius and spacing must be positive");
  if (!p.f || !p.boundary) throw InputError("grid problem: density and boundary data are required");
  const double cells = 2.0 * p.radius / p.spacing;
  const auto ncell = static_cast<long long>(std::llround(cells));
  if (std::abs(cells - static_cast<double>(ncell)) > 1e-9 * cells || ncell % 2 != 0 || ncell < 2) {
    throw InputError("grid problem: 2R/h must be an even integer");
  }
  const std::size_t N = static_cast<std::size_t>(ncell) + 1;
  if (N > 65) throw InputError("grid problem: at most 65 points per axis");
  const double h = 2.0 * p.radius / static_cast<double>(ncell);
  const double R2 = p.radius * p.radius;
  const std::array<std::size_t, 4> stride{N * N * N, N * N, N, 1};

  GridSolution out;
  out.points = N;
  out.h = h;
  out.radius = p.radius;
  out.u.assign(N * N * N * N, 0.0);

  std::vector<std::uint32_t> reg_idx[2];
  std::vector<double> reg_rhs[2];
  std::vector<IrregularRow> irr[2];
  double f_sup = 0.0;

  auto coord = [&](std::size_t i) { return -p.radius + h * static_cast<double>(i); };
  auto norm2 = [](const std::array<double, 4>& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]; };
  auto inside = [&](const std::array<double, 4>& x) { return norm2(x) < R2 * (1.0 - 1e-12); };

  std::array<double, 4> x{};
  for (std::size_t i0 = 0; i0 < N; ++i0) {
    x[0] = coord(i0);
    for (std::size_t i1 = 0; i1 < N; ++i1) {
      x[1] = coord(i1);
      for (std::size_t i2 = 0; i2 < N; ++i2) {
        x[2] = coord(i2);
        for (std::size_t i3 = 0; i3 < N; ++i3) {
          x[3] = coord(i3);
          if (!inside(x)) continue;
          const std::size_t idx = i0 * stride[0] + i1 * stride[1] + i2 * stride[2] + i3;
          const int color = static_cast<int>((i0 + i1 + i2 + i3) % 2);
          const double fv = p.f(x);
          if (!std::isfinite(fv) || fv < 0.0) throw InputError("grid problem: density must be finite and non-negative");
          f_sup = std::max(f_sup, 4.0 * fv);
          out.interior.push_back(static_cast<std::uint32_t>(idx));

          bool regular = true;
          for (int a = 0; a < 4 && regular; ++a) {
            for (int sgn : {1, -1}) {
              auto y = x;
              y[static_cast<std::size_t>(a)] += sgn * h;
              if (!inside(y)) regular = false;
            }
          }
          if (regular) {
            reg_idx[color].push_back(static_cast<std::uint32_t>(idx));
            reg_rhs[color].push_back(4.0 * fv * h * h);
            continue;
          }
          IrregularRow row;
          row.idx = static_cast<std::uint32_t>(idx);
          row.constant = -4.0 * fv;
          const double rest = R2 - norm2(x);
          for (std::size_t a = 0; a < 4; ++a) {
            double arm[2];
            for (int side = 0; side < 2; ++side) {
              const int sgn = side == 0 ? 1 : -1;
              auto y = x;
              y[a] += sgn * h;
              if (inside(y)) {
                arm[side] = h;
              } else {
                // distance along the axis to the sphere
                const double t = -sgn * x[a] + std::sqrt(x[a] * x[a] + rest);
                arm[side] = std::min(std::max(t, 1e-12 * h), h);
              }
            }
            for (int side = 0; side < 2; ++side) {
              const int sgn = side == 0 ? 1 : -1;
              const double w = 2.0 / (arm[side] * (arm[0] + arm[1]));
              row.diag += w;
              const std::size_t slot = 2 * a + static_cast<std::size_t>(side);
              row.w[slot] = w;
              if (arm[side] == h) {
                auto y = x;
                y[a] += sgn * h;
                if (inside(y)) {
                  row.nb[slot] = static_cast<std::int64_t>(sgn > 0 ? idx + stride[a] : idx - stride[a]);
                  continue;
                }
              }
              auto y = x;
              y[a] += sgn * arm[side];
              row.nb[slot] = -1;
              row.constant += w * p.boundary(y);
            }
          }
          irr[color].push_back(row);
        }
      }
    }
  }

  constexpr double kJ11 = 3.8317059702075123;
  const double rho_j = 1.0 - h * h * kJ11 * kJ11 / (8.0 * R2);
  const double omega = 2.0 / (1.0 + std::sqrt(std::max(0.0, 1.0 - rho_j * rho_j)));
  const double target = p.tol * (1.0 + f_sup);
  const double h2inv = 1.0 / (h * h);
  std::vector<double>& u = out.u;
  const std::size_t s0 = stride[0], s1 = stride[1], s2 = stride[2];

  auto neighbor_sum = [&](std::size_t i) {
    return u[i + s0] + u[i - s0] + u[i + s1] + u[i - s1] + u[i + s2] + u[i - s2] + u[i + 1] + u[i - 1];
  };
  auto irregular_sum = [&](const IrregularRow& r) {
    double s = r.constant;
    for (std::size_t k = 0; k < 8; ++k) {
      if (r.nb[k] >= 0) s += r.w[k] * u[static_cast<std::size_t>(r.nb[k])];
    }
    return s;
  };
  auto residual = [&]() {
    double m = 0.0;
    for (int c = 0; c < 2; ++c) {
      for (std::size_t k = 0; k < reg_idx[c].size(); ++k) {
        const std::size_t i = reg_idx[c][k];
        m = std::max(m, std::abs((neighbor_sum(i) - 8.0 * u[i]) * h2inv - reg_rhs[c][k] * h2inv));
      }
      for (const auto& r : irr[c]) {
        m = std::max(m, std::abs((irregular_sum(r) - r.diag * u[r.idx]) * (8.0 * h2inv / r.diag)));
      }
    }
    return m;
  };

  std::size_t it = 0;
  double res = residual();
  out.report.residual_history.push_back(res);
  while (res >= target) {
    if (it >= p.max_iters) {
      std::ostringstream os;
      os << "grid solver did not converge in " << p.max_iters << " iterations; residual history:";
      for (double r : out.report.residual_history) os << ' ' << r;
      throw NumericalError(os.str());
    }
    for (int c = 0; c < 2; ++c) {
      const auto& ids = reg_idx[c];
      const auto& rhs = reg_rhs[c];
      for (std::size_t k = 0; k < ids.size(); ++k) {
        const std::size_t i = ids[k];
        const double gs = (neighbor_sum(i) - rhs[k]) * 0.125;
        u[i] += omega * (gs - u[i]);
      }
      for (const auto& r : irr[c]) {
        const double gs = irregular_sum(r) / r.diag;
        u[r.idx] += omega * (gs - u[r.idx]);
      }
    }
    ++it;
    if (it % p.check_every == 0) {
      res = residual();
      out.report.residual_history.push_back(res);
    }
  }

  auto& rep = out.report;
  rep.mode = "grid";
  rep.iterations = it;
  rep.residual_sup = res;
  for (std::uint32_t i : out.interior) rep.solution_sup = std::max(rep.solution_sup, std::abs(u[i]));
  // samples along the positive x_0 axis
  const std::size_t mid = (N - 1) / 2;
  for (std::size_t i0 = mid; i0 < N; ++i0) {
    const std::size_t idx = i0 * s0 + mid * (s1 + s2 + 1);
    const double r = coord(i0);
    std::array<double, 4> y{r, 0.0, 0.0, 0.0};
    rep.samples.push_back({r, inside(y) ? u[idx] : p.boundary(y)});
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

/// sup over the grid unknowns of |u_grid - g(|x|^2)|; g evaluated once per distinct radius.
inline double grid_vs_radial_sup(const GridSolution& grid, const RadialSolution& radial) {
  std::vector<double> cache;
  std::vector<char> have;
  double m = 0.0;
  const std::size_t N = grid.points;
  const long long mid = static_cast<long long>((N - 1) / 2);
  for (std::uint32_t idx : grid.interior) {
    std::uint32_t rem = idx;
    long long key = 0;
    for (int a = 0; a < 4; ++a) {
      const long long c = static_cast<long long>(rem % N) - mid;
      key += c * c;
      rem /= static_cast<std::uint32_t>(N);
    }
    if (static_cast<std::size_t>(key) >= cache.size()) {
      cache.resize(static_cast<std::size_t>(key) + 1);
      have.resize(static_cast<std::size_t>(key) + 1, 0);
    }
    if (!have[static_cast<std::size_t>(key)]) {
      cache[static_cast<std::size_t>(key)] = radial.g(grid.h * grid.h * static_cast<double>(key));
      have[static_cast<std::size_t>(key)] = 1;
    }
    m = std::max(m, std::abs(grid.u[idx] - cache[static_cast<std::size_t>(key)]));
  }
  return m;
}

// ---------------------------------------------------------------------------
// De Giorgi extinction level

struct DeGiorgiInput {
  double alpha = 1.0;
  double a = 1.0;
  double s0 = 0.0;
  double f_s0 = 0.0;
};

/// s_inf = s0 + 2 A (1 - 2^{-alpha})^{-1} f(s0)^alpha, for f(s0)^alpha <= 1/(2A).
inline double de_giorgi_bound(const DeGiorgiInput& in) {
  if (!(in.alpha > 0.0) || !(in.a > 0.0)) throw InputError("de_giorgi_bound: alpha and A must be positive");
  if (!(in.s0 >= 0.0) || !(in.f_s0 >= 0.0)) throw InputError("de_giorgi_bound: s0 and f(s0) must be non-negative");
  const double fa = std::pow(in.f_s0, in.alpha);
  if (fa > 1.0 / (2.0 * in.a)) {
    std::ostringstream os;
    os << "de_giorgi_bound: s0 is not admissible, f(s0)^alpha = " << fa << " exceeds 1/(2A) = " << 1.0 / (2.0 * in.a);
    throw InputError(os.str());
  }
  return in.s0 + 2.0 * in.a / (1.0 - std::pow(2.0, -in.alpha)) * fa;
}

// ---------------------------------------------------------------------------
// Experiments on radial problems

/// ||f||_{L^q} over the ball of radius R in R^{4n}.
inline double lq_norm(std::size_t n, const RealFunction& f, double q, double radius) {
  if (!(q > 0.0)) throw InputError("lq_norm: q must be positive");
  return std::pow(radial_integral(n, [&](double s) { return std::pow(std::abs(f(s)), q); }, radius), 1.0 / q);
}

struct StabilityReport {
  double sup_diff = 0.0;       // sup |u - v| on the sample grid
  double boundary_diff = 0.0;  // |c_f - c_g|
  double lq_diff = 0.0;        // ||f - g||_{L^q}
  double c_hat = 0.0;          // (sup_diff - boundary_diff)_+ / lq_diff^{1/n}; 0 when lq_diff = 0
};

inline StabilityReport stability_experiment(std::size_t n, double radius, const RealFunction& f, const RealFunction& g,
                                            double c_f, double c_g, double q, std::size_t samples = 201) {
  if (!(q > 2.0)) throw InputError("stability_experiment: q must exceed 2");
  const RadialSolution u(RadialProblem{n, radius, f, c_f});
  const RadialSolution v(RadialProblem{n, radius, g, c_g});
  StabilityReport r;
  for (double rad : uniform_radii(radius, samples)) {
    r.sup_diff = std::max(r.sup_diff, std::abs(u.g(rad * rad) - v.g(rad * rad)));
  }
  r.boundary_diff = std::abs(c_f - c_g);
  r.lq_diff = lq_norm(n, [&](double s) { return f(s) - g(s); }, q, radius);
  if (r.lq_diff > 0.0) {
    r.c_hat = std::max(0.0, r.sup_diff - r.boundary_diff) / std::pow(r.lq_diff, 1.0 / static_cast<double>(n));
  }
  return r;
}

struct NamedDensity {
  std::string label;
  RealFunction f;  // of s = ||q||^2
};

/// Tent densities (1 - s/rho^2)_+ concentrating at the origin.
inline std::vector<NamedDensity> concentrating_family(const std::vector<double>& widths) {
  std::vector<NamedDensity> out;
  for (double rho : widths) {
    if (!(rho > 0.0)) throw InputError("concentrating_family: widths must be positive");
    const double r2 = rho * rho;
    std::ostringstream os;
    os << "tent:" << rho;
    out.push_back({os.str(), [r2](double s) { return s < r2 ? 1.0 - s / r2 : 0.0; }});
  }
  return out;
}

struct LinfMember {
  std::string label;
  double raw_norm = 0.0;  // ||f||_{L^q} before normalization
  double sup_u = 0.0;     // sup |u| for f / ||f||_{L^q}, u = 0 on the sphere
};

struct LinfReport {
  double q = 0.0;
  std::vector<LinfMember> members;
  double max_sup = 0.0;
  double growth = 0.0;  // sup_u(last) / sup_u(first)
};

/// Each density is scaled to unit L^q norm and solved with zero boundary data; since g is
/// non-decreasing with g(R^2) = 0, sup |u| = -g(0).
inline LinfReport linf_experiment(std::size_t n, double radius, double q, const std::vector<NamedDensity>& family) {
  if (!(q > 0.0)) throw InputError("linf_experiment: q must be positive");
  if (family.empty()) throw InputError("linf_experiment: empty family");
  LinfReport rep;
  rep.q = q;
  for (const auto& d : family) {
    LinfMember m;
    m.label = d.label;
    m.raw_norm = lq_norm(n, d.f, q, radius);
    if (!(m.raw_norm > 0.0) || !std::isfinite(m.raw_norm)) {
      throw InputError("linf_experiment: density " + d.label + " has no finite positive L^q norm");
    }
    const double scale = 1.0 / m.raw_norm;
    const RealFunction fn = [f = d.f, scale](double s) { return scale * f(s); };
    const RadialSolution sol(RadialProblem{n, radius, fn, 0.0});
    m.sup_u = std::abs(sol.g(0.0));
    rep.max_sup = std::max(rep.max_sup, m.sup_u);
    rep.members.push_back(m);
  }
  rep.growth = rep.members.back().sup_u / rep.members.front().sup_u;
  return rep;
}

// ---------------------------------------------------------------------------
// De Giorgi test family

/// F(s) = K (S - s)_+^{1/alpha} satisfies r F(s + r) <= A F(s)^{1+alpha} for all s, r > 0
/// exactly when A >= K^{-alpha} g^g / (1 + g)^{1+g}, g = 1/alpha.
struct PowerDecay {
  double k = 1.0;
  double extinction = 1.0;  // S
  double alpha = 1.0;

  double operator()(double s) const {
    return s < extinction ? k * std::pow(extinction - s, 1.0 / alpha) : 0.0;
  }
  double min_constant() const {
    const double g = 1.0 / alpha;
    return std::pow(k, -alpha) * std::pow(g, g) / std::pow(1.0 + g, 1.0 + g);
  }
};

struct SublevelRow {
  double level = 0.0;       // s
  double radius = 0.0;      // U(s) is the ball of this radius
  double volume = 0.0;      // Leb^{4n}(U(s))
  double constant = 0.0;    // volume s^{pn} / mass
};

struct SublevelReport {
  double mass = 0.0;  // int over the ball of the Monge-Ampere density of u
  std::vector<SublevelRow> rows;
  double max_constant = 0.0;
};

/// U(s) = {u < v - s} for radial u, v on the ball of radius R, with u - v non-decreasing in ||q||.
inline SublevelReport sublevel_volume_decay(const RadialProfile& u, const RadialProfile& v, double radius, double p,
                                            const std::vector<double>& levels) {
  if (u.n != v.n) throw InputError("sublevel_volume_decay: dimension mismatch");
  if (!u.g || !v.g || !u.dg || !u.d2g) throw InputError("sublevel_volume_decay: radial profiles required");
  const std::size_t n = u.n;
  const double r2 = radius * radius;
  const auto diff = [&](double s) { return u.g(s) - v.g(s); };
  // monotonicity of u - v on a fine grid
  double prev = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 2000; ++k) {
    const double d = diff(r2 * k / 2000.0);
    if (d < prev - 1e-12 * std::max(1.0, std::abs(d))) {
      throw InputError("sublevel_volume_decay: u - v is not non-decreasing in the radius");
    }
    prev = d;
  }
  SublevelReport rep;
  rep.mass = radial_integral(n, [&](double s) { return radial_qma_density(u, s); }, radius);
  for (double lev : levels) {
    SublevelRow row;
    row.level = lev;
    // largest s with diff(s) < -lev, by bisection on (0, R^2]
    double lo = 0.0;
    double hi = r2;
    if (diff(r2) < -lev) {
      lo = r2;
    } else {
      for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (diff(mid) < -lev ? lo : hi) = mid;
      }
    }
    row.radius = std::sqrt(lo);
    row.volume = ball_volume(n) * std::pow(row.radius, 4.0 * static_cast<double>(n));
    row.constant = rep.mass > 0.0 ? row.volume * std::pow(lev, p * static_cast<double>(n)) / rep.mass : 0.0;
    rep.max_constant = std::max(rep.max_constant, row.constant);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace qma
