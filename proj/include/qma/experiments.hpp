#pragma once

// Experiment drivers: integrability sweeps, the fundamental-mass table and the
// verification suites behind `qma verify`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qma/error.hpp"
#include "qma/hessians.hpp"
#include "qma/models.hpp"
#include "qma/poly_forms.hpp"
#include "qma/quat_linalg.hpp"
#include "qma/solver.hpp"

namespace qma {

// ---------------------------------------------------------------------------
// Integrability of |u|^p near the singularity

struct IntegrabilitySpec {
  std::string model;
  std::size_t n = 1;
  double p = 1.0;
  std::size_t levels = 12;
};

enum class Convergence { Convergent, Divergent, Inconclusive };

inline const char* to_string(Convergence c) {
  switch (c) {
    case Convergence::Convergent: return "CONVERGENT";
    case Convergence::Divergent: return "DIVERGENT";
    default: return "INCONCLUSIVE";
  }
}

struct IntegrabilityLevel {
  double cutoff = 0.0;     // r_k = 2^{-k}
  double integral = 0.0;   // over r_k < |.| < 1
  double increment = 0.0;  // integral(k) - integral(k-1)
  double ratio = 0.0;      // increment(k) / increment(k-1); 0 for k = 1
};

struct IntegrabilityReport {
  IntegrabilitySpec spec;
  std::vector<IntegrabilityLevel> levels;
  std::optional<double> critical_p;  // analytic threshold, if the model has one
  Convergence verdict = Convergence::Inconclusive;
};

/// Integral of |u|^p over {r_k < |.| < 1}, level by level. Radial models integrate over the
/// unit ball of H^n; q0neginv over {r_k < ||q_0|| < 1} x (unit ball of H^{n-1}).
inline IntegrabilityReport run_integrability(const IntegrabilitySpec& spec) {
  if (!(spec.p > 0.0)) throw InputError("integrability: p must be positive");
  if (spec.levels < 3) throw InputError("integrability: at least 3 levels are required");
  const ModelFunction m = make_model(spec.model, spec.n);
  IntegrabilityReport rep;
  rep.spec = spec;
  const double p = spec.p;
  RealFunction shell;  // integrand in r for the shell measure
  if (m.name == "q0neginv") {
    const double factor = (spec.n > 1 ? ball_volume(spec.n - 1) : 1.0) * sphere_area(1);
    shell = [factor, p](double r) { return factor * std::pow(r, 3.0 - 2.0 * p); };
    rep.critical_p = 2.0;
  } else if (m.profile) {
    const RadialProfile prof = *m.profile;
    const double a = sphere_area(spec.n);
    const double dim = 4.0 * static_cast<double>(spec.n);
    shell = [prof, a, dim, p](double r) { return a * std::pow(r, dim - 1.0) * std::pow(std::abs(prof.g(r * r)), p); };
    if (m.name == "neginv:0") rep.critical_p = 2.0 * static_cast<double>(spec.n);
  } else {
    throw InputError("integrability: model '" + spec.model + "' is neither radial nor first-coordinate radial");
  }
  double total = 0.0;
  double prev_inc = 0.0;
  for (std::size_t k = 1; k <= spec.levels; ++k) {
    const double hi = std::ldexp(1.0, -static_cast<int>(k - 1));
    const double lo = hi * 0.5;
    IntegrabilityLevel lev;
    lev.cutoff = lo;
    lev.increment = integrate(shell, lo, hi);
    total += lev.increment;
    lev.integral = total;
    lev.ratio = k == 1 ? 0.0 : (prev_inc != 0.0 ? lev.increment / prev_inc : 0.0);
    prev_inc = lev.increment;
    rep.levels.push_back(lev);
  }
  const auto& lv = rep.levels;
  const std::size_t last = lv.size();
  bool tail_ratio = true;
  for (std::size_t i = last - 3; i < last; ++i) {
    if (i == 0) continue;
    tail_ratio = tail_ratio && (lv[i].increment == 0.0 || lv[i].ratio < 0.95);
  }
  bool nondecreasing = true;
  for (std::size_t i = 1; i < last; ++i) nondecreasing = nondecreasing && lv[i].increment >= lv[i - 1].increment;
  if (rep.critical_p && std::abs(p - *rep.critical_p) < 0.05) {
    rep.verdict = Convergence::Inconclusive;
  } else if (tail_ratio) {
    rep.verdict = Convergence::Convergent;
  } else if (nondecreasing) {
    rep.verdict = Convergence::Divergent;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Mass of the Monge-Ampere measure of -1/(||q||^2 + delta)

struct FundamentalRow {
  double delta = 0.0;
  double mass = 0.0;
  double error = 0.0;                   // mass - analytic limit
  std::optional<double> observed_order;  // from this and the two previous rows
  std::optional<double> extrapolated;    // Richardson with the observed order
};

struct FundamentalReport {
  std::size_t n = 1;
  double radius = 1.0;
  double limit = 0.0;
  std::vector<FundamentalRow> rows;
  double extrapolated = 0.0;
  double relative_error = 0.0;  // |extrapolated - limit| / limit
};

/// delta_k = 2^{-k}, k = 1..levels.
inline FundamentalReport run_fundamental(std::size_t n, std::size_t levels, double radius) {
  if (levels < 3) throw InputError("fundamental: at least 3 delta levels are required");
  FundamentalReport rep;
  rep.n = n;
  rep.radius = radius;
  rep.limit = fundamental_mass_limit(n);
  for (std::size_t k = 1; k <= levels; ++k) {
    FundamentalRow row;
    row.delta = std::ldexp(1.0, -static_cast<int>(k));
    row.mass = fundamental_mass(n, row.delta, radius);
    row.error = row.mass - rep.limit;
    const std::size_t i = rep.rows.size();
    if (i >= 2) {
      const double d1 = rep.rows[i - 1].mass - rep.rows[i - 2].mass;
      const double d2 = row.mass - rep.rows[i - 1].mass;
      if (d1 != 0.0 && d2 != 0.0 && d1 / d2 > 1.0) {
        const double order = std::log2(d1 / d2);
        row.observed_order = order;
        row.extrapolated = row.mass + d2 / (std::pow(2.0, order) - 1.0);
      }
    }
    rep.rows.push_back(row);
  }
  const auto& last = rep.rows.back();
  rep.extrapolated = last.extrapolated.value_or(last.mass);
  rep.relative_error = std::abs(rep.extrapolated - rep.limit) / rep.limit;
  return rep;
}

// ---------------------------------------------------------------------------
// Verification suites

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst value of the checked quantity
  double tolerance = 0.0;  // threshold it was held to
  std::string detail;
  double seconds = 0.0;
};

namespace verify_detail {

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

inline std::vector<double> random_point(std::size_t n, std::mt19937_64& rng, double scale = 0.5) {
  std::normal_distribution<double> d(0.0, scale);
  std::vector<double> x(4 * n);
  for (auto& v : x) v = d(rng);
  return x;
}

inline std::vector<double> point_with_norm2(std::size_t n, double s, std::mt19937_64& rng) {
  auto x = random_point(n, rng, 1.0);
  double r = 0.0;
  for (double v : x) r += v * v;
  for (auto& v : x) v *= std::sqrt(s / r);
  return x;
}

inline double max_entry_diff(const HyperhermitianMatrix& a, const HyperhermitianMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) m = std::max(m, max_abs_diff(a.entries()[i], b.entries()[i]));
  return m;
}

inline HyperhermitianMatrix exact_quat_hessian(const Polynomial<ExactComplex>& u, std::size_t n,
                                               const std::vector<double>& x) {
  std::vector<Polynomial<ExactComplex>> g, h;
  quat_hessian_split(u, n, g, h);
  const auto z = complex_coordinates(x);
  std::vector<Quaternion> e(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    e[i] = Quaternion::from_split(g[i].cast<Complex>().evaluate(z), h[i].cast<Complex>().evaluate(z));
  }
  return HyperhermitianMatrix::symmetrized(n, e);
}

inline Polynomial<ExactComplex> norm2_poly(std::size_t vars) {
  using P = Polynomial<ExactComplex>;
  P p(vars);
  for (std::size_t i = 0; i < vars; ++i) p += P::z(vars, i) * P::zbar(vars, i);
  return p;
}

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

inline CheckResult finish(std::string suite, std::string name, bool ok, double measured, double tol,
                          std::string detail, const Timer& t) {
  return {std::move(suite), std::move(name), ok, measured, tol, std::move(detail), t.seconds()};
}

}  // namespace verify_detail

/// moore_det^2 = det psi and Pfaffian / eigen routes, 1000 random hyperhermitian matrices, n <= 4.
inline std::vector<CheckResult> verify_moore(std::uint64_t seed) {
  using namespace verify_detail;
  Timer t;
  std::mt19937_64 rng(seed);
  double worst_sq = 0.0;
  double worst_routes = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 1 + static_cast<std::size_t>(k % 4);
    const auto m = random_hyperhermitian(n, rng);
    const double md = moore_det(m);
    const double det = psi_embed(m).determinant().real();
    worst_sq = std::max(worst_sq, rel_diff(md * md, det));
    worst_routes = std::max(worst_routes, rel_diff(md, moore_det_eigen(m)));
  }
  return {finish("moore", "moore_det^2 = det psi(M)", worst_sq < 1e-10, worst_sq, 1e-10, "1000 matrices, n <= 4", t),
          finish("moore", "pfaffian route = eigen route", worst_routes < 1e-10, worst_routes, 1e-10,
                 "1000 matrices, n <= 4", t)};
}

/// d_J^2 = 0, d d_J + d_J d = 0 and the two d_J constructions, on 200 random forms.
inline std::vector<CheckResult> verify_forms(std::uint64_t seed) {
  using namespace verify_detail;
  std::vector<CheckResult> out;
  {
    Timer t;
    std::mt19937_64 rng(seed);
    std::size_t bad_sq = 0, bad_anti = 0, bad_routes = 0;
    for (int k = 0; k < 200; ++k) {
      const std::size_t vars = 2 * (1 + static_cast<std::size_t>(k % 3));
      const int deg = k % 3;
      const auto a = random_holomorphic_form(rng, vars, deg, 3, 4);
      if (!d_twist(d_twist(a)).is_zero()) ++bad_sq;
      if (!(d_holo(d_twist(a)) + d_twist(d_holo(a))).is_zero()) ++bad_anti;
      if (!(d_twist_composed(a) == d_twist_direct(a))) ++bad_routes;
    }
    out.push_back(finish("forms", "d_J d_J = 0", bad_sq == 0, static_cast<double>(bad_sq), 0, "200 forms, n <= 3", t));
    out.push_back(finish("forms", "d d_J + d_J d = 0", bad_anti == 0, static_cast<double>(bad_anti), 0,
                         "200 forms, n <= 3", t));
    out.push_back(finish("forms", "J^-1 dbar J = direct d_J", bad_routes == 0, static_cast<double>(bad_routes), 0,
                         "200 forms, n <= 3", t));
  }
  {
    Timer t;
    std::mt19937_64 rng(seed + 1);
    std::size_t bad_exact = 0;
    double worst = 0.0;
    for (std::size_t n = 1; n <= 3; ++n) {
      const Rational scale = Rational(static_cast<long long>(factorial(n))) / Rational(1LL << (2 * n));
      for (int k = 0; k < 100; ++k) {
        const auto u = random_real_quadratic(rng, 2 * n);
        const ExactComplex top = qma_form_power(u, n).top_coefficient().coefficient(Monomial{});
        if (!(top == ExactComplex(scale) * moore_det_of_quadratic(u, n))) ++bad_exact;
        // floating point route: Moore determinant of the evaluated Hessian through the Pfaffian
        const auto hq = exact_quat_hessian(u, n, std::vector<double>(4 * n, 0.0));
        const double md = factorial_over_four_pow(n) * moore_det(hq);
        const double tc = to_complex(top).real();
        worst = std::max(worst, std::abs(md - tc) / std::max(1.0, std::abs(tc)));
      }
    }
    out.push_back(finish("forms", "(dd_J u)^n top coefficient = n!/4^n moore_det, exact", bad_exact == 0,
                         static_cast<double>(bad_exact), 0, "100 quadratics per n in {1,2,3}", t));
    out.push_back(finish("forms", "(dd_J u)^n top coefficient = n!/4^n moore_det, double", worst < 1e-12, worst, 1e-12,
                         "100 quadratics per n in {1,2,3}", t));
  }
  return out;
}

/// Direct and complex-assembled quaternionic Hessians.
inline std::vector<CheckResult> verify_qc(std::uint64_t seed) {
  using namespace verify_detail;
  std::vector<CheckResult> out;
  {
    Timer t;
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int k = 0; k < 60; ++k) {
      const std::size_t n = 1 + static_cast<std::size_t>(k % 3);
      const auto f = field_from_polynomial(random_real_quadratic(rng, 2 * n));
      const auto p = random_point(n, rng);
      worst = std::max(worst, max_entry_diff(quat_hessian_direct(f, p, {1e-3}), quat_hessian_via_complex(f, p, {1e-3})));
    }
    out.push_back(finish("qc", "direct = via complex on quadratics, h = 1e-3", worst < 1e-9, worst, 1e-9,
                         "60 quadratics, n <= 3", t));
  }
  {
    Timer t;
    std::mt19937_64 rng(seed + 1);
    double worst = 0.0;
    for (int k = 0; k < 12; ++k) {
      const std::size_t n = 1 + static_cast<std::size_t>(k % 3);
      const auto u = norm2_poly(2 * n) * norm2_poly(2 * n) + random_real_polynomial(rng, 2 * n, 4, 6);
      const auto f = field_from_polynomial(u);
      const auto p = random_point(n, rng);
      const auto exact = exact_quat_hessian(u, n, p);
      for (int route = 0; route < 2; ++route) {
        const auto hess = [&](double h) {
          return route == 0 ? quat_hessian_direct(f, p, {h}) : quat_hessian_via_complex(f, p, {h});
        };
        const double e1 = max_entry_diff(hess(4e-3), exact);
        const double e2 = max_entry_diff(hess(2e-3), exact);
        worst = std::max(worst, std::abs(std::log2(e1 / e2) - 2.0));
      }
    }
    out.push_back(finish("qc", "observed FD order 2 on quartics, both routes", worst < 0.3, worst, 0.3,
                         "max |order - 2|, 12 quartics, h = 4e-3 -> 2e-3", t));
  }
  return out;
}

/// moore_det^2 >= 4^{2n} det Hess(u, C) on random plurisubharmonic quadratics.
inline std::vector<CheckResult> verify_cpr(std::uint64_t seed) {
  using namespace verify_detail;
  Timer t;
  std::mt19937_64 rng(seed);
  std::size_t violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int k = 0; k < 1000; ++k) {
      const std::size_t rank = 1 + static_cast<std::size_t>(k) % (2 * n);
      const PshQuadratic q = make_psh_quadratic(n, rng, rank);
      // central differences are exact on quadratics; a wide step keeps round-off small
      const CprResult r = cpr_check(field_from_polynomial(q.poly), random_point(n, rng), {0.25}, 1e-10);
      if (!r.holds) ++violations;
      const double scale = std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-300});
      worst_margin = std::min(worst_margin, (r.lhs - r.rhs) / scale);
    }
  }
  std::ostringstream os;
  os << "1000 quadratics per n in {1,2,3}; smallest (lhs - rhs)/max = " << worst_margin;
  return {finish("cpr", "moore_det^2 >= 4^{2n} det Hess(u,C)", violations == 0, static_cast<double>(violations), 0,
                 os.str(), t)};
}

inline std::vector<CheckResult> verify_mprime(std::uint64_t) {
  using namespace verify_detail;
  std::vector<CheckResult> out;
  for (std::size_t n : {2u, 3u}) {
    Timer t;
    std::string why;
    const bool ok = verify_m_prime_vanishing(n, &why);
    out.push_back(finish("mprime", "M' combination vanishes, n = " + std::to_string(n), ok, ok ? 0.0 : 1.0, 0,
                         ok ? "all index quadruples" : why, t));
  }
  return out;
}

/// Extrapolated mass against 2^n pi^{2n} n! / (2n)!.
inline std::vector<CheckResult> verify_fundamental(std::uint64_t) {
  using namespace verify_detail;
  std::vector<CheckResult> out;
  for (auto [n, tol] : {std::pair<std::size_t, double>{1, 1e-3}, {2, 5e-3}}) {
    Timer t;
    const FundamentalReport r = run_fundamental(n, 10, 1.0);
    std::ostringstream os;
    os << "extrapolated " << r.extrapolated << ", limit " << r.limit;
    out.push_back(finish("fundamental", "mass limit, n = " + std::to_string(n), r.relative_error < tol,
                         r.relative_error, tol, os.str(), t));
  }
  return out;
}

/// Radial density of f_eps, manufactured radial solutions and the radial comparison principle.
inline std::vector<CheckResult> verify_radial(std::uint64_t seed) {
  using namespace verify_detail;
  std::vector<CheckResult> out;
  {
    Timer t;
    double worst = 0.0;
    for (std::size_t n = 1; n <= 3; ++n) {
      for (double eps : {1.0, 0.1, 0.01}) {
        const auto m = f_eps(n, eps);
        for (int k = 1; k <= 40; ++k) {
          const double s = 0.1 * k;
          const double closed = factorial(n) * (s + 2 * eps) / (2 * std::pow(s + eps, static_cast<double>(n) + 1.0));
          worst = std::max(worst, rel_diff(radial_qma_density(*m.profile, s), closed));
        }
      }
    }
    out.push_back(finish("radial", "f_eps density closed form", worst < 1e-12, worst, 1e-12,
                         "eps in {1, 0.1, 0.01}, n <= 3, s in (0, 4]", t));
  }
  {
    Timer t;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> us(0.05, 2.0);
    double worst_order = 0.0;
    double worst_err = 0.0;
    for (std::size_t n = 1; n <= 3; ++n) {
      for (double eps : {1.0, 0.1, 0.01}) {
        const auto m = f_eps(n, eps);
        for (int k = 0; k < 4; ++k) {
          const double s = us(rng);
          const auto p = point_with_norm2(n, s, rng);
          const double exact = m.density_of_s(s);
          const double e1 = std::abs(qma_density(m.field, p, {2e-3}) - exact);
          const double e2 = std::abs(qma_density(m.field, p, {1e-3}) - exact);
          worst_err = std::max(worst_err, e2 / std::max(1.0, exact));
          if (e1 > 1e-8 * std::max(1.0, exact)) worst_order = std::max(worst_order, std::abs(std::log2(e1 / e2) - 2.0));
        }
      }
    }
    std::ostringstream os;
    os << "worst relative error at h = 1e-3: " << worst_err;
    out.push_back(finish("radial", "f_eps density matches FD oracle at order 2", worst_order < 0.3 && worst_err < 1e-3,
                         worst_order, 0.3, os.str(), t));
  }
  {
    Timer t;
    double worst = 0.0;
    for (std::size_t n = 1; n <= 4; ++n) {
      for (double eps : {1.0, 0.1, 0.01}) {
        const auto m = f_eps(n, eps);
        const auto res = solve_radial({n, 1.0, m.density_of_s, 0.5 * std::log(1.0 + eps)});
        for (const auto& smp : res.report.samples) {
          worst = std::max(worst, std::abs(smp.value - 0.5 * std::log(smp.radius * smp.radius + eps)));
        }
      }
    }
    out.push_back(finish("radial", "solve_radial recovers log(s + eps)/2", worst < 1e-6, worst, 1e-6,
                         "sup over 101 radii, n <= 4, eps in {1, 0.1, 0.01}", t));
  }
  {
    Timer t;
    std::mt19937_64 rng(seed + 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t violations = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 50; ++k) {
      const std::size_t n = 1 + static_cast<std::size_t>(k % 4);
      const double a = 0.1 + u(rng), b = u(rng), c = u(rng), w = 0.2 + u(rng), amp = 3.0 * u(rng);
      const double boundary = u(rng) - 0.5;
      const RealFunction f1 = [a, b, c](double s) { return a + b * s + c * std::sin(3.0 * s) * std::sin(3.0 * s); };
      const RealFunction f2 = [f1, w, amp](double s) { return f1(s) + amp * std::exp(-(s - w) * (s - w) / 0.05); };
      const RadialSolution s1({n, 1.0, f1, boundary});
      const RadialSolution s2({n, 1.0, f2, boundary});
      for (double r : uniform_radii(1.0, 41)) {
        if (r == 1.0) continue;  // both equal the boundary value
        const double d = s1.g(r * r) - s2.g(r * r);
        worst = std::min(worst, d);
        if (d < -1e-10) ++violations;
      }
    }
    std::ostringstream os;
    os << "50 pairs f1 <= f2, 40 interior radii each; min(u1 - u2) = " << worst;
    out.push_back(finish("radial", "f1 <= f2 implies u1 >= u2", violations == 0, static_cast<double>(violations), 0,
                         os.str(), t));
  }
  return out;
}

inline const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names{"forms", "moore", "qc", "cpr", "fundamental", "radial", "mprime"};
  return names;
}

inline std::vector<CheckResult> run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "forms") return verify_forms(seed);
  if (name == "moore") return verify_moore(seed);
  if (name == "qc") return verify_qc(seed);
  if (name == "cpr") return verify_cpr(seed);
  if (name == "fundamental") return verify_fundamental(seed);
  if (name == "radial") return verify_radial(seed);
  if (name == "mprime") return verify_mprime(seed);
  throw InputError("unknown suite '" + name + "'");
}

/// Runs one suite or "all"; with `parallel`, suites run concurrently and are merged in suite order.
inline std::vector<CheckResult> run_verify(const std::string& suite, std::uint64_t seed = 1, bool parallel = false) {
  std::vector<std::string> names;
  if (suite == "all") {
    names = verify_suite_names();
  } else {
    const auto& all = verify_suite_names();
    if (std::find(all.begin(), all.end(), suite) == all.end()) throw InputError("unknown suite '" + suite + "'");
    names = {suite};
  }
  std::vector<CheckResult> out;
  if (parallel && names.size() > 1) {
    std::vector<std::future<std::vector<CheckResult>>> jobs;
    for (const auto& n : names) jobs.push_back(std::async(std::launch::async, run_suite, n, seed));
    for (auto& j : jobs) {
      auto r = j.get();
      out.insert(out.end(), r.begin(), r.end());
    }
  } else {
    for (const auto& n : names) {
      auto r = run_suite(n, seed);
      out.insert(out.end(), r.begin(), r.end());
    }
  }
  return out;
}

}  // namespace qma
