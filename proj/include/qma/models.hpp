#pragma once

// Test potentials on H^n with known Monge-Ampere densities.
//
// Densities are coefficients against dz_0 ^ ... ^ dz_{2n-1}, read as densities
// with respect to Lebesgue measure on R^{4n}.

#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qma/error.hpp"
#include "qma/hessians.hpp"
#include "qma/polynomial.hpp"
#include "qma/quadrature.hpp"
#include "qma/quat_linalg.hpp"

namespace qma {

inline double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
  return f;
}

/// Surface area of the unit sphere in R^{4n}: 2 pi^{2n} / (2n-1)!.
inline double sphere_area(std::size_t n) {
  return 2.0 * std::pow(std::numbers::pi, 2.0 * static_cast<double>(n)) / factorial(2 * n - 1);
}

/// Volume of the unit ball in R^{4n}: pi^{2n} / (2n)!.
inline double ball_volume(std::size_t n) {
  return std::pow(std::numbers::pi, 2.0 * static_cast<double>(n)) / factorial(2 * n);
}

/// Total mass of the Monge-Ampere measure of -1/||q||^2: 2^n pi^{2n} n! / (2n)!.
inline double fundamental_mass_limit(std::size_t n) {
  return std::pow(2.0, static_cast<double>(n)) * std::pow(std::numbers::pi, 2.0 * static_cast<double>(n)) *
         factorial(n) / factorial(2 * n);
}

/// u(q) = g(s), s = ||q||^2.
struct RadialProfile {
  std::size_t n = 1;
  RealFunction g;
  RealFunction dg;
  RealFunction d2g;
};

/// n! 2^{n-1} g'^{n-1} (2 g' + s g'') for g' and g'' at s.
inline double radial_qma_density(std::size_t n, double dg, double d2g, double s) {
  if (!(s > 0.0)) throw InputError("radial_qma_density: s must be positive");
  return factorial(n) * std::pow(2.0, static_cast<double>(n) - 1.0) * std::pow(dg, static_cast<double>(n) - 1.0) *
         (2.0 * dg + s * d2g);
}

inline double radial_qma_density(const RadialProfile& prof, double s) {
  if (!(s > 0.0)) throw InputError("radial_qma_density: s must be positive");
  return radial_qma_density(prof.n, prof.dg(s), prof.d2g(s), s);
}

inline ScalarField radial_field(const RadialProfile& prof, Domain domain = Domain::whole()) {
  return {prof.n,
          [g = prof.g](const std::vector<double>& x) {
            double s = 0.0;
            for (double v : x) s += v * v;
            return g(s);
          },
          domain};
}

struct ModelFunction {
  std::string name;
  ScalarField field;
  std::optional<RadialProfile> profile;
  std::function<double(const std::vector<double>&)> exact_density;  // empty when unknown
  RealFunction density_of_s;                                         // radial models only
  std::optional<double> exact_mass;                                  // total mass on H^n, when finite and known
  bool qpsh = true;
  /// Points where the field is singular (excluded from spot checks).
  std::function<bool(const std::vector<double>&)> singular;
};

namespace models_detail {

inline ModelFunction radial_model(std::string name, RadialProfile prof, RealFunction density_of_s) {
  ModelFunction m;
  m.name = std::move(name);
  m.field = radial_field(prof);
  m.density_of_s = density_of_s;
  m.exact_density = [d = std::move(density_of_s)](const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return d(s);
  };
  m.profile = std::move(prof);
  return m;
}

/// Shortest round-trip decimal form.
inline std::string format_param(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline double parse_param(const std::string& spec, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !std::isfinite(v)) throw InputError("model '" + spec + "': bad parameter '" + text + "'");
  return v;
}

}  // namespace models_detail

/// g(s) = s.
inline ModelFunction squared_norm(std::size_t n) {
  const double c = factorial(n) * std::pow(2.0, static_cast<double>(n));
  RadialProfile p{n, [](double s) { return s; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
  return models_detail::radial_model("sqnorm", std::move(p), [c](double) { return c; });
}

/// g(s) = log(s)/2 = log ||q||; density n! / (2 s^n).
inline ModelFunction log_norm(std::size_t n) {
  const double c = factorial(n) / 2.0;
  const double nd = static_cast<double>(n);
  RadialProfile p{n, [](double s) { return 0.5 * std::log(s); }, [](double s) { return 0.5 / s; },
                  [](double s) { return -0.5 / (s * s); }};
  auto m = models_detail::radial_model("lognorm", std::move(p), [c, nd](double s) { return c / std::pow(s, nd); });
  m.singular = [](const std::vector<double>& x) {
    for (double v : x) {
      if (v != 0.0) return false;
    }
    return true;
  };
  return m;
}

/// g(s) = log(s + eps)/2; density n! (s + 2 eps) / (2 (s + eps)^{n+1}).
inline ModelFunction f_eps(std::size_t n, double eps) {
  if (!(eps > 0.0)) throw InputError("feps: eps must be positive");
  const double c = factorial(n) / 2.0;
  const double nd = static_cast<double>(n);
  RadialProfile p{n, [eps](double s) { return 0.5 * std::log(s + eps); },
                  [eps](double s) { return 0.5 / (s + eps); },
                  [eps](double s) { return -0.5 / ((s + eps) * (s + eps)); }};
  return models_detail::radial_model("feps:" + models_detail::format_param(eps), std::move(p), [c, nd, eps](double s) {
    return c * (s + 2.0 * eps) / std::pow(s + eps, nd + 1.0);
  });
}

/// g(s) = -1/(s + delta); density n! 2^n delta / (s + delta)^{2n+1}, total mass tends to
/// fundamental_mass_limit(n) as delta -> 0.
inline ModelFunction neg_inverse(std::size_t n, double delta) {
  if (delta < 0.0) throw InputError("neginv: delta must be non-negative");
  const double c = factorial(n) * std::pow(2.0, static_cast<double>(n));
  const double nd = static_cast<double>(n);
  RadialProfile p{n, [delta](double s) { return -1.0 / (s + delta); },
                  [delta](double s) { return 1.0 / ((s + delta) * (s + delta)); },
                  [delta](double s) { return -2.0 / ((s + delta) * (s + delta) * (s + delta)); }};
  auto m = models_detail::radial_model("neginv:" + models_detail::format_param(delta), std::move(p), [c, nd, delta](double s) {
    return c * delta / std::pow(s + delta, 2.0 * nd + 1.0);
  });
  m.exact_mass = fundamental_mass_limit(n);
  if (delta == 0.0) {
    m.singular = [](const std::vector<double>& x) {
      for (double v : x) {
        if (v != 0.0) return false;
      }
      return true;
    };
  }
  return m;
}

/// -1/||q_0||^2: depends on the first quaternionic coordinate only. Its Hessian is
/// zero outside the (0,0) entry, which is the R^4 Laplacian of -1/|x|^2 = 0.
inline ModelFunction first_coordinate_neg_inverse(std::size_t n) {
  ModelFunction m;
  m.name = "q0neginv";
  m.field = {n,
             [](const std::vector<double>& x) {
               return -1.0 / (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
             },
             Domain::whole()};
  m.exact_density = [](const std::vector<double>&) { return 0.0; };
  m.singular = [](const std::vector<double>& x) { return x[0] == 0.0 && x[1] == 0.0 && x[2] == 0.0 && x[3] == 0.0; };
  return m;
}

/// sum A_ij z_i zb_j + 2 Re sum B_ij z_i z_j with A = X^* X (random, PSD) and a
/// random pluriharmonic part B. The complex Hessian is A.
struct PshQuadratic {
  std::size_t n = 1;
  ComplexMatrix a;
  ComplexMatrix b;
  Polynomial<Complex> poly;
};

inline PshQuadratic make_psh_quadratic(std::size_t n, std::mt19937_64& rng, std::size_t rank = 0,
                                       double pluriharmonic_scale = 0.5) {
  if (n == 0 || 2 * n > kMaxVars) throw InputError("pshquad: n out of range");
  const auto m = static_cast<Eigen::Index>(2 * n);
  const auto r = static_cast<Eigen::Index>(rank == 0 ? 2 * n : rank);
  std::normal_distribution<double> d(0.0, 1.0);
  ComplexMatrix x(r, m);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < m; ++j) x(i, j) = Complex(d(rng), d(rng));
  ComplexMatrix b(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) b(i, j) = pluriharmonic_scale * Complex(d(rng), d(rng));
  PshQuadratic q{n, x.adjoint() * x, b, Polynomial<Complex>(2 * n)};
  q.a = 0.5 * (q.a + q.a.adjoint());
  using CP = Polynomial<Complex>;
  const std::size_t vars = 2 * n;
  for (std::size_t i = 0; i < vars; ++i) {
    for (std::size_t j = 0; j < vars; ++j) {
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      q.poly += q.a(ii, jj) * (CP::z(vars, i) * CP::zbar(vars, j));
      q.poly += q.b(ii, jj) * (CP::z(vars, i) * CP::z(vars, j));
      q.poly += std::conj(q.b(ii, jj)) * (CP::zbar(vars, i) * CP::zbar(vars, j));
    }
  }
  return q;
}

/// Exact quaternionic Hessian of a psh quadratic from its complex Hessian.
inline HyperhermitianMatrix quat_hessian(const PshQuadratic& q) {
  return HyperhermitianMatrix::symmetrized(q.n, quat_hessian_entries_from_complex(q.a));
}

inline ModelFunction psh_quadratic_model(std::size_t n, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  const PshQuadratic q = make_psh_quadratic(n, rng);
  ModelFunction m;
  m.name = "pshquad:" + std::to_string(seed);
  m.field = field_from_polynomial(q.poly);
  const double density = factorial_over_four_pow(n) * moore_det(quat_hessian(q));
  m.exact_density = [density](const std::vector<double>&) { return density; };
  return m;
}

/// Parses "sqnorm", "lognorm", "feps:<eps>", "neginv:<delta>", "q0neginv", "pshquad:<seed>".
inline ModelFunction make_model(const std::string& spec, std::size_t n) {
  if (n == 0 || n > kMaxQuatDim) throw InputError("model '" + spec + "': n out of range");
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const bool has_param = colon != std::string::npos;
  const std::string param = has_param ? spec.substr(colon + 1) : std::string();
  auto need = [&](bool want) {
    if (want != has_param) {
      throw InputError("model '" + spec + "': " + (want ? "missing parameter" : "takes no parameter"));
    }
  };
  if (name == "sqnorm") {
    need(false);
    return squared_norm(n);
  }
  if (name == "lognorm") {
    need(false);
    return log_norm(n);
  }
  if (name == "feps") {
    need(true);
    return f_eps(n, models_detail::parse_param(spec, param));
  }
  if (name == "neginv") {
    // bare "neginv" is the fundamental solution itself
    return neg_inverse(n, has_param ? models_detail::parse_param(spec, param) : 0.0);
  }
  if (name == "q0neginv") {
    need(false);
    return first_coordinate_neg_inverse(n);
  }
  if (name == "pshquad") {
    need(true);
    const double seed = models_detail::parse_param(spec, param);
    if (seed < 0 || seed != std::floor(seed)) throw InputError("model '" + spec + "': seed must be a whole number");
    return psh_quadratic_model(n, static_cast<unsigned long long>(seed));
  }
  throw InputError("unknown model '" + spec + "'");
}

/// One representative of every family.
inline std::vector<ModelFunction> model_catalog(std::size_t n) {
  return {squared_norm(n),  log_norm(n),        f_eps(n, 0.1), neg_inverse(n, 0.01), neg_inverse(n, 0.0),
          first_coordinate_neg_inverse(n), psh_quadratic_model(n, 1)};
}

/// Total mass of the Monge-Ampere measure of -1/(s + delta) over the ball ||q|| <= R:
/// (A/2) int_0^{R^2} t^{2n-1} f(t) dt with A the sphere area.
inline double fundamental_mass(std::size_t n, double delta, double radius) {
  if (!(delta > 0.0) || !(radius > 0.0)) throw InputError("fundamental_mass: delta and R must be positive");
  const RadialProfile prof = *neg_inverse(n, delta).profile;
  const double two_n = 2.0 * static_cast<double>(n);
  const auto integrand = [&](double t) { return std::pow(t, two_n - 1.0) * radial_qma_density(prof, t); };
  return 0.5 * sphere_area(n) * integrate_from_zero(integrand, radius * radius);
}

/// int over ||q|| <= R of f(||q||^2) d Leb^{4n}.
inline double radial_integral(std::size_t n, const RealFunction& f, double radius) {
  const double two_n = 2.0 * static_cast<double>(n);
  return 0.5 * sphere_area(n) *
         integrate_from_zero([&](double t) { return std::pow(t, two_n - 1.0) * f(t); }, radius * radius);
}

}  // namespace qma
