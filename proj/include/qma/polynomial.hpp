#pragma once

// Sparse polynomials in z_0..z_{m-1} and their conjugates zb_0..zb_{m-1}
// (m = 2n complex coordinates of H^n), with exact or floating coefficients.

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qma/error.hpp"
#include "qma/exact.hpp"

namespace qma {

inline constexpr std::size_t kMaxVars = 8;

struct Monomial {
  // [0, kMaxVars): powers of z_i; [kMaxVars, 2 kMaxVars): powers of zb_i.
  std::array<std::uint8_t, 2 * kMaxVars> exps{};

  std::uint8_t holo(std::size_t i) const { return exps[i]; }
  std::uint8_t anti(std::size_t i) const { return exps[kMaxVars + i]; }
  std::uint8_t& holo(std::size_t i) { return exps[i]; }
  std::uint8_t& anti(std::size_t i) { return exps[kMaxVars + i]; }

  unsigned degree() const {
    unsigned d = 0;
    for (auto e : exps) d += e;
    return d;
  }

  /// z <-> zb.
  Monomial swapped() const {
    Monomial m;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      m.holo(i) = anti(i);
      m.anti(i) = holo(i);
    }
    return m;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (std::size_t i = 0; i < a.exps.size(); ++i) m.exps[i] = static_cast<std::uint8_t>(a.exps[i] + b.exps[i]);
    return m;
  }

  friend auto operator<=>(const Monomial&, const Monomial&) = default;

  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    auto put = [&](const char* name, std::size_t i, unsigned e) {
      if (e == 0) return;
      if (!first) os << '*';
      first = false;
      os << name << i;
      if (e > 1) os << '^' << e;
    };
    for (std::size_t i = 0; i < kMaxVars; ++i) put("z", i, holo(i));
    for (std::size_t i = 0; i < kMaxVars; ++i) put("zb", i, anti(i));
    return first ? "1" : os.str();
  }
};

template <class S>
class Polynomial {
 public:
  using Scalar = S;
  using Terms = std::map<Monomial, S>;

  explicit Polynomial(std::size_t vars = 0) : vars_(vars) { check_vars(vars); }

  static Polynomial constant(std::size_t vars, const S& c) {
    Polynomial p(vars);
    p.add_term(Monomial{}, c);
    return p;
  }
  static Polynomial z(std::size_t vars, std::size_t i) { return variable(vars, i, false); }
  static Polynomial zbar(std::size_t vars, std::size_t i) { return variable(vars, i, true); }
  static Polynomial monomial(std::size_t vars, const Monomial& m, const S& c) {
    Polynomial p(vars);
    p.add_term(m, c);
    return p;
  }

  std::size_t vars() const { return vars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  S coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? S(0) : it->second;
  }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }

  void add_term(const Monomial& m, const S& c) {
    if (qma::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (qma::is_zero(it->second)) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Polynomial& operator*=(const S& s) {
    if (qma::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= S(-1); }
  friend Polynomial operator*(Polynomial a, const S& s) { return a *= s; }
  friend Polynomial operator*(const S& s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_same(b);
    Polynomial out(a.vars_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
    }
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

  /// d/dz_i (anti = false) or d/dzb_i (anti = true).
  Polynomial derivative(std::size_t i, bool anti) const {
    check_index(i);
    Polynomial out(vars_);
    for (const auto& [m, c] : terms_) {
      const std::uint8_t e = anti ? m.anti(i) : m.holo(i);
      if (e == 0) continue;
      Monomial d = m;
      if (anti) {
        --d.anti(i);
      } else {
        --d.holo(i);
      }
      out.add_term(d, c * S(static_cast<int>(e)));
    }
    return out;
  }
  Polynomial d_z(std::size_t i) const { return derivative(i, false); }
  Polynomial d_zbar(std::size_t i) const { return derivative(i, true); }

  /// Formal conjugate: conjugate coefficients and swap z <-> zb.
  Polynomial conjugate() const {
    using std::conj;
    Polynomial out(vars_);
    for (const auto& [m, c] : terms_) out.add_term(m.swapped(), conj(c));
    return out;
  }

  /// Real-valued as a function: coefficient(m) == conj(coefficient(swap m)).
  bool is_real() const { return conjugate() == *this; }

  /// Value at complex coordinates z (conjugates taken from z).
  std::complex<double> evaluate(const std::vector<std::complex<double>>& zs) const {
    if (zs.size() != vars_) throw InputError("polynomial evaluate: expected " + std::to_string(vars_) + " coordinates");
    std::complex<double> sum = 0.0;
    for (const auto& [m, c] : terms_) {
      std::complex<double> t = to_complex(c);
      for (std::size_t i = 0; i < vars_; ++i) {
        for (unsigned e = 0; e < m.holo(i); ++e) t *= zs[i];
        for (unsigned e = 0; e < m.anti(i); ++e) t *= std::conj(zs[i]);
      }
      sum += t;
    }
    return sum;
  }

  template <class T>
  Polynomial<T> cast() const {
    Polynomial<T> out(vars_);
    for (const auto& [m, c] : terms_) out.add_term(m, T(to_complex(c)));
    return out;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << scalar_to_string(c);
      if (m.degree() > 0) os << '*' << m.to_string();
    }
    return os.str();
  }

 private:
  static Polynomial variable(std::size_t vars, std::size_t i, bool anti) {
    Polynomial p(vars);
    p.check_index(i);
    Monomial m;
    if (anti) {
      m.anti(i) = 1;
    } else {
      m.holo(i) = 1;
    }
    p.add_term(m, S(1));
    return p;
  }

  static void check_vars(std::size_t vars) {
    if (vars > kMaxVars) throw InputError("polynomial: at most " + std::to_string(kMaxVars) + " complex variables");
  }
  void check_index(std::size_t i) const {
    if (i >= vars_) throw InputError("polynomial: variable index out of range");
  }
  void check_same(const Polynomial& o) const {
    if (o.vars_ != vars_) throw InputError("polynomial: variable count mismatch");
  }

  std::size_t vars_ = 0;
  Terms terms_;
};

/// Complex coordinates of a real point x in R^{4n}: z_j = x_{2j} + (-1)^j x_{2j+1} i.
inline std::vector<std::complex<double>> complex_coordinates(const std::vector<double>& x) {
  if (x.size() % 2 != 0) throw InputError("complex_coordinates: odd real dimension");
  std::vector<std::complex<double>> z(x.size() / 2);
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    z[j] = {x[2 * j], sign * x[2 * j + 1]};
  }
  return z;
}

/// d/dx_a in the real chart: d/dx_{2j} = d_zj + d_zbj, d/dx_{2j+1} = (-1)^j i (d_zj - d_zbj).
template <class S>
Polynomial<S> d_real(const Polynomial<S>& p, std::size_t a) {
  const std::size_t j = a / 2;
  if (a % 2 == 0) return p.d_z(j) + p.d_zbar(j);
  S unit = imaginary_unit<S>();
  if (j % 2 == 1) unit = -unit;
  return unit * (p.d_z(j) - p.d_zbar(j));
}

}  // namespace qma
