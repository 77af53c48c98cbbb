#pragma once

// Differential forms on C^{2n} = H^n with polynomial coefficients.
//
// A form of bidegree (p, q) is stored as a map from basis keys to
// coefficients; the key holds the index sets I (dz factors) and J (dzb
// factors) as bitmasks, and the basis element is dz_I ^ dzb_J with I and J in
// increasing order and all dz factors written before the dzb factors.

#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qma/error.hpp"
#include "qma/exact.hpp"
#include "qma/polynomial.hpp"
#include "qma/quat_linalg.hpp"

namespace qma {

struct FormKey {
  std::uint16_t holo = 0;
  std::uint16_t anti = 0;
  friend auto operator<=>(const FormKey&, const FormKey&) = default;
};

namespace forms_detail {

inline int popcount(std::uint32_t v) { return std::popcount(v); }

/// Sign of dz_i ^ dz_I relative to the sorted basis: (-1)^{#{k in I : k < i}}.
inline int insertion_sign(std::uint16_t mask, std::size_t i) {
  return (popcount(mask & ((1u << i) - 1u)) % 2 == 0) ? 1 : -1;
}

/// Sign of A ^ B -> sorted(A u B) for disjoint masks: parity of the pairs
/// (a, b) with a in A, b in B, a > b.
inline int merge_sign(std::uint16_t a, std::uint16_t b) {
  int inversions = 0;
  for (std::size_t i = 0; i < 16; ++i) {
    if (b & (1u << i)) inversions += popcount(a & ~((2u << i) - 1u));
  }
  return inversions % 2 == 0 ? 1 : -1;
}

struct Factor {
  bool anti;
  std::size_t index;
};

/// Sorts a wedge of 1-form factors into the canonical basis. Returns 0 for a
/// repeated factor.
inline int canonicalize(const std::vector<Factor>& fs, FormKey& key) {
  key = {};
  int inversions = 0;
  auto order = [](const Factor& f) { return (f.anti ? 16 : 0) + static_cast<int>(f.index); };
  for (std::size_t a = 0; a < fs.size(); ++a) {
    for (std::size_t b = a + 1; b < fs.size(); ++b) {
      if (order(fs[a]) == order(fs[b])) return 0;
      if (order(fs[a]) > order(fs[b])) ++inversions;
    }
    auto& mask = fs[a].anti ? key.anti : key.holo;
    mask = static_cast<std::uint16_t>(mask | (1u << fs[a].index));
  }
  return inversions % 2 == 0 ? 1 : -1;
}

/// k + (-1)^k: the partner coordinate within the same quaternionic line.
constexpr std::size_t partner(std::size_t k) { return k ^ 1u; }
constexpr int parity_sign(std::size_t k) { return (k % 2 == 0) ? 1 : -1; }

}  // namespace forms_detail

template <class S>
class PolyForm {
 public:
  using Poly = Polynomial<S>;

  PolyForm(std::size_t vars, int p, int q) : vars_(vars), p_(p), q_(q) {
    if (vars > kMaxVars) throw InputError("form: too many variables");
  }

  static PolyForm scalar(const Poly& f) {
    PolyForm out(f.vars(), 0, 0);
    out.add(FormKey{}, f);
    return out;
  }

  static PolyForm basis(std::size_t vars, std::uint16_t holo, std::uint16_t anti, const S& c = S(1)) {
    PolyForm out(vars, std::popcount(holo), std::popcount(anti));
    out.check_mask(holo);
    out.check_mask(anti);
    out.add(FormKey{holo, anti}, Poly::constant(vars, c));
    return out;
  }
  static PolyForm dz(std::size_t vars, std::size_t i) { return basis(vars, std::uint16_t(1u << i), 0); }
  static PolyForm dzbar(std::size_t vars, std::size_t i) { return basis(vars, 0, std::uint16_t(1u << i)); }

  std::size_t vars() const { return vars_; }
  int p() const { return p_; }
  int q() const { return q_; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::map<FormKey, Poly>& coefficients() const { return coeffs_; }

  Poly coefficient(FormKey key) const {
    auto it = coeffs_.find(key);
    return it == coeffs_.end() ? Poly(vars_) : it->second;
  }

  /// Key of dz_0 ^ ... ^ dz_{m-1}.
  FormKey top_key() const { return FormKey{static_cast<std::uint16_t>((1u << vars_) - 1u), 0}; }
  Poly top_coefficient() const { return coefficient(top_key()); }

  void add(FormKey key, const Poly& f) {
    if (f.is_zero()) return;
    if (std::popcount(key.holo) != p_ || std::popcount(key.anti) != q_) {
      throw InputError("form: basis element does not match bidegree");
    }
    auto [it, inserted] = coeffs_.try_emplace(key, f);
    if (!inserted) {
      it->second += f;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

  PolyForm& operator+=(const PolyForm& o) {
    check_compatible(o);
    for (const auto& [k, f] : o.coeffs_) add(k, f);
    return *this;
  }
  PolyForm& operator-=(const PolyForm& o) {
    check_compatible(o);
    for (const auto& [k, f] : o.coeffs_) add(k, -f);
    return *this;
  }
  friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
  friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
  friend PolyForm operator*(const S& s, const PolyForm& a) {
    PolyForm out(a.vars_, a.p_, a.q_);
    for (const auto& [k, f] : a.coeffs_) out.add(k, s * f);
    return out;
  }
  friend bool operator==(const PolyForm& a, const PolyForm& b) {
    return a.vars_ == b.vars_ && a.coeffs_ == b.coeffs_ && (a.coeffs_.empty() || (a.p_ == b.p_ && a.q_ == b.q_));
  }

  std::string to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, f] : coeffs_) {
      if (!first) os << " + ";
      first = false;
      os << '(' << f.to_string() << ')';
      for (std::size_t i = 0; i < vars_; ++i) {
        if (k.holo & (1u << i)) os << " dz" << i;
      }
      for (std::size_t i = 0; i < vars_; ++i) {
        if (k.anti & (1u << i)) os << " dzb" << i;
      }
    }
    return os.str();
  }

 private:
  void check_mask(std::uint16_t mask) const {
    if (mask >> vars_) throw InputError("form: basis index out of range");
  }
  void check_compatible(const PolyForm& o) const {
    if (o.vars_ != vars_) throw InputError("form: variable count mismatch");
    if (!o.is_zero() && !is_zero() && (o.p_ != p_ || o.q_ != q_)) throw InputError("form: bidegree mismatch");
    if (is_zero() && !o.is_zero()) {
      const_cast<PolyForm*>(this)->p_ = o.p_;
      const_cast<PolyForm*>(this)->q_ = o.q_;
    }
  }

  std::size_t vars_;
  int p_;
  int q_;
  std::map<FormKey, Poly> coeffs_;
};

/// Exterior product; exceeding the available degree annihilates.
template <class S>
PolyForm<S> wedge(const PolyForm<S>& a, const PolyForm<S>& b) {
  if (a.vars() != b.vars()) throw InputError("wedge: variable count mismatch");
  PolyForm<S> out(a.vars(), a.p() + b.p(), a.q() + b.q());
  for (const auto& [ka, fa] : a.coefficients()) {
    for (const auto& [kb, fb] : b.coefficients()) {
      if ((ka.holo & kb.holo) || (ka.anti & kb.anti)) continue;
      // dz_I dzb_J dz_K dzb_L = (-1)^{|J||K|} dz_I dz_K dzb_J dzb_L
      int sign = ((std::popcount(ka.anti) * std::popcount(kb.holo)) % 2 == 0) ? 1 : -1;
      sign *= forms_detail::merge_sign(ka.holo, kb.holo) * forms_detail::merge_sign(ka.anti, kb.anti);
      const FormKey key{static_cast<std::uint16_t>(ka.holo | kb.holo), static_cast<std::uint16_t>(ka.anti | kb.anti)};
      Polynomial<S> prod = fa * fb;
      if (sign < 0) prod = -prod;
      out.add(key, prod);
    }
  }
  return out;
}

template <class S>
PolyForm<S> wedge_power(const PolyForm<S>& a, unsigned k) {
  if (k == 0) return PolyForm<S>::scalar(Polynomial<S>::constant(a.vars(), S(1)));
  PolyForm<S> out = a;
  for (unsigned i = 1; i < k; ++i) out = wedge(out, a);
  return out;
}

/// The operator d (holomorphic part): sum_i d_zi f dz_i ^ (.)
template <class S>
PolyForm<S> d_holo(const PolyForm<S>& a) {
  PolyForm<S> out(a.vars(), a.p() + 1, a.q());
  for (const auto& [k, f] : a.coefficients()) {
    for (std::size_t i = 0; i < a.vars(); ++i) {
      if (k.holo & (1u << i)) continue;
      Polynomial<S> df = f.d_z(i);
      if (df.is_zero()) continue;
      if (forms_detail::insertion_sign(k.holo, i) < 0) df = -df;
      out.add(FormKey{static_cast<std::uint16_t>(k.holo | (1u << i)), k.anti}, df);
    }
  }
  return out;
}

/// The operator dbar: sum_i d_zbi f dzb_i ^ (.); moving dzb_i past the p
/// holomorphic factors costs (-1)^p.
template <class S>
PolyForm<S> d_anti(const PolyForm<S>& a) {
  PolyForm<S> out(a.vars(), a.p(), a.q() + 1);
  const int base = (a.p() % 2 == 0) ? 1 : -1;
  for (const auto& [k, f] : a.coefficients()) {
    for (std::size_t i = 0; i < a.vars(); ++i) {
      if (k.anti & (1u << i)) continue;
      Polynomial<S> df = f.d_zbar(i);
      if (df.is_zero()) continue;
      if (base * forms_detail::insertion_sign(k.anti, i) < 0) df = -df;
      out.add(FormKey{k.holo, static_cast<std::uint16_t>(k.anti | (1u << i))}, df);
    }
  }
  return out;
}

/// Pointwise action of the complex structure J on forms:
/// J(dz_k) = (-1)^{k+1} dzb_{k+(-1)^k}, J(dzb_k) = (-1)^{k+1} dz_{k+(-1)^k},
/// extended multiplicatively; coefficients are untouched. Maps (p,q) to (q,p).
template <class S>
PolyForm<S> j_action(const PolyForm<S>& a) {
  using forms_detail::Factor;
  PolyForm<S> out(a.vars(), a.q(), a.p());
  std::vector<Factor> fs;
  for (const auto& [k, f] : a.coefficients()) {
    fs.clear();
    int sign = 1;
    for (std::size_t i = 0; i < a.vars(); ++i) {
      if (k.holo & (1u << i)) {
        fs.push_back({true, forms_detail::partner(i)});
        sign *= -forms_detail::parity_sign(i);
      }
    }
    for (std::size_t i = 0; i < a.vars(); ++i) {
      if (k.anti & (1u << i)) {
        fs.push_back({false, forms_detail::partner(i)});
        sign *= -forms_detail::parity_sign(i);
      }
    }
    FormKey key;
    sign *= forms_detail::canonicalize(fs, key);
    out.add(key, sign > 0 ? f : -f);
  }
  return out;
}

/// J^{-1} = (-1)^{p+q} J, since J^2 = (-1)^{p+q} on forms of total degree p+q.
template <class S>
PolyForm<S> j_inverse(const PolyForm<S>& a) {
  PolyForm<S> j = j_action(a);
  return ((a.p() + a.q()) % 2 == 0) ? j : S(-1) * j;
}

/// d_J as the conjugation J^{-1} dbar J. Requires a (k,0) form.
template <class S>
PolyForm<S> d_twist_composed(const PolyForm<S>& a) {
  if (a.q() != 0) throw InputError("d_twist: expected a (k,0) form");
  return j_inverse(d_anti(j_action(a)));
}

/// d_J by the coordinate formula sum_{I,k} (-1)^{k+1} d_{zb_{k+(-1)^k}} f_I dz_k ^ dz_I.
template <class S>
PolyForm<S> d_twist_direct(const PolyForm<S>& a) {
  if (a.q() != 0) throw InputError("d_twist: expected a (k,0) form");
  PolyForm<S> out(a.vars(), a.p() + 1, 0);
  for (const auto& [key, f] : a.coefficients()) {
    for (std::size_t k = 0; k < a.vars(); ++k) {
      if (key.holo & (1u << k)) continue;
      Polynomial<S> df = f.d_zbar(forms_detail::partner(k));
      if (df.is_zero()) continue;
      const int sign = -forms_detail::parity_sign(k) * forms_detail::insertion_sign(key.holo, k);
      out.add(FormKey{static_cast<std::uint16_t>(key.holo | (1u << k)), 0}, sign > 0 ? df : -df);
    }
  }
  return out;
}

template <class S>
PolyForm<S> d_twist(const PolyForm<S>& a) {
  return d_twist_direct(a);
}

/// (d d_J u)^n for a real polynomial u on H^n (2n complex variables).
template <class S>
PolyForm<S> qma_form_power(const Polynomial<S>& u, std::size_t n) {
  if (n == 0) throw InputError("qma_form_power: n must be positive");
  if (u.vars() != 2 * n) throw InputError("qma_form_power: polynomial must have 2n complex variables");
  if (!u.is_real()) throw InputError("qma_form_power: polynomial is not real-valued");
  const PolyForm<S> ddj = d_holo(d_twist(PolyForm<S>::scalar(u)));
  return wedge_power(ddj, static_cast<unsigned>(n));
}

/// beta_n = sum_i dz_{2i} ^ dz_{2i+1}.
template <class S>
PolyForm<S> beta_form(std::size_t n) {
  PolyForm<S> out(2 * n, 2, 0);
  for (std::size_t i = 0; i < n; ++i) out += PolyForm<S>::basis(2 * n, static_cast<std::uint16_t>(3u << (2 * i)), 0);
  return out;
}

/// Omega_n = dz_0 ^ ... ^ dz_{2n-1}.
template <class S>
PolyForm<S> omega_form(std::size_t n) {
  return PolyForm<S>::basis(2 * n, static_cast<std::uint16_t>((1u << (2 * n)) - 1u), 0);
}

// ---------------------------------------------------------------------------
// Exact quaternionic Hessian of a polynomial

/// Complex split (G, H) of Hess(u, H) by the cross-assembly
///   G_lk = 4 (d_zb{2l} d_z{2k} u + d_z{2l+1} d_zb{2k+1} u)
///   H_lk = 4 (d_zb{2l+1} d_z{2k} u - d_z{2l} d_zb{2k+1} u),
/// as polynomials (constants for quadratic u).
template <class S>
void quat_hessian_split(const Polynomial<S>& u, std::size_t n, std::vector<Polynomial<S>>& g,
                        std::vector<Polynomial<S>>& h) {
  if (u.vars() != 2 * n) throw InputError("quat_hessian_split: polynomial must have 2n complex variables");
  g.assign(n * n, Polynomial<S>(u.vars()));
  h.assign(n * n, Polynomial<S>(u.vars()));
  const S four(4);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < n; ++k) {
      g[l * n + k] = four * (u.d_z(2 * k).d_zbar(2 * l) + u.d_zbar(2 * k + 1).d_z(2 * l + 1));
      h[l * n + k] = four * (u.d_z(2 * k).d_zbar(2 * l + 1) - u.d_zbar(2 * k + 1).d_z(2 * l));
    }
  }
}

/// The same split by the real-chart assembly
///   Hess_lk = sum_{a,b} e_a conj(e_b) d^2 u / dx_{4l+a} dx_{4k+b},  e = (1, i, j, k),
/// then G = w + x i, H = y - z i of each quaternion entry.
template <class S>
void quat_hessian_split_direct(const Polynomial<S>& u, std::size_t n, std::vector<Polynomial<S>>& g,
                               std::vector<Polynomial<S>>& h) {
  if (u.vars() != 2 * n) throw InputError("quat_hessian_split: polynomial must have 2n complex variables");
  static const Quaternion kUnits[4] = {Quaternion::one(), Quaternion::i(), Quaternion::j(), Quaternion::k()};
  g.assign(n * n, Polynomial<S>(u.vars()));
  h.assign(n * n, Polynomial<S>(u.vars()));
  const S unit = imaginary_unit<S>();
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < n; ++k) {
      std::array<Polynomial<S>, 4> comp{Polynomial<S>(u.vars()), Polynomial<S>(u.vars()), Polynomial<S>(u.vars()),
                                        Polynomial<S>(u.vars())};
      for (std::size_t a = 0; a < 4; ++a) {
        const Polynomial<S> da = d_real(u, 4 * l + a);
        for (std::size_t b = 0; b < 4; ++b) {
          const Polynomial<S> dab = d_real(da, 4 * k + b);
          const Quaternion e = kUnits[a] * kUnits[b].conj();
          const double parts[4] = {e.w, e.x, e.y, e.z};
          for (std::size_t c = 0; c < 4; ++c) {
            if (parts[c] > 0) comp[c] += dab;
            if (parts[c] < 0) comp[c] -= dab;
          }
        }
      }
      g[l * n + k] = comp[0] + unit * comp[1];
      h[l * n + k] = comp[2] - unit * comp[3];
    }
  }
}

/// Moore determinant of the (constant) quaternionic Hessian of a quadratic,
/// computed exactly by Pfaffian expansion over the coefficient type.
template <class S>
S moore_det_of_quadratic(const Polynomial<S>& u, std::size_t n) {
  if (u.degree() > 2) throw InputError("moore_det_of_quadratic: degree exceeds 2");
  std::vector<Polynomial<S>> gp;
  std::vector<Polynomial<S>> hp;
  quat_hessian_split(u, n, gp, hp);
  std::vector<S> g(n * n);
  std::vector<S> h(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    g[i] = gp[i].coefficient(Monomial{});
    h[i] = hp[i].coefficient(Monomial{});
  }
  return moore_det_from_split(n, g, h);
}

// ---------------------------------------------------------------------------
// The combination M_kl M_mn - M_km M_ln + M_kn M_lm

/// M_ij = (-1)^i z_{i+(-1)^i} zb_j + (-1)^{j+1} z_{j+(-1)^j} zb_i.
inline Polynomial<ExactComplex> m_entry(std::size_t vars, std::size_t i, std::size_t j) {
  using P = Polynomial<ExactComplex>;
  using forms_detail::partner;
  using forms_detail::parity_sign;
  const P a = P::z(vars, partner(i)) * P::zbar(vars, j);
  const P b = P::z(vars, partner(j)) * P::zbar(vars, i);
  return ExactComplex(parity_sign(i)) * a - ExactComplex(parity_sign(j)) * b;
}

/// `use` selects which of the three products are included (bit 0, 1, 2).
inline Polynomial<ExactComplex> m_prime_combination(std::size_t vars, std::size_t k, std::size_t l, std::size_t m,
                                                     std::size_t q, unsigned use = 7u) {
  Polynomial<ExactComplex> out(vars);
  if (use & 1u) out += m_entry(vars, k, l) * m_entry(vars, m, q);
  if (use & 2u) out -= m_entry(vars, k, m) * m_entry(vars, l, q);
  if (use & 4u) out += m_entry(vars, k, q) * m_entry(vars, l, m);
  return out;
}

/// True iff the combination expands to zero for every k > l > m > q in {0..2n-1}.
inline bool verify_m_prime_vanishing(std::size_t n, std::string* counterexample = nullptr) {
  if (n < 2) throw InputError("verify_m_prime_vanishing: n must be at least 2");
  const std::size_t vars = 2 * n;
  for (std::size_t k = 3; k < vars; ++k)
    for (std::size_t l = 2; l < k; ++l)
      for (std::size_t m = 1; m < l; ++m)
        for (std::size_t q = 0; q < m; ++q) {
          const auto expr = m_prime_combination(vars, k, l, m, q);
          if (!expr.is_zero()) {
            if (counterexample) {
              std::ostringstream os;
              os << "(k,l,m,n)=(" << k << ',' << l << ',' << m << ',' << q << "): " << expr.to_string();
              *counterexample = os.str();
            }
            return false;
          }
        }
  return true;
}

// ---------------------------------------------------------------------------
// Seeded corpus generators

/// Dyadic Gaussian rational with numerators in [-range, range] and denominator 2^shift.
inline ExactComplex random_dyadic(std::mt19937_64& rng, int range = 8, unsigned shift = 2) {
  std::uniform_int_distribution<int> d(-range, range);
  return ExactComplex::dyadic(d(rng), d(rng), shift);
}

inline Monomial random_monomial(std::mt19937_64& rng, std::size_t vars, unsigned degree) {
  std::uniform_int_distribution<std::size_t> pick(0, 2 * vars - 1);
  Monomial m;
  for (unsigned e = 0; e < degree; ++e) {
    const std::size_t slot = pick(rng);
    if (slot < vars) {
      ++m.holo(slot);
    } else {
      ++m.anti(slot - vars);
    }
  }
  return m;
}

inline Polynomial<ExactComplex> random_polynomial(std::mt19937_64& rng, std::size_t vars, unsigned max_degree,
                                                  std::size_t terms) {
  std::uniform_int_distribution<unsigned> deg(0, max_degree);
  Polynomial<ExactComplex> p(vars);
  for (std::size_t t = 0; t < terms; ++t) p.add_term(random_monomial(rng, vars, deg(rng)), random_dyadic(rng));
  return p;
}

/// c m + conj(c) swap(m) summed over random terms: real-valued by construction.
inline Polynomial<ExactComplex> random_real_polynomial(std::mt19937_64& rng, std::size_t vars, unsigned max_degree,
                                                       std::size_t terms) {
  const auto p = random_polynomial(rng, vars, max_degree, terms);
  return p + p.conjugate();
}

/// Random real polynomial of degree exactly <= 2 touching every variable pair.
inline Polynomial<ExactComplex> random_real_quadratic(std::mt19937_64& rng, std::size_t vars) {
  Polynomial<ExactComplex> p(vars);
  for (std::size_t a = 0; a < 2 * vars; ++a) {
    for (std::size_t b = a; b < 2 * vars; ++b) {
      Monomial m;
      for (std::size_t s : {a, b}) {
        if (s < vars) {
          ++m.holo(s);
        } else {
          ++m.anti(s - vars);
        }
      }
      p.add_term(m, random_dyadic(rng));
    }
  }
  return p + p.conjugate();
}

/// Random (k,0) form with polynomial coefficients.
inline PolyForm<ExactComplex> random_holomorphic_form(std::mt19937_64& rng, std::size_t vars, int k,
                                                      unsigned max_degree, std::size_t terms) {
  PolyForm<ExactComplex> out(vars, k, 0);
  std::vector<std::uint16_t> masks;
  for (std::uint32_t m = 0; m < (1u << vars); ++m) {
    if (std::popcount(m) == k) masks.push_back(static_cast<std::uint16_t>(m));
  }
  std::uniform_int_distribution<std::size_t> pick(0, masks.size() - 1);
  for (std::size_t t = 0; t < terms; ++t) {
    out.add(FormKey{masks[pick(rng)], 0}, random_polynomial(rng, vars, max_degree, 2));
  }
  return out;
}

}  // namespace qma
