#include <gtest/gtest.h>

#include <random>

#include "qma/poly_forms.hpp"

using namespace qma;

using P = Polynomial<ExactComplex>;
using F = PolyForm<ExactComplex>;

namespace {

ExactComplex ec(int re, int im = 0) { return {Rational(re), Rational(im)}; }

F scalar(const P& p) { return F::scalar(p); }

P norm2(std::size_t vars, std::size_t first = 0, std::size_t count = 0) {
  if (count == 0) count = vars;
  P p(vars);
  for (std::size_t i = first; i < first + count; ++i) p += P::z(vars, i) * P::zbar(vars, i);
  return p;
}

// Coefficientwise d/dzb_i of a (k,0) form.
F coeff_d_zbar(const F& a, std::size_t i) {
  F out(a.vars(), a.p(), a.q());
  for (const auto& [k, f] : a.coefficients()) out.add(k, f.d_zbar(i));
  return out;
}
F coeff_d_z(const F& a, std::size_t i) {
  F out(a.vars(), a.p(), a.q());
  for (const auto& [k, f] : a.coefficients()) out.add(k, f.d_z(i));
  return out;
}

// omega^k = (-1)^k dz_{k + (-1)^k}
F omega(std::size_t vars, std::size_t k) {
  const F base = F::dz(vars, k ^ 1u);
  return (k % 2 == 0) ? base : ec(-1) * base;
}

// d_0 F = sum_k 2 omega^k ^ d_zbk F,  d_1 F = sum_k 2 (-1)^{k+1} omega^k ^ d_z{k+(-1)^k} F.
F wan_wang_d0(const F& a) {
  F out(a.vars(), a.p() + 1, 0);
  for (std::size_t k = 0; k < a.vars(); ++k) out += ec(2) * wedge(omega(a.vars(), k), coeff_d_zbar(a, k));
  return out;
}
F wan_wang_d1(const F& a) {
  F out(a.vars(), a.p() + 1, 0);
  for (std::size_t k = 0; k < a.vars(); ++k) {
    const int s = (k % 2 == 0) ? -2 : 2;
    out += ec(s) * wedge(omega(a.vars(), k), coeff_d_z(a, k ^ 1u));
  }
  return out;
}

long long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace

TEST(Wedge, Basics) {
  const F w = wedge(F::dz(2, 0), F::dz(2, 1));
  EXPECT_EQ(w, F::basis(2, 0b11, 0));
  EXPECT_TRUE(wedge(F::dz(2, 0), F::dz(2, 0)).is_zero());
  EXPECT_EQ(wedge(F::dz(2, 1), F::dz(2, 0)), ec(-1) * w);
  // dzb0 ^ dz1 = -dz1 ^ dzb0
  EXPECT_EQ(wedge(F::dzbar(2, 0), F::dz(2, 1)), ec(-1) * F::basis(2, 0b10, 0b01));
}

TEST(Wedge, BetaPowerIsFactorialOmega) {
  for (std::size_t n = 1; n <= 3; ++n) {
    EXPECT_EQ(wedge_power(beta_form<ExactComplex>(n), static_cast<unsigned>(n)),
              ec(static_cast<int>(factorial(static_cast<int>(n)))) * omega_form<ExactComplex>(n))
        << n;
  }
}

TEST(Wedge, GradedCommutativity) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 20; ++t) {
    const F a = random_holomorphic_form(rng, 4, 1, 2, 3);
    const F b = random_holomorphic_form(rng, 4, 2, 2, 3);
    EXPECT_EQ(wedge(a, b), wedge(b, a));
    EXPECT_TRUE(wedge(a, a).is_zero());
  }
}

TEST(DHolo, Examples) {
  const P u = P::z(2, 0) * P::zbar(2, 0);
  F dh(2, 1, 0);
  dh.add(FormKey{1, 0}, P::zbar(2, 0));
  F da(2, 0, 1);
  da.add(FormKey{0, 1}, P::z(2, 0));
  EXPECT_EQ(d_holo(scalar(u)), dh);
  EXPECT_EQ(d_anti(scalar(u)), da);
}

TEST(DHolo, NormSquared) {
  const std::size_t m = 4;
  F dh(m, 1, 0);
  F da(m, 0, 1);
  for (std::size_t i = 0; i < m; ++i) {
    dh.add(FormKey{static_cast<std::uint16_t>(1u << i), 0}, P::zbar(m, i));
    da.add(FormKey{0, static_cast<std::uint16_t>(1u << i)}, P::z(m, i));
  }
  EXPECT_EQ(d_holo(scalar(norm2(m))), dh);
  EXPECT_EQ(d_anti(scalar(norm2(m))), da);
}

TEST(JAction, BasisRules) {
  EXPECT_EQ(j_action(F::dz(2, 0)), ec(-1) * F::dzbar(2, 1));
  EXPECT_EQ(j_action(F::dz(2, 1)), F::dzbar(2, 0));
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_EQ(j_action(j_action(F::dz(6, k))), ec(-1) * F::dz(6, k)) << k;
    EXPECT_EQ(j_action(j_action(F::dzbar(6, k))), ec(-1) * F::dzbar(6, k)) << k;
  }
}

TEST(JAction, FourthPowerIsIdentityAndInverse) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 30; ++t) {
    const int k = 1 + t % 3;
    const F a = random_holomorphic_form(rng, 4, k, 2, 3);
    EXPECT_EQ(j_action(j_action(j_action(j_action(a)))), a);
    EXPECT_EQ(j_inverse(j_action(a)), a);
    EXPECT_EQ(j_action(j_inverse(a)), a);
  }
}

TEST(DTwist, NormSquaredOfFirstLine) {
  // ||q0||^2 = z0 zb0 + z1 zb1 -> -z1 dz0 + z0 dz1
  const P u = norm2(2);
  F expect(2, 1, 0);
  expect.add(FormKey{1, 0}, -P::z(2, 1));
  expect.add(FormKey{2, 0}, P::z(2, 0));
  EXPECT_EQ(d_twist_direct(scalar(u)), expect);
  EXPECT_EQ(d_twist_composed(scalar(u)), expect);
  EXPECT_EQ(d_holo(expect), ec(2) * F::basis(2, 0b11, 0));
}

TEST(DTwist, RejectsMixedBidegree) {
  EXPECT_THROW(d_twist(F::dzbar(2, 0)), InputError);
  EXPECT_THROW(d_twist_composed(F::dzbar(2, 0)), InputError);
}

TEST(OperatorIdentities, RandomCorpus) {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 60; ++t) {
    const std::size_t vars = 2 * (1 + static_cast<std::size_t>(t % 3));
    const int k = t % 2;
    const F a = random_holomorphic_form(rng, vars, k, 3, 4);
    EXPECT_TRUE(d_holo(d_holo(a)).is_zero());
    EXPECT_TRUE(d_anti(d_anti(a)).is_zero());
    EXPECT_TRUE(d_twist(d_twist(a)).is_zero());
    EXPECT_TRUE((d_holo(d_twist(a)) + d_twist(d_holo(a))).is_zero());
    EXPECT_EQ(d_twist_composed(a), d_twist_direct(a));
  }
}

TEST(OperatorIdentities, WanWangOperators) {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 30; ++t) {
    const std::size_t vars = 2 * (1 + static_cast<std::size_t>(t % 3));
    const P f = random_polynomial(rng, vars, 3, 5);
    const F sf = scalar(f);
    EXPECT_EQ(wan_wang_d0(sf), ec(2) * d_twist(sf));
    EXPECT_EQ(wan_wang_d1(sf), ec(-2) * d_holo(sf));
    EXPECT_EQ(wan_wang_d0(wan_wang_d1(sf)), ec(4) * d_holo(d_twist(sf)));
    const F a = random_holomorphic_form(rng, vars, 1, 2, 3);
    EXPECT_EQ(wan_wang_d0(a), ec(2) * d_twist(a));
  }
}

TEST(QmaForm, NormSquared) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const F top = qma_form_power(norm2(2 * n), n);
    const long long expect = factorial(static_cast<int>(n)) << n;
    EXPECT_EQ(top, ec(static_cast<int>(expect)) * omega_form<ExactComplex>(n)) << n;
    EXPECT_EQ(moore_det_of_quadratic(norm2(2 * n), n), ec(1 << (3 * n)));
  }
}

TEST(QmaForm, RejectsNonRealPotential) {
  EXPECT_THROW(qma_form_power(P::z(2, 0) * P::z(2, 1), 1), InputError);
}

TEST(QmaForm, PluriharmonicPartContributesNothing) {
  // Re(z0^2) is harmonic on the first quaternionic line.
  const P re_z0sq = P::z(2, 0) * P::z(2, 0) + P::zbar(2, 0) * P::zbar(2, 0);
  EXPECT_TRUE(qma_form_power(re_z0sq, 1).is_zero());
  const P u = norm2(2) + re_z0sq;
  EXPECT_EQ(qma_form_power(u, 1), qma_form_power(norm2(2), 1));
}

TEST(QmaForm, HessianRoutesAgreeExactly) {
  std::mt19937_64 rng(59);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 3);
    const P u = random_real_polynomial(rng, 2 * n, 3, 6);
    std::vector<P> g1, h1, g2, h2;
    quat_hessian_split(u, n, g1, h1);
    quat_hessian_split_direct(u, n, g2, h2);
    EXPECT_EQ(g1, g2);
    EXPECT_EQ(h1, h2);
  }
}

TEST(QmaForm, TopCoefficientIsScaledMooreDeterminant) {
  std::mt19937_64 rng(61);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int t = 0; t < 10; ++t) {
      const P u = random_real_quadratic(rng, 2 * n);
      const ExactComplex top = qma_form_power(u, n).top_coefficient().coefficient(Monomial{});
      const ExactComplex md = moore_det_of_quadratic(u, n);
      const Rational scale = Rational(factorial(static_cast<int>(n))) / Rational(1 << (2 * n));
      EXPECT_EQ(top, ExactComplex(scale) * md) << "n=" << n << " u=" << u.to_string();
      EXPECT_EQ(top.imag(), 0);
    }
  }
}

TEST(MPrime, VanishesForSmallN) {
  std::string why;
  EXPECT_TRUE(verify_m_prime_vanishing(2, &why)) << why;
  EXPECT_TRUE(verify_m_prime_vanishing(3, &why)) << why;
  EXPECT_TRUE(m_prime_combination(4, 3, 2, 1, 0).is_zero());
  EXPECT_THROW(verify_m_prime_vanishing(1), InputError);
}

TEST(MPrime, DroppingAProductBreaksIt) {
  for (unsigned use : {3u, 5u, 6u}) EXPECT_FALSE(m_prime_combination(4, 3, 2, 1, 0, use).is_zero()) << use;
}
