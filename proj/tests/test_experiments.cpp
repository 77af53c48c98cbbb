#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qma/experiments.hpp"

using namespace qma;

TEST(Integrability, FirstCoordinateThreshold) {
  for (std::size_t n = 1; n <= 3; ++n) {
    EXPECT_EQ(run_integrability({"q0neginv", n, 1.9, 12}).verdict, Convergence::Convergent) << n;
    EXPECT_EQ(run_integrability({"q0neginv", n, 2.1, 12}).verdict, Convergence::Divergent) << n;
    EXPECT_EQ(run_integrability({"q0neginv", n, 2.02, 12}).verdict, Convergence::Inconclusive) << n;
  }
}

TEST(Integrability, FullNormThreshold) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const double pc = 2.0 * static_cast<double>(n);
    EXPECT_EQ(run_integrability({"neginv", n, pc - 0.1, 12}).verdict, Convergence::Convergent) << n;
    EXPECT_EQ(run_integrability({"neginv", n, pc + 0.1, 12}).verdict, Convergence::Divergent) << n;
    const auto r = run_integrability({"neginv", n, pc + 0.1, 12});
    ASSERT_TRUE(r.critical_p.has_value());
    EXPECT_EQ(*r.critical_p, pc);
    EXPECT_NEAR(r.levels.back().ratio, std::pow(2.0, 0.2), 1e-9);
  }
}

TEST(Integrability, ExactShellIntegral) {
  // int_{1/2 < |x| < 1} |x|^{-2p} over R^4 = A_4 (1 - 2^{2p-4}) / (4 - 2p)
  const double p = 1.5;
  const auto r = run_integrability({"neginv", 1, p, 3});
  const double a4 = 2.0 * std::numbers::pi * std::numbers::pi;
  EXPECT_NEAR(r.levels[0].increment, a4 * (1.0 - std::pow(2.0, 2 * p - 4)) / (4 - 2 * p), 1e-10);
}

TEST(Integrability, BoundedModelsConverge) {
  EXPECT_EQ(run_integrability({"sqnorm", 2, 7.0, 6}).verdict, Convergence::Convergent);
  EXPECT_EQ(run_integrability({"lognorm", 1, 3.0, 10}).verdict, Convergence::Convergent);
  EXPECT_FALSE(run_integrability({"sqnorm", 2, 7.0, 6}).critical_p.has_value());
}

TEST(Integrability, Errors) {
  EXPECT_THROW(run_integrability({"pshquad:1", 1, 1.0, 6}), InputError);
  EXPECT_THROW(run_integrability({"sqnorm", 1, 0.0, 6}), InputError);
  EXPECT_THROW(run_integrability({"sqnorm", 1, 1.0, 2}), InputError);
  EXPECT_THROW(run_integrability({"bogus", 1, 1.0, 6}), InputError);
}

TEST(Fundamental, TableAndExtrapolation) {
  const auto r1 = run_fundamental(1, 10, 1.0);
  EXPECT_NEAR(r1.limit, std::numbers::pi * std::numbers::pi, 1e-13);
  EXPECT_LT(r1.relative_error, 1e-3);
  for (const auto& row : r1.rows) {
    EXPECT_GT(row.mass, 0.0);
    EXPECT_LT(row.mass, r1.limit);
  }
  ASSERT_TRUE(r1.rows.back().observed_order.has_value());
  EXPECT_NEAR(*r1.rows.back().observed_order, 1.0, 0.05);
  EXPECT_LT(run_fundamental(2, 10, 1.0).relative_error, 5e-3);
  EXPECT_THROW(run_fundamental(1, 2, 1.0), InputError);
}

TEST(Verify, SuitesAndErrors) {
  const auto m = run_verify("mprime");
  ASSERT_EQ(m.size(), 2u);
  for (const auto& c : m) EXPECT_TRUE(c.passed) << c.name;
  EXPECT_THROW(run_verify("nosuch"), InputError);
  const auto f = run_verify("fundamental", 7);
  for (const auto& c : f) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
}
