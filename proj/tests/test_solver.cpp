#include <gtest/gtest.h>

#include <cmath>
#include <iostream>
#include <random>

#include "qma/solver.hpp"

using namespace qma;

namespace {

RadialProblem feps_problem(std::size_t n, double eps, double radius = 1.0) {
  const auto m = f_eps(n, eps);
  return {n, radius, m.density_of_s, 0.5 * std::log(radius * radius + eps)};
}

// Radial density n! (s + 2 eps) / (2 (s + eps)^2) of f_eps for n = 1, as a function on R^4.
PointFunction feps_point_density(double eps) {
  return [eps](const std::array<double, 4>& x) {
    const double s = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    return (s + 2.0 * eps) / (2.0 * (s + eps) * (s + eps));
  };
}

}  // namespace

TEST(RadialSolver, RecoversManufacturedLogSolutions) {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (double eps : {1.0, 0.1, 0.01}) {
      const auto res = solve_radial(feps_problem(n, eps));
      double err = 0.0;
      for (const auto& smp : res.report.samples) {
        err = std::max(err, std::abs(smp.value - 0.5 * std::log(smp.radius * smp.radius + eps)));
      }
      EXPECT_LT(err, 1e-6) << "n=" << n << " eps=" << eps;
      EXPECT_LT(res.report.residual_sup, 1e-5) << "n=" << n << " eps=" << eps;
      EXPECT_NEAR(res.solution.dg(0.3), 0.5 / (0.3 + eps), 1e-9 / eps);
      EXPECT_NEAR(res.solution.d2g(0.3), -0.5 / ((0.3 + eps) * (0.3 + eps)), 1e-7 / (eps * eps));
    }
  }
}

TEST(RadialSolver, ZeroDensityIsConstant) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto res = solve_radial({n, 1.0, [](double) { return 0.0; }, 0.0});
    for (const auto& smp : res.report.samples) EXPECT_EQ(smp.value, 0.0);
    EXPECT_EQ(res.report.solution_sup, 0.0);
  }
}

TEST(RadialSolver, ConstantDensityGivesSquaredNorm) {
  for (std::size_t n = 1; n <= 4; ++n) {
    const double c = factorial(n) * std::pow(2.0, static_cast<double>(n));
    for (double r : {1.0, 1.5}) {
      const auto res = solve_radial({n, r, [c](double) { return c; }, r * r});
      for (const auto& smp : res.report.samples) EXPECT_NEAR(smp.value, smp.radius * smp.radius, 1e-10);
    }
  }
}

TEST(RadialSolver, SingularLogDensity) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto m = log_norm(n);
    const RadialSolution sol({n, 1.0, m.density_of_s, 0.0});
    for (double s : {1e-6, 0.01, 0.5}) EXPECT_NEAR(sol.g(s), 0.5 * std::log(s), 1e-7);
    EXPECT_TRUE(std::isinf(sol.g(0.0)));
  }
}

TEST(RadialSolver, Errors) {
  EXPECT_THROW(solve_radial({1, 1.0, [](double s) { return s - 0.5; }, 0.0}), InputError);
  EXPECT_THROW(solve_radial({2, 1.0, [](double s) { return 1.0 / (s * s * s * s); }, 0.0}), InputError);
  EXPECT_THROW(solve_radial({1, -1.0, [](double) { return 1.0; }, 0.0}), InputError);
  EXPECT_THROW(solve_radial({0, 1.0, [](double) { return 1.0; }, 0.0}), InputError);
  EXPECT_THROW(solve_radial({1, 1.0, [](double) { return 1.0; }, 0.0}, {2.0}), InputError);
  try {
    solve_radial({1, 1.0, [](double s) { return 1.0 / (s * s); }, 0.0});
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("not integrable"), std::string::npos);
  }
}

TEST(RadialSolver, Monotonicity) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 3);
    const double a = u(rng), b = u(rng), k = 1.0 + 3.0 * u(rng);
    const RealFunction f1 = [a, b](double s) { return a + b * s; };
    const RealFunction f2 = [a, b, k](double s) { return k * (a + b * s) + s * s; };
    const RadialSolution s1({n, 1.0, f1, 0.2});
    const RadialSolution s2({n, 1.0, f2, 0.2});
    for (double r : uniform_radii(1.0, 41)) EXPECT_GE(s1.g(r * r), s2.g(r * r) - 1e-12);
  }
}

TEST(RadialSolver, Homogeneity) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto m = f_eps(n, 0.1);
    const double lambda = 1.7;
    const double ln = std::pow(lambda, static_cast<double>(n));
    const RadialSolution a({n, 1.0, m.density_of_s, 0.3});
    const RadialSolution b({n, 1.0, [&m, ln](double s) { return ln * m.density_of_s(s); }, 0.3});
    for (double r : uniform_radii(1.0, 11)) {
      EXPECT_NEAR(b.g(r * r) - 0.3, lambda * (a.g(r * r) - 0.3), 1e-9);
    }
  }
}

TEST(GridSolver, ExactOnQuadraticAndConstantData) {
  GridProblem p;
  p.radius = 1.0;
  p.spacing = 0.25;
  p.f = [](const std::array<double, 4>&) { return 2.0; };
  p.boundary = [](const std::array<double, 4>& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]; };
  const auto sol = solve_grid_n1(p);
  double err = 0.0;
  for (auto idx : sol.interior) err = std::max(err, std::abs(sol.u[idx] - p.boundary(sol.coordinates(idx))));
  EXPECT_LT(err, 1e-7);

  p.f = [](const std::array<double, 4>&) { return 0.0; };
  p.boundary = [](const std::array<double, 4>&) { return 1.0; };
  const auto one = solve_grid_n1(p);
  for (auto idx : one.interior) EXPECT_NEAR(one.u[idx], 1.0, 1e-7);

  // harmonic quadratic
  p.boundary = [](const std::array<double, 4>& x) { return x[0] * x[0] - x[3] * x[3] + x[1] * x[2]; };
  const auto harm = solve_grid_n1(p);
  for (auto idx : harm.interior) EXPECT_NEAR(harm.u[idx], p.boundary(harm.coordinates(idx)), 1e-7);
  EXPECT_LT(harm.report.residual_sup, 1e-8);
}

TEST(GridSolver, SecondOrderAgainstRadialSolver) {
  const RadialSolution radial(feps_problem(1, 0.5));
  GridProblem p;
  p.f = feps_point_density(0.5);
  p.boundary = [](const std::array<double, 4>&) { return 0.5 * std::log(1.5); };
  std::vector<double> errs;
  for (double h : {0.25, 0.125, 0.0625}) {
    p.spacing = h;
    errs.push_back(grid_vs_radial_sup(solve_grid_n1(p), radial));
  }
  for (double e : errs) std::cout << "grid vs radial sup error " << e << "\n";
  EXPECT_LT(errs.back(), 2e-3);
  EXPECT_NEAR(std::log2(errs[1] / errs[2]), 2.0, 0.3);
}

TEST(GridSolver, Errors) {
  GridProblem p;
  p.f = [](const std::array<double, 4>&) { return 1.0; };
  p.boundary = [](const std::array<double, 4>&) { return 0.0; };
  p.spacing = 0.3;
  EXPECT_THROW(solve_grid_n1(p), InputError);
  p.spacing = 1.0 / 64.0;  // 129 points per axis
  EXPECT_THROW(solve_grid_n1(p), InputError);
  p.spacing = 0.25;
  p.max_iters = 3;
  try {
    solve_grid_n1(p);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("residual history"), std::string::npos);
  }
  p.max_iters = 20000;
  p.f = [](const std::array<double, 4>&) { return -1.0; };
  EXPECT_THROW(solve_grid_n1(p), InputError);
}

TEST(DeGiorgi, Formula) {
  EXPECT_DOUBLE_EQ(de_giorgi_bound({1.0, 1.0, 0.0, 0.5}), 2.0);
  EXPECT_DOUBLE_EQ(de_giorgi_bound({1.0, 1.0, 3.0, 0.5}), 5.0);
  EXPECT_DOUBLE_EQ(de_giorgi_bound({0.7, 2.0, 1.25, 0.0}), 1.25);
  EXPECT_THROW(de_giorgi_bound({1.0, 1.0, 0.0, 0.6}), InputError);
  EXPECT_THROW(de_giorgi_bound({0.0, 1.0, 0.0, 0.1}), InputError);
  EXPECT_THROW(de_giorgi_bound({1.0, 1.0, -1.0, 0.1}), InputError);
}

TEST(DeGiorgi, PowerFamilyVanishesBeyondBound) {
  for (double alpha : {0.5, 1.0, 2.0}) {
    const PowerDecay f{0.3, 1.0, alpha};
    const double a = f.min_constant();
    // hypothesis r F(s + r) <= A F(s)^{1+alpha} on a sample grid
    for (int i = 0; i <= 40; ++i) {
      const double s = 0.03 * i;
      for (int j = 1; j <= 40; ++j) {
        const double r = 0.03 * j;
        EXPECT_LE(r * f(s + r), a * std::pow(f(s), 1.0 + alpha) * (1.0 + 1e-12) + 1e-300);
      }
    }
    const double s0 = 0.2;
    if (std::pow(f(s0), alpha) > 1.0 / (2.0 * a)) continue;
    const double sinf = de_giorgi_bound({alpha, a, s0, f(s0)});
    for (int k = 1; k <= 100; ++k) EXPECT_EQ(f(sinf + 0.01 * k), 0.0);
  }
}

TEST(Experiments, StabilityPureBoundaryShift) {
  const auto m = f_eps(2, 0.1);
  const auto r = stability_experiment(2, 1.0, m.density_of_s, m.density_of_s, 0.3, -0.2, 2.5);
  EXPECT_NEAR(r.sup_diff, 0.5, 1e-9);
  EXPECT_EQ(r.lq_diff, 0.0);
  EXPECT_EQ(r.c_hat, 0.0);
  const auto same = stability_experiment(2, 1.0, m.density_of_s, m.density_of_s, 0.3, 0.3, 2.5);
  EXPECT_EQ(same.sup_diff, 0.0);
  EXPECT_THROW(stability_experiment(2, 1.0, m.density_of_s, m.density_of_s, 0.0, 0.0, 2.0), InputError);
}

TEST(Experiments, StabilityConstantStaysBounded) {
  for (std::size_t n = 1; n <= 2; ++n) {
    const auto f0 = f_eps(n, 0.1).density_of_s;
    std::vector<double> c, d;
    for (double t : {1e-1, 1e-2, 1e-3}) {
      const auto r = stability_experiment(n, 1.0, f0, [&](double s) { return (1.0 + t) * f0(s); }, 0.0, 0.0, 3.0);
      c.push_back(r.c_hat);
      d.push_back(r.sup_diff);
    }
    EXPECT_LT(*std::max_element(c.begin(), c.end()) / *std::min_element(c.begin(), c.end()), 10.0);
    EXPECT_LT(d[2], d[1]);
    EXPECT_LT(d[1], d[0]);
  }
}

TEST(Experiments, LinfBoundedAboveTwoAndBlowsUpBelow) {
  const auto fam = concentrating_family({0.5, 0.25, 0.125, 0.0625, 0.03125});
  for (std::size_t n = 1; n <= 2; ++n) {
    const auto good = linf_experiment(n, 1.0, 3.0, fam);
    EXPECT_LT(good.growth, 1.0);  // sup |u| ~ rho^{2 - 4/q}
    const auto bad = linf_experiment(n, 1.0, 1.5, fam);
    EXPECT_GT(bad.growth, 4.0);
  }
  // constant density: sup |u| = sup of the solution for f = 1 times ||f||^{1/n}
  const auto one = linf_experiment(2, 1.0, 3.0, {{"one", [](double) { return 1.0; }}});
  const double norm = lq_norm(2, [](double) { return 1.0; }, 3.0, 1.0);
  const RadialSolution sol({2, 1.0, [](double) { return 1.0; }, 0.0});
  EXPECT_NEAR(one.members[0].sup_u, std::abs(sol.g(0.0)) / std::sqrt(norm), 1e-9);
}

TEST(Experiments, SublevelVolumes) {
  for (std::size_t n = 1; n <= 2; ++n) {
    const RadialProfile u = *log_norm(n).profile;
    const RadialProfile zero{n, [](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
    const auto rep = sublevel_volume_decay(u, zero, 1.0, 1.5, {0.5, 1.0, 2.0, 4.0});
    EXPECT_NEAR(rep.mass, 0.5 * sphere_area(n) * factorial(n) / (2.0 * static_cast<double>(n)), 1e-8);
    for (const auto& row : rep.rows) {
      EXPECT_NEAR(row.radius, std::exp(-row.level), 1e-9);
      EXPECT_NEAR(row.volume, ball_volume(n) * std::exp(-4.0 * static_cast<double>(n) * row.level), 1e-8);
    }
    EXPECT_TRUE(std::isfinite(rep.max_constant));
    const auto same = sublevel_volume_decay(u, u, 1.0, 1.5, {0.5, 1.0});
    for (const auto& row : same.rows) EXPECT_EQ(row.volume, 0.0);
    const RadialProfile shifted{n, [](double s) { return s - 1.0; }, [](double) { return 1.0; },
                                [](double) { return 0.0; }};
    const auto bounded = sublevel_volume_decay(shifted, zero, 1.0, 1.5, {0.5, 1.0, 1.5});
    EXPECT_GT(bounded.rows[0].volume, 0.0);
    EXPECT_EQ(bounded.rows[1].volume, 0.0);
    EXPECT_EQ(bounded.rows[2].volume, 0.0);
  }
  const RadialProfile dec{1, [](double s) { return -s; }, [](double) { return -1.0; }, [](double) { return 0.0; }};
  const RadialProfile zero{1, [](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
  EXPECT_THROW(sublevel_volume_decay(dec, zero, 1.0, 1.5, {0.5}), InputError);
}
