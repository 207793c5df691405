#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>

#include "gausskey/errors.hpp"
#include "gausskey/landscape.hpp"
#include "gausskey/rates.hpp"

using namespace gausskey;

// Reference derivatives come from tools/oracles/rate_oracle.py.

TEST(FLog, Values) {
  EXPECT_NEAR(f_log(1e-8), 2e-8, 1e-20);
  EXPECT_NEAR(f_log(0.5), std::log(3.0), 1e-15);
  EXPECT_THROW(f_log(0.0), DomainError);
  EXPECT_THROW(f_log(1.0), DomainError);
}

TEST(FLog, ExceedsReciprocalNoise) {
  for (double w = 1.001; w <= 100.0; w *= 1.05) EXPECT_GT(f_log(1.0 / w), 1.0 / w) << w;
}

TEST(Gradient, VanishesAtOrigin) {
  const RateSurface s{Protocol::no_switching, 0.6, 1.2};
  const auto grad = finite_diff_gradient(s, 0.0, 0.0);
  EXPECT_LT(std::abs(grad[0]), 1e-6);
  EXPECT_LT(std::abs(grad[1]), 1e-6);
}

TEST(Gradient, NonzeroAwayFromOrigin) {
  const RateSurface s{Protocol::no_switching, 0.6, 1.2};
  EXPECT_GT(finite_diff_gradient(s, 0.2, -0.1).norm(), 1e-3);
}

TEST(Gradient, StencilMustStayInside) {
  const RateSurface s{Protocol::no_switching, 0.6, 1.2};
  EXPECT_THROW(finite_diff_gradient(s, 0.2, 0.2), DomainError);  // boundary point
  EXPECT_THROW(finite_diff_gradient(s, 0.2, 0.2 - 1e-6), DomainError);
}

TEST(AnalyticGradientSwitching, ZeroAtOrigin) {
  const auto grad = analytic_gradient_switching({0.5, 1.5, 0.0, 0.0});
  EXPECT_NEAR(grad[0], 0.0, 1e-15);
  EXPECT_NEAR(grad[1], 0.0, 1e-15);
}

TEST(AnalyticGradientSwitching, ReferencePoint) {
  const auto grad = analytic_gradient_switching({0.5, 1.5, 0.2, 0.1});
  EXPECT_NEAR(grad[0], 0.078127210831797889, 1e-13);
  EXPECT_NEAR(grad[1], 0.053804507077173328, 1e-13);
  const auto fd = finite_diff_gradient({Protocol::switching, 0.5, 1.5}, 0.2, 0.1);
  EXPECT_NEAR(grad[0], fd[0], 1e-6);
  EXPECT_NEAR(grad[1], fd[1], 1e-6);
}

TEST(AnalyticGradientSwitching, OddUnderReflection) {
  const auto a = analytic_gradient_switching({0.5, 1.5, 0.3, -0.2});
  const auto b = analytic_gradient_switching({0.5, 1.5, -0.3, 0.2});
  EXPECT_NEAR(a[0], -b[0], 1e-14);
  EXPECT_NEAR(a[1], -b[1], 1e-14);
}

TEST(AnalyticGradientSwitching, MatchesFiniteDifferencesAtRandomPoints) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> tau_d(0.05, 0.95), w_d(1.1, 4.0), unit(-1.0, 1.0);
  int checked = 0;
  while (checked < 50) {
    const double tau = tau_d(rng), w = w_d(rng);
    const double g = unit(rng) * w, gp = unit(rng) * w;
    const AttackParams p{tau, w, g, gp};
    // Keep a margin so the stencil and ν₋ stay away from the boundary.
    if (boundary_residual(w, g, gp) > -0.05) continue;
    const auto analytic = analytic_gradient_switching(p);
    const auto fd = finite_diff_gradient({Protocol::switching, tau, w}, g, gp);
    EXPECT_NEAR(analytic[0], fd[0], 1e-6) << "tau=" << tau << " omega=" << w << " g=" << g << " g'=" << gp;
    EXPECT_NEAR(analytic[1], fd[1], 1e-6);
    ++checked;
  }
}

TEST(AnalyticGradientSwitching, RejectsBoundary) {
  EXPECT_THROW(analytic_gradient_switching({0.5, 1.2, 0.2, 0.2}), DomainError);
}

TEST(Hessian, NoSwitchingPositiveDefinite) {
  const Eigen::Matrix2d h = hessian_at_origin({Protocol::no_switching, 0.6, 1.2});
  EXPECT_GT(h(0, 0), 0.0);
  EXPECT_GT(h.determinant(), 0.0);
  EXPECT_NEAR(h(0, 1), h(1, 0), 1e-8);
  EXPECT_NEAR(h(0, 0), 1.1205924922243419, 1e-6);
  EXPECT_NEAR(h(0, 1), 0.45577883741831916, 1e-6);
}

TEST(Hessian, SwitchingSymmetricEntries) {
  for (const double tau : {0.2, 0.7}) {
    const Eigen::Matrix2d h = hessian_at_origin({Protocol::switching, tau, 1.5});
    EXPECT_NEAR(h(0, 0), h(1, 1), 1e-6 * h(0, 0));
    EXPECT_NEAR(h(0, 1), h(1, 0), 1e-8);
  }
}

TEST(Hessian, SwitchingIsTransmissivityFree) {
  const Eigen::Matrix2d a = hessian_at_origin({Protocol::switching, 0.2, 1.5});
  const Eigen::Matrix2d b = hessian_at_origin({Protocol::switching, 0.8, 1.5});
  EXPECT_TRUE(a.isApprox(b, 1e-5));
}

TEST(Hessian, DegenerateRegionRejected) {
  EXPECT_THROW(hessian_at_origin({Protocol::switching, 0.5, 1.0}), DomainError);
}

TEST(AnalyticHessianSwitching, ReferenceAndFiniteDifferences) {
  const Eigen::Matrix2d h = analytic_hessian_switching(1.5);
  EXPECT_NEAR(h(0, 0), 0.32173356709741028, 1e-14);
  EXPECT_NEAR(h(0, 1), 0.095045000270512486, 1e-14);
  for (const double w : {1.1, 1.5, 2.0, 5.0}) {
    const Eigen::Matrix2d a = analytic_hessian_switching(w);
    const Eigen::Matrix2d fd = hessian_at_origin({Protocol::switching, 0.5, w});
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) EXPECT_NEAR(fd(i, j), a(i, j), 1e-4 * std::abs(a(i, j))) << w;
    }
  }
}

TEST(AnalyticDetHSwitching, PositiveIncludingNearUnitNoise) {
  EXPECT_GT(analytic_detH_switching(1.2), 0.0);
  const double near_one = analytic_detH_switching(1.0 + 1e-4);
  EXPECT_TRUE(std::isfinite(near_one));
  EXPECT_GT(near_one, 0.0);
  EXPECT_NEAR(analytic_detH_switching(1.5), 0.094478936120802082, 1e-14);
  EXPECT_THROW(analytic_detH_switching(1.0), DomainError);
}

TEST(AnalyticDetHSwitching, EqualsDeterminantOfAnalyticHessian) {
  for (const double w : {1.01, 1.3, 3.0, 20.0}) {
    EXPECT_NEAR(analytic_detH_switching(w), analytic_hessian_switching(w).determinant(),
                1e-10 * analytic_detH_switching(w));
  }
}

TEST(AnalyticDetHNoSwitching, Values) {
  EXPECT_NEAR(analytic_detH_noswitching(0.6, 1.2), 1.0479931849911672, 1e-13);
  EXPECT_NEAR(analytic_detH_noswitching(0.3, 2.0), 0.024300157198484642, 1e-14);
  EXPECT_THROW(analytic_detH_noswitching(0.5, 1.0), DomainError);
  EXPECT_THROW(analytic_detH_noswitching(1.0, 1.2), DomainError);
  EXPECT_THROW(analytic_detH_noswitching(0.0, 1.2), DomainError);
}

TEST(AnalyticDetHNoSwitching, PositiveOnGrid) {
  for (double tau = 0.05; tau < 0.951; tau += 0.05) {
    for (double w = 1.05; w <= 10.0; w *= 1.1) EXPECT_GT(analytic_detH_noswitching(tau, w), 0.0);
  }
}

TEST(AnalyticDetHNoSwitching, MatchesFiniteDifferences) {
  for (const double tau : {0.1, 0.44, 0.9}) {
    for (const double w : {1.1, 1.5, 3.0, 8.0}) {
      const double fd = hessian_at_origin({Protocol::no_switching, tau, w}).determinant();
      const double analytic = analytic_detH_noswitching(tau, w);
      EXPECT_NEAR(fd, analytic, 1e-4 * analytic) << "tau=" << tau << " omega=" << w;
    }
  }
}

TEST(SecondDerivativeNoSwitching, ChainHolds) {
  EXPECT_TRUE(second_derivative_inequality_noswitching(0.44, 1.2));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> tau_d(0.001, 1.0), w_d(1.0005, 30.0);
  for (int i = 0; i < 100; ++i) {
    const double tau = tau_d(rng), w = w_d(rng);
    EXPECT_TRUE(second_derivative_inequality_noswitching(tau, w)) << tau << ", " << w;
  }
  EXPECT_TRUE(second_derivative_inequality_noswitching(1.0, 1.5));
  EXPECT_THROW(second_derivative_inequality_noswitching(0.5, 1.0), DomainError);
}

TEST(SecondDerivativeNoSwitching, MatchesFiniteDifferences) {
  for (const double tau : {0.2, 0.44, 0.8}) {
    for (const double w : {1.1, 1.2, 2.0, 5.0}) {
      const double fd = hessian_at_origin({Protocol::no_switching, tau, w})(0, 0);
      const double analytic = second_derivative_noswitching(tau, w);
      EXPECT_NEAR(fd, analytic, 1e-4 * analytic) << tau << ", " << w;
    }
  }
}

TEST(CriticalPoint, ReportFields) {
  const auto r = critical_point_report(Protocol::no_switching, 0.6, 1.2);
  EXPECT_TRUE(r.is_minimum);
  EXPECT_LT(r.det_relative_residual, 1e-4);
  EXPECT_LT(r.gradient_at_origin.norm(), 1e-6);
  const auto s = critical_point_report(Protocol::switching, 0.5, 1.5);
  EXPECT_EQ(s.analytic_det_H, analytic_detH_switching(1.5));
  EXPECT_TRUE(s.is_minimum);
  EXPECT_THROW(critical_point_report(Protocol::switching, 0.5, 1.0), DomainError);
  EXPECT_THROW(critical_point_report(Protocol::switching_mixed, 0.5, 1.5), DomainError);
}

TEST(CriticalPoint, OriginIsTheOnlyCriticalNode) {
  // Interior nodes only: the stencil must fit inside the region.
  const RateSurface s{Protocol::no_switching, 0.6, 1.2};
  const int n = 201;
  double best = INFINITY;
  double best_g = 1.0, best_gp = 1.0;
  int near_zero = 0;
  for (int i = 0; i < n; ++i) {
    const double g = -1.2 + 2.4 * (i + 1) / (n + 1);
    for (int j = 0; j < n; ++j) {
      const double gp = -1.2 + 2.4 * (j + 1) / (n + 1);
      const double h = default_gradient_step(1.2);
      if (boundary_residual(1.2, g, gp) > -10.0 * h || std::abs(g) >= 1.2 - 3 * h ||
          std::abs(gp) >= 1.2 - 3 * h) {
        continue;
      }
      const double norm = finite_diff_gradient(s, g, gp).norm();
      if (norm < best) {
        best = norm;
        best_g = g;
        best_gp = gp;
      }
      if (norm < 1e-6) ++near_zero;
    }
  }
  EXPECT_NEAR(best_g, 0.0, 1e-12);
  EXPECT_NEAR(best_gp, 0.0, 1e-12);
  EXPECT_EQ(near_zero, 1);
}

TEST(Minimality, NoSwitchingZeroRatePoint) {
  const auto r = verify_minimality(Protocol::no_switching, 0.44, 1.2, 101);
  EXPECT_TRUE(r.verdict);
  EXPECT_LT(std::abs(r.origin_rate), 2e-3);
  EXPECT_FALSE(r.boundary_rates.empty());
  for (const auto& b : r.boundary_rates) EXPECT_GT(b.rate, 0.0);
  EXPECT_TRUE(r.review.empty());
  EXPECT_LE(r.origin_rate, r.min_over_grid);
}

TEST(Minimality, Switching) {
  EXPECT_TRUE(verify_minimality(Protocol::switching, 0.44, 1.2, 101).verdict);
}

TEST(Minimality, DegenerateRegion) {
  const auto r = verify_minimality(Protocol::no_switching, 0.44, 1.0, 101);
  EXPECT_TRUE(r.verdict);
  EXPECT_TRUE(r.degenerate);
  ASSERT_EQ(r.grid_rates.size(), 1u);
  EXPECT_EQ(r.grid_rates[0].g, 0.0);
  EXPECT_TRUE(r.boundary_rates.empty());
}

TEST(Minimality, IndependentOfWorkerCount) {
  setenv("GAUSSKEY_THREADS", "1", 1);
  const auto a = verify_minimality(Protocol::no_switching, 0.3, 2.0, 61);
  setenv("GAUSSKEY_THREADS", "4", 1);
  const auto b = verify_minimality(Protocol::no_switching, 0.3, 2.0, 61);
  unsetenv("GAUSSKEY_THREADS");
  ASSERT_EQ(a.grid_rates.size(), b.grid_rates.size());
  for (std::size_t i = 0; i < a.grid_rates.size(); ++i) {
    EXPECT_EQ(a.grid_rates[i].g, b.grid_rates[i].g);
    EXPECT_EQ(a.grid_rates[i].rate, b.grid_rates[i].rate);
  }
}

TEST(Minimality, ParameterSweepBothProtocols) {
  for (const Protocol proto : {Protocol::no_switching, Protocol::switching}) {
    for (double tau = 0.1; tau < 0.95; tau += 0.1) {
      for (const double w : {1.1, 1.2, 1.5, 2.0, 5.0}) {
        EXPECT_TRUE(verify_minimality(proto, tau, w, 41).verdict)
            << to_string(proto) << " tau=" << tau << " omega=" << w;
      }
    }
  }
}

TEST(ZeroRate, NoSwitchingAtOmega1p2) {
  const auto start = std::chrono::steady_clock::now();
  const double tau = find_zero_rate_transmissivity(Protocol::no_switching, 1.2);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_NEAR(tau, 0.44062865429113004, 1e-9);
  EXPECT_NEAR(tau, 0.44, 0.005);
  EXPECT_LT(std::abs(key_rate_noswitching({tau, 1.2, 0.0, 0.0})), 1e-10);
  EXPECT_LT(std::chrono::duration<double>(elapsed).count(), 1.0);
  EXPECT_NEAR(find_zero_rate_transmissivity(Protocol::no_switching, 1.3), 0.52506576337821206, 1e-9);
}

TEST(ZeroRate, PureLossHasNoRoot) {
  EXPECT_THROW(find_zero_rate_transmissivity(Protocol::no_switching, 1.0), DomainError);
  for (double tau = 0.01; tau < 1.0; tau += 0.01) EXPECT_GT(key_rate_noswitching({tau, 1.0, 0.0, 0.0}), 0.0);
}

TEST(ZeroRate, IncreasesWithNoise) {
  double previous = 0.0;
  for (const double w : {1.1, 1.2, 1.4}) {
    const double tau = find_zero_rate_transmissivity(Protocol::no_switching, w);
    EXPECT_GT(tau, previous);
    previous = tau;
  }
}
