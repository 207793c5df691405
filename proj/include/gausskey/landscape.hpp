#pragma once

// Critical-point and minimality analysis of the key rate over the (g, g')
// plane at fixed (τ, ω).

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gausskey/attack.hpp"
#include "gausskey/protocol.hpp"

namespace gausskey {

/// ln((1+x)/(1−x)) for 0 < x < 1.
double f_log(double x);

/// The rate as a function of (g, g') at fixed protocol, τ and ω.
struct RateSurface {
  Protocol protocol = Protocol::no_switching;
  double tau = 0.5;
  double omega = 1.0;

  /// Throws PhysicalityError outside the region.
  double operator()(double g, double g_prime) const;
};

double default_gradient_step(double omega);  ///< 1e-5·max(1, ω)
double default_hessian_step(double omega);   ///< 1e-4·max(1, ω)

/// Central differences. Every point within 2·step of (g, g') must lie
/// strictly inside the region; otherwise throws DomainError. step ≤ 0
/// selects the default.
Eigen::Vector2d finite_diff_gradient(const RateSurface& surface, double g, double g_prime,
                                     double step = 0.0);

/// Closed-form gradient of the same-quadrature switching rate. Requires a
/// strict interior point and ν₋ > 1.
Eigen::Vector2d analytic_gradient_switching(const AttackParams& params);

/// Central second differences at the origin. Throws DomainError for ω ≤ 1.
Eigen::Matrix2d hessian_at_origin(const RateSurface& surface, double step = 0.0);

/// Hessian of the switching rate at the origin (τ-independent).
Eigen::Matrix2d analytic_hessian_switching(double omega);
double analytic_detH_switching(double omega);

/// Hessian of the no-switching rate at the origin.
Eigen::Matrix2d analytic_hessian_noswitching(double tau, double omega);
double analytic_detH_noswitching(double tau, double omega);

/// ∂²R/∂g² at the origin, no switching. Valid for 0 < τ ≤ 1, ω > 1.
double second_derivative_noswitching(double tau, double omega);

/// Lower bound 1/(2 ln2 (ω²−1)(λ̄+τ)) of second_derivative_noswitching,
/// with λ̄ = 1 + (1−τ)ω.
double second_derivative_bound_noswitching(double tau, double omega);

/// Checks ∂²R/∂g² > bound > 0.
bool second_derivative_inequality_noswitching(double tau, double omega);

struct CriticalPointReport {
  Protocol protocol = Protocol::no_switching;
  double tau = 0.0;
  double omega = 0.0;
  Eigen::Vector2d gradient_at_origin = Eigen::Vector2d::Zero();
  Eigen::Matrix2d hessian_at_origin = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d analytic_hessian = Eigen::Matrix2d::Zero();
  double det_H = 0.0;
  double analytic_det_H = 0.0;
  double det_relative_residual = 0.0;
  bool is_minimum = false;
};

/// Gradient and Hessian at the origin, numeric and closed form. Supports the
/// no-switching and same-quadrature switching protocols; ω must exceed 1.
/// Steps ≤ 0 select the defaults.
CriticalPointReport critical_point_report(Protocol protocol, double tau, double omega,
                                          double gradient_step = 0.0, double hessian_step = 0.0);

struct RatePoint {
  double g = 0.0;
  double g_prime = 0.0;
  double rate = 0.0;
};

struct LandscapeReport {
  std::vector<RatePoint> grid_rates;      ///< origin included, sorted by (g, g')
  std::vector<RatePoint> boundary_rates;  ///< sorted by (g, g')
  double origin_rate = 0.0;
  double min_over_grid = 0.0;  ///< over nonzero grid and boundary points
  bool verdict = false;
  bool degenerate = false;     ///< ω = 1: the region is the single point (0, 0)
  /// Nonzero points whose rate is within kReviewMargin of the origin rate.
  std::vector<RatePoint> review;
};

/// Required excess of R(g, g') over R(0, 0) at every nonzero point.
inline constexpr double kMinimalityMargin = 1e-12;
inline constexpr double kReviewMargin = 1e-9;

/// Boundary samples per branch used by verify_minimality.
int boundary_samples_for(int resolution);

/// Rates over physical_grid(ω, resolution) and boundary_curve, evaluated in
/// parallel with the batched kernel; the result does not depend on the
/// worker count. Requires 0 < τ < 1 and ω ≥ 1.
LandscapeReport verify_minimality(Protocol protocol, double tau, double omega, int resolution);

/// τ in the bracket where R(τ, ω, 0, 0) = 0, found by bisection to
/// |R| < 1e-10. Throws DomainError when R has no sign change on the bracket.
double find_zero_rate_transmissivity(Protocol protocol, double omega,
                                     std::pair<double, double> bracket = {0.01, 0.99});

}  // namespace gausskey
