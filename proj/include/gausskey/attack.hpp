#pragma once

// Two-mode Gaussian attack: Eve's ancillas e, E share the CM
//   [[ωI, G], [G, ωI]],  G = diag(g, g'),
// and are mixed with the two signal modes on beam splitters of transmissivity τ.

#include <string>
#include <vector>

#include "gausskey/covariance.hpp"

namespace gausskey {

/// Tolerance on the boundary equality ω|g+g'| = ω² + gg' − 1.
inline constexpr double kBoundaryTolerance = 1e-9;

struct AttackParams {
  double tau = 1.0;    ///< transmissivity, (0, 1]
  double omega = 1.0;  ///< thermal variance ω = 2n̄ + 1 ≥ 1
  double g = 0.0;      ///< q-quadrature correlation
  double g_prime = 0.0;  ///< p-quadrature correlation
};

/// A point of the (g, g') correlation plane.
struct Correlation {
  double g = 0.0;
  double g_prime = 0.0;

  friend bool operator==(const Correlation&, const Correlation&) = default;
};

/// Which physicality constraint a point violates; `none` when it passes.
enum class Constraint { none = 0, g_bound = 1, g_prime_bound = 2, uncertainty = 3 };

std::string describe(Constraint c);

CovMat attack_cm(double omega, double g, double g_prime);

/// First violated constraint, checked in the order |g| < ω, |g'| < ω,
/// ω|g+g'| ≤ ω² + gg' − 1. With strict = false the third inequality is
/// allowed kBoundaryTolerance of slack; with strict = true it must hold with
/// more than that margin, so boundary points are excluded.
/// Throws DomainError for ω < 1.
Constraint violated_constraint(const AttackParams& params, bool strict = false);

bool check_constraints(const AttackParams& params, bool strict = false);

/// Throws PhysicalityError naming the violated constraint.
void require_physical(const AttackParams& params);

/// ω|g+g'| − (ω² + gg' − 1): ≤ 0 inside the region, 0 on the boundary.
double boundary_residual(double omega, double g, double g_prime);

struct BoundaryCurve {
  double omega = 1.0;
  std::vector<Correlation> samples;
};

/// Points with ω|g+g'| = ω² + gg' − 1, both sign branches of g + g'.
/// `n_samples` uniform g values in the open interval (−ω, ω) are tried on
/// each branch; only consistent solutions with |g'| < ω are kept.
/// Samples are sorted by (g, g') and de-duplicated.
BoundaryCurve boundary_curve(double omega, int n_samples);

/// Uniform resolution × resolution grid over the open square (−ω, ω)²,
/// filtered to physical points, with the origin always present.
/// Sorted by g, then g'.
std::vector<Correlation> physical_grid(double omega, int resolution);

}  // namespace gausskey
