#include "gausskey/attack.hpp"

#include <algorithm>
#include <cmath>

#include "gausskey/errors.hpp"

namespace gausskey {

namespace {

// Grid nodes −ω + 2ω(i+1)/(n+1), i = 0..n−1: open at both ends, and the
// middle node is exactly 0 for odd n.
double open_grid_node(double omega, int i, int n) {
  const int twice_offset = 2 * (i + 1) - (n + 1);
  return omega * static_cast<double>(twice_offset) / static_cast<double>(n + 1);
}

void sort_unique(std::vector<Correlation>& points) {
  auto less = [](const Correlation& a, const Correlation& b) {
    return a.g < b.g || (a.g == b.g && a.g_prime < b.g_prime);
  };
  std::sort(points.begin(), points.end(), less);
  points.erase(std::unique(points.begin(), points.end()), points.end());
}

}  // namespace

std::string describe(Constraint c) {
  switch (c) {
    case Constraint::none: return "none";
    case Constraint::g_bound: return "constraint 1: |g| < omega";
    case Constraint::g_prime_bound: return "constraint 2: |g'| < omega";
    case Constraint::uncertainty: return "constraint 3: omega*|g+g'| <= omega^2 + g*g' - 1";
  }
  return "unknown";
}

CovMat attack_cm(double omega, double g, double g_prime) {
  Eigen::MatrixXd m = omega * Eigen::MatrixXd::Identity(4, 4);
  m(0, 2) = m(2, 0) = g;
  m(1, 3) = m(3, 1) = g_prime;
  return CovMat(std::move(m));
}

double boundary_residual(double omega, double g, double g_prime) {
  return omega * std::abs(g + g_prime) - (omega * omega + g * g_prime - 1.0);
}

Constraint violated_constraint(const AttackParams& p, bool strict) {
  if (!(p.omega >= 1.0)) throw DomainError("attack: omega must be >= 1");
  if (!(std::abs(p.g) < p.omega)) return Constraint::g_bound;
  if (!(std::abs(p.g_prime) < p.omega)) return Constraint::g_prime_bound;
  const double r = boundary_residual(p.omega, p.g, p.g_prime);
  const bool ok = strict ? r < -kBoundaryTolerance : r <= kBoundaryTolerance;
  return ok ? Constraint::none : Constraint::uncertainty;
}

bool check_constraints(const AttackParams& params, bool strict) {
  return violated_constraint(params, strict) == Constraint::none;
}

void require_physical(const AttackParams& params) {
  if (!(params.tau >= 0.0 && params.tau <= 1.0)) {
    throw DomainError("attack: tau must lie in [0, 1]");
  }
  const Constraint c = violated_constraint(params, false);
  if (c != Constraint::none) {
    throw PhysicalityError("unphysical attack correlations, violates " + describe(c),
                           static_cast<int>(c));
  }
}

BoundaryCurve boundary_curve(double omega, int n_samples) {
  if (!(omega > 1.0)) throw DomainError("boundary_curve: region is empty for omega <= 1");
  if (n_samples < 2) throw DomainError("boundary_curve: need at least 2 samples");

  BoundaryCurve curve{omega, {}};
  curve.samples.reserve(2 * static_cast<std::size_t>(n_samples));
  for (const double sign : {1.0, -1.0}) {
    for (int i = 0; i < n_samples; ++i) {
      const double g = open_grid_node(omega, i, n_samples);
      // ω·s·(g + g') = ω² + gg' − 1 is linear in g'.
      const double g_prime = (omega * omega - 1.0 - sign * omega * g) / (sign * omega - g);
      if (!(std::abs(g_prime) < omega)) continue;
      if (sign * (g + g_prime) < 0.0) continue;  // wrong branch of |g + g'|
      if (std::abs(boundary_residual(omega, g, g_prime)) > kBoundaryTolerance) continue;
      curve.samples.push_back({g, g_prime});
    }
  }
  sort_unique(curve.samples);
  return curve;
}

std::vector<Correlation> physical_grid(double omega, int resolution) {
  if (!(omega >= 1.0)) throw DomainError("physical_grid: omega must be >= 1");
  if (resolution < 2) throw DomainError("physical_grid: resolution must be >= 2");

  std::vector<Correlation> points;
  points.push_back({0.0, 0.0});
  for (int i = 0; i < resolution; ++i) {
    const double g = open_grid_node(omega, i, resolution);
    for (int j = 0; j < resolution; ++j) {
      const double g_prime = open_grid_node(omega, j, resolution);
      if (check_constraints({1.0, omega, g, g_prime}, false)) points.push_back({g, g_prime});
    }
  }
  sort_unique(points);
  return points;
}

}  // namespace gausskey
