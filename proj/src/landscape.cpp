#include "gausskey/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gausskey/errors.hpp"
#include "gausskey/kernels.hpp"
#include "gausskey/parallel.hpp"
#include "gausskey/rates.hpp"

namespace gausskey {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_open_tau(double tau, const char* what) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw DomainError(std::string(what) + ": tau must lie in (0, 1)");
  }
}

void require_nondegenerate(double omega, const char* what) {
  if (!(omega > 1.0)) {
    throw DomainError(std::string(what) +
                      ": degenerate region, omega <= 1 leaves only the point (0, 0)");
  }
}

bool strictly_inside(double omega, double g, double g_prime) {
  return violated_constraint({0.5, omega, g, g_prime}, true) == Constraint::none;
}

bool less_gp(const RatePoint& a, const RatePoint& b) {
  return a.g < b.g || (a.g == b.g && a.g_prime < b.g_prime);
}

std::vector<RatePoint> evaluate(const kernels::RateConstants& c,
                                const std::vector<Correlation>& points) {
  const std::size_t n = points.size();
  std::vector<double> g(n), gp(n), rate(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = points[i].g;
    gp[i] = points[i].g_prime;
  }
  const kernels::Isa isa = kernels::best_isa();
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    const std::size_t len = end - begin;
    kernels::rate_batch(c, std::span(g).subspan(begin, len), std::span(gp).subspan(begin, len),
                        std::span(rate).subspan(begin, len), isa);
  });
  std::vector<RatePoint> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {g[i], gp[i], rate[i]};
  return out;
}

}  // namespace

double f_log(double x) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("f_log: argument must lie in (0, 1)");
  return std::log1p(x) - std::log1p(-x);
}

double RateSurface::operator()(double g, double g_prime) const {
  return key_rate(protocol, {tau, omega, g, g_prime});
}

double default_gradient_step(double omega) { return 1e-5 * std::max(1.0, omega); }
double default_hessian_step(double omega) { return 1e-4 * std::max(1.0, omega); }

Eigen::Vector2d finite_diff_gradient(const RateSurface& s, double g, double g_prime, double step) {
  const double h = step > 0.0 ? step : default_gradient_step(s.omega);
  for (const double dg : {-2.0 * h, 0.0, 2.0 * h}) {
    for (const double dgp : {-2.0 * h, 0.0, 2.0 * h}) {
      if (!strictly_inside(s.omega, g + dg, g_prime + dgp)) {
        throw DomainError("finite_diff_gradient: stencil leaves the physical region at (" +
                          std::to_string(g) + ", " + std::to_string(g_prime) + ")");
      }
    }
  }
  return {(s(g + h, g_prime) - s(g - h, g_prime)) / (2.0 * h),
          (s(g, g_prime + h) - s(g, g_prime - h)) / (2.0 * h)};
}

Eigen::Vector2d analytic_gradient_switching(const AttackParams& p) {
  require_physical(p);
  if (!strictly_inside(p.omega, p.g, p.g_prime)) {
    throw DomainError("analytic_gradient_switching: point is on or near the boundary");
  }
  const double w = p.omega;
  const double nu_plus = std::sqrt((w + p.g) * (w + p.g_prime));
  const double nu_minus = std::sqrt((w - p.g) * (w - p.g_prime));
  if (!(nu_minus > 1.0)) {
    throw DomainError("analytic_gradient_switching: nu_minus <= 1, too close to the boundary");
  }
  const double f_plus = f_log(1.0 / nu_plus) / nu_plus;
  const double f_minus = f_log(1.0 / nu_minus) / nu_minus;
  auto component = [&](double x, double other) {
    return (f_minus * (w - other) - f_plus * (w + other) - 2.0 * x / (w * w - x * x)) /
           (8.0 * kLn2);
  };
  return {component(p.g, p.g_prime), component(p.g_prime, p.g)};
}

Eigen::Matrix2d hessian_at_origin(const RateSurface& s, double step) {
  require_nondegenerate(s.omega, "hessian_at_origin");
  const double h = step > 0.0 ? step : default_hessian_step(s.omega);
  const double r0 = s(0.0, 0.0);
  const double h11 = (s(h, 0.0) - 2.0 * r0 + s(-h, 0.0)) / (h * h);
  const double h22 = (s(0.0, h) - 2.0 * r0 + s(0.0, -h)) / (h * h);
  const double h12 = (s(h, h) - s(h, -h) - s(-h, h) + s(-h, -h)) / (4.0 * h * h);
  Eigen::Matrix2d hess;
  hess << h11, h12, h12, h22;
  return hess;
}

Eigen::Matrix2d analytic_hessian_switching(double omega) {
  require_nondegenerate(omega, "analytic_hessian_switching");
  const double w2m1 = omega * omega - 1.0;
  const double f_term = f_log(1.0 / omega) / (8.0 * omega);
  const double diag = (1.0 / (4.0 * omega * omega * w2m1) + f_term) / kLn2;
  const double off = (1.0 / (4.0 * w2m1) - f_term) / kLn2;
  Eigen::Matrix2d hess;
  hess << diag, off, off, diag;
  return hess;
}

double analytic_detH_switching(double omega) {
  require_nondegenerate(omega, "analytic_detH_switching");
  const double w2 = omega * omega;
  return (w2 + 1.0) * (omega * f_log(1.0 / omega) - 1.0) /
         (16.0 * kLn2 * kLn2 * w2 * w2 * (w2 - 1.0));
}

namespace {

struct NoSwitchingTerms {
  double lambda_bar;
  double first;  // 1/(2 ln2 (ω²−1)(λ̄+τ))
  double thermal;
  double loss;
};

NoSwitchingTerms noswitching_terms(double tau, double omega) {
  const double lambda_bar = 1.0 + (1.0 - tau) * omega;
  const double loss_coeff = (1.0 - tau) * (1.0 - tau);
  NoSwitchingTerms t{};
  t.lambda_bar = lambda_bar;
  t.first = 1.0 / (2.0 * kLn2 * (omega * omega - 1.0) * (lambda_bar + tau));
  t.thermal = f_log(1.0 / omega) / (8.0 * kLn2 * omega);
  t.loss = loss_coeff == 0.0 ? 0.0
                             : loss_coeff * f_log(tau / lambda_bar) / (8.0 * kLn2 * tau * lambda_bar);
  return t;
}

void require_noswitching_domain(double tau, double omega, const char* what) {
  require_nondegenerate(omega, what);
  if (!(tau > 0.0 && tau <= 1.0)) throw DomainError(std::string(what) + ": tau must lie in (0, 1]");
}

}  // namespace

double second_derivative_noswitching(double tau, double omega) {
  require_noswitching_domain(tau, omega, "second_derivative_noswitching");
  const auto t = noswitching_terms(tau, omega);
  return t.first + t.thermal - t.loss;
}

double second_derivative_bound_noswitching(double tau, double omega) {
  require_noswitching_domain(tau, omega, "second_derivative_bound_noswitching");
  return noswitching_terms(tau, omega).first;
}

bool second_derivative_inequality_noswitching(double tau, double omega) {
  const double bound = second_derivative_bound_noswitching(tau, omega);
  return second_derivative_noswitching(tau, omega) > bound && bound > 0.0;
}

Eigen::Matrix2d analytic_hessian_noswitching(double tau, double omega) {
  require_nondegenerate(omega, "analytic_hessian_noswitching");
  require_open_tau(tau, "analytic_hessian_noswitching");
  const auto t = noswitching_terms(tau, omega);
  const double diag = t.first + t.thermal - t.loss;
  const double off = 2.0 * t.first - diag;  // H11 + H12 = 1/(ln2 (ω²−1)(λ̄+τ))
  Eigen::Matrix2d hess;
  hess << diag, off, off, diag;
  return hess;
}

double analytic_detH_noswitching(double tau, double omega) {
  require_nondegenerate(omega, "analytic_detH_noswitching");
  require_open_tau(tau, "analytic_detH_noswitching");
  const double lambda_bar = 1.0 + (1.0 - tau) * omega;
  const double d1 = tau * lambda_bar * f_log(1.0 / omega);
  const double d2 = omega * (1.0 - tau) * (1.0 - tau) * f_log(tau / lambda_bar);
  return (d1 - d2) / (4.0 * kLn2 * kLn2 * tau * (lambda_bar + tau) * lambda_bar * omega *
                      (omega * omega - 1.0));
}

CriticalPointReport critical_point_report(Protocol protocol, double tau, double omega,
                                          double gradient_step, double hessian_step) {
  require_nondegenerate(omega, "critical_point_report");
  require_open_tau(tau, "critical_point_report");
  if (protocol == Protocol::switching_mixed) {
    throw DomainError("critical_point_report: no closed-form Hessian for switching-mixed");
  }
  const RateSurface surface{protocol, tau, omega};
  CriticalPointReport r;
  r.protocol = protocol;
  r.tau = tau;
  r.omega = omega;
  r.gradient_at_origin = finite_diff_gradient(surface, 0.0, 0.0, gradient_step);
  r.hessian_at_origin = hessian_at_origin(surface, hessian_step);
  r.det_H = r.hessian_at_origin.determinant();
  if (protocol == Protocol::switching) {
    r.analytic_hessian = analytic_hessian_switching(omega);
    r.analytic_det_H = analytic_detH_switching(omega);
  } else {
    r.analytic_hessian = analytic_hessian_noswitching(tau, omega);
    r.analytic_det_H = analytic_detH_noswitching(tau, omega);
  }
  r.det_relative_residual = std::abs(r.det_H - r.analytic_det_H) / std::abs(r.analytic_det_H);
  r.is_minimum = r.det_H > 0.0 && r.hessian_at_origin(0, 0) > 0.0;
  return r;
}

int boundary_samples_for(int resolution) { return 2 * std::max(resolution, 2); }

LandscapeReport verify_minimality(Protocol protocol, double tau, double omega, int resolution) {
  require_open_tau(tau, "verify_minimality");
  if (!(omega >= 1.0)) throw DomainError("verify_minimality: omega must be >= 1");
  if (resolution < 2) throw DomainError("verify_minimality: resolution must be >= 2");

  const auto constants = kernels::make_rate_constants(protocol, tau, omega);
  LandscapeReport report;
  report.origin_rate = kernels::rate_point(constants, 0.0, 0.0);

  if (omega == 1.0) {
    report.grid_rates = {{0.0, 0.0, report.origin_rate}};
    report.min_over_grid = report.origin_rate;
    report.verdict = true;
    report.degenerate = true;
    return report;
  }

  report.grid_rates = evaluate(constants, physical_grid(omega, resolution));
  report.boundary_rates =
      evaluate(constants, boundary_curve(omega, boundary_samples_for(resolution)).samples);
  std::sort(report.grid_rates.begin(), report.grid_rates.end(), less_gp);
  std::sort(report.boundary_rates.begin(), report.boundary_rates.end(), less_gp);

  report.verdict = true;
  bool any_nonzero = false;
  double min_rate = 0.0;
  auto visit = [&](const RatePoint& pt) {
    if (pt.g == 0.0 && pt.g_prime == 0.0) return;
    const double excess = pt.rate - report.origin_rate;
    if (!any_nonzero || pt.rate < min_rate) min_rate = pt.rate;
    any_nonzero = true;
    if (!(excess >= kMinimalityMargin)) report.verdict = false;
    if (std::abs(excess) < kReviewMargin) report.review.push_back(pt);
  };
  for (const auto& pt : report.grid_rates) visit(pt);
  for (const auto& pt : report.boundary_rates) visit(pt);
  report.min_over_grid = any_nonzero ? min_rate : report.origin_rate;
  if (report.origin_rate > report.min_over_grid) report.verdict = false;
  return report;
}

double find_zero_rate_transmissivity(Protocol protocol, double omega,
                                     std::pair<double, double> bracket) {
  auto [lo, hi] = bracket;
  if (!(0.0 < lo && lo < hi && hi < 1.0)) {
    throw DomainError("find_zero_rate_transmissivity: bracket must satisfy 0 < lo < hi < 1");
  }
  auto rate = [&](double tau) { return key_rate(protocol, {tau, omega, 0.0, 0.0}); };
  double r_lo = rate(lo);
  const double r_hi = rate(hi);
  if (r_lo == 0.0) return lo;
  if (r_hi == 0.0) return hi;
  if ((r_lo > 0.0) == (r_hi > 0.0)) {
    throw DomainError("find_zero_rate_transmissivity: rate has no sign change on [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double r_mid = rate(mid);
    if (std::abs(r_mid) < 1e-10 || mid <= lo || mid >= hi) break;
    if ((r_mid > 0.0) == (r_lo > 0.0)) {
      lo = mid;
      r_lo = r_mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

}  // namespace gausskey
