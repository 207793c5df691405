#include "gausskey/rates.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <numbers>
#include <string>

#include "gausskey/errors.hpp"
#include "gausskey/kernels.hpp"

namespace gausskey {

namespace {

constexpr double kHalfE = std::numbers::e / 2.0;

void require_finite_mu(double mu, const char* what) {
  if (!(mu > 1.0) || !std::isfinite(mu)) {
    throw DomainError(std::string(what) + ": mu must be finite and > 1");
  }
}

// Closed-form rates have log singularities at τ = 0 and τ = 1.
void require_rate_params(const AttackParams& p) {
  require_physical(p);
  if (!(p.tau > 0.0 && p.tau < 1.0)) {
    throw DomainError("boundary transmissivity: rate formulas need 0 < tau < 1, got tau = " +
                      std::to_string(p.tau));
  }
}

void require_positive_tau(const AttackParams& p) {
  require_physical(p);
  if (!(p.tau > 0.0)) throw DomainError("divergent conditional spectrum: tau must be > 0");
}

// Variance seen by Bob after Alice's heterodyne projects her mode.
double conditional_bob_variance(const AttackParams& p) {
  return p.tau + (1.0 - p.tau) * p.omega;
}

Spectrum make_spectrum(std::initializer_list<double> values) {
  std::vector<double> v(values);
  std::sort(v.begin(), v.end(), std::greater<>());
  return Spectrum{std::move(v)};
}

Spectrum eve_spectrum(const AttackParams& p) {
  const double w = p.omega;
  return make_spectrum({std::sqrt((w + p.g) * (w + p.g_prime)),
                        std::sqrt(std::max((w - p.g) * (w - p.g_prime), 0.0))});
}

double entropy_sum(const Spectrum& s) {
  double total = 0.0;
  for (double nu : s.values) total += entropy_h(nu);
  return total;
}

Spectrum scaled(const Spectrum& s, double factor) {
  Spectrum out = s;
  for (double& v : out.values) v *= factor;
  return out;
}

// Mutual information carried by one quadrature, homodyne (½log₂ V/V|α) or
// heterodyne (½log₂ (V+1)/(V|α+1)).
double quadrature_information(double v, double v_cond, bool heterodyne) {
  const double shift = heterodyne ? 1.0 : 0.0;
  return 0.5 * std::log2((v + shift) / (v_cond + shift));
}

}  // namespace

DerivedCoefficients derived_coefficients(const AttackParams& p, double mu) {
  const double loss = 1.0 - p.tau;
  DerivedCoefficients d{};
  d.Lambda = p.tau * (mu + 1.0) + loss * p.omega;
  d.Phi = std::sqrt(p.tau * mu * (mu + 2.0));  // τ[(μ+1)² − 1]
  d.Lambda_tilde = d.Lambda - p.tau;
  d.lambda_plus = 1.0 + loss * (p.omega + p.g);
  d.lambda_minus = 1.0 + loss * (p.omega - p.g);
  d.lambda_prime_plus = 1.0 + loss * (p.omega + p.g_prime);
  d.lambda_prime_minus = 1.0 + loss * (p.omega - p.g_prime);
  d.lambda_bar = 1.0 + loss * p.omega;

  const double lp1 = d.Lambda + 1.0;
  auto numerators = [&](double g, double& k, double& k_tilde, double& denom) {
    const double cross = g * g * loss * loss;
    k = (mu + 1.0) * (lp1 * d.lambda_bar - cross) + p.tau * lp1;
    k_tilde = g * loss * p.tau * mu * (mu + 2.0);
    denom = lp1 * lp1 - cross;
  };
  numerators(p.g, d.k, d.k_tilde, d.denom);
  numerators(p.g_prime, d.k_prime, d.k_tilde_prime, d.denom_prime);
  return d;
}

CovMat total_cm(const AttackParams& p, double mu) {
  require_physical(p);
  require_finite_mu(mu, "total_cm");
  const auto d = derived_coefficients(p, mu);
  const double loss = 1.0 - p.tau;

  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(8, 8);
  const Eigen::Matrix2d eye = Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  const Eigen::Matrix2d g = Eigen::Vector2d(p.g, p.g_prime).asDiagonal();
  // a = 0, a' = 1, B = 2, B' = 3
  v.block<2, 2>(0, 0) = (mu + 1.0) * eye;
  v.block<2, 2>(2, 2) = (mu + 1.0) * eye;
  v.block<2, 2>(4, 4) = d.Lambda * eye;
  v.block<2, 2>(6, 6) = d.Lambda * eye;
  v.block<2, 2>(0, 4) = v.block<2, 2>(4, 0) = d.Phi * z;
  v.block<2, 2>(2, 6) = v.block<2, 2>(6, 2) = d.Phi * z;
  v.block<2, 2>(4, 6) = v.block<2, 2>(6, 4) = loss * g;
  return CovMat(std::move(v));
}

CovMat total_cm_pipeline(const AttackParams& p, double mu) {
  require_physical(p);
  require_finite_mu(mu, "total_cm_pipeline");
  // a = 0, A = 1, a' = 2, A' = 3, e = 4, E = 5
  CovMat v = direct_sum(direct_sum(tmsv_cm(mu + 1.0), tmsv_cm(mu + 1.0)),
                        attack_cm(p.omega, p.g, p.g_prime));
  v = beamsplitter_apply(v, 1, 4, p.tau);
  v = beamsplitter_apply(v, 3, 5, p.tau);
  const std::array<int, 4> keep{0, 2, 1, 3};
  return v.select_modes(keep);
}

double mutual_information(const AttackParams& p, const ProtocolSpec& spec,
                          MutualInfoConvention convention) {
  require_physical(p);
  if (!(p.tau > 0.0)) throw DomainError("mutual_information: tau must be > 0");
  const double v_cond = conditional_bob_variance(p);
  const bool heterodyne = spec.variant == Protocol::no_switching;

  if (spec.asymptotic) {
    if (!(spec.mu > 0.0)) throw DomainError("mutual_information: mu must be positive");
    const double shift = heterodyne ? 1.0 : 0.0;
    const double per_use = std::log2(p.tau * spec.mu / (v_cond + shift));
    return heterodyne ? 2.0 * per_use : per_use;
  }
  require_finite_mu(spec.mu, "mutual_information");
  const double v_bob = convention == MutualInfoConvention::entanglement_based
                           ? p.tau * (spec.mu + 1.0) + (1.0 - p.tau) * p.omega
                           : p.tau * spec.mu + (1.0 - p.tau) * p.omega;
  // Two channel uses per block; heterodyne reads both quadratures of each.
  const double quadratures_per_block = heterodyne ? 4.0 : 2.0;
  return quadratures_per_block * quadrature_information(v_bob, v_cond, heterodyne);
}

Spectrum total_spectrum_asymptotic(const AttackParams& p, double mu) {
  require_physical(p);
  auto eve = eve_spectrum(p);
  const double big = (1.0 - p.tau) * mu;
  return make_spectrum({eve[0], eve[1], big, big});
}

CovMat conditional_cm_noswitching(const AttackParams& p, double mu) {
  require_physical(p);
  require_finite_mu(mu, "conditional_cm_noswitching");
  const auto d = derived_coefficients(p, mu);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(4, 4);
  v(0, 0) = v(2, 2) = d.k / d.denom;
  v(1, 1) = v(3, 3) = d.k_prime / d.denom_prime;
  v(0, 2) = v(2, 0) = d.k_tilde / d.denom;
  v(1, 3) = v(3, 1) = d.k_tilde_prime / d.denom_prime;
  return CovMat(std::move(v));
}

CovMat conditional_cm_switching(const AttackParams& p, double mu, Quadrature quadrature) {
  require_physical(p);
  require_finite_mu(mu, "conditional_cm_switching");
  const auto d = derived_coefficients(p, mu);
  const double loss = 1.0 - p.tau;
  const double corr = (quadrature == Quadrature::q ? p.g : p.g_prime) * loss;
  const double det = d.Lambda * d.Lambda - corr * corr;
  const double phi2 = d.Phi * d.Phi;
  const int row = quadrature == Quadrature::q ? 0 : 1;

  Eigen::MatrixXd v = (mu + 1.0) * Eigen::MatrixXd::Identity(4, 4);
  v(row, row) -= phi2 * d.Lambda / det;
  v(row + 2, row + 2) -= phi2 * d.Lambda / det;
  v(row, row + 2) = v(row + 2, row) = phi2 * corr / det;
  return CovMat(std::move(v));
}

Spectrum conditional_spectrum_noswitching(const AttackParams& p) {
  require_positive_tau(p);
  const auto d = derived_coefficients(p, 0.0);
  return make_spectrum({std::sqrt(d.lambda_plus * d.lambda_prime_plus) / p.tau,
                        std::sqrt(d.lambda_minus * d.lambda_prime_minus) / p.tau});
}

double holevo_noswitching(const AttackParams& p, double mu) {
  require_rate_params(p);
  if (!(mu > 1.0)) throw DomainError("holevo_noswitching: mu must be > 1");
  const double s_total = entropy_sum(eve_spectrum(p)) + 2.0 * std::log2(kHalfE * (1.0 - p.tau) * mu);
  return s_total - entropy_sum(conditional_spectrum_noswitching(p));
}

SwitchingSpectra conditional_spectra_switching(const AttackParams& p) {
  require_positive_tau(p);
  const double scale = (1.0 - p.tau) / p.tau;
  const double w = p.omega;
  return SwitchingSpectra{
      make_spectrum({std::sqrt(scale * (w + p.g)), std::sqrt(scale * (w - p.g))}),
      make_spectrum({std::sqrt(scale * (w + p.g_prime)), std::sqrt(scale * (w - p.g_prime))}),
      make_spectrum({std::sqrt(scale * w), std::sqrt(scale * w)}),
  };
}

double key_rate(Protocol protocol, const AttackParams& p) {
  require_rate_params(p);
  const auto c = kernels::make_rate_constants(protocol, p.tau, p.omega);
  return kernels::rate_point(c, p.g, p.g_prime);
}

double key_rate_noswitching(const AttackParams& p) { return key_rate(Protocol::no_switching, p); }
double key_rate_switching(const AttackParams& p) { return key_rate(Protocol::switching, p); }
double key_rate_switching_mixed(const AttackParams& p) {
  return key_rate(Protocol::switching_mixed, p);
}

RateReport key_rate_asymptotic_report(const AttackParams& p, Protocol protocol, double mu) {
  require_rate_params(p);
  if (!(mu > 1.0)) throw DomainError("key_rate_asymptotic_report: mu must be > 1");

  RateReport r;
  r.params = p;
  r.mu = mu;
  r.total_spectrum = total_spectrum_asymptotic(p, mu);
  r.mutual_information = mutual_information(p, {protocol, mu, true});
  r.rate = key_rate(protocol, p);

  const Spectrum eve = eve_spectrum(p);
  const double s_total = entropy_sum(eve) + 2.0 * std::log2(kHalfE * (1.0 - p.tau) * mu);
  const double conditional_scale = kHalfE * kHalfE * (1.0 - p.tau) / p.tau * mu;
  switch (protocol) {
    case Protocol::no_switching:
      r.conditional_spectrum = conditional_spectrum_noswitching(p);
      r.holevo = holevo_noswitching(p, mu);
      break;
    case Protocol::switching: {
      const auto s = conditional_spectra_switching(p);
      r.conditional_spectrum = scaled(s.q, std::sqrt(mu));
      r.conditional_spectrum_p = scaled(s.p, std::sqrt(mu));
      // Average of the q and p branches, h(x) → log₂(e x/2) for x ~ √μ.
      r.holevo = s_total - std::log2(conditional_scale * std::sqrt(eve[0] * eve[1]));
      break;
    }
    case Protocol::switching_mixed:
      r.conditional_spectrum = scaled(conditional_spectra_switching(p).mixed, std::sqrt(mu));
      r.holevo = s_total - std::log2(conditional_scale * p.omega);
      break;
  }
  return r;
}

RateReport key_rate_numeric(const AttackParams& p, const ProtocolSpec& spec) {
  require_physical(p);
  if (spec.asymptotic) throw DomainError("key_rate_numeric: needs a finite modulation (asymptotic = false)");
  require_finite_mu(spec.mu, "key_rate_numeric");
  if (!(p.tau > 0.0)) throw DomainError("key_rate_numeric: tau must be > 0");

  const CovMat v = total_cm_pipeline(p, spec.mu);  // a, a', B, B'
  RateReport r;
  r.params = p;
  r.mu = spec.mu;
  r.total_spectrum = symplectic_spectrum(v);
  const double s_total = entropy_sum(r.total_spectrum);

  // Alice heterodynes a' then a; Bob's modes remain as 0 (B) and 1 (B').
  const CovMat bob_given_alice = heterodyne_condition(heterodyne_condition(v, 1), 0);
  const bool heterodyne = spec.variant == Protocol::no_switching;
  auto information = [&](int bob_mode, int quadrature_row) {
    const int full = 2 * (bob_mode + 2) + quadrature_row;
    const int cond = 2 * bob_mode + quadrature_row;
    return quadrature_information(v(full, full), bob_given_alice(cond, cond), heterodyne);
  };

  auto conditional_entropy = [&](const CovMat& c, Spectrum* keep) {
    Spectrum s = symplectic_spectrum(c);
    const double e = entropy_sum(s);
    if (keep != nullptr) *keep = std::move(s);
    return e;
  };

  double s_conditional = 0.0;
  switch (spec.variant) {
    case Protocol::no_switching: {
      r.mutual_information = information(0, 0) + information(0, 1) + information(1, 0) + information(1, 1);
      const CovMat c = heterodyne_condition(heterodyne_condition(v, 3), 2);
      s_conditional = conditional_entropy(c, &r.conditional_spectrum);
      break;
    }
    case Protocol::switching: {
      // Blocks measured q,q or p,p with equal probability.
      const double i_q = information(0, 0) + information(1, 0);
      const double i_p = information(0, 1) + information(1, 1);
      r.mutual_information = 0.5 * (i_q + i_p);
      const CovMat cq = homodyne_condition(homodyne_condition(v, 3, Quadrature::q), 2, Quadrature::q);
      const CovMat cp = homodyne_condition(homodyne_condition(v, 3, Quadrature::p), 2, Quadrature::p);
      Spectrum sp;
      s_conditional = 0.5 * (conditional_entropy(cq, &r.conditional_spectrum) + conditional_entropy(cp, &sp));
      r.conditional_spectrum_p = std::move(sp);
      break;
    }
    case Protocol::switching_mixed: {
      const double i_qp = information(0, 0) + information(1, 1);
      const double i_pq = information(0, 1) + information(1, 0);
      r.mutual_information = 0.5 * (i_qp + i_pq);
      const CovMat c_qp = homodyne_condition(homodyne_condition(v, 3, Quadrature::p), 2, Quadrature::q);
      const CovMat c_pq = homodyne_condition(homodyne_condition(v, 3, Quadrature::q), 2, Quadrature::p);
      s_conditional = 0.5 * (conditional_entropy(c_qp, &r.conditional_spectrum) + conditional_entropy(c_pq, nullptr));
      break;
    }
  }
  r.holevo = s_total - s_conditional;
  r.rate = 0.5 * (r.mutual_information - r.holevo);
  return r;
}

}  // namespace gausskey
