#include <gtest/gtest.h>

#include <cmath>

#include "gausskey/errors.hpp"
#include "gausskey/rates.hpp"

using namespace gausskey;

// Reference values are produced by tools/oracles/rate_oracle.py (mpmath,
// 90 digits, rates assembled from spectra at μ = 1e40).

namespace {

void expect_entrywise_close(const CovMat& a, const CovMat& b, double rel) {
  ASSERT_EQ(a.modes(), b.modes());
  for (int i = 0; i < 2 * a.modes(); ++i) {
    for (int j = 0; j < 2 * a.modes(); ++j) {
      EXPECT_NEAR(a(i, j), b(i, j), rel * std::max(1.0, std::abs(b(i, j))))
          << "entry (" << i << ", " << j << ")";
    }
  }
}

CovMat double_heterodyne(const CovMat& total) {
  return heterodyne_condition(heterodyne_condition(total, 3), 2);
}

CovMat double_homodyne(const CovMat& total, Quadrature quad) {
  return homodyne_condition(homodyne_condition(total, 3, quad), 2, quad);
}

constexpr AttackParams kExample{0.6, 1.2, 0.3, -0.1};

}  // namespace

TEST(TotalCm, LosslessChannelIsTwoTmsv) {
  const double mu = 7.0;
  const CovMat v = total_cm({1.0, 1.3, 0.2, 0.1}, mu);
  const double phi = std::sqrt((mu + 1.0) * (mu + 1.0) - 1.0);
  EXPECT_DOUBLE_EQ(v(4, 4), mu + 1.0);
  EXPECT_NEAR(v(0, 4), phi, 1e-12);
  EXPECT_NEAR(v(1, 5), -phi, 1e-12);
  EXPECT_EQ(v(4, 6), 0.0);
  EXPECT_EQ(v(0, 2), 0.0);
}

TEST(TotalCm, BobVariance) {
  const CovMat v = total_cm({0.6, 1.2, 0.0, 0.0}, 9.0);
  EXPECT_NEAR(v(4, 4), 6.48, 1e-13);
  EXPECT_NEAR(v(7, 7), 6.48, 1e-13);
}

TEST(TotalCm, MatchesBeamSplitterPipeline) {
  for (const AttackParams p : {kExample, AttackParams{0.44, 1.2, 0.2, 0.2}, AttackParams{0.1, 3.0, -2.0, 1.5}}) {
    expect_entrywise_close(total_cm(p, 50.0), total_cm_pipeline(p, 50.0), 1e-12);
  }
}

TEST(TotalCm, RejectsUnphysicalInput) {
  EXPECT_THROW(total_cm({0.5, 1.2, 0.5, 0.5}, 10.0), PhysicalityError);
  EXPECT_THROW(total_cm(kExample, 1.0), DomainError);
}

TEST(MutualInformation, FiniteConventions) {
  const AttackParams p{0.5, 1.0, 0.0, 0.0};
  const ProtocolSpec spec{Protocol::no_switching, 3.0, false};
  // V_B = τ(μ+1) + (1−τ)ω = 2.5, V_B|α = 1.
  EXPECT_NEAR(mutual_information(p, spec), 2.0 * std::log2(3.5 / 2.0), 1e-14);
  // V_B = τμ + (1−τ)ω = 2.
  EXPECT_NEAR(mutual_information(p, spec, MutualInfoConvention::prepare_measure),
              2.0 * std::log2(1.5), 1e-14);
}

TEST(MutualInformation, Asymptotic) {
  const AttackParams p{0.44, 1.2, 0.0, 0.0};
  EXPECT_NEAR(mutual_information(p, {Protocol::no_switching, 1e6, true}),
              2.0 * std::log2(0.44e6 / 2.112), 1e-12);
  EXPECT_NEAR(mutual_information(p, {Protocol::switching, 1e6, true}),
              std::log2(0.44e6 / 1.112), 1e-12);
}

TEST(MutualInformation, IndependentOfCorrelations) {
  for (const Protocol proto : {Protocol::no_switching, Protocol::switching}) {
    for (const bool asym : {true, false}) {
      const ProtocolSpec spec{proto, 1e3, asym};
      EXPECT_EQ(mutual_information({0.5, 1.2, 0.0, 0.0}, spec),
                mutual_information({0.5, 1.2, 0.3, -0.3}, spec));
    }
  }
}

TEST(MutualInformation, RejectsBadModulation) {
  EXPECT_THROW(mutual_information(kExample, {Protocol::no_switching, 1.0, false}), DomainError);
}

TEST(TotalSpectrumAsymptotic, Reduction) {
  const Spectrum s = total_spectrum_asymptotic({0.6, 1.2, 0.0, 0.0}, 100.0);
  EXPECT_DOUBLE_EQ(s[0], 40.0);
  EXPECT_DOUBLE_EQ(s[1], 40.0);
  EXPECT_DOUBLE_EQ(s[2], 1.2);
  EXPECT_DOUBLE_EQ(s[3], 1.2);
}

TEST(TotalSpectrumAsymptotic, TwoModeValues) {
  const Spectrum s = total_spectrum_asymptotic(kExample, 100.0);
  EXPECT_NEAR(s[2], std::sqrt(1.65), 1e-15);
  EXPECT_NEAR(s[3], std::sqrt(1.17), 1e-15);
}

TEST(TotalSpectrumAsymptotic, MatchesFiniteModulation) {
  const Spectrum exact = symplectic_spectrum(total_cm(kExample, 1e6));
  const Spectrum approx = total_spectrum_asymptotic(kExample, 1e6);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(exact[i], approx[i], 1e-4 * approx[i]);
}

TEST(ConditionalCmNoSwitching, MatchesDoubleHeterodyne) {
  for (const double mu : {1e3, 1e6}) {
    expect_entrywise_close(conditional_cm_noswitching(kExample, mu),
                           double_heterodyne(total_cm(kExample, mu)), 1e-6);
  }
}

TEST(ConditionalCmNoSwitching, UncorrelatedIsDiagonal) {
  const CovMat c = conditional_cm_noswitching({0.6, 1.2, 0.0, 0.0}, 1e4);
  EXPECT_EQ(c(0, 2), 0.0);
  EXPECT_EQ(c(1, 3), 0.0);
  EXPECT_NEAR(c(0, 0), c(1, 1), 1e-12);
}

TEST(ConditionalCmNoSwitching, CrossTermFollowsCorrelationSign) {
  // Positive g leaves a positive q-q cross covariance between a and a'.
  const auto d = derived_coefficients({0.6, 1.2, 0.3, -0.1}, 1e3);
  EXPECT_GT(d.k_tilde, 0.0);
  EXPECT_LT(d.k_tilde_prime, 0.0);
  const CovMat pipeline = double_heterodyne(total_cm({0.6, 1.2, 0.3, -0.1}, 1e3));
  EXPECT_GT(pipeline(0, 2), 0.0);
  EXPECT_LT(pipeline(1, 3), 0.0);
}

TEST(ConditionalSpectrumNoSwitching, Values) {
  const Spectrum s = conditional_spectrum_noswitching({0.44, 1.2, 0.0, 0.0});
  EXPECT_NEAR(s[0], 3.8, 1e-14);
  EXPECT_NEAR(s[1], 3.8, 1e-14);
  EXPECT_NEAR(conditional_spectrum_noswitching(kExample)[0], std::sqrt(1.6 * 1.44) / 0.6, 1e-14);
  EXPECT_THROW(conditional_spectrum_noswitching({0.0, 1.2, 0.0, 0.0}), DomainError);
}

TEST(ConditionalSpectrumNoSwitching, FiniteModulationApproachesLimit) {
  // The finite-μ spectrum carries an O(1/μ) correction (≈2e-3 relative at
  // μ = 1e3 here), so the pipeline error must shrink about 1000× by μ = 1e6.
  const Spectrum closed = conditional_spectrum_noswitching(kExample);
  const Spectrum s3 = symplectic_spectrum(double_heterodyne(total_cm(kExample, 1e3)));
  const Spectrum s6 = symplectic_spectrum(double_heterodyne(total_cm(kExample, 1e6)));
  for (std::size_t i = 0; i < 2; ++i) {
    const double err3 = std::abs(s3[i] - closed[i]);
    const double err6 = std::abs(s6[i] - closed[i]);
    EXPECT_LT(err3, 5e-3 * closed[i]);
    EXPECT_LT(err6, 1e-5 * closed[i]);
    EXPECT_NEAR(err3 / err6, 1e3, 50.0);
  }
}

TEST(HolevoNoSwitching, SingleModeReduction) {
  const double tau = 0.44, w = 1.2, mu = 1e6;
  const double nu_bar = (1.0 + (1.0 - tau) * w) / tau;
  const double expected = 2.0 * std::log2(std::exp(1.0) / 2.0 * (1.0 - tau) * mu) +
                          2.0 * (entropy_h(w) - entropy_h(nu_bar));
  EXPECT_NEAR(holevo_noswitching({tau, w, 0.0, 0.0}, mu), expected, 1e-12);
}

TEST(HolevoNoSwitching, MatchesFiniteModulationEntropies) {
  const double mu = 1e6;
  const double numeric = von_neumann_entropy(total_cm(kExample, mu)) -
                         von_neumann_entropy(conditional_cm_noswitching(kExample, mu));
  EXPECT_NEAR(holevo_noswitching(kExample, mu), numeric, 1e-3);
}

TEST(HolevoNoSwitching, LosslessChannelRejected) {
  EXPECT_THROW(holevo_noswitching({1.0, 1.2, 0.0, 0.0}, 1e6), DomainError);
}

TEST(KeyRateNoSwitching, ReferenceValues) {
  EXPECT_NEAR(key_rate_noswitching({0.44, 1.2, 0.0, 0.0}), -0.00098984865653454939, 1e-13);
  EXPECT_NEAR(key_rate_noswitching({0.44, 1.2, 0.3, -0.1}), 0.044286777939974348, 1e-13);
  EXPECT_NEAR(key_rate_noswitching({0.6, 1.5, 0.2, 0.4}), -0.01909728877364462, 1e-13);
}

TEST(KeyRateNoSwitching, ZeroRateAttack) {
  EXPECT_LT(std::abs(key_rate_noswitching({0.44, 1.2, 0.0, 0.0})), 2e-3);
}

TEST(KeyRateNoSwitching, PureLossLongDistance) {
  const double tau = 0.01;
  const double ratio = key_rate_noswitching({tau, 1.0, 0.0, 0.0}) / (tau / std::log(4.0));
  EXPECT_NEAR(ratio, 1.0067170700288237, 1e-10);
  EXPECT_NEAR(ratio, 1.0, 0.02);
}

TEST(KeyRateNoSwitching, CorrelatedAttackPositive) {
  EXPECT_GT(key_rate_noswitching({0.44, 1.2, 0.3, -0.3}), 0.0);
}

TEST(KeyRateNoSwitching, BoundaryTransmissivityRejected) {
  EXPECT_THROW(key_rate_noswitching({0.0, 1.2, 0.0, 0.0}), DomainError);
  EXPECT_THROW(key_rate_noswitching({1.0, 1.2, 0.0, 0.0}), DomainError);
  EXPECT_THROW(key_rate_noswitching({0.5, 1.2, 0.5, 0.5}), PhysicalityError);
}

TEST(KeyRateNoSwitching, EqualsHalfInformationMinusHolevo) {
  const auto report = key_rate_asymptotic_report(kExample, Protocol::no_switching, 1e6);
  EXPECT_NEAR(report.rate, 0.5 * (report.mutual_information - report.holevo), 1e-12);
}

TEST(ConditionalSpectraSwitching, Reduction) {
  const auto s = conditional_spectra_switching({0.5, 1.2, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(s.q[0], s.mixed[0]);
  EXPECT_DOUBLE_EQ(s.p[1], s.mixed[1]);
  EXPECT_DOUBLE_EQ(s.q[0], s.q[1]);
}

TEST(ConditionalSpectraSwitching, QuadratureBranch) {
  const auto s = conditional_spectra_switching({0.5, 1.2, 0.3, 0.0});
  EXPECT_NEAR(s.q[0], std::sqrt(1.5), 1e-15);
  EXPECT_NEAR(s.q[1], std::sqrt(0.9), 1e-15);
  EXPECT_THROW(conditional_spectra_switching({0.0, 1.2, 0.0, 0.0}), DomainError);
}

TEST(ConditionalSpectraSwitching, MatchesHomodynePipeline) {
  const double mu = 1e6;
  const auto closed = conditional_spectra_switching(kExample);
  const CovMat total = total_cm(kExample, mu);
  const Spectrum q = symplectic_spectrum(double_homodyne(total, Quadrature::q));
  const Spectrum p = symplectic_spectrum(double_homodyne(total, Quadrature::p));
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(q[i] / std::sqrt(mu), closed.q[i], 1e-3);
    EXPECT_NEAR(p[i] / std::sqrt(mu), closed.p[i], 1e-3);
  }
}

TEST(ConditionalCmSwitching, MatchesHomodynePipeline) {
  const CovMat total = total_cm(kExample, 1e6);
  expect_entrywise_close(conditional_cm_switching(kExample, 1e6, Quadrature::q),
                         double_homodyne(total, Quadrature::q), 1e-6);
  expect_entrywise_close(conditional_cm_switching(kExample, 1e6, Quadrature::p),
                         double_homodyne(total, Quadrature::p), 1e-6);
}

TEST(KeyRateSwitching, ReferenceValues) {
  EXPECT_NEAR(key_rate_switching({0.44, 1.2, 0.3, -0.1}), 0.026328263900663419, 1e-13);
  EXPECT_NEAR(key_rate_switching({0.6, 1.5, 0.2, 0.4}), -0.035635665663647905, 1e-13);
}

TEST(KeyRateSwitching, SingleModeReduction) {
  const double tau = 0.3, w = 1.7;
  const double expected =
      0.5 * std::log2(w / ((1.0 - tau) * (tau + (1.0 - tau) * w))) - entropy_h(w);
  EXPECT_NEAR(key_rate_switching({tau, w, 0.0, 0.0}), expected, 1e-13);
  EXPECT_NEAR(key_rate_switching({0.5, 1.0, 0.0, 0.0}), 0.5, 1e-14);
}

TEST(KeyRateSwitching, OriginIsLowest) {
  const double origin = key_rate_switching({0.44, 1.2, 0.0, 0.0});
  for (const auto& [g, gp] : {std::pair{0.3, -0.3}, {0.1, 0.1}, {-0.5, 0.3}, {0.2, 0.2}}) {
    EXPECT_GT(key_rate_switching({0.44, 1.2, g, gp}), origin) << g << ", " << gp;
  }
}

TEST(KeyRateSwitchingMixed, ReferenceValue) {
  EXPECT_NEAR(key_rate_switching_mixed({0.44, 1.2, 0.3, -0.1}), 0.039223647532588971, 1e-13);
}

TEST(KeyRateSwitchingMixed, CoincidesAtOrigin) {
  EXPECT_NEAR(key_rate_switching_mixed({0.6, 1.2, 0.0, 0.0}), key_rate_switching({0.6, 1.2, 0.0, 0.0}),
              1e-14);
}

TEST(KeyRateSwitchingMixed, NeverBelowSameQuadrature) {
  // R̄ − R̃ = −¼ log₂(ν₊ν₋/ω²) ≥ 0 because ν₊ν₋ ≤ ω².
  for (const AttackParams p : {AttackParams{0.6, 1.2, 0.3, -0.3}, kExample, AttackParams{0.3, 2.0, 1.0, 0.5}}) {
    const double w = p.omega;
    const double nu_prod = std::sqrt((w * w - p.g * p.g) * (w * w - p.g_prime * p.g_prime));
    EXPECT_NEAR(key_rate_switching_mixed(p) - key_rate_switching(p), -0.25 * std::log2(nu_prod / (w * w)),
                1e-13);
    EXPECT_GE(key_rate_switching_mixed(p), key_rate_switching(p));
  }
}

TEST(KeyRateNumeric, ConvergesToClosedForm) {
  for (const Protocol proto : {Protocol::no_switching, Protocol::switching, Protocol::switching_mixed}) {
    const AttackParams p{0.44, 1.2, 0.0, 0.0};
    const double closed = key_rate(proto, p);
    double previous = INFINITY;
    for (const double mu : {1e3, 1e4, 1e5, 1e6}) {
      const double err = std::abs(key_rate_numeric(p, {proto, mu, false}).rate - closed);
      EXPECT_LT(err, previous) << to_string(proto) << " mu = " << mu;
      previous = err;
    }
    EXPECT_LT(previous, 2e-3);
  }
}

TEST(KeyRateNumeric, LosslessChannel) {
  const auto r = key_rate_numeric({1.0, 1.2, 0.0, 0.0}, {Protocol::no_switching, 1e3, false});
  EXPECT_TRUE(std::isfinite(r.mutual_information));
  EXPECT_NEAR(r.holevo, 0.0, 1e-6);
  EXPECT_DOUBLE_EQ(r.rate, 0.5 * (r.mutual_information - r.holevo));
}

TEST(KeyRateNumeric, ReportIsSelfConsistent) {
  const auto r = key_rate_numeric(kExample, {Protocol::switching, 1e5, false});
  EXPECT_EQ(r.rate, 0.5 * (r.mutual_information - r.holevo));
  EXPECT_TRUE(r.conditional_spectrum_p.has_value());
  EXPECT_EQ(r.total_spectrum.size(), 4u);
}

TEST(KeyRateNumeric, RequiresFiniteModulation) {
  EXPECT_THROW(key_rate_numeric(kExample, {Protocol::no_switching, 1e6, true}), DomainError);
  EXPECT_THROW(key_rate_numeric(kExample, {Protocol::no_switching, 0.5, false}), DomainError);
}

TEST(KeyRateSymmetry, ExchangeAndSign) {
  for (const Protocol proto : {Protocol::no_switching, Protocol::switching, Protocol::switching_mixed}) {
    for (const auto& [g, gp] : {std::pair{0.3, -0.1}, {0.5, 0.1}, {-0.7, 0.4}}) {
      const double r = key_rate(proto, {0.4, 1.5, g, gp});
      EXPECT_NEAR(r, key_rate(proto, {0.4, 1.5, gp, g}), 1e-14);
      EXPECT_NEAR(r, key_rate(proto, {0.4, 1.5, -g, -gp}), 1e-14);
    }
  }
}
