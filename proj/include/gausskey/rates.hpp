#pragma once

// Asymptotic key rates of one-way CV-QKD against two-mode Gaussian attacks,
// in reverse reconciliation with ideal efficiency, plus a finite-μ pipeline
// that builds every quantity from the Gaussian calculus for cross-validation.
//
// Mode layout of the Alice–Bob state: a, a', B, B' (indices 0..3).

#include <optional>

#include "gausskey/attack.hpp"
#include "gausskey/covariance.hpp"
#include "gausskey/protocol.hpp"

namespace gausskey {

/// Modulation used when a finite μ is needed and none is given.
inline constexpr double kDefaultNumericMu = 1e6;

struct ProtocolSpec {
  Protocol variant = Protocol::no_switching;
  double mu = kDefaultNumericMu;
  bool asymptotic = true;
};

/// Finite-μ form of Bob's unconditional variance in the mutual information.
enum class MutualInfoConvention {
  entanglement_based,  ///< V_B = τ(μ+1) + (1−τ)ω, consistent with total_cm
  prepare_measure,     ///< V_B = τμ + (1−τ)ω
};

struct RateReport {
  double mutual_information = 0.0;  ///< bits per block
  double holevo = 0.0;              ///< bits per block
  double rate = 0.0;                ///< bits per channel use, (I_AB − χ)/2
  Spectrum total_spectrum;
  Spectrum conditional_spectrum;    ///< q-branch for the same-quadrature switching protocol
  std::optional<Spectrum> conditional_spectrum_p;  ///< p-branch, switching only
  AttackParams params;
  double mu = 0.0;
};

/// Closed-form coefficients shared by the total and conditional CMs.
struct DerivedCoefficients {
  double Lambda;        ///< τ(μ+1) + (1−τ)ω
  double Phi;           ///< √(τ[(μ+1)² − 1])
  double Lambda_tilde;  ///< Λ − τ
  double lambda_plus, lambda_minus;              ///< 1 + (1−τ)(ω ± g)
  double lambda_prime_plus, lambda_prime_minus;  ///< 1 + (1−τ)(ω ± g')
  double lambda_bar;    ///< 1 + (1−τ)ω
  double k, k_tilde, k_prime, k_tilde_prime;     ///< numerators of V_C
  double denom, denom_prime;  ///< (Λ+1)² − (1−τ)²g², and with g'
};

DerivedCoefficients derived_coefficients(const AttackParams& params, double mu);

/// 8×8 CM of a, a', B, B' from the closed form.
CovMat total_cm(const AttackParams& params, double mu);

/// The same CM built constructively: TMSV(μ+1) ⊕ TMSV(μ+1) ⊕ attack_cm,
/// two beam splitters (A↔e, A'↔E), Eve's outputs traced out.
CovMat total_cm_pipeline(const AttackParams& params, double mu);

double mutual_information(const AttackParams& params, const ProtocolSpec& spec,
                          MutualInfoConvention convention = MutualInfoConvention::entanglement_based);

/// {√((ω+g)(ω+g')), √((ω−g)(ω−g')), (1−τ)μ, (1−τ)μ}, sorted descending.
Spectrum total_spectrum_asymptotic(const AttackParams& params, double mu);

/// Conditional CM of a, a' after Bob heterodynes B and B'.
CovMat conditional_cm_noswitching(const AttackParams& params, double mu);

/// Conditional CM of a, a' after Bob homodynes the same quadrature on B and B'.
CovMat conditional_cm_switching(const AttackParams& params, double mu, Quadrature quadrature);

/// {√(λ₊λ'₊)/τ, √(λ₋λ'₋)/τ}, μ-independent.
Spectrum conditional_spectrum_noswitching(const AttackParams& params);

/// Large-μ Holevo bound of the no-switching protocol, bits per block.
double holevo_noswitching(const AttackParams& params, double mu);

/// Coefficients of √μ in the conditional spectra of the switching protocols.
struct SwitchingSpectra {
  Spectrum q;      ///< √((1−τ)(ω ± g)/τ)
  Spectrum p;      ///< √((1−τ)(ω ± g')/τ)
  Spectrum mixed;  ///< √((1−τ)ω/τ), doubly degenerate
};

SwitchingSpectra conditional_spectra_switching(const AttackParams& params);

/// μ-free asymptotic rates, bits per channel use. Each requires physical
/// correlations and 0 < τ < 1; violations throw PhysicalityError/DomainError.
double key_rate_noswitching(const AttackParams& params);
double key_rate_switching(const AttackParams& params);
double key_rate_switching_mixed(const AttackParams& params);
double key_rate(Protocol protocol, const AttackParams& params);

/// Asymptotic report: the rate is μ-free; I_AB and χ are the large-μ
/// expressions evaluated at `mu`, so that R = (I_AB − χ)/2.
RateReport key_rate_asymptotic_report(const AttackParams& params, Protocol protocol,
                                      double mu = kDefaultNumericMu);

/// Finite-μ rate computed only through the Gaussian calculus: beam-splitter
/// pipeline, measurement conditioning and symplectic spectra.
RateReport key_rate_numeric(const AttackParams& params, const ProtocolSpec& spec);

}  // namespace gausskey
