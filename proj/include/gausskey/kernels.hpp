#pragma once

// Batched evaluation of the asymptotic closed-form key rates over many
// (g, g') points at fixed (τ, ω). The scalar kernel is the reference; the
// AVX2 kernel computes the same expressions four points at a time and is
// chosen at runtime when the CPU supports AVX2 and FMA.

#include <span>

#include "gausskey/protocol.hpp"

namespace gausskey::kernels {

/// Per-batch constants. `offset` is the (g, g')-independent part of the rate.
struct RateConstants {
  Protocol protocol = Protocol::no_switching;
  double tau = 0.0;
  double omega = 1.0;
  double offset = 0.0;
};

/// No validation: callers guarantee 0 < τ < 1 and ω ≥ 1.
RateConstants make_rate_constants(Protocol protocol, double tau, double omega);

/// Scalar reference for one point. Inputs are assumed physical.
double rate_point(const RateConstants& c, double g, double g_prime);

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa);

/// Whether the AVX2 kernel was compiled in and the running CPU supports it.
bool avx2_available();

/// Best ISA for this machine.
Isa best_isa();

void rate_batch_scalar(const RateConstants& c, std::span<const double> g,
                       std::span<const double> g_prime, std::span<double> out);

/// Throws gausskey::Error when AVX2 is unavailable.
void rate_batch_avx2(const RateConstants& c, std::span<const double> g,
                     std::span<const double> g_prime, std::span<double> out);

/// Dispatches to the requested kernel; all spans must have equal length.
void rate_batch(const RateConstants& c, std::span<const double> g,
                std::span<const double> g_prime, std::span<double> out,
                Isa isa = best_isa());

}  // namespace gausskey::kernels
