#include <algorithm>
#include <cmath>
#include <numbers>

#include "gausskey/detail/entropy.hpp"
#include "gausskey/kernels.hpp"

namespace gausskey::kernels {

using detail::entropy_h_unchecked;

RateConstants make_rate_constants(Protocol protocol, double tau, double omega) {
  const double loss = 1.0 - tau;
  RateConstants c{protocol, tau, omega, 0.0};
  switch (protocol) {
    case Protocol::no_switching:
      c.offset = std::log2(2.0 / std::numbers::e * tau / (loss * (1.0 + tau + loss * omega)));
      break;
    case Protocol::switching:
      c.offset = -0.5 * std::log2(loss * (tau + loss * omega));
      break;
    case Protocol::switching_mixed:
      c.offset = 0.5 * std::log2(omega / (loss * (tau + loss * omega)));
      break;
  }
  return c;
}

double rate_point(const RateConstants& c, double g, double g_prime) {
  const double w = c.omega;
  // (ω ± g)(ω ± g') = ν±², the Eve-side symplectic eigenvalues squared.
  const double plus = (w + g) * (w + g_prime);
  const double minus = std::max((w - g) * (w - g_prime), 0.0);
  const double h_eve = entropy_h_unchecked(std::sqrt(plus)) + entropy_h_unchecked(std::sqrt(minus));

  switch (c.protocol) {
    case Protocol::no_switching: {
      const double loss = 1.0 - c.tau;
      const double lp = 1.0 + loss * (w + g), lm = 1.0 + loss * (w - g);
      const double lpp = 1.0 + loss * (w + g_prime), lmp = 1.0 + loss * (w - g_prime);
      const double nu_bar_plus = std::sqrt(lp * lpp) / c.tau;
      const double nu_bar_minus = std::sqrt(lm * lmp) / c.tau;
      const double h_cond = entropy_h_unchecked(nu_bar_plus) + entropy_h_unchecked(nu_bar_minus);
      return c.offset + 0.5 * (h_cond - h_eve);
    }
    case Protocol::switching:
      // ½·log₂√(ν₊ν₋) = ⅛·log₂(ν₊²ν₋²)
      return c.offset + 0.125 * std::log2(plus * minus) - 0.5 * h_eve;
    case Protocol::switching_mixed:
      return c.offset - 0.5 * h_eve;
  }
  return std::nan("");
}

void rate_batch_scalar(const RateConstants& c, std::span<const double> g,
                       std::span<const double> g_prime, std::span<double> out) {
  const std::size_t n = std::min({g.size(), g_prime.size(), out.size()});
  for (std::size_t i = 0; i < n; ++i) out[i] = rate_point(c, g[i], g_prime[i]);
}

}  // namespace gausskey::kernels
