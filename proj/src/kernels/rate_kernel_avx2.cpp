// AVX2/FMA variant of the batched closed-form rate kernel.
//
// The translation unit is compiled for the baseline ISA; only the functions
// tagged GK_AVX2 use AVX2 code generation, so nothing here leaks AVX2
// instructions into inline library code shared with scalar callers.

#include <algorithm>
#include <array>

#include "gausskey/errors.hpp"
#include "gausskey/kernels.hpp"

#if defined(GAUSSKEY_HAVE_AVX2)
#include <immintrin.h>
#define GK_AVX2 __attribute__((target("avx2,fma")))
#endif

namespace gausskey::kernels {

#if defined(GAUSSKEY_HAVE_AVX2)

namespace {

constexpr double kLog2e = 1.4426950408889634074;
constexpr double kSqrt2 = 1.4142135623730950488;
// Below this argument entropy_h uses a·log₂a − b·log₂b (matches the scalar split).
constexpr double kEntropySplit = 6.0;

// 1 + z/3 + z²/5 + ... + z¹²/25, so that ln((1+s)/(1−s)) = 2s·series(s²).
// Accurate to an ulp for |s| ≤ 3 − 2√2 ≈ 0.1716 and for s ≤ 1/6.
GK_AVX2 inline __m256d odd_series(__m256d z) {
  __m256d p = _mm256_set1_pd(1.0 / 25.0);
  for (int k = 11; k >= 0; --k) p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / (2.0 * k + 1.0)));
  return p;
}

// log₂ for positive, normal inputs.
GK_AVX2 inline __m256d log2_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256d two52 = _mm256_set1_pd(4503599627370496.0);
  // Biased exponent converted to double via the 2⁵² trick.
  const __m256i exp_bits = _mm256_srli_epi64(bits, 52);
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(exp_bits, _mm256_castpd_si256(two52))), two52);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));

  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

  // Fold m into [√2/2, √2).
  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(kSqrt2), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d ln_m = _mm256_mul_pd(_mm256_add_pd(s, s), odd_series(_mm256_mul_pd(s, s)));
  return _mm256_fmadd_pd(ln_m, _mm256_set1_pd(kLog2e), e);
}

GK_AVX2 inline __m256d entropy_h_pd(__m256d x) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d active = _mm256_cmp_pd(x, one, _CMP_GT_OQ);
  x = _mm256_max_pd(x, one);
  const __m256d a = _mm256_mul_pd(half, _mm256_add_pd(x, one));
  const __m256d b = _mm256_mul_pd(half, _mm256_sub_pd(x, one));
  // log₂ of b where b > 0, of 1 elsewhere (so the product is a clean 0).
  const __m256d b_pos = _mm256_cmp_pd(b, _mm256_setzero_pd(), _CMP_GT_OQ);
  const __m256d log_b = log2_pd(_mm256_blendv_pd(one, b, b_pos));

  const __m256d near = _mm256_fmsub_pd(a, log2_pd(a), _mm256_mul_pd(b, log_b));

  const __m256d y = _mm256_div_pd(one, x);
  const __m256d artanh2 = _mm256_mul_pd(_mm256_add_pd(y, y), odd_series(_mm256_mul_pd(y, y)));
  const __m256d far = _mm256_fmadd_pd(_mm256_mul_pd(a, artanh2), _mm256_set1_pd(kLog2e), log_b);

  const __m256d use_near = _mm256_cmp_pd(x, _mm256_set1_pd(kEntropySplit), _CMP_LT_OQ);
  return _mm256_and_pd(active, _mm256_blendv_pd(far, near, use_near));
}

GK_AVX2 inline __m256d rate_pd(const RateConstants& c, __m256d g, __m256d gp) {
  const __m256d w = _mm256_set1_pd(c.omega);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d plus = _mm256_mul_pd(_mm256_add_pd(w, g), _mm256_add_pd(w, gp));
  const __m256d minus = _mm256_max_pd(_mm256_mul_pd(_mm256_sub_pd(w, g), _mm256_sub_pd(w, gp)),
                                      _mm256_setzero_pd());
  const __m256d h_eve = _mm256_add_pd(entropy_h_pd(_mm256_sqrt_pd(plus)),
                                      entropy_h_pd(_mm256_sqrt_pd(minus)));
  const __m256d offset = _mm256_set1_pd(c.offset);

  switch (c.protocol) {
    case Protocol::no_switching: {
      const __m256d one = _mm256_set1_pd(1.0);
      const __m256d loss = _mm256_set1_pd(1.0 - c.tau);
      const __m256d lp = _mm256_fmadd_pd(loss, _mm256_add_pd(w, g), one);
      const __m256d lm = _mm256_fmadd_pd(loss, _mm256_sub_pd(w, g), one);
      const __m256d lpp = _mm256_fmadd_pd(loss, _mm256_add_pd(w, gp), one);
      const __m256d lmp = _mm256_fmadd_pd(loss, _mm256_sub_pd(w, gp), one);
      const __m256d tau = _mm256_set1_pd(c.tau);
      const __m256d nbp = _mm256_div_pd(_mm256_sqrt_pd(_mm256_mul_pd(lp, lpp)), tau);
      const __m256d nbm = _mm256_div_pd(_mm256_sqrt_pd(_mm256_mul_pd(lm, lmp)), tau);
      const __m256d h_cond = _mm256_add_pd(entropy_h_pd(nbp), entropy_h_pd(nbm));
      return _mm256_fmadd_pd(half, _mm256_sub_pd(h_cond, h_eve), offset);
    }
    case Protocol::switching: {
      const __m256d log_term = log2_pd(_mm256_mul_pd(plus, minus));
      const __m256d r = _mm256_fmadd_pd(_mm256_set1_pd(0.125), log_term, offset);
      return _mm256_fnmadd_pd(half, h_eve, r);
    }
    case Protocol::switching_mixed:
      return _mm256_fnmadd_pd(half, h_eve, offset);
  }
  return _mm256_set1_pd(0.0);
}

GK_AVX2 void run_avx2(const RateConstants& c, const double* g, const double* gp, double* out,
                      std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, rate_pd(c, _mm256_loadu_pd(g + i), _mm256_loadu_pd(gp + i)));
  }
  if (i < n) {
    // Pad the tail with the last valid point.
    std::array<double, 4> tg{}, tgp{}, to{};
    for (std::size_t k = 0; k < 4; ++k) {
      const std::size_t src = std::min(i + k, n - 1);
      tg[k] = g[src];
      tgp[k] = gp[src];
    }
    _mm256_storeu_pd(to.data(), rate_pd(c, _mm256_loadu_pd(tg.data()), _mm256_loadu_pd(tgp.data())));
    for (std::size_t k = 0; i + k < n; ++k) out[i + k] = to[k];
  }
}

}  // namespace

bool avx2_available() {
  static const bool available = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return available;
}

void rate_batch_avx2(const RateConstants& c, std::span<const double> g,
                     std::span<const double> g_prime, std::span<double> out) {
  if (!avx2_available()) throw Error("rate_batch_avx2: CPU lacks AVX2/FMA");
  const std::size_t n = std::min({g.size(), g_prime.size(), out.size()});
  run_avx2(c, g.data(), g_prime.data(), out.data(), n);
}

#else

bool avx2_available() { return false; }

void rate_batch_avx2(const RateConstants&, std::span<const double>, std::span<const double>,
                     std::span<double>) {
  throw Error("rate_batch_avx2: built without AVX2 support");
}

#endif

}  // namespace gausskey::kernels
