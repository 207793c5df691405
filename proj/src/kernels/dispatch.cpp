#include "gausskey/errors.hpp"
#include "gausskey/kernels.hpp"

namespace gausskey::kernels {

const char* to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa best_isa() { return avx2_available() ? Isa::avx2 : Isa::scalar; }

void rate_batch(const RateConstants& c, std::span<const double> g, std::span<const double> g_prime,
                std::span<double> out, Isa isa) {
  if (g.size() != g_prime.size() || g.size() != out.size()) {
    throw Error("rate_batch: input and output spans differ in length");
  }
  if (isa == Isa::avx2) {
    rate_batch_avx2(c, g, g_prime, out);
  } else {
    rate_batch_scalar(c, g, g_prime, out);
  }
}

}  // namespace gausskey::kernels
