#include "mv4/kernels.hpp"

namespace mv4::kernels {

void axpy_modp_scalar(uint8_t* y, const uint8_t* x, uint8_t c, std::size_t n,
                      uint8_t p) {
  if (c == 0) return;
  for (std::size_t i = 0; i < n; ++i)
    y[i] = (uint8_t)(((uint32_t)y[i] + (uint32_t)c * x[i]) % p);
}

uint64_t pack_u64(const uint8_t* ents, uint32_t nent, uint32_t bits) {
  uint64_t w = 0;
  for (uint32_t e = 0; e < nent; ++e) w |= (uint64_t)ents[e] << (e * bits);
  return w;
}

void unpack_u64(uint64_t w, uint8_t* ents, uint32_t nent, uint32_t bits) {
  const uint64_t mask = (bits >= 64) ? ~0ull : ((1ull << bits) - 1);
  for (uint32_t e = 0; e < nent; ++e) ents[e] = (uint8_t)((w >> (e * bits)) & mask);
}

void mul_batch_scalar(const RightMulPlan& pl, const uint64_t* in, std::size_t cnt,
                      uint64_t* out) {
  uint8_t x[64], acc[64];
  for (std::size_t k = 0; k < cnt; ++k) {
    unpack_u64(in[k], x, pl.nent, pl.bits);
    for (uint32_t e = 0; e < pl.nent; ++e)
      acc[e] = (uint8_t)(x[e] + pl.gbytes[e]);
    for (const auto& t : pl.terms)
      acc[t.dst] = (uint8_t)(acc[t.dst] + t.coeff * x[t.src]);
    uint64_t w = 0;
    for (uint32_t e = 0; e < pl.nent; ++e)
      w |= (uint64_t)(acc[e] % pl.p) << (e * pl.bits);
    out[k] = w;
  }
}

}  // namespace mv4::kernels
