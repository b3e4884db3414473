// AVX2 variants.  Compiled with -mavx2 -mbmi2; only ever called after a
// runtime cpuid check (see kernels.cpp).

#include <immintrin.h>

#include "mv4/kernels.hpp"

namespace mv4::kernels {

namespace {

// v mod p on u16 lanes, exact for v <= 255, p <= 13.
inline __m256i mod_u16(__m256i v, __m256i magic, __m256i pv) {
  __m256i q = _mm256_mulhi_epu16(v, magic);
  return _mm256_sub_epi16(v, _mm256_mullo_epi16(q, pv));
}

// whole-register byte shift toward higher indices by d (1..15)
inline __m256i shift_up_bytes(__m256i x, int d) {
  __m256i carry = _mm256_permute2x128_si256(x, x, 0x08);  // [0, x_lo]
  switch (d) {
#define MV4_CASE(D) \
  case D:           \
    return _mm256_alignr_epi8(x, carry, 16 - D);
    MV4_CASE(1) MV4_CASE(2) MV4_CASE(3) MV4_CASE(4) MV4_CASE(5) MV4_CASE(6)
    MV4_CASE(7) MV4_CASE(8) MV4_CASE(9) MV4_CASE(10) MV4_CASE(11) MV4_CASE(12)
    MV4_CASE(13) MV4_CASE(14) MV4_CASE(15)
#undef MV4_CASE
  }
  return _mm256_setzero_si256();
}

}  // namespace

void axpy_modp_avx2(uint8_t* y, const uint8_t* x, uint8_t c, std::size_t n,
                    uint8_t p) {
  if (c == 0) return;
  const __m256i zero = _mm256_setzero_si256();
  const __m256i cv = _mm256_set1_epi16(c);
  const __m256i pv = _mm256_set1_epi16(p);
  const __m256i magic = _mm256_set1_epi16((short)(65536u / p + 1));
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    __m256i yv = _mm256_loadu_si256((const __m256i*)(y + i));
    __m256i xv = _mm256_loadu_si256((const __m256i*)(x + i));
    __m256i ylo = _mm256_unpacklo_epi8(yv, zero);
    __m256i yhi = _mm256_unpackhi_epi8(yv, zero);
    __m256i xlo = _mm256_unpacklo_epi8(xv, zero);
    __m256i xhi = _mm256_unpackhi_epi8(xv, zero);
    ylo = _mm256_add_epi16(ylo, _mm256_mullo_epi16(xlo, cv));
    yhi = _mm256_add_epi16(yhi, _mm256_mullo_epi16(xhi, cv));
    ylo = mod_u16(ylo, magic, pv);
    yhi = mod_u16(yhi, magic, pv);
    _mm256_storeu_si256((__m256i*)(y + i), _mm256_packus_epi16(ylo, yhi));
  }
  if (i < n) axpy_modp_scalar(y + i, x + i, c, n - i, p);
}

void mul_batch_avx2(const RightMulPlan& pl, const uint64_t* in, std::size_t cnt,
                    uint64_t* out) {
  // One element per register: entry bytes in lanes, cross-entry terms become
  // byte shifts (same matrix row, column offset d) times a fixed coeff row.
  const uint32_t nent = pl.nent;
  const uint32_t bits = pl.bits;
  const uint64_t lanemask = (0x0101010101010101ull * ((1u << bits) - 1));
  // pdep scatter masks: `bits` bits -> one byte each, 8 entries per word
  const uint64_t scat = lanemask;

  alignas(32) uint8_t xbuf[32], obuf[32];
  const __m256i zero = _mm256_setzero_si256();
  const __m256i pv = _mm256_set1_epi16(pl.p);
  const __m256i magic = _mm256_set1_epi16((short)(65536u / pl.p + 1));

  __m256i gvec = _mm256_setzero_si256();
  {
    alignas(32) uint8_t gb[32] = {0};
    for (uint32_t e = 0; e < nent; ++e) gb[e] = pl.gbytes[e];
    gvec = _mm256_load_si256((const __m256i*)gb);
  }
  // precompute widened coefficient rows per offset
  struct OffRow {
    int d;
    __m256i lo, hi;
  };
  std::vector<OffRow> offs;
  for (std::size_t d = 1; d < pl.coeff_by_off.size(); ++d) {
    bool any = false;
    for (auto c : pl.coeff_by_off[d])
      if (c) any = true;
    if (!any) continue;
    alignas(32) uint8_t cb[32] = {0};
    for (uint32_t e = 0; e < nent; ++e) cb[e] = pl.coeff_by_off[d][e];
    __m256i cv = _mm256_load_si256((const __m256i*)cb);
    offs.push_back({(int)d, _mm256_unpacklo_epi8(cv, zero),
                    _mm256_unpackhi_epi8(cv, zero)});
  }

  const uint32_t words = (nent + 7) / 8;  // packed bytes come 8 entries/word
  for (std::size_t k = 0; k < cnt; ++k) {
    uint64_t w = in[k];
    for (uint32_t t = 0; t < words; ++t) {
      ((uint64_t*)xbuf)[t] = _pdep_u64(w, scat);
      w >>= 8 * bits;
    }
    for (uint32_t t = words; t < 4; ++t) ((uint64_t*)xbuf)[t] = 0;
    __m256i x = _mm256_load_si256((const __m256i*)xbuf);
    __m256i acc_lo = _mm256_add_epi16(_mm256_unpacklo_epi8(x, zero),
                                      _mm256_unpacklo_epi8(gvec, zero));
    __m256i acc_hi = _mm256_add_epi16(_mm256_unpackhi_epi8(x, zero),
                                      _mm256_unpackhi_epi8(gvec, zero));
    for (const auto& o : offs) {
      __m256i sv = shift_up_bytes(x, o.d);
      acc_lo = _mm256_add_epi16(
          acc_lo, _mm256_mullo_epi16(_mm256_unpacklo_epi8(sv, zero), o.lo));
      acc_hi = _mm256_add_epi16(
          acc_hi, _mm256_mullo_epi16(_mm256_unpackhi_epi8(sv, zero), o.hi));
    }
    acc_lo = mod_u16(acc_lo, magic, pv);
    acc_hi = mod_u16(acc_hi, magic, pv);
    _mm256_store_si256((__m256i*)obuf, _mm256_packus_epi16(acc_lo, acc_hi));
    uint64_t r = 0;
    for (uint32_t t = 0; t < words; ++t)
      r |= _pext_u64(((const uint64_t*)obuf)[t], scat) << (t * 8 * bits);
    out[k] = r;
  }
}

}  // namespace mv4::kernels
