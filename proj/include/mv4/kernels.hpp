#pragma once
// Hot inner loops: batched packed unitriangular multiplication and mod-p row
// axpy.  Scalar reference implementations always exist; AVX2 variants are
// selected at runtime when the CPU supports them (override with MV4_KERNEL).

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mv4::kernels {

// y[i] <- (y[i] + c * x[i]) mod p, bytes, 0 <= c < p <= 251.
void axpy_modp(uint8_t* y, const uint8_t* x, uint8_t c, std::size_t n, uint8_t p);
void axpy_modp_scalar(uint8_t* y, const uint8_t* x, uint8_t c, std::size_t n,
                      uint8_t p);
#if defined(MV4_HAVE_AVX2_BUILD)
void axpy_modp_avx2(uint8_t* y, const uint8_t* x, uint8_t c, std::size_t n,
                    uint8_t p);
#endif

// Precompiled right-multiplication x -> x*g for packed strictly-upper
// unitriangular matrices (row-major entries, `bits` bits each, LSB first).
// out(i,j) = g(i,j) + x(i,j) + sum_{i<k<j} x(i,k) g(k,j): affine in x with a
// sparse structured linear part; `terms` lists dst += coeff * x[dst - off].
struct RightMulPlan {
  uint32_t p = 2, n = 2, bits = 1, nent = 1;
  uint64_t gpacked = 0;
  std::vector<uint8_t> gbytes;
  struct Term {
    uint16_t dst, src;
    uint8_t coeff;
  };
  std::vector<Term> terms;  // coeff != 0 only
  // per byte-offset coefficient rows for the vector path: coeff_by_off[d][dst]
  std::vector<std::vector<uint8_t>> coeff_by_off;
};

RightMulPlan make_right_plan(uint32_t p, uint32_t n, const uint8_t* gents);

using mul_batch_fn = void (*)(const RightMulPlan&, const uint64_t* in,
                              std::size_t cnt, uint64_t* out);

void mul_batch_scalar(const RightMulPlan&, const uint64_t* in, std::size_t cnt,
                      uint64_t* out);
#if defined(MV4_HAVE_AVX2_BUILD)
void mul_batch_avx2(const RightMulPlan&, const uint64_t* in, std::size_t cnt,
                    uint64_t* out);
#endif

// Runtime selection for this plan shape (entry count / bit width limits).
mul_batch_fn select_mul_batch(const RightMulPlan& plan);

bool avx2_available();
std::string active_backend_name();       // "avx2" or "scalar"
void force_backend(const std::string&);  // "" resets to auto; test hook

// bit-field pack/unpack of entry vectors (nent * bits <= 64)
uint64_t pack_u64(const uint8_t* ents, uint32_t nent, uint32_t bits);
void unpack_u64(uint64_t w, uint8_t* ents, uint32_t nent, uint32_t bits);

}  // namespace mv4::kernels
