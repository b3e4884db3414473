#include "mv4/kernels.hpp"

#include <bit>
#include <cstdlib>

#include "mv4/common.hpp"

namespace mv4::kernels {

namespace {
std::string forced;

bool cpu_has_avx2() {
#if defined(MV4_HAVE_AVX2_BUILD)
  static const bool ok =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("bmi2");
  return ok;
#else
  return false;
#endif
}

bool use_avx2() {
  if (!forced.empty()) return forced == "avx2" && cpu_has_avx2();
  if (const char* env = std::getenv("MV4_KERNEL")) {
    if (std::string(env) == "scalar") return false;
    if (std::string(env) == "avx2") return cpu_has_avx2();
  }
  return cpu_has_avx2();
}
}  // namespace

bool avx2_available() { return cpu_has_avx2(); }

std::string active_backend_name() { return use_avx2() ? "avx2" : "scalar"; }

void force_backend(const std::string& name) { forced = name; }

void axpy_modp(uint8_t* y, const uint8_t* x, uint8_t c, std::size_t n, uint8_t p) {
#if defined(MV4_HAVE_AVX2_BUILD)
  if (p <= 13 && n >= 32 && use_avx2()) {
    axpy_modp_avx2(y, x, c, n, p);
    return;
  }
#endif
  axpy_modp_scalar(y, x, c, n, p);
}

RightMulPlan make_right_plan(uint32_t p, uint32_t n, const uint8_t* gents) {
  RightMulPlan pl;
  pl.p = p;
  pl.n = n;
  pl.bits = (uint32_t)std::bit_width(p - 1);
  pl.nent = n * (n - 1) / 2;
  require(pl.nent * pl.bits <= 64, "packed matrix does not fit 64 bits");
  pl.gbytes.assign(gents, gents + pl.nent);
  pl.gpacked = pack_u64(gents, pl.nent, pl.bits);

  auto idx = [n](uint32_t i, uint32_t j) {  // 1-based, i<j
    uint32_t base = 0;
    for (uint32_t r = 1; r < i; ++r) base += n - r;
    return base + (j - i - 1);
  };
  pl.coeff_by_off.assign(n, std::vector<uint8_t>(pl.nent, 0));
  for (uint32_t i = 1; i <= n; ++i)
    for (uint32_t j = i + 2; j <= n; ++j)
      for (uint32_t k = i + 1; k < j; ++k) {
        uint8_t c = gents[idx(k, j)];
        if (!c) continue;
        RightMulPlan::Term t;
        t.dst = (uint16_t)idx(i, j);
        t.src = (uint16_t)idx(i, k);
        t.coeff = c;
        pl.terms.push_back(t);
        pl.coeff_by_off[j - k][t.dst] = c;
      }
  return pl;
}

mul_batch_fn select_mul_batch(const RightMulPlan& pl) {
#if defined(MV4_HAVE_AVX2_BUILD)
  uint32_t acc_max = 2 * (pl.p - 1) + (pl.n - 2) * (pl.p - 1) * (pl.p - 1);
  if (use_avx2() && pl.nent <= 32 && pl.p <= 13 && acc_max <= 255 &&
      pl.n <= 17)
    return &mul_batch_avx2;
#endif
  return &mul_batch_scalar;
}

}  // namespace mv4::kernels
