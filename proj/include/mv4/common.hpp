#pragma once
// Shared error types and small utilities.

#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mv4 {

// Violated precondition / malformed input.  Maps to CLI exit code 2.
struct contract_error : std::logic_error {
  using std::logic_error::logic_error;
};

// A computation hit an explicit element/memory budget.  Carries how far it got.
struct resource_error : std::runtime_error {
  std::size_t partial_count;
  resource_error(const std::string& what, std::size_t partial)
      : std::runtime_error(what), partial_count(partial) {}
};

// A Laurent-series operation would need more coefficients than are held.
struct precision_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A combination of inputs the implementation deliberately does not model.
struct unsupported_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool is_prime_u32(uint32_t n) {
  if (n < 2) return false;
  for (uint32_t d = 2; (uint64_t)d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw contract_error(msg);
}

inline uint64_t pow_u64(uint64_t b, uint64_t e) {
  uint64_t r = 1;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

}  // namespace mv4
