#pragma once
// Exact arithmetic over prime fields F_p and small extensions F_q, q = ell^f,
// plus dense linear algebra (Gaussian elimination) generic over either.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mv4/common.hpp"

namespace mv4 {

// ---------------------------------------------------------------- F_p scalar

struct Fp {
  uint32_t v = 0;  // residue in [0, p)
  uint32_t p = 2;  // prime modulus

  Fp() = default;
  Fp(uint64_t val, uint32_t prime);

  Fp operator+(Fp o) const { return raw((v + o.v) % p, p); }
  Fp operator-(Fp o) const { return raw((v + p - o.v) % p, p); }
  Fp operator*(Fp o) const { return raw((uint64_t)v * o.v % p, p); }
  Fp operator-() const { return raw(v ? p - v : 0, p); }
  bool operator==(const Fp& o) const = default;
  bool is_zero() const { return v == 0; }

  Fp pow(uint64_t e) const;
  Fp inv() const;

  static Fp raw(uint32_t v, uint32_t p) {
    Fp r;
    r.v = v;
    r.p = p;
    return r;
  }
  static Fp zero(uint32_t p) { return raw(0, p); }
  static Fp one(uint32_t p) { return raw(1, p); }
};

void check_prime(uint32_t p);  // throws contract_error if not prime

// ------------------------------------------------------------------ F_q field

class FqField;

struct FqElem {
  const FqField* F = nullptr;
  std::vector<uint32_t> c;  // coordinates over F_ell, degree f, c[i] ~ x^i

  FqElem() = default;
  FqElem(const FqField* field, std::vector<uint32_t> coords)
      : F(field), c(std::move(coords)) {}

  bool is_zero() const;
  bool operator==(const FqElem& o) const { return c == o.c; }
  FqElem operator+(const FqElem& o) const;
  FqElem operator-(const FqElem& o) const;
  FqElem operator*(const FqElem& o) const;
  FqElem operator-() const;
  FqElem pow(uint64_t e) const;
  FqElem inv() const;
  uint64_t to_int() const;  // base-ell digit encoding, c[0] least significant
};

// F_q as F_ell[x]/(g) with g the lexicographically least monic irreducible of
// degree f (coefficients compared low-degree first).
class FqField {
 public:
  FqField(uint32_t ell, uint32_t f);

  uint32_t ell() const { return ell_; }
  uint32_t degree() const { return f_; }
  uint64_t q() const { return q_; }
  const std::vector<uint32_t>& modulus() const { return poly_; }

  FqElem zero() const;
  FqElem one() const;
  FqElem from_int(uint64_t n) const;  // base-ell digits
  FqElem from_coords(std::vector<uint32_t> c) const;

  // Canonical multiplicative generator: least element (by to_int) of order q-1.
  const FqElem& gen() const;
  // Discrete log base gen(), baby-step giant-step.  x must be nonzero.
  uint64_t dlog(const FqElem& x) const;
  uint64_t elem_order(const FqElem& x) const;
  FqElem frobenius(const FqElem& x, uint32_t times = 1) const;  // x -> x^(ell^times)

  // Finds the ring embedding determined by mapping the small field's x-class
  // to the lexicographically least root of its modulus in *this.
  std::vector<FqElem> embedding_of(const FqField& small) const;  // images of x^i
  FqElem embed(const FqField& small, const FqElem& x,
               const std::vector<FqElem>& emb) const;

 private:
  uint32_t ell_, f_;
  uint64_t q_;
  std::vector<uint32_t> poly_;
  mutable FqElem gen_;
  mutable bool gen_ready_ = false;
  mutable std::vector<FqElem> baby_;  // BSGS table: gen^0..gen^(m-1)
  mutable uint64_t baby_m_ = 0;

  friend struct FqElem;
  std::vector<uint32_t> mul_mod(const std::vector<uint32_t>& a,
                                const std::vector<uint32_t>& b) const;
};

// ------------------------------------------------------------- linear algebra

template <class T>
struct Mat {
  std::size_t rows = 0, cols = 0;
  std::vector<T> a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, T fill) : rows(r), cols(c), a(r * c, fill) {}
  T& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const T& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  bool operator==(const Mat&) const = default;
};

template <class T>
using Vec = std::vector<T>;

template <class T>
struct LinSolution {
  Vec<T> particular;
  std::vector<Vec<T>> kernel;  // basis of the null space
};

// Row-reduces [A|b]; deterministic first-nonzero pivoting.  Returns nullopt if
// inconsistent.  T must provide +,-,*,inv(),is_zero() and copy.
template <class T>
std::optional<LinSolution<T>> solve_linear(Mat<T> A, Vec<T> b);

// Kronecker/outer product, lexicographic index (i*|w|+j).
template <class T>
Vec<T> tensor(const Vec<T>& u, const Vec<T>& w) {
  Vec<T> r;
  r.reserve(u.size() * w.size());
  for (const auto& x : u)
    for (const auto& y : w) r.push_back(x * y);
  return r;
}

// -------------------------------------------------- byte rows mod p (dense)

// Incremental echelon form over F_p on uint8 rows; used for large homogeneous
// constraint systems where allocating the full matrix up front is wasteful.
class RowReducer {
 public:
  RowReducer(uint32_t p, std::size_t width) : p_(p), width_(width) {}

  // Reduces the row against the current echelon set; if a new pivot survives,
  // stores it and returns true.  Returns false if the row reduced to zero or
  // if its pivot landed in the marked constant column — the latter also clears
  // consistent(), which callers treat as "no solution", not as an error.
  bool add_row(std::vector<uint8_t> row);
  void set_const_col(std::size_t c) { const_col_ = c; }
  bool consistent() const { return consistent_; }
  std::size_t rank() const { return rows_.size(); }
  std::size_t width() const { return width_; }

  // Particular solution of the recorded system (free vars = 0); requires
  // set_const_col and consistency.
  std::vector<uint8_t> solve() const;

 private:
  uint32_t p_;
  std::size_t width_;
  std::size_t const_col_ = SIZE_MAX;
  bool consistent_ = true;
  std::vector<std::vector<uint8_t>> rows_;  // echelon rows
  std::vector<std::size_t> pivots_;
};

extern template std::optional<LinSolution<Fp>> solve_linear<Fp>(Mat<Fp>, Vec<Fp>);
extern template std::optional<LinSolution<FqElem>> solve_linear<FqElem>(Mat<FqElem>,
                                                                        Vec<FqElem>);

}  // namespace mv4
