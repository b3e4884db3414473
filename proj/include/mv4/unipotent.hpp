#pragma once
// Unitriangular groups U_n(F_p): packed matrices, the superdiagonal
// projections s_i, head/tail projections, the corner module S_n with its
// two-sided action, and the column/row 1-cocycles phi and psi.

#include <cstdint>
#include <string>
#include <vector>

#include "mv4/fp.hpp"

namespace mv4 {

// Strictly-upper entries, row-major, one byte each.  Indices are 1-based to
// match the usual matrix notation g_{ij}, 1 <= i < j <= n; the diagonal is
// implicitly 1 and everything below it 0.
struct UniMatrix {
  uint32_t n = 1, p = 2;
  std::vector<uint8_t> e;

  UniMatrix() = default;
  UniMatrix(uint32_t n_, uint32_t p_);

  static UniMatrix identity(uint32_t n, uint32_t p) { return {n, p}; }
  static UniMatrix sigma(uint32_t n, uint32_t p, uint32_t i);  // I + E_{i,i+1}

  uint32_t nent() const { return n * (n - 1) / 2; }
  uint32_t idx(uint32_t i, uint32_t j) const;  // position of (i,j), i < j
  uint8_t get(uint32_t i, uint32_t j) const;   // any i, j in [1, n]
  void set(uint32_t i, uint32_t j, uint32_t v);

  UniMatrix mul(const UniMatrix& o) const;  // this * o
  UniMatrix inv() const;
  UniMatrix pow(int64_t k) const;
  UniMatrix conj(const UniMatrix& by) const;  // by^{-1} * this * by
  bool operator==(const UniMatrix&) const = default;
  bool is_identity() const;
  uint64_t order() const;  // multiplicative order (a power of p)

  uint64_t pack() const;  // bit-field encoding, requires nent*bits <= 64
  static UniMatrix unpack(uint64_t w, uint32_t n, uint32_t p);

  std::string to_text() const;  // "p n" line, then n dense rows
  static UniMatrix from_text(const std::string& text);
};

Mat<Fp> to_dense(const UniMatrix& g);

// g -> g_{i,i+1}; a homomorphism U_n -> F_p for each 1 <= i < n.
Fp s_proj(const UniMatrix& g, uint32_t i);
std::vector<Fp> s_all(const UniMatrix& g);

enum class Side { head, tail };
// head deletes the rightmost column and bottom row; tail deletes the top row
// and leftmost column.  Both are group homomorphisms U_n -> U_{n-1}.
UniMatrix project(const UniMatrix& g, Side side);
UniMatrix project_k(const UniMatrix& g, Side side, uint32_t k);

// The abelian normal subgroup S_n: matrices supported on the top-right
// m x m corner (rows 1..m, columns n-m+1..n), m = floor(n/2).  Addition of
// corner blocks corresponds to multiplication in U_n.
struct SnElement {
  uint32_t p = 2, n = 4;
  Mat<Fp> h;  // m x m corner block

  SnElement() = default;
  SnElement(uint32_t n_, uint32_t p_);
  uint32_t m() const { return n / 2; }

  SnElement add(const SnElement& o) const;
  SnElement neg() const;
  bool operator==(const SnElement&) const = default;
  bool is_zero() const;
};

SnElement sn_from_matrix(const UniMatrix& u);  // u must lie in S_n
UniMatrix sn_to_matrix(const SnElement& s);

// The two-sided action on S_n.  For n = 2m+1 the pair acts through the
// projections: (g1,g2) in U_{m+1} x U_{m+1}, h -> head(g1) h tail(g2)^{-1};
// for n = 2m the pair lives in U_m x U_m and acts directly.
SnElement sn_act(const UniMatrix& g1, const UniMatrix& g2, const SnElement& h);

// Lift of (g1, g2) to U_n with zero corner block; a set-theoretic section of
// (project_k head, project_k tail) : U_n -> U_{m+1} x U_{m+1} for n = 2m+1
// (resp. U_m x U_m for n = 2m).  sn_act is conjugation through this lift.
// n must be 2*g1.n - 1 (overlapping blocks) or 2*g1.n (disjoint blocks).
UniMatrix block_section(const UniMatrix& g1, const UniMatrix& g2, uint32_t n);

// Last column of g without its final entry: a 1-cocycle of U_{m+1} (m = n-1)
// with values in F_p^m under left multiplication by the head projection.
Vec<Fp> phi_cocycle(const UniMatrix& g);

// First row of g without its leading entry (row-vector convention).
// Satisfies psi(g g') = psi(g) tail(g') + psi(g').
Vec<Fp> psi_cocycle(const UniMatrix& g);

// The twisted form g -> g . psi(g) = psi(g) tail(g)^{-1} = -psi(g^{-1}),
// which is a genuine 1-cocycle for the right-translation action.
Vec<Fp> psi_twisted(const UniMatrix& g);

}  // namespace mv4
