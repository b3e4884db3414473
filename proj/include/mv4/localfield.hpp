#pragma once
// Exact model of equal-characteristic local fields F_q((t)) containing a
// primitive p-th root of unity (p | q-1, p != char): truncated Laurent
// series, unit classes modulo p-th powers, tame symbols, Kummer extensions
// with restriction / norm / Galois matrices computed from explicit conjugate
// products on series, compositum pairings, and the constructive search for
// the class pair (B, C) whose Galois translates pair to zero.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mv4/common.hpp"
#include "mv4/fp.hpp"

namespace mv4 {

// ------------------------------------------------------------------ series

// Truncated Laurent series sum_i coef[i] * pi^(val + i) over a residue
// field.  Normalized: coef[0] != 0; the zero series has an empty coef.
// `prec` counts trustworthy coefficient slots starting at val; arithmetic
// tracks it and raises precision_error instead of returning a value that
// depends on unknown coefficients.
struct LaurentSeries {
  const FqField* k = nullptr;
  int64_t val = 0;
  Vec<FqElem> coef;
  uint32_t prec = 0;

  bool is_zero() const { return coef.empty(); }
};

LaurentSeries series_zero(const FqField& k, uint32_t prec);
LaurentSeries series_monomial(const FqField& k, const FqElem& c, int64_t v,
                              uint32_t prec);
LaurentSeries series_add(const LaurentSeries& x, const LaurentSeries& y);
LaurentSeries series_mul(const LaurentSeries& x, const LaurentSeries& y);
LaurentSeries series_pow(const LaurentSeries& x, int64_t e);  // e < 0 inverts
// Inversion is exact for monomials; otherwise the input must carry a finite
// precision (truncate first), and the geometric expansion fills its window.
LaurentSeries series_inv(const LaurentSeries& x);
LaurentSeries series_truncate(const LaurentSeries& x, uint32_t prec);
// coefficientwise automorphism x -> x^(ell^times)
LaurentSeries series_frob(const LaurentSeries& x, uint32_t times);
// substitute pi -> zeta * pi for a residue constant zeta
LaurentSeries series_twist(const LaurentSeries& x, const FqElem& zeta);
bool series_eq(const LaurentSeries& x, const LaurentSeries& y);

// "u^3*t^-2" style monomial expressions: '*'-separated factors, each one of
// `u` (canonical residue generator), the uniformizer name, or an integer,
// optionally with an integer exponent.  Whitespace-tolerant.
LaurentSeries series_parse(const FqField& k, const std::string& text,
                           const std::string& var, uint32_t prec);
std::string series_text(const LaurentSeries& x, const std::string& var);

// ------------------------------------------------------------------ fields

// One concrete field K = k((pi)).  `e`, `f`, `g` record how K sits over the
// ground field F_q((t)): residue degree f = [k : F_q], ramification index
// e in {1, p}, and, when e = p, the uniformizer relation pi^p = u0^g * t.
struct LocalField {
  uint32_t p = 0;
  uint32_t q = 0;                     // ground residue size (prime power)
  std::shared_ptr<const FqField> k;   // residue field of K
  std::shared_ptr<const FqField> k0;  // ground residue field F_q
  std::vector<FqElem> emb;            // embedding table k0 -> k
  uint32_t e = 1;
  uint32_t f = 1;
  uint32_t g = 0;

  uint32_t default_prec() const { return 4 * p + 10; }
  FqElem u0() const;      // ground generator embedded into k
  FqElem zeta_p() const;  // u0^((q-1)/p) embedded into k
  std::string describe() const;
};

// the ground field F_q((t)); q a prime power with p | q - 1 and q^p <= 2^32
LocalField local_base(uint32_t q, uint32_t p);

// ----------------------------------------------------------------- classes

// Coordinates of a class in K^x/(K^x)^p over the basis ([gen k], [pi]).
struct ClassVec {
  Fp u, v;

  bool is_zero() const { return u.is_zero() && v.is_zero(); }
  bool operator==(const ClassVec& o) const { return u == o.u && v == o.v; }
  ClassVec operator+(const ClassVec& o) const { return {u + o.u, v + o.v}; }
  ClassVec operator-(const ClassVec& o) const { return {u - o.u, v - o.v}; }
  ClassVec operator*(Fp s) const { return {u * s, v * s}; }
  Vec<Fp> vec() const { return {u, v}; }
};

ClassVec class_zero(uint32_t p);
ClassVec make_class(uint32_t p, uint64_t cu, uint64_t cv);
// canonical representative u0^u * pi^v of a class, as a series in K
LaurentSeries class_rep(const LocalField& K, const ClassVec& c);

// class of a nonzero x in K^x/(K^x)^p: (dlog of the leading unit mod p,
// valuation mod p); higher coefficients cannot matter since 1 + m consists
// of p-th powers here
ClassVec class_of(const LocalField& K, const LaurentSeries& x);

// tame symbol (x, y)_K as an F_p value: the class of the residue of
// (-1)^{v(x)v(y)} x^{v(y)} y^{-v(x)}
Fp tame_symbol(const LocalField& K, const LaurentSeries& x,
               const LaurentSeries& y);

// the same symbol as a bilinear form on class coordinates
Mat<Fp> pairing_matrix(const LocalField& K);
Fp pair_classes(const Mat<Fp>& P, const ClassVec& x, const ClassVec& y);

// ------------------------------------------------------------- extensions

enum class ExtKind { trivial, unramified, ramified };

// E = F[a^(1/p)] for a class [a] of the ground field F, together with the
// induced maps on 2-dimensional class spaces.  All matrices act on column
// coordinate vectors (u, v).
struct ExtModel {
  ExtKind kind = ExtKind::trivial;
  LocalField base;
  LocalField ext;
  ClassVec aclass{};
  Mat<Fp> res;      // F-classes -> E-classes
  Mat<Fp> norm;     // E-classes -> F-classes (from series conjugate products)
  Mat<Fp> sigma;    // canonical Galois generator on E-classes
  Mat<Fp> pairing;  // tame pairing on E-classes

  uint32_t degree() const { return kind == ExtKind::trivial ? 1 : base.p; }
};

ExtModel kummer_ext(const LocalField& F, const ClassVec& a);

// norm map on series: the product of the Galois conjugates of x, written in
// the base field's uniformizer and residue field.  Identity for trivial E.
LaurentSeries norm_series(const ExtModel& E, const LaurentSeries& x);

// class of the canonical p-th root of the defining representative inside E;
// satisfies norm * root = [a] + (p(p-1)/2) [zeta_p].  Nontrivial kinds only.
ClassVec root_class(const ExtModel& E);

// image of (sigma - id) on E-classes, as a list of spanning columns
std::vector<ClassVec> radical_basis(const ExtModel& E);
// dimension of the span of the Galois translates sigma^i [C]
uint32_t translate_span_dim(const ExtModel& E, const ClassVec& C);

// ------------------------------------------------------------- compositum

// Pairing evaluator on F[a^(1/p), d^(1/p)]: restriction matrices from each
// wing and the tame pairing of the compositum model.
struct CompositumPairing {
  LocalField comp;
  Mat<Fp> res_a;    // E_a-classes -> compositum classes
  Mat<Fp> res_d;    // E_d-classes -> compositum classes
  Mat<Fp> pairing;  // tame pairing on compositum classes

  Fp eval(const ClassVec& x_in_ea, const ClassVec& y_in_ed) const;
};

CompositumPairing compositum_pairing(const ExtModel& ea, const ExtModel& ed);

// ----------------------------------------------------------------- search

struct BCWitness {
  ClassVec B, C;          // classes in E_a resp. E_d
  std::string case_name;  // construction branch that produced the pair
  Mat<Fp> translate_pairs;  // degree_a x degree_d, all zero after success
};

struct BCResult {
  std::optional<BCWitness> witness;
  std::string reason;  // violated hypothesis when absent
};

// The constructive search: checks the symbol hypotheses (a,b) = (b,c) =
// (c,d) = 0, plus (a, zeta_p) = 0 when p > 2 and the four classes span a
// line; then runs the case split (degenerate / non-degenerate /
// colinear-root / radical-adjustment) and re-verifies the outcome: norms
// N[B] = [b], N[C] = [c] and every Galois translate pair zero in the
// compositum.  A verification failure is a contract_error, never a silent
// wrong answer.
BCResult find_BC(const LocalField& F, const ClassVec& a, const ClassVec& b,
                 const ClassVec& c, const ClassVec& d);

// Exhaustive oracle over all p^2 x p^2 class pairs, gated only on the norm
// conditions and the translate-pair test (no symbol hypotheses).
std::optional<std::pair<ClassVec, ClassVec>> brute_force_BC(
    const LocalField& F, const ClassVec& a, const ClassVec& b,
    const ClassVec& c, const ClassVec& d);

}  // namespace mv4
