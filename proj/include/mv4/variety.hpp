#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mv4/common.hpp"
#include "mv4/fp.hpp"
#include "mv4/localfield.hpp"

namespace mv4 {

// The algebra E = F[X,Y]/(X^p - a, Y^p - d) over F = F_q together with its
// subalgebras F_a = F[X]/(X^p - a) and F_d = F[Y]/(Y^p - d).  Elements are
// coefficient vectors: length p^2 in the monomial basis X^i Y^j (index
// i + p*j) for E, length p for the subalgebras.
struct EtaleAlg {
  const FqField* k = nullptr;
  uint32_t p = 0;
  FqElem a, d;
  FqElem zeta;  // canonical primitive p-th root of unity, gen^((q-1)/p)

  std::size_t dim() const { return std::size_t(p) * p; }
  Vec<FqElem> zero_e() const;
  Vec<FqElem> scalar(const FqElem& s) const;
  Vec<FqElem> from_fa(const Vec<FqElem>& xpoly) const;  // length p -> length p^2
  Vec<FqElem> from_fd(const Vec<FqElem>& ypoly) const;
  Vec<FqElem> add(const Vec<FqElem>& x, const Vec<FqElem>& y) const;
  Vec<FqElem> sub(const Vec<FqElem>& x, const Vec<FqElem>& y) const;
  Vec<FqElem> mul(const Vec<FqElem>& x, const Vec<FqElem>& y) const;
  Vec<FqElem> smul(const FqElem& s, const Vec<FqElem>& x) const;
  // products in the univariate subalgebras (length-p vectors)
  Vec<FqElem> fa_mul(const Vec<FqElem>& x, const Vec<FqElem>& y) const;
  Vec<FqElem> fd_mul(const Vec<FqElem>& x, const Vec<FqElem>& y) const;
};

// requires p prime, p | q - 1, and a, d nonzero
EtaleAlg make_etale(const FqField& k, uint32_t p, const FqElem& a,
                    const FqElem& d);

struct VarietyPoint {
  Vec<FqElem> beta;   // length p: B = sum beta_i X^i in F_a
  Vec<FqElem> gamma;  // length p: C = sum gamma_j Y^j in F_d
  FqElem f1, f2;
  std::vector<Vec<FqElem>> x;  // p elements of E
};

struct CheckReport {
  bool f1_nonzero = false, f2_nonzero = false;
  Vec<FqElem> v1_residual;                   // in F_a, length p
  Vec<FqElem> v2_residual;                   // in F_d, length p
  std::vector<Vec<FqElem>> v3_residual;      // p coordinates, each in E

  bool v1_ok() const;
  bool v2_ok() const;
  bool v3_ok() const;
  bool ok() const;
};

// exact evaluation of the three defining identities:
//   (V1) prod_omega (sum_i beta_i omega^i X^i) = b f1^p          in F_a
//   (V2) prod_omega (sum_j gamma_j omega^j Y^j) = c f2^p         in F_d
//   (V3) prod_omega (sum_i x_i omega^i R^i) = C                  in E[R]/(R^p - B)
// A vanishing f_i is reported as a failed constraint, never thrown.
CheckReport check_point(const EtaleAlg& E, const FqElem& b, const FqElem& c,
                        const VarietyPoint& pt);

// coefficients of the unique polynomial of degree < n through the given
// (evaluation point, value) pairs; the points must be pairwise distinct
Vec<FqElem> vandermonde_solve(
    const FqField& k, const std::vector<std::pair<FqElem, FqElem>>& points);

// a point with f1 = f2 = 1 that check_point accepts; requires b, c nonzero.
// Norm equations are solved by discrete logarithm in the component fields
// (resource error when a needed component exceeds the discrete-log cap).
VarietyPoint solve_finite_field(const EtaleAlg& E, const FqElem& b,
                                const FqElem& c);

struct LocalDecision {
  bool solvable = false;
  std::optional<BCWitness> witness;       // class-level (B, C) when solvable
  std::vector<std::string> certificate;   // per-component solvability notes
  std::string obstruction;                // violated hypothesis when not
};

// decision over the local model: solvable exactly when find_BC produces a
// witness; the certificate records why each etale component of (V3) is
// solvable, the obstruction names the violated hypothesis (and a nonzero
// translate pair of the canonical norm preimages when one exists)
LocalDecision decide_local(const LocalField& F, const ClassVec& a,
                           const ClassVec& b, const ClassVec& c,
                           const ClassVec& d);

}  // namespace mv4
