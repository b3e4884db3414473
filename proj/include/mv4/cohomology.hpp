#pragma once
// Inhomogeneous 1- and 2-cochains on a materialized finite group with module
// coefficients: cocycle tests, cup products of 1-cocycles, coboundary
// solving, extensions defined by a 2-cocycle, and corestriction of
// F_p-characters along a subgroup transversal.

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "mv4/fp.hpp"
#include "mv4/groupengine.hpp"

namespace mv4 {

// A finite-dimensional F_p[G]-module over a materialized group.  The action
// is cached as one dim x dim byte matrix per group element (column-convention:
// columns are images of basis vectors).
class GModule {
 public:
  using BasisAction = std::function<Vec<Fp>(const Key&, std::size_t)>;

  GModule(const GroupStore* G, std::size_t dim, uint32_t p, BasisAction act);

  static GModule trivial(const GroupStore* G, uint32_t p);
  // tensor product with lexicographic basis (i_A * dim_B + i_B)
  static GModule tensor(const GModule& A, const GModule& B);

  const GroupStore& group() const { return *G_; }
  std::size_t dim() const { return dim_; }
  uint32_t p() const { return p_; }

  Vec<Fp> act(const Key& g, const Vec<Fp>& v) const;
  // dim x dim row-major byte matrix of the action of element #i
  const std::vector<uint8_t>& matrix_of_index(std::size_t i) const;

  // identity acts as identity; action multiplicative on sampled pairs
  // (exhaustive when |G|^2 <= sample budget)
  bool audit(std::size_t samples, uint64_t seed) const;

 private:
  const GroupStore* G_;
  std::size_t dim_;
  uint32_t p_;
  std::vector<std::vector<uint8_t>> mats_;  // by element index
};

// Dense 1-cochain: one module value per group element (store order).
struct Cochain1 {
  const GroupStore* G = nullptr;
  const GModule* M = nullptr;
  std::vector<Vec<Fp>> val;  // indexed like G->elements()

  Vec<Fp> at(const Key& g) const { return val[G->index_of(g)]; }
  static Cochain1 zero(const GroupStore& G, const GModule& M);
  static Cochain1 from_function(const GroupStore& G, const GModule& M,
                                const std::function<Vec<Fp>(const Key&)>& f);
};

// 2-cochain, evaluated on demand (the dense table over pairs is prohibitive
// for the larger groups this is used with).
struct Cochain2 {
  const GroupStore* G = nullptr;
  const GModule* M = nullptr;
  std::function<Vec<Fp>(const Key&, const Key&)> f;
  std::shared_ptr<const GModule> owned;  // keeps M alive when the cochain built it

  Vec<Fp> operator()(const Key& a, const Key& b) const { return f(a, b); }
  static Cochain2 zero(const GroupStore& G, const GModule& M);
};

// f(g1 g2) = f(g1) + g1.f(g2), over all pairs.
bool is_cocycle1(const Cochain1& f);
bool is_cocycle1_sampled(const Cochain1& f, std::size_t pairs, uint64_t seed);

// g.c(h,k) - c(gh,k) + c(g,hk) - c(g,h) = 0 over all triples.  Only feasible
// for small groups; the sampled variant covers the rest.
bool is_cocycle2_exhaustive(const Cochain2& c);
bool is_cocycle2_sampled(const Cochain2& c, std::size_t triples, uint64_t seed);

// (x cup y)(g, g') = x(g) tensor g.y(g'), with values in tensor(Mx, My).
// Verifies both inputs are 1-cocycles (contract violation otherwise).
// The returned cochain owns its tensor module via shared state.
Cochain2 cup11(const Cochain1& x, const Cochain1& y);

// Solves c = db for a 1-cochain b, reducing to the generator values through
// the breadth-first spanning tree of the Cayley graph; returns nullopt when
// the class of c is nonzero.  c must be a 2-cocycle.
std::optional<Cochain1> is_coboundary2(const Cochain2& c);

// The group M x_c G with (m,g)(m',g') = (m + g.m' + c(g,g'), g g').  The
// cocycle is normalized by the constant shift c(1,1) (recorded); element keys
// pack the module vector into word 0 and the base-group element index into
// word 1.  Construction audits the cocycle identity on sampled triples.
class ExtensionModel : public GroupModel {
 public:
  ExtensionModel(std::shared_ptr<const GroupStore> base,
                 std::shared_ptr<const GModule> mod, Cochain2 c,
                 std::size_t audit_triples = 20000);

  Key key_of(const Vec<Fp>& m, const Key& base_elem) const;
  std::pair<Vec<Fp>, Key> parts(const Key& k) const;
  const Vec<Fp>& normalization_shift() const { return shift_; }
  const GroupStore& base() const { return *base_; }
  const GModule& module() const { return *mod_; }
  uint64_t order() const { return (uint64_t)base_->size() * pow_u64(mod_->p(), mod_->dim()); }

  Key identity() const override;
  Key mul(const Key& a, const Key& b) const override;
  Key inv(const Key& a) const override;
  std::string describe() const override;

 private:
  std::shared_ptr<const GroupStore> base_;
  std::shared_ptr<const GModule> mod_;
  Cochain2 c_;
  Vec<Fp> shift_;  // c(1,1); the stored cocycle is c - shift
  uint32_t bits_;

  Vec<Fp> cval(const Key& a, const Key& b) const;
};

// Corestriction of an F_p character along a finite-index subgroup: given a
// right transversal T (big = union of sub*t) and a homomorphism alpha on sub,
// returns alpha'(g) = sum over t of alpha(t g t'^{-1}) as a dense character
// on big (values by element index).  Audited against a perturbed transversal.
std::vector<Fp> corestrict_character(const GroupStore& big, const GroupStore& sub,
                                     const std::vector<Key>& transversal,
                                     const std::function<Fp(const Key&)>& alpha);

}  // namespace mv4
