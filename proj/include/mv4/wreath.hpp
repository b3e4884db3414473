#pragma once
// The groups F_p[U_m] x| U_m (group algebra under left translation), the two
// collapse maps onto U_{m+1} (last-column and first-row forms), the doubled
// group with its algebra-valued 1-cocycles, and the extension of the doubled
// group by F_p[U_m x U_m] classified by their cup product.  For m = 2 the
// extension has a matrix realization inside U_{2p+1}, generated by two Jordan
// blocks and two superdiagonal units, which is derived and cross-checked here.

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mv4/cohomology.hpp"
#include "mv4/fp.hpp"
#include "mv4/groupengine.hpp"
#include "mv4/unipotent.hpp"

namespace mv4 {

// F_p[U_m] x| U_m.  Elements are pairs (x, h): a coefficient vector x indexed
// by the elements of U_m in materialization order, and a point part h in U_m,
// with (x, h)(x', h') = (x + h.x', h h') where h.x' permutes coefficients by
// left translation.  Keys pack the coefficients in the low bits and the point
// part above them; the whole element must fit one 64-bit word.
class WreathModel : public GroupModel {
 public:
  WreathModel(uint32_t m, uint32_t p);

  uint32_t m() const { return m_; }
  uint32_t p() const { return p_; }
  std::size_t algebra_dim() const { return points_->size(); }  // |U_m|
  const GroupStore& point_group() const { return *points_; }
  const UniModel& point_model() const { return *pm_; }

  Key key_of(const Vec<Fp>& algebra, const UniMatrix& point) const;
  std::pair<Vec<Fp>, UniMatrix> parts(const Key& k) const;

  Key algebra_unit() const;            // (delta at the identity of U_m, 1)
  Key point_sigma(uint32_t i) const;   // (0, I + E_{i,i+1})

  Key identity() const override;
  Key mul(const Key& a, const Key& b) const override;
  Key inv(const Key& a) const override;
  std::string describe() const override;

 private:
  uint32_t m_, p_, bits_;
  uint64_t coef_mask_;
  std::shared_ptr<UniModel> pm_;
  std::shared_ptr<GroupStore> points_;
  std::vector<std::vector<uint32_t>> lperm_;  // lperm_[i][j] = index of g_i g_j
  std::size_t point_index(uint64_t point_word) const;
};

// Collapse homomorphism onto U_{m+1}.  Tag 1 extends h -> diag(h, 1) and sends
// the algebra unit to I + E_{m,m+1} (algebra coefficients become the last
// column through x -> sum x_g (g e_m)); tag 2 extends h -> diag(1, h) and
// sends the unit to I + E_{1,2} (coefficients become the first row through
// the dual x -> sum x_g (e_1* g^{-1})).  Both are onto with kernel of order
// p^(|U_m| - m) inside the algebra.
UniMatrix f_map(const WreathModel& W, const Key& k, int tag);

// The doubled group and its canonical extension.  base materializes
// (F_p[U_m] x| U_m)^2; alg1/alg2 are the group-algebra coefficient modules
// with factor i acting by left translation through its point part; tphi1 and
// tphi2 read off the algebra parts (1-cocycles); omega = tphi1 cup tphi2
// classifies `group`, the extension of base by the tensor module.
struct TildeUn {
  uint32_t p = 2, m = 2;
  std::shared_ptr<WreathModel> wreath;  // shared by both factors
  std::shared_ptr<ProductModel> base_model;
  std::shared_ptr<GroupStore> base;
  std::shared_ptr<const GModule> alg1, alg2;
  Cochain1 tphi1, tphi2;
  Cochain2 omega;
  std::shared_ptr<ExtensionModel> group;

  uint64_t order() const { return group->order(); }
  // zero-module lifts of the four base generators, ordered to match
  // explicit_generators(p) under kappa
  std::array<Key, 4> canonical_generators() const;
};

TildeUn build_tilde_un(uint32_t p, uint32_t m);

// Value of the factor-i algebra cocycle at a base element (i in {1, 2}).
Vec<Fp> tilde_phi(const TildeUn& T, int i, const Key& base_elem);

// sigma'_1..sigma'_4 in U_{2p+1}: a Jordan block on the leading p
// coordinates, the two middle superdiagonal units, and a Jordan block on the
// trailing p coordinates.  [sigma'_2, sigma'_3] = I + E_{p,p+2}.
std::array<UniMatrix, 4> explicit_generators(uint32_t p);

// The two U_{p+1} coordinates of the embedding of the doubled group (m = 2):
// factor 1 as (Jordan coordinates of x as a last column over J^e), factor 2
// as (dual Jordan coordinates as a first row next to J^e).
std::pair<UniMatrix, UniMatrix> iota(const TildeUn& T, const Key& base_elem);

// Linear dictionary from tensor-module coordinates to the p x p corner block
// of U_{2p+1}, flattened row-major.  Derived by translating the unit basis
// element 1 (x) 1, whose corner image is [sigma'_2, sigma'_3]; audited for
// invertibility and equivariance.
Mat<Fp> corner_dictionary(const TildeUn& T);

// (v, g) -> dict(v) * block_section(iota(g)), a homomorphism into U_{2p+1}
// exactly because omega agrees with the section 2-cocycle of the matrix
// model under the dictionary.
UniMatrix kappa(const TildeUn& T, const Mat<Fp>& dict, const Key& ext_elem);

struct TildeReport {
  uint64_t image_order = 0;        // closure of the projected generators
  bool image_matches_iota = false;
  uint64_t corner_order = 0;       // normal closure of [sigma'_2, sigma'_3]
  bool corner_is_module = false;   // corner-supported, hence elementary abelian
  uint64_t total_order = 0;        // image_order * corner_order
  bool u5_applicable = false;      // p = 2 only
  bool matches_u5 = false;         // set equality with U_5(F_2)
  bool cocycle_agrees = false;     // omega vs section cocycle, through dict
  std::size_t cocycle_pairs = 0;
  bool complete = false;
  std::string failure;  // stage that hit a resource limit, empty on success
};

// Structural verification of the m = 2 matrix realization: the generated
// subgroup of U_{2p+1} projects onto the embedded doubled group, meets the
// corner in the full module, has the predicted order, coincides with U_5 for
// p = 2, and carries the cup-product extension class.  On a resource limit
// the report is returned partially filled with `failure` set.
TildeReport verify_structure(uint32_t p, const Limits& lim = {});

}  // namespace mv4
