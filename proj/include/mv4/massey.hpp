#pragma once
// Massey-vanishing decisions "in the sense of" a finite group carrying
// distinguished F_p-characters, the two-condition lifting criterion for maps
// into the doubled base group, and the repeated-product witness chains
// obtained through the wide matrix embedding.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mv4/cohomology.hpp"
#include "mv4/groupengine.hpp"
#include "mv4/wreath.hpp"

namespace mv4 {

// A finite group together with characters chi_1..chi_n: G -> F_p, stored as
// dense value tables parallel to domain->elements().
struct CharacterTuple {
  std::shared_ptr<const GroupStore> domain;
  std::vector<std::vector<Fp>> chi;
  uint32_t p = 0;
};

// Builds the tuple and audits that every character is a homomorphism
// (exhaustively, over each Cayley edge).  Contract violation otherwise.
CharacterTuple make_character_tuple(
    std::shared_ptr<const GroupStore> domain, uint32_t p,
    const std::vector<std::function<Fp(const Key&)>>& chars);

// A "sense" in which Massey products vanish: a materialized group carrying
// distinguished characters s_1..s_n.  When `ext` is set, the actual target is
// the extension group above `search`: a compatible hom into `search` must
// additionally lift across the extension, and the witness images are keys of
// ext->group.  `model` keeps the search group's multiplication alive.
struct MasseyTarget {
  std::string name;
  uint32_t p = 0;
  std::shared_ptr<const GroupStore> search;
  std::vector<std::function<Fp(const Key&)>> s;
  std::shared_ptr<const GroupModel> model;
  std::shared_ptr<const TildeUn> ext;
};

// U_{n+1}(F_p) with its n superdiagonal characters; n = 2p gives the widest
// group the repeated-product corollary maps into.  Materializes the group:
// throws a resource error when it does not fit the limits.
MasseyTarget target_unitriangular(uint32_t n, uint32_t p, const Limits& lim = {});

// U_{n+1}(F_p) modulo its centre (the top-right corner line), the group whose
// compatible homs witness that the product is defined, as opposed to
// vanishing.  The superdiagonal characters descend since n + 1 >= 3.
MasseyTarget target_bar_unitriangular(uint32_t n, uint32_t p, const Limits& lim = {});

// F_p[U_2] x| U_2 with (s_1, s_2) read through the collapse map of the given
// tag (1 = last-column form, 2 = first-row form); the tags order the point
// and augmentation characters oppositely.
MasseyTarget target_collapse(uint32_t p, int tag);

// The doubled extension group.  The search group is the doubled base (which
// is small), and a hit requires the pulled-back extension class to die; the
// witness is then assembled from the coboundary certificate, so the extension
// group itself is never enumerated.
MasseyTarget target_tilde_u5(uint32_t p);

// The distinguished characters of the extension group, read through the
// quotient onto the doubled base: (point exponent 1, augmentation 1,
// augmentation 2, point exponent 2) for i = 0..3.
Fp tilde_character(const TildeUn& T, int i, const Key& ext_elem);
// Same characters on the doubled base group directly.
Fp tilde_base_character(const TildeUn& T, int i, const Key& base_elem);

// Decides whether the tuple vanishes in the sense of the target: returns a
// hom psi with s_i o psi = chi_i (generator images; extension keys for a
// lifting target), or nullopt after an exhaustive search.  Every returned
// hom is re-verified against the character tables over the whole domain.
std::optional<GroupHom> vanishes_in_sense_of(const CharacterTuple& ct,
                                             const MasseyTarget& target,
                                             const HomSearchOpts& opts = {});

// Value table of the hom given by generator images, parallel to
// domain.elements(); verifies the homomorphism property on every Cayley edge
// (contract violation otherwise).
std::vector<Key> hom_table(const GroupStore& domain, const GroupModel& codomain,
                           const GroupHom& h);

// Report of the lifting criterion for gamma: domain -> doubled base group.
struct LiftReport {
  bool lifts = false;       // the pulled-back extension class dies over the domain
  bool orthogonal = false;  // pulled-back kernel characters cup to zero on Lambda
  bool agree = false;       // lifts == orthogonal; predicted to always hold
  std::size_t lambda_order = 0;
  std::optional<GroupHom> lift;  // witness in extension keys when lifts
};

// Evaluates both sides of the criterion independently: existence of a lift
// via a coboundary solve of the pulled-back defining cocycle over the whole
// domain, and orthogonality via cup products of the coordinate characters of
// the two kernel factors, pulled back to Lambda = gamma^{-1}(point-trivial
// part).  gamma maps domain generators to base keys.
LiftReport check_lifting_theorem(const TildeUn& T, const GroupStore& domain,
                                 const GroupHom& gamma);

// All subgroups of G up to conjugacy.  The representative of a class is the
// conjugate whose sorted element list is lexicographically least; returned
// stores share G's model and are ordered by that canonical list.  Bounded to
// small G (resource error past a few hundred elements).
std::vector<std::shared_ptr<GroupStore>> subgroup_conjugacy_reps(const GroupStore& G);

// check_lifting_theorem over every conjugacy representative of a subgroup of
// the doubled base, with gamma the inclusion; reports in representative order.
std::vector<LiftReport> lifting_sweep(const TildeUn& T);

// One truncated witness of the repeated-product chain: drop_front leading and
// drop_back trailing characters removed from the wide pattern, landing in
// U_size(F_p).  Images are packed matrix keys readable by UniModel(size, p).
struct RepeatedWitness {
  uint32_t drop_front = 0;
  uint32_t drop_back = 0;
  uint32_t size = 0;
  GroupHom hom;
};

// Composes psi (generator images in extension keys, compatible with ct) with
// the embedding into U_{2p+1} and with every admissible chain of one-sided
// projections.  Each output is verified over the whole domain against the
// truncated character pattern (chi_1 repeated p-1-drop_front times, chi_2,
// chi_3, chi_4 repeated p-1-drop_back times).  Incompatible psi is a
// contract violation.
std::vector<RepeatedWitness> repeated_massey_witness(const TildeUn& T,
                                                     const Mat<Fp>& dict,
                                                     const CharacterTuple& ct,
                                                     const GroupHom& psi);

// The same chain for the identity map of the extension group itself, whose
// element set is too large to enumerate for odd p.  Outputs are images of the
// four canonical generators, verified at generator level (characters of a
// finitely generated group agree iff they agree on generators).
std::vector<RepeatedWitness> repeated_massey_identity(const TildeUn& T,
                                                      const Mat<Fp>& dict);

// Hypothesis predicate of the main correspondence between condition (2)
// (norm elements with orthogonal conjugates) and condition (1) (a compatible
// hom into the doubled extension): p = 2, or ([a],[b] linearly independent or
// [a] = 0, and [d],[c] linearly independent or [d] = 0).  Classes are vectors
// over F_p in any fixed basis of the ambient character group.
bool generic_tuple(uint32_t p, const Vec<Fp>& a, const Vec<Fp>& b,
                   const Vec<Fp>& c, const Vec<Fp>& d);

}  // namespace mv4
