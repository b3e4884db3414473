#pragma once
// Finite-group materialization by generator closure over packed element keys,
// plus normal closures, lower central series, homomorphism enumeration, and
// the free-cyclic-module rank test.  Groups are accessed through a GroupModel
// that defines multiplication on opaque 128-bit keys.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mv4/fp.hpp"
#include "mv4/kernels.hpp"
#include "mv4/unipotent.hpp"

namespace mv4 {

struct Key {
  std::array<uint64_t, 2> w{0, 0};
  friend auto operator<=>(const Key&, const Key&) = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    uint64_t x = k.w[0] + 0x9e3779b97f4a7c15ull * (k.w[1] + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    return (std::size_t)(x ^ (x >> 31));
  }
};

// Group structure on keys.  Models are immutable and safe for concurrent
// reads; the right-multiplication cache is only touched during store builds.
class GroupModel {
 public:
  virtual ~GroupModel() = default;
  virtual Key identity() const = 0;
  virtual Key mul(const Key& a, const Key& b) const = 0;
  virtual Key inv(const Key& a) const = 0;
  virtual std::string describe() const = 0;
  // out[i] = xs[i] * g; models override to batch (the closure hot path)
  virtual void mul_batch_right(const Key* xs, std::size_t cnt, const Key& g,
                               Key* out) const;
};

// Insert-only open-addressing map Key -> dense index.
class KeyIndex {
 public:
  KeyIndex();
  std::size_t find(const Key& k) const;  // SIZE_MAX when absent
  // index of k after the call; second = true when newly inserted as `next`
  std::pair<std::size_t, bool> insert(const Key& k, std::size_t next);
  std::size_t size() const { return count_; }
  std::size_t memory_bytes() const;

 private:
  std::vector<Key> slots_;
  std::vector<uint32_t> vals_;  // UINT32_MAX = empty
  std::size_t count_ = 0;
  void grow();
};

struct Limits {
  std::size_t max_elements = 200'000'000;
  std::size_t max_memory_bytes = 3ull << 30;
};

class GroupStore {
 public:
  explicit GroupStore(const GroupModel* m) : model_(m) {}

  std::size_t size() const { return elems_.size(); }
  const Key& at(std::size_t i) const { return elems_[i]; }  // 0 = identity
  std::size_t index_of(const Key& k) const { return idx_.find(k); }
  bool contains(const Key& k) const { return idx_.find(k) != SIZE_MAX; }
  const std::vector<Key>& elements() const { return elems_; }
  const std::vector<Key>& generators() const { return gens_; }
  const GroupModel& model() const { return *model_; }
  std::vector<Key> sorted_keys() const;
  std::size_t memory_bytes() const;

  // sampled associativity / identity / inverse / closure audit
  bool audit(uint64_t seed, std::size_t triples) const;

 private:
  const GroupModel* model_;
  std::vector<Key> elems_;
  KeyIndex idx_;
  std::vector<Key> gens_;

  friend GroupStore closure(const GroupModel&, std::vector<Key>, const Limits&);
  friend GroupStore normal_closure(const GroupModel&, const std::vector<Key>&,
                                   std::vector<Key>, const Limits&);
  bool push(const Key& k, const Limits& lim);  // false if already present
  void close_from(std::size_t frontier_start, const Limits& lim);
};

// Subgroup generated by `gens` (breadth-first right-multiplication closure;
// deterministic insertion order).  Throws resource_error past the limits.
GroupStore closure(const GroupModel& M, std::vector<Key> gens,
                   const Limits& lim = {});

// Smallest subgroup containing `seeds` that is stable under conjugation by the
// listed group generators.  The result's generators() holds seeds plus every
// conjugate that enlarged the subgroup (a group generating set).
GroupStore normal_closure(const GroupModel& M, const std::vector<Key>& group_gens,
                          std::vector<Key> seeds, const Limits& lim = {});

struct LcsReport {
  std::vector<uint64_t> orders;  // gamma_1 down to 1
  bool gamma1_structural = false;
};

// gamma_1 = <gens>, gamma_{k+1} = [G, gamma_k] via normal closures of
// generator commutators.  When structural_gamma1 is supplied the first order
// is reported from it instead of enumerating gamma_1.
LcsReport lower_central_series(const GroupModel& M, const std::vector<Key>& gens,
                               std::optional<uint64_t> structural_gamma1 = {},
                               const Limits& lim = {});

struct GroupHom {
  std::vector<Key> images;  // parallel to domain.generators()
};

struct HomSearchOpts {
  std::size_t max_results = SIZE_MAX;
  uint64_t max_steps = 400'000'000;  // candidate extensions examined
};

// All homomorphisms domain -> codomain, described by generator images, with
// images of generator i restricted by gen_constraint[i] (empty vector = no
// constraints).  Backtracking is stagewise over the subgroups generated by
// generator prefixes; results are exhaustive and sorted by image tuple.
std::vector<GroupHom> enumerate_homs(
    const GroupStore& domain, const GroupStore& codomain,
    const std::vector<std::function<bool(const Key&)>>& gen_constraint = {},
    const HomSearchOpts& opts = {});

// Is the F_p[G]-module generated by v free of rank 1?  act(g, w) must define a
// linear left action.  Checks dim span{g.v} == |G|; as an internal audit,
// failure together with sum_g g.v != 0 (which provably forces freeness) throws.
bool is_free_cyclic(const GroupStore& G,
                    const std::function<Vec<Fp>(const Key&, const Vec<Fp>&)>& act,
                    const Vec<Fp>& v);

// ----------------------------------------------------------------- models

// U_n(F_p) via packed matrices; batches right multiplication through the
// SIMD-dispatched plans when a packing fits one word.
class UniModel : public GroupModel {
 public:
  UniModel(uint32_t n, uint32_t p);
  uint32_t n() const { return n_; }
  uint32_t p() const { return p_; }

  Key key_of(const UniMatrix& g) const;
  UniMatrix matrix_of(const Key& k) const;

  Key identity() const override;
  Key mul(const Key& a, const Key& b) const override;
  Key inv(const Key& a) const override;
  std::string describe() const override;
  void mul_batch_right(const Key* xs, std::size_t cnt, const Key& g,
                       Key* out) const override;

 private:
  uint32_t n_, p_, bits_;
  bool one_word_;
  struct PlanEntry {
    kernels::RightMulPlan plan;
    kernels::mul_batch_fn fn;
  };
  mutable std::vector<std::pair<uint64_t, PlanEntry>> plans_;  // per right factor
};

// Z/m, additive; keys are residues.
class CyclicModel : public GroupModel {
 public:
  explicit CyclicModel(uint64_t m);
  uint64_t modulus() const { return m_; }
  Key key_of(uint64_t r) const { return Key{{r % m_, 0}}; }

  Key identity() const override { return Key{{0, 0}}; }
  Key mul(const Key& a, const Key& b) const override;
  Key inv(const Key& a) const override;
  std::string describe() const override;

 private:
  uint64_t m_;
};

// Direct product A x B of two single-word models; word 0 carries A, word 1 B.
class ProductModel : public GroupModel {
 public:
  ProductModel(const GroupModel* A, const GroupModel* B) : A_(A), B_(B) {}
  Key pair(const Key& a, const Key& b) const { return Key{{a.w[0], b.w[0]}}; }
  Key first(const Key& k) const { return Key{{k.w[0], 0}}; }
  Key second(const Key& k) const { return Key{{k.w[1], 0}}; }

  Key identity() const override;
  Key mul(const Key& a, const Key& b) const override;
  Key inv(const Key& a) const override;
  std::string describe() const override;

 private:
  const GroupModel* A_;
  const GroupModel* B_;
};

}  // namespace mv4
