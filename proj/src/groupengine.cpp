#include "mv4/groupengine.hpp"

#include <algorithm>
#include <bit>
#include <random>

namespace mv4 {

void GroupModel::mul_batch_right(const Key* xs, std::size_t cnt, const Key& g,
                                 Key* out) const {
  for (std::size_t i = 0; i < cnt; ++i) out[i] = mul(xs[i], g);
}

// ------------------------------------------------------------------ KeyIndex

KeyIndex::KeyIndex() : slots_(1024), vals_(1024, UINT32_MAX) {}

std::size_t KeyIndex::find(const Key& k) const {
  std::size_t mask = slots_.size() - 1;
  std::size_t h = KeyHash{}(k) & mask;
  while (vals_[h] != UINT32_MAX) {
    if (slots_[h] == k) return vals_[h];
    h = (h + 1) & mask;
  }
  return SIZE_MAX;
}

std::pair<std::size_t, bool> KeyIndex::insert(const Key& k, std::size_t next) {
  if (count_ * 10 >= slots_.size() * 7) grow();
  std::size_t mask = slots_.size() - 1;
  std::size_t h = KeyHash{}(k) & mask;
  while (vals_[h] != UINT32_MAX) {
    if (slots_[h] == k) return {vals_[h], false};
    h = (h + 1) & mask;
  }
  require(next < UINT32_MAX, "element index overflow");
  slots_[h] = k;
  vals_[h] = (uint32_t)next;
  ++count_;
  return {next, true};
}

void KeyIndex::grow() {
  std::vector<Key> old_slots = std::move(slots_);
  std::vector<uint32_t> old_vals = std::move(vals_);
  std::size_t cap = old_slots.size() * 2;
  slots_.assign(cap, Key{});
  vals_.assign(cap, UINT32_MAX);
  std::size_t mask = cap - 1;
  for (std::size_t i = 0; i < old_slots.size(); ++i) {
    if (old_vals[i] == UINT32_MAX) continue;
    std::size_t h = KeyHash{}(old_slots[i]) & mask;
    while (vals_[h] != UINT32_MAX) h = (h + 1) & mask;
    slots_[h] = old_slots[i];
    vals_[h] = old_vals[i];
  }
}

std::size_t KeyIndex::memory_bytes() const {
  return slots_.capacity() * sizeof(Key) + vals_.capacity() * sizeof(uint32_t);
}

// ----------------------------------------------------------------- GroupStore

std::vector<Key> GroupStore::sorted_keys() const {
  std::vector<Key> r = elems_;
  std::sort(r.begin(), r.end());
  return r;
}

std::size_t GroupStore::memory_bytes() const {
  return elems_.capacity() * sizeof(Key) + idx_.memory_bytes();
}

bool GroupStore::push(const Key& k, const Limits& lim) {
  auto [at, fresh] = idx_.insert(k, elems_.size());
  (void)at;
  if (!fresh) return false;
  if (elems_.size() >= lim.max_elements)
    throw resource_error("element limit exceeded during closure", elems_.size());
  elems_.push_back(k);
  if (memory_bytes() > lim.max_memory_bytes)
    throw resource_error("memory limit exceeded during closure", elems_.size());
  return true;
}

void GroupStore::close_from(std::size_t frontier_start, const Limits& lim) {
  std::vector<Key> buf;
  std::size_t lo = frontier_start;
  while (lo < elems_.size()) {
    std::size_t hi = elems_.size();
    buf.resize(hi - lo);
    for (const Key& g : gens_) {
      // elems_ may grow while we insert, so multiply a snapshot of [lo, hi)
      model_->mul_batch_right(elems_.data() + lo, hi - lo, g, buf.data());
      for (const Key& k : buf) push(k, lim);
    }
    lo = hi;
  }
}

bool GroupStore::audit(uint64_t seed, std::size_t triples) const {
  std::mt19937_64 rng(seed);
  auto pick = [&]() { return elems_[rng() % elems_.size()]; };
  const Key id = model_->identity();
  if (elems_.empty() || !(elems_[0] == id)) return false;
  for (std::size_t t = 0; t < triples; ++t) {
    Key a = pick(), b = pick(), c = pick();
    if (!(model_->mul(model_->mul(a, b), c) == model_->mul(a, model_->mul(b, c))))
      return false;
    if (!(model_->mul(a, model_->inv(a)) == id)) return false;
    if (!contains(model_->inv(a))) return false;
    if (!contains(model_->mul(a, b))) return false;
  }
  return true;
}

GroupStore closure(const GroupModel& M, std::vector<Key> gens, const Limits& lim) {
  GroupStore s(&M);
  s.push(M.identity(), lim);
  for (const Key& g : gens)
    if (!(g == M.identity())) s.gens_.push_back(g);
  s.close_from(0, lim);
  return s;
}

GroupStore normal_closure(const GroupModel& M, const std::vector<Key>& group_gens,
                          std::vector<Key> seeds, const Limits& lim) {
  GroupStore s = closure(M, std::move(seeds), lim);
  std::size_t pos = 0;
  while (pos < s.gens_.size()) {
    Key h = s.gens_[pos++];
    for (const Key& g : group_gens) {
      Key c = M.mul(M.mul(M.inv(g), h), g);
      if (s.contains(c)) continue;
      std::size_t old = s.size();
      s.gens_.push_back(c);
      // right-multiply everything known by the new generator, then re-close
      std::vector<Key> buf(old);
      M.mul_batch_right(s.elems_.data(), old, c, buf.data());
      for (const Key& k : buf) s.push(k, lim);
      s.close_from(old, lim);
    }
  }
  return s;
}

LcsReport lower_central_series(const GroupModel& M, const std::vector<Key>& gens,
                               std::optional<uint64_t> structural_gamma1,
                               const Limits& lim) {
  LcsReport rep;
  if (structural_gamma1) {
    rep.orders.push_back(*structural_gamma1);
    rep.gamma1_structural = true;
  } else {
    rep.orders.push_back(closure(M, gens, lim).size());
  }
  if (rep.orders.back() == 1) return rep;

  auto comm = [&](const Key& a, const Key& b) {
    return M.mul(M.mul(M.inv(a), M.inv(b)), M.mul(a, b));
  };
  std::vector<Key> prev_gens = gens;
  for (int depth = 0; depth < 64; ++depth) {
    std::vector<Key> seeds;
    for (const Key& a : gens)
      for (const Key& b : prev_gens) {
        Key c = comm(a, b);
        if (!(c == M.identity()) &&
            std::find(seeds.begin(), seeds.end(), c) == seeds.end())
          seeds.push_back(c);
      }
    if (seeds.empty()) {
      rep.orders.push_back(1);
      return rep;
    }
    GroupStore gk = normal_closure(M, gens, seeds, lim);
    rep.orders.push_back(gk.size());
    if (gk.size() == 1) return rep;
    prev_gens = gk.generators();
  }
  throw contract_error("lower central series did not terminate (not nilpotent?)");
}

// ------------------------------------------------------------ hom enumeration

std::vector<GroupHom> enumerate_homs(
    const GroupStore& domain, const GroupStore& codomain,
    const std::vector<std::function<bool(const Key&)>>& gen_constraint,
    const HomSearchOpts& opts) {
  const GroupModel& DM = domain.model();
  const GroupModel& CM = codomain.model();
  const std::vector<Key>& gens = domain.generators();
  std::size_t r = gens.size();
  require(gen_constraint.empty() || gen_constraint.size() == r,
          "one constraint per domain generator expected");

  // stagewise membership of D_k = <g_1..g_k>, with one expression per element
  std::vector<uint32_t> members{(uint32_t)domain.index_of(DM.identity())};
  std::vector<std::pair<uint32_t, uint32_t>> expr(domain.size(), {UINT32_MAX, 0});
  std::vector<char> in(domain.size(), 0);
  in[members[0]] = 1;
  std::vector<std::size_t> stage_end(r + 1, 1);
  for (std::size_t k = 0; k < r; ++k) {
    std::size_t scan = 0;
    // close the current member list under right-multiplication by g_1..g_{k+1}
    while (scan < members.size()) {
      Key x = domain.at(members[scan]);
      for (std::size_t j = 0; j <= k; ++j) {
        Key y = DM.mul(x, gens[j]);
        uint32_t yi = (uint32_t)domain.index_of(y);
        require(yi != UINT32_MAX, "domain store is not closed");
        if (!in[yi]) {
          in[yi] = 1;
          expr[yi] = {members[scan], (uint32_t)j};
          members.push_back(yi);
        }
      }
      ++scan;
    }
    stage_end[k + 1] = members.size();
  }

  // product table x*g_j as domain indices, for the verification sweep
  Mat<uint32_t> ptab(domain.size(), r, 0);
  for (uint32_t mi : members) {
    Key x = domain.at(mi);
    for (std::size_t j = 0; j < r; ++j)
      ptab.at(mi, j) = (uint32_t)domain.index_of(DM.mul(x, gens[j]));
  }

  // candidate images per generator, canonical order
  std::vector<std::vector<Key>> cands(r);
  {
    std::vector<Key> all = codomain.sorted_keys();
    for (std::size_t j = 0; j < r; ++j) {
      if (gen_constraint.empty() || !gen_constraint[j]) {
        cands[j] = all;
      } else {
        for (const Key& k : all)
          if (gen_constraint[j](k)) cands[j].push_back(k);
      }
    }
  }

  std::vector<GroupHom> results;
  std::vector<Key> img(domain.size());
  img[members[0]] = CM.identity();
  std::vector<Key> chosen(r);
  uint64_t steps = 0;

  auto extend_and_check = [&](std::size_t k) -> bool {
    // images for elements discovered at stage k (expressions use gens <= k)
    for (std::size_t t = stage_end[k]; t < stage_end[k + 1]; ++t) {
      auto [par, j] = expr[members[t]];
      img[members[t]] = CM.mul(img[par], chosen[j]);
    }
    // full verification over D_{k+1}: img(x * g_j) == img(x) * img(g_j)
    for (std::size_t t = 0; t < stage_end[k + 1]; ++t) {
      uint32_t xi = members[t];
      for (std::size_t j = 0; j <= k; ++j)
        if (!(img[ptab.at(xi, j)] == CM.mul(img[xi], chosen[j]))) return false;
    }
    return true;
  };

  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == r) {
      results.push_back(GroupHom{chosen});
      return;
    }
    for (const Key& h : cands[k]) {
      if (results.size() >= opts.max_results) return;
      if (++steps > opts.max_steps)
        throw resource_error("hom search budget exceeded", results.size());
      chosen[k] = h;
      if (extend_and_check(k)) rec(k + 1);
    }
  };
  rec(0);
  return results;
}

bool is_free_cyclic(const GroupStore& G,
                    const std::function<Vec<Fp>(const Key&, const Vec<Fp>&)>& act,
                    const Vec<Fp>& v) {
  require(!v.empty(), "module vector must be nonempty");
  uint32_t p = v[0].p;
  RowReducer rr(p, v.size());
  Vec<Fp> sum(v.size(), Fp::zero(p));
  for (std::size_t i = 0; i < G.size(); ++i) {
    Vec<Fp> w = act(G.at(i), v);
    require(w.size() == v.size(), "action changed the module dimension");
    std::vector<uint8_t> row(w.size());
    for (std::size_t t = 0; t < w.size(); ++t) {
      row[t] = (uint8_t)w[t].v;
      sum[t] = sum[t] + w[t];
    }
    rr.add_row(std::move(row));
  }
  bool free = rr.rank() == G.size();
  bool sum_nonzero = false;
  for (const auto& x : sum) sum_nonzero = sum_nonzero || !x.is_zero();
  if (sum_nonzero && !free)
    throw contract_error("rank lemma violated: nonzero orbit sum but module not free");
  return free;
}

// ------------------------------------------------------------------- models

UniModel::UniModel(uint32_t n, uint32_t p) : n_(n), p_(p) {
  check_prime(p);
  bits_ = (uint32_t)std::bit_width(p - 1);
  uint32_t nent = n * (n - 1) / 2;
  require((uint64_t)nent * bits_ <= 128, "matrix shape exceeds 128-bit keys");
  one_word_ = (uint64_t)nent * bits_ <= 64;
}

Key UniModel::key_of(const UniMatrix& g) const {
  require(g.n == n_ && g.p == p_, "matrix does not match the model shape");
  if (one_word_) return Key{{g.pack(), 0}};
  uint32_t k0 = 64 / bits_;  // entries held by word 0
  Key k;
  k.w[0] = kernels::pack_u64(g.e.data(), k0, bits_);
  k.w[1] = kernels::pack_u64(g.e.data() + k0, g.nent() - k0, bits_);
  return k;
}

UniMatrix UniModel::matrix_of(const Key& k) const {
  if (one_word_) return UniMatrix::unpack(k.w[0], n_, p_);
  UniMatrix g(n_, p_);
  uint32_t k0 = 64 / bits_;
  kernels::unpack_u64(k.w[0], g.e.data(), k0, bits_);
  kernels::unpack_u64(k.w[1], g.e.data() + k0, g.nent() - k0, bits_);
  return g;
}

Key UniModel::identity() const { return key_of(UniMatrix::identity(n_, p_)); }

Key UniModel::mul(const Key& a, const Key& b) const {
  return key_of(matrix_of(a).mul(matrix_of(b)));
}

Key UniModel::inv(const Key& a) const { return key_of(matrix_of(a).inv()); }

std::string UniModel::describe() const {
  return "unitriangular n=" + std::to_string(n_) + " p=" + std::to_string(p_);
}

void UniModel::mul_batch_right(const Key* xs, std::size_t cnt, const Key& g,
                               Key* out) const {
  if (!one_word_) {
    GroupModel::mul_batch_right(xs, cnt, g, out);
    return;
  }
  const PlanEntry* pe = nullptr;
  for (const auto& [kw, entry] : plans_)
    if (kw == g.w[0]) {
      pe = &entry;
      break;
    }
  if (!pe) {
    UniMatrix gm = matrix_of(g);
    PlanEntry e{kernels::make_right_plan(p_, n_, gm.e.data()), nullptr};
    e.fn = kernels::select_mul_batch(e.plan);
    plans_.emplace_back(g.w[0], std::move(e));
    pe = &plans_.back().second;
  }
  static thread_local std::vector<uint64_t> in_buf, out_buf;
  in_buf.resize(cnt);
  out_buf.resize(cnt);
  for (std::size_t i = 0; i < cnt; ++i) in_buf[i] = xs[i].w[0];
  pe->fn(pe->plan, in_buf.data(), cnt, out_buf.data());
  for (std::size_t i = 0; i < cnt; ++i) out[i] = Key{{out_buf[i], 0}};
}

CyclicModel::CyclicModel(uint64_t m) : m_(m) { require(m >= 1, "modulus must be positive"); }

Key CyclicModel::mul(const Key& a, const Key& b) const {
  return Key{{(a.w[0] + b.w[0]) % m_, 0}};
}

Key CyclicModel::inv(const Key& a) const {
  return Key{{a.w[0] ? m_ - a.w[0] : 0, 0}};
}

std::string CyclicModel::describe() const { return "cyclic m=" + std::to_string(m_); }

Key ProductModel::identity() const {
  return Key{{A_->identity().w[0], B_->identity().w[0]}};
}

Key ProductModel::mul(const Key& a, const Key& b) const {
  return Key{{A_->mul(first(a), first(b)).w[0], B_->mul(second(a), second(b)).w[0]}};
}

Key ProductModel::inv(const Key& a) const {
  return Key{{A_->inv(first(a)).w[0], B_->inv(second(a)).w[0]}};
}

std::string ProductModel::describe() const {
  return "(" + A_->describe() + ") x (" + B_->describe() + ")";
}

}  // namespace mv4
