#include "mv4/massey.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "mv4/common.hpp"
#include "mv4/unipotent.hpp"

namespace mv4 {

namespace {

Vec<Fp> vneg(const Vec<Fp>& a) {
  Vec<Fp> r = a;
  for (Fp& x : r) x = -x;
  return r;
}

Fp augmentation(const Vec<Fp>& v, uint32_t p) {
  Fp s = Fp::zero(p);
  for (const Fp& c : v) s = s + c;
  return s;
}

// U_n modulo its centre: coset representatives have a zero top-right corner,
// and every product is renormalized back onto them.
class BarUniModel : public GroupModel {
 public:
  BarUniModel(uint32_t n, uint32_t p) : um_(n, p) {}
  const UniModel& inner() const { return um_; }

  Key identity() const override { return um_.identity(); }
  Key mul(const Key& a, const Key& b) const override { return strip(um_.mul(a, b)); }
  Key inv(const Key& a) const override { return strip(um_.inv(a)); }
  std::string describe() const override {
    return "Bar" + um_.describe();
  }

 private:
  UniModel um_;

  Key strip(const Key& k) const {
    UniMatrix m = um_.matrix_of(k);
    if (m.get(1, m.n) == 0) return k;
    m.set(1, m.n, 0);
    return um_.key_of(m);
  }
};

// Greedy generating set for a subgroup given as an element list; at most
// log_2 |H| generators, so downstream coboundary systems stay small.
std::vector<Key> small_generating_set(const GroupModel& M, const std::vector<Key>& members) {
  std::vector<Key> gens{M.identity()};
  GroupStore st = closure(M, gens);
  for (const Key& m : members) {
    if (st.contains(m)) continue;
    gens.push_back(m);
    st = closure(M, gens);
  }
  return gens;
}

// Extends gamma (a hom into the doubled base) across the extension: solves
// the pulled-back defining cocycle for a cochain b, in which case
// g -> (-b(g), gamma(g)) is a hom into the extension group.  Optionally hands
// the gamma value table back to the caller.
std::optional<GroupHom> lift_through_extension(const TildeUn& T, const GroupStore& G,
                                               const GroupHom& gamma,
                                               std::vector<Key>* gtab_out) {
  std::vector<Key> gtab = hom_table(G, *T.base_model, gamma);
  const GModule& M = T.group->module();
  const std::size_t d = M.dim();
  const uint32_t p = M.p();
  for (const Fp& c : T.group->normalization_shift())
    require(c.is_zero(), "lift_through_extension: cocycle is not normalized");

  const GroupStore& B = M.group();
  auto pulled = std::make_shared<GModule>(
      &G, d, p, [&](const Key& k, std::size_t j) {
        const std::size_t bi = B.index_of(gtab[G.index_of(k)]);
        const std::vector<uint8_t>& mat = M.matrix_of_index(bi);
        Vec<Fp> col(d, Fp::zero(p));
        for (std::size_t a = 0; a < d; ++a) col[a] = Fp(mat[a * d + j], p);
        return col;
      });

  Cochain2 c;
  c.G = &G;
  c.M = pulled.get();
  c.owned = pulled;
  c.f = [&T, &gtab, &G](const Key& a, const Key& b) {
    return T.omega(gtab[G.index_of(a)], gtab[G.index_of(b)]);
  };

  std::optional<Cochain1> b = is_coboundary2(c);
  if (gtab_out) *gtab_out = std::move(gtab);
  if (!b) return std::nullopt;

  GroupHom psi;
  const std::vector<Key>& gens = G.generators();
  psi.images.reserve(gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j)
    psi.images.push_back(T.group->key_of(vneg(b->at(gens[j])), gamma.images[j]));
  return psi;
}

// Full-table re-verification of s_i o psi = chi_i for a returned witness.
void verify_witness_tables(const CharacterTuple& ct,
                           const std::function<Fp(int, const Key&)>& schar,
                           const std::vector<Key>& tab) {
  const GroupStore& G = *ct.domain;
  for (std::size_t i = 0; i < ct.chi.size(); ++i)
    for (std::size_t e = 0; e < G.size(); ++e)
      require(schar((int)i, tab[e]) == ct.chi[i][e],
              "vanishes_in_sense_of: witness fails character re-verification");
}

// Shared trunk of the repeated-product drivers: embed into the wide matrix
// group, apply every admissible pair of one-sided projection powers, check
// the truncated character pattern on every listed element, and pack the
// generator images.
std::vector<RepeatedWitness> repeated_chain(const TildeUn& T, const Mat<Fp>& dict,
                                            const std::vector<Key>& tab,
                                            const std::vector<std::size_t>& gen_indices,
                                            const std::vector<std::vector<Fp>>& chi) {
  const uint32_t p = T.p;
  std::vector<UniMatrix> wide(tab.size());
  for (std::size_t e = 0; e < tab.size(); ++e) wide[e] = kappa(T, dict, tab[e]);

  std::vector<RepeatedWitness> out;
  for (uint32_t a = 0; a < p; ++a) {
    for (uint32_t b = 0; b < p; ++b) {
      RepeatedWitness w;
      w.drop_front = a;
      w.drop_back = b;
      w.size = 2 * p + 1 - a - b;
      UniModel um(w.size, p);
      std::vector<UniMatrix> proj(tab.size());
      for (std::size_t e = 0; e < tab.size(); ++e)
        proj[e] = project_k(project_k(wide[e], Side::tail, a), Side::head, b);
      for (std::size_t e = 0; e < tab.size(); ++e) {
        for (uint32_t i = 1; i <= 2 * p - a - b; ++i) {
          const uint32_t pos = i + a;  // position in the untruncated pattern
          const std::size_t ci = pos <= p - 1 ? 0 : pos == p ? 1 : pos == p + 1 ? 2 : 3;
          require(s_proj(proj[e], i) == chi[ci][e],
                  "repeated_massey_witness: truncation fails the character pattern");
        }
      }
      w.hom.images.reserve(gen_indices.size());
      for (std::size_t j : gen_indices) w.hom.images.push_back(um.key_of(proj[j]));
      out.push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace

CharacterTuple make_character_tuple(
    std::shared_ptr<const GroupStore> domain, uint32_t p,
    const std::vector<std::function<Fp(const Key&)>>& chars) {
  check_prime(p);
  require(domain != nullptr && domain->size() > 0, "make_character_tuple: empty domain");
  const GroupStore& G = *domain;
  CharacterTuple ct;
  ct.domain = domain;
  ct.p = p;
  ct.chi.reserve(chars.size());
  for (const auto& f : chars) {
    std::vector<Fp> table;
    table.reserve(G.size());
    for (std::size_t e = 0; e < G.size(); ++e) {
      Fp v = f(G.at(e));
      require(v.p == p, "make_character_tuple: character has wrong characteristic");
      table.push_back(v);
    }
    ct.chi.push_back(std::move(table));
  }

  // audit: additive on every Cayley edge, which forces a homomorphism
  const std::vector<Key>& gens = G.generators();
  for (std::size_t e = 0; e < G.size(); ++e) {
    for (const Key& g : gens) {
      const std::size_t t = G.index_of(G.model().mul(G.at(e), g));
      require(t != SIZE_MAX, "make_character_tuple: domain is not closed");
      const std::size_t gi = G.index_of(g);
      for (const auto& table : ct.chi)
        require(table[t] == table[e] + table[gi],
                "make_character_tuple: character is not a homomorphism");
    }
  }
  return ct;
}

Fp tilde_base_character(const TildeUn& T, int i, const Key& base_elem) {
  require(i >= 0 && i < 4, "tilde_base_character: index out of range");
  const WreathModel& W = *T.wreath;
  const Key f = i < 2 ? T.base_model->first(base_elem) : T.base_model->second(base_elem);
  auto [alg, pt] = W.parts(f);
  if (i == 0 || i == 3) return Fp(pt.get(1, 2), T.p);
  return augmentation(alg, T.p);
}

Fp tilde_character(const TildeUn& T, int i, const Key& ext_elem) {
  return tilde_base_character(T, i, T.group->parts(ext_elem).second);
}

MasseyTarget target_unitriangular(uint32_t n, uint32_t p, const Limits& lim) {
  check_prime(p);
  require(n >= 2, "target_unitriangular: need at least two characters");
  auto um = std::make_shared<UniModel>(n + 1, p);
  std::vector<Key> gens;
  for (uint32_t i = 1; i <= n; ++i)
    gens.push_back(um->key_of(UniMatrix::sigma(n + 1, p, i)));
  MasseyTarget t;
  t.name = "u" + std::to_string(n + 1);
  t.p = p;
  t.search = std::make_shared<GroupStore>(closure(*um, gens, lim));
  t.model = um;
  for (uint32_t i = 1; i <= n; ++i)
    t.s.push_back([um, i](const Key& k) { return s_proj(um->matrix_of(k), i); });
  return t;
}

MasseyTarget target_bar_unitriangular(uint32_t n, uint32_t p, const Limits& lim) {
  check_prime(p);
  require(n >= 2, "target_bar_unitriangular: need at least two characters");
  auto bm = std::make_shared<BarUniModel>(n + 1, p);
  std::vector<Key> gens;
  for (uint32_t i = 1; i <= n; ++i)
    gens.push_back(bm->inner().key_of(UniMatrix::sigma(n + 1, p, i)));
  MasseyTarget t;
  t.name = "bar-u" + std::to_string(n + 1);
  t.p = p;
  t.search = std::make_shared<GroupStore>(closure(*bm, gens, lim));
  t.model = bm;
  for (uint32_t i = 1; i <= n; ++i)
    t.s.push_back([bm, i](const Key& k) { return s_proj(bm->inner().matrix_of(k), i); });
  return t;
}

MasseyTarget target_collapse(uint32_t p, int tag) {
  require(tag == 1 || tag == 2, "target_collapse: tag must be 1 or 2");
  auto W = std::make_shared<WreathModel>(2, p);
  std::vector<Key> gens{W->point_sigma(1), W->algebra_unit()};
  MasseyTarget t;
  t.name = tag == 1 ? "u3w1" : "u3w2";
  t.p = p;
  t.search = std::make_shared<GroupStore>(closure(*W, gens));
  t.model = W;
  // the collapse map of each tag sends the point exponent and the
  // augmentation to the two superdiagonal entries, in tag order
  auto point = [W, p](const Key& k) { return Fp(W->parts(k).second.get(1, 2), p); };
  auto aug = [W, p](const Key& k) { return augmentation(W->parts(k).first, p); };
  if (tag == 1)
    t.s = {point, aug};
  else
    t.s = {aug, point};
  return t;
}

MasseyTarget target_tilde_u5(uint32_t p) {
  auto T = std::make_shared<TildeUn>(build_tilde_un(p, 2));
  MasseyTarget t;
  t.name = "tilde-u5";
  t.p = p;
  t.search = T->base;
  t.model = T->base_model;
  for (int i = 0; i < 4; ++i)
    t.s.push_back([T, i](const Key& k) { return tilde_base_character(*T, i, k); });
  t.ext = T;
  return t;
}

std::vector<Key> hom_table(const GroupStore& domain, const GroupModel& codomain,
                           const GroupHom& h) {
  const std::vector<Key>& gens = domain.generators();
  require(h.images.size() == gens.size(), "hom_table: one image per domain generator");
  const std::size_t n = domain.size();
  std::vector<Key> tab(n);
  std::vector<uint8_t> seen(n, 0);
  const std::size_t i0 = domain.index_of(domain.model().identity());
  require(i0 != SIZE_MAX, "hom_table: domain lacks its identity");
  tab[i0] = codomain.identity();
  seen[i0] = 1;
  std::deque<std::size_t> queue{i0};
  while (!queue.empty()) {
    const std::size_t ix = queue.front();
    queue.pop_front();
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const std::size_t iy = domain.index_of(domain.model().mul(domain.at(ix), gens[j]));
      require(iy != SIZE_MAX, "hom_table: domain is not closed");
      if (seen[iy]) continue;
      seen[iy] = 1;
      tab[iy] = codomain.mul(tab[ix], h.images[j]);
      queue.push_back(iy);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    require(seen[i], "hom_table: generators do not reach every element");
  // well-definedness: every edge must agree, which forces the hom property
  for (std::size_t ix = 0; ix < n; ++ix) {
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const std::size_t iy = domain.index_of(domain.model().mul(domain.at(ix), gens[j]));
      require(tab[iy] == codomain.mul(tab[ix], h.images[j]),
              "hom_table: images do not define a homomorphism");
    }
  }
  return tab;
}

std::optional<GroupHom> vanishes_in_sense_of(const CharacterTuple& ct,
                                             const MasseyTarget& target,
                                             const HomSearchOpts& opts) {
  require(ct.domain != nullptr, "vanishes_in_sense_of: tuple has no domain");
  require(ct.p == target.p, "vanishes_in_sense_of: characteristic mismatch");
  require(ct.chi.size() == target.s.size(),
          "vanishes_in_sense_of: character count does not match the target");
  const GroupStore& G = *ct.domain;
  const std::vector<Key>& gens = G.generators();
  const std::size_t nch = ct.chi.size();

  std::vector<std::function<bool(const Key&)>> cons;
  cons.reserve(gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j) {
    const std::size_t gj = G.index_of(gens[j]);
    std::vector<Fp> want(nch, Fp::zero(ct.p));
    for (std::size_t i = 0; i < nch; ++i) want[i] = ct.chi[i][gj];
    const MasseyTarget* tp = &target;
    cons.push_back([tp, want](const Key& cand) {
      for (std::size_t i = 0; i < want.size(); ++i)
        if (!(tp->s[i](cand) == want[i])) return false;
      return true;
    });
  }

  if (!target.ext) {
    HomSearchOpts first = opts;
    first.max_results = 1;
    std::vector<GroupHom> homs = enumerate_homs(G, *target.search, cons, first);
    if (homs.empty()) return std::nullopt;
    const std::vector<Key> tab = hom_table(G, target.search->model(), homs[0]);
    verify_witness_tables(
        ct, [&](int i, const Key& k) { return target.s[(std::size_t)i](k); }, tab);
    return homs[0];
  }

  // lifting target: every compatible hom into the extension group projects to
  // a compatible hom into the search group, so sweeping those and testing the
  // pulled-back extension class is exhaustive
  const TildeUn& T = *target.ext;
  std::vector<GroupHom> gammas = enumerate_homs(G, *target.search, cons, opts);
  for (const GroupHom& gamma : gammas) {
    std::optional<GroupHom> psi = lift_through_extension(T, G, gamma, nullptr);
    if (!psi) continue;
    const std::vector<Key> tab = hom_table(G, *T.group, *psi);
    verify_witness_tables(
        ct, [&](int i, const Key& k) { return tilde_character(T, i, k); }, tab);
    return psi;
  }
  return std::nullopt;
}

LiftReport check_lifting_theorem(const TildeUn& T, const GroupStore& domain,
                                 const GroupHom& gamma) {
  LiftReport R;
  std::vector<Key> gtab;
  R.lift = lift_through_extension(T, domain, gamma, &gtab);
  R.lifts = R.lift.has_value();

  const WreathModel& W = *T.wreath;
  std::vector<Key> members;
  for (std::size_t e = 0; e < domain.size(); ++e) {
    const Key& bk = gtab[e];
    if (W.parts(T.base_model->first(bk)).second.is_identity() &&
        W.parts(T.base_model->second(bk)).second.is_identity())
      members.push_back(domain.at(e));
  }
  GroupStore lambda = closure(domain.model(), small_generating_set(domain.model(), members));
  require(lambda.size() == members.size(),
          "check_lifting_theorem: preimage of the kernel is not a subgroup");
  R.lambda_order = lambda.size();

  const uint32_t p = T.p;
  const uint32_t k = W.algebra_dim();
  GModule triv = GModule::trivial(&lambda, p);
  auto coord = [&](int factor, uint32_t j) {
    return Cochain1::from_function(lambda, triv, [&, factor, j](const Key& g) {
      const Key& bk = gtab[domain.index_of(g)];
      const Key f = factor == 1 ? T.base_model->first(bk) : T.base_model->second(bk);
      return Vec<Fp>{W.parts(f).first[j]};
    });
  };
  std::vector<Cochain1> xs, ys;
  for (uint32_t j = 0; j < k; ++j) {
    xs.push_back(coord(1, j));
    ys.push_back(coord(2, j));
  }
  bool orth = true;
  for (uint32_t jx = 0; jx < k && orth; ++jx)
    for (uint32_t jy = 0; jy < k && orth; ++jy)
      if (!is_coboundary2(cup11(xs[jx], ys[jy]))) orth = false;
  R.orthogonal = orth;
  R.agree = R.lifts == R.orthogonal;
  return R;
}

std::vector<std::shared_ptr<GroupStore>> subgroup_conjugacy_reps(const GroupStore& G) {
  require(G.size() <= 256, "subgroup_conjugacy_reps: group too large for the lattice walk");
  const GroupModel& M = G.model();
  const std::vector<Key>& all = G.elements();

  // walk the lattice: every subgroup arises from a smaller one by adjoining
  // one outside element
  std::map<std::vector<Key>, std::vector<Key>> subs;  // sorted elements -> generators
  {
    GroupStore triv = closure(M, {M.identity()});
    std::deque<std::vector<Key>> queue;
    std::vector<Key> tkey = triv.sorted_keys();
    subs.emplace(tkey, std::vector<Key>{M.identity()});
    queue.push_back(tkey);
    while (!queue.empty()) {
      const std::vector<Key> cur = queue.front();
      queue.pop_front();
      const std::vector<Key> gens = subs.at(cur);
      for (const Key& g : all) {
        if (std::binary_search(cur.begin(), cur.end(), g)) continue;
        std::vector<Key> ng = gens;
        ng.push_back(g);
        GroupStore st = closure(M, ng);
        std::vector<Key> key = st.sorted_keys();
        if (subs.emplace(std::move(key), std::move(ng)).second)
          queue.push_back(st.sorted_keys());
      }
    }
  }

  std::set<std::vector<Key>> reps;
  for (const auto& [elems, gens] : subs) {
    std::vector<Key> best = elems;
    for (const Key& g : all) {
      const Key gi = M.inv(g);
      std::vector<Key> conj;
      conj.reserve(elems.size());
      for (const Key& s : elems) conj.push_back(M.mul(M.mul(gi, s), g));
      std::sort(conj.begin(), conj.end());
      if (conj < best) best = std::move(conj);
    }
    reps.insert(std::move(best));
  }

  std::vector<std::shared_ptr<GroupStore>> out;
  out.reserve(reps.size());
  for (const std::vector<Key>& elems : reps) {
    auto st = std::make_shared<GroupStore>(closure(M, small_generating_set(M, elems)));
    require(st->size() == elems.size(),
            "subgroup_conjugacy_reps: canonical conjugate is not a subgroup");
    out.push_back(std::move(st));
  }
  return out;
}

std::vector<LiftReport> lifting_sweep(const TildeUn& T) {
  std::vector<std::shared_ptr<GroupStore>> reps = subgroup_conjugacy_reps(*T.base);
  std::vector<LiftReport> out;
  out.reserve(reps.size());
  for (const auto& st : reps) {
    GroupHom inclusion{st->generators()};
    out.push_back(check_lifting_theorem(T, *st, inclusion));
  }
  return out;
}

std::vector<RepeatedWitness> repeated_massey_witness(const TildeUn& T,
                                                     const Mat<Fp>& dict,
                                                     const CharacterTuple& ct,
                                                     const GroupHom& psi) {
  require(ct.domain != nullptr, "repeated_massey_witness: tuple has no domain");
  require(ct.p == T.p, "repeated_massey_witness: characteristic mismatch");
  require(ct.chi.size() == 4, "repeated_massey_witness: needs exactly four characters");
  const GroupStore& G = *ct.domain;
  const std::vector<Key> tab = hom_table(G, *T.group, psi);
  for (int i = 0; i < 4; ++i)
    for (std::size_t e = 0; e < G.size(); ++e)
      require(tilde_character(T, i, tab[e]) == ct.chi[i][e],
              "repeated_massey_witness: psi is not compatible with the characters");
  std::vector<std::size_t> gidx;
  gidx.reserve(G.generators().size());
  for (const Key& g : G.generators()) gidx.push_back(G.index_of(g));
  return repeated_chain(T, dict, tab, gidx, ct.chi);
}

std::vector<RepeatedWitness> repeated_massey_identity(const TildeUn& T,
                                                      const Mat<Fp>& dict) {
  const std::array<Key, 4> gens = T.canonical_generators();
  const std::vector<Key> tab(gens.begin(), gens.end());
  std::vector<std::vector<Fp>> chi(4);
  for (int i = 0; i < 4; ++i) {
    chi[i].reserve(4);
    for (int j = 0; j < 4; ++j) chi[i].push_back(tilde_character(T, i, tab[j]));
  }
  return repeated_chain(T, dict, tab, {0, 1, 2, 3}, chi);
}

bool generic_tuple(uint32_t p, const Vec<Fp>& a, const Vec<Fp>& b,
                   const Vec<Fp>& c, const Vec<Fp>& d) {
  check_prime(p);
  require(!a.empty() && a.size() == b.size() && b.size() == c.size() && c.size() == d.size(),
          "generic_tuple: classes live in different spaces");
  if (p == 2) return true;
  auto zero = [](const Vec<Fp>& v) {
    for (const Fp& x : v)
      if (!x.is_zero()) return false;
    return true;
  };
  auto indep = [p](const Vec<Fp>& u, const Vec<Fp>& w) {
    RowReducer rr(p, u.size());
    std::vector<uint8_t> row(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) row[i] = (uint8_t)u[i].v;
    rr.add_row(row);
    for (std::size_t i = 0; i < w.size(); ++i) row[i] = (uint8_t)w[i].v;
    rr.add_row(row);
    return rr.rank() == 2;
  };
  return (zero(a) || indep(a, b)) && (zero(d) || indep(d, c));
}

}  // namespace mv4
