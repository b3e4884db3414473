#include "mv4/wreath.hpp"

#include <bit>
#include <random>

namespace mv4 {

namespace {

Vec<Fp> mat_vec(const Mat<Fp>& M, const Vec<Fp>& v) {
  require(M.cols == v.size(), "mat_vec: size mismatch");
  const uint32_t p = v.empty() ? 2 : v[0].p;
  Vec<Fp> r(M.rows, Fp::zero(p));
  for (std::size_t i = 0; i < M.rows; ++i) {
    uint64_t s = 0;
    for (std::size_t j = 0; j < M.cols; ++j) s += (uint64_t)M.at(i, j).v * v[j].v;
    r[i] = Fp::raw((uint32_t)(s % p), p);
  }
  return r;
}

}  // namespace

// --------------------------------------------------------------- WreathModel

WreathModel::WreathModel(uint32_t m, uint32_t p) : m_(m), p_(p) {
  check_prime(p);
  require(m >= 2, "WreathModel: m must be at least 2");
  bits_ = std::bit_width(p - 1);
  pm_ = std::make_shared<UniModel>(m, p);
  std::vector<Key> gens;
  for (uint32_t i = 1; i < m; ++i)
    gens.push_back(pm_->key_of(UniMatrix::sigma(m, p, i)));
  points_ = std::make_shared<GroupStore>(closure(*pm_, gens));
  const std::size_t k = points_->size();
  const uint64_t total_bits = (k + (uint64_t)m * (m - 1) / 2) * bits_;
  if (total_bits > 64)
    throw resource_error("WreathModel: element does not fit a 64-bit key", k);
  coef_mask_ = (k * bits_ == 64) ? ~0ull : ((1ull << (k * bits_)) - 1);
  lperm_.assign(k, std::vector<uint32_t>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t t = points_->index_of(pm_->mul(points_->at(i), points_->at(j)));
      require(t != SIZE_MAX, "WreathModel: point group not closed");
      lperm_[i][j] = (uint32_t)t;
    }
}

std::size_t WreathModel::point_index(uint64_t point_word) const {
  const std::size_t i = points_->index_of(Key{{point_word, 0}});
  require(i != SIZE_MAX, "WreathModel: point part outside the group");
  return i;
}

Key WreathModel::key_of(const Vec<Fp>& algebra, const UniMatrix& point) const {
  const std::size_t k = points_->size();
  require(algebra.size() == k, "WreathModel: wrong coefficient count");
  require(point.n == m_ && point.p == p_, "WreathModel: wrong point group");
  uint64_t coef = 0;
  for (std::size_t j = 0; j < k; ++j) {
    require(algebra[j].p == p_ && algebra[j].v < p_, "WreathModel: bad coefficient");
    coef |= (uint64_t)algebra[j].v << (j * bits_);
  }
  return Key{{coef | (pm_->key_of(point).w[0] << (k * bits_)), 0}};
}

std::pair<Vec<Fp>, UniMatrix> WreathModel::parts(const Key& k) const {
  const std::size_t kd = points_->size();
  const uint64_t vmask = (1ull << bits_) - 1;
  Vec<Fp> x(kd, Fp::zero(p_));
  for (std::size_t j = 0; j < kd; ++j)
    x[j] = Fp::raw((uint32_t)((k.w[0] >> (j * bits_)) & vmask), p_);
  return {x, pm_->matrix_of(Key{{k.w[0] >> (kd * bits_), 0}})};
}

Key WreathModel::algebra_unit() const {
  Vec<Fp> x(points_->size(), Fp::zero(p_));
  const std::size_t i0 = points_->index_of(pm_->identity());
  x[i0] = Fp::one(p_);
  return key_of(x, UniMatrix::identity(m_, p_));
}

Key WreathModel::point_sigma(uint32_t i) const {
  require(i >= 1 && i < m_, "WreathModel: superdiagonal index out of range");
  return key_of(Vec<Fp>(points_->size(), Fp::zero(p_)), UniMatrix::sigma(m_, p_, i));
}

Key WreathModel::identity() const { return Key{{0, 0}}; }

Key WreathModel::mul(const Key& a, const Key& b) const {
  const std::size_t k = points_->size();
  const uint32_t shift = (uint32_t)(k * bits_);
  const uint64_t vmask = (1ull << bits_) - 1;
  const uint64_t pa = a.w[0] >> shift, pb = b.w[0] >> shift;
  const auto& perm = lperm_[point_index(pa)];
  uint64_t coef = a.w[0] & coef_mask_;
  const uint64_t cb = b.w[0] & coef_mask_;
  for (std::size_t j = 0; j < k; ++j) {
    const uint64_t x = (cb >> (j * bits_)) & vmask;
    if (!x) continue;
    const std::size_t t = perm[j];
    const uint64_t cur = (coef >> (t * bits_)) & vmask;
    coef = (coef & ~(vmask << (t * bits_))) | (((cur + x) % p_) << (t * bits_));
  }
  const uint64_t pc = pm_->mul(Key{{pa, 0}}, Key{{pb, 0}}).w[0];
  return Key{{coef | (pc << shift), 0}};
}

Key WreathModel::inv(const Key& a) const {
  const std::size_t k = points_->size();
  const uint32_t shift = (uint32_t)(k * bits_);
  const uint64_t vmask = (1ull << bits_) - 1;
  const uint64_t pa = a.w[0] >> shift;
  const uint64_t pi = pm_->inv(Key{{pa, 0}}).w[0];
  const auto& perm = lperm_[point_index(pi)];
  const uint64_t ca = a.w[0] & coef_mask_;
  uint64_t coef = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const uint64_t x = (ca >> (j * bits_)) & vmask;
    if (!x) continue;
    coef |= (uint64_t)(p_ - x) << (perm[j] * bits_);
  }
  return Key{{coef | (pi << shift), 0}};
}

std::string WreathModel::describe() const {
  return "F_" + std::to_string(p_) + "[U_" + std::to_string(m_) + "] x| U_" +
         std::to_string(m_);
}

// --------------------------------------------------------------------- f_map

UniMatrix f_map(const WreathModel& W, const Key& k, int tag) {
  require(tag == 1 || tag == 2, "f_map: tag must be 1 or 2");
  const auto [x, h] = W.parts(k);
  const uint32_t m = W.m(), p = W.p();
  const GroupStore& pts = W.point_group();
  UniMatrix r(m + 1, p);
  if (tag == 1) {
    for (uint32_t i = 1; i < m; ++i)
      for (uint32_t j = i + 1; j <= m; ++j) r.set(i, j, h.get(i, j));
    for (uint32_t i = 1; i <= m; ++i) {
      uint64_t s = 0;
      for (std::size_t b = 0; b < pts.size(); ++b)
        s += (uint64_t)x[b].v * W.point_model().matrix_of(pts.at(b)).get(i, m);
      r.set(i, m + 1, (uint32_t)(s % p));
    }
  } else {
    for (uint32_t i = 1; i < m; ++i)
      for (uint32_t j = i + 1; j <= m; ++j) r.set(1 + i, 1 + j, h.get(i, j));
    std::vector<uint64_t> mu(m + 1, 0);  // 1-based dual coordinates
    for (std::size_t b = 0; b < pts.size(); ++b) {
      if (!x[b].v) continue;
      const UniMatrix gi = W.point_model().matrix_of(pts.at(b)).inv();
      for (uint32_t j = 1; j <= m; ++j) mu[j] += (uint64_t)x[b].v * gi.get(1, j);
    }
    for (uint32_t j = 1; j <= m; ++j) {
      uint64_t s = 0;
      for (uint32_t i = 1; i <= j; ++i) s += (mu[i] % p) * h.get(i, j);
      r.set(1, 1 + j, (uint32_t)(s % p));
    }
  }
  return r;
}

// ------------------------------------------------------------- doubled group

TildeUn build_tilde_un(uint32_t p, uint32_t m) {
  check_prime(p);
  require(m >= 2, "build_tilde_un: m must be at least 2");
  if (m > 2)
    throw resource_error("build_tilde_un: only m = 2 fits the supported size tier", 0);

  TildeUn T;
  T.p = p;
  T.m = m;
  T.wreath = std::make_shared<WreathModel>(m, p);
  T.base_model = std::make_shared<ProductModel>(T.wreath.get(), T.wreath.get());

  const Key wid = T.wreath->identity();
  std::vector<Key> gens;
  for (uint32_t i = 1; i < m; ++i)
    gens.push_back(T.base_model->pair(T.wreath->point_sigma(i), wid));
  gens.push_back(T.base_model->pair(T.wreath->algebra_unit(), wid));
  gens.push_back(T.base_model->pair(wid, T.wreath->algebra_unit()));
  for (uint32_t i = 1; i < m; ++i)
    gens.push_back(T.base_model->pair(wid, T.wreath->point_sigma(i)));
  T.base = std::make_shared<GroupStore>(closure(*T.base_model, gens));

  const std::size_t k = T.wreath->algebra_dim();
  auto W = T.wreath;
  auto BM = T.base_model;
  const uint32_t pp = p;
  auto factor_translation = [W, BM, pp](int which) {
    return [W, BM, pp, which](const Key& g, std::size_t j) {
      const Key f = which == 1 ? BM->first(g) : BM->second(g);
      const UniMatrix h = W->parts(f).second;
      const GroupStore& pts = W->point_group();
      const std::size_t t =
          pts.index_of(W->point_model().mul(W->point_model().key_of(h), pts.at(j)));
      require(t != SIZE_MAX, "algebra action: point group not closed");
      Vec<Fp> v(pts.size(), Fp::zero(pp));
      v[t] = Fp::one(pp);
      return v;
    };
  };
  T.alg1 = std::make_shared<GModule>(T.base.get(), k, p, factor_translation(1));
  T.alg2 = std::make_shared<GModule>(T.base.get(), k, p, factor_translation(2));

  T.tphi1 = Cochain1::from_function(
      *T.base, *T.alg1, [W, BM](const Key& g) { return W->parts(BM->first(g)).first; });
  T.tphi2 = Cochain1::from_function(
      *T.base, *T.alg2, [W, BM](const Key& g) { return W->parts(BM->second(g)).first; });
  T.omega = cup11(T.tphi1, T.tphi2);

  auto tens = std::make_shared<const GModule>(GModule::tensor(*T.alg1, *T.alg2));
  T.group = std::make_shared<ExtensionModel>(T.base, tens, T.omega);
  return T;
}

std::array<Key, 4> TildeUn::canonical_generators() const {
  require(m == 2, "canonical generators are ordered for m = 2");
  const Key wid = wreath->identity();
  const Vec<Fp> z(group->module().dim(), Fp::zero(p));
  return {group->key_of(z, base_model->pair(wreath->point_sigma(1), wid)),
          group->key_of(z, base_model->pair(wreath->algebra_unit(), wid)),
          group->key_of(z, base_model->pair(wid, wreath->algebra_unit())),
          group->key_of(z, base_model->pair(wid, wreath->point_sigma(1)))};
}

Vec<Fp> tilde_phi(const TildeUn& T, int i, const Key& base_elem) {
  require(i == 1 || i == 2, "tilde_phi: factor index must be 1 or 2");
  const std::size_t ix = T.base->index_of(base_elem);
  require(ix != SIZE_MAX, "tilde_phi: element outside the doubled group");
  return i == 1 ? T.tphi1.val[ix] : T.tphi2.val[ix];
}

// --------------------------------------------------------------- matrix model

std::array<UniMatrix, 4> explicit_generators(uint32_t p) {
  check_prime(p);
  const uint32_t n = 2 * p + 1;
  UniMatrix s1(n, p), s4(n, p);
  for (uint32_t i = 1; i < p; ++i) s1.set(i, i + 1, 1);
  for (uint32_t i = p + 2; i < n; ++i) s4.set(i, i + 1, 1);
  return {s1, UniMatrix::sigma(n, p, p), UniMatrix::sigma(n, p, p + 1), s4};
}

namespace {

// Shared tables for the two U_{p+1} coordinates of the embedding: J^e and
// J^{-e}, and each point element's exponent on the superdiagonal.
struct IotaCtx {
  uint32_t p, n;
  const WreathModel* W;
  const ProductModel* BM;
  std::vector<UniMatrix> Jp, Jn;
  std::vector<uint32_t> expo;

  explicit IotaCtx(const TildeUn& T)
      : p(T.p), n(2 * T.p + 1), W(T.wreath.get()), BM(T.base_model.get()) {
    require(T.m == 2, "matrix realization needs m = 2");
    UniMatrix J(p, p);
    for (uint32_t i = 1; i < p; ++i) J.set(i, i + 1, 1);
    Jp.resize(p);
    Jn.resize(p);
    for (uint32_t e = 0; e < p; ++e) {
      Jp[e] = J.pow(e);
      Jn[e] = J.pow(-(int64_t)e);
    }
    const GroupStore& pts = W->point_group();
    expo.resize(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j)
      expo[j] = W->point_model().matrix_of(pts.at(j)).get(1, 2);
  }

  std::pair<UniMatrix, UniMatrix> eval(const Key& g) const {
    const auto [x1, h1] = W->parts(BM->first(g));
    const auto [x2, h2] = W->parts(BM->second(g));
    const uint32_t e1 = h1.get(1, 2), e2 = h2.get(1, 2);
    UniMatrix a(p + 1, p), b(p + 1, p);
    for (uint32_t i = 1; i < p; ++i)
      for (uint32_t j = i + 1; j <= p; ++j) {
        a.set(i, j, Jp[e1].get(i, j));
        b.set(1 + i, 1 + j, Jp[e2].get(i, j));
      }
    // factor 1: algebra in Jordan coordinates as the last column
    for (uint32_t i = 1; i <= p; ++i) {
      uint64_t s = 0;
      for (std::size_t t = 0; t < x1.size(); ++t)
        s += (uint64_t)x1[t].v * Jp[expo[t]].get(i, p);
      a.set(i, p + 1, (uint32_t)(s % p));
    }
    // factor 2: dual Jordan coordinates as the first row, twisted by J^e
    std::vector<uint64_t> mu(p + 1, 0);
    for (std::size_t t = 0; t < x2.size(); ++t) {
      if (!x2[t].v) continue;
      for (uint32_t j = 1; j <= p; ++j)
        mu[j] += (uint64_t)x2[t].v * Jn[expo[t]].get(1, j);
    }
    for (uint32_t j = 1; j <= p; ++j) {
      uint64_t s = 0;
      for (uint32_t i = 1; i <= j; ++i) s += (mu[i] % p) * Jp[e2].get(i, j);
      b.set(1, 1 + j, (uint32_t)(s % p));
    }
    return {a, b};
  }
};

SnElement corner_unit(uint32_t p) {
  SnElement e0(2 * p + 1, p);
  e0.h.at(p - 1, 0) = Fp::one(p);
  return e0;
}

Vec<Fp> flatten(const SnElement& s) {
  const uint32_t m = s.m();
  Vec<Fp> v(m * (std::size_t)m, Fp::zero(s.p));
  for (uint32_t r = 0; r < m; ++r)
    for (uint32_t c = 0; c < m; ++c) v[(std::size_t)r * m + c] = s.h.at(r, c);
  return v;
}

SnElement unflatten(const Vec<Fp>& v, uint32_t n, uint32_t p) {
  SnElement s(n, p);
  const uint32_t m = s.m();
  require(v.size() == (std::size_t)m * m, "unflatten: wrong length");
  for (uint32_t r = 0; r < m; ++r)
    for (uint32_t c = 0; c < m; ++c) s.h.at(r, c) = v[(std::size_t)r * m + c];
  return s;
}

}  // namespace

std::pair<UniMatrix, UniMatrix> iota(const TildeUn& T, const Key& base_elem) {
  return IotaCtx(T).eval(base_elem);
}

Mat<Fp> corner_dictionary(const TildeUn& T) {
  const IotaCtx ctx(T);
  const uint32_t p = T.p, n = ctx.n;
  const std::size_t k = T.wreath->algebra_dim();
  const std::size_t d = k * k;
  const SnElement e0 = corner_unit(p);
  const GroupStore& pts = T.wreath->point_group();

  Mat<Fp> D(d, d, Fp::zero(p));
  const Vec<Fp> zero(k, Fp::zero(p));
  for (std::size_t j1 = 0; j1 < k; ++j1)
    for (std::size_t j2 = 0; j2 < k; ++j2) {
      const Key a = T.base_model->pair(
          T.wreath->key_of(zero, T.wreath->point_model().matrix_of(pts.at(j1))),
          T.wreath->key_of(zero, T.wreath->point_model().matrix_of(pts.at(j2))));
      const auto [i1, i2] = ctx.eval(a);
      const Vec<Fp> col = flatten(sn_act(i1, i2, e0));
      for (std::size_t r = 0; r < d; ++r) D.at(r, j1 * k + j2) = col[r];
    }

  // audit: invertible
  RowReducer rr((uint32_t)p, d);
  for (std::size_t r = 0; r < d; ++r) {
    std::vector<uint8_t> row(d);
    for (std::size_t c = 0; c < d; ++c) row[c] = (uint8_t)D.at(r, c).v;
    rr.add_row(row);
  }
  if (rr.rank() != d)
    throw contract_error("corner_dictionary: derived dictionary is singular");

  // audit: equivariant for the doubled-group action on sampled pairs
  std::mt19937_64 rng(0xd1c77e57);
  const GModule& M = T.group->module();
  for (int s = 0; s < 2000; ++s) {
    const Key g = T.base->at(rng() % T.base->size());
    Vec<Fp> v(d, Fp::zero(p));
    v[rng() % d] = Fp::raw(1 + (uint32_t)(rng() % (p - 1)), p);
    const auto [i1, i2] = ctx.eval(g);
    const Vec<Fp> lhs = mat_vec(D, M.act(g, v));
    const Vec<Fp> rhs = flatten(sn_act(i1, i2, unflatten(mat_vec(D, v), n, p)));
    if (!(lhs == rhs))
      throw contract_error("corner_dictionary: dictionary is not equivariant");
  }
  return D;
}

UniMatrix kappa(const TildeUn& T, const Mat<Fp>& dict, const Key& ext_elem) {
  const IotaCtx ctx(T);
  const auto [v, g] = T.group->parts(ext_elem);
  require(dict.rows == v.size() && dict.cols == v.size(), "kappa: dictionary shape");
  const auto [i1, i2] = ctx.eval(g);
  const UniMatrix sec = block_section(i1, i2, ctx.n);
  return sn_to_matrix(unflatten(mat_vec(dict, v), ctx.n, T.p)).mul(sec);
}

TildeReport verify_structure(uint32_t p, const Limits& lim) {
  check_prime(p);
  TildeReport R;
  R.u5_applicable = (p == 2);
  std::string stage = "setup";
  try {
    const uint32_t n = 2 * p + 1;
    const auto gen = explicit_generators(p);
    UniModel big(n, p);
    std::vector<Key> bk;
    for (const auto& g : gen) bk.push_back(big.key_of(g));

    stage = "doubled-group image";
    UniModel half(p + 1, p);
    ProductModel PM(&half, &half);
    std::vector<Key> pk;
    for (const auto& g : gen)
      pk.push_back(PM.pair(half.key_of(project_k(g, Side::head, p)),
                           half.key_of(project_k(g, Side::tail, p))));
    const GroupStore img = closure(PM, pk, lim);
    R.image_order = img.size();

    stage = "doubled-group build";
    const TildeUn T = build_tilde_un(p, 2);

    stage = "embedding comparison";
    const IotaCtx ctx(T);
    std::vector<Key> ik;
    for (const auto& g : T.base->generators()) {
      const auto [i1, i2] = ctx.eval(g);
      ik.push_back(PM.pair(half.key_of(i1), half.key_of(i2)));
    }
    const GroupStore img2 = closure(PM, ik, lim);
    bool contained = true;
    for (const auto& k : pk) contained = contained && img2.contains(k);
    R.image_matches_iota =
        contained && img2.size() == img.size() && img2.size() == T.base->size();

    stage = "corner module";
    const UniMatrix comm = gen[1].inv().mul(gen[2].inv()).mul(gen[1]).mul(gen[2]);
    const GroupStore ncl = normal_closure(big, bk, {big.key_of(comm)}, lim);
    R.corner_order = ncl.size();
    bool corner_ok = R.corner_order == pow_u64(p, (uint64_t)p * p);
    for (std::size_t i = 0; corner_ok && i < ncl.size(); ++i) {
      const UniMatrix u = big.matrix_of(ncl.at(i));
      for (uint32_t r = 1; corner_ok && r < n; ++r)
        for (uint32_t c = r + 1; c <= n; ++c)
          if (u.get(r, c) != 0 && !(r <= p && c >= p + 2)) {
            corner_ok = false;
            break;
          }
    }
    R.corner_is_module = corner_ok;
    R.total_order = R.image_order * R.corner_order;

    stage = "u5 comparison";
    if (p == 2) {
      std::vector<Key> sk;
      for (uint32_t i = 1; i < n; ++i) sk.push_back(big.key_of(UniMatrix::sigma(n, p, i)));
      const GroupStore full1 = closure(big, bk, lim);
      const GroupStore full2 = closure(big, sk, lim);
      R.matches_u5 = full1.sorted_keys() == full2.sorted_keys();
    }

    stage = "extension class";
    const Mat<Fp> D = corner_dictionary(T);
    const std::size_t nb = T.base->size();
    const bool exhaustive = nb * nb <= (std::size_t)1 << 22;
    const std::size_t pairs = exhaustive ? nb * nb : 1200000;
    std::mt19937_64 rng(0x7e57ca9e);
    bool agree = true;
    for (std::size_t s = 0; agree && s < pairs; ++s) {
      const std::size_t ia = exhaustive ? s / nb : rng() % nb;
      const std::size_t ib = exhaustive ? s % nb : rng() % nb;
      const Key a = T.base->at(ia), b = T.base->at(ib);
      const Key ab = T.base_model->mul(a, b);
      const auto [a1, a2] = ctx.eval(a);
      const auto [b1, b2] = ctx.eval(b);
      const auto [c1, c2] = ctx.eval(ab);
      const UniMatrix sa = block_section(a1, a2, n), sb = block_section(b1, b2, n),
                      sc = block_section(c1, c2, n);
      const SnElement cmat = sn_from_matrix(sa.mul(sb).mul(sc.inv()));
      agree = flatten(cmat) == mat_vec(D, T.omega(a, b));
    }
    R.cocycle_agrees = agree;
    R.cocycle_pairs = pairs;
    R.complete = true;
  } catch (const resource_error&) {
    R.failure = stage;
  }
  return R;
}

}  // namespace mv4
