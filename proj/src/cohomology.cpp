#include "mv4/cohomology.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <random>

#include "mv4/common.hpp"

namespace mv4 {

namespace {

Vec<Fp> vzero(std::size_t d, uint32_t p) { return Vec<Fp>(d, Fp::zero(p)); }

Vec<Fp> vadd(const Vec<Fp>& a, const Vec<Fp>& b) {
  require(a.size() == b.size(), "module vector size mismatch");
  Vec<Fp> r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = r[i] + b[i];
  return r;
}

Vec<Fp> vsub(const Vec<Fp>& a, const Vec<Fp>& b) {
  require(a.size() == b.size(), "module vector size mismatch");
  Vec<Fp> r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = r[i] - b[i];
  return r;
}

bool vis_zero(const Vec<Fp>& a) {
  for (const Fp& x : a)
    if (x.v != 0) return false;
  return true;
}

// w = mat * v over F_p, mat row-major d x d bytes
Vec<Fp> mat_apply(const std::vector<uint8_t>& mat, std::size_t d, uint32_t p,
                  const Vec<Fp>& v) {
  Vec<Fp> w = vzero(d, p);
  for (std::size_t r = 0; r < d; ++r) {
    uint64_t acc = 0;
    const uint8_t* row = mat.data() + r * d;
    for (std::size_t c = 0; c < d; ++c) acc += (uint64_t)row[c] * v[c].v;
    w[r] = Fp::raw((uint32_t)(acc % p), p);
  }
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------
// GModule

GModule::GModule(const GroupStore* G, std::size_t dim, uint32_t p, BasisAction act)
    : G_(G), dim_(dim), p_(p) {
  require(G_ != nullptr, "GModule: null group");
  require(dim_ > 0, "GModule: zero dimension");
  check_prime(p_);
  mats_.resize(G_->size());
  for (std::size_t i = 0; i < G_->size(); ++i) {
    std::vector<uint8_t>& m = mats_[i];
    m.assign(dim_ * dim_, 0);
    for (std::size_t c = 0; c < dim_; ++c) {
      Vec<Fp> col = act(G_->at(i), c);
      require(col.size() == dim_, "GModule: action column has wrong dimension");
      for (std::size_t r = 0; r < dim_; ++r) {
        require(col[r].p == p_, "GModule: action value in wrong field");
        m[r * dim_ + c] = (uint8_t)col[r].v;
      }
    }
  }
}

GModule GModule::trivial(const GroupStore* G, uint32_t p) {
  return GModule(G, 1, p, [p](const Key&, std::size_t) {
    return Vec<Fp>{Fp::one(p)};
  });
}

GModule GModule::tensor(const GModule& A, const GModule& B) {
  require(A.G_ == B.G_, "GModule::tensor: different acting groups");
  require(A.p_ == B.p_, "GModule::tensor: different characteristics");
  const std::size_t da = A.dim(), db = B.dim();
  GModule T(A.G_, da * db, A.p_, [&](const Key& g, std::size_t k) {
    const std::size_t ia = k / db, ib = k % db;
    Vec<Fp> ca = vzero(da, A.p_), cb = vzero(db, A.p_);
    ca[ia] = Fp::one(A.p_);
    cb[ib] = Fp::one(A.p_);
    return mv4::tensor(A.act(g, ca), B.act(g, cb));
  });
  return T;
}

Vec<Fp> GModule::act(const Key& g, const Vec<Fp>& v) const {
  const std::size_t i = G_->index_of(g);
  require(i != SIZE_MAX, "GModule::act: element not in group");
  require(v.size() == dim_, "GModule::act: vector has wrong dimension");
  return mat_apply(mats_[i], dim_, p_, v);
}

const std::vector<uint8_t>& GModule::matrix_of_index(std::size_t i) const {
  require(i < mats_.size(), "GModule: element index out of range");
  return mats_[i];
}

bool GModule::audit(std::size_t samples, uint64_t seed) const {
  const std::size_t n = G_->size();
  // identity matrix at index 0
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c)
      if (mats_[0][r * dim_ + c] != (r == c ? 1 : 0)) return false;

  auto check_pair = [&](std::size_t i, std::size_t j) {
    const Key ab = G_->model().mul(G_->at(i), G_->at(j));
    const std::size_t ij = G_->index_of(ab);
    if (ij == SIZE_MAX) return false;
    const std::vector<uint8_t>&Ma = mats_[i], &Mb = mats_[j], &Mab = mats_[ij];
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) {
        uint64_t acc = 0;
        for (std::size_t k = 0; k < dim_; ++k)
          acc += (uint64_t)Ma[r * dim_ + k] * Mb[k * dim_ + c];
        if (acc % p_ != Mab[r * dim_ + c]) return false;
      }
    return true;
  };

  if (n * n <= samples) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!check_pair(i, j)) return false;
    return true;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s)
    if (!check_pair(rng() % n, rng() % n)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Cochains

Cochain1 Cochain1::zero(const GroupStore& G, const GModule& M) {
  Cochain1 f;
  f.G = &G;
  f.M = &M;
  f.val.assign(G.size(), vzero(M.dim(), M.p()));
  return f;
}

Cochain1 Cochain1::from_function(const GroupStore& G, const GModule& M,
                                 const std::function<Vec<Fp>(const Key&)>& fn) {
  Cochain1 f;
  f.G = &G;
  f.M = &M;
  f.val.reserve(G.size());
  for (std::size_t i = 0; i < G.size(); ++i) {
    Vec<Fp> v = fn(G.at(i));
    require(v.size() == M.dim(), "Cochain1: value has wrong dimension");
    f.val.push_back(std::move(v));
  }
  return f;
}

Cochain2 Cochain2::zero(const GroupStore& G, const GModule& M) {
  Cochain2 c;
  c.G = &G;
  c.M = &M;
  const std::size_t d = M.dim();
  const uint32_t p = M.p();
  c.f = [d, p](const Key&, const Key&) { return vzero(d, p); };
  return c;
}

bool is_cocycle1(const Cochain1& f) {
  const GroupStore& G = *f.G;
  const GModule& M = *f.M;
  for (std::size_t i = 0; i < G.size(); ++i) {
    for (std::size_t j = 0; j < G.size(); ++j) {
      const Key ab = G.model().mul(G.at(i), G.at(j));
      const std::size_t ij = G.index_of(ab);
      require(ij != SIZE_MAX, "is_cocycle1: group not closed");
      const Vec<Fp> rhs = vadd(f.val[i], M.act(G.at(i), f.val[j]));
      if (!(f.val[ij] == rhs)) return false;
    }
  }
  return true;
}

bool is_cocycle1_sampled(const Cochain1& f, std::size_t pairs, uint64_t seed) {
  const GroupStore& G = *f.G;
  const GModule& M = *f.M;
  const std::size_t n = G.size();
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < pairs; ++s) {
    const std::size_t i = rng() % n, j = rng() % n;
    const std::size_t ij = G.index_of(G.model().mul(G.at(i), G.at(j)));
    require(ij != SIZE_MAX, "is_cocycle1_sampled: group not closed");
    if (!(f.val[ij] == vadd(f.val[i], M.act(G.at(i), f.val[j])))) return false;
  }
  return true;
}

bool is_cocycle2_exhaustive(const Cochain2& c) {
  const GroupStore& G = *c.G;
  const GModule& M = *c.M;
  const std::size_t n = G.size(), d = M.dim();
  const uint32_t p = M.p();
  require(n <= 2048, "is_cocycle2_exhaustive: group too large, use the sampled variant");

  // densify: value table, product index table, action matrices
  std::vector<uint8_t> tab(n * n * d);
  std::vector<uint32_t> prod(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Vec<Fp> v = c.f(G.at(i), G.at(j));
      require(v.size() == d, "is_cocycle2: value has wrong dimension");
      for (std::size_t k = 0; k < d; ++k) tab[(i * n + j) * d + k] = (uint8_t)v[k].v;
      const std::size_t ij = G.index_of(G.model().mul(G.at(i), G.at(j)));
      require(ij != SIZE_MAX, "is_cocycle2: group not closed");
      prod[i * n + j] = (uint32_t)ij;
    }

  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<uint8_t>& Mi = M.matrix_of_index(i);
    for (std::size_t j = 0; j < n; ++j) {
      const uint32_t ij = prod[i * n + j];
      const uint8_t* cij = &tab[(i * n + j) * d];
      for (std::size_t k = 0; k < n; ++k) {
        const uint8_t* cjk = &tab[(j * n + k) * d];
        const uint8_t* c_ij_k = &tab[((std::size_t)ij * n + k) * d];
        const uint8_t* c_i_jk = &tab[(i * n + prod[j * n + k]) * d];
        for (std::size_t r = 0; r < d; ++r) {
          int64_t a = 0;
          for (std::size_t t = 0; t < d; ++t) a += (int64_t)Mi[r * d + t] * cjk[t];
          a -= c_ij_k[r];
          a += c_i_jk[r];
          a -= cij[r];
          if (a % (int64_t)p != 0) return false;
        }
      }
    }
  }
  return true;
}

bool is_cocycle2_sampled(const Cochain2& c, std::size_t triples, uint64_t seed) {
  const GroupStore& G = *c.G;
  const GModule& M = *c.M;
  const std::size_t n = G.size();
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < triples; ++s) {
    const Key g = G.at(rng() % n), h = G.at(rng() % n), k = G.at(rng() % n);
    const Key gh = G.model().mul(g, h), hk = G.model().mul(h, k);
    Vec<Fp> v = M.act(g, c.f(h, k));
    v = vsub(v, c.f(gh, k));
    v = vadd(v, c.f(g, hk));
    v = vsub(v, c.f(g, h));
    if (!vis_zero(v)) return false;
  }
  return true;
}

Cochain2 cup11(const Cochain1& x, const Cochain1& y) {
  require(x.G == y.G, "cup11: cochains on different groups");
  require(x.M->p() == y.M->p(), "cup11: different characteristics");
  // precondition check: exhaustive while |G|^2 stays cheap, sampled beyond that
  if (x.G->size() <= 2048) {
    require(is_cocycle1(x), "cup11: left factor is not a 1-cocycle");
    require(is_cocycle1(y), "cup11: right factor is not a 1-cocycle");
  } else {
    require(is_cocycle1_sampled(x, 1000000, 0xc09c7e01),
            "cup11: left factor is not a 1-cocycle");
    require(is_cocycle1_sampled(y, 1000000, 0xc09c7e02),
            "cup11: right factor is not a 1-cocycle");
  }

  struct State {
    const GroupStore* G;
    std::vector<Vec<Fp>> xv, yv;
    GModule ymod;  // copy: provides the action twisting the right factor
  };
  auto st = std::make_shared<State>(State{x.G, x.val, y.val, *y.M});

  Cochain2 c;
  c.G = x.G;
  c.owned = std::make_shared<const GModule>(GModule::tensor(*x.M, *y.M));
  c.M = c.owned.get();
  c.f = [st](const Key& a, const Key& b) {
    const std::size_t ia = st->G->index_of(a), ib = st->G->index_of(b);
    require(ia != SIZE_MAX && ib != SIZE_MAX, "cup11: element not in group");
    const std::size_t d = st->ymod.dim();
    return tensor(st->xv[ia],
                  mat_apply(st->ymod.matrix_of_index(ia), d, st->ymod.p(), st->yv[ib]));
  };
  return c;
}

// ---------------------------------------------------------------------------
// Coboundary solving
//
// db(x, y) = x.b(y) - b(xy) + b(x).  Writing every b(element) as an affine
// function of the generator values b(g_1)..b(g_r) via the breadth-first
// spanning-tree recurrence b(x g) = x.b(g) + b(x) - c(x, g) collapses the
// |G| dim(M) unknowns to r dim(M); the remaining (x, g) edge equations feed a
// row reducer.  Generator-edge agreement extends to all pairs because both c
// and db satisfy the 2-cocycle identity.

std::optional<Cochain1> is_coboundary2(const Cochain2& c) {
  const GroupStore& G = *c.G;
  const GModule& M = *c.M;
  const std::size_t n = G.size(), d = M.dim();
  const uint32_t p = M.p();
  const std::vector<Key>& gens = G.generators();
  const std::size_t r = gens.size();
  const std::size_t W = r * d;

  std::vector<std::size_t> gidx(r);
  for (std::size_t j = 0; j < r; ++j) {
    gidx[j] = G.index_of(gens[j]);
    require(gidx[j] != SIZE_MAX, "is_coboundary2: generator not in group");
  }

  // affine form of b at each element: L (d x W bytes) and constant K
  std::vector<std::vector<uint8_t>> L(n);
  std::vector<Vec<Fp>> Kc(n);
  std::vector<uint8_t> seen(n, 0);

  L[0].assign(d * W, 0);
  Kc[0] = c.f(G.at(0), G.at(0));
  require(Kc[0].size() == d, "is_coboundary2: value has wrong dimension");
  seen[0] = 1;

  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t ix = queue.front();
    queue.pop_front();
    const Key x = G.at(ix);
    const std::vector<uint8_t>& Mx = M.matrix_of_index(ix);
    for (std::size_t j = 0; j < r; ++j) {
      const std::size_t iy = G.index_of(G.model().mul(x, gens[j]));
      require(iy != SIZE_MAX, "is_coboundary2: group not closed");
      if (seen[iy]) continue;
      seen[iy] = 1;
      L[iy] = L[ix];
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
          uint8_t& e = L[iy][a * W + j * d + b];
          e = (uint8_t)((e + Mx[a * d + b]) % p);
        }
      Kc[iy] = vsub(Kc[ix], c.f(x, gens[j]));
      queue.push_back(iy);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    require(seen[i], "is_coboundary2: generators do not reach every element");

  // edge equations: b(x g_j) - b(x) - x.b(g_j) = -c(x, g_j)
  RowReducer rr(p, W + 1);
  rr.set_const_col(W);
  std::vector<uint8_t> row(W + 1);
  for (std::size_t ix = 0; ix < n && rr.consistent(); ++ix) {
    const Key x = G.at(ix);
    const std::vector<uint8_t>& Mx = M.matrix_of_index(ix);
    for (std::size_t j = 0; j < r && rr.consistent(); ++j) {
      const std::size_t iy = G.index_of(G.model().mul(x, gens[j]));
      const Vec<Fp> rhs = vsub(vsub(Kc[ix], c.f(x, gens[j])), Kc[iy]);
      for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t w = 0; w < W; ++w) {
          int32_t v = (int32_t)L[iy][a * W + w] - (int32_t)L[ix][a * W + w];
          if (w / d == j) v -= Mx[a * d + (w % d)];
          row[w] = (uint8_t)(((v % (int32_t)p) + p) % p);
        }
        row[W] = (uint8_t)rhs[a].v;
        rr.add_row(row);
      }
    }
  }
  if (!rr.consistent()) return std::nullopt;

  const std::vector<uint8_t> sol = rr.solve();  // free variables pinned to 0
  Cochain1 b;
  b.G = &G;
  b.M = &M;
  b.val.assign(n, vzero(d, p));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < d; ++a) {
      uint64_t acc = Kc[i][a].v;
      for (std::size_t w = 0; w < W; ++w) acc += (uint64_t)L[i][a * W + w] * sol[w];
      b.val[i][a] = Fp::raw((uint32_t)(acc % p), p);
    }
  }

  // belt-and-braces: db == c (exhaustive when affordable, else sampled);
  // failure means the input violated the 2-cocycle precondition
  auto check_pair = [&](std::size_t i, std::size_t j) {
    const Key x = G.at(i), y = G.at(j);
    const std::size_t ij = G.index_of(G.model().mul(x, y));
    const Vec<Fp> db = vadd(vsub(M.act(x, b.val[j]), b.val[ij]), b.val[i]);
    return db == c.f(x, y);
  };
  if (n * n <= 1000000) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        require(check_pair(i, j), "is_coboundary2: input is not a 2-cocycle");
  } else {
    std::mt19937_64 rng(0x5eedc0b0);
    for (std::size_t s = 0; s < 100000; ++s)
      require(check_pair(rng() % n, rng() % n), "is_coboundary2: input is not a 2-cocycle");
  }
  return b;
}

// ---------------------------------------------------------------------------
// ExtensionModel

ExtensionModel::ExtensionModel(std::shared_ptr<const GroupStore> base,
                               std::shared_ptr<const GModule> mod, Cochain2 c,
                               std::size_t audit_triples)
    : base_(std::move(base)), mod_(std::move(mod)), c_(std::move(c)) {
  require(base_ != nullptr && mod_ != nullptr, "ExtensionModel: null input");
  require(c_.G == base_.get(), "ExtensionModel: cocycle group mismatch");
  require(c_.M->dim() == mod_->dim() && c_.M->p() == mod_->p(),
          "ExtensionModel: cocycle module mismatch");
  bits_ = std::bit_width(mod_->p() - 1);
  require(mod_->dim() * bits_ <= 64, "ExtensionModel: module too wide to pack");

  shift_ = c_.f(base_->at(0), base_->at(0));
  require(shift_.size() == mod_->dim(), "ExtensionModel: cocycle value dimension");
  require(is_cocycle2_sampled(c_, audit_triples, 0x2c0c1e55),
          "ExtensionModel: defining cochain fails the cocycle identity");
}

Vec<Fp> ExtensionModel::cval(const Key& a, const Key& b) const {
  // normalized cocycle: c(a,b) - a.c(1,1), which vanishes when a or b is 1
  return vsub(c_.f(a, b), mod_->act(a, shift_));
}

Key ExtensionModel::key_of(const Vec<Fp>& m, const Key& base_elem) const {
  const std::size_t bi = base_->index_of(base_elem);
  require(bi != SIZE_MAX, "ExtensionModel: base element not in group");
  require(m.size() == mod_->dim(), "ExtensionModel: module vector dimension");
  Key k{};
  for (std::size_t i = 0; i < m.size(); ++i) {
    require(m[i].p == mod_->p(), "ExtensionModel: module value in wrong field");
    k.w[0] |= (uint64_t)m[i].v << (i * bits_);
  }
  k.w[1] = bi;
  return k;
}

std::pair<Vec<Fp>, Key> ExtensionModel::parts(const Key& k) const {
  const uint32_t p = mod_->p();
  Vec<Fp> m(mod_->dim(), Fp::zero(p));
  const uint64_t mask = (bits_ == 64) ? ~0ull : ((1ull << bits_) - 1);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const uint32_t v = (uint32_t)((k.w[0] >> (i * bits_)) & mask);
    require(v < p, "ExtensionModel: malformed key");
    m[i] = Fp::raw(v, p);
  }
  require(k.w[1] < base_->size(), "ExtensionModel: malformed key");
  return {std::move(m), base_->at(k.w[1])};
}

Key ExtensionModel::identity() const {
  return key_of(vzero(mod_->dim(), mod_->p()), base_->at(0));
}

Key ExtensionModel::mul(const Key& a, const Key& b) const {
  auto [ma, ga] = parts(a);
  auto [mb, gb] = parts(b);
  Vec<Fp> m = vadd(vadd(ma, mod_->act(ga, mb)), cval(ga, gb));
  return key_of(m, base_->model().mul(ga, gb));
}

Key ExtensionModel::inv(const Key& a) const {
  auto [ma, ga] = parts(a);
  const Key gi = base_->model().inv(ga);
  Vec<Fp> m = vsub(vzero(mod_->dim(), mod_->p()),
                   vadd(mod_->act(gi, ma), cval(gi, ga)));
  return key_of(m, gi);
}

std::string ExtensionModel::describe() const {
  return "extension F_" + std::to_string(mod_->p()) + "^" +
         std::to_string(mod_->dim()) + " by " + base_->model().describe();
}

// ---------------------------------------------------------------------------
// Corestriction

std::vector<Fp> corestrict_character(const GroupStore& big, const GroupStore& sub,
                                     const std::vector<Key>& transversal,
                                     const std::function<Fp(const Key&)>& alpha) {
  const GroupModel& Mo = big.model();
  const std::size_t nb = big.size(), ns = sub.size(), nt = transversal.size();
  require(nt > 0 && ns * nt == nb, "corestrict: |sub| * |transversal| != |big|");

  const uint32_t p = alpha(sub.at(0)).p;
  require(alpha(sub.at(0)).v == 0, "corestrict: character nonzero at identity");
  // alpha must be a homomorphism on sub
  {
    const std::size_t budget = 1000000;
    auto check = [&](std::size_t i, std::size_t j) {
      const Key ab = Mo.mul(sub.at(i), sub.at(j));
      return alpha(ab) == alpha(sub.at(i)) + alpha(sub.at(j));
    };
    if (ns * ns <= budget) {
      for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < ns; ++j)
          require(check(i, j), "corestrict: alpha is not a homomorphism");
    } else {
      std::mt19937_64 rng(0xa1fa);
      for (std::size_t s = 0; s < 20000; ++s)
        require(check(rng() % ns, rng() % ns), "corestrict: alpha is not a homomorphism");
    }
  }

  auto coset_table = [&](const std::vector<Key>& T) {
    std::vector<uint32_t> coset_of(nb, UINT32_MAX);
    for (std::size_t ti = 0; ti < T.size(); ++ti)
      for (std::size_t si = 0; si < ns; ++si) {
        const std::size_t e = big.index_of(Mo.mul(sub.at(si), T[ti]));
        require(e != SIZE_MAX, "corestrict: coset element escapes the group");
        require(coset_of[e] == UINT32_MAX, "corestrict: transversal cosets overlap");
        coset_of[e] = (uint32_t)ti;
      }
    for (std::size_t i = 0; i < nb; ++i)
      require(coset_of[i] != UINT32_MAX, "corestrict: transversal does not cover");
    return coset_of;
  };

  auto cores_with = [&](const std::vector<Key>& T, const std::vector<uint32_t>& coset_of) {
    std::vector<Fp> out(nb, Fp::zero(p));
    for (std::size_t gi = 0; gi < nb; ++gi) {
      Fp sum = Fp::zero(p);
      for (std::size_t ti = 0; ti < T.size(); ++ti) {
        const Key tg = Mo.mul(T[ti], big.at(gi));
        const std::size_t tgi = big.index_of(tg);
        require(tgi != SIZE_MAX, "corestrict: group not closed");
        const uint32_t tj = coset_of[tgi];
        const Key nelt = Mo.mul(tg, Mo.inv(T[tj]));
        require(sub.contains(nelt), "corestrict: coset representative defect");
        sum = sum + alpha(nelt);
      }
      out[gi] = sum;
    }
    return out;
  };

  const std::vector<uint32_t> coset_of = coset_table(transversal);
  std::vector<Fp> out = cores_with(transversal, coset_of);

  // independence audit: same answer through a perturbed transversal n_t * t
  {
    std::mt19937_64 rng(0xc07e5);
    std::vector<Key> T2 = transversal;
    for (Key& t : T2) t = Mo.mul(sub.at(rng() % ns), t);
    const std::vector<Fp> out2 = cores_with(T2, coset_table(T2));
    require(out == out2, "corestrict: result depends on the transversal");
  }

  // the result must again be a homomorphism
  {
    const std::size_t budget = 1000000;
    auto check = [&](std::size_t i, std::size_t j) {
      const std::size_t ij = big.index_of(Mo.mul(big.at(i), big.at(j)));
      return out[ij] == out[i] + out[j];
    };
    if (nb * nb <= budget) {
      for (std::size_t i = 0; i < nb; ++i)
        for (std::size_t j = 0; j < nb; ++j)
          require(check(i, j), "corestrict: result is not a homomorphism");
    } else {
      std::mt19937_64 rng(0x0c07e);
      for (std::size_t s = 0; s < 20000; ++s)
        require(check(rng() % nb, rng() % nb), "corestrict: result is not a homomorphism");
    }
  }
  return out;
}

}  // namespace mv4
