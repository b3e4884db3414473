#include "mv4/fp.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "mv4/kernels.hpp"

namespace mv4 {

namespace {
std::set<uint32_t>& prime_cache() {
  static std::set<uint32_t> cache;
  return cache;
}
}  // namespace

void check_prime(uint32_t p) {
  if (prime_cache().count(p)) return;
  require(is_prime_u32(p), "modulus " + std::to_string(p) + " is not prime");
  prime_cache().insert(p);
}

Fp::Fp(uint64_t val, uint32_t prime) {
  check_prime(prime);
  p = prime;
  v = (uint32_t)(val % prime);
}

Fp Fp::pow(uint64_t e) const {
  Fp r = one(p), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

Fp Fp::inv() const {
  require(v != 0, "inverse of zero in F_p");
  return pow(p - 2);
}

// ------------------------------------------------------------------ FqField

namespace {

// polynomial helpers over F_ell, low-degree-first coefficient vectors
std::vector<uint32_t> poly_mul(const std::vector<uint32_t>& a,
                               const std::vector<uint32_t>& b, uint32_t ell) {
  std::vector<uint32_t> r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = (uint32_t)((r[i + j] + (uint64_t)a[i] * b[j]) % ell);
  }
  return r;
}

void poly_mod(std::vector<uint32_t>& a, const std::vector<uint32_t>& m,
              uint32_t ell) {
  // m monic
  size_t dm = m.size() - 1;
  while (a.size() > dm) {
    uint32_t lead = a.back();
    size_t sh = a.size() - 1 - dm;
    if (lead) {
      for (size_t i = 0; i < dm; ++i)
        a[sh + i] = (uint32_t)((a[sh + i] + (uint64_t)(ell - lead) * m[i]) % ell);
    }
    a.pop_back();
    while (a.size() > dm && a.back() == 0) a.pop_back();
  }
  a.resize(dm, 0);
}

std::vector<uint32_t> poly_powmod(std::vector<uint32_t> base, uint64_t e,
                                  const std::vector<uint32_t>& m, uint32_t ell) {
  std::vector<uint32_t> r(m.size() - 1, 0);
  r[0] = 1;
  poly_mod(base, m, ell);
  while (e) {
    if (e & 1) {
      r = poly_mul(r, base, ell);
      poly_mod(r, m, ell);
    }
    base = poly_mul(base, base, ell);
    poly_mod(base, m, ell);
    e >>= 1;
  }
  return r;
}

bool poly_is_zero(const std::vector<uint32_t>& a) {
  for (auto x : a)
    if (x) return false;
  return true;
}

std::vector<uint32_t> poly_gcd(std::vector<uint32_t> a, std::vector<uint32_t> b,
                               uint32_t ell) {
  auto deg = [](const std::vector<uint32_t>& p) -> int {
    for (int i = (int)p.size() - 1; i >= 0; --i)
      if (p[i]) return i;
    return -1;
  };
  while (!poly_is_zero(b)) {
    // a mod b
    int db = deg(b);
    uint32_t lb = b[db];
    uint32_t lbinv = Fp::raw(lb, ell).inv().v;
    while (deg(a) >= db && !poly_is_zero(a)) {
      int da = deg(a);
      uint64_t f = (uint64_t)a[da] * lbinv % ell;
      for (int i = 0; i <= db; ++i)
        a[da - db + i] =
            (uint32_t)((a[da - db + i] + (ell - (uint32_t)(f * b[i] % ell))) % ell);
    }
    std::swap(a, b);
  }
  return a;
}

// irreducibility over F_ell: x^(ell^f) == x mod g and gcd(x^(ell^(f/r)) - x, g)=1
bool poly_irreducible(const std::vector<uint32_t>& g, uint32_t ell, uint32_t f) {
  std::vector<uint32_t> x(f, 0);
  if (f == 1) return true;
  x[1 % f] = 1;
  // x^(ell^f) via repeated frobenius power
  std::vector<uint32_t> t = x;
  for (uint32_t i = 0; i < f; ++i) t = poly_powmod(t, ell, g, ell);
  std::vector<uint32_t> diff = t;
  diff[1] = (diff[1] + ell - 1) % ell;
  if (!poly_is_zero(diff)) return false;
  // prime divisors of f
  uint32_t n = f;
  std::vector<uint32_t> primes;
  for (uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      primes.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) primes.push_back(n);
  for (uint32_t r : primes) {
    std::vector<uint32_t> u = x;
    for (uint32_t i = 0; i < f / r; ++i) u = poly_powmod(u, ell, g, ell);
    std::vector<uint32_t> d2 = u;
    d2[1] = (d2[1] + ell - 1) % ell;
    if (poly_is_zero(d2)) return false;
    auto gg = poly_gcd(g, d2, ell);
    int dg = 0;
    for (int i = (int)gg.size() - 1; i >= 0; --i)
      if (gg[i]) {
        dg = i;
        break;
      }
    if (dg != 0) return false;
  }
  return true;
}

}  // namespace

FqField::FqField(uint32_t ell, uint32_t f) : ell_(ell), f_(f) {
  check_prime(ell);
  require(f >= 1 && f <= 24, "extension degree out of range");
  q_ = 1;
  for (uint32_t i = 0; i < f; ++i) {
    q_ *= ell;
    require(q_ <= (1ull << 32), "field too large (q > 2^32)");
  }
  // lexicographically least monic irreducible: scan constant..x^{f-1} coeffs
  // in base-ell counter order (low digit = constant term).
  poly_.assign(f + 1, 0);
  poly_[f] = 1;
  if (f == 1) {
    // x is fine (irreducible deg 1), but use x so field is plain F_ell with
    // coordinate = residue: modulus x means x ≡ 0; we want identity coords.
    // Keep modulus = x (element coords are degree-0 polys).
    return;
  }
  uint64_t total = q_;
  for (uint64_t code = 0;; ++code) {
    require(code < total, "no irreducible polynomial found");
    uint64_t c = code;
    for (uint32_t i = 0; i < f; ++i) {
      poly_[i] = (uint32_t)(c % ell);
      c /= ell;
    }
    if (poly_irreducible(poly_, ell, f)) break;
  }
}

FqElem FqField::zero() const { return FqElem(this, std::vector<uint32_t>(f_, 0)); }

FqElem FqField::one() const {
  std::vector<uint32_t> c(f_, 0);
  c[0] = 1;
  return FqElem(this, c);
}

FqElem FqField::from_int(uint64_t n) const {
  std::vector<uint32_t> c(f_, 0);
  for (uint32_t i = 0; i < f_ && n; ++i) {
    c[i] = (uint32_t)(n % ell_);
    n /= ell_;
  }
  require(n == 0, "integer encoding out of range for field");
  return FqElem(this, c);
}

FqElem FqField::from_coords(std::vector<uint32_t> c) const {
  require(c.size() == f_, "coordinate vector has wrong length");
  for (auto& x : c) x %= ell_;
  return FqElem(this, std::move(c));
}

std::vector<uint32_t> FqField::mul_mod(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b) const {
  auto r = poly_mul(a, b, ell_);
  poly_mod(r, poly_, ell_);
  return r;
}

bool FqElem::is_zero() const {
  for (auto x : c)
    if (x) return false;
  return true;
}

FqElem FqElem::operator+(const FqElem& o) const {
  FqElem r = *this;
  for (size_t i = 0; i < c.size(); ++i) r.c[i] = (c[i] + o.c[i]) % F->ell();
  return r;
}

FqElem FqElem::operator-(const FqElem& o) const {
  FqElem r = *this;
  for (size_t i = 0; i < c.size(); ++i)
    r.c[i] = (c[i] + F->ell() - o.c[i]) % F->ell();
  return r;
}

FqElem FqElem::operator-() const {
  FqElem r = *this;
  for (auto& x : r.c) x = x ? F->ell() - x : 0;
  return r;
}

FqElem FqElem::operator*(const FqElem& o) const {
  return FqElem(F, F->mul_mod(c, o.c));
}

FqElem FqElem::pow(uint64_t e) const {
  FqElem r = F->one(), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

FqElem FqElem::inv() const {
  require(!is_zero(), "inverse of zero in F_q");
  return pow(F->q() - 2);
}

uint64_t FqElem::to_int() const {
  uint64_t n = 0;
  for (size_t i = c.size(); i-- > 0;) n = n * F->ell() + c[i];
  return n;
}

uint64_t FqField::elem_order(const FqElem& x) const {
  require(!x.is_zero(), "order of zero");
  uint64_t n = q_ - 1;
  // factor n, divide out
  uint64_t o = n, m = n;
  std::vector<uint64_t> primes;
  for (uint64_t d = 2; d * d <= m; ++d)
    if (m % d == 0) {
      primes.push_back(d);
      while (m % d == 0) m /= d;
    }
  if (m > 1) primes.push_back(m);
  for (uint64_t pr : primes)
    while (o % pr == 0 && x.pow(o / pr) == one()) o /= pr;
  return o;
}

const FqElem& FqField::gen() const {
  if (!gen_ready_) {
    for (uint64_t n = 1; n < q_; ++n) {
      FqElem x = from_int(n);
      if (elem_order(x) == q_ - 1) {
        gen_ = x;
        gen_ready_ = true;
        break;
      }
    }
    require(gen_ready_, "no multiplicative generator found");
  }
  return gen_;
}

uint64_t FqField::dlog(const FqElem& x) const {
  require(!x.is_zero(), "dlog of zero");
  const FqElem& g = gen();
  uint64_t n = q_ - 1;
  if (baby_m_ == 0) {
    baby_m_ = 1;
    while (baby_m_ * baby_m_ < n) ++baby_m_;
    baby_.clear();
    baby_.reserve(baby_m_);
    FqElem cur = one();
    for (uint64_t i = 0; i < baby_m_; ++i) {
      baby_.push_back(cur);
      cur = cur * g;
    }
  }
  std::unordered_map<uint64_t, uint64_t> table;
  table.reserve(baby_m_ * 2);
  for (uint64_t i = 0; i < baby_m_; ++i) table.emplace(baby_[i].to_int(), i);
  FqElem giant = g.pow(baby_m_).inv();
  FqElem cur = x;
  for (uint64_t j = 0; j * baby_m_ <= n; ++j) {
    auto it = table.find(cur.to_int());
    if (it != table.end()) return (j * baby_m_ + it->second) % n;
    cur = cur * giant;
  }
  throw contract_error("dlog: element not in cyclic group");
}

FqElem FqField::frobenius(const FqElem& x, uint32_t times) const {
  FqElem r = x;
  for (uint32_t i = 0; i < times; ++i) r = r.pow(ell_);
  return r;
}

std::vector<FqElem> FqField::embedding_of(const FqField& small) const {
  require(small.ell() == ell_ && f_ % small.degree() == 0,
          "no embedding between these fields");
  // roots of small.modulus() live in the unique subfield of size small.q()
  uint64_t sq = small.q();
  FqElem h = gen().pow((q_ - 1) / (sq - 1));
  // evaluate small's modulus at each subfield element, collect roots
  std::vector<FqElem> roots;
  std::vector<FqElem> subfield;
  subfield.push_back(zero());
  FqElem cur = one();
  for (uint64_t i = 0; i + 1 < sq; ++i) {
    subfield.push_back(cur);
    cur = cur * h;
  }
  for (const auto& s : subfield) {
    FqElem acc = zero(), po = one();
    for (uint32_t i = 0; i <= small.degree(); ++i) {
      if (small.modulus()[i])
        acc = acc + po * from_int(small.modulus()[i]);
      po = po * s;
    }
    if (acc.is_zero()) roots.push_back(s);
  }
  require(!roots.empty(), "modulus has no root in target field");
  std::sort(roots.begin(), roots.end(),
            [](const FqElem& a, const FqElem& b) { return a.to_int() < b.to_int(); });
  FqElem r0 = roots[0];
  std::vector<FqElem> img;
  FqElem po = one();
  for (uint32_t i = 0; i < small.degree(); ++i) {
    img.push_back(po);
    po = po * r0;
  }
  return img;
}

FqElem FqField::embed(const FqField& small, const FqElem& x,
                      const std::vector<FqElem>& emb) const {
  FqElem acc = zero();
  for (uint32_t i = 0; i < small.degree(); ++i)
    if (x.c[i]) acc = acc + emb[i] * from_int(x.c[i]);
  return acc;
}

// ---------------------------------------------------------------- solve_linear

// manufacture 0/1 scalars matching an exemplar's field context
static Fp zero_like(const Fp& x) { return Fp::raw(0, x.p); }
static Fp unit_like(const Fp& x) { return Fp::raw(1, x.p); }
static FqElem zero_like(const FqElem& x) { return x.F->zero(); }
static FqElem unit_like(const FqElem& x) { return x.F->one(); }

template <class T>
std::optional<LinSolution<T>> solve_linear(Mat<T> A, Vec<T> b) {
  require(A.rows == b.size(), "solve_linear: dimension mismatch");
  require(!A.a.empty() || !b.empty() || A.cols == 0,
          "solve_linear: cannot infer field from an empty system");
  const std::size_t n = A.cols;
  const T exemplar = !A.a.empty() ? A.a[0] : (!b.empty() ? b[0] : T{});
  const T zero = zero_like(exemplar);
  const T one = unit_like(exemplar);

  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < A.rows; ++c) {
    std::size_t sel = SIZE_MAX;
    for (std::size_t i = r; i < A.rows; ++i)
      if (!A.at(i, c).is_zero()) {
        sel = i;
        break;
      }
    if (sel == SIZE_MAX) continue;
    if (sel != r) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A.at(sel, j), A.at(r, j));
      std::swap(b[sel], b[r]);
    }
    T invp = A.at(r, c).inv();
    for (std::size_t j = c; j < n; ++j) A.at(r, j) = A.at(r, j) * invp;
    b[r] = b[r] * invp;
    for (std::size_t i = 0; i < A.rows; ++i) {
      if (i == r || A.at(i, c).is_zero()) continue;
      T f = A.at(i, c);
      for (std::size_t j = c; j < n; ++j)
        A.at(i, j) = A.at(i, j) - f * A.at(r, j);
      b[i] = b[i] - f * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < A.rows; ++i)
    if (!b[i].is_zero()) return std::nullopt;

  LinSolution<T> sol;
  sol.particular.assign(n, zero);
  for (std::size_t k = 0; k < pivot_col.size(); ++k)
    sol.particular[pivot_col[k]] = b[k];
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  for (std::size_t c = 0; c < n; ++c) {
    if (is_pivot[c]) continue;
    Vec<T> k(n, zero);
    k[c] = one;
    for (std::size_t r2 = 0; r2 < pivot_col.size(); ++r2)
      k[pivot_col[r2]] = zero - A.at(r2, c);
    sol.kernel.push_back(std::move(k));
  }
  return sol;
}

template std::optional<LinSolution<Fp>> solve_linear<Fp>(Mat<Fp>, Vec<Fp>);
template std::optional<LinSolution<FqElem>> solve_linear<FqElem>(Mat<FqElem>,
                                                                 Vec<FqElem>);

// ----------------------------------------------------------------- RowReducer

bool RowReducer::add_row(std::vector<uint8_t> row) {
  require(row.size() == width_, "row width mismatch");
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    uint8_t c = row[pivots_[k]];
    if (c) kernels::axpy_modp(row.data(), rows_[k].data(), (uint8_t)(p_ - c),
                              width_, (uint8_t)p_);
  }
  std::size_t piv = SIZE_MAX;
  for (std::size_t j = 0; j < width_; ++j)
    if (row[j]) {
      piv = j;
      break;
    }
  if (piv == SIZE_MAX) return false;
  if (piv == const_col_) {
    consistent_ = false;
    return false;
  }
  // normalize pivot to 1
  uint32_t inv = Fp::raw(row[piv], p_).inv().v;
  for (auto& x : row) x = (uint8_t)((uint32_t)x * inv % p_);
  // back-substitute into existing rows
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    uint8_t c = rows_[k][piv];
    if (c) kernels::axpy_modp(rows_[k].data(), row.data(), (uint8_t)(p_ - c),
                              width_, (uint8_t)p_);
  }
  rows_.push_back(std::move(row));
  pivots_.push_back(piv);
  return true;
}

std::vector<uint8_t> RowReducer::solve() const {
  require(const_col_ != SIZE_MAX, "constant column not set");
  require(consistent_, "system inconsistent");
  std::vector<uint8_t> x(width_ - 1, 0);
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    if (pivots_[k] == const_col_) continue;
    // row: x[piv] + sum over frees = const  (rows are fully reduced)
    uint32_t val = rows_[k][const_col_];
    x[pivots_[k]] = (uint8_t)(val % p_);
  }
  return x;
}

}  // namespace mv4
