#include "mv4/unipotent.hpp"

#include <bit>
#include <sstream>

#include "mv4/kernels.hpp"

namespace mv4 {

UniMatrix::UniMatrix(uint32_t n_, uint32_t p_) : n(n_), p(p_), e(nent(), 0) {
  require(n_ >= 1, "matrix size must be positive");
  check_prime(p_);
}

UniMatrix UniMatrix::sigma(uint32_t n, uint32_t p, uint32_t i) {
  UniMatrix g(n, p);
  require(i >= 1 && i < n, "sigma index out of range");
  g.set(i, i + 1, 1);
  return g;
}

uint32_t UniMatrix::idx(uint32_t i, uint32_t j) const {
  require(i >= 1 && i < j && j <= n, "entry index out of range");
  return (i - 1) * n - i * (i - 1) / 2 + (j - i - 1);
}

uint8_t UniMatrix::get(uint32_t i, uint32_t j) const {
  require(i >= 1 && i <= n && j >= 1 && j <= n, "entry index out of range");
  if (i == j) return 1;
  if (i > j) return 0;
  return e[idx(i, j)];
}

void UniMatrix::set(uint32_t i, uint32_t j, uint32_t v) {
  e[idx(i, j)] = (uint8_t)(v % p);
}

UniMatrix UniMatrix::mul(const UniMatrix& o) const {
  require(n == o.n && p == o.p, "size/characteristic mismatch");
  UniMatrix r(n, p);
  for (uint32_t i = 1; i < n; ++i)
    for (uint32_t j = i + 1; j <= n; ++j) {
      uint32_t s = e[idx(i, j)] + o.e[idx(i, j)];
      for (uint32_t k = i + 1; k < j; ++k) s += (uint32_t)e[idx(i, k)] * o.e[idx(k, j)];
      r.e[idx(i, j)] = (uint8_t)(s % p);
    }
  return r;
}

UniMatrix UniMatrix::inv() const {
  // forward substitution on the defining relation (this * r)(i,j) = 0
  UniMatrix r(n, p);
  for (uint32_t d = 1; d < n; ++d)
    for (uint32_t i = 1; i + d <= n; ++i) {
      uint32_t j = i + d;
      uint32_t s = e[idx(i, j)];
      for (uint32_t k = i + 1; k < j; ++k) s += (uint32_t)e[idx(i, k)] * r.e[idx(k, j)];
      r.e[idx(i, j)] = (uint8_t)((p - s % p) % p);
    }
  return r;
}

UniMatrix UniMatrix::pow(int64_t k) const {
  UniMatrix base = k < 0 ? inv() : *this;
  uint64_t e = k < 0 ? (uint64_t)(-k) : (uint64_t)k;
  UniMatrix r = identity(n, p);
  while (e) {
    if (e & 1) r = r.mul(base);
    base = base.mul(base);
    e >>= 1;
  }
  return r;
}

UniMatrix UniMatrix::conj(const UniMatrix& by) const {
  return by.inv().mul(*this).mul(by);
}

bool UniMatrix::is_identity() const {
  for (uint8_t x : e)
    if (x) return false;
  return true;
}

uint64_t UniMatrix::order() const {
  UniMatrix g = *this;
  uint64_t k = 1;
  while (!g.is_identity()) {
    g = g.mul(*this);
    ++k;
  }
  return k;
}

uint64_t UniMatrix::pack() const {
  uint32_t bits = (uint32_t)std::bit_width(p - 1);
  require(nent() * bits <= 64, "matrix too large for 64-bit packing");
  return kernels::pack_u64(e.data(), nent(), bits);
}

UniMatrix UniMatrix::unpack(uint64_t w, uint32_t n, uint32_t p) {
  UniMatrix g(n, p);
  uint32_t bits = (uint32_t)std::bit_width(p - 1);
  require(g.nent() * bits <= 64, "matrix too large for 64-bit packing");
  kernels::unpack_u64(w, g.e.data(), g.nent(), bits);
  return g;
}

std::string UniMatrix::to_text() const {
  std::ostringstream os;
  os << p << ' ' << n << '\n';
  for (uint32_t i = 1; i <= n; ++i) {
    for (uint32_t j = 1; j <= n; ++j) os << (j > 1 ? " " : "") << (uint32_t)get(i, j);
    os << '\n';
  }
  return os.str();
}

UniMatrix UniMatrix::from_text(const std::string& text) {
  std::istringstream is(text);
  int64_t p = 0, n = 0;
  require(bool(is >> p >> n), "matrix header must be \"p n\"");
  require(p >= 2 && p <= 255 && n >= 1 && n <= 64, "matrix header out of range");
  UniMatrix g((uint32_t)n, (uint32_t)p);
  for (int64_t i = 1; i <= n; ++i)
    for (int64_t j = 1; j <= n; ++j) {
      int64_t v = -1;
      require(bool(is >> v), "matrix body too short");
      require(v >= 0 && v < p, "matrix entry out of range");
      if (i == j)
        require(v == 1, "diagonal entry must be 1");
      else if (i > j)
        require(v == 0, "below-diagonal entry must be 0");
      else
        g.set((uint32_t)i, (uint32_t)j, (uint32_t)v);
    }
  return g;
}

Mat<Fp> to_dense(const UniMatrix& g) {
  Mat<Fp> d(g.n, g.n, Fp::zero(g.p));
  for (uint32_t i = 1; i <= g.n; ++i)
    for (uint32_t j = 1; j <= g.n; ++j) d.at(i - 1, j - 1) = Fp(g.get(i, j), g.p);
  return d;
}

Fp s_proj(const UniMatrix& g, uint32_t i) {
  require(i >= 1 && i < g.n, "superdiagonal index out of range");
  return Fp(g.get(i, i + 1), g.p);
}

std::vector<Fp> s_all(const UniMatrix& g) {
  std::vector<Fp> r;
  for (uint32_t i = 1; i < g.n; ++i) r.push_back(s_proj(g, i));
  return r;
}

UniMatrix project(const UniMatrix& g, Side side) {
  require(g.n >= 2, "cannot project a 1x1 matrix");
  UniMatrix r(g.n - 1, g.p);
  uint32_t off = side == Side::head ? 0 : 1;
  for (uint32_t i = 1; i < r.n; ++i)
    for (uint32_t j = i + 1; j <= r.n; ++j) r.set(i, j, g.get(i + off, j + off));
  return r;
}

UniMatrix project_k(const UniMatrix& g, Side side, uint32_t k) {
  UniMatrix r = g;
  for (uint32_t t = 0; t < k; ++t) r = project(r, side);
  return r;
}

SnElement::SnElement(uint32_t n_, uint32_t p_)
    : p(p_), n(n_), h(n_ / 2, n_ / 2, Fp::zero(p_)) {
  require(n_ >= 2, "corner module needs n >= 2");
  check_prime(p_);
}

SnElement SnElement::add(const SnElement& o) const {
  require(n == o.n && p == o.p, "size/characteristic mismatch");
  SnElement r(n, p);
  for (std::size_t i = 0; i < h.a.size(); ++i) r.h.a[i] = h.a[i] + o.h.a[i];
  return r;
}

SnElement SnElement::neg() const {
  SnElement r(n, p);
  for (std::size_t i = 0; i < h.a.size(); ++i) r.h.a[i] = -h.a[i];
  return r;
}

bool SnElement::is_zero() const {
  for (const auto& x : h.a)
    if (!x.is_zero()) return false;
  return true;
}

SnElement sn_from_matrix(const UniMatrix& u) {
  SnElement s(u.n, u.p);
  uint32_t m = s.m(), c0 = u.n - m;  // corner columns are c0+1 .. n
  for (uint32_t i = 1; i < u.n; ++i)
    for (uint32_t j = i + 1; j <= u.n; ++j) {
      bool corner = i <= m && j > c0;
      if (corner)
        s.h.at(i - 1, j - c0 - 1) = Fp(u.get(i, j), u.p);
      else
        require(u.get(i, j) == 0, "matrix does not lie in the corner subgroup");
    }
  return s;
}

UniMatrix sn_to_matrix(const SnElement& s) {
  UniMatrix u(s.n, s.p);
  uint32_t m = s.m(), c0 = s.n - m;
  for (uint32_t i = 1; i <= m; ++i)
    for (uint32_t j = 1; j <= m; ++j) u.set(i, c0 + j, s.h.at(i - 1, j - 1).v);
  return u;
}

namespace {

Mat<Fp> dense_mul(const Mat<Fp>& A, const Mat<Fp>& B, uint32_t p) {
  Mat<Fp> r(A.rows, B.cols, Fp::zero(p));
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t k = 0; k < A.cols; ++k) {
      if (A.at(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < B.cols; ++j)
        r.at(i, j) = r.at(i, j) + A.at(i, k) * B.at(k, j);
    }
  return r;
}

}  // namespace

SnElement sn_act(const UniMatrix& g1, const UniMatrix& g2, const SnElement& h) {
  uint32_t m = h.m();
  UniMatrix left(1, h.p), right(1, h.p);
  if (h.n % 2 == 1) {
    require(g1.n == m + 1 && g2.n == m + 1, "acting pair must live in U_{m+1}");
    left = project(g1, Side::head);
    right = project(g2, Side::tail);
  } else {
    require(g1.n == m && g2.n == m, "acting pair must live in U_m");
    left = g1;
    right = g2;
  }
  SnElement r(h.n, h.p);
  r.h = dense_mul(to_dense(left), dense_mul(h.h, to_dense(right.inv()), h.p), h.p);
  return r;
}

UniMatrix block_section(const UniMatrix& g1, const UniMatrix& g2, uint32_t n) {
  require(g1.n == g2.n && g1.p == g2.p, "section needs a matched pair");
  uint32_t k = g1.n;
  require(n == 2 * k - 1 || n == 2 * k, "section target size mismatch");
  UniMatrix u(n, g1.p);
  uint32_t off = n - k;  // tail block starts at row/col off+1
  for (uint32_t i = 1; i < k; ++i)
    for (uint32_t j = i + 1; j <= k; ++j) {
      u.set(i, j, g1.get(i, j));
      u.set(i + off, j + off, g2.get(i, j));
    }
  return u;
}

Vec<Fp> phi_cocycle(const UniMatrix& g) {
  Vec<Fp> v;
  for (uint32_t i = 1; i < g.n; ++i) v.push_back(Fp(g.get(i, g.n), g.p));
  return v;
}

Vec<Fp> psi_cocycle(const UniMatrix& g) {
  Vec<Fp> v;
  for (uint32_t j = 2; j <= g.n; ++j) v.push_back(Fp(g.get(1, j), g.p));
  return v;
}

Vec<Fp> psi_twisted(const UniMatrix& g) {
  Vec<Fp> v = psi_cocycle(g.inv());
  for (auto& x : v) x = -x;
  return v;
}

}  // namespace mv4
