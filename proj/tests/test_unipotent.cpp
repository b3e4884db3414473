#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <map>
#include <random>

#include "mv4/unipotent.hpp"

using namespace mv4;

namespace {

// odometer over all of U_n(F_p)
void for_each_uni(uint32_t n, uint32_t p, const std::function<void(const UniMatrix&)>& f) {
  UniMatrix g(n, p);
  while (true) {
    f(g);
    uint32_t k = 0;
    while (k < g.e.size() && g.e[k] == p - 1) g.e[k++] = 0;
    if (k == g.e.size()) return;
    ++g.e[k];
  }
}

UniMatrix random_uni(uint32_t n, uint32_t p, std::mt19937& rng) {
  UniMatrix g(n, p);
  for (auto& x : g.e) x = (uint8_t)(rng() % p);
  return g;
}

UniMatrix u3(uint32_t p, uint32_t a, uint32_t x, uint32_t y) {
  // [[1,a,x],[0,1,y],[0,0,1]]
  UniMatrix g(3, p);
  g.set(1, 2, a);
  g.set(1, 3, x);
  g.set(2, 3, y);
  return g;
}

}  // namespace

TEST_CASE("multiplication, inverse, powers, order") {
  std::mt19937 rng(3);
  for (uint32_t p : {2u, 3u, 5u}) {
    for (int rep = 0; rep < 50; ++rep) {
      auto g = random_uni(5, p, rng), h = random_uni(5, p, rng), k = random_uni(5, p, rng);
      CHECK(g.mul(h).mul(k) == g.mul(h.mul(k)));
      CHECK(g.mul(g.inv()).is_identity());
      CHECK(g.inv().mul(g).is_identity());
      CHECK(g.pow(3) == g.mul(g).mul(g));
      CHECK(g.pow(-1) == g.inv());
      uint64_t o = g.order();
      CHECK(g.pow((int64_t)o).is_identity());
      // order is a power of p
      while (o % p == 0) o /= p;
      CHECK(o == 1);
    }
  }
  // sigma_1 sigma_2 in U_3(F_2) has order 4 (it is not in the abelianization kernel)
  auto s1 = UniMatrix::sigma(3, 2, 1), s2 = UniMatrix::sigma(3, 2, 2);
  CHECK(s1.mul(s2).order() == 4);
  CHECK(s1.order() == 2);
}

TEST_CASE("pack and text round trips") {
  std::mt19937 rng(5);
  for (uint32_t p : {2u, 3u, 7u}) {
    for (int rep = 0; rep < 20; ++rep) {
      auto g = random_uni(6, p, rng);
      CHECK(UniMatrix::unpack(g.pack(), 6, p) == g);
      CHECK(UniMatrix::from_text(g.to_text()) == g);
    }
  }
  CHECK(UniMatrix::identity(4, 3).pack() == 0);

  CHECK_THROWS_AS(UniMatrix::from_text("3 3\n1 0 0\n0 1 0\n0 1 1\n"), contract_error);
  CHECK_THROWS_AS(UniMatrix::from_text("3 3\n1 0 0\n0 2 0\n0 0 1\n"), contract_error);
  CHECK_THROWS_AS(UniMatrix::from_text("3 3\n1 0 3\n0 1 0\n0 0 1\n"), contract_error);
  CHECK_THROWS_AS(UniMatrix::from_text("4 3\n"), contract_error);  // 4 not prime
  CHECK_THROWS_AS(UniMatrix::from_text("3 3\n1 0\n"), contract_error);
}

TEST_CASE("s_proj on generators") {
  for (uint32_t p : {2u, 3u}) {
    uint32_t n = 4;
    for (uint32_t i = 1; i < n; ++i)
      for (uint32_t j = 1; j < n; ++j)
        CHECK(s_proj(UniMatrix::sigma(n, p, j), i).v == (i == j ? 1u : 0u));
  }
  auto prod = UniMatrix::sigma(3, 3, 1).mul(UniMatrix::sigma(3, 3, 2));
  CHECK(s_proj(prod, 1).v == 1);
  CHECK(s_proj(prod, 2).v == 1);
  CHECK_THROWS_AS(s_proj(prod, 3), contract_error);
}

TEST_CASE("s_proj is additive on products") {
  std::mt19937 rng(7);
  for (int rep = 0; rep < 1000; ++rep) {
    auto g = random_uni(5, 3, rng), h = random_uni(5, 3, rng);
    auto gh = g.mul(h);
    for (uint32_t i = 1; i < 5; ++i)
      CHECK(s_proj(gh, i) == s_proj(g, i) + s_proj(h, i));
  }
}

TEST_CASE("head/tail projections") {
  uint32_t n = 5, p = 3;
  CHECK(project(UniMatrix::identity(n, p), Side::head).is_identity());
  CHECK(project(UniMatrix::identity(n, p), Side::tail).is_identity());
  for (uint32_t i = 1; i + 1 < n; ++i)
    CHECK(project(UniMatrix::sigma(n, p, i), Side::head) == UniMatrix::sigma(n - 1, p, i));
  CHECK(project(UniMatrix::sigma(n, p, n - 1), Side::head).is_identity());
  // tail shifts the index down by one
  CHECK(project(UniMatrix::sigma(n, p, 1), Side::tail).is_identity());
  for (uint32_t i = 2; i < n; ++i)
    CHECK(project(UniMatrix::sigma(n, p, i), Side::tail) == UniMatrix::sigma(n - 1, p, i - 1));

  std::mt19937 rng(11);
  for (int rep = 0; rep < 1000; ++rep) {
    auto g = random_uni(5, 3, rng), h = random_uni(5, 3, rng);
    CHECK(project(g.mul(h), Side::head) == project(g, Side::head).mul(project(h, Side::head)));
    CHECK(project(g.mul(h), Side::tail) == project(g, Side::tail).mul(project(h, Side::tail)));
  }
}

TEST_CASE("corner module arithmetic matches matrix multiplication") {
  for (uint32_t p : {2u, 3u}) {
    uint32_t n = 5;
    std::mt19937 rng(13);
    for (int rep = 0; rep < 100; ++rep) {
      SnElement a(n, p), b(n, p);
      for (auto& x : a.h.a) x = Fp(rng() % p, p);
      for (auto& x : b.h.a) x = Fp(rng() % p, p);
      auto A = sn_to_matrix(a), B = sn_to_matrix(b);
      CHECK(A.mul(B) == sn_to_matrix(a.add(b)));
      CHECK(B.mul(A) == sn_to_matrix(a.add(b)));  // abelian
      CHECK(A.pow((int64_t)p).is_identity());     // exponent p
      CHECK(sn_from_matrix(A) == a);
    }
  }
  // a matrix with support off the corner is rejected
  CHECK_THROWS_AS(sn_from_matrix(UniMatrix::sigma(5, 3, 2)), contract_error);
}

TEST_CASE("sn_act identity and oracle, p=2, n=5, exhaustive") {
  uint32_t p = 2, n = 5, m = 2;
  std::vector<UniMatrix> u3s;
  for_each_uni(m + 1, p, [&](const UniMatrix& g) { u3s.push_back(g); });
  REQUIRE(u3s.size() == 8);
  std::vector<SnElement> hs;
  // all 16 corner values
  for (uint32_t w = 0; w < 16; ++w) {
    SnElement h(n, p);
    for (uint32_t t = 0; t < 4; ++t) h.h.a[t] = Fp((w >> t) & 1, p);
    hs.push_back(h);
  }
  auto id = UniMatrix::identity(m + 1, p);
  for (const auto& h : hs) CHECK(sn_act(id, id, h) == h);

  for (const auto& g1 : u3s)
    for (const auto& g2 : u3s) {
      auto u = block_section(g1, g2, n);
      for (const auto& h : hs) {
        auto conj = u.mul(sn_to_matrix(h)).mul(u.inv());
        CHECK(sn_act(g1, g2, h) == sn_from_matrix(conj));
      }
    }
}

TEST_CASE("sn_act oracle, p=3, n=5, all pairs on a module basis") {
  uint32_t p = 3, n = 5, m = 2;
  std::vector<UniMatrix> u3s;
  for_each_uni(m + 1, p, [&](const UniMatrix& g) { u3s.push_back(g); });
  REQUIRE(u3s.size() == 27);
  std::vector<SnElement> basis;
  for (uint32_t t = 0; t < 4; ++t) {
    SnElement h(n, p);
    h.h.a[t] = Fp(1, p);
    basis.push_back(h);
  }
  for (const auto& g1 : u3s)
    for (const auto& g2 : u3s) {
      auto u = block_section(g1, g2, n);
      for (const auto& h : basis) {
        auto conj = u.mul(sn_to_matrix(h)).mul(u.inv());
        CHECK(sn_act(g1, g2, h) == sn_from_matrix(conj));
      }
    }
}

TEST_CASE("sn_act even-size variant agrees with conjugation") {
  uint32_t p = 3, n = 4, m = 2;
  std::vector<UniMatrix> u2s;
  for_each_uni(m, p, [&](const UniMatrix& g) { u2s.push_back(g); });
  REQUIRE(u2s.size() == 3);
  for (const auto& g1 : u2s)
    for (const auto& g2 : u2s)
      for (uint32_t w = 0; w < 81; ++w) {
        SnElement h(n, p);
        uint32_t ww = w;
        for (uint32_t t = 0; t < 4; ++t) {
          h.h.a[t] = Fp(ww % 3, p);
          ww /= 3;
        }
        auto u = block_section(g1, g2, n);
        auto conj = u.mul(sn_to_matrix(h)).mul(u.inv());
        CHECK(sn_act(g1, g2, h) == sn_from_matrix(conj));
      }
}

TEST_CASE("block_section is a section of the two projections") {
  std::mt19937 rng(17);
  for (uint32_t n : {5u, 6u}) {
    uint32_t k = (n + 1) / 2;
    for (int rep = 0; rep < 50; ++rep) {
      auto g1 = random_uni(k, 3, rng), g2 = random_uni(k, 3, rng);
      auto u = block_section(g1, g2, n);
      CHECK(project_k(u, Side::head, n - k) == g1);
      CHECK(project_k(u, Side::tail, n - k) == g2);
    }
  }
}

TEST_CASE("phi is the last column and a 1-cocycle") {
  CHECK(phi_cocycle(u3(5, 2, 3, 4)) == Vec<Fp>{Fp(3, 5), Fp(4, 5)});
  CHECK(phi_cocycle(UniMatrix::identity(3, 3)) == Vec<Fp>{Fp(0, 3), Fp(0, 3)});
  // phi(g h) = phi(g) + head(g) phi(h), exhaustively over U_3(F_3)
  std::vector<UniMatrix> all;
  for_each_uni(3, 3, [&](const UniMatrix& g) { all.push_back(g); });
  for (const auto& g : all)
    for (const auto& h : all) {
      auto lhs = phi_cocycle(g.mul(h));
      auto rhs = phi_cocycle(h);
      auto hd = project(g, Side::head);
      Vec<Fp> acted(rhs.size(), Fp::zero(3));
      for (uint32_t i = 1; i <= 2; ++i)
        for (uint32_t j = 1; j <= 2; ++j)
          acted[i - 1] = acted[i - 1] + Fp(hd.get(i, j), 3) * rhs[j - 1];
      for (std::size_t i = 0; i < lhs.size(); ++i)
        CHECK(lhs[i] == phi_cocycle(g)[i] + acted[i]);
    }
}

TEST_CASE("psi, twisted psi, and their identities") {
  CHECK(psi_cocycle(u3(5, 2, 3, 4)) == Vec<Fp>{Fp(2, 5), Fp(3, 5)});
  CHECK(psi_cocycle(UniMatrix::identity(3, 3)) == Vec<Fp>{Fp(0, 3), Fp(0, 3)});
  std::vector<UniMatrix> all;
  for_each_uni(3, 3, [&](const UniMatrix& g) { all.push_back(g); });
  auto act_right = [](const Vec<Fp>& v, const UniMatrix& t) {  // v * t (row vector)
    Vec<Fp> r(v.size(), Fp::zero(t.p));
    for (uint32_t j = 1; j <= t.n; ++j)
      for (uint32_t i = 1; i <= t.n; ++i)
        r[j - 1] = r[j - 1] + v[i - 1] * Fp(t.get(i, j), t.p);
    return r;
  };
  for (const auto& g : all) {
    // twisted value: psi(g) tail(g)^{-1} = -psi(g^{-1})
    auto tw = act_right(psi_cocycle(g), project(g, Side::tail).inv());
    CHECK(psi_twisted(g) == tw);
  }
  for (const auto& g : all)
    for (const auto& h : all) {
      // psi(g h) = psi(g) tail(h) + psi(h)
      auto lhs = psi_cocycle(g.mul(h));
      auto rhs = act_right(psi_cocycle(g), project(h, Side::tail));
      for (std::size_t i = 0; i < lhs.size(); ++i)
        CHECK(lhs[i] == rhs[i] + psi_cocycle(h)[i]);
      // cocycle identity for the twisted form: tw(gh) = tw(g) + g.tw(h)
      auto lhs2 = psi_twisted(g.mul(h));
      auto acted = act_right(psi_twisted(h), project(g, Side::tail).inv());
      for (std::size_t i = 0; i < lhs2.size(); ++i)
        CHECK(lhs2[i] == psi_twisted(g)[i] + acted[i]);
    }
}

TEST_CASE("combined s-map is surjective with kernel of index p^(n-1)") {
  uint32_t p = 3, n = 4;
  std::map<std::vector<uint32_t>, uint32_t> fibers;
  for_each_uni(n, p, [&](const UniMatrix& g) {
    std::vector<uint32_t> key;
    for (auto& s : s_all(g)) key.push_back(s.v);
    fibers[key]++;
  });
  CHECK(fibers.size() == 27);  // surjective onto F_3^3
  for (auto& [k, cnt] : fibers) CHECK(cnt == 729 / 27);
}

TEST_CASE("centralizer of the corner subgroup in U_5") {
  // elements commuting with all of S_5 are exactly those supported on the
  // top-right 3x3 corner (rows 1..3, columns 3..5) plus the diagonal
  for (uint32_t p : {2u, 3u}) {
    std::vector<SnElement> basis;
    for (uint32_t t = 0; t < 4; ++t) {
      SnElement h(5, p);
      h.h.a[t] = Fp(1, p);
      basis.push_back(h);
    }
    std::size_t count = 0;
    for_each_uni(5, p, [&](const UniMatrix& g) {
      bool central = true;
      for (const auto& h : basis) {
        auto s = sn_to_matrix(h);
        if (!(g.mul(s) == s.mul(g))) {
          central = false;
          break;
        }
      }
      bool corner_supported = true;
      for (uint32_t i = 1; i < 5; ++i)
        for (uint32_t j = i + 1; j <= 5; ++j)
          if (g.get(i, j) != 0 && !(i <= 3 && j >= 3))
            corner_supported = false;
      CHECK(central == corner_supported);
      if (central) ++count;
    });
    CHECK(count == pow_u64(p, 8));  // eight free entries with i <= 3 <= j
  }
}
