#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mv4/fp.hpp"

using namespace mv4;

TEST_CASE("Fp arithmetic basics") {
  Fp a(5, 7), b(4, 7);
  CHECK((a + b).v == 2);
  CHECK((a - b).v == 1);
  CHECK((a * b).v == 6);
  CHECK((-a).v == 2);
  CHECK((-Fp(0, 7)).v == 0);
  CHECK(Fp(3, 7).inv().v == 5);  // 3*5 = 15 = 1 mod 7
  CHECK(Fp(1, 2).inv().v == 1);
  CHECK(Fp(2, 5).pow(0).v == 1);
  CHECK(Fp(2, 5).pow(10).v == ((1 << 10) % 5));
  CHECK(Fp(13, 7).v == 6);  // reduction on construction
  CHECK_THROWS_AS(Fp(0, 7).inv(), contract_error);
}

TEST_CASE("check_prime") {
  check_prime(2);
  check_prime(3);
  check_prime(7919);
  CHECK_THROWS_AS(check_prime(1), contract_error);
  CHECK_THROWS_AS(check_prime(91), contract_error);  // 7*13
  CHECK(is_prime_u32(4294967291u));
  CHECK_FALSE(is_prime_u32(0));
}

TEST_CASE("FqField prime case coincides with Fp") {
  FqField F(7, 1);
  CHECK(F.q() == 7);
  CHECK(F.gen().to_int() == 3);  // least primitive root mod 7
  CHECK(F.elem_order(F.from_int(2)) == 3);
  CHECK(F.elem_order(F.from_int(3)) == 6);
  auto x = F.from_int(5), y = F.from_int(4);
  CHECK((x * y).to_int() == 6);
  CHECK((x + y).to_int() == 2);
  CHECK(x.inv().to_int() == 3);  // 5*3 = 15 = 1
  CHECK(F.dlog(F.from_int(6)) == 3);  // 3^3 = 27 = 6 mod 7
}

TEST_CASE("F4 and F9 structure") {
  FqField F4(2, 2);
  CHECK(F4.modulus() == std::vector<uint32_t>{1, 1, 1});  // x^2+x+1
  CHECK(F4.q() == 4);
  auto x4 = F4.from_int(2);  // the x-class
  CHECK((x4 * x4).to_int() == 3);  // x^2 = x+1
  CHECK(F4.elem_order(x4) == 3);

  FqField F9(3, 2);
  CHECK(F9.modulus() == std::vector<uint32_t>{1, 0, 1});  // x^2+1
  CHECK(F9.gen().to_int() == 4);                          // x+1
  CHECK(F9.dlog(F9.from_int(2)) == 4);                    // (x+1)^4 = -1
  auto x9 = F9.from_int(3);
  CHECK(F9.frobenius(x9).to_int() == 6);  // x^3 = -x = 2x
  CHECK(F9.frobenius(x9, 2) == x9);
  for (uint64_t n = 1; n < 9; ++n) {
    auto e = F9.from_int(n);
    CHECK((e * e.inv()) == F9.one());
    CHECK(F9.gen().pow(F9.dlog(e)) == e);
  }
}

TEST_CASE("dlog round trip in F_343") {
  FqField F(7, 3);
  CHECK(F.q() == 343);
  auto g = F.gen();
  CHECK(F.elem_order(g) == 342);
  for (uint64_t k : {0ull, 1ull, 17ull, 100ull, 341ull})
    CHECK(F.dlog(g.pow(k)) == k);
}

TEST_CASE("subfield embedding is a ring hom") {
  FqField F9(3, 2), F81(3, 4);
  auto emb = F81.embedding_of(F9);
  CHECK(emb.size() == 2);
  // the image of x satisfies x^2+1 = 0
  CHECK((emb[1] * emb[1] + F81.one()).is_zero());
  auto lift = [&](uint64_t n) { return F81.embed(F9, F9.from_int(n), emb); };
  for (uint64_t a = 0; a < 9; ++a)
    for (uint64_t b : {1ull, 2ull, 5ull, 8ull}) {
      CHECK(lift(a) * lift(b) == lift((F9.from_int(a) * F9.from_int(b)).to_int()));
      CHECK(lift(a) + lift(b) == lift((F9.from_int(a) + F9.from_int(b)).to_int()));
    }
  // embedded generator keeps its multiplicative order
  CHECK(F81.elem_order(lift(F9.gen().to_int())) == 8);
}

TEST_CASE("solve_linear unique solution over F_3") {
  // A = [[1,2],[2,1],[0,1]], x = (2,1) => b = (1,2,1)
  Mat<Fp> A(3, 2, Fp::zero(3));
  A.at(0, 0) = Fp(1, 3); A.at(0, 1) = Fp(2, 3);
  A.at(1, 0) = Fp(2, 3); A.at(1, 1) = Fp(1, 3);
  A.at(2, 0) = Fp(0, 3); A.at(2, 1) = Fp(1, 3);
  Vec<Fp> b = {Fp(1, 3), Fp(2, 3), Fp(1, 3)};
  auto s = solve_linear(A, b);
  REQUIRE(s.has_value());
  CHECK(s->particular == Vec<Fp>{Fp(2, 3), Fp(1, 3)});
  CHECK(s->kernel.empty());
}

TEST_CASE("solve_linear kernel and inconsistency") {
  Mat<Fp> A(1, 2, Fp::zero(3));
  A.at(0, 0) = Fp(1, 3); A.at(0, 1) = Fp(2, 3);
  auto s = solve_linear(A, Vec<Fp>{Fp(0, 3)});
  REQUIRE(s.has_value());
  REQUIRE(s->kernel.size() == 1);
  CHECK(s->kernel[0] == Vec<Fp>{Fp(1, 3), Fp(1, 3)});  // x1 = x2

  Mat<Fp> Z(2, 1, Fp::zero(3));
  Z.at(0, 0) = Fp(1, 3); Z.at(1, 0) = Fp(2, 3);
  CHECK_FALSE(solve_linear(Z, Vec<Fp>{Fp(1, 3), Fp(1, 3)}).has_value());  // 2*1 != 1
}

TEST_CASE("solve_linear over F_4") {
  FqField F(2, 2);
  auto e = [&](uint64_t n) { return F.from_int(n); };
  // x * 2 = 3 in F_4: x = 3/2; check consistency of a 2x2 system
  Mat<FqElem> A(2, 2, F.zero());
  A.at(0, 0) = e(2); A.at(0, 1) = e(1);
  A.at(1, 0) = e(0); A.at(1, 1) = e(3);
  Vec<FqElem> b = {e(1), e(2)};
  auto s = solve_linear(A, b);
  REQUIRE(s.has_value());
  CHECK(s->kernel.empty());
  // verify A * particular = b by hand
  CHECK(A.at(0, 0) * s->particular[0] + A.at(0, 1) * s->particular[1] == b[0]);
  CHECK(A.at(1, 0) * s->particular[0] + A.at(1, 1) * s->particular[1] == b[1]);
}

TEST_CASE("tensor is lexicographic") {
  Vec<Fp> u = {Fp(1, 5), Fp(2, 5)}, w = {Fp(3, 5), Fp(4, 5), Fp(1, 5)};
  auto t = tensor(u, w);
  REQUIRE(t.size() == 6);
  CHECK(t[0].v == 3);
  CHECK(t[2].v == 1);
  CHECK(t[3].v == 6 % 5);
  CHECK(t[5].v == 2);
}

TEST_CASE("RowReducer agrees with solve_linear") {
  // same F_3 system as above, augmented [A|b]
  RowReducer rr(3, 3);
  rr.set_const_col(2);
  CHECK(rr.add_row({1, 2, 1}));
  CHECK_FALSE(rr.add_row({2, 1, 2}));  // = 2 * row 1
  CHECK(rr.add_row({0, 1, 1}));
  CHECK(rr.consistent());
  CHECK(rr.rank() == 2);
  auto x = rr.solve();
  CHECK(x == std::vector<uint8_t>{2, 1});
}

TEST_CASE("RowReducer detects inconsistency") {
  RowReducer rr(3, 3);
  rr.set_const_col(2);
  rr.add_row({1, 2, 1});
  CHECK_FALSE(rr.add_row({2, 1, 0}));  // 2*(row 1) would need b = 2, got 0
  CHECK_FALSE(rr.consistent());
  CHECK_THROWS_AS(rr.solve(), contract_error);
}

TEST_CASE("RowReducer rank only, no const col") {
  RowReducer rr(2, 4);
  rr.add_row({1, 1, 0, 0});
  rr.add_row({0, 1, 1, 0});
  rr.add_row({1, 0, 1, 0});  // sum of the first two over F_2
  CHECK(rr.rank() == 2);
  rr.add_row({0, 0, 0, 1});
  CHECK(rr.rank() == 3);
  CHECK(rr.consistent());
}
