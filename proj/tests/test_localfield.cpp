#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>
#include <vector>

#include "mv4/common.hpp"
#include "mv4/localfield.hpp"

using namespace mv4;

namespace {

LaurentSeries mono(const LocalField& F, uint64_t fq_int, int64_t v) {
  return series_monomial(*F.k, F.k->from_int(fq_int), v, 0);
}

ClassVec apply2(const Mat<Fp>& m, const ClassVec& x) {
  return {m.at(0, 0) * x.u + m.at(0, 1) * x.v,
          m.at(1, 0) * x.u + m.at(1, 1) * x.v};
}

std::vector<ClassVec> all_classes(uint32_t p) {
  std::vector<ClassVec> out;
  for (uint32_t i = 0; i < p; ++i)
    for (uint32_t j = 0; j < p; ++j) out.push_back(make_class(p, i, j));
  return out;
}

uint32_t rank2(const Mat<Fp>& m, uint32_t p) {
  RowReducer rr(p, 2);
  for (std::size_t i = 0; i < 2; ++i)
    rr.add_row({(uint8_t)m.at(i, 0).v, (uint8_t)m.at(i, 1).v});
  return (uint32_t)rr.rank();
}

// short random exact series with unit leading coefficient
LaurentSeries random_series(const LocalField& F, std::mt19937_64& rng) {
  std::uniform_int_distribution<int64_t> vd(-3, 3);
  std::uniform_int_distribution<uint64_t> cd(0, F.k->q() - 1);
  std::uniform_int_distribution<int> ld(1, 4);
  const int len = ld(rng);
  LaurentSeries x = series_zero(*F.k, 0);
  for (int i = 0; i < len; ++i)
    x = series_add(x, series_monomial(*F.k, F.k->from_int(cd(rng)), vd(rng) + i, 0));
  if (x.is_zero()) return mono(F, 1, vd(rng));
  return x;
}

}  // namespace

TEST_CASE("series arithmetic and windows") {
  LocalField F = local_base(7, 3);
  const FqField& k = *F.k;

  LaurentSeries one = series_monomial(k, k.one(), 0, 0);
  LaurentSeries t = series_monomial(k, k.one(), 1, 0);
  LaurentSeries x = series_add(one, t);  // 1 + t, exact

  // monomial inverses stay exact; general inverses need a finite window
  LaurentSeries ti = series_inv(series_mul(t, t));
  CHECK((ti.val == -2));
  CHECK((ti.prec == UINT32_MAX));
  CHECK_THROWS_AS((void)series_inv(x), contract_error);

  LaurentSeries xt = series_truncate(x, 6);
  LaurentSeries xi = series_inv(xt);
  LaurentSeries prod = series_mul(xt, xi);
  CHECK((prod.val == 0));
  CHECK((prod.coef.size() == 1));
  CHECK((prod.coef[0] == k.one()));
  CHECK((prod.prec == 6));

  // negative powers run through the inverse
  LaurentSeries pw = series_pow(xt, -2);
  CHECK(series_eq(series_mul(pw, series_pow(xt, 2)),
                  series_monomial(k, k.one(), 0, 6)));

  // window bookkeeping: a far-away tail contributes nothing to a near window
  // (everything below a valuation is known-zero), and the near window survives
  LaurentSeries lo = series_truncate(one, 2);               // knows [0,2)
  LaurentSeries hi = series_truncate(series_pow(t, 5), 1);  // knows [5,6)
  LaurentSeries sum = series_add(lo, hi);
  CHECK((sum.val == 0));
  CHECK((sum.prec == 2));
  CHECK((sum.coef.size() == 1));

  // cancellation that eats the whole window is an error, not a zero
  LaurentSeries mx = series_mul(x, series_monomial(k, k.from_int(6), 0, 0));
  CHECK(series_add(x, mx).is_zero());  // exact cancellation is a true zero
  CHECK_THROWS_AS((void)series_add(series_truncate(x, 4), mx), precision_error);

  // truncation demands a real window
  CHECK_THROWS_AS((void)series_truncate(x, 0), contract_error);
  CHECK_THROWS_AS((void)series_truncate(x, UINT32_MAX), contract_error);

  // mixed-window product keeps the smaller window
  LaurentSeries m = series_mul(series_truncate(x, 3), x);
  CHECK((m.prec == 3));
  CHECK((m.val == 0));
}

TEST_CASE("series parse and print") {
  LocalField F = local_base(7, 3);
  const FqField& k = *F.k;

  LaurentSeries a = series_parse(k, "u^2*t^-1", "t", 0);
  CHECK((a.val == -1));
  CHECK((a.coef[0] == k.gen().pow(2)));
  CHECK((series_text(a, "t") == "2*t^-1"));

  CHECK(series_eq(series_parse(k, "3*t^2", "t", 0),
                  series_monomial(k, k.from_int(3), 2, 0)));
  CHECK(series_parse(k, "14", "t", 0).is_zero());  // integer literals reduce mod 7
  CHECK(series_eq(series_parse(k, "u * t", "t", 0),
                  series_monomial(k, k.gen(), 1, 0)));

  CHECK_THROWS_AS((void)series_parse(k, "", "t", 0), contract_error);
  CHECK_THROWS_AS((void)series_parse(k, "x", "t", 0), contract_error);
  CHECK_THROWS_AS((void)series_parse(k, "t^", "t", 0), contract_error);
  CHECK_THROWS_AS((void)series_parse(k, "t^q", "t", 0), contract_error);
  CHECK_THROWS_AS((void)series_parse(k, "t^--2", "t", 0), contract_error);
  CHECK_THROWS_AS((void)series_parse(k, "t^99999999999999999999999", "t", 0),
                  contract_error);
  CHECK((series_text(series_zero(k, 0), "t") == "0"));
}

TEST_CASE("local_base validation") {
  CHECK_THROWS_AS((void)local_base(6, 3), contract_error);   // not a prime power
  CHECK_THROWS_AS((void)local_base(7, 5), contract_error);   // 5 does not divide 6
  CHECK_THROWS_AS((void)local_base(2, 2), contract_error);
  CHECK_THROWS_AS((void)local_base(7, 6), contract_error);   // exponent not prime
  CHECK_THROWS_AS((void)local_base(251, 5), resource_error);  // 251^5 too big

  LocalField F4 = local_base(4, 3);
  CHECK((F4.k->q() == 4));
  CHECK((F4.zeta_p().pow(3) == F4.k->one()));
  LocalField F7 = local_base(7, 2);
  CHECK((F7.u0() == F7.k->from_int(3)));
  CHECK((F7.zeta_p() == F7.k->from_int(6)));
}

TEST_CASE("square class of a series") {
  LocalField F = local_base(7, 3);

  CHECK((class_of(F, mono(F, 1, 1)) == make_class(3, 0, 1)));
  CHECK((class_of(F, mono(F, 3, 0)) == make_class(3, 1, 0)));
  // 1 and 6 are the cubes in F_7^x, so 3 generates the unit classes
  CHECK((class_of(F, mono(F, 6, 0)).is_zero()));
  CHECK_THROWS_AS((void)class_of(F, series_zero(*F.k, 0)), contract_error);

  // p-th powers land in the trivial class
  std::mt19937_64 rng(20260816);
  for (int i = 0; i < 200; ++i) {
    LaurentSeries x = random_series(F, rng);
    CHECK((class_of(F, series_pow(x, 3)).is_zero()));
  }

  // representatives round-trip
  for (const ClassVec& c : all_classes(3))
    CHECK((class_of(F, class_rep(F, c)) == c));
}

TEST_CASE("class_of is multiplicative") {
  for (auto [q, p] : {std::pair<uint32_t, uint32_t>{7, 3},
                      {7, 2},
                      {5, 2},
                      {4, 3}}) {
    LocalField F = local_base(q, p);
    std::mt19937_64 rng(q * 100 + p);
    for (int i = 0; i < 10000; ++i) {
      LaurentSeries x = random_series(F, rng);
      LaurentSeries y = random_series(F, rng);
      const ClassVec want = class_of(F, x) + class_of(F, y);
      if (!(class_of(F, series_mul(x, y)) == want)) {
        CAPTURE(q);
        CAPTURE(i);
        REQUIRE((class_of(F, series_mul(x, y)) == want));
      }
    }
  }
}

TEST_CASE("tame symbol values") {
  LocalField F = local_base(7, 3);
  LaurentSeries t = mono(F, 1, 1);
  LaurentSeries u = series_monomial(*F.k, F.u0(), 0, 0);

  // units pair to zero; (t,t) vanishes because -1 = 6 is a cube in F_7
  CHECK((tame_symbol(F, u, mono(F, 5, 0)).is_zero()));
  CHECK((tame_symbol(F, t, t).is_zero()));
  CHECK((tame_symbol(F, t, u).v == 2));
  CHECK_THROWS_AS((void)tame_symbol(F, t, series_zero(*F.k, 0)), contract_error);

  // the symbol only sees square classes: rescale by a cube
  LaurentSeries t6 = mono(F, 6, 1);
  CHECK((tame_symbol(F, t6, u) == tame_symbol(F, t, u)));

  Mat<Fp> P = pairing_matrix(F);
  CHECK((P.at(0, 0).v == 0));
  CHECK((P.at(0, 1).v == 1));
  CHECK((P.at(1, 0).v == 2));
  CHECK((P.at(1, 1).v == 0));

  // q = 1 mod 4: (t,t) = 0; q = 3 mod 4: (t,t) = class of -1
  Mat<Fp> P5 = pairing_matrix(local_base(5, 2));
  CHECK((P5.at(1, 1).is_zero()));
  Mat<Fp> P7 = pairing_matrix(local_base(7, 2));
  CHECK((P7.at(1, 1).v == 1));
}

TEST_CASE("tame symbol is antisymmetric and bilinear on classes") {
  for (auto [q, p] : {std::pair<uint32_t, uint32_t>{7, 3},
                      {7, 2},
                      {5, 2},
                      {4, 3},
                      {13, 3}}) {
    LocalField F = local_base(q, p);
    Mat<Fp> P = pairing_matrix(F);
    CHECK((rank2(P, p) == 2));
    const auto classes = all_classes(p);
    for (const ClassVec& x : classes) {
      if (x.is_zero()) continue;
      for (const ClassVec& y : classes) {
        if (y.is_zero()) continue;
        LaurentSeries rx = class_rep(F, x), ry = class_rep(F, y);
        const Fp sxy = tame_symbol(F, rx, ry);
        // matches the matrix form
        CHECK((sxy == pair_classes(P, x, y)));
        // antisymmetry
        CHECK(((sxy + tame_symbol(F, ry, rx)).is_zero()));
        // bilinearity against products of representatives
        for (const ClassVec& z : classes) {
          if (z.is_zero()) continue;
          LaurentSeries rz = class_rep(F, z);
          CHECK((tame_symbol(F, series_mul(rx, rz), ry) ==
                 sxy + tame_symbol(F, rz, ry)));
        }
      }
    }
  }
}

TEST_CASE("kummer extension models") {
  LocalField F = local_base(7, 3);

  ExtModel et = kummer_ext(F, class_zero(3));
  CHECK((et.kind == ExtKind::trivial));
  CHECK((et.degree() == 1));
  for (const ClassVec& x : all_classes(3)) {
    CHECK((apply2(et.norm, x) == x));
    CHECK((apply2(et.res, x) == x));
  }

  // ramified model for the t-class: the uniformizer upstairs norms to [t]
  ExtModel er = kummer_ext(F, make_class(3, 0, 1));
  CHECK((er.kind == ExtKind::ramified));
  CHECK((er.ext.e == 3));
  CHECK((er.ext.g == 0));
  CHECK((ClassVec{er.norm.at(0, 1), er.norm.at(1, 1)} == make_class(3, 0, 1)));
  LaurentSeries s = series_monomial(*er.ext.k, er.ext.k->one(), 1, 0);
  CHECK(series_eq(norm_series(er, s), mono(F, 1, 1)));

  // unramified model for the u0-class
  ExtModel eu = kummer_ext(F, make_class(3, 1, 0));
  CHECK((eu.kind == ExtKind::unramified));
  CHECK((eu.ext.f == 3));
  CHECK((eu.ext.k->q() == 343));

  // the norm hits every unit class downstairs (exhaustive over F_343^x)
  std::set<std::pair<uint64_t, uint64_t>> norm_classes;
  FqElem g343 = eu.ext.k->gen();
  FqElem x = eu.ext.k->one();
  for (uint64_t i = 0; i + 1 < 343; ++i) {
    ClassVec c = class_of(F, norm_series(eu, series_monomial(*eu.ext.k, x, 0, 0)));
    norm_classes.insert({c.u.v, c.v.v});
    x = x * g343;
  }
  CHECK((norm_classes ==
         std::set<std::pair<uint64_t, uint64_t>>{{0, 0}, {1, 0}, {2, 0}}));

  // the restriction kernel is exactly the line through [a]
  for (const ClassVec& a : all_classes(3)) {
    if (a.is_zero()) continue;
    ExtModel e = kummer_ext(F, a);
    for (const ClassVec& x2 : all_classes(3)) {
      const bool in_span = (x2.u * a.v - x2.v * a.u).is_zero();
      CHECK((apply2(e.res, x2).is_zero() == in_span));
    }
  }

  CHECK_THROWS_AS((void)kummer_ext(er.ext, make_class(3, 0, 1)), contract_error);
}

TEST_CASE("extension invariants across fields") {
  for (auto [q, p] : {std::pair<uint32_t, uint32_t>{7, 3},
                      {7, 2},
                      {5, 2},
                      {4, 3},
                      {13, 3},
                      {19, 3}}) {
    LocalField F = local_base(q, p);
    for (const ClassVec& a : all_classes(p)) {
      // the constructor itself audits the matrix identities; survive = pass
      ExtModel e = kummer_ext(F, a);
      CHECK((rank2(e.pairing, p) == 2));

      // orthogonal complement of im(sigma - id) = ker(sigma - id)
      const auto rad = radical_basis(e);
      for (const ClassVec& x : all_classes(p)) {
        bool perp = true;
        for (const ClassVec& r : rad)
          if (!pair_classes(e.pairing, x, r).is_zero()) perp = false;
        const bool fixed = (apply2(e.sigma, x) == x);
        CHECK((perp == fixed));
      }

      // canonical p-th root: norm * root = [a] + (p(p-1)/2) [zeta_p]
      if (e.kind != ExtKind::trivial) {
        const ClassVec rc = root_class(e);
        const uint64_t half = ((uint64_t)p * (p - 1) / 2) % p;
        const uint64_t zc = ((q - 1) / p) % p;
        const ClassVec want = a + make_class(p, half * zc, 0);
        CHECK((apply2(e.norm, rc) == want));
      } else {
        CHECK_THROWS_AS((void)root_class(e), contract_error);
      }

      // free-module criterion: res(N[C]) != 0 forces a full translate span.
      // The premise is checkable at p=2; at p=3 res o norm vanishes on a
      // 2-dimensional class space, so there is nothing to check there.
      if (e.kind != ExtKind::trivial) {
        Mat<Fp> rn(2, 2, Fp::zero(p));
        for (std::size_t i2 = 0; i2 < 2; ++i2)
          for (std::size_t j2 = 0; j2 < 2; ++j2)
            rn.at(i2, j2) = e.res.at(i2, 0) * e.norm.at(0, j2) +
                            e.res.at(i2, 1) * e.norm.at(1, j2);
        bool premise_seen = false;
        for (const ClassVec& C : all_classes(p)) {
          if (apply2(rn, C).is_zero()) continue;
          premise_seen = true;
          CHECK((translate_span_dim(e, C) == p));
        }
        if (p > 2) {
          CHECK(!premise_seen);
          if (a == make_class(p, 0, 1))
            MESSAGE("free-module criterion skipped for p=", p, ", q=", q,
                    ": premise unreachable in rank-2 class modules");
        }
      }
    }
  }
}

TEST_CASE("norm_series window bookkeeping") {
  LocalField F = local_base(7, 3);

  ExtModel er = kummer_ext(F, make_class(3, 0, 1));
  LaurentSeries s1 = series_add(series_monomial(*er.ext.k, er.ext.k->one(), 0, 0),
                                series_monomial(*er.ext.k, er.ext.k->one(), 1, 0));
  LaurentSeries nr = norm_series(er, series_truncate(s1, 6));
  CHECK((nr.val == 0));
  CHECK((nr.prec == 2));  // p slots upstairs collapse into one downstairs

  ExtModel eu = kummer_ext(F, make_class(3, 1, 0));
  LaurentSeries s2 = series_add(series_monomial(*eu.ext.k, eu.ext.k->gen(), 0, 0),
                                series_monomial(*eu.ext.k, eu.ext.k->one(), 1, 0));
  LaurentSeries nu = norm_series(eu, series_truncate(s2, 5));
  CHECK((nu.val == 0));
  CHECK((nu.prec == 5));
  CHECK((nu.k->q() == 7));  // coefficients descend to the ground field
}

TEST_CASE("compositum pairing") {
  LocalField F = local_base(7, 3);
  ExtModel et = kummer_ext(F, class_zero(3));
  ExtModel er = kummer_ext(F, make_class(3, 0, 1));
  ExtModel eu = kummer_ext(F, make_class(3, 1, 0));

  // trivial x trivial reduces to the base symbol
  CompositumPairing c0 = compositum_pairing(et, et);
  Mat<Fp> P = pairing_matrix(F);
  for (const ClassVec& x : all_classes(3))
    for (const ClassVec& y : all_classes(3))
      CHECK((c0.eval(x, y) == pair_classes(P, x, y)));

  // ramified x unramified: a genuine degree-9 tower with residue field F_343
  CompositumPairing c1 = compositum_pairing(er, eu);
  CHECK((c1.comp.e == 3));
  CHECK((c1.comp.f == 3));
  CHECK((c1.comp.k->q() == 343));
  CHECK((rank2(c1.pairing, 3) == 2));

  // Galois invariance upstairs: both generators of the Galois group act on
  // compositum classes by matrices S with S^T P S = P. The twist action is
  // computed through the series layer, the frobenius action likewise.
  const LocalField& C = c1.comp;
  LaurentSeries ru = series_monomial(*C.k, C.k->gen(), 0, 0);
  LaurentSeries rs = series_monomial(*C.k, C.k->one(), 1, 0);
  const FqElem zeta = C.zeta_p();
  Mat<Fp> St(2, 2, Fp::zero(3)), Sf(2, 2, Fp::zero(3));
  {
    ClassVec tu = class_of(C, series_twist(ru, zeta));
    ClassVec ts = class_of(C, series_twist(rs, zeta));
    St.at(0, 0) = tu.u; St.at(1, 0) = tu.v;
    St.at(0, 1) = ts.u; St.at(1, 1) = ts.v;
    ClassVec fu = class_of(C, series_frob(ru, F.k0->degree()));
    ClassVec fs = class_of(C, series_frob(rs, F.k0->degree()));
    Sf.at(0, 0) = fu.u; Sf.at(1, 0) = fu.v;
    Sf.at(0, 1) = fs.u; Sf.at(1, 1) = fs.v;
  }
  for (const Mat<Fp>& S : {St, Sf})
    for (const ClassVec& x : all_classes(3))
      for (const ClassVec& y : all_classes(3))
        CHECK((pair_classes(c1.pairing, apply2(S, x), apply2(S, y)) ==
               pair_classes(c1.pairing, x, y)));

  // two ramified wings with independent classes also need the big tower
  ExtModel er2 = kummer_ext(F, make_class(3, 1, 1));
  CompositumPairing c2 = compositum_pairing(er, er2);
  CHECK((c2.comp.e == 3));
  CHECK((c2.comp.f == 3));

  // colinear ramified wings share the small model
  ExtModel er3 = kummer_ext(F, make_class(3, 0, 2));
  CompositumPairing c3 = compositum_pairing(er, er3);
  CHECK((c3.comp.f == 1));
  CHECK((c3.comp.e == 3));
}

TEST_CASE("find_BC base examples") {
  LocalField F = local_base(7, 3);

  // independent a, d with trivial b, c
  BCResult r = find_BC(F, make_class(3, 0, 1), class_zero(3), class_zero(3),
                       make_class(3, 1, 0));
  REQUIRE((r.witness.has_value()));
  CHECK((r.witness->B.is_zero()));
  CHECK((r.witness->C.is_zero()));
  CHECK((r.witness->case_name == "non-degenerate"));
  for (const Fp& v : r.witness->translate_pairs.a) CHECK((v.is_zero()));

  // all four classes trivial: degenerate branch
  BCResult r0 = find_BC(F, class_zero(3), class_zero(3), class_zero(3),
                        class_zero(3));
  REQUIRE((r0.witness.has_value()));
  CHECK((r0.witness->case_name == "degenerate"));

  // violated symbol is named
  BCResult rbad = find_BC(F, make_class(3, 0, 1), make_class(3, 1, 0),
                          class_zero(3), class_zero(3));
  CHECK(!rbad.witness.has_value());
  CHECK((rbad.reason == "(a,b)_F != 0"));

  // colinear tuple with every class on the t-line: zeta obstruction, and the
  // brute-force search over all (B, C) pairs confirms there is no witness
  ClassVec tcl = make_class(3, 0, 1);
  BCResult rm = find_BC(F, tcl, tcl, tcl, tcl);
  CHECK(!rm.witness.has_value());
  CHECK((rm.reason == "(a,zeta_p)_F != 0"));
  CHECK(!brute_force_BC(F, tcl, tcl, tcl, tcl).has_value());
}

TEST_CASE("find_BC colinear branches") {
  // gate-passing colinear tuple at q=19 (zeta_3 is a cube there): the
  // canonical-root branch produces the witness
  LocalField F19 = local_base(19, 3);
  ClassVec t19 = make_class(3, 0, 1);
  BCResult r = find_BC(F19, t19, t19, t19 * Fp(2, 3), t19);
  REQUIRE((r.witness.has_value()));
  CHECK((r.witness->case_name == "colinear-root"));
  CHECK((brute_force_BC(F19, t19, t19, t19 * Fp(2, 3), t19).has_value()));

  // unramified colinear tuple at q=7: root branch again
  LocalField F7 = local_base(7, 3);
  ClassVec ucl = make_class(3, 1, 0);
  BCResult ru = find_BC(F7, ucl, ucl, class_zero(3), ucl);
  REQUIRE((ru.witness.has_value()));
  CHECK((ru.witness->case_name == "colinear-root"));

  // p=2 walkthrough with one nonzero restriction: the radical adjustment
  // moves B off the naive norm preimage
  LocalField F72 = local_base(7, 2);
  BCResult rh = find_BC(F72, make_class(2, 0, 1), make_class(2, 1, 1),
                        class_zero(2), make_class(2, 0, 1));
  REQUIRE((rh.witness.has_value()));
  CHECK((rh.witness->case_name == "radical-adjustment"));
  CHECK((rh.witness->B == make_class(2, 0, 1)));
  CHECK((rh.witness->C == class_zero(2)));
}

TEST_CASE("find_BC exhaustive sweep q=7 p=3") {
  LocalField F = local_base(7, 3);
  const auto classes = all_classes(3);
  int witnesses = 0, symbol_absent = 0, gate_absent = 0, gate_with_witness = 0;
  for (const ClassVec& a : classes)
    for (const ClassVec& b : classes)
      for (const ClassVec& c : classes)
        for (const ClassVec& d : classes) {
          BCResult r = find_BC(F, a, b, c, d);
          const bool brute = brute_force_BC(F, a, b, c, d).has_value();
          if (r.witness) {
            ++witnesses;
            // the witness construction self-verifies; brute must concur
            if (!brute) {
              CAPTURE(a.u.v); CAPTURE(a.v.v);
              REQUIRE(brute);
            }
          } else if (r.reason.find("zeta") != std::string::npos) {
            ++gate_absent;
            // outside the zeta hypothesis the existence pattern is known
            // exactly: a witness survives iff b or c is trivial
            const bool expect = b.is_zero() || c.is_zero();
            if (brute != expect) {
              CAPTURE(b.u.v); CAPTURE(c.u.v);
              REQUIRE((brute == expect));
            }
            if (brute) ++gate_with_witness;
          } else {
            ++symbol_absent;
            if (brute) {
              CAPTURE(r.reason);
              REQUIRE(!brute);
            }
          }
        }
  CHECK((witnesses == 549));
  CHECK((symbol_absent == 5904));
  CHECK((gate_absent == 108));
  CHECK((gate_with_witness == 60));
}

TEST_CASE("find_BC exhaustive sweep p=2") {
  for (uint32_t q : {5u, 7u}) {
    LocalField F = local_base(q, 2);
    const auto classes = all_classes(2);
    int witnesses = 0, absent = 0;
    for (const ClassVec& a : classes)
      for (const ClassVec& b : classes)
        for (const ClassVec& c : classes)
          for (const ClassVec& d : classes) {
            BCResult r = find_BC(F, a, b, c, d);
            const bool brute = brute_force_BC(F, a, b, c, d).has_value();
            if (r.witness) {
              ++witnesses;
              if (!brute) {
                CAPTURE(q);
                REQUIRE(brute);
              }
            } else {
              ++absent;
              // no zeta gate at p=2: absence always means a violated symbol
              CHECK((r.reason.find("zeta") == std::string::npos));
              if (brute) {
                CAPTURE(q);
                REQUIRE(!brute);
              }
            }
          }
    CHECK((witnesses == 76));
    CHECK((absent == 180));
  }
}

TEST_CASE("find_BC random sweep q=4 p=3") {
  LocalField F = local_base(4, 3);
  std::mt19937_64 rng(44);
  std::uniform_int_distribution<uint32_t> cd(0, 2);
  int witnesses = 0;
  for (int i = 0; i < 300; ++i) {
    ClassVec a = make_class(3, cd(rng), cd(rng));
    ClassVec b = make_class(3, cd(rng), cd(rng));
    ClassVec c = make_class(3, cd(rng), cd(rng));
    ClassVec d = make_class(3, cd(rng), cd(rng));
    BCResult r = find_BC(F, a, b, c, d);
    const bool brute = brute_force_BC(F, a, b, c, d).has_value();
    if (r.witness) {
      ++witnesses;
      if (!brute) {
        CAPTURE(i);
        REQUIRE(brute);
      }
    } else if (r.reason.find("zeta") == std::string::npos) {
      if (brute) {
        CAPTURE(i);
        REQUIRE(!brute);
      }
    }
  }
  CHECK((witnesses > 0));
}
