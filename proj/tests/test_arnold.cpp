#include <catch_amalgamated.hpp>

#include <random>

#include "gravity/arnold.hpp"
#include "gravity/exact_linalg.hpp"
#include "gravity/series.hpp"

using namespace gravity;

namespace {

Mask mk(std::initializer_list<int> idx) { return list_to_mask(std::vector<int>(idx)); }

OSClass cls(int degree, std::initializer_list<std::pair<Mask, int>> terms) {
  OSClass c;
  c.degree = degree;
  for (auto [m, v] : terms)
    if (v != 0) c.coeff[m] = v;
  return c;
}

}  // namespace

TEST_CASE("arrangement shape") {
  CHECK_THROWS_AS(ModuliArrangement(2), std::invalid_argument);
  {
    ModuliArrangement a(4);
    CHECK(a.dim() == 1);
    CHECK(a.count() == 2);
    CHECK(a.hyperplane(0).label == "t1");
    CHECK(a.hyperplane(1).label == "t1-1");
  }
  CHECK(ModuliArrangement(5).count() == 5);
  CHECK(ModuliArrangement(6).count() == 9);
  for (int n = 3; n <= 9; ++n)
    CHECK(ModuliArrangement(n).count() == n * (n - 3) / 2);
  // fixed order: t_i's, then t_i - 1's, then differences lexicographically
  ModuliArrangement a(6);
  CHECK(a.hyperplane(2).label == "t3");
  CHECK(a.hyperplane(3).label == "t1-1");
  CHECK(a.hyperplane(6).label == "t1-t2");
  CHECK(a.hyperplane(8).label == "t2-t3");
}

TEST_CASE("nbc bases and Betti numbers") {
  // dimension of degree k equals the coefficient of x^k in prod (1 + jx)
  for (int n = 3; n <= 7; ++n) {
    OSAlgebra os(n);
    IntPolynomial p = poincare_moduli(n);
    for (int k = 0; k <= n - 3; ++k) {
      INFO("n = " << n << ", k = " << k);
      CHECK(Int(os.betti(k)) == p.coeff(k));
    }
  }
  OSAlgebra os5(5);
  CHECK(os5.betti(0) == 1);
  CHECK(os5.betti(1) == 5);
  CHECK(os5.betti(2) == 6);
  // frozen nbc pairs of the pentagon arrangement (order t1,t2,t1-1,t2-1,t1-t2)
  std::vector<Mask> want{mk({0, 1}), mk({0, 3}), mk({0, 4}), mk({1, 2}), mk({2, 3}), mk({2, 4})};
  CHECK(os5.nbc_basis(2) == want);
}

TEST_CASE("os_reduce") {
  OSAlgebra os(5);
  // empty product is the unit class
  CHECK(os.os_reduce({}) == cls(0, {{0, 1}}));
  // square-zero generators
  CHECK(os.os_reduce({3, 3}).zero());
  // the pair {t2, t1-t2} is the broken circuit of {t1, t2, t1-t2}:
  // e_1 e_4 = e_0 e_4 - e_0 e_1
  CHECK(os.os_reduce({1, 4}) == cls(2, {{mk({0, 4}), 1}, {mk({0, 1}), -1}}));
  // the full dependent triple vanishes
  CHECK(os.os_reduce({0, 1, 4}).zero());
  // antisymmetry
  OSClass ab = os.os_reduce({1, 4});
  OSClass ba = os.os_reduce({4, 1});
  CHECK(ab == ba * Rat(-1));
  // unknown index
  CHECK_THROWS_AS(os.os_reduce({5}), std::invalid_argument);
  // idempotence on nbc-supported classes: reducing a basis set returns itself
  for (int k = 0; k <= 2; ++k)
    for (Mask m : os.nbc_basis(k)) {
      auto lst = mask_to_list(m);
      CHECK(os.os_reduce(lst) == cls(k, {{m, 1}}));
    }
}

TEST_CASE("dlog differences") {
  OSAlgebra os(5);
  CHECK(os.dlog_difference(2, 5).zero());  // z_2 - z_n = -1
  CHECK(os.dlog_difference(1, 3).zero());  // infinity
  CHECK_THROWS_AS(os.dlog_difference(3, 3), std::invalid_argument);
  OSAlgebra os4(4);
  CHECK(os4.dlog_difference(2, 3) == cls(1, {{mk({0}), 1}}));  // z_2 - z_3 = -t_1
  // symmetric in (a, b)
  CHECK(os.dlog_difference(3, 4) == os.dlog_difference(4, 3));
}

TEST_CASE("chord forms") {
  {
    OSAlgebra os(4);
    // square: {v1,v3} cuts out {t1 = 0}, {v0,v2} cuts out {t1 = 1}
    CHECK(os.chord_form(Chord(4, 1, 3)) == cls(1, {{mk({0}), 1}}));
    CHECK(os.chord_form(Chord(4, 0, 2)) == cls(1, {{mk({1}), 1}}));
  }
  {
    OSAlgebra os(5);
    CHECK(os.chord_form(Chord(5, 0, 2)) == cls(1, {{mk({2}), 1}}));
    CHECK(os.chord_form(Chord(5, 1, 3)) == cls(1, {{mk({0}), 1}, {mk({1}), -1}}));
    CHECK(os.chord_form(Chord(5, 2, 4)) == cls(1, {{mk({4}), 1}, {mk({1}), -1}, {mk({2}), -1}}));
    CHECK(os.chord_form(Chord(5, 0, 3)) == cls(1, {{mk({3}), 1}, {mk({2}), -1}}));
    CHECK(os.chord_form(Chord(5, 1, 4)) == cls(1, {{mk({1}), 1}}));
    // the five chord forms span degree one
    RationalMatrix m(os.betti(1), 5);
    auto cs = all_chords(5);
    for (int j = 0; j < 5; ++j) {
      auto v = os.to_row_vector(os.chord_form(cs[j]), 1);
      for (int r = 0; r < os.betti(1); ++r)
        if (v[r] != 0) m.set(r, j, v[r]);
    }
    CHECK(rank(m) == 5);
  }
  // nonzero for every chord, n <= 7
  for (int n = 4; n <= 7; ++n) {
    OSAlgebra os(n);
    for (const auto& c : all_chords(n)) CHECK_FALSE(os.chord_form(c).zero());
  }
  // sign flip convention
  {
    OSAlgebra plain(5), flipped(5, true);
    for (const auto& c : all_chords(5))
      CHECK(flipped.chord_form(c) == plain.chord_form(c) * Rat(-1));
  }
}

TEST_CASE("eval_monomial") {
  OSAlgebra os(5);
  auto cs = all_chords(5);
  for (const auto& c : cs) {
    std::vector<Chord> one{c};
    CHECK(os.eval_monomial(one) == os.chord_form(c));
  }
  {
    std::vector<Chord> rep{cs[0], cs[0]};
    CHECK(os.eval_monomial(rep).zero());
  }
  // antisymmetry under a swap
  {
    std::vector<Chord> ab{cs[0], cs[3]};
    std::vector<Chord> ba{cs[3], cs[0]};
    CHECK(os.eval_monomial(ab) == os.eval_monomial(ba) * Rat(-1));
  }
  // the 10 degree-2 monomials span the 6-dimensional degree-2 piece
  {
    RationalMatrix m(os.betti(2), 10);
    int j = 0;
    for (size_t i = 0; i < cs.size(); ++i)
      for (size_t l = i + 1; l < cs.size(); ++l, ++j) {
        std::vector<Chord> mono{cs[i], cs[l]};
        auto v = os.to_row_vector(os.eval_monomial(mono), 2);
        for (int r = 0; r < os.betti(2); ++r)
          if (v[r] != 0) m.set(r, j, v[r]);
      }
    CHECK(rank(m) == 6);
  }
}

TEST_CASE("Arnol'd relation instances") {
  // omega_ab ^ omega_bc + omega_bc ^ omega_ca + omega_ca ^ omega_ab = 0
  // whenever all three pairwise differences are finite coordinates
  std::mt19937 rng(42);
  for (int n = 5; n <= 6; ++n) {
    OSAlgebra os(n);
    for (int trial = 0; trial < 40; ++trial) {
      // marked points with finite differences live in {2, ..., n}
      int a = 2 + static_cast<int>(rng() % (n - 1));
      int b = 2 + static_cast<int>(rng() % (n - 1));
      int c = 2 + static_cast<int>(rng() % (n - 1));
      if (a == b || b == c || a == c) continue;
      auto hab = os.arrangement().index_of_difference(a, b);
      auto hbc = os.arrangement().index_of_difference(b, c);
      auto hca = os.arrangement().index_of_difference(c, a);
      if (!hab || !hbc || !hca) continue;  // a constant difference
      OSClass sum;
      sum.degree = 2;
      sum += os.os_reduce({*hab, *hbc});
      sum += os.os_reduce({*hbc, *hca});
      sum += os.os_reduce({*hca, *hab});
      CHECK(sum.zero());
    }
  }
}

TEST_CASE("betti_moduli frozen values") {
  CHECK(betti_moduli(4) == std::vector<long>{1, 2});
  CHECK(betti_moduli(5) == std::vector<long>{1, 5, 6});
  CHECK(betti_moduli(6) == std::vector<long>{1, 9, 26, 24});
  // weights are the doubled degree annotation
  OSAlgebra os(5);
  CHECK(os.os_reduce({0, 1}).weight() == 4);
}
