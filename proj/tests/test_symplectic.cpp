#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include "thsym/symplectic.hpp"

using namespace thsym;

TEST_CASE("symplectic form basics") {
  CHECK(symplectic_form(SympVec::make(1, 1, 0), SympVec::make(1, 0, 1)) == 1);
  CHECK(symplectic_form(vec3("100", "111"), vec3("101", "100")) == 1);
  for (int g = 1; g <= 4; ++g)
    for (uint32_t x = 0; x < (1u << (2 * g)); ++x) {
      SympVec v{g, x};
      CHECK(symplectic_form(v, v) == 0);
    }
}

TEST_CASE("polarization identity") {
  for (int g = 1; g <= 3; ++g)
    for (uint32_t d = 0; d < (1u << (2 * g)); ++d) {
      auto ch = ThetaChar::unpack(g, d);
      for (uint32_t x = 0; x < (1u << (2 * g)); ++x)
        for (uint32_t y = 0; y < (1u << (2 * g)); ++y) {
          SympVec v{g, x}, w{g, y};
          REQUIRE((quadratic_eval(ch, v + w) ^ quadratic_eval(ch, v) ^ quadratic_eval(ch, w)) ==
                  symplectic_form(v, w));
        }
    }
}

TEST_CASE("zero counts of quadrics and characteristic counts") {
  for (int g = 1; g <= 4; ++g) {
    uint32_t even = (1u << (g - 1)) * ((1u << g) + 1);
    uint32_t odd = (1u << (g - 1)) * ((1u << g) - 1);
    CHECK(even_characteristics(g).size() == even);
    CHECK(odd_characteristics(g).size() == odd);
    for (auto& d : even_characteristics(g)) {
      uint32_t z = 0;
      for (uint32_t x = 0; x < (1u << (2 * g)); ++x) z += !quadratic_eval(d, {g, x});
      CHECK(z == even);
    }
    for (auto& d : odd_characteristics(g)) {
      uint32_t z = 0;
      for (uint32_t x = 0; x < (1u << (2 * g)); ++x) z += !quadratic_eval(d, {g, x});
      CHECK(z == odd);
    }
  }
}

TEST_CASE("transvections") {
  CHECK_THROWS(transvection_apply({2, 0}, {2, 3}));
  std::mt19937 rng(7);
  for (int g = 1; g <= 4; ++g) {
    uint32_t n = 1u << (2 * g);
    for (int it = 0; it < 200; ++it) {
      SympVec v{g, uint32_t(1 + rng() % (n - 1))}, w{g, uint32_t(rng() % n)};
      CHECK(transvection_apply(v, transvection_apply(v, w)) == w);
      if (!symplectic_form(w, v)) CHECK(transvection_apply(v, w) == w);
      auto m = SympMatrix::transvection(v);
      CHECK(m.apply(w) == transvection_apply(v, w));
      CHECK(m.is_symplectic());
      SympVec u{g, uint32_t(1 + rng() % (n - 1))};
      auto p = m * SympMatrix::transvection(u);
      auto id = SympMatrix::identity(g);
      if (symplectic_form(v, u)) CHECK(p * p * p == id);
      else CHECK(p * p == id);
    }
  }
}

TEST_CASE("characteristic action: formula, pullback and simple rule agree") {
  for (int g = 1; g <= 3; ++g)
    for (auto v : nonzero_vectors(g)) {
      auto m = SympMatrix::transvection(v);
      for (uint32_t x = 0; x < (1u << (2 * g)); ++x) {
        auto d = ThetaChar::unpack(g, x);
        REQUIRE(sp_char_action(m, d) == transvection_char_rule(v, d));
        REQUIRE(pullback_char_action(m, d) == transvection_char_rule(v, d));
      }
    }
}

TEST_CASE("characteristic action is a left action") {
  for (int g = 1; g <= 2; ++g) {
    auto grp = enumerate_group(g);
    for (uint64_t x : grp)
      for (uint64_t y : grp) {
        SympMatrix m{g, x}, n{g, y};
        for (uint32_t c = 0; c < (1u << (2 * g)); ++c) {
          auto d = ThetaChar::unpack(g, c);
          REQUIRE(sp_char_action(m * n, d) == sp_char_action(m, sp_char_action(n, d)));
          REQUIRE(sp_char_action(m, d).even() == d.even());
        }
      }
  }
  auto trans = transvection_matrices(3);
  std::mt19937 rng(11);
  auto random_elt = [&] {
    auto m = SympMatrix::identity(3);
    for (int k = 0; k < 12; ++k) m = m * trans[rng() % trans.size()];
    return m;
  };
  for (int it = 0; it < 10000; ++it) {
    auto m = random_elt(), n = random_elt();
    auto d = ThetaChar::unpack(3, rng() % 64);
    REQUIRE(sp_char_action(m * n, d) == sp_char_action(m, sp_char_action(n, d)));
    REQUIRE(pullback_char_action(m, d) == sp_char_action(m, d));
  }
}

TEST_CASE("even characteristics form one orbit") {
  auto trans = transvection_matrices(3);
  std::set<uint32_t> orbit{0};
  std::vector<ThetaChar> todo{{3, 0, 0}};
  while (!todo.empty()) {
    auto d = todo.back();
    todo.pop_back();
    for (auto& t : trans) {
      auto e = sp_char_action(t, d);
      if (orbit.insert(e.packed()).second) todo.push_back(e);
    }
  }
  CHECK(orbit.size() == 36);
}

TEST_CASE("group orders") {
  CHECK(group_order(1) == 6);
  CHECK(group_order(2) == 720);
  CHECK(group_order(3) == 1451520);
  CHECK(enumerate_group(1).size() == 6);
  auto g2 = enumerate_group(2);
  CHECK(g2.size() == 720);
  std::set<uint64_t> s(g2.begin(), g2.end());
  for (uint64_t x : g2) {
    SympMatrix m{2, x};
    CHECK(s.count(m.symplectic_inverse().rows));
    CHECK((m * m.symplectic_inverse()) == SympMatrix::identity(2));
    CHECK(s.count((m * SympMatrix{2, g2[x % g2.size()]}).rows));
  }
  CHECK_THROWS_AS(enumerate_group(4), capacity_error);
  CHECK(stabilizer_order_oplus(1) == 2);
  CHECK(stabilizer_order_oplus(2) == 72);
  CHECK(stabilizer_order_oplus(3) == 40320);
}

TEST_CASE("Lagrangians and rulings") {
  auto ls = lagrangians(3);
  CHECK(ls.size() == 135);
  CHECK(lagrangians(2).size() == 15);
  CHECK(lagrangians(1).size() == 3);
  auto l0 = lagrangian_l0(3);
  CHECK(in_quadric({3, 0, 0}, l0));
  for (auto& d : even_characteristics(3)) {
    auto r = quadric_lagrangians(d);
    CHECK(r.plus.size() == 15);
    CHECK(r.minus.size() == 15);
  }
  auto r0 = quadric_lagrangians({3, 0, 0});
  CHECK(std::find(r0.plus.begin(), r0.plus.end(), l0) != r0.plus.end());
  CHECK_THROWS(quadric_lagrangians({3, 1, 1}));
}

TEST_CASE("asyzygous sextets") {
  auto ss = asyzygous_sextets();
  CHECK(ss.size() == 336);
  auto s0 = sextet_s0();
  bool found = false;
  for (auto& s : ss) {
    found = found || s == s0;
    uint32_t a = 0, b = 0;
    for (auto& d : s) {
      a ^= d.a;
      b ^= d.b;
      CHECK(d.even());
    }
    CHECK(a == 0);
    CHECK(b == 0);
  }
  CHECK(found);
  auto trans = transvection_matrices(3);
  std::set<uint64_t> orbit{sextet_key(s0)};
  std::vector<Sextet> todo{s0};
  while (!todo.empty()) {
    auto s = todo.back();
    todo.pop_back();
    for (auto& t : trans) {
      auto u = sextet_action(t, s);
      if (orbit.insert(sextet_key(u)).second) todo.push_back(u);
    }
  }
  CHECK(orbit.size() == 336);
}

TEST_CASE("E7 diagram checks") {
  auto r = e7_checks();
  CHECK(r.edges_ok);
  CHECK(r.l0_product_identity);
  CHECK(r.top_row_quadric);
  CHECK(r.top_row_group_order == 40320);
}
