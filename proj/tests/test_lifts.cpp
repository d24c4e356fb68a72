#include <catch_amalgamated.hpp>

#include <random>

#include "thsym/lifts.hpp"
#include "thsym/theta.hpp"

using namespace thsym;

namespace {

std::vector<GaussRational> coords_of_theta4(const OrbitSumBasis& B, const ThetaChar& d) {
  return coords_q(B, theta_power(d, 4));
}

std::vector<GaussRational> neg(std::vector<GaussRational> v) {
  for (auto& x : v) x = -x;
  return v;
}

}  // namespace

TEST_CASE("U operators") {
  auto U = u_operator(1, 0, 1);
  CHECK(U.m[0][0] == GaussRational(GaussInt(0, 1)));
  CHECK(U.m[1][1] == GaussRational(GaussInt(0, -1)));
  CHECK(U.m[0][1].is_zero());
  for (int g = 1; g <= 3; ++g) {
    auto minus = LiftMatrix::identity(g).scaled(GaussRational(-1));
    for (auto v : nonzero_vectors(g)) CHECK((u_operator(v) * u_operator(v)).same_entries(minus));
  }
  // U_v U_w = c U_{v+w}, and U_v U_w = (-1)^{E(v,w)} U_w U_v
  for (int g = 1; g <= 2; ++g)
    for (auto v : nonzero_vectors(g))
      for (auto w : nonzero_vectors(g)) {
        if (v == w) continue;
        auto vw = u_operator(v) * u_operator(w), wv = u_operator(w) * u_operator(v);
        auto c = vw.ratio_to(u_operator(v + w));
        REQUIRE(c);
        CHECK((*c * *c * *c * *c) == GaussRational(1));
        CHECK(vw.same_entries(wv.scaled(GaussRational(symplectic_form(v, w) ? -1 : 1))));
      }
}

TEST_CASE("transvection lifts") {
  auto t = transvection_lift(from_heis(1, 0, 1));
  CHECK(t.m[0][0] == GaussRational(1));
  CHECK(t.m[1][1] == GaussRational(GaussInt(0, -1)));
  CHECK(t.m[0][1].is_zero());
  CHECK(t.m[1][0].is_zero());
  // t U_w t^-1 = c U_{t_v w}
  std::mt19937 rng(4);
  for (int g = 1; g <= 3; ++g) {
    auto vs = nonzero_vectors(g);
    for (auto v : vs)
      for (auto w : vs) {
        if (g == 3 && rng() % 16) continue;
        auto tv = transvection_lift(v);
        auto lhs = tv * u_operator(w);
        auto rhs = u_operator(transvection_apply(v, w)) * tv;
        auto c = lhs.ratio_to(rhs);
        REQUIRE(c);
        CHECK(*c * *c * *c * *c == GaussRational(1));
      }
  }
}

TEST_CASE("Fourier transform") {
  auto F = fourier_transform(1);
  CHECK(F.m[1][1] == GaussRational(-1));
  CHECK(F.m[0][1] == GaussRational(1));
  for (int g = 1; g <= 3; ++g)
    CHECK((fourier_transform(g) * fourier_transform(g)).same_entries(LiftMatrix::identity(g).scaled(GaussRational(1 << g))));
}

TEST_CASE("induced matrices agree with brute force substitution") {
  for (auto [g, d] : {std::pair{1, 4}, {1, 8}, {1, 12}, {2, 4}, {2, 8}, {3, 4}}) {
    auto B = orbit_sum_basis(g, d);
    for (auto v : nonzero_vectors(g)) {
      auto fast = induced_on_invariants(v, B), slow = induced_bruteforce(v, B);
      CHECK(fast.scale == slow.scale);
      CHECK(fast.same_ints(slow));
    }
  }
}

TEST_CASE("induced action on theta fourth powers") {
  auto B1 = orbit_sum_basis(1, 4);
  InducedSet S1(B1);
  auto T = from_heis(1, 0, 1);
  CHECK(S1.apply(T, coords_of_theta4(B1, {1, 0, 0})) == coords_of_theta4(B1, {1, 0, 1}));
  for (int g = 1; g <= 3; ++g) {
    auto B = orbit_sum_basis(g, 4);
    InducedSet S(B);
    for (auto v : nonzero_vectors(g))
      for (auto& d : even_characteristics(g)) {
        auto img = S.apply(v, coords_of_theta4(B, d));
        auto e = transvection_char_rule(v, d);
        auto target = coords_of_theta4(B, e);
        if (e == d) CHECK(img == neg(target));
        else CHECK((img == target || img == neg(target)));
        CHECK(sp_char_action(SympMatrix::transvection(v), d) == e);
      }
  }
}

TEST_CASE("g=1 tables for S and T") {
  auto B = orbit_sum_basis(1, 4);
  InducedSet S(B);
  ThetaChar t00{1, 0, 0}, t01{1, 0, 1}, t10{1, 1, 0};
  auto c = [&](const ThetaChar& d) { return coords_of_theta4(B, d); };
  SympVec s = SympVec::make(1, 1, 1), t = SympVec::make(1, 1, 0);
  CHECK(S.apply(s, c(t00)) == neg(c(t00)));
  CHECK(S.apply(s, c(t01)) == neg(c(t10)));
  CHECK(S.apply(s, c(t10)) == neg(c(t01)));
  CHECK(S.apply(t, c(t00)) == c(t01));
  CHECK(S.apply(t, c(t01)) == c(t00));
  CHECK(S.apply(t, c(t10)) == neg(c(t10)));
  // Jacobi: theta00^4 = theta01^4 + theta10^4 in coordinates
  auto sum = c(t01);
  for (size_t i = 0; i < sum.size(); ++i) sum[i] += c(t10)[i];
  CHECK(sum == c(t00));
}

TEST_CASE("Coxeter relations as matrix identities") {
  for (auto [g, d] : {std::pair{1, 4}, {1, 8}, {1, 12}, {2, 4}, {2, 8}, {2, 12}, {3, 4}}) {
    auto B = orbit_sum_basis(g, d);
    InducedSet S(B);
    auto r = coxeter_relations(S);
    CHECK(r.ok());
    CHECK(r.involutions == nonzero_vectors(g).size());
  }
  auto B = orbit_sum_basis(3, 8);
  InducedSet S(B);
  auto r = coxeter_relations(S, 60);
  CHECK(r.ok());
  CHECK(r.braid3 + r.commute2 == 60);
}

TEST_CASE("word_apply matches induced matrices") {
  auto B = orbit_sum_basis(2, 8);
  InducedSet S(B);
  std::mt19937 rng(8);
  auto vs = nonzero_vectors(2);
  for (int it = 0; it < 5; ++it) {
    TransvectionWord w{2, {}};
    for (int k = 0; k < 3; ++k) w.letters.push_back(vs[rng() % vs.size()]);
    auto p = B.element(rng() % B.size());
    CHECK(coords_q(B, word_apply(w, p)) == S.apply(w, coords_q(B, p)));
  }
  CHECK(word_apply(TransvectionWord{2, {}}, B.element(0)) == to_q(B.element(0)));
  CHECK_THROWS(word_apply(TransvectionWord{1, {vs[0]}}, PolyZ::variable(2, 0).pow(4)));
}

TEST_CASE("two words for the same element agree") {
  auto B = orbit_sum_basis(1, 8);
  InducedSet S(B);
  auto a = SympVec::make(1, 1, 0), b = SympVec::make(1, 0, 1);
  // aba = bab
  TransvectionWord w1{1, {a, b, a}}, w2{1, {b, a, b}};
  CHECK(w1.matrix() == w2.matrix());
  auto p = coords_q(B, theta_power({1, 0, 0}, 8));
  CHECK(S.apply(w1, p) == S.apply(w2, p));
}

TEST_CASE("Gamma(2) reduction map") {
  auto gen = [](int64_t b, int64_t c) {
    IntMatrix m = IntMatrix::identity(2);
    m.at(0, 1) = b;
    m.at(1, 0) = c;
    return m;
  };
  CHECK(phi_tilde(gen(2, 0)) == std::pair<uint32_t, uint32_t>{0, 1});
  CHECK(phi_tilde(gen(0, 2)) == std::pair<uint32_t, uint32_t>{1, 0});
  std::mt19937 rng(20);
  std::vector<IntMatrix> gens{gen(2, 0), gen(-2, 0), gen(0, 2), gen(0, -2)};
  for (int it = 0; it < 20; ++it) {
    IntMatrix a = IntMatrix::identity(2), b = IntMatrix::identity(2);
    for (int k = 0; k < 4; ++k) a = a * gens[rng() % 4];
    for (int k = 0; k < 4; ++k) b = b * gens[rng() % 4];
    auto [xa, ua] = phi_tilde(a);
    auto [xb, ub] = phi_tilde(b);
    auto [xab, uab] = phi_tilde(a * b);
    CHECK(xab == (xa ^ xb));
    CHECK(uab == (ua ^ ub));
  }
  CHECK(phi_tilde(gen(4, 0)) == std::pair<uint32_t, uint32_t>{0, 0});
  CHECK_THROWS(phi_tilde(gen(1, 0)));
}
