#include <catch_amalgamated.hpp>

#include "thsym/forms.hpp"

using namespace thsym;

namespace {

FormContext& ctx() {
  static FormContext c;
  return c;
}

const LagrangianOrbit& orbit() {
  static LagrangianOrbit O = lagrangian_orbit(ctx());
  return O;
}

GaussRational q(long n, long d = 1) { return GaussRational(mpq_class(n, d)); }

}  // namespace

TEST_CASE("eta^12 at genus one") {
  auto e = eta12();
  CHECK(is_invariant(e));
  CHECK(e.degree() == 12);
  const auto& S = ctx().rho(1, 12);
  auto c = coords_q(ctx().basis(1, 12), e);
  for (auto v : nonzero_vectors(1)) CHECK(S.apply(v, c) == negated(c));
}

TEST_CASE("Lagrangian orbit") {
  const auto& O = orbit();
  CHECK(O.size() == 135);
  CHECK(O.revisits > 0);
  std::vector<QVec> all;
  for (auto& [l, c] : O.coords) all.push_back(c);
  CHECK(exact_rank(all) == 135);
  // a Lagrangian lies on exactly eight even quadrics
  CHECK(quadrics_containing(lagrangian_l0(3)).size() == 8);
}

TEST_CASE("r relation holds modulo F16") {
  auto r = r_squares();
  auto lhs = (r.r1 + r.r2 - r.r3).pow(2) - (r.r1 * r.r2).scaled(GaussInt(4));
  CHECK(to_q(lhs) == to_q(f16_polynomial()).scaled(q(1, 336)));
  CHECK(!lhs.is_zero());
}

TEST_CASE("P[0] and G") {
  auto& c = ctx();
  const auto& O = orbit();
  auto P0 = p0_antiinvariant(O);
  CHECK(!P0.poly.is_zero());
  auto p = coords_q(c.basis(3, 8), P0.poly);
  for (auto& gen : oplus_generators(c, 3)) CHECK(c.rho(3, 8).apply(gen.word, p) == negated(p));

  auto T = theta_pair_orbit(c, O);
  CHECK(T.theta4.size() == 36);
  std::vector<QVec> ps;
  for (auto& [d, v] : T.pform) ps.push_back(v);
  CHECK(exact_rank(ps) == 15);

  auto G = g_invariant(c, T);
  CHECK(!G.poly.is_zero());
  CHECK(G.weight == 6);
  auto gc = coords_q(c.basis(3, 12), G.poly);
  for (auto v : nonzero_vectors(3)) CHECK(c.rho(3, 12).apply(v, gc) == gc);
}

TEST_CASE("G[Delta] is equivariant") {
  auto& c = ctx();
  const auto& O = orbit();
  auto v = nonzero_vectors(3)[5];
  ThetaChar z{3, 0, 0};
  auto img = c.rho(3, 16).apply(v, coords_q(c.basis(3, 16), g_bracket(O, z).poly));
  auto e = coords_q(c.basis(3, 16), g_bracket(O, transvection_char_rule(v, z)).poly);
  CHECK((img == e || img == negated(e)));
}

TEST_CASE("sextets") {
  auto r = sextet_report(ctx());
  CHECK(r.count == 336);
  CHECK(r.rank == 105);
  CHECK(r.sym3_rank == 680);
  CHECK(r.intersection_zero());
  CHECK(r.signed_permutation_failures == 0);
}

TEST_CASE("cubic and quartic products") {
  auto& c = ctx();
  CHECK(exact_rank(sym_power_coords(c, 2)) == 120);
  auto r = sym4_report(c);
  CHECK(r.products == 3060);
  CHECK(r.rank == 3033);
  CHECK(r.f16_in_span());
  CHECK(r.image_mod_f16() == 3032);
}

TEST_CASE("cusp check") {
  auto& c = ctx();
  auto all = asyzygous_sextets();
  CHECK(cusp_check(c, to_q(sextet_form(all[0]))) == true);
  CHECK(cusp_check(c, theta_q({3, 0, 0}, 12)) == false);
  CHECK(!cusp_check(c, PolyQ(8)).has_value());
}

TEST_CASE("F12") {
  auto r = miyawaki_f12(ctx());
  CHECK(r.invariant());
  CHECK(r.cusp());
  CHECK(r.specialization_nonmultiple);
  CHECK(r.specialized_degree > 0);
}

TEST_CASE("univariate helpers") {
  UniPoly a{q(-1), q(0), q(1)}, b{q(1), q(1)};
  CHECK(uni_rem(a, b).empty());
  CHECK(uni_mul(b, b) == UniPoly{q(1), q(2), q(1)});
  CHECK_THROWS(uni_rem(a, {}));
}

TEST_CASE("O+ and epsilon subspaces") {
  auto& c = ctx();
  ThetaChar z2{2, 0, 0}, z3{3, 0, 0};
  std::vector<PolyQ> g2{sum_theta_q(2, 16), theta_q(z2, 16), theta_q(z2, 4) * sum_theta_q(2, 12),
                        theta_q(z2, 8) * sum_theta_q(2, 8)};
  auto r2 = oplus_subspace(c, 2, 16, 1, g2);
  CHECK(r2.generators == 7);
  CHECK(r2.exact());
  CHECK(r2.kernel_dim_modp == 4);

  std::vector<PolyQ> w6{theta_q(z3, 12), sum_theta_q(3, 12), theta_q(z3, 4) * sum_theta_q(3, 8)};
  auto r6 = oplus_subspace(c, 3, 12, -1, w6);
  CHECK(r6.exact());
  CHECK(r6.kernel_dim_modp == 3);

  std::vector<PolyQ> w8;
  for (auto& p : w6) w8.push_back(theta_q(z3, 4) * p);
  w8.push_back(sum_theta_q(3, 16));
  w8.push_back(g_bracket(orbit(), z3).poly);
  w8.push_back(to_q(f16_polynomial()));
  auto r8 = oplus_subspace(c, 3, 16, 1, w8);
  CHECK(r8.exact());
  CHECK(r8.kernel_dim_modp == 6);
  // F16 is one of them; modular forms lose exactly that line
  CHECK(r8.kernel_dim_modp - 1 == 5);
}

TEST_CASE("Xi8 at genus two") {
  auto r = xi8_g2_solve();
  CHECK(r.kernel_dim == 1);
  REQUIRE(r.coeffs.size() == 3);
  CHECK(r.coeffs[0] == q(2, 3));
  CHECK(r.coeffs[1] == q(1, 3));
  CHECK(r.coeffs[2] == q(-1, 2));
  CHECK(r.f_restrictions_divisible);
  CHECK(r.psi_excluded);
  CHECK(r.divisible_by_theta4);
}

TEST_CASE("no Xi6 at genus three") {
  auto r = xi6_g3_nonexistence(ctx());
  CHECK(r.rank == 3);
  CHECK(r.identity_theta12);
  CHECK(r.identity_sum12);
  CHECK(r.identity_theta4_psi4);
}

TEST_CASE("Xi8 at genus three") {
  auto r = xi8_g3_solve(orbit(), xi8_g2_solve().xi);
  CHECK(r.kernel_dim == 1);
  CHECK(r.on_expected_ray({4, 4, -3, -12}));
  CHECK(!r.on_expected_ray({4, 4, 3, -12}));
  CHECK(r.psi_excluded);
  CHECK(r.ansatz_divisible);
}
