#include <catch_amalgamated.hpp>

#include <random>

#include "thsym/decomposition.hpp"

using namespace thsym;

namespace {

using Pairs = std::vector<std::pair<int64_t, int64_t>>;

SpectrumResult run(int g, int degree) {
  auto B = orbit_sum_basis(g, degree);
  auto K = casimir_matrix(B);
  return spectrum(K, candidate_lambdas(irrep_table(g)));
}

int64_t mult(const DecompositionLedger& L, const std::string& n) { return L.determined(n).value_or(-1); }

}  // namespace

TEST_CASE("irreducible tables are integral") {
  for (int g = 1; g <= 4; ++g) {
    auto t = irrep_table(g);
    for (auto& r : t) CHECK_NOTHROW(r.lambda());
    CHECK(t[0].lambda() == (int64_t(1) << (2 * g)) - 1);
  }
  // S6 dimensions sum of squares
  int64_t s = 0;
  for (auto& r : irrep_table(2)) s += r.dim * r.dim;
  CHECK(s == 720);
  s = 0;
  for (auto& r : irrep_table(1)) s += r.dim * r.dim;
  CHECK(s == 6);
}

TEST_CASE("class sum commutes with the induced matrices") {
  std::mt19937 rng(3);
  for (auto [g, d] : {std::pair{2, 8}, {3, 8}}) {
    auto B = orbit_sum_basis(g, d);
    auto K = casimir_matrix(B);
    auto vs = nonzero_vectors(g);
    for (int it = 0; it < 10; ++it) {
      auto M = induced_on_invariants(vs[rng() % vs.size()], B);
      std::vector<GaussInt> x(B.size());
      for (auto& z : x) z = GaussInt(int64_t(rng() % 7) - 3, int64_t(rng() % 5) - 2);
      CHECK(K.C.apply_int(M.apply_int(x)) == M.apply_int(K.C.apply_int(x)));
    }
  }
}

TEST_CASE("small spectra") {
  CHECK(run(1, 4).pairs == Pairs{{0, 2}});
  CHECK(run(1, 12).pairs == Pairs{{3, 1}, {0, 2}, {-3, 1}});
  CHECK(run(2, 4).pairs == Pairs{{-3, 5}});
  CHECK(run(3, 4).pairs == Pairs{{-21, 15}});
  auto s = run(3, 8);
  CHECK(s.pairs == Pairs{{63, 1}, {27, 35}, {3, 84}, {-21, 15}});
  CHECK(s.certified());
  auto L = decompose(s, irrep_table(3));
  CHECK(mult(L, "1") == 1);
  CHECK(mult(L, "35b") == 1);
  CHECK(mult(L, "84a") == 1);
  CHECK(mult(L, "15a") == 1);
}

TEST_CASE("genus two ledgers") {
  auto t = irrep_table(2);
  auto L4 = decompose(run(2, 8), t, default_side_conditions(2, 8), 2, 8);
  CHECK(L4.unresolved.empty());
  CHECK(mult(L4, "[6]") == 1);
  CHECK(mult(L4, "[42]") == 1);
  CHECK(mult(L4, "[222]") == 1);

  auto s6 = run(2, 12);
  auto bare = decompose(s6, t);
  CHECK(bare.unresolved.size() == 1);
  CHECK(bare.unresolved[0].solutions.size() == 3);
  auto L6 = decompose(s6, t, default_side_conditions(2, 12), 2, 12);
  CHECK(L6.unresolved.empty());
  CHECK(L6.accounted_dim() == 35);
  CHECK(mult(L6, "[222]") == 2);
  CHECK(mult(L6, "[21111]") == 1);

  auto L8 = decompose(run(2, 16), t, default_side_conditions(2, 16), 2, 16);
  CHECK(L8.accounted_dim() == 69);
  CHECK(mult(L8, "[6]") == 1);
  CHECK(mult(L8, "[222]") == 3);
  CHECK(mult(L8, "[42]") == 3);
  CHECK(mult(L8, "[3111]") == 1);
  CHECK(mult(L8, "[321]") == 1);
  CHECK(oplus_invariant_dims(L8).first == 4);
  // invariants do not depend on the side condition
  CHECK(oplus_invariant_dims(decompose(run(2, 16), t)).first == 4);
}

TEST_CASE("genus three weight six") {
  auto s = run(3, 12);
  CHECK(s.dim == 870);
  CHECK(s.pairs == Pairs{{63, 1}, {27, 35}, {3, 378}, {-7, 216}, {-13, 189}, {-21, 30}, {-33, 21}});
  CHECK(s.certified());
  CHECK(s.primes_agree);
  auto t = irrep_table(3);
  auto bare = decompose(s, t);
  REQUIRE(bare.unresolved.size() == 1);
  CHECK(bare.unresolved[0].lambda == 3);
  CHECK(bare.unresolved[0].solutions.size() == 2);
  auto L = decompose(s, t, default_side_conditions(3, 12), 3, 12);
  CHECK(L.unresolved.empty());
  CHECK(mult(L, "105c") == 2);
  CHECK(mult(L, "84a") == 2);
  CHECK(mult(L, "210b") == 0);
  CHECK(oplus_invariant_dims(L).second == 3);
  auto j = ledger_json(s, L);
  CHECK(j["space"]["weight"] == 6);
  CHECK(j["spectrum"][0][0] == 63);
  CHECK(j["certificates"]["annihilator"] == true);
}

TEST_CASE("incomplete candidate list is rejected") {
  auto B = orbit_sum_basis(3, 8);
  auto K = casimir_matrix(B);
  CHECK_THROWS_AS(spectrum(K, {63, 27, 3}), std::domain_error);
}
