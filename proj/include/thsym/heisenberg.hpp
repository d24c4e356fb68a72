#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "thsym/poly.hpp"

namespace thsym {

// (i^s, x, u) acting by X_sigma -> i^s (-1)^{(x+sigma).u} X_{sigma+x}
struct HeisenbergElement {
  int g = 1;
  int s = 0;
  uint32_t x = 0, u = 0;

  HeisenbergElement operator*(const HeisenbergElement& o) const {
    if (g != o.g) throw std::invalid_argument("genus mismatch");
    return {g, (s + o.s + 2 * parity(x & o.u)) % 4, x ^ o.x, u ^ o.u};
  }
  bool operator==(const HeisenbergElement&) const = default;
};

// Image of a monomial (over 2^g variables): scalar exponent k (i^k) and key.
inline std::pair<int, uint64_t> schrodinger_act(const HeisenbergElement& h, uint64_t key) {
  MonoLayout lay(1 << h.g);
  int k = 0;
  uint64_t out = 0;
  uint32_t deg = 0;
  for (uint32_t sg = 0; sg < uint32_t(lay.nvars); ++sg) {
    uint32_t e = lay.exp(key, sg);
    if (!e) continue;
    deg += e;
    if (parity((h.x ^ sg) & h.u)) k += 2 * int(e);
    out |= uint64_t(e) << lay.shift(sg ^ h.x);
  }
  k += h.s * int(deg);
  return {((k % 4) + 4) % 4, out};
}

template <class R>
SparsePoly<R> schrodinger_act(const HeisenbergElement& h, const SparsePoly<R>& p) {
  if (p.nvars != (1 << h.g)) throw std::invalid_argument("genus mismatch");
  SparsePoly<R> r(p.nvars);
  for (auto& [key, c] : p.terms) {
    auto [k, out] = schrodinger_act(h, key);
    R z = c;
    if (k == 2) z = -c;
    else if (k == 1) z = c * R(GaussInt(0, 1));
    else if (k == 3) z = c * R(GaussInt(0, -1));
    r.add_term(out, z);
  }
  return r;
}

inline std::vector<HeisenbergElement> heisenberg_generators(int g) {
  std::vector<HeisenbergElement> out{{g, 1, 0, 0}};
  for (int i = 0; i < g; ++i) {
    out.push_back({g, 0, 1u << i, 0});
    out.push_back({g, 0, 0, 1u << i});
  }
  return out;
}

template <class R>
bool is_invariant(const SparsePoly<R>& p) {
  if (!p.is_homogeneous()) throw std::invalid_argument("is_invariant expects a homogeneous polynomial");
  int g = std::countr_zero(uint32_t(p.nvars));
  if ((1 << g) != p.nvars) throw std::invalid_argument("not a polynomial in theta variables");
  for (auto& h : heisenberg_generators(g))
    if (schrodinger_act(h, p) != p) return false;
  return true;
}

inline mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// 2^{-2g} ( C(2^g+4n-1, 4n) + (2^{2g}-1) C(2^{g-1}+2n-1, 2n) )
inline mpz_class invariant_dimension(int g, int n) {
  if (g < 1 || n < 1) throw std::invalid_argument("invariant_dimension needs g, n >= 1");
  unsigned long N = 1ul << g;
  mpz_class t = binomial(N + 4 * n - 1, 4 * n) +
                mpz_class((1ul << (2 * g)) - 1) * binomial(N / 2 + 2 * n - 1, 2 * n);
  mpz_class d = mpz_class(1) << (2 * g);
  if (!mpz_divisible_p(t.get_mpz_t(), d.get_mpz_t())) throw std::logic_error("dimension formula not integral");
  return t / d;
}

// Capacity table: (g <= 3, degree <= 24) and (g = 4, degree <= 8).
inline bool within_capacity(int g, int degree) {
  if (g >= 1 && g <= 3) return degree <= 24;
  if (g == 4) return degree <= 8;
  return false;
}

inline uint64_t translate_key(const MonoLayout& lay, uint64_t key, uint32_t x) {
  uint64_t out = 0;
  for (uint32_t s = 0; s < uint32_t(lay.nvars); ++s) {
    uint64_t e = lay.exp(key, s);
    if (e) out |= e << lay.shift(s ^ x);
  }
  return out;
}

struct OrbitSumBasis {
  int g = 1;
  int degree = 4;
  std::vector<uint64_t> reps;                  // sorted ascending
  std::vector<uint32_t> member_start;          // CSR offsets into members
  std::vector<uint64_t> members;               // distinct translates per orbit
  std::unordered_map<uint64_t, uint32_t> index;  // monomial -> orbit id

  size_t size() const { return reps.size(); }
  int nvars() const { return 1 << g; }
  MonoLayout layout() const { return MonoLayout(nvars()); }

  std::pair<const uint64_t*, const uint64_t*> orbit(size_t j) const {
    return {members.data() + member_start[j], members.data() + member_start[j + 1]};
  }
  PolyZ element(size_t j) const {
    PolyZ p(nvars());
    auto [b, e] = orbit(j);
    for (auto it = b; it != e; ++it) p.add_term(*it, GaussInt(1));
    return p;
  }
  int64_t find(uint64_t key) const {
    auto it = index.find(key);
    return it == index.end() ? -1 : int64_t(it->second);
  }
  uint64_t hash() const {
    uint64_t h = fnv1a(std::to_string(g) + ":" + std::to_string(degree));
    for (uint64_t r : reps) h = fnv1a(std::to_string(r) + ",", h);
    return h;
  }
};

inline OrbitSumBasis orbit_sum_basis(int g, int degree, bool unsafe_override = false) {
  if (degree <= 0 || degree % 4) throw std::invalid_argument("degree must be a positive multiple of 4");
  if (!unsafe_override && !within_capacity(g, degree))
    throw capacity_error("(g, degree) outside the capacity table");
  OrbitSumBasis B;
  B.g = g;
  B.degree = degree;
  MonoLayout lay(1 << g);
  if (uint32_t(degree) > lay.max_exp()) throw capacity_error("degree exceeds packed field width");
  int N = 1 << g;
  std::vector<uint32_t> e(N);
  std::vector<uint64_t> reps;
  // enumerate exponent vectors with XOR of odd-exponent indices equal to 0
  auto rec = [&](auto&& self, int i, int left, uint32_t acc) -> void {
    if (i == N - 1) {
      e[i] = left;
      if ((acc ^ ((left & 1) ? uint32_t(i) : 0u)) != 0) return;
      uint64_t key = 0;
      for (int s = 0; s < N; ++s) key |= uint64_t(e[s]) << lay.shift(s);
      for (uint32_t x = 1; x < uint32_t(N); ++x)
        if (translate_key(lay, key, x) < key) return;
      reps.push_back(key);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[i] = k;
      self(self, i + 1, left - k, acc ^ ((k & 1) ? uint32_t(i) : 0u));
    }
  };
  rec(rec, 0, degree, 0);
  std::sort(reps.begin(), reps.end());
  B.reps = reps;
  B.member_start.push_back(0);
  for (size_t j = 0; j < reps.size(); ++j) {
    std::vector<uint64_t> orb;
    for (uint32_t x = 0; x < uint32_t(N); ++x) orb.push_back(translate_key(lay, reps[j], x));
    std::sort(orb.begin(), orb.end());
    orb.erase(std::unique(orb.begin(), orb.end()), orb.end());
    for (uint64_t m : orb) {
      B.members.push_back(m);
      B.index.emplace(m, uint32_t(j));
    }
    B.member_start.push_back(uint32_t(B.members.size()));
  }
  return B;
}

// Coordinates of an invariant polynomial; throws if it is not in the span.
template <class R>
std::vector<R> to_coordinates(const OrbitSumBasis& B, const SparsePoly<R>& p) {
  if (p.nvars != B.nvars()) throw std::invalid_argument("genus mismatch");
  std::vector<R> c(B.size(), R(0));
  for (auto& [k, v] : p.terms) {
    int64_t j = B.find(k);
    if (j < 0) throw std::domain_error("polynomial not in the span of the orbit-sum basis");
    if (k == B.reps[j]) c[j] = v;
  }
  for (auto& [k, v] : p.terms)
    if (!(c[B.find(k)] == v)) throw std::domain_error("polynomial not in the span of the orbit-sum basis");
  size_t count = 0;
  for (size_t j = 0; j < B.size(); ++j)
    if (!c[j].is_zero()) count += B.member_start[j + 1] - B.member_start[j];
  if (count != p.terms.size()) throw std::domain_error("polynomial not in the span of the orbit-sum basis");
  return c;
}

template <class R>
SparsePoly<R> from_coordinates(const OrbitSumBasis& B, const std::vector<R>& c) {
  SparsePoly<R> p(B.nvars());
  for (size_t j = 0; j < B.size(); ++j) {
    if (c[j].is_zero()) continue;
    auto [b, e] = B.orbit(j);
    for (auto it = b; it != e; ++it) p.terms.emplace(*it, c[j]);
  }
  return p;
}

}  // namespace thsym
