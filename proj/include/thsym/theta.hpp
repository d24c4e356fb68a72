#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <vector>

#include "thsym/heisenberg.hpp"
#include "thsym/linalg.hpp"
#include "thsym/poly.hpp"
#include "thsym/symplectic.hpp"

namespace thsym {

// theta[a;b]^2 = sum_sigma (-1)^{sigma.b} X_sigma X_{sigma+a}
inline PolyZ theta_square_expand(const ThetaChar& d) {
  if (!d.even()) throw std::invalid_argument("theta_square_expand needs an even characteristic");
  int N = 1 << d.g;
  MonoLayout lay(N);
  PolyZ p(N);
  for (uint32_t s = 0; s < uint32_t(N); ++s)
    p.add_term(lay.unit(s) + lay.unit(s ^ d.a), GaussInt(parity(s & d.b) ? -1 : 1));
  return p;
}

// theta[a;b]^2 without the parity guard; odd characteristics give 0.
inline PolyZ theta_square_any(const ThetaChar& d) {
  if (d.even()) return theta_square_expand(d);
  PolyZ p(1 << d.g);
  MonoLayout lay(1 << d.g);
  for (uint32_t s = 0; s < uint32_t(1 << d.g); ++s)
    p.add_term(lay.unit(s) + lay.unit(s ^ d.a), GaussInt(parity(s & d.b) ? -1 : 1));
  return p;
}

// theta[Delta]^e for even e
inline PolyZ theta_power(const ThetaChar& d, unsigned e) {
  if (e % 2) throw std::invalid_argument("only even powers are polynomials in the X_sigma");
  return theta_square_expand(d).pow(e / 2);
}

// prod theta[Delta_i]^2
inline PolyZ theta_square_product(const std::vector<ThetaChar>& ds) {
  if (ds.empty()) throw std::invalid_argument("empty product");
  PolyZ p = PolyZ::constant(1 << ds[0].g, GaussInt(1));
  for (auto& d : ds) p = p * theta_square_expand(d);
  return p;
}

// prod theta[Delta_i]^2 over a list of even length; checks the
// invariance criterion sum a_i = sum b_i = 0 against is_invariant.
inline PolyZ theta_product(const std::vector<ThetaChar>& ds) {
  if (ds.size() % 2) throw std::invalid_argument("theta_product takes an even number of characteristics");
  PolyZ p = theta_square_product(ds);
  uint32_t a = 0, b = 0;
  for (auto& d : ds) {
    a ^= d.a;
    b ^= d.b;
  }
  if ((a == 0 && b == 0) != is_invariant(p)) throw std::logic_error("invariance criterion violated");
  return p;
}

// sum over even Delta of theta[Delta]^e
inline PolyZ sum_theta_power(int g, unsigned e) {
  PolyZ s(1 << g);
  for (auto& d : even_characteristics(g)) s += theta_power(d, e);
  return s;
}

inline PolyZ f16_polynomial() {
  PolyZ s8 = sum_theta_power(3, 8);
  return sum_theta_power(3, 16).scaled(GaussInt(8)) - s8 * s8;
}

// X_{s' s''} -> X'_{s'} X''_{s''}; result has 2^{g1} + 2^{g2} variables, the
// first block being the X'.
inline PolyZ restriction_split(const PolyZ& p, int g1, int g2) {
  int g = g1 + g2;
  if (g1 < 1 || g2 < 1 || p.nvars != (1 << g)) throw std::invalid_argument("invalid split");
  MonoLayout src(p.nvars);
  int n1 = 1 << g1, n2 = 1 << g2;
  MonoLayout dst(n1 + n2);
  uint32_t mask = (1u << g2) - 1;
  PolyZ r(n1 + n2);
  uint32_t max = 0;
  for (auto& [k, c] : p.terms) max = std::max(max, src.degree(k));
  if (max > dst.max_exp()) throw capacity_error("restriction exceeds packed capacity");
  for (auto& [k, c] : p.terms) {
    uint64_t out = 0;
    for (uint32_t s = 0; s < uint32_t(p.nvars); ++s) {
      uint64_t e = src.exp(k, s);
      if (!e) continue;
      out += e * dst.unit(int(s >> g2));
      out += e * dst.unit(n1 + int(s & mask));
    }
    r.add_term(out, c);
  }
  return r;
}

// Place a polynomial in 2^{g1} (left) or 2^{g2} (right) variables into the
// split ring.
inline PolyZ embed_split(const PolyZ& p, int g1, int g2, bool left) {
  int n1 = 1 << g1, n2 = 1 << g2;
  if (p.nvars != (left ? n1 : n2)) throw std::invalid_argument("embed_split: wrong ring");
  MonoLayout src(p.nvars), dst(n1 + n2);
  int off = left ? 0 : n1;
  return p.map_monomials(n1 + n2, [&](uint64_t k) {
    uint64_t out = 0;
    for (int s = 0; s < p.nvars; ++s) out += uint64_t(src.exp(k, s)) * dst.unit(off + s);
    return out;
  });
}

// X_{s'1} -> 0, X_{s'0} -> X_{s'}
inline PolyZ degeneration_last(const PolyZ& p) {
  int N = p.nvars;
  if (N < 4) throw std::invalid_argument("degeneration needs g >= 2");
  MonoLayout src(N), dst(N / 2);
  PolyZ r(N / 2);
  for (auto& [k, c] : p.terms) {
    bool zero = false;
    uint64_t out = 0;
    for (uint32_t s = 0; s < uint32_t(N) && !zero; ++s) {
      uint64_t e = src.exp(k, s);
      if (!e) continue;
      if (s & 1) zero = true;
      else out += e * dst.unit(int(s >> 1));
    }
    if (!zero) r.add_term(out, c);
  }
  return r;
}

// ------------------------------------------------------------ genus 2 quartics

inline std::array<PolyZ, 5> igusa_p() {
  auto X = [](int s) { return PolyZ::variable(4, s); };
  auto x0 = X(0), x1 = X(1), x2 = X(2), x3 = X(3);  // Theta[00], [01], [10], [11]
  auto sq = [](const PolyZ& a) { return a * a; };
  GaussInt two(2), four(4);
  return {sq(sq(x0)) + sq(sq(x1)) + sq(sq(x2)) + sq(sq(x3)),
          (sq(x0) * sq(x1) + sq(x2) * sq(x3)).scaled(two),
          (sq(x0) * sq(x2) + sq(x1) * sq(x3)).scaled(two),
          (sq(x0) * sq(x3) + sq(x1) * sq(x2)).scaled(two),
          (x0 * x1 * x2 * x3).scaled(four)};
}

// exponent tuples of degree d in 5 variables, descending lexicographic
inline std::vector<std::array<int, 5>> quintic_monomials(int d) {
  std::vector<std::array<int, 5>> out;
  std::array<int, 5> e{};
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == 4) {
      e[4] = left;
      out.push_back(e);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[i] = k;
      self(self, i + 1, left - k);
    }
  };
  rec(rec, 0, d);
  return out;
}

inline PolyZ eval_in_p(const std::array<PolyZ, 5>& p, const std::array<int, 5>& e) {
  PolyZ r = PolyZ::constant(4, GaussInt(1));
  for (int i = 0; i < 5; ++i)
    if (e[i]) r = r * p[i].pow(e[i]);
  return r;
}

struct IgusaQuartic {
  std::vector<std::array<int, 5>> monomials;
  std::vector<GaussRational> coeffs;
  size_t kernel_dim = 0;
  std::array<size_t, 4> ring_dims{};  // rank of degree-k monomials in p, k = 1..4

  PolyQ evaluate(const std::array<PolyZ, 5>& p) const {
    PolyQ s(4);
    for (size_t j = 0; j < monomials.size(); ++j)
      if (!coeffs[j].is_zero()) s += to_q(eval_in_p(p, monomials[j])).scaled(coeffs[j]);
    return s;
  }
};

inline IgusaQuartic igusa_quartic() {
  auto p = igusa_p();
  IgusaQuartic q;
  for (int d = 1; d <= 4; ++d) {
    auto B = orbit_sum_basis(2, 4 * d);
    auto mons = quintic_monomials(d);
    std::vector<std::vector<GaussRational>> rows(B.size(), std::vector<GaussRational>(mons.size()));
    for (size_t j = 0; j < mons.size(); ++j) {
      auto c = to_coordinates(B, eval_in_p(p, mons[j]));
      for (size_t i = 0; i < B.size(); ++i) rows[i][j] = GaussRational(c[i]);
    }
    q.ring_dims[d - 1] = rank_exact(rows);
    if (d == 4) {
      auto ker = kernel_exact(rows, mons.size());
      q.kernel_dim = ker.size();
      if (ker.size() != 1) throw std::logic_error("Igusa quartic kernel is not one-dimensional");
      auto v = ker[0];
      size_t lead = 0;
      while (v[lead].is_zero()) ++lead;
      GaussRational s = GaussRational(1) / v[lead];
      for (auto& x : v) x = x * s;
      q.monomials = mons;
      q.coeffs = v;
    }
  }
  return q;
}

}  // namespace thsym
