#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <unordered_map>
#include <stdexcept>
#include <string>
#include <vector>

#include "thsym/heisenberg.hpp"
#include "thsym/linalg.hpp"
#include "thsym/poly.hpp"
#include "thsym/symplectic.hpp"

namespace thsym {

// Heisenberg coordinates of a symplectic vector: x = v'', u = v'.
inline uint32_t heis_x(SympVec v) { return v.lo(); }
inline uint32_t heis_u(SympVec v) { return v.hi(); }
inline SympVec from_heis(int g, uint32_t x, uint32_t u) { return SympVec::make(g, u, x); }

// ------------------------------------------------------------ 2^g x 2^g lifts

struct LiftMatrix {
  int g = 1;
  std::vector<std::vector<GaussRational>> m;  // m[row][col]
  std::string label;

  int n() const { return 1 << g; }
  static LiftMatrix zero(int g, std::string label = "") {
    LiftMatrix r;
    r.g = g;
    r.m.assign(1 << g, std::vector<GaussRational>(1 << g));
    r.label = std::move(label);
    return r;
  }
  static LiftMatrix identity(int g) {
    auto r = zero(g, "I");
    for (int i = 0; i < r.n(); ++i) r.m[i][i] = GaussRational(1);
    return r;
  }
  LiftMatrix operator*(const LiftMatrix& o) const {
    auto r = zero(g, label + "*" + o.label);
    for (int i = 0; i < n(); ++i)
      for (int k = 0; k < n(); ++k) {
        if (m[i][k].is_zero()) continue;
        for (int j = 0; j < n(); ++j)
          if (!o.m[k][j].is_zero()) r.m[i][j] += m[i][k] * o.m[k][j];
      }
    return r;
  }
  LiftMatrix operator+(const LiftMatrix& o) const {
    auto r = *this;
    for (int i = 0; i < n(); ++i)
      for (int j = 0; j < n(); ++j) r.m[i][j] += o.m[i][j];
    return r;
  }
  LiftMatrix scaled(const GaussRational& s) const {
    auto r = *this;
    for (auto& row : r.m)
      for (auto& x : row) x = x * s;
    return r;
  }
  bool same_entries(const LiftMatrix& o) const { return m == o.m; }
  // c with this = c * o, if any
  std::optional<GaussRational> ratio_to(const LiftMatrix& o) const {
    std::optional<GaussRational> c;
    for (int i = 0; i < n(); ++i)
      for (int j = 0; j < n(); ++j) {
        if (o.m[i][j].is_zero()) {
          if (!m[i][j].is_zero()) return std::nullopt;
          continue;
        }
        GaussRational r = m[i][j] / o.m[i][j];
        if (c && *c != r) return std::nullopt;
        c = r;
      }
    return c;
  }
};

// U_v = action of (1, x, u) when x.u = 1 and of (i, x, u) when x.u = 0
inline LiftMatrix u_operator(int g, uint32_t x, uint32_t u) {
  if (x == 0 && u == 0) throw std::invalid_argument("U_v needs v != 0");
  auto r = LiftMatrix::zero(g, "U(" + std::to_string(x) + "," + std::to_string(u) + ")");
  int s = parity(x & u) ? 0 : 1;
  for (uint32_t sg = 0; sg < uint32_t(r.n()); ++sg)
    r.m[sg ^ x][sg] = GaussRational(GaussInt::unit(s + 2 * parity((x ^ sg) & u)));
  return r;
}
inline LiftMatrix u_operator(SympVec v) { return u_operator(v.g, heis_x(v), heis_u(v)); }

inline const GaussRational& lift_k() {
  static const GaussRational k(mpq_class(1, 2), mpq_class(-1, 2));
  return k;
}

// t~_v = (1-i)/2 (U_v + I)
inline LiftMatrix transvection_lift(SympVec v) {
  auto r = (u_operator(v) + LiftMatrix::identity(v.g)).scaled(lift_k());
  r.label = "t(" + std::to_string(v.bits) + ")";
  return r;
}

// F[sigma][rho] = (-1)^{rho.sigma}
inline LiftMatrix fourier_transform(int g) {
  auto r = LiftMatrix::zero(g, "F");
  for (int s = 0; s < r.n(); ++s)
    for (int p = 0; p < r.n(); ++p) r.m[s][p] = GaussRational(parity(uint32_t(s & p)) ? -1 : 1);
  return r;
}

// Substitution X_sigma -> sum_rho L[rho][sigma] X_rho.
template <class R>
SparsePoly<R> substitute(const LiftMatrix& L, const SparsePoly<R>& p) {
  if (p.nvars != L.n()) throw std::invalid_argument("substitute: ring mismatch");
  std::vector<SparsePoly<R>> img;
  for (int s = 0; s < L.n(); ++s) {
    SparsePoly<R> t(L.n());
    for (int r = 0; r < L.n(); ++r)
      if (!L.m[r][s].is_zero()) t.add_term(MonoLayout(L.n()).unit(r), R(L.m[r][s]));
    img.push_back(t);
  }
  auto lay = p.layout();
  SparsePoly<R> out(p.nvars);
  for (auto& [k, c] : p.terms) {
    SparsePoly<R> t = SparsePoly<R>::constant(p.nvars, c);
    for (int s = 0; s < p.nvars; ++s)
      for (uint32_t e = lay.exp(k, s); e; --e) t = t * img[s];
    out += t;
  }
  return out;
}

// ------------------------------------------------------------ induced matrices

// Exact matrix on an orbit-sum basis: entries are scale * ints.
struct RepMatrix {
  size_t n = 0;
  GaussRational scale = GaussRational(1);
  std::vector<std::vector<std::pair<uint32_t, GaussInt>>> cols;  // sorted by row
  std::string label;

  GaussInt at(size_t i, size_t j) const {
    for (auto& [r, c] : cols[j])
      if (r == i) return c;
    return GaussInt(0);
  }
  size_t nnz() const {
    size_t s = 0;
    for (auto& c : cols) s += c.size();
    return s;
  }
  // y = ints * x (no scale)
  template <class V>
  std::vector<V> apply_int(const std::vector<V>& x) const {
    std::vector<V> y(n);
    for (size_t j = 0; j < n; ++j) {
      if (x[j].is_zero()) continue;
      for (auto& [r, c] : cols[j]) y[r] += V(c) * x[j];
    }
    return y;
  }
  std::vector<GaussRational> apply(const std::vector<GaussRational>& x) const {
    auto y = apply_int(x);
    if (scale != GaussRational(1))
      for (auto& v : y)
        if (!v.is_zero()) v = v * scale;
    return y;
  }
  bool same_ints(const RepMatrix& o) const { return n == o.n && cols == o.cols; }
};

// Two-variable factor (c_a Y + X)^{e1} (c_b X + Y)^{e2} as a vector indexed by
// the exponent of X.
inline std::vector<GaussInt> pair_factor(GaussInt ca, uint32_t e1, GaussInt cb, uint32_t e2) {
  std::vector<GaussInt> p{GaussInt(1)};
  for (uint32_t t = 0; t < e1; ++t) {
    std::vector<GaussInt> q(p.size() + 1);
    for (size_t a = 0; a < p.size(); ++a) {
      q[a + 1] += p[a];
      q[a] += ca * p[a];
    }
    p.swap(q);
  }
  for (uint32_t t = 0; t < e2; ++t) {
    std::vector<GaussInt> q(p.size() + 1);
    for (size_t a = 0; a < p.size(); ++a) {
      q[a + 1] += cb * p[a];
      q[a] += p[a];
    }
    p.swap(q);
  }
  return p;
}

// Matrix of t~_v acting by substitution on the invariant space spanned by B.
// The image of orbit sum j is |orbit j| * P(subst(rep_j)) with P the
// Heisenberg averaging projector, which commutes with t~_v in degree 4n.
inline RepMatrix induced_on_invariants(SympVec v, const OrbitSumBasis& B) {
  if (B.degree % 4) throw std::invalid_argument("basis degree must be divisible by 4");
  if (v.g != B.g || v.bits == 0) throw std::invalid_argument("bad transvection vector");
  int g = B.g, N = 1 << g, n4 = B.degree / 4;
  uint32_t x = heis_x(v), u = heis_u(v);
  int s = parity(x & u) ? 0 : 1;
  std::vector<GaussInt> c(N);
  for (uint32_t sg = 0; sg < uint32_t(N); ++sg) c[sg] = GaussInt::unit(s + 2 * parity((x ^ sg) & u));
  MonoLayout lay(N);
  RepMatrix M;
  M.n = B.size();
  M.cols.resize(M.n);
  M.label = "t" + std::to_string(v.bits);
  // k^{4n} = (-1/4)^n
  M.scale = GaussRational(mpq_class(n4 % 2 ? -1 : 1, 1) / mpq_class(mpz_class(1) << (2 * n4)));
  std::vector<uint32_t> lows;
  for (uint32_t sg = 0; sg < uint32_t(N); ++sg)
    if (x == 0 || sg < (sg ^ x)) lows.push_back(sg);
  std::vector<std::pair<int64_t, GaussInt>> acc;
  std::vector<int64_t> orbsize(M.n);
  for (size_t j = 0; j < M.n; ++j) orbsize[j] = B.member_start[j + 1] - B.member_start[j];
  for (size_t j = 0; j < M.n; ++j) {
    uint64_t key = B.reps[j];
    std::unordered_map<uint32_t, GaussInt> col;
    if (x == 0) {
      GaussInt z(1);
      for (uint32_t sg = 0; sg < uint32_t(N); ++sg)
        for (uint32_t e = lay.exp(key, sg); e; --e) z *= (c[sg] + GaussInt(1));
      col[uint32_t(j)] = z;  // diagonal: (1 + c)^e, scale absorbs k
    } else {
      // expand pair by pair
      std::vector<std::pair<uint64_t, GaussInt>> terms{{0, GaussInt(1)}};
      for (uint32_t a : lows) {
        uint32_t b = a ^ x;
        uint32_t e1 = lay.exp(key, a), e2 = lay.exp(key, b);
        if (e1 + e2 == 0) continue;
        // X_a -> k (c_a X_b + X_a), X_b -> k (c_b X_a + X_b)
        auto f = pair_factor(c[a], e1, c[b], e2);
        uint32_t d = e1 + e2;
        std::vector<std::pair<uint64_t, GaussInt>> next;
        next.reserve(terms.size() * f.size());
        for (auto& [tk, tc] : terms)
          for (uint32_t ea = 0; ea <= d; ++ea) {
            if (f[ea].is_zero()) continue;
            uint64_t nk = tk + uint64_t(ea) * lay.unit(a) + uint64_t(d - ea) * lay.unit(b);
            next.emplace_back(nk, tc * f[ea]);
          }
        terms.swap(next);
      }
      for (auto& [tk, tc] : terms) {
        int64_t i = B.find(tk);
        if (i < 0) continue;  // killed by the projector
        col[uint32_t(i)] += tc;
      }
    }
    auto& out = M.cols[j];
    for (auto& [i, z] : col) {
      if (z.is_zero()) continue;
      GaussInt t = z * GaussInt(orbsize[j]);
      if (t.re % orbsize[i] || t.im % orbsize[i]) throw std::logic_error("induced matrix entry not integral");
      out.emplace_back(i, GaussInt(t.re / orbsize[i], t.im / orbsize[i]));
    }
    std::sort(out.begin(), out.end(), [](auto& p, auto& q) { return p.first < q.first; });
  }
  return M;
}

// Same matrix by brute force substitution of every basis element.
inline RepMatrix induced_bruteforce(SympVec v, const OrbitSumBasis& B) {
  auto L = transvection_lift(v);
  int n4 = B.degree / 4;
  GaussRational scale(mpq_class(n4 % 2 ? -1 : 1, 1) / mpq_class(mpz_class(1) << (2 * n4)));
  RepMatrix M;
  M.n = B.size();
  M.scale = scale;
  M.cols.resize(M.n);
  for (size_t j = 0; j < M.n; ++j) {
    auto img = substitute(L, to_q(B.element(j)));
    auto c = to_coordinates(B, img);
    for (size_t i = 0; i < M.n; ++i)
      if (!c[i].is_zero()) M.cols[j].emplace_back(uint32_t(i), (c[i] / scale).to_int());
  }
  return M;
}

// ------------------------------------------------------------ words

struct TransvectionWord {
  int g = 1;
  std::vector<SympVec> letters;  // rho(w) = rho(l_0) ... rho(l_{k-1})

  SympMatrix matrix() const {
    auto m = SympMatrix::identity(g);
    for (auto& v : letters) m = m * SympMatrix::transvection(v);
    return m;
  }
  TransvectionWord then_left(SympVec v) const {  // t_v * w
    TransvectionWord r{g, {v}};
    r.letters.insert(r.letters.end(), letters.begin(), letters.end());
    return r;
  }
};

// Cache of induced matrices for the 2^{2g}-1 transvections on one basis.
struct InducedSet {
  const OrbitSumBasis* basis = nullptr;
  std::vector<RepMatrix> mats;  // index = v.bits - 1

  explicit InducedSet(const OrbitSumBasis& B) : basis(&B) {
    for (auto v : nonzero_vectors(B.g)) mats.push_back(induced_on_invariants(v, B));
  }
  const RepMatrix& of(SympVec v) const { return mats.at(v.bits - 1); }
  std::vector<GaussRational> apply(SympVec v, const std::vector<GaussRational>& x) const {
    return of(v).apply(x);
  }
  std::vector<GaussRational> apply(const TransvectionWord& w, std::vector<GaussRational> x) const {
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) x = of(*it).apply(x);
    return x;
  }
};

template <class R>
std::vector<GaussRational> coords_q(const OrbitSumBasis& B, const SparsePoly<R>& p) {
  auto c = to_coordinates(B, p);
  std::vector<GaussRational> out;
  out.reserve(c.size());
  for (auto& z : c) out.emplace_back(GaussRational(z));
  return out;
}

inline PolyQ poly_of(const OrbitSumBasis& B, const std::vector<GaussRational>& c) {
  return from_coordinates(B, c);
}

inline PolyQ to_q_any(const PolyZ& p) { return to_q(p); }
inline PolyQ to_q_any(const PolyQ& p) { return p; }

// rho(w) p for an invariant polynomial, by exact substitution of the lifts.
template <class R>
PolyQ word_apply(const TransvectionWord& w, const SparsePoly<R>& p) {
  if (!is_invariant(p)) throw std::invalid_argument("word_apply needs a Heisenberg invariant");
  PolyQ q = to_q_any(p);
  if (q.is_zero() || w.letters.empty()) return q;
  if (q.degree() % 4) throw std::invalid_argument("degree must be divisible by 4");
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) q = substitute(transvection_lift(*it), q);
  return q;
}

// ------------------------------------------------------------ matrix relations

inline std::vector<GaussRational> unit_vector(size_t n, size_t j) {
  std::vector<GaussRational> e(n);
  e[j] = GaussRational(1);
  return e;
}

// Integer product of RepMatrices on each unit vector, scale applied once at
// the end; true if the word acts as identity on every basis vector.
inline bool word_is_identity(const InducedSet& S, const TransvectionWord& w) {
  size_t n = S.basis->size();
  GaussRational scale(1);
  for (auto v : w.letters) scale = scale * S.of(v).scale;
  for (size_t j = 0; j < n; ++j) {
    std::vector<GaussBig> x(n);
    x[j] = GaussBig(1L);
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) x = S.of(*it).apply_int(x);
    for (size_t i = 0; i < n; ++i) {
      if (i != j && !x[i].is_zero()) return false;
    }
    if (GaussRational(mpq_class(x[j].re), mpq_class(x[j].im)) * scale != GaussRational(1)) return false;
  }
  return true;
}

struct RelationReport {
  size_t involutions = 0, braid3 = 0, commute2 = 0, failures = 0;
  bool ok() const { return failures == 0; }
};

// t_v^2 = 1 for all v; (t_v t_w)^3 = 1 if E(v,w)=1, (t_v t_w)^2 = 1 otherwise.
// pairs == 0 means all pairs.
inline RelationReport coxeter_relations(const InducedSet& S, size_t pairs = 0, uint64_t seed = 1) {
  int g = S.basis->g;
  auto vs = nonzero_vectors(g);
  RelationReport rep;
  for (auto v : vs) {
    if (word_is_identity(S, {g, {v, v}})) ++rep.involutions;
    else ++rep.failures;
  }
  std::vector<std::pair<SympVec, SympVec>> todo;
  for (size_t a = 0; a < vs.size(); ++a)
    for (size_t b = a + 1; b < vs.size(); ++b) todo.push_back({vs[a], vs[b]});
  if (pairs && pairs < todo.size()) {
    std::mt19937_64 rng(seed);
    std::shuffle(todo.begin(), todo.end(), rng);
    todo.resize(pairs);
  }
  for (auto& [v, w] : todo) {
    bool braid = symplectic_form(v, w) == 1;
    TransvectionWord word{g, {}};
    for (int k = 0; k < (braid ? 3 : 2); ++k) {
      word.letters.push_back(v);
      word.letters.push_back(w);
    }
    if (word_is_identity(S, word)) ++(braid ? rep.braid3 : rep.commute2);
    else ++rep.failures;
  }
  return rep;
}

// ------------------------------------------------------------ Gamma(2) vs Heisenberg

// phi~(I + 2S) = (diag C', diag B') for a 2g x 2g integer matrix = I mod 2
struct IntMatrix {
  int n = 2;
  std::vector<int64_t> a;
  int64_t at(int i, int j) const { return a[i * n + j]; }
  int64_t& at(int i, int j) { return a[i * n + j]; }
  static IntMatrix identity(int n) {
    IntMatrix m{n, std::vector<int64_t>(n * n, 0)};
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  IntMatrix operator*(const IntMatrix& o) const {
    IntMatrix r{n, std::vector<int64_t>(n * n, 0)};
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) r.at(i, j) += at(i, k) * o.at(k, j);
    return r;
  }
};

inline std::pair<uint32_t, uint32_t> phi_tilde(const IntMatrix& m) {
  int g = m.n / 2;
  uint32_t x = 0, u = 0;
  auto half = [](int64_t t) { return int(((t / 2) % 2 + 2) % 2); };
  for (int k = 0; k < g; ++k) {
    for (int i = 0; i < m.n; ++i)
      for (int j = 0; j < m.n; ++j)
        if (((m.at(i, j) - (i == j)) % 2) != 0) throw std::invalid_argument("matrix is not I mod 2");
    if (half(m.at(g + k, k))) x |= 1u << (g - 1 - k);
    if (half(m.at(k, g + k))) u |= 1u << (g - 1 - k);
  }
  return {x, u};
}

}  // namespace thsym
