#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace thsym {

struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline int parity(uint64_t x) { return std::popcount(x) & 1; }

inline void check_genus(int g) {
  if (g < 1 || g > 4) throw std::invalid_argument("genus out of range 1..4");
}

// Vector of F2^{2g}, packed as (v' << g) | v''.  Coordinate 1 of each half
// is the most significant bit of that half.
struct SympVec {
  int g = 1;
  uint32_t bits = 0;

  uint32_t hi() const { return bits >> g; }
  uint32_t lo() const { return bits & ((1u << g) - 1); }
  static SympVec make(int g, uint32_t vp, uint32_t vpp) {
    return {g, (vp << g) | vpp};
  }
  bool operator==(const SympVec&) const = default;
  SympVec operator+(const SympVec& o) const {
    if (g != o.g) throw std::invalid_argument("genus mismatch");
    return {g, bits ^ o.bits};
  }
};

struct ThetaChar {
  int g = 1;
  uint32_t a = 0;
  uint32_t b = 0;

  bool even() const { return parity(a & b) == 0; }
  int parity_sign() const { return even() ? 1 : -1; }
  uint32_t packed() const { return (a << g) | b; }
  static ThetaChar unpack(int g, uint32_t x) {
    return {g, x >> g, x & ((1u << g) - 1)};
  }
  bool operator==(const ThetaChar&) const = default;
  bool operator<(const ThetaChar& o) const { return packed() < o.packed(); }
  std::string str() const {
    std::string s = "[";
    for (int i = g - 1; i >= 0; --i) s += char('0' + ((a >> i) & 1));
    s += ";";
    for (int i = g - 1; i >= 0; --i) s += char('0' + ((b >> i) & 1));
    return s + "]";
  }
};

inline int symplectic_form(SympVec v, SympVec w) {
  if (v.g != w.g) throw std::invalid_argument("genus mismatch");
  return parity((v.hi() & w.lo()) ^ (v.lo() & w.hi()));
}

inline int quadratic_eval(const ThetaChar& d, SympVec v) {
  if (d.g != v.g) throw std::invalid_argument("genus mismatch");
  return parity((v.hi() & v.lo()) ^ (d.a & v.hi()) ^ (d.b & v.lo()));
}

inline SympVec transvection_apply(SympVec v, SympVec w) {
  if (v.bits == 0) throw std::invalid_argument("transvection by zero vector");
  return symplectic_form(w, v) ? w + v : w;
}

inline std::vector<ThetaChar> characteristics(int g, int want_parity) {
  std::vector<ThetaChar> out;
  for (uint32_t x = 0; x < (1u << (2 * g)); ++x) {
    auto d = ThetaChar::unpack(g, x);
    if ((want_parity > 0) == d.even()) out.push_back(d);
  }
  return out;
}
inline std::vector<ThetaChar> even_characteristics(int g) { return characteristics(g, 1); }
inline std::vector<ThetaChar> odd_characteristics(int g) { return characteristics(g, -1); }

// 2g x 2g matrix over F2.  Row i is stored in byte i as a 2g-bit mask using
// the same bit layout as SympVec (column j sits at bit 2g-1-j).
struct SympMatrix {
  int g = 1;
  uint64_t rows = 0;

  int n() const { return 2 * g; }
  uint32_t row(int i) const { return (rows >> (8 * i)) & 0xff; }
  void set_row(int i, uint32_t r) {
    rows &= ~(uint64_t(0xff) << (8 * i));
    rows |= uint64_t(r & 0xff) << (8 * i);
  }
  int at(int i, int j) const { return (row(i) >> (n() - 1 - j)) & 1; }
  void set(int i, int j, int bit) {
    uint32_t r = row(i) & ~(1u << (n() - 1 - j));
    set_row(i, r | (uint32_t(bit & 1) << (n() - 1 - j)));
  }

  static SympMatrix identity(int g) {
    SympMatrix m{g, 0};
    for (int i = 0; i < 2 * g; ++i) m.set_row(i, 1u << (2 * g - 1 - i));
    return m;
  }
  static SympMatrix transvection(SympVec v) {
    if (v.bits == 0) throw std::invalid_argument("transvection by zero vector");
    int g = v.g;
    // E(w,v) = parity(w & f) with f = (v'', v')
    uint32_t f = (v.lo() << g) | v.hi();
    SympMatrix m = identity(g);
    for (int i = 0; i < 2 * g; ++i)
      if ((v.bits >> (2 * g - 1 - i)) & 1) m.set_row(i, m.row(i) ^ f);
    return m;
  }

  SympVec apply(SympVec v) const {
    uint32_t out = 0;
    for (int i = 0; i < n(); ++i)
      out |= uint32_t(parity(row(i) & v.bits)) << (n() - 1 - i);
    return {g, out};
  }
  SympMatrix operator*(const SympMatrix& o) const {
    SympMatrix r{g, 0};
    for (int i = 0; i < n(); ++i) {
      uint32_t acc = 0, ri = row(i);
      for (int j = 0; j < n(); ++j)
        if ((ri >> (n() - 1 - j)) & 1) acc ^= o.row(j);
      r.set_row(i, acc);
    }
    return r;
  }
  SympMatrix transpose() const {
    SympMatrix t{g, 0};
    for (int i = 0; i < n(); ++i)
      for (int j = 0; j < n(); ++j) t.set(j, i, at(i, j));
    return t;
  }
  // g x g block (bi, bj) in {0,1}^2, as a vector of row masks
  std::vector<uint32_t> block(int bi, int bj) const {
    std::vector<uint32_t> out(g);
    for (int i = 0; i < g; ++i) {
      uint32_t r = row(bi * g + i);
      out[i] = bj == 0 ? (r >> g) : (r & ((1u << g) - 1));
    }
    return out;
  }
  bool is_symplectic() const {
    for (int i = 0; i < n(); ++i)
      for (int j = 0; j < n(); ++j) {
        SympVec ei{g, 1u << (n() - 1 - i)}, ej{g, 1u << (n() - 1 - j)};
        if (symplectic_form(apply(ei), apply(ej)) != symplectic_form(ei, ej)) return false;
      }
    return true;
  }
  // inverse of a symplectic matrix: [[D^t, B^t], [C^t, A^t]]
  SympMatrix symplectic_inverse() const {
    SympMatrix t = transpose(), r{g, 0};
    for (int i = 0; i < n(); ++i)
      for (int j = 0; j < n(); ++j) {
        int si = i < g ? i + g : i - g, sj = j < g ? j + g : j - g;
        r.set(i, j, t.at(si, sj));
      }
    return r;
  }
  bool operator==(const SympMatrix&) const = default;
};

namespace detail {
// diagonal of X Y^t for g x g F2 matrices given as row masks
inline uint32_t diag_of_x_yt(const std::vector<uint32_t>& x, const std::vector<uint32_t>& y,
                             int g) {
  uint32_t out = 0;
  for (int k = 0; k < g; ++k) out |= uint32_t(parity(x[k] & y[k])) << (g - 1 - k);
  return out;
}
inline uint32_t mat_vec(const std::vector<uint32_t>& x, uint32_t v, int g) {
  uint32_t out = 0;
  for (int i = 0; i < g; ++i) out |= uint32_t(parity(x[i] & v)) << (g - 1 - i);
  return out;
}
}  // namespace detail

// M.[a;b] = [[D,C],[B,A]] (a;b) + ((D C^t)_0 ; (B A^t)_0)  (signs vanish mod 2)
inline ThetaChar sp_char_action(const SympMatrix& m, const ThetaChar& d) {
  if (m.g != d.g) throw std::invalid_argument("genus mismatch");
  if (!m.is_symplectic()) throw std::invalid_argument("matrix is not symplectic");
  int g = m.g;
  auto A = m.block(0, 0), B = m.block(0, 1), C = m.block(1, 0), D = m.block(1, 1);
  uint32_t c = detail::mat_vec(D, d.a, g) ^ detail::mat_vec(C, d.b, g) ^ detail::diag_of_x_yt(D, C, g);
  uint32_t e = detail::mat_vec(B, d.a, g) ^ detail::mat_vec(A, d.b, g) ^ detail::diag_of_x_yt(B, A, g);
  return {g, c, e};
}

// The characteristic Δ' with q_Δ'(v) = q_Δ(M^{-1} v) for all v.
inline ThetaChar pullback_char_action(const SympMatrix& m, const ThetaChar& d) {
  int g = m.g;
  SympMatrix inv = m.symplectic_inverse();
  uint32_t a = 0, b = 0;
  for (int k = 0; k < g; ++k) {
    uint32_t ek = 1u << (g - 1 - k);
    a |= uint32_t(quadratic_eval(d, inv.apply(SympVec::make(g, ek, 0)))) << (g - 1 - k);
    b |= uint32_t(quadratic_eval(d, inv.apply(SympVec::make(g, 0, ek)))) << (g - 1 - k);
  }
  return {g, a, b};
}

inline ThetaChar transvection_char_rule(SympVec v, const ThetaChar& d) {
  if (quadratic_eval(d, v)) return d;
  return {d.g, d.a ^ v.lo(), d.b ^ v.hi()};
}

inline uint64_t group_order(int g) {
  if (g < 1) throw std::invalid_argument("genus must be positive");
  uint64_t o = 1;
  for (int k = 1; k <= g; ++k) o *= (uint64_t(1) << (2 * k - 1)) * ((uint64_t(1) << (2 * k)) - 1);
  return o;
}

inline uint64_t stabilizer_order_oplus(int g) {
  if (g < 1 || g > 3) throw capacity_error("stabilizer order only tabulated for g <= 3");
  uint64_t idx = (uint64_t(1) << (g - 1)) * ((uint64_t(1) << g) + 1);
  return group_order(g) / idx;
}

inline std::vector<SympVec> nonzero_vectors(int g) {
  std::vector<SympVec> out;
  for (uint32_t x = 1; x < (1u << (2 * g)); ++x) out.push_back({g, x});
  return out;
}

inline std::vector<SympMatrix> transvection_matrices(int g) {
  std::vector<SympMatrix> out;
  for (auto v : nonzero_vectors(g)) out.push_back(SympMatrix::transvection(v));
  return out;
}

// BFS closure of a generating set; returns the sorted packed elements.
inline std::vector<uint64_t> closure(int g, const std::vector<SympMatrix>& gens,
                                     size_t reserve = 0) {
  std::unordered_set<uint64_t> seen;
  if (reserve) seen.reserve(reserve);
  std::vector<uint64_t> frontier{SympMatrix::identity(g).rows};
  seen.insert(frontier[0]);
  while (!frontier.empty()) {
    std::vector<uint64_t> next;
    for (uint64_t x : frontier) {
      SympMatrix m{g, x};
      for (const auto& s : gens) {
        uint64_t y = (s * m).rows;
        if (seen.insert(y).second) next.push_back(y);
      }
    }
    frontier.swap(next);
  }
  std::vector<uint64_t> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<uint64_t> enumerate_group(int g) {
  if (g < 1) throw std::invalid_argument("genus must be positive");
  if (g > 3) throw capacity_error("full enumeration of Sp(2g,F2) is capped at g = 3");
  return closure(g, transvection_matrices(g), group_order(g));
}

// ---------------------------------------------------------------- Lagrangians

struct Lagrangian {
  int g = 1;
  std::vector<uint32_t> basis;  // reduced row echelon, sorted descending by pivot

  bool operator==(const Lagrangian&) const = default;
  bool operator<(const Lagrangian& o) const { return basis < o.basis; }

  std::vector<uint32_t> members() const {
    std::vector<uint32_t> out;
    for (uint32_t s = 0; s < (1u << basis.size()); ++s) {
      uint32_t x = 0;
      for (size_t i = 0; i < basis.size(); ++i)
        if ((s >> i) & 1) x ^= basis[i];
      out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  bool contains(uint32_t x) const {
    for (uint32_t b : basis)
      if ((x ^ b) < x) x ^= b;
    return x == 0;
  }
};

// Reduced row echelon form of the span of vecs (2g-bit masks).
inline std::vector<uint32_t> rref_f2(std::vector<uint32_t> vecs) {
  std::vector<uint32_t> basis;
  for (uint32_t v : vecs) {
    for (uint32_t b : basis)
      if ((v ^ b) < v) v ^= b;
    if (!v) continue;
    for (auto& b : basis)
      if ((b ^ v) < b) b ^= v;
    basis.push_back(v);
    std::sort(basis.rbegin(), basis.rend());
  }
  // full reduction: clear every pivot column in the other rows
  for (size_t i = 0; i < basis.size(); ++i) {
    uint32_t piv = std::bit_floor(basis[i]);
    for (size_t j = 0; j < basis.size(); ++j)
      if (j != i && (basis[j] & piv)) basis[j] ^= basis[i];
  }
  std::sort(basis.rbegin(), basis.rend());
  return basis;
}

inline Lagrangian make_lagrangian(int g, const std::vector<uint32_t>& vecs) {
  Lagrangian l{g, rref_f2(vecs)};
  if (int(l.basis.size()) != g) throw std::invalid_argument("not of dimension g");
  for (uint32_t x : l.basis)
    for (uint32_t y : l.basis)
      if (symplectic_form({g, x}, {g, y})) throw std::invalid_argument("not isotropic");
  return l;
}

inline Lagrangian apply(const SympMatrix& m, const Lagrangian& l) {
  std::vector<uint32_t> img;
  for (uint32_t b : l.basis) img.push_back(m.apply({m.g, b}).bits);
  return make_lagrangian(m.g, img);
}

inline int intersection_dim(const Lagrangian& x, const Lagrangian& y) {
  int n = 0;
  for (uint32_t v : x.members())
    if (y.contains(v)) ++n;
  return std::countr_zero(uint32_t(n));
}

inline std::vector<Lagrangian> lagrangians(int g) {
  if (g > 3) throw capacity_error("Lagrangian enumeration capped at g = 3");
  std::vector<Lagrangian> out;
  std::unordered_set<uint64_t> seen;
  uint32_t n = 1u << (2 * g);
  // grow isotropic subspaces one vector at a time
  std::vector<std::vector<uint32_t>> layer{{}};
  for (int d = 0; d < g; ++d) {
    std::vector<std::vector<uint32_t>> next;
    std::unordered_set<uint64_t> keys;
    for (auto& basis : layer) {
      Lagrangian cur{g, basis};
      for (uint32_t v = 1; v < n; ++v) {
        if (cur.contains(v)) continue;
        bool iso = true;
        for (uint32_t b : basis) iso = iso && !symplectic_form({g, v}, {g, b});
        if (!iso) continue;
        auto nb = basis;
        nb.push_back(v);
        nb = rref_f2(nb);
        uint64_t key = 0;
        for (uint32_t b : nb) key = key * 257 + b + 1;
        if (keys.insert(key).second) next.push_back(nb);
      }
    }
    layer.swap(next);
  }
  for (auto& b : layer) out.push_back({g, b});
  std::sort(out.begin(), out.end());
  return out;
}

inline bool in_quadric(const ThetaChar& d, const Lagrangian& l) {
  for (uint32_t v : l.members())
    if (quadratic_eval(d, {l.g, v})) return false;
  return true;
}

inline Lagrangian lagrangian_l0(int g) {
  std::vector<uint32_t> b;
  for (int k = 0; k < g; ++k) b.push_back((1u << (g - 1 - k)) << g);
  return make_lagrangian(g, b);
}

struct Rulings {
  std::vector<Lagrangian> plus, minus;
};

// The two rulings of the quadric Q_Δ.  "plus" is the ruling holding the
// lexicographically first Lagrangian, except for Δ = [0;0] where it is the
// ruling containing L0.
inline Rulings quadric_lagrangians(const ThetaChar& d) {
  if (!d.even()) throw std::invalid_argument("odd characteristic has no rulings");
  std::vector<Lagrangian> on;
  for (auto& l : lagrangians(d.g))
    if (in_quadric(d, l)) on.push_back(l);
  if (on.empty()) throw std::logic_error("quadric contains no Lagrangian");
  Lagrangian seed = on.front();
  if (d.a == 0 && d.b == 0) seed = lagrangian_l0(d.g);
  // same ruling iff dim(L cap L') = g mod 2 ... for g = 3 that is dim 1 or 3
  Rulings r;
  for (auto& l : on) {
    int k = intersection_dim(seed, l);
    if ((d.g - k) % 2 == 0) r.plus.push_back(l);
    else r.minus.push_back(l);
  }
  // transitivity of the relation on each side
  for (auto* side : {&r.plus, &r.minus})
    for (auto& x : *side)
      for (auto& y : *side)
        if ((d.g - intersection_dim(x, y)) % 2 != 0) throw std::logic_error("ruling relation not transitive");
  return r;
}

// ---------------------------------------------------------------- sextets

using Sextet = std::array<ThetaChar, 6>;

inline bool asyzygous_triple(const ThetaChar& x, const ThetaChar& y, const ThetaChar& z) {
  ThetaChar s{x.g, x.a ^ y.a ^ z.a, x.b ^ y.b ^ z.b};
  return !s.even();
}

inline std::vector<Sextet> asyzygous_sextets() {
  auto ev = even_characteristics(3);
  std::vector<Sextet> out;
  std::vector<int> pick;
  auto rec = [&](auto&& self, int start) -> void {
    if (pick.size() == 6) {
      Sextet s;
      for (int i = 0; i < 6; ++i) s[i] = ev[pick[i]];
      out.push_back(s);
      return;
    }
    for (int c = start; c < int(ev.size()); ++c) {
      bool ok = true;
      for (size_t i = 0; i < pick.size() && ok; ++i)
        for (size_t j = i + 1; j < pick.size() && ok; ++j)
          ok = asyzygous_triple(ev[pick[i]], ev[pick[j]], ev[c]);
      if (!ok) continue;
      pick.push_back(c);
      self(self, c + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline Sextet sextet_action(const SympMatrix& m, const Sextet& s) {
  Sextet r;
  for (int i = 0; i < 6; ++i) r[i] = sp_char_action(m, s[i]);
  std::sort(r.begin(), r.end());
  return r;
}

inline uint64_t sextet_key(const Sextet& s) {
  uint64_t k = 0;
  for (auto& d : s) k |= uint64_t(1) << d.packed();
  return k;
}

// The sextet displayed as the standard example.
inline Sextet sextet_s0() {
  auto c = [](const char* a, const char* b) {
    ThetaChar d{3, 0, 0};
    for (int i = 0; i < 3; ++i) {
      d.a = (d.a << 1) | uint32_t(a[i] - '0');
      d.b = (d.b << 1) | uint32_t(b[i] - '0');
    }
    return d;
  };
  Sextet s{c("110", "110"), c("110", "111"), c("111", "110"),
           c("101", "101"), c("101", "111"), c("111", "101")};
  std::sort(s.begin(), s.end());
  return s;
}

// ---------------------------------------------------------------- E7 checks

struct E7Report {
  bool edges_ok = false;
  bool l0_product_identity = false;
  bool top_row_quadric = false;
  uint64_t top_row_group_order = 0;
  bool ok() const {
    return edges_ok && l0_product_identity && top_row_quadric && top_row_group_order == 40320;
  }
};

inline SympVec vec3(const char* vp, const char* vpp) {
  uint32_t a = 0, b = 0;
  for (int i = 0; i < 3; ++i) {
    a = (a << 1) | uint32_t(vp[i] - '0');
    b = (b << 1) | uint32_t(vpp[i] - '0');
  }
  return SympVec::make(3, a, b);
}

// Eight vectors of the E7 diagram: a chain of seven top-row nodes and one
// node hanging below the fourth.
inline std::vector<SympVec> e7_vectors() {
  return {vec3("100", "111"), vec3("101", "100"), vec3("111", "111"), vec3("101", "001"),
          vec3("001", "111"), vec3("101", "011"), vec3("010", "111"), vec3("011", "000")};
}

inline std::vector<std::pair<int, int>> e7_edges() {
  return {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {3, 7}};
}

inline E7Report e7_checks() {
  E7Report r;
  auto vs = e7_vectors();
  auto edges = e7_edges();
  r.edges_ok = true;
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = i + 1; j < vs.size(); ++j) {
      bool edge = std::find(edges.begin(), edges.end(), std::pair<int, int>(int(i), int(j))) != edges.end();
      if (symplectic_form(vs[i], vs[j]) != int(edge)) r.edges_ok = false;
    }
  SympMatrix p = SympMatrix::identity(3);
  for (uint32_t x : lagrangian_l0(3).members())
    if (x) p = p * SympMatrix::transvection({3, x});
  r.l0_product_identity = p == SympMatrix::identity(3);
  r.top_row_quadric = true;
  std::vector<SympMatrix> gens;
  for (int i = 0; i < 7; ++i) {
    if (quadratic_eval({3, 0, 0}, vs[i]) != 1) r.top_row_quadric = false;
    gens.push_back(SympMatrix::transvection(vs[i]));
  }
  r.top_row_group_order = closure(3, gens).size();
  return r;
}

}  // namespace thsym
