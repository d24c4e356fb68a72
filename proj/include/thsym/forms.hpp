#pragma once

#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "thsym/lifts.hpp"
#include "thsym/linalg.hpp"
#include "thsym/theta.hpp"

namespace thsym {

struct NamedForm {
  std::string name;
  int g = 1;
  int weight = 0;
  PolyQ poly;
};

inline NamedForm named(std::string name, int g, const PolyQ& p) {
  if (!p.is_zero() && !is_invariant(p)) throw std::logic_error(name + " is not Heisenberg invariant");
  return {std::move(name), g, p.is_zero() ? 0 : int(p.degree() / 2), p};
}

// ------------------------------------------------------------ cached spaces

class FormContext {
 public:
  const OrbitSumBasis& basis(int g, int degree) {
    auto& slot = bases_[{g, degree}];
    if (!slot) slot = std::make_unique<OrbitSumBasis>(orbit_sum_basis(g, degree));
    return *slot;
  }
  const InducedSet& rho(int g, int degree) {
    auto& slot = induced_[{g, degree}];
    if (!slot) slot = std::make_unique<InducedSet>(basis(g, degree));
    return *slot;
  }

 private:
  std::map<std::pair<int, int>, std::unique_ptr<OrbitSumBasis>> bases_;
  std::map<std::pair<int, int>, std::unique_ptr<InducedSet>> induced_;
};

using QVec = std::vector<GaussRational>;

inline bool is_zero_vec(const QVec& v) {
  for (auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

inline QVec negated(QVec v) {
  for (auto& x : v) x = -x;
  return v;
}

inline QVec add_vec(QVec a, const QVec& b, const GaussRational& s = GaussRational(1)) {
  for (size_t i = 0; i < a.size(); ++i)
    if (!b[i].is_zero()) a[i] += s * b[i];
  return a;
}

// ------------------------------------------------------------ exact rank

// Rows of vecs split into classes of coordinates linked by common vectors;
// the rank is additive over classes.
struct RankGroup {
  std::vector<size_t> rows;
  std::vector<uint32_t> cols;
};

inline std::vector<RankGroup> rank_groups(const std::vector<QVec>& vecs,
                                          std::vector<std::vector<uint32_t>>& supp) {
  std::vector<RankGroup> out;
  if (vecs.empty()) return out;
  size_t n = vecs[0].size();
  std::vector<uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](uint32_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  supp.assign(vecs.size(), {});
  for (size_t r = 0; r < vecs.size(); ++r) {
    for (size_t i = 0; i < n; ++i)
      if (!vecs[r][i].is_zero()) supp[r].push_back(uint32_t(i));
    for (size_t k = 1; k < supp[r].size(); ++k) {
      uint32_t a = find(supp[r][0]), b = find(supp[r][k]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::map<uint32_t, RankGroup> groups;
  for (size_t r = 0; r < vecs.size(); ++r)
    if (!supp[r].empty()) groups[find(supp[r][0])].rows.push_back(r);
  for (auto& [root, gr] : groups) {
    std::set<uint32_t> cols;
    for (size_t r : gr.rows) cols.insert(supp[r].begin(), supp[r].end());
    gr.cols.assign(cols.begin(), cols.end());
    out.push_back(std::move(gr));
  }
  return out;
}

// row scaled to Gaussian integers
inline std::vector<GaussBig> integral_row(const QVec& v, const std::vector<uint32_t>& supp,
                                          const std::vector<uint32_t>& cols) {
  mpz_class den = 1;
  for (uint32_t c : supp) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v[c].re.get_den_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v[c].im.get_den_mpz_t());
  }
  std::vector<GaussBig> row(cols.size());
  for (size_t k = 0; k < cols.size(); ++k) {
    const auto& z = v[cols[k]];
    if (z.is_zero()) continue;
    mpq_class a = z.re * den, b = z.im * den;
    row[k] = GaussBig(a.get_num(), b.get_num());
  }
  return row;
}

inline size_t group_rank_modp(const std::vector<std::vector<GaussBig>>& m, const ModField& F) {
  ModMat mm;
  for (auto& row : m) {
    std::vector<uint32_t> r(row.size());
    for (size_t k = 0; k < row.size(); ++k) r[k] = F.from_gauss(row[k]);
    mm.push_back(std::move(r));
  }
  return rank_modp(std::move(mm), F);
}

// Largest rank over the default primes; never exceeds the rank over Q(i).
inline size_t modp_rank(const std::vector<QVec>& vecs) {
  std::vector<std::vector<uint32_t>> supp;
  size_t rank = 0;
  for (auto& gr : rank_groups(vecs, supp)) {
    std::vector<std::vector<GaussBig>> m;
    for (size_t r : gr.rows) m.push_back(integral_row(vecs[r], supp[r], gr.cols));
    size_t best = 0;
    for (auto p : default_primes()) best = std::max(best, group_rank_modp(m, ModField(p)));
    rank += best;
  }
  return rank;
}

// Exact rank over Q(i): full modular rank settles a group, otherwise Bareiss.
inline size_t exact_rank(const std::vector<QVec>& vecs) {
  std::vector<std::vector<uint32_t>> supp;
  size_t rank = 0;
  for (auto& gr : rank_groups(vecs, supp)) {
    std::vector<std::vector<GaussBig>> m;
    for (size_t r : gr.rows) m.push_back(integral_row(vecs[r], supp[r], gr.cols));
    size_t full = std::min(m.size(), gr.cols.size()), best = 0;
    for (auto p : default_primes()) best = std::max(best, group_rank_modp(m, ModField(p)));
    rank += best == full ? best : bareiss_rank(std::move(m));
  }
  return rank;
}

// ------------------------------------------------------------ genus one

// eta^12 = theta00^4 theta01^4 theta10^4
inline PolyZ eta12() {
  auto x0 = PolyZ::variable(2, 0), x1 = PolyZ::variable(2, 1);
  auto a = x0 * x0 + x1 * x1, b = x0 * x0 - x1 * x1, c = (x0 * x1).scaled(GaussInt(2));
  return (a * b * c).pow(2);
}

// ------------------------------------------------------------ Lagrangian forms

inline ThetaChar char3(const char* a, const char* b) {
  ThetaChar d{3, 0, 0};
  for (int i = 0; i < 3; ++i) {
    d.a = (d.a << 1) | uint32_t(a[i] - '0');
    d.b = (d.b << 1) | uint32_t(b[i] - '0');
  }
  return d;
}

struct RSquares {
  PolyZ r1, r2, r3;  // r1^2, r2^2, r3^2
};

// r1 = prod theta[000;0ab], r2 = prod theta[000;1ab], r3 = prod theta[100;0ab]
inline RSquares r_squares() {
  std::vector<ThetaChar> a, b, c;
  for (uint32_t x = 0; x < 4; ++x) {
    a.push_back({3, 0, x});
    b.push_back({3, 0, 4 | x});
    c.push_back({3, 4, x});
  }
  return {theta_square_product(a), theta_square_product(b), theta_square_product(c)};
}

// P_{L0} = (r1^2 + r2^2 - r3^2) / 2
inline PolyQ lagrangian_seed() {
  auto r = r_squares();
  return to_q(r.r1 + r.r2 - r.r3).scaled(GaussRational(mpq_class(1, 2)));
}

// the quadrics through L
inline std::vector<ThetaChar> quadrics_containing(const Lagrangian& l) {
  std::vector<ThetaChar> out;
  for (auto& d : even_characteristics(l.g))
    if (in_quadric(d, l)) out.push_back(d);
  return out;
}

struct LagrangianOrbit {
  const OrbitSumBasis* basis = nullptr;  // (3, 8)
  std::map<Lagrangian, QVec> coords;
  std::map<Lagrangian, TransvectionWord> words;
  size_t revisits = 0;

  PolyQ poly(const Lagrangian& l) const { return poly_of(*basis, coords.at(l)); }
  size_t size() const { return coords.size(); }
};

inline LagrangianOrbit lagrangian_orbit(FormContext& ctx) {
  const auto& S = ctx.rho(3, 8);
  LagrangianOrbit O;
  O.basis = &ctx.basis(3, 8);
  auto l0 = lagrangian_l0(3);
  O.coords[l0] = coords_q(*O.basis, lagrangian_seed());
  O.words[l0] = TransvectionWord{3, {}};
  std::vector<Lagrangian> frontier{l0};
  while (!frontier.empty()) {
    std::vector<Lagrangian> next;
    for (auto& l : frontier) {
      for (auto v : nonzero_vectors(3)) {
        auto l2 = apply(SympMatrix::transvection(v), l);
        auto c = S.apply(v, O.coords.at(l));
        auto it = O.coords.find(l2);
        if (it != O.coords.end()) {
          if (it->second != c) throw std::logic_error("Lagrangian orbit: label revisited with a different polynomial");
          ++O.revisits;
          continue;
        }
        O.coords.emplace(l2, std::move(c));
        O.words.emplace(l2, O.words.at(l).then_left(v));
        next.push_back(l2);
      }
    }
    frontier.swap(next);
  }
  return O;
}

inline QVec p_bracket_coords(const LagrangianOrbit& O, const ThetaChar& d) {
  auto R = quadric_lagrangians(d);
  QVec c(O.basis->size());
  for (auto& l : R.plus) c = add_vec(c, O.coords.at(l));
  for (auto& l : R.minus) c = add_vec(c, O.coords.at(l), GaussRational(-1));
  return c;
}

// P[0]: one ruling of Q_0 minus the other; "plus" holds L0
inline NamedForm p0_antiinvariant(const LagrangianOrbit& O) {
  return named("P[0]", 3, poly_of(*O.basis, p_bracket_coords(O, {3, 0, 0})));
}

// G[Delta] = sum of P_L^2 over the 30 L in Q_Delta
inline NamedForm g_bracket(const LagrangianOrbit& O, const ThetaChar& d) {
  if (!d.even()) throw std::invalid_argument("G[Delta] needs an even characteristic");
  auto R = quadric_lagrangians(d);
  PolyQ s(8);
  for (auto* side : {&R.plus, &R.minus})
    for (auto& l : *side) {
      auto p = O.poly(l);
      s += p * p;
    }
  return named("G" + d.str(), 3, s);
}

// ------------------------------------------------------------ O+ generators

struct OplusGenerator {
  TransvectionWord word;
  int eps = 1;  // sign on theta[0]^4
};

inline int epsilon_of(FormContext& ctx, const TransvectionWord& w) {
  const auto& B = ctx.basis(w.g, 4);
  auto t = coords_q(B, theta_power({w.g, 0, 0}, 4));
  auto img = ctx.rho(w.g, 4).apply(w, t);
  if (img == t) return 1;
  if (img == negated(t)) return -1;
  throw std::logic_error("word does not fix theta[0]^4 up to sign");
}

inline bool fixes_zero(const TransvectionWord& w) {
  ThetaChar z{w.g, 0, 0};
  return sp_char_action(w.matrix(), z) == z;
}

// Transvections fixing [0]; for g = 2 they generate a subgroup of index 2 in
// O+, so one more element is found by search.
inline std::vector<OplusGenerator> oplus_generators(FormContext& ctx, int g) {
  std::vector<OplusGenerator> gens;
  std::vector<SympMatrix> mats;
  for (auto v : nonzero_vectors(g))
    if (transvection_char_rule(v, {g, 0, 0}) == ThetaChar{g, 0, 0}) {
      TransvectionWord w{g, {v}};
      gens.push_back({w, epsilon_of(ctx, w)});
      mats.push_back(SympMatrix::transvection(v));
    }
  if (g > 3) throw capacity_error("O+ generators only for g <= 3");
  auto sub = closure(g, mats);
  if (sub.size() == stabilizer_order_oplus(g)) return gens;
  std::unordered_set<uint64_t> in_sub(sub.begin(), sub.end());
  std::unordered_map<uint64_t, TransvectionWord> seen{{SympMatrix::identity(g).rows, {g, {}}}};
  std::vector<uint64_t> frontier{SympMatrix::identity(g).rows};
  while (!frontier.empty()) {
    std::vector<uint64_t> next;
    for (uint64_t x : frontier)
      for (auto v : nonzero_vectors(g)) {
        uint64_t y = (SympMatrix::transvection(v) * SympMatrix{g, x}).rows;
        if (seen.count(y)) continue;
        auto w = seen.at(x).then_left(v);
        seen.emplace(y, w);
        if (!in_sub.count(y) && fixes_zero(w)) {
          gens.push_back({w, epsilon_of(ctx, w)});
          mats.push_back(w.matrix());
          if (closure(g, mats).size() != stabilizer_order_oplus(g))
            throw std::logic_error("O+ generators incomplete");
          return gens;
        }
        next.push_back(y);
      }
    frontier.swap(next);
  }
  throw std::logic_error("no further O+ element found");
}

// Diagonal elements of O+: t_u t_w t_{u+w} with u, w in the x = 0 half.
inline std::vector<OplusGenerator> oplus_diagonal(FormContext& ctx, int g) {
  std::vector<OplusGenerator> out;
  for (uint32_t u = 1; u < (1u << g); ++u)
    for (uint32_t w = u + 1; w < (1u << g); ++w) {
      TransvectionWord word{g, {from_heis(g, 0, u), from_heis(g, 0, w), from_heis(g, 0, u ^ w)}};
      if (!fixes_zero(word)) continue;
      out.push_back({word, epsilon_of(ctx, word)});
    }
  return out;
}

// ------------------------------------------------------------ O+ subspaces

using SparseModVec = std::map<uint32_t, uint32_t>;

inline SparseModVec word_column_modp(const InducedSet& S, const TransvectionWord& w, uint32_t j,
                                     const ModField& F) {
  SparseModVec x{{j, 1}};
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    const auto& M = S.of(*it);
    uint32_t sc = F.from_gauss(M.scale);
    SparseModVec y;
    for (auto& [c, val] : x)
      for (auto& [r, z] : M.cols[c]) {
        uint32_t& slot = y[r];
        slot = F.add(slot, F.mul(F.mul(val, sc), F.from_gauss(z)));
      }
    for (auto it2 = y.begin(); it2 != y.end();)
      it2 = it2->second ? std::next(it2) : y.erase(it2);
    x.swap(y);
  }
  return x;
}

struct OplusReport {
  int g = 1, degree = 4, sign = 1;
  size_t generators = 0;
  size_t diagonal_support = 0;  // coordinates allowed by the diagonal elements
  size_t kernel_dim_modp = 0;   // upper bound for the true dimension
  size_t exhibited_rank = 0;    // lower bound from exact forms
  bool exhibited_ok = true;     // every exhibited form satisfies the equations exactly
  bool exact() const { return exhibited_ok && exhibited_rank == kernel_dim_modp; }
};

// sign = +1: O+-invariants, sign = -1: epsilon-anti-invariants.
inline OplusReport oplus_subspace(FormContext& ctx, int g, int degree, int sign,
                                  const std::vector<PolyQ>& exhibited = {}) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  const auto& B = ctx.basis(g, degree);
  const auto& S = ctx.rho(g, degree);
  auto gens = oplus_generators(ctx, g);
  auto diag = oplus_diagonal(ctx, g);
  OplusReport rep{g, degree, sign, gens.size()};
  auto want = [&](int eps) { return sign == 1 ? 1 : eps; };
  ModField F(default_primes()[0]);
  // diagonal filter
  std::vector<uint32_t> allowed;
  for (uint32_t j = 0; j < B.size(); ++j) {
    bool ok = true;
    for (auto& d : diag) {
      auto col = word_column_modp(S, d.word, j, F);
      if (col.size() != 1 || col.begin()->first != j) throw std::logic_error("diagonal element is not diagonal");
      if (col.begin()->second != F.from_int(want(d.eps))) ok = false;
    }
    if (ok) allowed.push_back(j);
  }
  rep.diagonal_support = allowed.size();
  // incremental kernel: K columns span the current solution space (in allowed coords)
  size_t m = allowed.size();
  ModMat K(m, std::vector<uint32_t>(m, 0));  // K[coord][k]
  for (size_t i = 0; i < m; ++i) K[i][i] = 1;
  size_t kdim = m;
  for (auto& gen : gens) {
    if (kdim == 0) break;
    uint32_t c = F.from_int(want(gen.eps));
    // A = (rho(w) - c) restricted to allowed columns, applied to K
    std::vector<SparseModVec> cols(m);
    for (size_t a = 0; a < m; ++a) {
      cols[a] = word_column_modp(S, gen.word, allowed[a], F);
      uint32_t& d = cols[a][allowed[a]];
      d = F.sub(d, c);
    }
    std::map<uint32_t, std::vector<uint32_t>> rows;  // row index -> entries over k
    for (size_t a = 0; a < m; ++a)
      for (auto& [r, val] : cols[a]) {
        if (!val) continue;
        auto& row = rows.try_emplace(r, std::vector<uint32_t>(kdim, 0)).first->second;
        for (size_t k = 0; k < kdim; ++k)
          if (K[a][k]) row[k] = F.add(row[k], F.mul(val, K[a][k]));
      }
    ModMat A;
    for (auto& [r, row] : rows) A.push_back(row);
    if (A.empty()) continue;
    auto Y = kernel_modp(A, kdim, F);  // each entry: vector over k
    ModMat K2(m, std::vector<uint32_t>(Y.size(), 0));
    for (size_t a = 0; a < m; ++a)
      for (size_t t = 0; t < Y.size(); ++t) {
        uint64_t s = 0;
        for (size_t k = 0; k < kdim; ++k)
          if (K[a][k] && Y[t][k]) s = (s + uint64_t(K[a][k]) * Y[t][k]) % F.p;
        K2[a][t] = uint32_t(s);
      }
    K.swap(K2);
    kdim = Y.size();
  }
  rep.kernel_dim_modp = kdim;
  // exact lower bound
  std::vector<QVec> ex;
  for (auto& p : exhibited) {
    auto c = coords_q(B, p);
    for (auto& gen : gens) {
      auto img = S.apply(gen.word, c);
      if (img != (want(gen.eps) == 1 ? c : negated(c))) rep.exhibited_ok = false;
    }
    ex.push_back(std::move(c));
  }
  rep.exhibited_rank = exact_rank(ex);
  return rep;
}

// ------------------------------------------------------------ theta^4 / P pairs and G

struct ThetaPairOrbit {
  std::map<ThetaChar, QVec> theta4;  // coords in (3,4)
  std::map<ThetaChar, QVec> pform;   // coords in (3,8)
  std::map<ThetaChar, TransvectionWord> words;
  size_t revisits = 0;
};

inline ThetaPairOrbit theta_pair_orbit(FormContext& ctx, const LagrangianOrbit& O) {
  const auto& S4 = ctx.rho(3, 4);
  const auto& S8 = ctx.rho(3, 8);
  ThetaPairOrbit T;
  ThetaChar z{3, 0, 0};
  T.theta4[z] = coords_q(ctx.basis(3, 4), theta_power(z, 4));
  T.pform[z] = p_bracket_coords(O, z);
  T.words[z] = TransvectionWord{3, {}};
  std::vector<ThetaChar> frontier{z};
  while (!frontier.empty()) {
    std::vector<ThetaChar> next;
    for (auto& d : frontier)
      for (auto v : nonzero_vectors(3)) {
        auto e = transvection_char_rule(v, d);
        auto a = S4.apply(v, T.theta4.at(d));
        auto b = S8.apply(v, T.pform.at(d));
        auto it = T.theta4.find(e);
        if (it != T.theta4.end()) {
          bool same = it->second == a && T.pform.at(e) == b;
          bool flip = it->second == negated(a) && T.pform.at(e) == negated(b);
          if (!same && !flip) throw std::logic_error("theta^4 / P pair revisited inconsistently");
          ++T.revisits;
          continue;
        }
        T.theta4.emplace(e, std::move(a));
        T.pform.emplace(e, std::move(b));
        T.words.emplace(e, T.words.at(d).then_left(v));
        next.push_back(e);
      }
    frontier.swap(next);
  }
  return T;
}

// G = sum over Delta of theta[Delta]^4 P[Delta]
inline NamedForm g_invariant(FormContext& ctx, const ThetaPairOrbit& T) {
  const auto& B4 = ctx.basis(3, 4);
  const auto& B8 = ctx.basis(3, 8);
  PolyQ s(8);
  for (auto& [d, a] : T.theta4) s += poly_of(B4, a) * poly_of(B8, T.pform.at(d));
  return named("G", 3, s);
}

// ------------------------------------------------------------ sextets

inline PolyZ sextet_form(const Sextet& s) { return theta_square_product({s.begin(), s.end()}); }

struct SextetReport {
  size_t count = 0;
  size_t rank = 0;
  size_t rank_with_sym3 = 0;
  size_t sym3_rank = 0;
  size_t signed_permutation_failures = 0;
  bool intersection_zero() const { return rank_with_sym3 == rank + sym3_rank; }
};

inline std::vector<QVec> sym_power_coords(FormContext& ctx, int k) {
  const auto& B4 = ctx.basis(3, 4);
  const auto& Bk = ctx.basis(3, 4 * k);
  std::vector<QVec> out;
  std::vector<size_t> idx(k, 0);
  std::vector<PolyZ> base;
  for (size_t j = 0; j < B4.size(); ++j) base.push_back(B4.element(j));
  std::function<void(int, size_t, PolyZ)> rec = [&](int depth, size_t start, PolyZ acc) {
    if (depth == k) {
      out.push_back(coords_q(Bk, acc));
      return;
    }
    for (size_t j = start; j < base.size(); ++j) rec(depth + 1, j, depth == 0 ? base[j] : acc * base[j]);
  };
  rec(0, 0, PolyZ(8));
  return out;
}

inline std::vector<QVec> sextet_coords(FormContext& ctx, const std::vector<Sextet>& all) {
  const auto& B = ctx.basis(3, 12);
  std::vector<QVec> out;
  for (auto& s : all) out.push_back(coords_q(B, sextet_form(s)));
  return out;
}

// rho(t_v) F_S = +-F_{t_v S} for every v and S, in integer arithmetic
inline size_t sextet_permutation_failures(FormContext& ctx, const std::vector<Sextet>& all) {
  std::map<uint64_t, size_t> index;
  for (size_t i = 0; i < all.size(); ++i) index[sextet_key(all[i])] = i;
  const auto& B = ctx.basis(3, 12);
  const auto& S = ctx.rho(3, 12);
  std::vector<std::vector<GaussInt>> c;
  for (auto& s : all) c.push_back(to_coordinates(B, sextet_form(s)));
  size_t bad = 0;
  for (auto v : nonzero_vectors(3)) {
    auto m = SympMatrix::transvection(v);
    const auto& M = S.of(v);
    GaussInt inv = (GaussRational(1) / M.scale).to_int();
    for (size_t i = 0; i < all.size(); ++i) {
      auto img = M.apply_int(c[i]);
      auto it = index.find(sextet_key(sextet_action(m, all[i])));
      if (it == index.end()) {
        ++bad;
        continue;
      }
      auto t = c[it->second];
      for (auto& z : t) z = z * inv;
      bool same = img == t;
      for (auto& z : t) z = GaussInt(0) - z;
      if (!same && img != t) ++bad;
    }
  }
  return bad;
}

inline SextetReport sextet_report(FormContext& ctx) {
  auto all = asyzygous_sextets();
  auto c = sextet_coords(ctx, all);
  SextetReport r;
  r.count = all.size();
  r.rank = exact_rank(c);
  auto sym3 = sym_power_coords(ctx, 3);
  r.sym3_rank = exact_rank(sym3);
  auto both = c;
  both.insert(both.end(), sym3.begin(), sym3.end());
  // rank_Q(both) <= rank + sym3_rank, and the modular rank is a lower bound,
  // so equality with the sum is exact
  r.rank_with_sym3 = modp_rank(both);
  r.signed_permutation_failures = sextet_permutation_failures(ctx, all);
  return r;
}

struct Sym4Report {
  size_t products = 0;
  size_t rank = 0;
  size_t rank_with_f16 = 0;
  bool f16_in_span() const { return rank == rank_with_f16; }
  // rank of the image in the quotient by the line of F16
  size_t image_mod_f16() const { return rank_with_f16 - 1; }
};

inline Sym4Report sym4_report(FormContext& ctx) {
  auto v = sym_power_coords(ctx, 4);
  Sym4Report r;
  r.products = v.size();
  r.rank = exact_rank(v);
  v.push_back(coords_q(ctx.basis(3, 16), f16_polynomial()));
  r.rank_with_f16 = exact_rank(v);
  return r;
}

// ------------------------------------------------------------ cusp forms

// primitive representative of the line through v up to units of Z[i]
inline std::vector<GaussInt> primitive(std::vector<GaussInt> v) {
  int64_t g = 0;
  for (auto& z : v) g = std::gcd(g, std::gcd(std::abs(z.re), std::abs(z.im)));
  if (g == 0) return v;
  const GaussInt* lead = nullptr;
  for (auto& z : v) {
    z = GaussInt(z.re / g, z.im / g);
    if (!lead && !z.is_zero()) lead = &z;
  }
  for (GaussInt u : {GaussInt(1, 0), GaussInt(0, 1), GaussInt(-1, 0), GaussInt(0, -1)}) {
    GaussInt w = *lead * u;
    if (w.re > 0 && w.im >= 0) {
      for (auto& z : v) z = z * u;
      break;
    }
  }
  return v;
}

// true / false, or nullopt when not applicable (g < 2) or the orbit of the
// line through f exceeds max_orbit.
inline std::optional<bool> cusp_check(FormContext& ctx, const PolyQ& f, size_t max_orbit = 4096) {
  int g = 0;
  while ((1 << g) < f.nvars) ++g;
  if (g < 2 || f.is_zero()) return std::nullopt;
  int degree = int(f.degree());
  const auto& B = ctx.basis(g, degree);
  const auto& S = ctx.rho(g, degree);
  auto q = coords_q(B, f);
  std::vector<uint32_t> all(q.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<GaussInt> start;
  for (auto& z : integral_row(q, all, all)) start.push_back(GaussInt(z.re.get_si(), z.im.get_si()));
  start = primitive(start);
  std::set<std::vector<GaussInt>> seen{start};
  std::vector<std::vector<GaussInt>> frontier{start};
  while (!frontier.empty()) {
    std::vector<std::vector<GaussInt>> next;
    for (auto& x : frontier)
      for (auto v : nonzero_vectors(g)) {
        auto y = primitive(S.of(v).apply_int(x));
        if (seen.count(y)) continue;
        if (seen.size() >= max_orbit) return std::nullopt;
        seen.insert(y);
        next.push_back(std::move(y));
      }
    frontier.swap(next);
  }
  for (auto& x : seen)
    if (!degeneration_last(from_coordinates(B, x)).is_zero()) return false;
  return true;
}

// ------------------------------------------------------------ univariate

using UniPoly = std::vector<GaussRational>;  // coefficient of t^k at index k

inline void trim(UniPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

// X_sigma = 1 except X_var = t
template <class R>
UniPoly specialize(const SparsePoly<R>& p, int var) {
  auto lay = p.layout();
  UniPoly u;
  for (auto& [k, c] : p.terms) {
    size_t e = lay.exp(k, var);
    if (u.size() <= e) u.resize(e + 1);
    u[e] += GaussRational(c);
  }
  trim(u);
  return u;
}

inline UniPoly uni_mul(const UniPoly& a, const UniPoly& b) {
  if (a.empty() || b.empty()) return {};
  UniPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

inline UniPoly uni_rem(UniPoly a, const UniPoly& b) {
  if (b.empty()) throw std::domain_error("division by zero polynomial");
  trim(a);
  while (a.size() >= b.size()) {
    GaussRational f = a.back() / b.back();
    size_t shift = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

// ------------------------------------------------------------ F12

struct F12Report {
  size_t sextets = 0;
  size_t permutation_failures = 0;  // invariance of sum F_S^2
  size_t noncusp_sextets = 0;       // F_S with nonzero degeneration
  bool specialization_nonmultiple = false;
  size_t specialized_degree = 0;
  bool invariant() const { return sextets == 336 && permutation_failures == 0; }
  bool cusp() const { return invariant() && noncusp_sextets == 0; }
};

// F12 = sum F_S^2 is handled through its summands: the degree-24 polynomial
// itself is not expanded.
inline F12Report miyawaki_f12(FormContext& ctx) {
  auto all = asyzygous_sextets();
  F12Report r;
  r.sextets = all.size();
  r.permutation_failures = sextet_permutation_failures(ctx, all);
  UniPoly spec;
  for (auto& s : all) {
    auto f = sextet_form(s);
    if (!degeneration_last(f).is_zero()) ++r.noncusp_sextets;
    auto u = specialize(f, 7);
    auto sq = uni_mul(u, u);
    if (spec.size() < sq.size()) spec.resize(sq.size());
    for (size_t i = 0; i < sq.size(); ++i) spec[i] += sq[i];
  }
  trim(spec);
  r.specialized_degree = spec.empty() ? 0 : spec.size() - 1;
  auto f16 = specialize(f16_polynomial(), 7);
  r.specialization_nonmultiple = !spec.empty() && !uni_rem(spec, f16).empty();
  return r;
}

// ------------------------------------------------------------ Xi systems

// Dense coordinates of several polynomials over the union of their monomials.
inline std::vector<QVec> monomial_columns(const std::vector<PolyQ>& ps) {
  std::map<uint64_t, size_t> idx;
  for (auto& p : ps)
    for (auto& [k, c] : p.terms) idx.emplace(k, 0);
  size_t n = 0;
  for (auto& [k, i] : idx) i = n++;
  std::vector<QVec> out;
  for (auto& p : ps) {
    QVec v(n);
    for (auto& [k, c] : p.terms) v[idx.at(k)] = c;
    out.push_back(std::move(v));
  }
  return out;
}

inline PolyQ theta_q(const ThetaChar& d, unsigned e) { return to_q(theta_power(d, e)); }
inline PolyQ sum_theta_q(int g, unsigned e) { return to_q(sum_theta_power(g, e)); }

inline PolyQ restrict_q(const PolyQ& p, int g1, int g2) {
  // restriction is linear in the coefficients; go through the integer routine
  // after clearing denominators
  mpz_class den = 1;
  for (auto& [k, c] : p.terms) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.re.get_den_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.im.get_den_mpz_t());
  }
  if (!den.fits_slong_p()) throw std::overflow_error("denominator too large");
  GaussRational D{mpq_class(den)};
  auto pz = p.scaled(D).map_coeffs<GaussInt>([](const GaussRational& c) { return c.to_int(); });
  return to_q(restriction_split(pz, g1, g2)).scaled(GaussRational(1) / D);
}

inline PolyQ degenerate_q(const PolyQ& p) {
  mpz_class den = 1;
  for (auto& [k, c] : p.terms) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.re.get_den_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.im.get_den_mpz_t());
  }
  if (!den.fits_slong_p()) throw std::overflow_error("denominator too large");
  GaussRational D{mpq_class(den)};
  auto pz = p.scaled(D).map_coeffs<GaussInt>([](const GaussRational& c) { return c.to_int(); });
  return to_q(degeneration_last(pz)).scaled(GaussRational(1) / D);
}

inline PolyQ embed_q(const PolyQ& p, int g1, int g2, bool left) {
  int n1 = 1 << g1, n2 = 1 << g2;
  MonoLayout src(p.nvars), dst(n1 + n2);
  int off = left ? 0 : n1;
  return p.map_monomials(n1 + n2, [&](uint64_t k) {
    uint64_t out = 0;
    for (int s = 0; s < p.nvars; ++s) out += uint64_t(src.exp(k, s)) * dst.unit(off + s);
    return out;
  });
}

inline bool divisible(const PolyQ& p, const PolyQ& d) {
  if (p.is_zero()) return true;
  return exact_divide(p, d, nullptr);
}

// Xi8[0^(1)] = theta[0;0]^4 eta^12
inline PolyQ xi8_g1() { return theta_q({1, 0, 0}, 4) * to_q(eta12()); }

struct Xi8G2 {
  size_t kernel_dim = 0;                 // of [res f1, res f2, res f3, -target]
  std::vector<GaussRational> coeffs;     // on f1, f2, f3
  bool f_restrictions_divisible = false; // by theta00^4(tau_1)
  bool psi_excluded = false;             // restriction of sum theta^16 is not
  bool divisible_by_theta4 = false;      // Xi8 by theta[00;00]^4
  PolyQ xi;
};

inline Xi8G2 xi8_g2_solve() {
  ThetaChar z{2, 0, 0};
  auto s12 = sum_theta_q(2, 12), s8 = sum_theta_q(2, 8);
  std::vector<PolyQ> f{theta_q(z, 16), theta_q(z, 4) * s12, theta_q(z, 8) * s8};
  auto target = embed_q(xi8_g1(), 1, 1, true) * embed_q(xi8_g1(), 1, 1, false);
  std::vector<PolyQ> ps;
  for (auto& p : f) ps.push_back(restrict_q(p, 1, 1));
  ps.push_back(-target);
  auto cols = monomial_columns(ps);
  Xi8G2 r;
  auto th = embed_q(theta_q({1, 0, 0}, 4), 1, 1, true);
  r.f_restrictions_divisible = true;
  for (int i = 0; i < 3; ++i) r.f_restrictions_divisible &= divisible(ps[i], th);
  r.psi_excluded = !divisible(restrict_q(sum_theta_q(2, 16), 1, 1), th);
  std::vector<std::vector<GaussRational>> rows(cols[0].size(), std::vector<GaussRational>(4));
  for (size_t j = 0; j < 4; ++j)
    for (size_t i = 0; i < rows.size(); ++i) rows[i][j] = cols[j][i];
  auto ker = kernel_exact(rows, 4);
  r.kernel_dim = ker.size();
  if (ker.size() == 1 && !ker[0][3].is_zero()) {
    for (int i = 0; i < 3; ++i) r.coeffs.push_back(ker[0][i] / ker[0][3]);
    r.xi = PolyQ(4);
    for (int i = 0; i < 3; ++i) r.xi += f[i].scaled(r.coeffs[i]);
    r.divisible_by_theta4 = divisible(r.xi, theta_q(z, 4));
  }
  return r;
}

struct Xi6G3 {
  size_t rank = 0;  // of a theta0^12 + 2b sum theta^12 + 2c theta0^4 sum theta^8 on g = 2
  bool identity_theta12 = false, identity_sum12 = false, identity_theta4_psi4 = false;
};

inline Xi6G3 xi6_g3_nonexistence(FormContext& ctx) {
  Xi6G3 r;
  ThetaChar z2{2, 0, 0}, z3{3, 0, 0};
  const auto& B = ctx.basis(2, 12);
  std::vector<QVec> cols{coords_q(B, theta_q(z2, 12)), coords_q(B, sum_theta_q(2, 12).scaled(GaussRational(2))),
                         coords_q(B, (theta_q(z2, 4) * sum_theta_q(2, 8)).scaled(GaussRational(2)))};
  r.rank = exact_rank(cols);
  // restriction identities on H1 x H2
  ThetaChar t00{1, 0, 0}, t01{1, 0, 1}, t10{1, 1, 0};
  auto f21 = theta_q(t00, 12).scaled(GaussRational(2)) + theta_q(t01, 12) + theta_q(t10, 12);
  auto e12 = to_q(eta12());
  auto third = GaussRational(mpq_class(1, 3)), two3 = GaussRational(mpq_class(2, 3));
  auto L = [](const PolyQ& p) { return embed_q(p, 1, 2, true); };
  auto R = [](const PolyQ& p) { return embed_q(p, 1, 2, false); };
  r.identity_theta12 = restrict_q(theta_q(z3, 12), 1, 2) == L(f21.scaled(third) + e12) * R(theta_q(z2, 12));
  r.identity_sum12 =
      restrict_q(sum_theta_q(3, 12), 1, 2) == L(f21.scaled(two3) - e12) * R(sum_theta_q(2, 12));
  r.identity_theta4_psi4 = restrict_q(theta_q(z3, 4) * sum_theta_q(3, 8), 1, 2) ==
                           L(f21.scaled(two3)) * R(theta_q(z2, 4) * sum_theta_q(2, 8));
  return r;
}

struct Xi8G3 {
  size_t kernel_dim = 0;               // of [res columns..., -target]
  std::vector<GaussRational> coeffs;   // a, b, c, d
  bool psi_excluded = false;           // restriction of sum theta^16 not divisible by theta00^2(tau_1)
  bool ansatz_divisible = false;       // the four ansatz restrictions are
  bool on_expected_ray(const std::vector<long>& ray) const {
    if (coeffs.size() != ray.size()) return false;
    for (size_t i = 0; i < ray.size(); ++i)
      if (coeffs[i] * GaussRational(ray[0]) != coeffs[0] * GaussRational(ray[i])) return false;
    return !coeffs[0].is_zero();
  }
};

inline Xi8G3 xi8_g3_solve(const LagrangianOrbit& O, const PolyQ& xi8_g2) {
  ThetaChar z{3, 0, 0};
  auto t4 = theta_q(z, 4);
  std::vector<PolyQ> f{t4 * theta_q(z, 12), t4 * sum_theta_q(3, 12), theta_q(z, 8) * sum_theta_q(3, 8),
                       g_bracket(O, z).poly};
  auto target = embed_q(xi8_g1(), 1, 2, true) * embed_q(xi8_g2, 1, 2, false);
  std::vector<PolyQ> ps;
  for (auto& p : f) ps.push_back(restrict_q(p, 1, 2));
  auto th2 = embed_q(theta_q({1, 0, 0}, 2), 1, 2, true);
  Xi8G3 r;
  r.ansatz_divisible = true;
  for (auto& p : ps) r.ansatz_divisible &= divisible(p, th2);
  r.psi_excluded = !divisible(restrict_q(sum_theta_q(3, 16), 1, 2), th2);
  ps.push_back(-target);
  auto cols = monomial_columns(ps);
  std::vector<std::vector<GaussRational>> rows(cols[0].size(), std::vector<GaussRational>(5));
  for (size_t j = 0; j < 5; ++j)
    for (size_t i = 0; i < rows.size(); ++i) rows[i][j] = cols[j][i];
  auto ker = kernel_exact(rows, 5);
  r.kernel_dim = ker.size();
  if (ker.size() == 1 && !ker[0][4].is_zero())
    for (int i = 0; i < 4; ++i) r.coeffs.push_back(ker[0][i] / ker[0][4]);
  return r;
}

}  // namespace thsym
