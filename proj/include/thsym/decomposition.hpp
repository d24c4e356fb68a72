#pragma once

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "thsym/lifts.hpp"
#include "thsym/linalg.hpp"

namespace thsym {

// ------------------------------------------------------------ class sum

struct Casimir {
  RepMatrix C;               // C = scale * ints
  GaussInt trace_int;        // trace of the integer part of C
  GaussInt trace_single;     // trace of the integer part of rho(t_v0)
  int g = 1;
  int degree = 4;
  std::vector<std::vector<uint32_t>> blocks;  // connected components
};

inline std::vector<std::vector<uint32_t>> components(const RepMatrix& M) {
  std::vector<uint32_t> parent(M.n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<uint32_t(uint32_t)> find = [&](uint32_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (size_t j = 0; j < M.n; ++j)
    for (auto& [i, c] : M.cols[j]) {
      uint32_t a = find(i), b = find(uint32_t(j));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::map<uint32_t, std::vector<uint32_t>> groups;
  for (size_t j = 0; j < M.n; ++j) groups[find(uint32_t(j))].push_back(uint32_t(j));
  std::vector<std::vector<uint32_t>> out;
  for (auto& [k, v] : groups) out.push_back(std::move(v));
  return out;
}

// C := sum over nonzero v of rho(t_v)
inline Casimir casimir_matrix(const OrbitSumBasis& B) {
  Casimir K;
  K.g = B.g;
  K.degree = B.degree;
  std::vector<std::unordered_map<uint32_t, GaussInt>> acc(B.size());
  bool first = true;
  for (auto v : nonzero_vectors(B.g)) {
    auto M = induced_on_invariants(v, B);
    if (first) {
      K.C.scale = M.scale;
      for (size_t j = 0; j < M.n; ++j) K.trace_single += M.at(j, j);
      first = false;
    }
    for (size_t j = 0; j < M.n; ++j)
      for (auto& [i, c] : M.cols[j]) acc[j][i] += c;
  }
  K.C.n = B.size();
  K.C.cols.resize(B.size());
  K.C.label = "C";
  for (size_t j = 0; j < B.size(); ++j) {
    for (auto& [i, c] : acc[j])
      if (!c.is_zero()) K.C.cols[j].emplace_back(i, c);
    std::sort(K.C.cols[j].begin(), K.C.cols[j].end(), [](auto& a, auto& b) { return a.first < b.first; });
    K.trace_int += K.C.at(j, j);
  }
  K.blocks = components(K.C);
  return K;
}

// ------------------------------------------------------------ irreducibles

struct IrrepRecord {
  int g = 1;
  std::string name;
  int64_t dim = 1;
  int64_t chi_tv = 1;
  int64_t lambda() const {
    int64_t n = ((int64_t(1) << (2 * g)) - 1) * chi_tv;
    if (n % dim) throw std::logic_error("non-integral eigenvalue for " + name);
    return n / dim;
  }
};

// role names used by the O+ counts
struct DistinguishedIrreps {
  std::string trivial, sigma_theta, rho_theta, rho_r;
};

inline std::vector<IrrepRecord> irrep_table(int g) {
  std::vector<IrrepRecord> t;
  auto add = [&](const char* n, int64_t d, int64_t c) { t.push_back({g, n, d, c}); };
  switch (g) {
    case 1:  // S3
      add("[3]", 1, 1);
      add("[21]", 2, 0);
      add("[111]", 1, -1);
      break;
    case 2:  // S6, transvections = transpositions; chi = dim * content / 15
      add("[6]", 1, 1);
      add("[51]", 5, 3);
      add("[42]", 9, 3);
      add("[411]", 10, 2);
      add("[33]", 5, 1);
      add("[321]", 16, 0);
      add("[3111]", 10, -2);
      add("[222]", 5, -1);
      add("[2211]", 9, -3);
      add("[21111]", 5, -3);
      add("[111111]", 1, -1);
      break;
    case 3:  // chi = lambda * dim / 63 from the eigenvalue lists
      add("1", 1, 1);
      add("15a", 15, -5);
      add("21b", 21, -11);
      add("35b", 35, 15);
      add("84a", 84, 4);
      add("105c", 105, 5);
      add("189c", 189, -39);
      add("216a", 216, -24);
      add("280b", 280, 40);
      add("336a", 336, -16);
      add("420a", 420, 20);
      add("27a", 27, 15);
      add("168a", 168, 40);
      add("210b", 210, 10);
      add("105a", 105, -35);
      add("105b", 105, 25);
      add("210a", 210, 50);
      add("21a", 21, 9);
      add("35a", 35, -5);
      break;
    case 4:
      add("1", 1, 1);
      add("51", 51, -21);
      add("135", 135, 63);
      add("918", 918, -90);
      add("1190", 1190, 182);
      break;
    default:
      throw std::invalid_argument("no irreducible table for this genus");
  }
  for (auto& r : t) r.lambda();
  return t;
}

inline DistinguishedIrreps distinguished(int g) {
  switch (g) {
    case 1: return {"[3]", "[21]", "[21]", "[111]"};
    case 2: return {"[6]", "[42]", "[222]", "[21111]"};
    case 3: return {"1", "35b", "15a", "21b"};
    case 4: return {"1", "135", "51", ""};
  }
  throw std::invalid_argument("genus");
}

inline std::vector<int64_t> candidate_lambdas(const std::vector<IrrepRecord>& t) {
  std::vector<int64_t> out;
  for (auto& r : t) out.push_back(r.lambda());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ------------------------------------------------------------ spectrum

struct SpectrumResult {
  std::vector<std::pair<int64_t, int64_t>> pairs;  // (lambda, multiplicity), lambda descending
  size_t dim = 0;
  std::vector<uint32_t> primes;
  bool primes_agree = true;
  bool exact_fallback = false;
  bool sum_ok = false, trace_ok = false, class_trace_ok = false, annihilator_ok = false;
  size_t probes = 0;
  size_t max_block = 0, nblocks = 0;
  bool certified() const { return sum_ok && trace_ok && class_trace_ok && annihilator_ok; }
};

// mu = lambda / scale must be a Gaussian integer
inline GaussInt scaled_eigenvalue(const RepMatrix& C, int64_t lambda) {
  GaussRational mu = GaussRational(long(lambda)) / C.scale;
  return mu.to_int();
}

inline size_t block_rank_modp(const RepMatrix& C, const std::vector<uint32_t>& blk,
                              const std::vector<int32_t>& pos, GaussInt mu, const ModField& F) {
  size_t b = blk.size();
  ModMat m(b, std::vector<uint32_t>(b, 0));
  for (size_t jj = 0; jj < b; ++jj)
    for (auto& [i, c] : C.cols[blk[jj]]) m[pos[i]][jj] = F.from_gauss(c);
  uint32_t mm = F.from_gauss(mu);
  for (size_t k = 0; k < b; ++k) m[k][k] = F.sub(m[k][k], mm);
  return rank_modp(std::move(m), F);
}

inline size_t block_rank_exact(const RepMatrix& C, const std::vector<uint32_t>& blk,
                               const std::vector<int32_t>& pos, GaussInt mu) {
  size_t b = blk.size();
  std::vector<std::vector<GaussBig>> m(b, std::vector<GaussBig>(b));
  for (size_t jj = 0; jj < b; ++jj)
    for (auto& [i, c] : C.cols[blk[jj]]) m[pos[i]][jj] = GaussBig(c);
  for (size_t k = 0; k < b; ++k) m[k][k] = m[k][k] - GaussBig(mu);
  return bareiss_rank(std::move(m));
}

inline SpectrumResult spectrum(const Casimir& K, const std::vector<int64_t>& candidates,
                               const std::vector<uint32_t>& primes = default_primes(), size_t nprobes = 8,
                               uint64_t seed = 12345) {
  const RepMatrix& C = K.C;
  SpectrumResult res;
  res.dim = C.n;
  res.primes = primes;
  res.nblocks = K.blocks.size();
  std::vector<int32_t> pos(C.n, -1);
  for (auto& blk : K.blocks) {
    res.max_block = std::max(res.max_block, blk.size());
    for (size_t k = 0; k < blk.size(); ++k) pos[blk[k]] = int32_t(k);
  }
  std::vector<ModField> fields;
  for (auto p : primes) fields.emplace_back(p);
  std::vector<std::pair<int64_t, GaussInt>> found;
  int64_t total = 0;
  for (int64_t lam : candidates) {
    GaussInt mu = scaled_eigenvalue(C, lam);
    int64_t mult = 0;
    for (auto& blk : K.blocks) {
      std::vector<size_t> ranks;
      for (auto& F : fields) ranks.push_back(block_rank_modp(C, blk, pos, mu, F));
      size_t r = ranks[0];
      if (std::any_of(ranks.begin(), ranks.end(), [&](size_t x) { return x != r; })) {
        res.primes_agree = false;
        res.exact_fallback = true;
        r = block_rank_exact(C, blk, pos, mu);
      }
      mult += int64_t(blk.size() - r);
    }
    if (mult > 0) {
      res.pairs.push_back({lam, mult});
      found.push_back({lam, mu});
      total += mult;
    }
  }
  std::sort(res.pairs.begin(), res.pairs.end(), [](auto& a, auto& b) { return a.first > b.first; });
  res.sum_ok = size_t(total) == C.n;
  // trace
  GaussInt tr;
  for (auto& [lam, mu] : found) {
    int64_t m = 0;
    for (auto& [l, mm] : res.pairs)
      if (l == lam) m = mm;
    tr += mu * GaussInt(m);
  }
  res.trace_ok = tr == K.trace_int;
  res.class_trace_ok = K.trace_int == K.trace_single * GaussInt((int64_t(1) << (2 * K.g)) - 1);
  // annihilator on random probes, exact
  std::mt19937_64 rng(seed);
  res.annihilator_ok = res.sum_ok;
  res.probes = nprobes;
  for (size_t p = 0; p < nprobes && res.annihilator_ok; ++p) {
    std::vector<GaussBig> x(C.n);
    for (auto& z : x) z = GaussBig(long(int(rng() % 11) - 5));
    for (auto& [lam, mu] : found) {
      auto y = C.apply_int(x);
      GaussBig bm(mu);
      for (size_t i = 0; i < C.n; ++i) y[i] = y[i] - bm * x[i];
      x.swap(y);
    }
    for (auto& z : x)
      if (!z.is_zero()) res.annihilator_ok = false;
  }
  if (!res.sum_ok) throw std::domain_error("candidate eigenvalues do not exhaust the space");
  return res;
}

// ------------------------------------------------------------ ledger

struct SideCondition {
  std::string irrep;
  int64_t at_least = 1;
  int64_t at_most = -1;  // -1: no upper bound
};

struct LedgerUnresolved {
  int64_t lambda = 0, dim = 0;
  std::vector<std::vector<std::pair<std::string, int64_t>>> solutions;
};

struct DecompositionLedger {
  int g = 1;
  int degree = 4;
  std::vector<std::pair<IrrepRecord, int64_t>> entries;
  std::vector<LedgerUnresolved> unresolved;
  // multiplicity of an irrep if it is the same in every admissible solution
  std::optional<int64_t> determined(const std::string& name) const {
    for (auto& [r, m] : entries)
      if (r.name == name) return m;
    for (auto& u : unresolved) {
      std::optional<int64_t> val;
      bool appears = false;
      for (auto& sol : u.solutions) {
        int64_t m = 0;
        for (auto& [n, k] : sol)
          if (n == name) {
            m = k;
            appears = true;
          }
        if (val && *val != m) return std::nullopt;
        val = m;
      }
      if (appears) return val;
    }
    return 0;
  }
  int64_t accounted_dim() const {
    int64_t s = 0;
    for (auto& [r, m] : entries) s += r.dim * m;
    for (auto& u : unresolved) s += u.dim;
    return s;
  }
};

inline DecompositionLedger decompose(const SpectrumResult& s, const std::vector<IrrepRecord>& table,
                                     const std::vector<SideCondition>& side = {}, int g = 0, int degree = 0) {
  DecompositionLedger L;
  L.g = g ? g : (table.empty() ? 1 : table[0].g);
  L.degree = degree;
  std::map<std::string, SideCondition> need;
  for (auto& c : side) need[c.irrep] = c;
  for (auto& [lam, m] : s.pairs) {
    std::vector<IrrepRecord> cands;
    for (auto& r : table)
      if (r.lambda() == lam) cands.push_back(r);
    if (cands.empty()) throw std::domain_error("no irreducible with eigenvalue " + std::to_string(lam));
    std::vector<std::vector<int64_t>> sols;
    std::vector<int64_t> cur(cands.size());
    std::function<void(size_t, int64_t)> rec = [&](size_t i, int64_t left) {
      if (i == cands.size()) {
        if (left == 0) sols.push_back(cur);
        return;
      }
      for (int64_t k = 0; k * cands[i].dim <= left; ++k) {
        cur[i] = k;
        rec(i + 1, left - k * cands[i].dim);
      }
      cur[i] = 0;
    };
    rec(0, m);
    if (sols.empty()) throw std::domain_error("no integral decomposition for eigenvalue " + std::to_string(lam));
    std::vector<std::vector<int64_t>> ok;
    for (auto& sol : sols) {
      bool good = true;
      for (size_t i = 0; i < cands.size(); ++i) {
        auto it = need.find(cands[i].name);
        if (it == need.end()) continue;
        if (sol[i] < it->second.at_least) good = false;
        if (it->second.at_most >= 0 && sol[i] > it->second.at_most) good = false;
      }
      if (good) ok.push_back(sol);
    }
    if (ok.empty()) throw std::domain_error("side conditions exclude every decomposition at eigenvalue " + std::to_string(lam));
    if (ok.size() == 1) {
      for (size_t i = 0; i < cands.size(); ++i)
        if (ok[0][i]) L.entries.push_back({cands[i], ok[0][i]});
    } else {
      LedgerUnresolved u{lam, m, {}};
      for (auto& sol : ok) {
        std::vector<std::pair<std::string, int64_t>> v;
        for (size_t i = 0; i < cands.size(); ++i)
          if (sol[i]) v.push_back({cands[i].name, sol[i]});
        u.solutions.push_back(v);
      }
      L.unresolved.push_back(u);
    }
  }
  return L;
}

// (dim of O+-invariants, dim of epsilon-anti-invariants); nullopt if the
// ledger does not determine the relevant multiplicities.
inline std::pair<std::optional<int64_t>, std::optional<int64_t>> oplus_invariant_dims(const DecompositionLedger& L) {
  auto d = distinguished(L.g);
  auto add = [&](const std::string& a, const std::string& b) -> std::optional<int64_t> {
    auto x = L.determined(a);
    auto y = b.empty() ? std::optional<int64_t>(std::nullopt) : L.determined(b);
    if (!x || (!b.empty() && !y)) return std::nullopt;
    return *x + (b.empty() ? 0 : *y);
  };
  std::optional<int64_t> inv = add(d.trivial, d.sigma_theta);
  std::optional<int64_t> anti = d.rho_r.empty() ? std::nullopt : add(d.rho_theta, d.rho_r);
  if (L.g == 1) {
    // sigma_theta and rho_theta coincide
    auto a = L.determined("[3]"), b = L.determined("[21]"), c = L.determined("[111]");
    inv = (a && b) ? std::optional<int64_t>(*a + *b) : std::nullopt;
    anti = (b && c) ? std::optional<int64_t>(*b + *c) : std::nullopt;
  }
  return {inv, anti};
}

// Side conditions: g=2 from the plethysm Sym^k of the 5-dim weight-2 space,
// g=3 from Sym^3(15a) containing 105c and from Sym^4 / sextet spans at weight 8.
inline std::vector<SideCondition> default_side_conditions(int g, int degree) {
  if (g == 2 && (degree == 12 || degree == 16)) return {{"[3111]", 1, 1}};
  if (g == 3 && degree == 12) return {{"105c", 1}};
  if (g == 3 && degree == 16) return {{"35b", 4}, {"84a", 4}, {"105c", 1}, {"420a", 1}};
  return {};
}

inline nlohmann::ordered_json ledger_json(const SpectrumResult& s, const DecompositionLedger& L) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["space"] = {{"g", L.g}, {"weight", L.degree / 2}};
  ordered_json sp = ordered_json::array();
  for (auto& [l, m] : s.pairs) sp.push_back({l, m});
  j["spectrum"] = sp;
  ordered_json dec = ordered_json::array();
  for (auto& [r, m] : L.entries) dec.push_back({r.name, m});
  j["decomposition"] = dec;
  ordered_json un = ordered_json::array();
  for (auto& u : L.unresolved) {
    ordered_json sols = ordered_json::array();
    for (auto& sol : u.solutions) {
      ordered_json x = ordered_json::array();
      for (auto& [n, k] : sol) x.push_back({n, k});
      sols.push_back(x);
    }
    un.push_back({{"lambda", u.lambda}, {"dim", u.dim}, {"candidates", sols}});
  }
  j["unresolved"] = un;
  j["certificates"] = {{"primes", s.primes},
                       {"primes_agree", s.primes_agree},
                       {"exact_fallback", s.exact_fallback},
                       {"multiplicity_sum", s.sum_ok},
                       {"trace", s.trace_ok},
                       {"class_trace", s.class_trace_ok},
                       {"annihilator", s.annihilator_ok},
                       {"probes", s.probes},
                       {"blocks", s.nblocks},
                       {"max_block", s.max_block}};
  return j;
}

}  // namespace thsym
