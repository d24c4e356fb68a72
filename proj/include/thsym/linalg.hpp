#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "thsym/gauss.hpp"

namespace thsym {

// ------------------------------------------------------------ modular field

struct ModField {
  uint32_t p = 1000033;
  uint32_t i_root = 0;  // the smaller square root of -1

  explicit ModField(uint32_t prime) : p(prime) {
    if (p % 4 != 1) throw std::invalid_argument("prime must be 1 mod 4");
    for (uint64_t z = 2; z < p; ++z) {
      if (pow(z, (p - 1) / 2) != p - 1) continue;
      uint32_t r = pow(z, (p - 1) / 4);
      i_root = std::min(r, p - r);
      break;
    }
    if (mul(i_root, i_root) != p - 1) throw std::logic_error("no square root of -1 found");
  }
  uint32_t add(uint32_t a, uint32_t b) const { return (a + b) % p; }
  uint32_t sub(uint32_t a, uint32_t b) const { return (a + p - b) % p; }
  uint32_t mul(uint64_t a, uint64_t b) const { return uint32_t(a * b % p); }
  uint32_t pow(uint64_t a, uint64_t e) const {
    uint64_t r = 1;
    a %= p;
    while (e) {
      if (e & 1) r = r * a % p;
      a = a * a % p;
      e >>= 1;
    }
    return uint32_t(r);
  }
  uint32_t inv(uint32_t a) const {
    if (a % p == 0) throw std::domain_error("inverse of zero mod p");
    return pow(a, p - 2);
  }
  uint32_t from_int(int64_t x) const {
    int64_t r = x % int64_t(p);
    return uint32_t(r < 0 ? r + p : r);
  }
  uint32_t from_mpz(const mpz_class& x) const {
    return uint32_t(mpz_fdiv_ui(x.get_mpz_t(), p));
  }
  uint32_t from_gauss(const GaussInt& z) const {
    return add(from_int(z.re), mul(i_root, from_int(z.im)));
  }
  uint32_t from_gauss(const GaussBig& z) const {
    return add(from_mpz(z.re), mul(i_root, from_mpz(z.im)));
  }
  // defined only when the denominator is a unit mod p
  uint32_t from_gauss(const GaussRational& z) const {
    uint32_t re = mul(from_mpz(z.re.get_num()), inv(from_mpz(z.re.get_den())));
    uint32_t im = mul(from_mpz(z.im.get_num()), inv(from_mpz(z.im.get_den())));
    return add(re, mul(i_root, im));
  }
};

inline bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline const std::vector<uint32_t>& default_primes() {
  static const std::vector<uint32_t> ps{1000033, 1000037};
  return ps;
}

// first n primes p = 1 mod 4 from 1000033 on; n = 2 gives default_primes()
inline std::vector<uint32_t> spectrum_primes(size_t n) {
  std::vector<uint32_t> out;
  for (uint32_t p = 1000033; out.size() < n; p += 4)
    if (is_prime(p)) out.push_back(p);
  return out;
}

using ModMat = std::vector<std::vector<uint32_t>>;

// In-place row echelon form; returns the pivot columns.
inline std::vector<size_t> echelon_modp(ModMat& m, const ModField& F, bool reduced = false) {
  std::vector<size_t> pivots;
  if (m.empty()) return pivots;
  size_t rows = m.size(), cols = m[0].size(), r = 0;
  const uint64_t p = F.p;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[r], m[piv]);
    uint32_t iv = F.inv(m[r][c]);
    for (size_t k = c; k < cols; ++k) m[r][k] = F.mul(m[r][k], iv);
    const uint32_t* pr = m[r].data();
    for (size_t i = reduced ? 0 : r + 1; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      uint64_t f = p - m[i][c];
      uint32_t* row = m[i].data();
      for (size_t k = c; k < cols; ++k)
        if (pr[k]) row[k] = uint32_t((row[k] + f * pr[k]) % p);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline size_t rank_modp(ModMat m, const ModField& F) { return echelon_modp(m, F).size(); }

// Basis of {x : M x = 0} for an m x n matrix.
inline ModMat kernel_modp(ModMat m, size_t n, const ModField& F) {
  auto piv = echelon_modp(m, F, true);
  std::vector<int> is_piv(n, -1);
  for (size_t r = 0; r < piv.size(); ++r) is_piv[piv[r]] = int(r);
  ModMat ker;
  for (size_t f = 0; f < n; ++f) {
    if (is_piv[f] >= 0) continue;
    std::vector<uint32_t> x(n, 0);
    x[f] = 1;
    for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = F.sub(0, m[r][f]);
    ker.push_back(std::move(x));
  }
  return ker;
}

// ------------------------------------------------------------ exact, fraction free

// Rank of a matrix over Z[i] by Bareiss elimination.  Rows are modified.
inline size_t bareiss_rank(std::vector<std::vector<GaussBig>> m) {
  if (m.empty()) return 0;
  size_t rows = m.size(), cols = m[0].size(), r = 0;
  GaussBig prev(1);
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && m[piv][c].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(m[r], m[piv]);
    for (size_t i = r + 1; i < rows; ++i) {
      for (size_t k = c + 1; k < cols; ++k) {
        GaussBig t = m[r][c] * m[i][k] - m[i][c] * m[r][k];
        m[i][k] = t.exact_div(prev);
      }
      m[i][c] = GaussBig();
    }
    prev = m[r][c];
    ++r;
  }
  return r;
}

// ------------------------------------------------------------ exact over Q(i)

struct RrefResult {
  std::vector<std::vector<GaussRational>> rows;
  std::vector<size_t> pivots;
};

inline RrefResult rref_exact(std::vector<std::vector<GaussRational>> m) {
  RrefResult res;
  if (m.empty()) return res;
  size_t rows = m.size(), cols = m[0].size(), r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && m[piv][c].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(m[r], m[piv]);
    GaussRational iv = GaussRational(1) / m[r][c];
    for (size_t k = c; k < cols; ++k)
      if (!m[r][k].is_zero()) m[r][k] = m[r][k] * iv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      GaussRational f = m[i][c];
      for (size_t k = c; k < cols; ++k)
        if (!m[r][k].is_zero()) m[i][k] -= f * m[r][k];
    }
    res.pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  res.rows = std::move(m);
  return res;
}

inline size_t rank_exact(const std::vector<std::vector<GaussRational>>& m) {
  return rref_exact(m).pivots.size();
}

// Kernel basis of an m x n matrix (given by rows).
inline std::vector<std::vector<GaussRational>> kernel_exact(
    const std::vector<std::vector<GaussRational>>& m, size_t n) {
  auto R = rref_exact(m);
  std::vector<int> is_piv(n, -1);
  for (size_t r = 0; r < R.pivots.size(); ++r) is_piv[R.pivots[r]] = int(r);
  std::vector<std::vector<GaussRational>> ker;
  for (size_t f = 0; f < n; ++f) {
    if (is_piv[f] >= 0) continue;
    std::vector<GaussRational> x(n);
    x[f] = GaussRational(1);
    for (size_t r = 0; r < R.pivots.size(); ++r) x[R.pivots[r]] = -R.rows[r][f];
    ker.push_back(std::move(x));
  }
  return ker;
}

// Solve sum_j x_j cols[j] = rhs.  Returns nullopt when inconsistent; also
// reports the dimension of the homogeneous solution space.
struct LinearSolve {
  std::optional<std::vector<GaussRational>> solution;
  size_t homogeneous_kernel_dim = 0;
  size_t rank = 0;
};

inline LinearSolve solve_exact(const std::vector<std::vector<GaussRational>>& cols,
                               const std::vector<GaussRational>& rhs) {
  size_t n = cols.size(), m = rhs.size();
  std::vector<std::vector<GaussRational>> aug(m, std::vector<GaussRational>(n + 1));
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) aug[i][j] = cols[j][i];
    aug[i][n] = rhs[i];
  }
  auto R = rref_exact(aug);
  LinearSolve out;
  size_t rank = 0;
  for (size_t c : R.pivots)
    if (c < n) ++rank;
  out.rank = rank;
  out.homogeneous_kernel_dim = n - rank;
  if (!R.pivots.empty() && R.pivots.back() == n) return out;
  std::vector<GaussRational> x(n);
  for (size_t r = 0; r < R.pivots.size(); ++r) x[R.pivots[r]] = R.rows[r][n];
  out.solution = x;
  return out;
}

}  // namespace thsym
