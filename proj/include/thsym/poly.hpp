#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "thsym/gauss.hpp"
#include "thsym/symplectic.hpp"

namespace thsym {

// Monomials are packed into one 64-bit word, variable 0 in the most
// significant field, so numeric order of keys is lexicographic order of
// exponent vectors.  Up to 8 variables get 8-bit fields, up to 16 get 4 bits.
struct MonoLayout {
  int nvars = 1;
  int width = 8;

  explicit MonoLayout(int n = 1) : nvars(n), width(n <= 8 ? 8 : 4) {
    if (n < 1 || n > 16) throw std::invalid_argument("unsupported number of variables");
  }
  uint32_t max_exp() const { return (1u << width) - 1; }
  int shift(int i) const { return 64 - width * (i + 1); }
  uint32_t exp(uint64_t key, int i) const { return (key >> shift(i)) & max_exp(); }
  uint64_t unit(int i) const { return uint64_t(1) << shift(i); }
  uint64_t pack(const std::vector<uint32_t>& e) const {
    if (int(e.size()) != nvars) throw std::invalid_argument("exponent vector length");
    uint64_t k = 0;
    for (int i = 0; i < nvars; ++i) {
      if (e[i] > max_exp()) throw capacity_error("exponent exceeds packed field width");
      k |= uint64_t(e[i]) << shift(i);
    }
    return k;
  }
  std::vector<uint32_t> unpack(uint64_t k) const {
    std::vector<uint32_t> e(nvars);
    for (int i = 0; i < nvars; ++i) e[i] = exp(k, i);
    return e;
  }
  uint32_t degree(uint64_t k) const {
    uint32_t d = 0;
    for (int i = 0; i < nvars; ++i) d += exp(k, i);
    return d;
  }
};

struct Monomial {
  int nvars = 1;
  uint64_t key = 0;
  MonoLayout layout() const { return MonoLayout(nvars); }
  uint32_t degree() const { return layout().degree(key); }
  std::vector<uint32_t> exponents() const { return layout().unpack(key); }
  bool operator==(const Monomial&) const = default;
  bool operator<(const Monomial& o) const { return key < o.key; }
};

template <class R>
struct SparsePoly {
  int nvars = 1;
  std::unordered_map<uint64_t, R> terms;

  SparsePoly() = default;
  explicit SparsePoly(int n) : nvars(n) { MonoLayout check(n); }

  static SparsePoly genus(int g) { return SparsePoly(1 << g); }
  static SparsePoly constant(int n, const R& c) {
    SparsePoly p(n);
    p.add_term(0, c);
    return p;
  }
  static SparsePoly variable(int n, int i) {
    SparsePoly p(n);
    p.add_term(MonoLayout(n).unit(i), R(1));
    return p;
  }

  MonoLayout layout() const { return MonoLayout(nvars); }
  bool is_zero() const { return terms.empty(); }
  size_t size() const { return terms.size(); }

  void add_term(uint64_t key, const R& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms.try_emplace(key, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }
  R coeff(uint64_t key) const {
    auto it = terms.find(key);
    return it == terms.end() ? R(0) : it->second;
  }

  void check_same(const SparsePoly& o) const {
    if (nvars != o.nvars) throw std::invalid_argument("polynomials over different rings");
  }
  SparsePoly operator+(const SparsePoly& o) const {
    check_same(o);
    SparsePoly r = *this;
    for (auto& [k, c] : o.terms) r.add_term(k, c);
    return r;
  }
  SparsePoly operator-() const {
    SparsePoly r(nvars);
    r.terms.reserve(terms.size());
    for (auto& [k, c] : terms) r.terms.emplace(k, -c);
    return r;
  }
  SparsePoly operator-(const SparsePoly& o) const { return *this + (-o); }
  SparsePoly& operator+=(const SparsePoly& o) {
    check_same(o);
    for (auto& [k, c] : o.terms) add_term(k, c);
    return *this;
  }
  SparsePoly& operator-=(const SparsePoly& o) { return *this += -o; }
  SparsePoly scaled(const R& s) const {
    SparsePoly r(nvars);
    if (s.is_zero()) return r;
    for (auto& [k, c] : terms) r.add_term(k, c * s);
    return r;
  }
  SparsePoly operator*(const SparsePoly& o) const {
    check_same(o);
    SparsePoly r(nvars);
    if (is_zero() || o.is_zero()) return r;
    if (degree() + o.degree() > layout().max_exp())
      throw capacity_error("product degree exceeds packed monomial capacity");
    r.terms.reserve(terms.size() * 2 + o.terms.size() * 2);
    for (auto& [k1, c1] : terms)
      for (auto& [k2, c2] : o.terms) r.add_term(k1 + k2, c1 * c2);
    return r;
  }
  SparsePoly pow(unsigned e) const {
    SparsePoly r = constant(nvars, R(1)), b = *this;
    while (e) {
      if (e & 1) r = r * b;
      e >>= 1;
      if (e) b = b * b;
    }
    return r;
  }
  bool operator==(const SparsePoly& o) const {
    if (nvars != o.nvars || terms.size() != o.terms.size()) return false;
    for (auto& [k, c] : terms) {
      auto it = o.terms.find(k);
      if (it == o.terms.end() || !(it->second == c)) return false;
    }
    return true;
  }
  bool operator!=(const SparsePoly& o) const { return !(*this == o); }

  uint32_t degree() const {
    uint32_t d = 0;
    for (auto& [k, c] : terms) d = std::max(d, layout().degree(k));
    return d;
  }
  bool is_homogeneous() const {
    if (terms.empty()) return true;
    uint32_t d = layout().degree(terms.begin()->first);
    for (auto& [k, c] : terms)
      if (layout().degree(k) != d) return false;
    return true;
  }
  // terms in canonical order: descending lexicographic
  std::vector<std::pair<uint64_t, R>> sorted_terms() const {
    std::vector<std::pair<uint64_t, R>> v(terms.begin(), terms.end());
    std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first > b.first; });
    return v;
  }
  template <class S, class F>
  SparsePoly<S> map_coeffs(F f) const {
    SparsePoly<S> r(nvars);
    for (auto& [k, c] : terms) r.add_term(k, f(c));
    return r;
  }
  // substitute each monomial through a monomial map (key -> key)
  template <class F>
  SparsePoly map_monomials(int new_nvars, F f) const {
    SparsePoly r(new_nvars);
    for (auto& [k, c] : terms) r.add_term(f(k), c);
    return r;
  }
};

using PolyZ = SparsePoly<GaussInt>;
using PolyQ = SparsePoly<GaussRational>;

inline PolyQ to_q(const PolyZ& p) {
  return p.map_coeffs<GaussRational>([](const GaussInt& c) { return GaussRational(c); });
}
inline PolyZ to_z(const PolyQ& p) {
  return p.map_coeffs<GaussInt>([](const GaussRational& c) { return c.to_int(); });
}

template <class R>
std::complex<double> to_complex(const R& c);
template <>
inline std::complex<double> to_complex(const GaussInt& c) {
  return {double(c.re), double(c.im)};
}
template <>
inline std::complex<double> to_complex(const GaussRational& c) {
  return {c.re.get_d(), c.im.get_d()};
}

// value and sum of absolute term values at a complex point
template <class R>
std::pair<std::complex<double>, double> evaluate(const SparsePoly<R>& p,
                                                 const std::vector<std::complex<double>>& x) {
  if (int(x.size()) != p.nvars) throw std::invalid_argument("point dimension");
  auto lay = p.layout();
  std::complex<double> s = 0;
  double mag = 0;
  for (auto& [k, c] : p.sorted_terms()) {
    std::complex<double> t = to_complex(c);
    for (int i = 0; i < p.nvars; ++i)
      for (uint32_t e = lay.exp(k, i); e; --e) t *= x[i];
    s += t;
    mag += std::abs(t);
  }
  return {s, mag};
}

// One term per line: "re_num/re_den im_num/im_den e(0) e(1) ...".
template <class R>
void write_poly(std::ostream& os, const SparsePoly<R>& p) {
  auto lay = p.layout();
  for (auto& [k, c] : p.sorted_terms()) {
    os << GaussRational(c).str();
    for (int i = 0; i < p.nvars; ++i) os << " " << lay.exp(k, i);
    os << "\n";
  }
}

inline PolyQ read_poly(std::istream& is, int nvars) {
  PolyQ p(nvars);
  MonoLayout lay(nvars);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string r, i;
    ls >> r >> i;
    std::vector<uint32_t> e(nvars);
    for (auto& x : e)
      if (!(ls >> x)) throw std::runtime_error("malformed polynomial line");
    p.add_term(lay.pack(e), GaussRational::parse(r, i));
  }
  return p;
}

template <class R>
std::string poly_text(const SparsePoly<R>& p) {
  std::ostringstream os;
  write_poly(os, p);
  return os.str();
}

// 64-bit FNV-1a, used for content addressing
inline uint64_t fnv1a(const std::string& s, uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

template <class R>
uint64_t content_hash(const SparsePoly<R>& p) {
  return fnv1a(poly_text(p));
}

// Exact division p / d, or false if d does not divide p.  Lexicographic
// leading terms; valid over a field.
inline bool exact_divide(const PolyQ& p, const PolyQ& d, PolyQ* quotient) {
  if (d.is_zero()) throw std::domain_error("division by zero polynomial");
  auto dt = d.sorted_terms();
  uint64_t lk = dt.front().first;
  GaussRational lc = dt.front().second;
  auto lay = p.layout();
  auto divides = [&](uint64_t a, uint64_t b) {  // does monomial b divide a
    for (int i = 0; i < p.nvars; ++i)
      if (lay.exp(a, i) < lay.exp(b, i)) return false;
    return true;
  };
  std::map<uint64_t, GaussRational, std::greater<uint64_t>> r(p.terms.begin(), p.terms.end());
  PolyQ q(p.nvars);
  // repeatedly cancel the leading term of the remainder
  while (!r.empty()) {
    auto [best, bc] = *r.begin();
    if (!divides(best, lk)) return false;
    GaussRational f = bc / lc;
    uint64_t mk = best - lk;
    q.add_term(mk, f);
    for (auto& [k, c] : dt) {
      auto [it, fresh] = r.try_emplace(k + mk, -(c * f));
      if (!fresh) {
        it->second -= c * f;
        if (it->second.is_zero()) r.erase(it);
      }
    }
  }
  if (quotient) *quotient = q;
  return true;
}

}  // namespace thsym
