#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace thsym {

struct overflow_error : std::overflow_error {
  using std::overflow_error::overflow_error;
};

// Gaussian integer with 64-bit parts; every operation is overflow checked.
struct GaussInt {
  int64_t re = 0, im = 0;

  GaussInt() = default;
  GaussInt(int64_t r, int64_t i = 0) : re(r), im(i) {}

  static int64_t add(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw overflow_error("GaussInt overflow");
    return r;
  }
  static int64_t sub(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw overflow_error("GaussInt overflow");
    return r;
  }
  static int64_t mul(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw overflow_error("GaussInt overflow");
    return r;
  }

  bool is_zero() const { return re == 0 && im == 0; }
  bool operator<(const GaussInt& o) const { return re < o.re || (re == o.re && im < o.im); }
  GaussInt operator+(const GaussInt& o) const { return {add(re, o.re), add(im, o.im)}; }
  GaussInt operator-(const GaussInt& o) const { return {sub(re, o.re), sub(im, o.im)}; }
  GaussInt operator-() const { return {sub(0, re), sub(0, im)}; }
  GaussInt operator*(const GaussInt& o) const {
    return {sub(mul(re, o.re), mul(im, o.im)), add(mul(re, o.im), mul(im, o.re))};
  }
  GaussInt& operator+=(const GaussInt& o) { return *this = *this + o; }
  GaussInt& operator-=(const GaussInt& o) { return *this = *this - o; }
  GaussInt& operator*=(const GaussInt& o) { return *this = *this * o; }
  bool operator==(const GaussInt&) const = default;
  GaussInt conj() const { return {re, sub(0, im)}; }
  // i^k
  static GaussInt unit(int k) {
    static const GaussInt u[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return u[((k % 4) + 4) % 4];
  }
};

inline std::ostream& operator<<(std::ostream& os, const GaussInt& z) {
  return os << "(" << z.re << (z.im < 0 ? "" : "+") << z.im << "i)";
}

// Exact element of Q(i).
struct GaussRational {
  mpq_class re, im;

  GaussRational() : re(0), im(0) {}
  GaussRational(long r) : re(r), im(0) {}
  GaussRational(int r) : re(r), im(0) {}
  GaussRational(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }
  GaussRational(const GaussInt& z) : re(mpz_class(std::to_string(z.re))), im(mpz_class(std::to_string(z.im))) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  GaussRational operator+(const GaussRational& o) const { return {re + o.re, im + o.im}; }
  GaussRational operator-(const GaussRational& o) const { return {re - o.re, im - o.im}; }
  GaussRational operator-() const { return {-re, -im}; }
  GaussRational operator*(const GaussRational& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  GaussRational operator/(const GaussRational& o) const {
    mpq_class n = o.re * o.re + o.im * o.im;
    if (sgn(n) == 0) throw std::domain_error("division by zero in Q(i)");
    return {(re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n};
  }
  GaussRational& operator+=(const GaussRational& o) { return *this = *this + o; }
  GaussRational& operator-=(const GaussRational& o) { return *this = *this - o; }
  GaussRational& operator*=(const GaussRational& o) { return *this = *this * o; }
  bool operator==(const GaussRational& o) const { return re == o.re && im == o.im; }
  bool operator!=(const GaussRational& o) const { return !(*this == o); }
  GaussRational conj() const { return {re, -im}; }
  bool is_gauss_integer() const { return re.get_den() == 1 && im.get_den() == 1; }
  GaussInt to_int() const {
    if (!is_gauss_integer() || !re.get_num().fits_slong_p() || !im.get_num().fits_slong_p())
      throw overflow_error("not a small Gaussian integer");
    return {re.get_num().get_si(), im.get_num().get_si()};
  }

  // "re_num/re_den im_num/im_den"
  std::string str() const {
    std::ostringstream os;
    os << re.get_num() << "/" << re.get_den() << " " << im.get_num() << "/" << im.get_den();
    return os.str();
  }
  static GaussRational parse(const std::string& r, const std::string& i) {
    return {mpq_class(r), mpq_class(i)};
  }
};

inline std::ostream& operator<<(std::ostream& os, const GaussRational& z) {
  os << z.re;
  if (sgn(z.im) != 0) os << (sgn(z.im) > 0 ? "+" : "") << z.im << "i";
  return os;
}

// Gaussian integer with arbitrary precision parts, for fraction-free elimination.
struct GaussBig {
  mpz_class re, im;

  GaussBig() : re(0), im(0) {}
  GaussBig(mpz_class r, mpz_class i = 0) : re(std::move(r)), im(std::move(i)) {}
  explicit GaussBig(long r) : re(r), im(0) {}
  GaussBig(const GaussInt& z) : re(static_cast<long>(z.re)), im(static_cast<long>(z.im)) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  GaussBig operator+(const GaussBig& o) const { return {re + o.re, im + o.im}; }
  GaussBig operator-(const GaussBig& o) const { return {re - o.re, im - o.im}; }
  GaussBig& operator+=(const GaussBig& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussBig operator-() const { return {-re, -im}; }
  GaussBig operator*(const GaussBig& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  bool operator==(const GaussBig& o) const { return re == o.re && im == o.im; }
  // exact division, throws if not divisible
  GaussBig exact_div(const GaussBig& d) const {
    mpz_class n = d.re * d.re + d.im * d.im;
    mpz_class r = re * d.re + im * d.im, i = im * d.re - re * d.im;
    if (!mpz_divisible_p(r.get_mpz_t(), n.get_mpz_t()) || !mpz_divisible_p(i.get_mpz_t(), n.get_mpz_t()))
      throw std::logic_error("inexact Gaussian division");
    mpz_class qr, qi;
    mpz_divexact(qr.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
    mpz_divexact(qi.get_mpz_t(), i.get_mpz_t(), n.get_mpz_t());
    return {qr, qi};
  }
};

}  // namespace thsym
