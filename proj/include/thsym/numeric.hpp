#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "thsym/lifts.hpp"
#include "thsym/poly.hpp"
#include "thsym/symplectic.hpp"

namespace thsym {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;

struct SiegelPoint {
  int g = 1;
  CMat tau;

  static SiegelPoint make(const CMat& t) {
    if (t.rows() != t.cols() || t.rows() < 1) throw std::invalid_argument("tau must be square");
    if ((t - t.transpose()).norm() > 1e-12 * (1 + t.norm())) throw std::invalid_argument("tau must be symmetric");
    Eigen::MatrixXd im = t.imag();
    Eigen::LLT<Eigen::MatrixXd> llt(im);
    if (llt.info() != Eigen::Success) throw std::domain_error("imaginary part is not positive definite");
    return {int(t.rows()), t};
  }
  SiegelPoint scaled(double s) const { return make(tau * s); }
};

struct Truncation {
  int radius = 8;
  double tol = 1e-8;
};

// theta[a;b](tau) = sum_m exp(pi i ((m+a/2) tau (m+a/2)^t + (m+a/2) b^t)),
// coordinate k of a, b is bit g-1-k.  Lexicographic summation order.
inline cd theta_value(const ThetaChar& d, const SiegelPoint& p, const Truncation& t = {}) {
  if (!d.even()) throw std::invalid_argument("theta_value needs an even characteristic");
  if (d.g != p.g) throw std::invalid_argument("genus mismatch");
  int g = p.g, M = t.radius;
  if (M < 1) throw std::invalid_argument("truncation radius must be positive");
  std::vector<double> a(g), b(g);
  for (int k = 0; k < g; ++k) {
    a[k] = 0.5 * ((d.a >> (g - 1 - k)) & 1);
    b[k] = double((d.b >> (g - 1 - k)) & 1);
  }
  std::vector<int> m(g, -M);
  Eigen::VectorXd x(g);
  const cd ipi(0, M_PI);
  cd sum = 0;
  while (true) {
    for (int k = 0; k < g; ++k) x[k] = m[k] + a[k];
    cd q = x.transpose().cast<cd>() * p.tau * x.cast<cd>();
    double lin = 0;
    for (int k = 0; k < g; ++k) lin += x[k] * b[k];
    sum += std::exp(ipi * (q + lin));
    int k = g - 1;
    while (k >= 0 && m[k] == M) m[k--] = -M;
    if (k < 0) break;
    ++m[k];
  }
  return sum;
}

// radius at which exp(-pi lmin r^2) drops below 1e-17, lmin the least eigenvalue of Im tau
inline int required_radius(const SiegelPoint& p) {
  Eigen::MatrixXd im = p.tau.imag();
  double l = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(im, Eigen::EigenvaluesOnly).eigenvalues()[0];
  return int(std::ceil(std::sqrt(39.2 / (M_PI * l)))) + 1;
}

// Theta[sigma](tau) = theta[sigma;0](2 tau)
inline cd big_theta_value(uint32_t sigma, const SiegelPoint& p, const Truncation& t = {}) {
  return theta_value({p.g, sigma, 0}, p.scaled(2.0), t);
}

inline std::vector<cd> big_theta_vector(const SiegelPoint& p, const Truncation& t = {}) {
  std::vector<cd> v;
  for (uint32_t s = 0; s < (1u << p.g); ++s) v.push_back(big_theta_value(s, p, t));
  return v;
}

// i I and i I + 0.1 S + 0.05 i S, S the off-diagonal ones pattern (S = [1] for g = 1)
inline std::vector<SiegelPoint> standard_points(int g) {
  CMat base = CMat::Identity(g, g) * cd(0, 1);
  CMat S = CMat::Ones(g, g) - CMat::Identity(g, g);
  if (g == 1) S = CMat::Ones(1, 1);
  return {SiegelPoint::make(base), SiegelPoint::make(base + S * cd(0.1, 0.05))};
}

inline SiegelPoint random_point(int g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Eigen::MatrixXd re(g, g), im(g, g);
  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j) {
      re(i, j) = re(j, i) = u(rng);
      im(i, j) = im(j, i) = i == j ? 1.0 + std::abs(u(rng)) : 0.5 * u(rng);
    }
  CMat t(g, g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) t(i, j) = cd(re(i, j), im(i, j));
  return SiegelPoint::make(t);
}

// relative error |value| / scale
struct Residual {
  double value = 0, scale = 0;
  double relative() const { return scale > 0 ? value / scale : value; }
};

template <class R>
Residual poly_residual(const SparsePoly<R>& f, const std::vector<cd>& x) {
  auto [v, mag] = evaluate(f, x);
  return {std::abs(v), mag};
}

inline Residual jacobi_residual(const SiegelPoint& p, const Truncation& t = {}) {
  cd a = std::pow(theta_value({1, 0, 0}, p, t), 4);
  cd b = std::pow(theta_value({1, 0, 1}, p, t), 4);
  cd c = std::pow(theta_value({1, 1, 0}, p, t), 4);
  return {std::abs(a - b - c), std::abs(a) + std::abs(b) + std::abs(c)};
}

// theta[0;0]^2 = Theta[0]^2 + Theta[1]^2 at g = 1
inline Residual dictionary_residual(const SiegelPoint& p, const Truncation& t = {}) {
  cd l = std::pow(theta_value({1, 0, 0}, p, t), 2);
  auto th = big_theta_vector(p, t);
  cd r = th[0] * th[0] + th[1] * th[1];
  return {std::abs(l - r), std::abs(l) + std::abs(th[0] * th[0]) + std::abs(th[1] * th[1])};
}

// r1 - r2 - r3 with r1 = prod theta[000;0ab], r2 = prod theta[000;1ab], r3 = prod theta[100;0ab]
inline Residual r_relation_residual(const SiegelPoint& p, const Truncation& t = {}) {
  cd r1 = 1, r2 = 1, r3 = 1;
  for (uint32_t x = 0; x < 4; ++x) {
    r1 *= theta_value({3, 0, x}, p, t);
    r2 *= theta_value({3, 0, 4 | x}, p, t);
    r3 *= theta_value({3, 4, x}, p, t);
  }
  return {std::abs(r1 - r2 - r3), std::abs(r1) + std::abs(r2) + std::abs(r3)};
}

// Theta(-1/tau) proportional to F Theta(tau), F[s][r] = (-1)^{s r}, at g = 1
inline Residual fourier_residual(const SiegelPoint& p, const Truncation& t = {}) {
  if (p.g != 1) throw std::invalid_argument("Fourier relation check is for g = 1");
  auto inv = SiegelPoint::make(CMat::Constant(1, 1, -1.0 / p.tau(0, 0)));
  auto lhs = big_theta_vector(inv, t);
  auto th = big_theta_vector(p, t);
  std::vector<cd> rhs{th[0] + th[1], th[0] - th[1]};
  cd c = lhs[0] / rhs[0];
  double dev = std::abs(lhs[1] - c * rhs[1]);
  return {dev, std::abs(lhs[1]) + std::abs(c * rhs[1])};
}

// F12 = sum over asyzygous sextets of prod theta[Delta]^4, straight from theta values
inline Residual f12_value(const SiegelPoint& p, const Truncation& t = {}) {
  if (p.g != 3) throw std::invalid_argument("F12 lives at g = 3");
  std::map<ThetaChar, cd> th;
  for (auto& d : even_characteristics(3)) th[d] = theta_value(d, p, t);
  cd s = 0;
  double mag = 0;
  for (auto& S : asyzygous_sextets()) {
    cd f = 1;
    for (auto& d : S) f *= std::pow(th.at(d), 2);
    s += f * f;
    mag += std::norm(f);
  }
  return {std::abs(s), mag};
}

enum class Nonzero { yes, inconclusive };

inline Nonzero verify_form_nonzero(const PolyQ& f, const std::vector<SiegelPoint>& samples, double tol = 1e-8,
                                   const Truncation& t = {}) {
  for (auto& p : samples) {
    auto r = poly_residual(f, big_theta_vector(p, t));
    if (r.scale > 0 && r.relative() > tol) return Nonzero::yes;
  }
  return Nonzero::inconclusive;
}

// ------------------------------------------------------------ Gamma(2) action

inline CMat complex_of(const IntMatrix& m, int r0, int c0, int g) {
  CMat out(g, g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) out(i, j) = double(m.at(r0 + i, c0 + j));
  return out;
}

inline SiegelPoint act(const IntMatrix& m, const SiegelPoint& p) {
  int g = p.g;
  CMat A = complex_of(m, 0, 0, g), B = complex_of(m, 0, g, g), C = complex_of(m, g, 0, g),
       D = complex_of(m, g, g, g);
  CMat t = (A * p.tau + B) * (C * p.tau + D).inverse();
  return SiegelPoint::make((t + t.transpose()) * 0.5);
}

// Largest deviation of Theta(M tau) from a multiple of U_{phi(M)} Theta(tau),
// relative to |Theta(M tau)|.  Radius grows with 1/Im(M tau).
inline double gamma2_deviation(const IntMatrix& m, const SiegelPoint& p, const Truncation& t = {}) {
  int g = p.g;
  auto [x, u] = phi_tilde(m);
  auto U = x == 0 && u == 0 ? LiftMatrix::identity(g) : u_operator(g, x, u);
  auto q = act(m, p);
  auto lhs = big_theta_vector(q, {std::max(t.radius, required_radius(q.scaled(2.0))), t.tol});
  auto th = big_theta_vector(p, {std::max(t.radius, required_radius(p.scaled(2.0))), t.tol});
  size_t n = th.size();
  std::vector<cd> rhs(n, 0);
  for (size_t s = 0; s < n; ++s)
    for (size_t r = 0; r < n; ++r) rhs[s] += to_complex(U.m[s][r]) * th[r];
  size_t k = 0;
  for (size_t s = 1; s < n; ++s)
    if (std::abs(rhs[s]) > std::abs(rhs[k])) k = s;
  cd c = lhs[k] / rhs[k];
  double dev = 0, norm = 0;
  for (size_t s = 0; s < n; ++s) {
    dev = std::max(dev, std::abs(lhs[s] - c * rhs[s]));
    norm = std::max(norm, std::abs(lhs[s]));
  }
  return dev / norm;
}

// generators I + 2E of Gamma_g(2): upper and lower unipotent, symmetric
inline std::vector<IntMatrix> gamma2_generators(int g) {
  std::vector<IntMatrix> out;
  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j)
      for (int lower = 0; lower < 2; ++lower) {
        IntMatrix m = IntMatrix::identity(2 * g);
        int r = lower ? g : 0, c = lower ? 0 : g;
        m.at(r + i, c + j) = 2;
        m.at(r + j, c + i) = 2;
        if (i == j) m.at(r + i, c + i) = 2;
        out.push_back(m);
      }
  return out;
}

}  // namespace thsym
