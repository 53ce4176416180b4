#pragma once

// Complex Gamma machinery, Bernoulli polynomials, Pochhammer symbols, the
// generalized Stirling series and the Mellin-Barnes kernel identity.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "mstwist/errors.hpp"
#include "mstwist/scalar.hpp"

namespace mstwist {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Largest Bernoulli index kept as an exact rational.
inline constexpr int kMaxBernoulli = 32;

namespace detail {

inline rational binomial(int n, int k) {
  rational r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct BernoulliTable {
  std::array<rational, kMaxBernoulli + 1> number{};
  std::array<double, kMaxBernoulli + 1> as_double{};

  BernoulliTable() {
    // sum_{k=0}^{n} C(n+1,k) B_k = 0, B_1 = -1/2.
    number[0] = 1;
    for (int n = 1; n <= kMaxBernoulli; ++n) {
      rational acc = 0;
      for (int k = 0; k < n; ++k) acc += binomial(n + 1, k) * number[k];
      number[n] = -acc / (n + 1);
    }
    for (int n = 0; n <= kMaxBernoulli; ++n) as_double[n] = to_double(number[n]);
  }
};

// Initialized once on first use; read-only afterwards.
inline const BernoulliTable& bernoulli_table() {
  static const BernoulliTable table;
  return table;
}

inline void require_bernoulli_index(int n) {
  if (n < 0 || n > kMaxBernoulli)
    throw precondition_error("Bernoulli index " + std::to_string(n) + " outside [0, " +
                             std::to_string(kMaxBernoulli) + "]");
}

}  // namespace detail

inline const rational& bernoulli_number(int n) {
  detail::require_bernoulli_index(n);
  return detail::bernoulli_table().number[n];
}

/// Exact coefficients c_0..c_n of B_n(x) = sum_k c_k x^k.
inline std::vector<rational> bernoulli_poly_coeffs(int n) {
  detail::require_bernoulli_index(n);
  std::vector<rational> c(n + 1);
  for (int k = 0; k <= n; ++k) c[n - k] = detail::binomial(n, k) * bernoulli_number(k);
  return c;
}

inline cplx bernoulli_poly(int n, cplx x) {
  const auto c = bernoulli_poly_coeffs(n);
  cplx acc{};
  for (int k = n; k >= 0; --k) acc = acc * x + to_double(c[k]);
  return acc;
}

inline bool is_gamma_pole(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

namespace detail {

// log(sin(pi z)) without overflow for large |Im z|; defined modulo 2 pi i.
inline cplx log_sin_pi(cplx z) {
  const cplx x = pi * z;
  if (std::abs(x.imag()) < 15.0) return std::log(std::sin(x));
  if (x.imag() > 0) return -I * x - std::log(2.0) + I * (pi / 2) + std::log(1.0 - std::exp(2.0 * I * x));
  return I * x - std::log(2.0) - I * (pi / 2) + std::log(1.0 - std::exp(-2.0 * I * x));
}

inline cplx log_gamma_right(cplx z) {
  // Recurrence up to |z| >= 15, then the Stirling series with B_2..B_24.
  cplx shift{};
  while (std::abs(z) < 15.0) {
    shift += std::log(z);
    z += 1.0;
  }
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series{};
  cplx p = inv;
  const auto& b = bernoulli_table().as_double;
  for (int k = 1; k <= 12; ++k) {
    series += b[2 * k] / (2.0 * k * (2.0 * k - 1.0)) * p;
    p *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(two_pi) + series - shift;
}

}  // namespace detail

/// log Gamma(z). For Re z >= 1/2 this is the branch continuous from the positive
/// real axis (the one Stirling's series produces); for Re z < 1/2 it comes from
/// the reflection formula and is determined modulo 2 pi i. Throws pole_error at
/// nonpositive integers.
inline cplx log_gamma(cplx z) {
  if (is_gamma_pole(z)) throw pole_error("log_gamma: pole at nonpositive integer");
  if (z.real() >= 0.5) return detail::log_gamma_right(z);
  return std::log(pi) - detail::log_sin_pi(z) - detail::log_gamma_right(1.0 - z);
}

inline cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

// Gamma(z) or complex infinity at a pole.
inline cplx gamma_or_inf(cplx z) {
  if (is_gamma_pole(z)) return {std::numeric_limits<double>::infinity(), 0.0};
  return gamma(z);
}

inline bool is_pole_value(cplx v) { return std::isinf(v.real()) || std::isinf(v.imag()); }

inline cplx pochhammer(cplx z, int m) {
  if (m < 0) throw precondition_error("pochhammer: negative length");
  cplx p = 1.0;
  for (int k = 0; k < m; ++k) p *= z + static_cast<double>(k);
  return p;
}

struct StirlingApprox {
  cplx value;
  int order = 1;
  double error_bound = 0.0;
};

inline constexpr double kStirlingSectorDelta = 0.1;

/// Truncated Stirling series for log Gamma(z+s) with M correction terms.
///
/// error_bound = C_M / |z|^(M+1) with
///   C_M = 2 (|B_{M+2}(s)| + |B_{M+3}(s)|) / ((M+1)(M+2)) * sec(arg z / 2)^(M+3),
/// i.e. twice the size of the first omitted terms, widened by the usual sector
/// factor. Requires |arg z| <= pi - 0.1 and |z| >= 2.
inline StirlingApprox stirling_log_gamma(cplx z, cplx s, int order) {
  if (order < 1) throw precondition_error("stirling_log_gamma: order must be >= 1");
  if (order + 3 > kMaxBernoulli) throw precondition_error("stirling_log_gamma: order too large");
  if (std::abs(z) < 2.0) throw precondition_error("stirling_log_gamma: |z| must be >= 2");
  if (std::abs(std::arg(z)) > pi - kStirlingSectorDelta)
    throw precondition_error("stirling_log_gamma: argument outside the sector |arg z| <= pi - 0.1");

  cplx value = (z + s - 0.5) * std::log(z) - z + 0.5 * std::log(two_pi);
  cplx zpow = z;
  for (int j = 1; j <= order; ++j) {
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    value += sign * bernoulli_poly(j + 1, s) / (static_cast<double>(j) * (j + 1) * zpow);
    zpow *= z;
  }
  const double sec = 1.0 / std::cos(std::arg(z) / 2.0);
  const double cm = 2.0 * (std::abs(bernoulli_poly(order + 2, s)) + std::abs(bernoulli_poly(order + 3, s))) /
                    ((order + 1.0) * (order + 2.0)) * std::pow(sec, order + 3);
  return {value, order, cm / std::pow(std::abs(z), order + 1)};
}

/// (1/(2 pi i)) * integral over Re w = c, |Im w| <= height of f(w) dw, by the
/// trapezoid rule with step h.
inline cplx vertical_line_integral(const std::function<cplx(cplx)>& f, double c, double h, double height) {
  if (!(h > 0) || !(height > 0)) throw precondition_error("vertical_line_integral: h and height must be positive");
  const auto n = static_cast<long>(std::ceil(height / h));
  cplx acc{};
  for (long k = -n; k <= n; ++k) {
    const double weight = (k == -n || k == n) ? 0.5 : 1.0;
    acc += weight * f(cplx(c, k * h));
  }
  return acc * h / two_pi;
}

struct MellinKernelOptions {
  double h = 0.05;
  double height = 60.0;
};

/// Numerical value of (1/(2 pi i)) int_(c) Gamma(xi-w) Gamma(w) eta^(-w) dw,
/// which equals Gamma(xi) (1+eta)^(-xi).
inline cplx mellin_kernel_check(cplx xi, cplx eta, double c, MellinKernelOptions opt = {}) {
  if (!(c > 0.0 && c < xi.real()))
    throw precondition_error("mellin_kernel_check: need 0 < c < Re(xi)");
  if (eta == cplx{} || std::abs(std::arg(eta)) >= pi)
    throw precondition_error("mellin_kernel_check: need |arg eta| < pi");
  const cplx log_eta = std::log(eta);
  return vertical_line_integral(
      [&](cplx w) { return std::exp(log_gamma(xi - w) + log_gamma(w) - w * log_eta); }, c, opt.h,
      opt.height);
}

namespace detail {

// (e^x - 1) / x, accurate near 0.
inline cplx expm1_over_x(cplx x) {
  if (std::abs(x) < 1e-5) return 1.0 + x / 2.0 + x * x / 6.0;
  return (std::exp(x) - 1.0) / x;
}

// Euler-Maclaurin Hurwitz zeta. With regularized = true the pole part 1/(s-1)
// is removed, which keeps s = 1 finite.
inline cplx hurwitz_core(cplx s, double a, bool regularized) {
  if (!(a > 0)) throw precondition_error("hurwitz_zeta: a must be positive");
  const int terms = 12;
  const long n = 10 + static_cast<long>(std::ceil(std::abs(s))) + 2 * terms;
  cplx acc{};
  for (long k = 0; k < n; ++k) acc += std::exp(-s * std::log(k + a));
  const double na = static_cast<double>(n) + a;
  const double log_na = std::log(na);
  const cplx na_s = std::exp(-s * log_na);
  if (regularized)
    acc += -log_na * expm1_over_x((1.0 - s) * log_na);  // ((N+a)^(1-s) - 1)/(s-1)
  else
    acc += na * na_s / (s - 1.0);
  acc += 0.5 * na_s;
  const auto& b = bernoulli_table().as_double;
  cplx rising = s;      // (s)_{2j-1}
  double fact = 2.0;    // (2j)!
  double na_pow = na;   // (N+a)^(2j-1)
  for (int j = 1; j <= terms; ++j) {
    acc += b[2 * j] / fact * rising * na_s / na_pow;
    rising *= (s + (2.0 * j - 1.0)) * (s + 2.0 * j);
    fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    na_pow *= na * na;
  }
  return acc;
}

}  // namespace detail

/// Hurwitz zeta(s, a) for a > 0, s != 1, by Euler-Maclaurin summation.
inline cplx hurwitz_zeta(cplx s, double a) {
  if (s == cplx(1.0, 0.0)) throw pole_error("hurwitz_zeta: pole at s = 1");
  return detail::hurwitz_core(s, a, false);
}

/// zeta(s, a) - 1/(s-1); entire in s.
inline cplx hurwitz_zeta_regular(cplx s, double a) { return detail::hurwitz_core(s, a, true); }

inline cplx riemann_zeta(cplx s) { return hurwitz_zeta(s, 1.0); }

}  // namespace mstwist
