#pragma once

// Exact Gaussian rationals and the exact-or-inexact coefficient type used by
// the polynomial engine.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include "mstwist/errors.hpp"

namespace mstwist {

using cplx = std::complex<double>;
using rational = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

inline double to_double(const rational& q) { return q.convert_to<double>(); }

// Exact conversion: every finite double is a dyadic rational.
inline rational exact_rational(double x) {
  if (!std::isfinite(x)) throw precondition_error("non-finite value cannot be made exact");
  return rational(x);
}

// Parses "p/q", "p" or a decimal such as "0.25" into an exact rational.
inline rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      bigint num(text.substr(0, slash));
      bigint den(text.substr(slash + 1));
      if (den == 0) throw precondition_error("zero denominator in rational '" + text + "'");
      return rational(num, den);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return rational(bigint(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    bigint scale = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) scale *= 10;
    return rational(bigint(digits), scale);
  } catch (const precondition_error&) {
    throw;
  } catch (const std::exception&) {
    throw precondition_error("malformed rational '" + text + "'");
  }
}

inline std::string to_string(const rational& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << '/' << denominator(q);
  return os.str();
}

struct GaussRational {
  rational re;
  rational im;

  GaussRational() = default;
  GaussRational(rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  GaussRational(rational r, rational i) : re(std::move(r)), im(std::move(i)) {}
  GaussRational(long long v) : re(v) {}  // NOLINT(google-explicit-constructor)

  bool is_zero() const { return re == 0 && im == 0; }
  cplx to_complex() const { return {to_double(re), to_double(im)}; }
  GaussRational conj() const { return {re, -im}; }

  friend GaussRational operator+(const GaussRational& a, const GaussRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussRational operator-(const GaussRational& a, const GaussRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussRational operator-(const GaussRational& a) { return {-a.re, -a.im}; }
  friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussRational operator/(const GaussRational& a, const GaussRational& b) {
    const rational n = b.re * b.re + b.im * b.im;
    if (n == 0) throw precondition_error("division by exact zero");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

inline std::string to_string(const GaussRational& g) {
  if (g.im == 0) return to_string(g.re);
  if (g.re == 0) return to_string(g.im) + "*i";
  return "(" + to_string(g.re) + (g.im < 0 ? "-" : "+") + to_string(g.im < 0 ? rational(-g.im) : g.im) + "*i)";
}

// Polynomial coefficient: exact Gaussian rational, or a complex double once an
// irrational quantity has entered. Exact zero absorbs inexact factors.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long long v) : q_(v) {}                 // NOLINT(google-explicit-constructor)
  Scalar(int v) : q_(static_cast<long long>(v)) {}  // NOLINT(google-explicit-constructor)
  Scalar(rational v) : q_(std::move(v)) {}       // NOLINT(google-explicit-constructor)
  Scalar(GaussRational v) : q_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  static Scalar inexact(cplx z) {
    Scalar s;
    s.exact_ = false;
    s.z_ = z;
    return s;
  }
  // Exact when z has dyadic parts (always true for finite doubles); callers use
  // this for inputs that are exact by construction.
  static Scalar from_double_exact(cplx z) {
    return Scalar(GaussRational(exact_rational(z.real()), exact_rational(z.imag())));
  }

  bool exact() const { return exact_; }
  const GaussRational& exact_value() const { return q_; }
  cplx value() const { return exact_ ? q_.to_complex() : z_; }
  bool is_zero() const { return exact_ ? q_.is_zero() : (z_ == cplx{}); }
  bool is_exact_zero() const { return exact_ && q_.is_zero(); }
  Scalar conj() const { return exact_ ? Scalar(q_.conj()) : inexact(std::conj(z_)); }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.exact_ && b.exact_) return Scalar(a.q_ + b.q_);
    if (a.is_exact_zero()) return b;
    if (b.is_exact_zero()) return a;
    return inexact(a.value() + b.value());
  }
  friend Scalar operator-(const Scalar& a) { return a.exact_ ? Scalar(-a.q_) : inexact(-a.z_); }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.exact_ && b.exact_) return Scalar(a.q_ * b.q_);
    if (a.is_exact_zero() || b.is_exact_zero()) return Scalar(0);
    return inexact(a.value() * b.value());
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (a.exact_ && b.exact_) return Scalar(a.q_ / b.q_);
    if (b.is_zero()) throw precondition_error("division by zero coefficient");
    if (a.is_exact_zero()) return Scalar(0);
    return inexact(a.value() / b.value());
  }
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.exact_ != b.exact_) return false;
    return a.exact_ ? a.q_ == b.q_ : a.z_ == b.z_;
  }

 private:
  bool exact_ = true;
  GaussRational q_{};
  cplx z_{};
};

// Doubles with a short dyadic expansion (0.5, 1.25, ...) are taken as exact;
// anything else is treated as an irrational input and kept inexact.
inline Scalar scalar_from(cplx z) {
  const auto short_dyadic = [](double x) { return std::isfinite(x) && std::ldexp(x, 24) == std::round(std::ldexp(x, 24)); };
  if (short_dyadic(z.real()) && short_dyadic(z.imag())) return Scalar::from_double_exact(z);
  return Scalar::inexact(z);
}

inline Scalar pow(const Scalar& base, unsigned exponent) {
  Scalar result(1);
  Scalar b = base;
  while (exponent) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

inline std::string to_string(const Scalar& s) {
  if (s.exact()) return to_string(s.exact_value());
  std::ostringstream os;
  os.precision(17);
  os << "(" << s.value().real() << (s.value().imag() < 0 ? "" : "+") << s.value().imag() << "*i)";
  return os.str();
}

}  // namespace mstwist
