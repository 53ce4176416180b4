#pragma once

// Functional-equation data of an L-function in the extended Selberg class,
// its invariants, the factors S_F and h_F of the asymmetric functional
// equation F(s) = omega_F S_F(s) h_F(s) conj(F)(1-s), and the structural
// invariants d_F(l).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "mstwist/errors.hpp"
#include "mstwist/scalar.hpp"
#include "mstwist/specfun.hpp"
#include "mstwist/sympoly.hpp"

namespace mstwist {

struct GammaFactor {
  double lambda = 0.5;
  cplx mu{};
};

class CoefficientSource {
 public:
  enum class Kind { zeta, dirichlet, list };

  static CoefficientSource zeta() { return CoefficientSource(Kind::zeta, 0, {}); }
  // values[k] = chi(k+1), k = 0..modulus-1.
  static CoefficientSource dirichlet(int modulus, std::vector<cplx> values) {
    if (modulus < 1 || static_cast<int>(values.size()) != modulus)
      throw precondition_error("dirichlet source needs exactly 'modulus' character values");
    return CoefficientSource(Kind::dirichlet, modulus, std::move(values));
  }
  // Finite list a(1..n_max), zero beyond. Test scaffolding only.
  static CoefficientSource list(std::vector<cplx> values) {
    if (values.empty()) throw precondition_error("coefficient list must be nonempty");
    return CoefficientSource(Kind::list, 0, std::move(values));
  }

  Kind kind() const { return kind_; }
  int modulus() const { return modulus_; }
  const std::vector<cplx>& values() const { return values_; }

  cplx operator()(long long n) const {
    if (n < 1) throw precondition_error("coefficient index must be >= 1");
    switch (kind_) {
      case Kind::zeta:
        return 1.0;
      case Kind::dirichlet:
        return values_[static_cast<std::size_t>((n - 1) % modulus_)];
      case Kind::list:
        return n <= static_cast<long long>(values_.size()) ? values_[static_cast<std::size_t>(n - 1)] : cplx{};
    }
    return {};
  }

  // Last index that can carry a nonzero coefficient, if finite.
  std::optional<long long> support_limit() const {
    if (kind_ == Kind::list) return static_cast<long long>(values_.size());
    return std::nullopt;
  }

  double max_abs() const {
    if (kind_ == Kind::zeta) return 1.0;
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  CoefficientSource(Kind k, int modulus, std::vector<cplx> values)
      : kind_(k), modulus_(modulus), values_(std::move(values)) {}

  Kind kind_;
  int modulus_;
  std::vector<cplx> values_;
};

struct SelbergDatum {
  std::string label;
  double Q = 1.0;
  std::vector<GammaFactor> factors;
  cplx omega{1.0, 0.0};
  CoefficientSource coefficients = CoefficientSource::zeta();

  double degree() const {
    double d = 0.0;
    for (const auto& f : factors) d += 2.0 * f.lambda;
    return d;
  }

  void validate() const {
    const std::string who = label.empty() ? "L-function" : "'" + label + "'";
    if (!(Q > 0) || !std::isfinite(Q)) throw precondition_error(who + ": Q must be positive");
    if (factors.empty()) throw precondition_error(who + ": at least one Gamma factor is required");
    for (const auto& f : factors) {
      if (!(f.lambda > 0) || !std::isfinite(f.lambda)) throw precondition_error(who + ": lambda must be positive");
      if (f.mu.real() < 0) throw precondition_error(who + ": Re(mu) must be nonnegative");
    }
    if (std::abs(std::abs(omega) - 1.0) > 1e-12) throw precondition_error(who + ": |omega| must be 1");
    if (!(degree() > 0)) throw precondition_error(who + ": degree must be positive");
  }
};

inline SelbergDatum zeta_datum() {
  return {"zeta", 1.0 / std::sqrt(pi), {{0.5, 0.0}}, 1.0, CoefficientSource::zeta()};
}

/// Dirichlet L(s, chi) for a primitive character given by chi(1..q). Parity,
/// Q = sqrt(q/pi) and the root number tau(chi)/(i^delta sqrt q) are derived.
inline SelbergDatum dirichlet_datum(int modulus, std::vector<cplx> values) {
  auto source = CoefficientSource::dirichlet(modulus, values);
  const bool odd = std::abs(source(modulus - 1) + 1.0) < 1e-12;
  cplx gauss{};
  for (int a = 1; a <= modulus; ++a) gauss += source(a) * std::exp(I * (two_pi * a / modulus));
  const cplx omega = gauss / ((odd ? I : cplx(1.0)) * std::sqrt(static_cast<double>(modulus)));
  SelbergDatum d{"L(chi mod " + std::to_string(modulus) + ")", std::sqrt(modulus / pi),
                 {{0.5, odd ? 0.5 : 0.0}}, omega, std::move(source)};
  d.validate();
  return d;
}

/// Real primitive character mod q for q in {3, 4, 5, 8}, as chi(1..q).
inline std::vector<cplx> quadratic_character(int modulus) {
  switch (modulus) {
    case 3: return {1, -1, 0};
    case 4: return {1, 0, -1, 0};
    case 5: return {1, -1, -1, 1, 0};
    case 8: return {1, 0, -1, 0, -1, 0, 1, 0};
    default: throw precondition_error("no built-in quadratic character mod " + std::to_string(modulus));
  }
}

struct Invariants {
  double d = 0.0;
  double q = 0.0;
  cplx omega_F{};
  double tau = 0.0;
  cplx xi{};
  double eta = 0.0;
  double theta = 0.0;
};

inline Invariants compute_invariants(const SelbergDatum& datum) {
  datum.validate();
  Invariants inv;
  inv.d = datum.degree();
  double prod = 1.0;
  cplx phase = 1.0;
  inv.tau = -std::numeric_limits<double>::infinity();
  for (const auto& f : datum.factors) {
    prod *= std::pow(f.lambda, 2.0 * f.lambda);
    phase *= std::exp(-2.0 * I * f.mu.imag() * std::log(f.lambda));
    inv.tau = std::max(inv.tau, f.mu.imag() / f.lambda);
    inv.xi += 2.0 * (f.mu - 0.5);
  }
  inv.q = std::pow(two_pi, inv.d) * datum.Q * datum.Q * prod;
  inv.omega_F = datum.omega * phase;
  inv.eta = inv.xi.real();
  inv.theta = inv.xi.imag() / inv.d;
  return inv;
}

inline cplx s_factor(const SelbergDatum& datum, cplx s) {
  cplx p = std::pow(2.0, static_cast<double>(datum.factors.size()));
  for (const auto& f : datum.factors) p *= std::sin(pi * (f.lambda * s + f.mu));
  return p;
}

// Gamma arguments of h_F(s): lambda(1-s)+conj(mu) and 1-lambda s-mu per factor.
inline std::vector<cplx> h_gamma_arguments(const SelbergDatum& datum, cplx s) {
  std::vector<cplx> out;
  for (const auto& f : datum.factors) {
    out.push_back(f.lambda * (1.0 - s) + std::conj(f.mu));
    out.push_back(1.0 - f.lambda * s - f.mu);
  }
  return out;
}

inline cplx log_h_factor(const SelbergDatum& datum, cplx s) {
  cplx acc = -static_cast<double>(datum.factors.size()) * std::log(two_pi) + (1.0 - 2.0 * s) * std::log(datum.Q);
  for (const auto& f : datum.factors) acc += 2.0 * I * f.mu.imag() * std::log(f.lambda);
  for (const auto& z : h_gamma_arguments(datum, s)) acc += log_gamma(z);
  return acc;
}

/// h_F(s); complex infinity when s sits on a pole of a Gamma factor.
inline cplx h_factor(const SelbergDatum& datum, cplx s) {
  for (const auto& z : h_gamma_arguments(datum, s))
    if (is_gamma_pole(z)) return {std::numeric_limits<double>::infinity(), 0.0};
  return std::exp(log_h_factor(datum, s));
}

/// |S(s) h(s) conj(S)(1-s) conj(h)(1-s) - 1| where conj(f)(s) = conj(f(conj s)).
inline double verify_sh_identity(const SelbergDatum& datum, cplx s) {
  const cplx t = std::conj(1.0 - s);
  for (const cplx& p : {s, t})
    for (const auto& z : h_gamma_arguments(datum, p))
      if (std::abs(z - std::round(z.real())) < 1e-12 && z.real() < 0.5)
        throw precondition_error("verify_sh_identity: point collides with a Gamma pole or sine zero");
  const cplx value = s_factor(datum, s) * std::conj(s_factor(datum, t)) *
                     std::exp(log_h_factor(datum, s) + std::conj(log_h_factor(datum, t)));
  return std::abs(value - 1.0);
}

inline cplx coefficient(const SelbergDatum& datum, long long n) { return datum.coefficients(n); }

/// F(s) itself: the Riemann zeta function, L(s, chi) through Hurwitz zeta, or
/// the finite Dirichlet polynomial of an explicit list.
inline cplx dirichlet_value(const SelbergDatum& datum, cplx s) {
  const auto& src = datum.coefficients;
  switch (src.kind()) {
    case CoefficientSource::Kind::zeta:
      return riemann_zeta(s);
    case CoefficientSource::Kind::dirichlet: {
      // sum chi(a) = 0 for nonprincipal chi, so the regular part suffices.
      const int q = src.modulus();
      cplx acc{}, total{};
      for (int a = 1; a <= q; ++a) total += src(a);
      const bool principal = std::abs(total) > 1e-9;
      for (int a = 1; a <= q; ++a) {
        const cplx chi = src(a);
        if (chi == cplx{}) continue;
        acc += chi * (principal ? hurwitz_zeta(s, static_cast<double>(a) / q)
                                : hurwitz_zeta_regular(s, static_cast<double>(a) / q));
      }
      return acc * std::exp(-s * std::log(static_cast<double>(q)));
    }
    case CoefficientSource::Kind::list: {
      cplx acc{};
      const auto& v = src.values();
      for (std::size_t n = 1; n <= v.size(); ++n)
        if (v[n - 1] != cplx{}) acc += v[n - 1] * std::exp(-s * std::log(static_cast<double>(n)));
      return acc;
    }
  }
  return {};
}

/// Structural invariants d_F(0..M) as Scalars, from the Gamma-product
/// expansion applied to the 2r factors of h_F (weights lambda_j/d, w = d s):
///   d_F(l) = d^(i theta d) P_l(lambda_1 + conj mu_1, 1 - mu_1, ...).
/// Exact whenever the Gamma data are short dyadics and theta = 0.
inline std::vector<Scalar> structural_invariants_symbolic(const SelbergDatum& datum, int M) {
  const Invariants inv = compute_invariants(datum);
  if (M < 0) throw precondition_error("structural_invariants: M must be >= 0");
  std::vector<Scalar> weights;
  std::vector<MultiPoly> subs;
  const Scalar d = scalar_from(inv.d);
  for (const auto& f : datum.factors) {
    const Scalar w = scalar_from(f.lambda) / d;
    weights.push_back(w);
    weights.push_back(w);
  }
  GammaProductExpansion expansion(weights);
  const std::vector<std::string> none;
  for (const auto& f : datum.factors) {
    subs.push_back(MultiPoly::constant(none, scalar_from(f.lambda) + scalar_from(std::conj(f.mu))));
    subs.push_back(MultiPoly::constant(none, Scalar(1) - scalar_from(f.mu)));
  }
  const Scalar phase = inv.theta == 0.0 ? Scalar(1) : Scalar::inexact(std::exp(I * inv.theta * inv.d * std::log(inv.d)));
  std::vector<Scalar> out;
  for (int l = 0; l <= M; ++l) {
    const MultiPoly c = expansion.p(l).compose(subs);
    out.push_back(phase * c.coefficient({}));
  }
  return out;
}

struct StructuralFitOptions {
  double radius = 16.0;
  double max_angle = 0.6 * pi;
  int samples = 96;
  int extra_terms = 10;
};

/// Numerical fit of d_F(0..M): with z = d(s*_0 - s), the ratio
///   h_F(s) / (pref(s) Gamma(z)) = sum_l d_F(l) / ((z-1)...(z-l)) + O(|z|^-K)
/// is sampled on an arc |z| = radius and solved by least squares.
inline std::vector<cplx> structural_invariants_fit(const SelbergDatum& datum, int M, StructuralFitOptions opt = {}) {
  const Invariants inv = compute_invariants(datum);
  const double d = inv.d;
  const cplx s0 = (d + 1.0) / (2.0 * d) - I * inv.theta;
  const int K = M + 1 + opt.extra_terms;
  // Small weights lambda_j/d push the asymptotic regime outwards.
  double min_weight = 1.0;
  for (const auto& f : datum.factors) min_weight = std::min(min_weight, f.lambda / d);
  const double radius = std::max(opt.radius, 6.0 / min_weight) + 2.0 * M;
  Eigen::MatrixXcd A(opt.samples, K);
  Eigen::VectorXcd rhs(opt.samples);
  for (int k = 0; k < opt.samples; ++k) {
    const double phi = -opt.max_angle + 2.0 * opt.max_angle * k / (opt.samples - 1);
    const cplx z = radius * std::exp(I * phi);
    const cplx s = s0 - z / d;
    const cplx log_pref = -0.5 * std::log(two_pi) + d * (0.5 - s) * (std::log(inv.q) / d - std::log(two_pi * d));
    rhs(k) = std::exp(log_h_factor(datum, s) - log_pref - log_gamma(z));
    cplx basis = 1.0;
    for (int l = 0; l < K; ++l) {
      A(k, l) = basis * std::pow(radius, l);  // columns scaled to O(1)
      basis /= (z - static_cast<double>(l + 1));
    }
  }
  const Eigen::VectorXcd c = A.colPivHouseholderQr().solve(rhs);
  std::vector<cplx> out;
  for (int l = 0; l <= M; ++l) out.push_back(c(l) * std::pow(radius, l));
  return out;
}

inline constexpr double kStructuralCrossCheckTol = 1e-6;

/// d_F(0..M). The symbolic values are cross-checked against the numerical fit
/// for l <= min(M, 3); a mismatch raises disagreement_error with both.
inline std::vector<cplx> structural_invariants(const SelbergDatum& datum, int M) {
  std::vector<cplx> sym;
  for (const auto& v : structural_invariants_symbolic(datum, M)) sym.push_back(v.value());
  const int checked = std::min(M, 3);
  const auto fit = structural_invariants_fit(datum, checked);
  for (int l = 0; l <= checked; ++l) {
    if (std::abs(sym[l] - fit[l]) > kStructuralCrossCheckTol * std::max(1.0, std::abs(sym[l])))
      throw disagreement_error("structural invariant d_F(" + std::to_string(l) + ") symbolic/numeric mismatch", sym,
                               fit);
  }
  return sym;
}

}  // namespace mstwist
