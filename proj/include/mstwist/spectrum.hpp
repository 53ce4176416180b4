#pragma once

// Multiple standard twist families, their spectra and pole hyperplanes.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "mstwist/errors.hpp"
#include "mstwist/lfunc.hpp"
#include "mstwist/scalar.hpp"

namespace mstwist {

using IndexVector = std::vector<long long>;

/// N L-functions with positive rational exponents kappa, sum d_v kappa_v = 1.
class TwistFamily {
 public:
  TwistFamily(std::vector<SelbergDatum> members, std::vector<rational> kappas)
      : members_(std::move(members)), kappa_(std::move(kappas)) {
    if (members_.empty()) throw precondition_error("twist family needs at least one member");
    if (kappa_.size() != members_.size()) throw precondition_error("need one kappa per member");
    for (const auto& m : members_) inv_.push_back(compute_invariants(m));
    for (const auto& k : kappa_)
      if (k <= 0) throw precondition_error("kappa must be positive");

    bool exact = true;
    rational exact_sum = 0;
    double sum = 0.0;
    for (std::size_t v = 0; v < size(); ++v) {
      const Scalar dv = scalar_from(inv_[v].d);
      exact = exact && dv.exact();
      if (exact) exact_sum += dv.exact_value().re * kappa_[v];
      sum += inv_[v].d * to_double(kappa_[v]);
      d_ += inv_[v].d;
      theta_ += inv_[v].d * inv_[v].theta;
      omega_ *= inv_[v].omega_F;
    }
    if (exact ? exact_sum != 1 : std::abs(sum - 1.0) > 1e-12)
      throw precondition_error("sum of d_v * kappa_v must equal 1");

    bigint r = 1;
    for (const auto& k : kappa_) r = boost::multiprecision::lcm(r, bigint(denominator(k)));
    if (r > 1000000) throw precondition_error("kappa denominators too large");
    r_ = r.convert_to<long long>();
    for (const auto& k : kappa_) {
      const rational p = k * r_;
      if (numerator(p) > 1000000) throw precondition_error("kappa numerators too large");
      p_.push_back(numerator(p).convert_to<long long>());
    }
    // alpha_n = K^(1/r) * scale with K = prod n_v^(p_v).
    double log_scale = 0.0;
    for (std::size_t v = 0; v < size(); ++v)
      log_scale -= kappa(v) * (std::log(inv_[v].q) + inv_[v].d * std::log(kappa(v)));
    log_scale_ = log_scale;
  }

  std::size_t size() const { return members_.size(); }
  const std::vector<SelbergDatum>& members() const { return members_; }
  const SelbergDatum& member(std::size_t v) const { return members_.at(v); }
  const Invariants& invariants(std::size_t v) const { return inv_.at(v); }
  const std::vector<rational>& kappa_exact() const { return kappa_; }
  double kappa(std::size_t v) const { return to_double(kappa_.at(v)); }
  double d() const { return d_; }
  double theta() const { return theta_; }
  cplx omega() const { return omega_; }
  // kappa_v = key_exponent(v) / key_root().
  long long key_root() const { return r_; }
  long long key_exponent(std::size_t v) const { return p_.at(v); }
  // log of prod (q_v kappa_v^d_v)^(-kappa_v).
  double log_alpha_scale() const { return log_scale_; }

 private:
  std::vector<SelbergDatum> members_;
  std::vector<rational> kappa_;
  std::vector<Invariants> inv_;
  double d_ = 0.0;
  double theta_ = 0.0;
  cplx omega_{1.0, 0.0};
  long long r_ = 1;
  std::vector<long long> p_;
  double log_scale_ = 0.0;
};

struct AlphaValue {
  double alpha;
  bigint key;  // prod n_v^(p_v); equal keys <=> equal alpha within a family
};

inline AlphaValue alpha_of(const TwistFamily& family, const IndexVector& n) {
  if (n.size() != family.size()) throw precondition_error("index vector length must equal family size");
  bigint key = 1;
  double log_alpha = family.log_alpha_scale();
  for (std::size_t v = 0; v < n.size(); ++v) {
    if (n[v] < 1) throw precondition_error("indices must be >= 1");
    key *= boost::multiprecision::pow(bigint(n[v]), static_cast<unsigned>(family.key_exponent(v)));
    log_alpha += family.kappa(v) * std::log(static_cast<double>(n[v]));
  }
  return {std::exp(log_alpha), key};
}

struct SpectrumHit {
  double alpha = 0.0;
  bigint exact_key;
  std::vector<IndexVector> witnesses;  // lexicographically sorted
};

/// Smallest n_max that certifies every spectrum point up to alpha_max.
inline long long required_index_bound(const TwistFamily& family, double alpha_max) {
  long long need = 1;
  for (std::size_t v = 0; v < family.size(); ++v) {
    // alpha_n >= scale * n_v^kappa_v since every other factor n_mu^kappa_mu >= 1.
    const double bound = std::exp((std::log(alpha_max) - family.log_alpha_scale()) / family.kappa(v));
    if (bound > 1e12) throw cutoff_error("spectrum enumeration bound exceeds 1e12", bound);
    long long b = static_cast<long long>(std::floor(bound * (1.0 + 1e-12)));
    if (const auto lim = family.member(v).coefficients.support_limit()) b = std::min(b, *lim);
    need = std::max(need, b);
  }
  return need;
}

inline std::vector<SpectrumHit> enumerate_spectrum(const TwistFamily& family, double alpha_max, long long n_max) {
  if (!(alpha_max > 0)) throw precondition_error("alpha_max must be positive");
  if (n_max < 1) throw precondition_error("n_max must be >= 1");
  const long long need = required_index_bound(family, alpha_max);
  if (n_max < need)
    throw cutoff_error("n_max = " + std::to_string(n_max) + " cannot certify completeness up to alpha_max; need n_max >= " +
                           std::to_string(need),
                       static_cast<double>(need));

  const double limit = std::log(alpha_max) * (1.0 + 1e-14) + 1e-12;
  std::map<bigint, SpectrumHit> groups;
  IndexVector n(family.size(), 1);
  std::function<void(std::size_t, double)> walk = [&](std::size_t v, double log_partial) {
    if (v == family.size()) {
      const AlphaValue a = alpha_of(family, n);
      auto& hit = groups[a.key];
      if (hit.witnesses.empty()) {
        hit.alpha = a.alpha;
        hit.exact_key = a.key;
      }
      hit.witnesses.push_back(n);
      return;
    }
    for (long long k = 1; k <= need; ++k) {
      const double lp = log_partial + family.kappa(v) * std::log(static_cast<double>(k));
      if (lp > limit) break;
      if (family.member(v).coefficients(k) == cplx{}) continue;
      n[v] = k;
      walk(v + 1, lp);
    }
    n[v] = 1;
  };
  walk(0, family.log_alpha_scale());

  std::vector<SpectrumHit> out;
  for (auto& [key, hit] : groups) {
    std::sort(hit.witnesses.begin(), hit.witnesses.end());
    out.push_back(std::move(hit));
  }
  std::sort(out.begin(), out.end(), [](const SpectrumHit& a, const SpectrumHit& b) { return a.alpha < b.alpha; });
  return out;
}

inline constexpr double kDefaultAlphaTol = 1e-10;

/// Spectrum point within relative tolerance tol of alpha, if any.
inline std::optional<SpectrumHit> membership(const TwistFamily& family, double alpha, double tol = kDefaultAlphaTol) {
  if (!(alpha > 0)) throw precondition_error("alpha must be positive");
  const double hi = alpha * (1.0 + tol);
  const auto hits = enumerate_spectrum(family, hi, required_index_bound(family, hi));
  std::optional<SpectrumHit> found;
  for (const auto& h : hits) {
    if (std::abs(h.alpha - alpha) > tol * alpha) continue;
    if (found)
      throw ambiguity_error("alpha matches several spectrum points within tolerance; give alpha as a witness vector");
    found = h;
  }
  return found;
}

/// Exact membership from a witness index vector.
inline SpectrumHit membership(const TwistFamily& family, const IndexVector& witness) {
  const AlphaValue a = alpha_of(family, witness);
  cplx prod = 1.0;
  for (std::size_t v = 0; v < witness.size(); ++v) prod *= family.member(v).coefficients(witness[v]);
  if (prod == cplx{}) throw precondition_error("witness has a vanishing coefficient product; alpha not in the spectrum");
  const double hi = a.alpha * (1.0 + 1e-9);
  for (auto& h : enumerate_spectrum(family, hi, required_index_bound(family, hi)))
    if (h.exact_key == a.key) return h;
  throw precondition_error("witness not found in the spectrum enumeration");
}

/// omega_F * sum over witnesses of prod conj(a_v(n_v)) / n_v^(1 - s_v).
inline cplx xi_sum(const TwistFamily& family, const std::optional<SpectrumHit>& hit, const std::vector<cplx>& s) {
  if (s.size() != family.size()) throw precondition_error("point dimension must equal family size");
  if (!hit) return 0.0;
  cplx acc{};
  for (const auto& n : hit->witnesses) {
    cplx term = 1.0;
    for (std::size_t v = 0; v < n.size(); ++v)
      term *= std::conj(family.member(v).coefficients(n[v])) *
              std::exp((s[v] - 1.0) * std::log(static_cast<double>(n[v])));
    acc += term;
  }
  return family.omega() * acc;
}

struct PoleLocus {
  int ell = 0;
  std::vector<double> coefficients;  // d_v
  cplx target;                       // (d+1)/2 - ell - i theta

  cplx linear_form(const std::vector<cplx>& s) const {
    cplx acc{};
    for (std::size_t v = 0; v < coefficients.size(); ++v) acc += coefficients[v] * s.at(v);
    return acc;
  }
  double distance(const std::vector<cplx>& s) const { return std::abs(linear_form(s) - target); }
  bool contains(const std::vector<cplx>& s, double tol = 1e-12) const { return distance(s) <= tol; }

  // Moves s onto the locus by adjusting the last coordinate.
  std::vector<cplx> project(std::vector<cplx> s) const {
    s.back() += (target - linear_form(s)) / coefficients.back();
    return s;
  }
};

inline PoleLocus hyperplane(const TwistFamily& family, int ell) {
  if (ell < 0) throw precondition_error("ell must be >= 0");
  PoleLocus p;
  p.ell = ell;
  for (std::size_t v = 0; v < family.size(); ++v) p.coefficients.push_back(family.invariants(v).d);
  p.target = (family.d() + 1.0) / 2.0 - ell - I * family.theta();
  return p;
}

// u_ell(s) = (d+1)/2 - ell - i theta - sum d_v s_v; zero exactly on H*_ell.
inline cplx locus_offset(const TwistFamily& family, const std::vector<cplx>& s, int ell) {
  const PoleLocus p = hyperplane(family, ell);
  return p.target - p.linear_form(s);
}

}  // namespace mstwist
