#pragma once

// Numerical evaluation of the smoothed twist
//   F_X(s, alpha) = sum prod a_v(n_v) n_v^(-s_v) exp(-z_X(alpha) prod n_v^kappa_v),
//   z_X(alpha) = 2 pi alpha (1/X + i),
// by direct summation and by the Mellin-Barnes integral, its continuation in s
// through X-extrapolation, and the residues on the hyperplanes H*_l.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mstwist/errors.hpp"
#include "mstwist/extrapolate.hpp"
#include "mstwist/lfunc.hpp"
#include "mstwist/specfun.hpp"
#include "mstwist/spectrum.hpp"
#include "mstwist/wpoly.hpp"

namespace mstwist {

using Point = std::vector<cplx>;

enum class ContinuationMode {
  analytic,  // subtract the closed-form divergent terms, extrapolate the rest
  fitted     // fit every divergent amplitude from the ladder itself
};

struct EvalParams {
  double X = 10.0;

  // Direct summation: absolute truncation tolerance, and the largest number of
  // keys (values of prod n_v^(r kappa_v)) we are willing to tabulate.
  double tail_tol = 1e-10;
  double max_keys = 3e7;

  // Mellin-Barnes contour; c and height are chosen automatically when unset.
  std::optional<double> contour_c;
  double mb_h = 0.05;
  std::optional<double> mb_height;
  double mb_tol = 1e-12;
  double mb_margin = 0.25;  // Re(s_v + kappa_v c) >= 1 + margin

  // X ladder X_j = x0 * x_ratio^j, j < rungs.
  double x0 = 25.0;
  double x_ratio = std::sqrt(2.0);
  int rungs = 9;
  int integer_terms = 4;     // exponents -1..-J in the fit
  double ladder_tol = 1e-3;  // relative change allowed when the top rung is dropped
  ContinuationMode mode = ContinuationMode::analytic;

  // Residue approach.
  std::vector<double> eps = {1e-1, 3.1622776601683794e-2, 1e-2, 3.1622776601683794e-3, 1e-3};
  int eps_degree = 2;
  std::uint64_t seed = 0;
  int max_retries = 5;
  double pole_tol = 1e-8;

  std::vector<double> ladder() const {
    if (!(x0 >= 1.0) || !(x_ratio > 1.0) || rungs < 2) throw precondition_error("invalid X ladder");
    std::vector<double> xs;
    for (int j = 0; j < rungs; ++j) xs.push_back(x0 * std::pow(x_ratio, j));
    return xs;
  }
};

inline cplx z_X(double alpha, double X) { return two_pi * alpha * cplx(1.0 / X, 1.0); }

/// A family together with the twist parameter alpha (and its spectrum hit).
class TwistProblem {
 public:
  TwistProblem(TwistFamily family, double alpha, std::optional<SpectrumHit> hit)
      : family_(std::move(family)), alpha_(alpha), hit_(std::move(hit)) {
    if (!(alpha_ > 0)) throw precondition_error("alpha must be positive");
  }
  static TwistProblem from_alpha(TwistFamily family, double alpha, double tol = kDefaultAlphaTol) {
    auto hit = membership(family, alpha, tol);
    if (hit) alpha = hit->alpha;
    return TwistProblem(std::move(family), alpha, std::move(hit));
  }
  static TwistProblem from_witness(TwistFamily family, const IndexVector& witness) {
    auto hit = membership(family, witness);
    const double a = hit.alpha;
    return TwistProblem(std::move(family), a, std::move(hit));
  }

  TwistProblem(const TwistProblem& o) : family_(o.family_), alpha_(o.alpha_), hit_(o.hit_) {}

  const TwistFamily& family() const { return family_; }
  double alpha() const { return alpha_; }
  const std::optional<SpectrumHit>& hit() const { return hit_; }
  bool in_spectrum() const { return hit_.has_value(); }

  const MultiPoly& w_poly(int ell) const {
    std::lock_guard lock(mutex_);
    if (auto it = w_.find(ell); it != w_.end()) return it->second;
    return w_.emplace(ell, w_ell_poly(family_, ell)).first->second;
  }

  /// True when Xi_l vanishes for every s: for N >= 2 never; for N = 1 exactly
  /// when the structural invariant d_F(l) is zero.
  bool residue_vanishes_identically(int ell) const {
    if (family_.size() >= 2) return false;
    std::lock_guard lock(mutex_);
    if (auto it = vanishing_.find(ell); it != vanishing_.end()) return it->second;
    const bool z = structural_invariants_symbolic(family_.member(0), ell)[ell].is_zero();
    return vanishing_.emplace(ell, z).first->second;
  }

 private:
  TwistFamily family_;
  double alpha_;
  std::optional<SpectrumHit> hit_;
  mutable std::mutex mutex_;
  mutable std::map<int, MultiPoly> w_;
  mutable std::map<int, bool> vanishing_;
};

// ---------------------------------------------------------------------------
// Direct summation

struct SeriesCutoff {
  double t_max = 0.0;   // terms with prod n^kappa <= t_max are summed
  long long keys = 0;   // t_max^r
  double tail_bound = 0.0;
};

namespace detail {

// Upper bound for log sum_{n>=1} n^(-sigma) exp(-c n^kappa).
inline double log_member_sum(double sigma, double c, double kappa) {
  const int n0 = 1000;
  double head = 0.0;
  for (int n = 1; n <= n0; ++n) head += std::exp(-sigma * std::log(n) - c * std::pow(n, kappa));
  // Beyond n0: x^-sigma <= x^-sigma' with sigma' = min(sigma, 1/2), then the
  // full integral over (0, inf) plus one peak value.
  const double sp = std::min(sigma, 0.5);
  const double g = (1.0 - sp) / kappa;
  const double log_integral = std::lgamma(g) - g * std::log(c) - std::log(kappa);
  double x_peak = n0;
  if (sigma < 0) x_peak = std::max<double>(n0, std::pow(-sigma / (c * kappa), 1.0 / kappa));
  const double log_peak = -sigma * std::log(x_peak) - c * std::pow(x_peak, kappa);
  const double m = std::max({std::log(head), log_integral, log_peak});
  return m + std::log(std::exp(std::log(head) - m) + std::exp(log_integral - m) + std::exp(log_peak - m));
}

}  // namespace detail

/// Truncation point for sum over prod n^kappa <= t_max such that the
/// neglected part at smoothing X is below tol. Uses, for t = prod n_v^kappa_v,
///   exp(-b t) <= exp(-theta b T) exp(c (N-1)) prod_v exp(-c n_v^kappa_v),  c = (1-theta) b,
/// valid for t > T since prod x_v >= sum x_v - (N-1) when all x_v >= 1.
inline SeriesCutoff plan_series_cutoff(const TwistFamily& family, const Point& s, double alpha, double X, double tol) {
  const double beta = two_pi * alpha / X;
  const double N = static_cast<double>(family.size());
  double best_t = std::numeric_limits<double>::infinity();
  for (double theta : {0.5, 0.6, 0.7, 0.8, 0.9, 0.95}) {
    const double c = (1.0 - theta) * beta;
    double log_b = c * (N - 1.0);
    for (std::size_t v = 0; v < family.size(); ++v) {
      log_b += std::log(std::max(1e-300, family.member(v).coefficients.max_abs()));
      log_b += detail::log_member_sum(s[v].real(), c, family.kappa(v));
    }
    const double t = std::max(1.0, (log_b - std::log(tol)) / (theta * beta));
    best_t = std::min(best_t, t);
  }
  SeriesCutoff out;
  out.t_max = best_t;
  const double keys = std::pow(best_t, static_cast<double>(family.key_root()));
  out.keys = keys > 9e18 ? std::numeric_limits<long long>::max() : static_cast<long long>(std::ceil(keys));
  out.tail_bound = tol;
  return out;
}

/// Coefficients grouped by key K = prod n_v^(p_v) (kappa_v = p_v / r), so that
/// prod n_v^kappa_v = K^(1/r):  table[K] = sum_{key(n) = K} prod a_v(n_v) n_v^(-s_v).
class KeyedSeries {
 public:
  KeyedSeries(const TwistFamily& family, const Point& s, long long keys) : r_(family.key_root()) {
    if (s.size() != family.size()) throw precondition_error("point dimension must equal family size");
    table_.assign(static_cast<std::size_t>(keys) + 1, cplx{});
    const std::size_t N = family.size();
    std::vector<std::vector<cplx>> coef(N);
    std::vector<std::vector<long long>> power(N);
    for (std::size_t v = 0; v < N; ++v) {
      const long long p = family.key_exponent(v);
      for (long long n = 1;; ++n) {
        long long pw = 1;
        bool over = false;
        for (long long i = 0; i < p; ++i) {
          if (pw > keys / n) {
            over = true;
            break;
          }
          pw *= n;
        }
        if (over || pw > keys) break;
        power[v].push_back(pw);
        const cplx a = family.member(v).coefficients(n);
        coef[v].push_back(a == cplx{} ? cplx{} : a * std::exp(-s[v] * std::log(static_cast<double>(n))));
      }
    }
    std::function<void(std::size_t, long long, cplx)> walk = [&](std::size_t v, long long key, cplx partial) {
      const auto& pw = power[v];
      const auto& cf = coef[v];
      const long long limit = keys / key;
      if (v + 1 == N) {
        for (std::size_t i = 0; i < pw.size() && pw[i] <= limit; ++i)
          if (cf[i] != cplx{}) table_[static_cast<std::size_t>(key * pw[i])] += partial * cf[i];
        return;
      }
      for (std::size_t i = 0; i < pw.size() && pw[i] <= limit; ++i)
        if (cf[i] != cplx{}) walk(v + 1, key * pw[i], partial * cf[i]);
    };
    walk(0, 1, 1.0);
  }

  long long keys() const { return static_cast<long long>(table_.size()) - 1; }

  /// F_X for every X in xs, in a single pass over the table.
  std::vector<cplx> evaluate(double alpha, const std::vector<double>& xs) const {
    std::vector<double> beta;
    for (double X : xs) beta.push_back(two_pi * alpha / X);
    std::vector<cplx> acc(xs.size());
    for (std::size_t K = 1; K < table_.size(); ++K) {
      if (table_[K] == cplx{}) continue;
      const double k = static_cast<double>(K);
      const double t = r_ == 1 ? k : r_ == 2 ? std::sqrt(k) : r_ == 3 ? std::cbrt(k) : std::pow(k, 1.0 / static_cast<double>(r_));
      const double turns = alpha * t;
      const cplx phased = table_[K] * std::exp(cplx(0.0, -two_pi * (turns - std::floor(turns))));
      for (std::size_t j = 0; j < xs.size(); ++j) acc[j] += phased * std::exp(-beta[j] * t);
    }
    return acc;
  }

 private:
  long long r_;
  std::vector<cplx> table_;
};

inline long long checked_keys(const SeriesCutoff& cut, const EvalParams& p) {
  if (static_cast<double>(cut.keys) > p.max_keys)
    throw cutoff_error("series cutoff needs " + std::to_string(cut.keys) + " keys (prod n^kappa up to " +
                           std::to_string(cut.t_max) + "), above max_keys = " + std::to_string(p.max_keys),
                       static_cast<double>(cut.keys));
  return std::max<long long>(cut.keys, 1);
}

/// F_X at each X of xs from one table sized for the smallest decay.
inline std::vector<cplx> smoothed_twist_ladder(const TwistFamily& family, const Point& s, double alpha,
                                               const std::vector<double>& xs, const EvalParams& p) {
  if (!(alpha > 0)) throw precondition_error("alpha must be positive");
  for (double X : xs)
    if (!(X >= 1.0)) throw precondition_error("X must be >= 1");
  const double x_max = *std::max_element(xs.begin(), xs.end());
  const SeriesCutoff cut = plan_series_cutoff(family, s, alpha, x_max, p.tail_tol);
  return KeyedSeries(family, s, checked_keys(cut, p)).evaluate(alpha, xs);
}

inline cplx smoothed_twist_series(const TwistFamily& family, const Point& s, double alpha, const EvalParams& p) {
  return smoothed_twist_ladder(family, s, alpha, {p.X}, p).front();
}

// ---------------------------------------------------------------------------
// Mellin-Barnes integral

inline double mb_contour(const TwistFamily& family, const Point& s, const EvalParams& p) {
  double need = 0.0;
  for (std::size_t v = 0; v < family.size(); ++v)
    need = std::max(need, (1.0 + p.mb_margin - s[v].real()) / family.kappa(v));
  if (p.contour_c) {
    if (!(*p.contour_c > 0.0) || *p.contour_c < need)
      throw precondition_error("contour abscissa c violates c > 0 and Re(s_v + kappa_v c) >= 1 + margin; need c >= " +
                               std::to_string(need));
    return *p.contour_c;
  }
  return std::max(need, 0.5);
}

/// (1/2 pi i) int_(c) prod F_v(s_v + kappa_v w) Gamma(w) z_X^(-w) dw by the
/// trapezoid rule. The integration window follows the bound
///   |integrand| <= |Gamma(c+iv)| |z_X|^(-c) e^(v arg z_X) prod A_v zeta(Re s_v + kappa_v c).
inline cplx smoothed_twist_mb(const TwistFamily& family, const Point& s, double alpha, const EvalParams& p) {
  if (s.size() != family.size()) throw precondition_error("point dimension must equal family size");
  if (!(alpha > 0) || !(p.X >= 1.0)) throw precondition_error("need alpha > 0 and X >= 1");
  const double c = mb_contour(family, s, p);
  const cplx log_z = std::log(z_X(alpha, p.X));
  double log_f_bound = -c * log_z.real();
  for (std::size_t v = 0; v < family.size(); ++v)
    log_f_bound += std::log(family.member(v).coefficients.max_abs() *
                            riemann_zeta(s[v].real() + family.kappa(v) * c).real());
  const auto log_bound = [&](double v) { return log_gamma(cplx(c, v)).real() + v * log_z.imag() + log_f_bound; };
  const auto window = [&](double dir) {
    if (p.mb_height) return *p.mb_height;
    const double rate = dir > 0 ? (pi / 2 - log_z.imag()) : (pi / 2 + log_z.imag());
    double v = 5.0;
    while (v < 1e5 && log_bound(dir * v) - std::log(rate) > std::log(p.mb_tol)) v += 5.0;
    return v;
  };
  const double top = window(1.0);
  const double bottom = window(-1.0);
  const auto n_top = static_cast<long>(std::ceil(top / p.mb_h));
  const auto n_bottom = static_cast<long>(std::ceil(bottom / p.mb_h));
  cplx acc{};
  for (long k = -n_bottom; k <= n_top; ++k) {
    const cplx w(c, k * p.mb_h);
    cplx prod = std::exp(log_gamma(w) - w * log_z);
    for (std::size_t v = 0; v < family.size(); ++v)
      prod *= dirichlet_value(family.member(v), s[v] + family.kappa(v) * w);
    acc += prod;
  }
  return acc * p.mb_h / two_pi;
}

// ---------------------------------------------------------------------------
// Residue functions

/// Xi(s, alpha) for the problem's spectrum point (0 off the spectrum).
inline cplx xi_sum(const TwistProblem& P, const Point& s) { return xi_sum(P.family(), P.hit(), s); }

/// Closed-form Xi_l(s, alpha):
///   (2 pi)^(-1/2) exp(-i sum((pi/2) d_v s_v + (pi/2) xi_v + d_v theta_v log(d_v kappa_v)))
///   * prod (kappa_v q_v^(1/d_v) / 2 pi)^(d_v (1/2 - s_v)) * W_l(s) * Xi(s, alpha).
inline cplx analytic_residue(const TwistProblem& P, const Point& s, int ell) {
  const TwistFamily& F = P.family();
  if (s.size() != F.size()) throw precondition_error("point dimension must equal family size");
  if (!P.in_spectrum()) return 0.0;
  cplx phase{};
  cplx log_mod{};
  for (std::size_t v = 0; v < F.size(); ++v) {
    const Invariants& inv = F.invariants(v);
    const double kv = F.kappa(v);
    phase += (pi / 2) * inv.d * s[v] + (pi / 2) * inv.xi + inv.d * inv.theta * std::log(inv.d * kv);
    log_mod += inv.d * (0.5 - s[v]) * std::log(kv * std::pow(inv.q, 1.0 / inv.d) / two_pi);
  }
  const cplx W = P.w_poly(ell).evaluate(s);
  return std::exp(-I * phase + log_mod) / std::sqrt(two_pi) * W * xi_sum(P, s);
}

// Amplitude Xi~_k of Gamma(u_k) (-iX)^(u_k) in F_X: the residue function at the
// point s + kappa u_k of H*_k, rescaled to the smoothing variable.
inline cplx correction_amplitude(const TwistProblem& P, const Point& s, int k) {
  const TwistFamily& F = P.family();
  const cplx u = locus_offset(F, s, k);
  Point on(s);
  for (std::size_t v = 0; v < F.size(); ++v) on[v] += F.kappa(v) * u;
  return std::exp(-u * std::log(two_pi * P.alpha()) + I * (pi / 2) * u) * analytic_residue(P, on, k);
}

// ---------------------------------------------------------------------------
// Continuation

struct ContinuationResult {
  cplx value;
  std::vector<double> X;
  std::vector<cplx> raw;           // F_X on the ladder
  std::vector<cplx> extrapolated;  // limit estimates using rungs 0..j
  std::vector<double> cauchy;      // |F_{X_{j+1}} - F_{X_j}|
  double ladder_diff = 0.0;        // |value - estimate without the top rung|
  int strip = -1;                  // corrections subtracted for k <= strip
  int integer_terms = 0;           // J actually fitted
  long long keys = 0;
  bool in_spectrum = false;
};

/// Largest l with Re u_l > -2/3, i.e. the strip whose divergent terms are
/// subtracted; -1 when none is.
inline int continuation_strip(const TwistFamily& F, const Point& s) {
  const double x = locus_offset(F, s, 0).real();
  return std::max(-1, static_cast<int>(std::ceil(x + 2.0 / 3.0)) - 1);
}

inline void check_off_poles(const TwistProblem& P, const Point& s, double tol) {
  if (!P.in_spectrum()) return;
  const cplx u0 = locus_offset(P.family(), s, 0);
  const long k = std::lround(u0.real());
  if (k < 0) return;
  if (std::abs(u0 - static_cast<double>(k)) < tol && !P.residue_vanishes_identically(static_cast<int>(k)))
    throw pole_error("point lies on the pole hyperplane H*_" + std::to_string(k) + " (distance " +
                     std::to_string(std::abs(u0 - static_cast<double>(k))) + ")");
}

inline ContinuationResult continue_twist(const TwistProblem& P, const Point& s, const EvalParams& p) {
  const TwistFamily& F = P.family();
  if (s.size() != F.size()) throw precondition_error("point dimension must equal family size");
  check_off_poles(P, s, p.pole_tol);

  ContinuationResult res;
  res.in_spectrum = P.in_spectrum();
  res.X = p.ladder();
  const double x_max = res.X.back();
  const SeriesCutoff cut = plan_series_cutoff(F, s, P.alpha(), x_max, p.tail_tol);
  res.keys = checked_keys(cut, p);
  res.raw = KeyedSeries(F, s, res.keys).evaluate(P.alpha(), res.X);
  for (std::size_t j = 0; j + 1 < res.raw.size(); ++j) res.cauchy.push_back(std::abs(res.raw[j + 1] - res.raw[j]));

  const bool analytic = p.mode == ContinuationMode::analytic;
  if (P.in_spectrum()) res.strip = continuation_strip(F, s);
  // Analytic corrections are subtracted from the series; the remaining
  // exponents (-1..-J and the unsubtracted u_k above -(J+1/2)) are fitted.
  // J is lowered from integer_terms until the fit leaves a spare rung.
  const auto plan = [&](int J, std::vector<cplx>& exps, std::vector<std::pair<int, cplx>>& subtract) {
    exps.clear();
    subtract.clear();
    for (int j = 1; j <= J; ++j) exps.push_back(-static_cast<double>(j));
    if (!P.in_spectrum()) return;
    for (int k = 0;; ++k) {
      const cplx u = locus_offset(F, s, k);
      if (u.real() <= -(J + 0.5)) break;
      if (P.residue_vanishes_identically(k)) continue;
      if (analytic && k <= res.strip)
        subtract.emplace_back(k, u);
      else
        exps.push_back(u);
    }
  };
  std::vector<cplx> exps;
  std::vector<std::pair<int, cplx>> subtract;
  int J = std::max(p.integer_terms, 0);
  for (plan(J, exps, subtract); J > 1 && exps.size() + 2 > res.raw.size(); plan(--J, exps, subtract)) {
  }
  res.integer_terms = J;
  const std::size_t unknowns = exps.size() + 1;
  if (unknowns + 1 > res.raw.size())
    throw precondition_error("X ladder too short: " + std::to_string(res.raw.size()) + " rungs for " +
                             std::to_string(unknowns) + " unknowns");

  std::vector<cplx> series = res.raw;
  cplx offset{};
  for (const auto& [k, u] : subtract) {
    const cplx amp = correction_amplitude(P, s, k) * gamma(u);
    for (std::size_t j = 0; j < series.size(); ++j)
      series[j] -= amp * (std::exp(u * (std::log(res.X[j]) - I * (pi / 2))) - 1.0);
    offset += amp;
  }

  for (std::size_t n = unknowns; n <= series.size(); ++n) {
    const std::vector<double> xs(res.X.begin(), res.X.begin() + static_cast<long>(n));
    const std::vector<cplx> fs(series.begin(), series.begin() + static_cast<long>(n));
    res.extrapolated.push_back(fit_exponents(xs, fs, exps).constant - offset);
  }
  res.value = res.extrapolated.back();
  res.ladder_diff = std::abs(res.value - res.extrapolated[res.extrapolated.size() - 2]);
  if (!(res.ladder_diff <= p.ladder_tol * std::max(1.0, std::abs(res.value)))) {
    std::vector<double> history;
    for (std::size_t j = 0; j + 1 < res.extrapolated.size(); ++j)
      history.push_back(std::abs(res.extrapolated[j + 1] - res.extrapolated[j]));
    throw convergence_error("X-ladder extrapolation did not settle (last change " + std::to_string(res.ladder_diff) + ")",
                            history);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Residues on H*_l

struct ResidueReport {
  int ell = 0;
  Point s;
  cplx numeric;
  cplx analytic;
  double rel_error = 0.0;
  // Approach metadata.
  Point direction;
  std::vector<double> eps;
  std::vector<cplx> scaled_values;  // eps * F(s + eps u)
  int retries = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  // Portable: the standard distributions are not reproducible across libraries.
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

}  // namespace detail

/// Limit of (sum d_v (w_v - s_v)) F(w) as w -> s along w = s + eps u, with the
/// continuation in fitted mode (independent of the closed form), extrapolated
/// to eps = 0 by a low-degree polynomial.
inline ResidueReport numeric_residue(const TwistProblem& P, const Point& s_in, int ell, const EvalParams& p) {
  const TwistFamily& F = P.family();
  if (!P.in_spectrum()) throw precondition_error("numeric_residue: alpha is not in the spectrum");
  if (s_in.size() != F.size()) throw precondition_error("point dimension must equal family size");
  const PoleLocus locus = hyperplane(F, ell);
  if (locus.distance(s_in) > 1e-6 * std::max(1.0, std::abs(locus.target)))
    throw precondition_error("numeric_residue: point is not on H*_" + std::to_string(ell));

  ResidueReport rep;
  rep.ell = ell;
  rep.s = locus.project(s_in);
  rep.seed = p.seed;
  rep.eps = p.eps;
  EvalParams q = p;
  q.mode = ContinuationMode::fitted;

  std::mt19937_64 rng(p.seed);
  for (int attempt = 0; attempt <= p.max_retries; ++attempt) {
    Point u(F.size());
    cplx form{};
    do {
      form = 0.0;
      for (std::size_t v = 0; v < F.size(); ++v) {
        u[v] = detail::uniform(rng, -1.0, 1.0);
        form += locus.coefficients[v] * u[v];
      }
    } while (std::abs(form) < 0.2);
    for (auto& x : u) x /= form;  // sum d_v u_v = 1

    try {
      rep.scaled_values.clear();
      for (double e : p.eps) {
        Point w(rep.s);
        for (std::size_t v = 0; v < w.size(); ++v) w[v] += e * u[v];
        rep.scaled_values.push_back(e * continue_twist(P, w, q).value);
      }
      rep.direction = u;
      rep.retries = attempt;
      rep.numeric = polynomial_limit(p.eps, rep.scaled_values, p.eps_degree);
      rep.analytic = analytic_residue(P, rep.s, ell);
      const double scale = std::abs(rep.analytic);
      rep.rel_error = std::abs(rep.numeric - rep.analytic) / (scale > 1e-6 ? scale : 1.0);
      return rep;
    } catch (const pole_error&) {
      // The approach path met another pole hyperplane; try a new direction.
    }
  }
  throw precondition_error("numeric_residue: every approach direction met another pole locus");
}

struct VerifyReport {
  std::vector<ResidueReport> samples;
  bool nonvanishing = false;  // some |Xi_l| > 1e-10
  double max_rel_error = 0.0;
};

inline constexpr double kNonvanishingThreshold = 1e-10;

/// Samples points of H*_l (s_1..s_{N-1} uniform in a box, s_N solved from the
/// locus equation) and compares numeric and closed-form residues.
inline VerifyReport verify_theorem2(const TwistProblem& P, int ell, int n_samples, const EvalParams& p,
                                      double re_lo = 0.25, double re_hi = 1.0, double im_width = 0.5) {
  if (!P.in_spectrum()) throw precondition_error("verify: alpha is not in the spectrum");
  if (n_samples < 1) throw precondition_error("verify: need at least one sample");
  const TwistFamily& F = P.family();
  const PoleLocus locus = hyperplane(F, ell);
  std::mt19937_64 rng(p.seed);
  VerifyReport out;
  for (int k = 0; k < n_samples; ++k) {
    Point s(F.size(), 0.0);
    for (std::size_t v = 0; v + 1 < F.size(); ++v)
      s[v] = cplx(detail::uniform(rng, re_lo, re_hi), detail::uniform(rng, -im_width, im_width));
    s = locus.project(s);
    EvalParams q = p;
    q.seed = p.seed + 1000003ULL * static_cast<std::uint64_t>(k + 1);
    out.samples.push_back(numeric_residue(P, s, ell, q));
    out.nonvanishing = out.nonvanishing || std::abs(out.samples.back().analytic) > kNonvanishingThreshold;
    out.max_rel_error = std::max(out.max_rel_error, out.samples.back().rel_error);
  }
  return out;
}

}  // namespace mstwist
