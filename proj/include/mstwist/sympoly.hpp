#pragma once

// Symbolic recursions behind the Gamma-product expansion:
//   * the partial-fraction forms R_m, Q_M rewriting sum_k X_k / T^k over
//     Pochhammer denominators (AT+b)_m;
//   * the polynomials Q_j, V_k, P_m of the expansion
//       prod Gamma(a_v - l_v w) ~ (2 pi)^((N-1)/2) prod l_v^(a_v - l_v w - 1/2)
//                                 * sum_m P_m(a) Gamma(a - (N-1)/2 - w - m).

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "mstwist/errors.hpp"
#include "mstwist/multipoly.hpp"
#include "mstwist/scalar.hpp"
#include "mstwist/specfun.hpp"

namespace mstwist {

inline constexpr int kMaxExpansionOrder = 8;

/// R_1..R_M, R~_1..R~_M and Q_M, all over the variables X1..XM, T followed by
/// the parameter variables of A and b.
struct SumXTForms {
  int M = 0;
  std::vector<std::string> vars;
  MultiPoly A;
  MultiPoly b;
  std::vector<MultiPoly> R;        // R[m-1] = R_m
  std::vector<MultiPoly> R_tilde;  // R_tilde[m-1] = R~_m
  MultiPoly Q;                     // Q_M

  std::size_t x_index(int k) const { return static_cast<std::size_t>(k - 1); }
  std::size_t t_index() const { return static_cast<std::size_t>(M); }

  // Both sides of
  //   sum_k X_k/T^k = sum_m (-1)^m R_m/(AT+b)_m + Q_M/(T^M (AT+b)_M)
  // at a numeric point (X1..XM, T, params...).
  std::pair<cplx, cplx> identity_sides(const std::vector<cplx>& point) const {
    const cplx T = point.at(t_index());
    const cplx a = A.evaluate(point);
    const cplx bb = b.evaluate(point);
    cplx lhs{};
    cplx tk = 1.0;
    for (int k = 1; k <= M; ++k) {
      tk *= T;
      lhs += point[x_index(k)] / tk;
    }
    cplx rhs{};
    cplx poch = 1.0;
    for (int m = 1; m <= M; ++m) {
      poch *= a * T + bb + static_cast<double>(m - 1);
      rhs += ((m % 2 == 0) ? 1.0 : -1.0) * R[m - 1].evaluate(point) / poch;
    }
    rhs += Q.evaluate(point) / (tk * poch);
    return {lhs, rhs};
  }
};

/// Inductive construction with polynomial A, b over parameter variables.
inline SumXTForms sumxt_forms(const MultiPoly& A, const MultiPoly& b, int M) {
  if (M < 1) throw precondition_error("sumxt_forms: M must be >= 1");
  if (A.is_zero()) throw precondition_error("sumxt_forms: A must be nonzero");
  if (A.vars() != b.vars()) throw precondition_error("sumxt_forms: A and b must share parameter variables");

  SumXTForms f;
  f.M = M;
  f.vars = indexed_names("X", M);
  f.vars.push_back("T");
  for (const auto& v : A.vars()) f.vars.push_back(v);
  f.A = A.rebase(f.vars);
  f.b = b.rebase(f.vars);

  const auto X = [&](int k) { return MultiPoly::variable(f.vars, f.x_index(k)); };
  const MultiPoly T = MultiPoly::variable(f.vars, f.t_index());
  const MultiPoly AT_b = f.A * T + f.b;

  f.R.push_back(-(f.A * X(1)));
  f.R_tilde.push_back(MultiPoly(f.vars));
  MultiPoly Q = f.b * X(1);
  MultiPoly poch = AT_b;  // (AT+b)_m, kept one step ahead
  MultiPoly A_pow = f.A;
  for (int m = 2; m <= M; ++m) {
    const Scalar sign = (m % 2 == 0) ? Scalar(1) : Scalar(-1);
    A_pow = A_pow * f.A;
    poch = poch * (AT_b + MultiPoly::constant(f.vars, Scalar(m - 1)));
    const MultiPoly E = Q.coefficient_in(f.t_index(), m - 2);
    const MultiPoly Rt = sign * (f.A * E);
    const MultiPoly Rm = sign * (A_pow * X(m)) + Rt;
    Q = Q * T * (AT_b + MultiPoly::constant(f.vars, Scalar(m - 1))) + X(m) * poch - sign * Rm * pow(T, m);
    f.R.push_back(Rm);
    f.R_tilde.push_back(Rt);
  }
  f.Q = Q;
  return f;
}

/// Numeric A and b.
inline SumXTForms sumxt_forms(const Scalar& A, const Scalar& b, int M) {
  const std::vector<std::string> none;
  return sumxt_forms(MultiPoly::constant(none, A), MultiPoly::constant(none, b), M);
}

namespace detail {

inline void for_each_composition(int k, std::vector<int>& parts, const std::function<void(const std::vector<int>&)>& fn) {
  if (k == 0) {
    fn(parts);
    return;
  }
  for (int j = 1; j <= k; ++j) {
    parts.push_back(j);
    for_each_composition(k - j, parts, fn);
    parts.pop_back();
  }
}

// B_n(p) for a polynomial argument p.
inline MultiPoly bernoulli_of(int n, const MultiPoly& p) {
  const auto c = bernoulli_poly_coeffs(n);
  MultiPoly acc(p.vars());
  for (int k = n; k >= 0; --k) acc = acc * p + MultiPoly::constant(p.vars(), Scalar(c[k]));
  return acc;
}

}  // namespace detail

/// Cached Q_j, V_k, P_m for a fixed weight vector lambda (sum 1), as
/// polynomials in a1..aN.
class GammaProductExpansion {
 public:
  explicit GammaProductExpansion(std::vector<Scalar> lambdas) : lambdas_(std::move(lambdas)) {
    if (lambdas_.empty()) throw precondition_error("expansion needs at least one weight");
    cplx sum{};
    for (const auto& l : lambdas_) {
      if (!(l.value().real() > 0) || l.value().imag() != 0.0) throw precondition_error("weights must be positive reals");
      sum += l.value();
    }
    if (std::abs(sum - 1.0) > 1e-12) throw precondition_error("weights must sum to 1");
    vars_ = indexed_names("a", static_cast<int>(lambdas_.size()));
  }

  std::size_t size() const { return lambdas_.size(); }
  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<Scalar>& lambdas() const { return lambdas_; }

  const MultiPoly& q(int j) {
    check_order(j, 1);
    std::lock_guard lock(mutex_);
    return q_locked(j);
  }

  const MultiPoly& v(int k) {
    check_order(k, 1);
    std::lock_guard lock(mutex_);
    return v_locked(k);
  }

  const MultiPoly& p(int m) {
    check_order(m, 0);
    std::lock_guard lock(mutex_);
    return p_locked(m);
  }

  /// Truncated right-hand side with terms m = 0..M at numeric a and w.
  cplx truncated_value(const std::vector<cplx>& a, cplx w, int M) {
    if (a.size() != size()) throw precondition_error("parameter count mismatch");
    const double n = static_cast<double>(size());
    cplx asum{};
    cplx log_pref = 0.5 * (n - 1.0) * std::log(two_pi);
    for (std::size_t v = 0; v < size(); ++v) {
      asum += a[v];
      const double lam = lambdas_[v].value().real();
      log_pref += (a[v] - lam * w - 0.5) * std::log(lam);
    }
    cplx acc{};
    for (int m = 0; m <= M; ++m)
      acc += p(m).evaluate(a) * std::exp(log_pref + log_gamma(asum - 0.5 * (n - 1.0) - w - static_cast<double>(m)));
    return acc;
  }

 private:
  static void check_order(int k, int lo) {
    if (k < lo || k > kMaxExpansionOrder)
      throw precondition_error("expansion order " + std::to_string(k) + " outside [" + std::to_string(lo) + ", " +
                               std::to_string(kMaxExpansionOrder) + "]");
  }

  MultiPoly a_sum() const {
    MultiPoly s(vars_);
    for (std::size_t v = 0; v < size(); ++v) s += MultiPoly::variable(vars_, v);
    return s;
  }

  const MultiPoly& q_locked(int j) {
    if (auto it = q_.find(j); it != q_.end()) return it->second;
    const MultiPoly shift = MultiPoly::constant(vars_, Scalar(rational(static_cast<long long>(size()) - 1, 2)));
    MultiPoly acc = detail::bernoulli_of(j + 1, a_sum() - shift);
    for (std::size_t v = 0; v < size(); ++v)
      acc -= detail::bernoulli_of(j + 1, MultiPoly::variable(vars_, v)) * (Scalar(1) / pow(lambdas_[v], j));
    acc = acc * Scalar(rational(1, j * (j + 1)));
    return q_.emplace(j, std::move(acc)).first->second;
  }

  const MultiPoly& v_locked(int k) {
    if (auto it = v_.find(k); it != v_.end()) return it->second;
    MultiPoly acc(vars_);
    std::vector<int> parts;
    detail::for_each_composition(k, parts, [&](const std::vector<int>& c) {
      MultiPoly term = MultiPoly::constant(vars_, Scalar(1));
      for (int j : c) term = term * q_locked(j);
      rational inv_fact = 1;
      for (std::size_t i = 2; i <= c.size(); ++i) inv_fact /= static_cast<long long>(i);
      acc += term * Scalar(inv_fact);
    });
    return v_.emplace(k, std::move(acc)).first->second;
  }

  const MultiPoly& p_locked(int m) {
    if (auto it = p_.find(m); it != p_.end()) return it->second;
    if (m == 0) return p_.emplace(0, MultiPoly::constant(vars_, Scalar(1))).first->second;
    if (!forms_ || forms_->M < m) {
      // A = 1, b = (N+1)/2 - a.
      const MultiPoly A = MultiPoly::constant(vars_, Scalar(1));
      const MultiPoly b =
          MultiPoly::constant(vars_, Scalar(rational(static_cast<long long>(size()) + 1, 2))) - a_sum();
      forms_ = std::make_unique<SumXTForms>(sumxt_forms(A, b, std::max(m, 2)));
    }
    std::vector<MultiPoly> subs;
    for (int k = 1; k <= forms_->M; ++k) subs.push_back(k <= m ? v_locked(k) : MultiPoly(vars_));
    subs.emplace_back(vars_);  // T
    for (std::size_t v = 0; v < size(); ++v) subs.push_back(MultiPoly::variable(vars_, v));
    return p_.emplace(m, forms_->R[m - 1].compose(subs)).first->second;
  }

  std::vector<Scalar> lambdas_;
  std::vector<std::string> vars_;
  std::map<int, MultiPoly> q_, v_, p_;
  std::unique_ptr<SumXTForms> forms_;
  std::mutex mutex_;
};

inline MultiPoly qj_poly(int j, const std::vector<Scalar>& lambdas) { return GammaProductExpansion(lambdas).q(j); }
inline MultiPoly vk_poly(int k, const std::vector<Scalar>& lambdas) { return GammaProductExpansion(lambdas).v(k); }
inline MultiPoly pm_poly(int m, const std::vector<Scalar>& lambdas) { return GammaProductExpansion(lambdas).p(m); }

/// (sum a_v^2 / l_v - (sum a_v)^2)^k / (2^k k!): the top-degree part of P_k,
/// and of V_k up to the sign (-1)^k.
inline MultiPoly expansion_leading_form(const std::vector<Scalar>& lambdas, int k) {
  const auto vars = indexed_names("a", static_cast<int>(lambdas.size()));
  MultiPoly sum(vars), sq(vars);
  for (std::size_t v = 0; v < lambdas.size(); ++v) {
    const MultiPoly a = MultiPoly::variable(vars, v);
    sum += a;
    sq += a * a * (Scalar(1) / lambdas[v]);
  }
  rational c = 1;
  for (int i = 1; i <= k; ++i) c /= 2 * i;
  return pow(sq - sum * sum, static_cast<unsigned>(k)) * Scalar(c);
}

}  // namespace mstwist
