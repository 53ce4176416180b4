#pragma once

// Sparse multivariate polynomial over Scalar (exact Gaussian rationals, or
// complex doubles once an inexact coefficient has entered).

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "mstwist/errors.hpp"
#include "mstwist/scalar.hpp"

namespace mstwist {

class MultiPoly {
 public:
  using Exponents = std::vector<int>;
  using TermMap = std::map<Exponents, Scalar>;

  MultiPoly() = default;
  explicit MultiPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  static MultiPoly constant(std::vector<std::string> vars, const Scalar& c) {
    MultiPoly p(std::move(vars));
    p.add_term(Exponents(p.arity(), 0), c);
    return p;
  }
  static MultiPoly variable(std::vector<std::string> vars, std::size_t index) {
    if (index >= vars.size()) throw precondition_error("variable index out of range");
    MultiPoly p(std::move(vars));
    Exponents e(p.arity(), 0);
    e[index] = 1;
    p.add_term(e, Scalar(1));
    return p;
  }
  static MultiPoly variable(std::vector<std::string> vars, const std::string& name) {
    const auto it = std::find(vars.begin(), vars.end(), name);
    if (it == vars.end()) throw precondition_error("unknown variable '" + name + "'");
    return variable(vars, static_cast<std::size_t>(it - vars.begin()));
  }

  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t arity() const { return vars_.size(); }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_exact() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.exact(); });
  }

  std::size_t index_of(const std::string& name) const {
    const auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end()) throw precondition_error("unknown variable '" + name + "'");
    return static_cast<std::size_t>(it - vars_.begin());
  }

  void add_term(const Exponents& e, const Scalar& c) {
    if (e.size() != arity()) throw precondition_error("exponent vector arity mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  Scalar coefficient(const Exponents& e) const {
    const auto it = terms_.find(e);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  // Total degree; -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, total(e));
    return d;
  }

  int degree_in(std::size_t var) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e.at(var));
    return d;
  }

  // Coefficient of var^k, as a polynomial in the same variables (var absent).
  MultiPoly coefficient_in(std::size_t var, int k) const {
    MultiPoly out(vars_);
    for (const auto& [e, c] : terms_) {
      if (e.at(var) != k) continue;
      Exponents f = e;
      f[var] = 0;
      out.add_term(f, c);
    }
    return out;
  }

  MultiPoly homogeneous_part(int deg) const {
    MultiPoly out(vars_);
    for (const auto& [e, c] : terms_)
      if (total(e) == deg) out.add_term(e, c);
    return out;
  }

  MultiPoly leading_part() const { return homogeneous_part(degree()); }

  cplx evaluate(const std::vector<cplx>& point) const {
    if (point.size() != arity()) throw precondition_error("evaluation point arity mismatch");
    cplx acc{};
    for (const auto& [e, c] : terms_) {
      cplx t = c.value();
      for (std::size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k) t *= point[i];
      acc += t;
    }
    return acc;
  }

  // Substitutes subs[i] for variable i; all substitutes share one variable list.
  MultiPoly compose(const std::vector<MultiPoly>& subs) const {
    if (subs.size() != arity()) throw precondition_error("compose: need one substitute per variable");
    if (subs.empty()) return *this;
    const auto& out_vars = subs.front().vars();
    for (const auto& s : subs)
      if (s.vars() != out_vars) throw precondition_error("compose: substitutes must share variables");
    std::vector<std::vector<MultiPoly>> powers(arity());
    MultiPoly out(out_vars);
    for (const auto& [e, c] : terms_) {
      MultiPoly t = constant(out_vars, c);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        auto& pw = powers[i];
        if (pw.empty()) pw.push_back(constant(out_vars, Scalar(1)));
        while (static_cast<int>(pw.size()) <= e[i]) pw.push_back(pw.back() * subs[i]);
        t = t * pw[e[i]];
      }
      out += t;
    }
    return out;
  }

  // Re-expresses the polynomial over another variable list, matching by name.
  MultiPoly rebase(const std::vector<std::string>& new_vars) const {
    std::vector<int> where(arity(), -1);
    for (std::size_t i = 0; i < arity(); ++i) {
      const auto it = std::find(new_vars.begin(), new_vars.end(), vars_[i]);
      if (it != new_vars.end()) where[i] = static_cast<int>(it - new_vars.begin());
    }
    MultiPoly out(new_vars);
    for (const auto& [e, c] : terms_) {
      Exponents f(new_vars.size(), 0);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (where[i] < 0) throw precondition_error("rebase: variable '" + vars_[i] + "' has no target");
        f[where[i]] = e[i];
      }
      out.add_term(f, c);
    }
    return out;
  }

  MultiPoly conj() const {
    MultiPoly out(vars_);
    for (const auto& [e, c] : terms_) out.add_term(e, c.conj());
    return out;
  }

  MultiPoly& operator+=(const MultiPoly& b) {
    check_same(b);
    for (const auto& [e, c] : b.terms_) add_term(e, c);
    return *this;
  }
  MultiPoly& operator-=(const MultiPoly& b) {
    check_same(b);
    for (const auto& [e, c] : b.terms_) add_term(e, -c);
    return *this;
  }
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator-(const MultiPoly& a) { return a * Scalar(-1); }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check_same(b);
    MultiPoly out(a.vars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    }
    return out;
  }
  friend MultiPoly operator*(const MultiPoly& a, const Scalar& c) {
    MultiPoly out(a.vars_);
    for (const auto& [e, v] : a.terms_) out.add_term(e, v * c);
    return out;
  }
  friend MultiPoly operator*(const Scalar& c, const MultiPoly& a) { return a * c; }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

  // Canonical text: terms in descending lexicographic exponent order.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      Scalar coef = c;
      bool negative = c.exact() && c.exact_value().im == 0 && c.exact_value().re < 0;
      if (negative) coef = -c;
      out += first ? (negative ? "-" : "") : (negative ? " - " : " + ");
      first = false;
      std::string mono;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!mono.empty()) mono += '*';
        mono += vars_[i];
        if (e[i] > 1) mono += '^' + std::to_string(e[i]);
      }
      const bool unit = coef.exact() && coef.exact_value() == GaussRational(1);
      if (mono.empty()) out += mstwist::to_string(coef);
      else if (unit) out += mono;
      else out += mstwist::to_string(coef) + '*' + mono;
    }
    return out;
  }

 private:
  static int total(const Exponents& e) {
    int t = 0;
    for (int k : e) t += k;
    return t;
  }
  void check_same(const MultiPoly& b) const {
    if (vars_ != b.vars_) throw precondition_error("polynomial variable lists differ");
  }

  std::vector<std::string> vars_;
  TermMap terms_;
};

inline MultiPoly pow(const MultiPoly& base, unsigned exponent) {
  MultiPoly result = MultiPoly::constant(base.vars(), Scalar(1));
  MultiPoly b = base;
  while (exponent) {
    if (exponent & 1U) result = result * b;
    exponent >>= 1U;
    if (exponent) b = b * b;
  }
  return result;
}

inline std::vector<std::string> indexed_names(const std::string& stem, int count) {
  std::vector<std::string> out;
  for (int i = 1; i <= count; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

}  // namespace mstwist
