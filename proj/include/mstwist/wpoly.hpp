#pragma once

// The residue polynomials W_l(s) of a twist family and their restriction to
// the hyperplane H*_l.

#include <string>
#include <vector>

#include "mstwist/lfunc.hpp"
#include "mstwist/multipoly.hpp"
#include "mstwist/spectrum.hpp"
#include "mstwist/sympoly.hpp"

namespace mstwist {

using StructuralTable = std::vector<std::vector<Scalar>>;  // [v][l] = d_{F_v}(l)

inline StructuralTable structural_table(const TwistFamily& family, int ell) {
  StructuralTable t;
  for (const auto& m : family.members()) t.push_back(structural_invariants_symbolic(m, ell));
  return t;
}

inline std::vector<Scalar> family_weights(const TwistFamily& family) {
  std::vector<Scalar> w;
  for (std::size_t v = 0; v < family.size(); ++v) w.push_back(scalar_from(family.invariants(v).d) * Scalar(family.kappa_exact()[v]));
  return w;
}

/// W_l(s) = sum over l_1+..+l_N+m = l of
///   prod_v d_{F_v}(l_v) (d_v kappa_v)^(-l_v) * P_m(a_1, .., a_N),
/// with P_m taken for weights d_v kappa_v and a_v = (d_v+1)/2 - l_v - i d_v theta_v - d_v s_v.
inline MultiPoly w_ell_poly(const TwistFamily& family, int ell, const StructuralTable& table) {
  if (ell < 0) throw precondition_error("ell must be >= 0");
  if (table.size() != family.size()) throw precondition_error("need structural invariants for every member");
  for (const auto& row : table)
    if (static_cast<int>(row.size()) <= ell)
      throw precondition_error("structural invariants must cover indices 0.." + std::to_string(ell));

  const std::size_t N = family.size();
  const auto vars = indexed_names("s", static_cast<int>(N));
  const auto weights = family_weights(family);
  GammaProductExpansion expansion(weights);

  MultiPoly W(vars);
  std::vector<int> parts(N, 0);
  std::function<void(std::size_t, int)> walk = [&](std::size_t v, int left) {
    if (v == N) {
      Scalar coef(1);
      std::vector<MultiPoly> subs;
      for (std::size_t mu = 0; mu < N; ++mu) {
        coef = coef * table[mu][parts[mu]] / pow(weights[mu], static_cast<unsigned>(parts[mu]));
        const Invariants& inv = family.invariants(mu);
        const Scalar d = scalar_from(inv.d);
        const Scalar shift = (d + Scalar(1)) / Scalar(2) - Scalar(parts[mu]) - scalar_from(cplx(0.0, inv.d * inv.theta));
        subs.push_back(MultiPoly::constant(vars, shift) - MultiPoly::variable(vars, mu) * d);
      }
      if (coef.is_zero()) return;
      W += expansion.p(left).compose(subs) * coef;
      return;
    }
    for (int k = 0; k <= left; ++k) {
      parts[v] = k;
      walk(v + 1, left - k);
    }
    parts[v] = 0;
  };
  walk(0, ell);
  return W;
}

inline MultiPoly w_ell_poly(const TwistFamily& family, int ell) {
  return w_ell_poly(family, ell, structural_table(family, ell));
}

/// Substitutes s_N = (target - sum_{v<N} d_v s_v) / d_N; result in s1..s_{N-1}.
inline MultiPoly restrict_to_hyperplane(const MultiPoly& W, const TwistFamily& family, int ell) {
  const std::size_t N = family.size();
  const auto vars = indexed_names("s", static_cast<int>(N) - 1);
  const PoleLocus locus = hyperplane(family, ell);
  const Scalar dN = scalar_from(locus.coefficients.back());
  std::vector<MultiPoly> subs;
  MultiPoly last = MultiPoly::constant(vars, scalar_from(locus.target) / dN);
  for (std::size_t v = 0; v + 1 < N; ++v) {
    subs.push_back(MultiPoly::variable(vars, v));
    last -= MultiPoly::variable(vars, v) * (scalar_from(locus.coefficients[v]) / dN);
  }
  subs.push_back(last);
  return W.rebase(indexed_names("s", static_cast<int>(N))).compose(subs);
}

/// (sum (d_v/kappa_v) s_v^2 - (sum d_v s_v)^2)^l / (2^l l!).
inline MultiPoly w_leading_form(const TwistFamily& family, int ell) {
  const auto vars = indexed_names("s", static_cast<int>(family.size()));
  MultiPoly sq(vars), lin(vars);
  for (std::size_t v = 0; v < family.size(); ++v) {
    const Scalar d = scalar_from(family.invariants(v).d);
    const MultiPoly s = MultiPoly::variable(vars, v);
    sq += s * s * (d / Scalar(family.kappa_exact()[v]));
    lin += s * d;
  }
  rational c = 1;
  for (int i = 1; i <= ell; ++i) c /= 2 * i;
  return pow(sq - lin * lin, static_cast<unsigned>(ell)) * Scalar(c);
}

}  // namespace mstwist
