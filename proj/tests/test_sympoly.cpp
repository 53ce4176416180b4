#include <gtest/gtest.h>

#include <random>

#include "mstwist/sympoly.hpp"
#include "mstwist/wpoly.hpp"

using namespace mstwist;

namespace {

std::mt19937_64 rng(7);

cplx random_c(double r = 1.0) {
  std::uniform_real_distribution<double> u(-r, r);
  return {u(rng), u(rng)};
}

const std::vector<Scalar> kHalves = {Scalar(rational(1, 2)), Scalar(rational(1, 2))};

MultiPoly var(const std::vector<std::string>& vars, std::size_t i) { return MultiPoly::variable(vars, i); }

}  // namespace

TEST(MultiPoly, Arithmetic) {
  const std::vector<std::string> v = {"x"};
  const MultiPoly x = var(v, 0), one = MultiPoly::constant(v, 1);
  const MultiPoly p = (x + one) * (x - one);
  EXPECT_EQ(p, x * x - one);
  EXPECT_EQ(p.to_string(), "x^2 - 1");
  EXPECT_EQ(p.evaluate({2.0}), cplx(3.0));
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ((p - p).degree(), -1);
}

TEST(MultiPoly, ComposeBernoulli) {
  // B_2(a1 + a2 - 1/2) = (a1+a2)^2 - 2(a1+a2) + 11/12
  const std::vector<std::string> v = {"a1", "a2"};
  const MultiPoly s = var(v, 0) + var(v, 1) - MultiPoly::constant(v, Scalar(rational(1, 2)));
  const MultiPoly sum = var(v, 0) + var(v, 1);
  const MultiPoly expected = sum * sum - sum * Scalar(2) + MultiPoly::constant(v, Scalar(rational(11, 12)));
  EXPECT_EQ(detail::bernoulli_of(2, s), expected);
}

TEST(MultiPoly, ArityMismatchRejected) {
  const MultiPoly p = MultiPoly::variable({"x", "y"}, 0);
  EXPECT_THROW(p.compose({MultiPoly::variable({"z"}, 0)}), precondition_error);
  EXPECT_THROW(p.evaluate({1.0}), precondition_error);
  EXPECT_THROW(p + MultiPoly::variable({"x"}, 0), precondition_error);
}

TEST(MultiPoly, InexactFlagPropagates) {
  const std::vector<std::string> v = {"x"};
  const MultiPoly p = var(v, 0) * Scalar::inexact(cplx(std::sqrt(2.0), 0));
  EXPECT_FALSE(p.is_exact());
  EXPECT_TRUE((var(v, 0) * Scalar(3)).is_exact());
  EXPECT_TRUE((p * Scalar(0)).is_zero());
}

TEST(SumXT, BaseCase) {
  const SumXTForms f = sumxt_forms(Scalar(1), Scalar(0), 1);
  const std::vector<std::string> vars = f.vars;
  EXPECT_EQ(f.R[0], -(f.A * var(vars, 0)));
  EXPECT_EQ(f.Q, f.b * var(vars, 0));
  EXPECT_TRUE(f.R_tilde[0].is_zero());
}

TEST(SumXT, BaseIdentity) {
  // A X1/(AT+b) + b X1/(T(AT+b)) = X1/T
  const cplx A(1.3, -0.4), b(0.2, 0.9), X(0.7, 0.1), T(2.0, 1.0);
  const SumXTForms f = sumxt_forms(scalar_from(A), scalar_from(b), 1);
  const auto [lhs, rhs] = f.identity_sides({X, T});
  EXPECT_LT(std::abs(lhs - rhs), 1e-14);
  EXPECT_LT(std::abs(A * X / (A * T + b) + b * X / (T * (A * T + b)) - X / T), 1e-14);
}

TEST(SumXT, IdentityM4) {
  const SumXTForms f = sumxt_forms(Scalar(1), scalar_from(cplx(0.3, -0.2)), 4);
  std::vector<cplx> pt;
  for (int k = 0; k < 4; ++k) pt.push_back(random_c());
  pt.push_back(cplx(1.7, 0.8));
  const auto [lhs, rhs] = f.identity_sides(pt);
  EXPECT_LT(std::abs(lhs - rhs) / std::abs(lhs), 1e-10);
}

TEST(SumXT, IdentityPropertySymbolicParameters) {
  const std::vector<std::string> params = {"A", "b"};
  for (int M = 1; M <= 6; ++M) {
    const SumXTForms f = sumxt_forms(var(params, 0), var(params, 1), M);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<cplx> pt;
      for (int k = 0; k < M; ++k) pt.push_back(random_c());
      cplx T = random_c(3.0);
      if (std::abs(T) < 1.0) T /= std::abs(T);
      pt.push_back(T);
      pt.push_back(random_c() + cplx(1.2, 0));  // A != 0
      pt.push_back(random_c());
      const auto [lhs, rhs] = f.identity_sides(pt);
      EXPECT_LT(std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-3), 1e-9) << "M=" << M;
    }
  }
}

TEST(SumXT, StructuralAssertions) {
  const std::vector<std::string> params = {"A", "b"};
  const int M = 6;
  const SumXTForms f = sumxt_forms(var(params, 0), var(params, 1), M);
  EXPECT_LE(f.Q.degree_in(f.t_index()), M - 1);
  for (int j = 1; j <= M; ++j) EXPECT_LE(f.Q.degree_in(f.x_index(j)), 1);
  for (int m = 1; m <= M; ++m) {
    const MultiPoly& R = f.R[m - 1];
    // Linear in each X_j, no X_j beyond m, no T.
    for (int j = 1; j <= M; ++j) EXPECT_LE(R.degree_in(f.x_index(j)), j <= m ? 1 : 0);
    EXPECT_EQ(R.degree_in(f.t_index()), 0);
    // R_m - (-1)^m A^m X_m has zero X_m coefficient.
    MultiPoly lead = pow(f.A, static_cast<unsigned>(m)) * MultiPoly::variable(f.vars, f.x_index(m));
    if (m % 2) lead = -lead;
    EXPECT_TRUE((R - lead).coefficient_in(f.x_index(m), 1).is_zero()) << m;
    EXPECT_EQ(R - lead, f.R_tilde[m - 1]);
  }
}

TEST(SumXT, ZeroARejected) { EXPECT_THROW(sumxt_forms(Scalar(0), Scalar(1), 2), precondition_error); }

TEST(GammaExpansion, Q1AtOrigin) {
  EXPECT_EQ(qj_poly(1, kHalves).evaluate({0.0, 0.0}), cplx(0.125));
  EXPECT_EQ(qj_poly(2, kHalves).degree(), 3);
}

TEST(GammaExpansion, Q1LeadingPart) {
  const MultiPoly q1 = qj_poly(1, kHalves);
  const auto& v = q1.vars();
  const MultiPoly a = var(v, 0) + var(v, 1);
  const MultiPoly expected = (a * a - (var(v, 0) * var(v, 0) + var(v, 1) * var(v, 1)) * Scalar(2)) * Scalar(rational(1, 2));
  EXPECT_EQ(q1.leading_part(), expected);
}

TEST(GammaExpansion, VCompositions) {
  const std::vector<Scalar> lam = {Scalar(rational(1, 3)), Scalar(rational(2, 3))};
  GammaProductExpansion g(lam);
  EXPECT_THROW(g.v(0), precondition_error);
  EXPECT_EQ(g.v(1), g.q(1));
  EXPECT_EQ(g.v(2), g.q(2) + g.q(1) * g.q(1) * Scalar(rational(1, 2)));
  EXPECT_EQ(g.v(3), g.q(3) + g.q(1) * g.q(2) + pow(g.q(1), 3) * Scalar(rational(1, 6)));
  for (int k = 1; k <= 4; ++k) EXPECT_EQ(g.v(k).leading_part(), expansion_leading_form(lam, k) * Scalar(k % 2 ? -1 : 1)) << k;
}

TEST(GammaExpansion, PPolynomials) {
  GammaProductExpansion g(kHalves);
  EXPECT_EQ(g.p(0), MultiPoly::constant(g.vars(), 1));
  EXPECT_EQ(g.p(1).to_string(), "1/2*a1^2 - a1*a2 + 1/2*a2^2 - 1/8");
  for (int m = 1; m <= 3; ++m) {
    EXPECT_EQ(g.p(m).degree(), 2 * m);
    EXPECT_EQ(g.p(m).leading_part(), expansion_leading_form(kHalves, m)) << m;
  }
}

TEST(GammaExpansion, LambdaConstraint) {
  EXPECT_THROW(GammaProductExpansion({Scalar(rational(1, 2)), Scalar(rational(1, 3))}), precondition_error);
  EXPECT_THROW(GammaProductExpansion({Scalar(rational(3, 2)), Scalar(rational(-1, 2))}), precondition_error);
  EXPECT_THROW(pm_poly(kMaxExpansionOrder + 1, kHalves), precondition_error);
}

TEST(GammaExpansion, TruncationErrorDecay) {
  // Against the direct product of Gammas along arg w = pi/2.
  GammaProductExpansion g(kHalves);
  const std::vector<cplx> a = {0.3, cplx(0.7, 0.2)};
  const auto exact = [&](cplx w) { return std::exp(log_gamma(a[0] - 0.5 * w) + log_gamma(a[1] - 0.5 * w)); };
  for (int M = 1; M <= 3; ++M) {
    std::vector<double> err;
    for (double r : {20.0, 40.0, 80.0, 160.0}) {
      const cplx w(0.0, r);
      err.push_back(std::abs(g.truncated_value(a, w, M) / exact(w) - 1.0));
    }
    for (std::size_t k = 0; k + 1 < err.size(); ++k) {
      EXPECT_GE(err[k] / err[k + 1], std::pow(2.0, M + 0.5)) << M;
      EXPECT_LE(err[k] / err[k + 1], std::pow(2.0, M + 1.5)) << M;
    }
  }
}

TEST(GammaExpansion, ThreeFactors) {
  const std::vector<Scalar> lam = {Scalar(rational(1, 2)), Scalar(rational(1, 3)), Scalar(rational(1, 6))};
  GammaProductExpansion g(lam);
  const std::vector<cplx> a = {0.2, 0.5, cplx(0.1, 0.3)};
  const auto exact = [&](cplx w) {
    cplx l{};
    for (int v = 0; v < 3; ++v) l += log_gamma(a[v] - lam[v].value() * w);
    return std::exp(l);
  };
  const double e1 = std::abs(g.truncated_value(a, cplx(0, 60), 2) / exact(cplx(0, 60)) - 1.0);
  const double e2 = std::abs(g.truncated_value(a, cplx(0, 120), 2) / exact(cplx(0, 120)) - 1.0);
  EXPECT_GT(e1 / e2, std::pow(2.0, 2.5));
  for (int m = 1; m <= 2; ++m) EXPECT_EQ(g.p(m).leading_part(), expansion_leading_form(lam, m));
}

// ---------------------------------------------------------------------------

namespace {

TwistFamily zeta_family(int n) {
  std::vector<SelbergDatum> m(static_cast<std::size_t>(n), zeta_datum());
  std::vector<rational> k(static_cast<std::size_t>(n), rational(1, n));
  return {m, k};
}

}  // namespace

TEST(WPoly, W0IsProductOfLeadingInvariants) {
  const MultiPoly w0 = w_ell_poly(zeta_family(2), 0);
  EXPECT_EQ(w0, MultiPoly::constant(w0.vars(), 1));
}

TEST(WPoly, DegreeAndLeadingForm) {
  for (int n : {2, 3}) {
    const TwistFamily F = zeta_family(n);
    for (int l = 0; l <= (n == 2 ? 3 : 2); ++l) {
      const MultiPoly W = w_ell_poly(F, l);
      EXPECT_EQ(W.degree(), 2 * l) << n << " " << l;
      EXPECT_EQ(W.leading_part(), w_leading_form(F, l)) << n << " " << l;
      EXPECT_EQ(restrict_to_hyperplane(W, F, l).degree(), 2 * l) << n << " " << l;
    }
  }
}

TEST(WPoly, UnequalKappa) {
  const TwistFamily F({zeta_datum(), zeta_datum()}, {rational(1, 3), rational(2, 3)});
  for (int l = 0; l <= 2; ++l) {
    const MultiPoly W = w_ell_poly(F, l);
    EXPECT_EQ(W.degree(), 2 * l);
    EXPECT_EQ(W.leading_part(), w_leading_form(F, l));
  }
}

TEST(WPoly, MissingStructuralInvariantsRejected) {
  const TwistFamily F = zeta_family(2);
  StructuralTable t = {{Scalar(1)}, {Scalar(1)}};
  EXPECT_THROW(w_ell_poly(F, 1, t), precondition_error);
}
