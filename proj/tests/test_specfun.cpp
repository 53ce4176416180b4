#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mstwist/specfun.hpp"

using namespace mstwist;

namespace {

std::mt19937_64 rng(20240611);

cplx random_z(double lo, double hi, double im) {
  std::uniform_real_distribution<double> re(lo, hi), ii(-im, im);
  return {re(rng), ii(rng)};
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace

TEST(LogGamma, ClassicalValues) {
  EXPECT_NEAR(std::abs(log_gamma(1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(log_gamma(0.5) - std::log(std::sqrt(pi))), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(log_gamma(5.0) - std::log(24.0)), 0.0, 1e-14);
}

TEST(LogGamma, MatchesLgammaOnPositiveReals) {
  for (double x = 0.05; x < 900.0; x *= 1.37) EXPECT_LT(std::abs(log_gamma(x).real() - std::lgamma(x)), 1e-12 * std::max(1.0, std::abs(std::lgamma(x)))) << x;
}

TEST(LogGamma, MatchesTgammaOnNegativeReals) {
  for (double x : {-0.5, -1.25, -2.7, -5.5, -9.1}) EXPECT_LT(rel(gamma(cplx(x)), std::tgamma(x)), 1e-12) << x;
}

TEST(LogGamma, PolesAreSignalled) {
  EXPECT_THROW(log_gamma(0.0), pole_error);
  EXPECT_THROW(log_gamma(-3.0), pole_error);
  EXPECT_TRUE(is_pole_value(gamma_or_inf(-2.0)));
  EXPECT_FALSE(is_pole_value(gamma_or_inf(-2.5)));
}

TEST(LogGamma, RecurrenceProperty) {
  for (int k = 0; k < 100; ++k) {
    const cplx z = random_z(-20, 20, 30);
    EXPECT_LT(rel(gamma(z + 1.0), z * gamma(z)), 1e-12) << z;
  }
}

TEST(LogGamma, ReflectionProperty) {
  for (int k = 0; k < 100; ++k) {
    const cplx z = random_z(-5, 5, 5);
    const cplx lhs = std::exp(log_gamma(z) + log_gamma(1.0 - z));
    EXPECT_LT(rel(lhs, pi / std::sin(pi * z)), 1e-10) << z;
  }
}

TEST(LogGamma, StirlingDecayBound) {
  // |Gamma(x+iy)| <= C e^(-pi|y|/2) |y|^(x-1/2) with C < 10.
  for (double x : {-1.0, 0.0, 1.0, 2.0}) {
    double c = 0.0;
    for (double y = 1.0; y <= 100.0; y += 0.5)
      for (double sgn : {-1.0, 1.0}) {
        const double lhs = std::abs(gamma(cplx(x, sgn * y)));
        c = std::max(c, lhs / (std::exp(-pi * y / 2) * std::pow(y, x - 0.5)));
      }
    EXPECT_LT(c, 10.0) << x;
  }
}

TEST(Bernoulli, Values) {
  EXPECT_NEAR(bernoulli_poly(1, 0.0).real(), -0.5, 1e-15);
  EXPECT_NEAR(bernoulli_poly(2, 0.0).real(), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(std::abs(bernoulli_poly(3, 1.0)), 0.0, 1e-15);
  EXPECT_EQ(bernoulli_number(12), rational(-691, 2730));
  EXPECT_EQ(bernoulli_number(1), rational(-1, 2));
}

TEST(Bernoulli, DifferenceProperty) {
  // B_n(x+1) - B_n(x) = n x^(n-1)
  for (int n = 1; n <= 12; ++n) {
    const cplx x(0.3, -0.7);
    EXPECT_LT(std::abs(bernoulli_poly(n, x + 1.0) - bernoulli_poly(n, x) - static_cast<double>(n) * std::pow(x, n - 1)),
              1e-10 * std::pow(2.0, n));
  }
}

TEST(Bernoulli, RejectsBeyondTable) { EXPECT_THROW(bernoulli_number(kMaxBernoulli + 1), precondition_error); }

TEST(Pochhammer, Values) {
  EXPECT_EQ(pochhammer(cplx(3.7, 1.0), 0), cplx(1.0));
  EXPECT_NEAR(std::abs(pochhammer(2.0, 3) - 24.0), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(pochhammer(-1.0, 3)), 0.0, 1e-15);
}

TEST(Pochhammer, MatchesGammaRatio) {
  for (int k = 0; k < 50; ++k) {
    const cplx z = random_z(0.5, 10, 10);
    const int m = k % 7;
    EXPECT_LT(rel(pochhammer(z, m), std::exp(log_gamma(z + static_cast<double>(m)) - log_gamma(z))), 1e-10);
  }
}

TEST(Stirling, MatchesLogGamma) {
  const auto a = stirling_log_gamma(50.0, 0.0, 3);
  EXPECT_LT(std::abs(a.value - log_gamma(50.0)), 1e-9);
  EXPECT_LE(std::abs(a.value - log_gamma(50.0)), a.error_bound);
  const cplx z(30, 40);
  const auto b = stirling_log_gamma(z, 0.5, 4);
  EXPECT_LT(std::abs(b.value - log_gamma(z + 0.5)), 1e-9);
  EXPECT_LE(std::abs(b.value - log_gamma(z + 0.5)), b.error_bound);
}

TEST(Stirling, ErrorDecayRate) {
  for (int M = 1; M <= 4; ++M) {
    const cplx z(12.0, 5.0), s(0.3, 0.2);
    const double e1 = std::abs(stirling_log_gamma(z, s, M).value - log_gamma(z + s));
    const double e2 = std::abs(stirling_log_gamma(2.0 * z, s, M).value - log_gamma(2.0 * z + s));
    EXPECT_GE(e1 / e2, std::pow(2.0, M + 0.5)) << M;
  }
}

TEST(Stirling, SectorAndSizeRejected) {
  EXPECT_THROW(stirling_log_gamma(cplx(-10.0, 0.1), 0.0, 2), precondition_error);
  EXPECT_THROW(stirling_log_gamma(1.0, 0.0, 2), precondition_error);
  EXPECT_THROW(stirling_log_gamma(10.0, 0.0, 0), precondition_error);
}

TEST(MellinKernel, ClosedForms) {
  EXPECT_NEAR(std::abs(mellin_kernel_check(2.0, 1.0, 1.0) - 0.25), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(mellin_kernel_check(1.0, 1.0, 0.5) - 0.5), 0.0, 1e-8);
  const cplx xi(1.5, 1.0), eta(0.0, 0.3);
  EXPECT_LT(std::abs(mellin_kernel_check(xi, eta, 0.7) - gamma(xi) * std::pow(1.0 + eta, -xi)), 1e-7);
}

TEST(MellinKernel, ContourConstraint) {
  EXPECT_THROW(mellin_kernel_check(1.0, 1.0, 1.5), precondition_error);
  EXPECT_THROW(mellin_kernel_check(1.0, 1.0, -0.1), precondition_error);
  EXPECT_THROW(mellin_kernel_check(2.0, -1.0, 1.0), precondition_error);
}

TEST(Zeta, ClassicalValues) {
  EXPECT_NEAR(std::abs(riemann_zeta(2.0) - pi * pi / 6), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(riemann_zeta(0.0) + 0.5), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(riemann_zeta(-1.0) + 1.0 / 12), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(riemann_zeta(4.0) - std::pow(pi, 4) / 90), 0.0, 1e-13);
  // zeta(1/2 + 14.134725i) is (nearly) the first zero.
  EXPECT_LT(std::abs(riemann_zeta(cplx(0.5, 14.134725141734693))), 1e-9);
  EXPECT_THROW(riemann_zeta(1.0), pole_error);
}

TEST(Zeta, HurwitzAgainstDirectSum) {
  // zeta(s, a) for Re s > 1 against a brute-force sum with an integral tail.
  for (double a : {0.25, 0.5, 1.0, 2.75}) {
    const cplx s(3.0, 1.5);
    // Euler-Maclaurin tail with two correction terms; summed smallest first.
    const int n = 2000;
    const double x = n + a;
    cplx acc = std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s) + s / 12.0 * std::pow(x, -s - 1.0) -
               s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(x, -s - 3.0);
    for (int k = n - 1; k >= 0; --k) acc += std::pow(k + a, -s);
    EXPECT_LT(std::abs(hurwitz_zeta(s, a) - acc), 1e-11) << a;
  }
}

TEST(Zeta, RegularPartNearPole) {
  // zeta(s) - 1/(s-1) -> Euler's constant at s = 1.
  EXPECT_NEAR(std::abs(hurwitz_zeta_regular(1.0, 1.0) - 0.5772156649015329), 0.0, 1e-12);
}
