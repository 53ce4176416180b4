#pragma once

// Least-squares extrapolation with known (complex) exponents:
//   F(X) ~ c + sum_e A_e X^e.
// Exponents closer than cluster_tol to an earlier one are fitted through the
// divided-difference basis X^a (X^(e-a) - 1)/(e-a), which stays well
// conditioned as e -> a and turns into X^a log X at coincidence.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "mstwist/errors.hpp"
#include "mstwist/scalar.hpp"
#include "mstwist/specfun.hpp"

namespace mstwist {

struct ExponentFit {
  cplx constant;
  std::vector<cplx> amplitudes;  // per requested exponent; not meaningful at exact coincidence
  double residual = 0.0;         // max |fit - data|
};

inline ExponentFit fit_exponents(const std::vector<double>& X, const std::vector<cplx>& F,
                                 const std::vector<cplx>& exponents, double cluster_tol = 0.2) {
  if (X.size() != F.size()) throw precondition_error("fit_exponents: X and F lengths differ");
  const std::size_t cols = exponents.size() + 1;
  if (X.size() < cols) throw precondition_error("fit_exponents: more unknowns than data points");

  struct Column {
    cplx exponent;
    int anchor = -1;  // column index of the anchor, -1 for a plain power
    cplx delta{};
  };
  std::vector<Column> col{{0.0, -1, 0.0}};
  for (const auto& e : exponents) {
    int anchor = -1;
    for (std::size_t j = 0; j < col.size(); ++j)
      if (col[j].anchor < 0 && std::abs(e - col[j].exponent) < cluster_tol) {
        anchor = static_cast<int>(j);
        break;
      }
    col.push_back(anchor < 0 ? Column{e, -1, 0.0} : Column{e, anchor, e - col[anchor].exponent});
  }

  const auto rows = static_cast<Eigen::Index>(X.size());
  Eigen::MatrixXcd A(rows, static_cast<Eigen::Index>(cols));
  Eigen::VectorXcd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double lx = std::log(X[i]);
    b(i) = F[i];
    for (std::size_t j = 0; j < cols; ++j) {
      const auto& c = col[j];
      if (c.anchor < 0) {
        A(i, j) = std::exp(c.exponent * lx);
      } else {
        const cplx base = std::exp(col[c.anchor].exponent * lx);
        A(i, j) = base * lx * detail::expm1_over_x(c.delta * lx);
      }
    }
  }
  Eigen::VectorXd scale(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    scale(j) = A.col(j).cwiseAbs().maxCoeff();
    if (scale(j) == 0.0) scale(j) = 1.0;
    A.col(j) /= scale(j);
  }
  const Eigen::VectorXcd beta = A.colPivHouseholderQr().solve(b);
  const Eigen::VectorXcd fitted = A * beta;

  ExponentFit out;
  out.residual = (fitted - b).cwiseAbs().maxCoeff();
  std::vector<cplx> amp(cols);
  for (std::size_t j = 0; j < cols; ++j) amp[j] = beta(j) / scale(j);
  std::vector<cplx> result = amp;
  for (std::size_t j = 0; j < cols; ++j) {
    if (col[j].anchor < 0) continue;
    if (col[j].delta == cplx{}) continue;  // log term: amplitude split undefined
    result[j] = amp[j] / col[j].delta;
    result[col[j].anchor] -= amp[j] / col[j].delta;
  }
  out.constant = result[0];
  out.amplitudes.assign(result.begin() + 1, result.end());
  return out;
}

/// Least-squares polynomial of degree <= deg in t, evaluated at t = 0.
inline cplx polynomial_limit(const std::vector<double>& t, const std::vector<cplx>& v, int deg) {
  if (t.size() != v.size() || t.empty()) throw precondition_error("polynomial_limit: bad input");
  deg = std::min<int>(deg, static_cast<int>(t.size()) - 1);
  const double tmax = *std::max_element(t.begin(), t.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  Eigen::MatrixXcd A(static_cast<Eigen::Index>(t.size()), deg + 1);
  Eigen::VectorXcd b(static_cast<Eigen::Index>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) {
    double p = 1.0;
    for (int k = 0; k <= deg; ++k) {
      A(static_cast<Eigen::Index>(i), k) = p;
      p *= t[i] / tmax;
    }
    b(static_cast<Eigen::Index>(i)) = v[i];
  }
  return A.colPivHouseholderQr().solve(b)(0);
}

}  // namespace mstwist
