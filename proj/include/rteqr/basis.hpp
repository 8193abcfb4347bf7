#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rteqr/grid.hpp"
#include "rteqr/quadrature.hpp"

namespace rteqr {

// Orthonormal basis of L2(-d, d) obtained by Gram-Schmidt from the family
// {alpha^(n-1) e^alpha}. Each Psi_n is a polynomial of degree n-1 times
// e^alpha, so derivatives are exact in the same family.
//
// Indices are 0-based in code: row n holds Psi_{n+1} of the usual 1-based
// numbering.
class BasisSet {
 public:
  BasisSet(int order, double half_interval, int quad_points);

  int order() const { return N_; }
  double half_interval() const { return d_; }
  const QuadRule& quadrature() const { return quad_; }

  // N x Q tables of Psi_n and Psi_n' at the quadrature nodes.
  const Eigen::MatrixXd& psi() const { return psi_; }
  const Eigen::MatrixXd& dpsi() const { return dpsi_; }

  // M_N with entries (m, n) = integral of Psi_n' Psi_m. Unit upper
  // triangular by construction of the basis.
  const Eigen::MatrixXd& coupling() const { return mn_; }

  // Pointwise evaluation; alpha must lie in [-d, d].
  double eval(int n, double alpha) const;
  double eval_deriv(int n, double alpha) const;

  // Tables at arbitrary abscissas (rows: basis index, cols: abscissa).
  Eigen::MatrixXd eval_table(const std::vector<double>& alphas) const;
  Eigen::MatrixXd eval_deriv_table(const std::vector<double>& alphas) const;

 private:
  double eval_poly(int n, double alpha, bool deriv) const;

  int N_;
  double d_;
  QuadRule quad_;
  Eigen::MatrixXd coeffs_;   // row n: polynomial coefficients in (alpha/d)^k
  Eigen::MatrixXd dcoeffs_;  // row n: coefficients of the derivative
  Eigen::MatrixXd psi_, dpsi_, mn_;
};

// Trapezoidal projection of angle-grid samples onto Psi_n (0-based n).
double project(const std::vector<double>& samples, const AngleGrid& grid,
               const BasisSet& basis, int n);

// All N projections at once.
Eigen::VectorXd project_all(const std::vector<double>& samples,
                            const AngleGrid& grid, const BasisSet& basis);

// Sum of coeffs[n] * Psi_n(alpha); with deriv=true uses Psi_n'.
double synthesize(const Eigen::VectorXd& coeffs, const BasisSet& basis,
                  double alpha, bool deriv = false);

}  // namespace rteqr
