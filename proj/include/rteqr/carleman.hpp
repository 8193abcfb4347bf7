#pragma once

#include <vector>

namespace rteqr {

// Discrete function on the uniform grid y_j = y0 + j * hy, j = 0..M.
struct DiscreteFunction1D {
  std::vector<double> values;
  double hy = 0.0;
  double y0 = 0.0;

  int segments() const { return static_cast<int>(values.size()) - 1; }
};

struct CarlemanCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // lhs - rhs
  double ratio = 0.0;  // lhs / rhs where meaningful, else 0
  bool holds = false;
};

// Summation-by-parts inequality
//   -2 h sum_{j=1}^{M-1} w_j w_j'  >=  -(w_M^2 - w_1^2),
// with slack exactly h^2 sum (w_j')^2.
CarlemanCheck check_lemma1(const DiscreteFunction1D& w);

// Weighted estimate for the forward difference with weight e^{2 lambda y}.
// Both sides are rescaled by e^{-2 lambda y_M}; the inequality is invariant
// under that common positive factor and stays finite for large lambda.
CarlemanCheck check_theorem1(const DiscreteFunction1D& u, double lambda);

// Simplified corollary with factor lambda^2 / 4; requires u_M = 0 and
// lambda * hy < 1 (rejected inputs throw std::invalid_argument).
CarlemanCheck check_lemma2(const DiscreteFunction1D& u, double lambda);

}  // namespace rteqr
