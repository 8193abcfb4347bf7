#pragma once

#include <vector>

namespace rteqr {

struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Legendre rule with n nodes on [lo, hi].
QuadRule gauss_legendre(int n, double lo, double hi);

}  // namespace rteqr
