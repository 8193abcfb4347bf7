#include "rteqr/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace rteqr {

QuadRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
  QuadRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  // Newton iteration on P_n, symmetric roots computed once per half.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - t * t) * dp * dp);
    rule.x[i] = -t;
    rule.x[n - 1 - i] = t;
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.x[n / 2] = 0.0;
  double mid = 0.5 * (lo + hi);
  double half = 0.5 * (hi - lo);
  for (int i = 0; i < n; ++i) {
    rule.x[i] = mid + half * rule.x[i];
    rule.w[i] *= half;
  }
  return rule;
}

}  // namespace rteqr
