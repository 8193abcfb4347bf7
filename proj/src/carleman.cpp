#include "rteqr/carleman.hpp"

#include <cmath>
#include <stdexcept>

namespace rteqr {

namespace {

void require_grid(const DiscreteFunction1D& f) {
  if (f.segments() < 2) {
    throw std::invalid_argument("carleman: grid needs M >= 2");
  }
  if (!(f.hy > 0.0)) throw std::invalid_argument("carleman: hy > 0 required");
}

double scale_of(double a, double b) {
  return std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

CarlemanCheck check_lemma1(const DiscreteFunction1D& w) {
  require_grid(w);
  const int M = w.segments();
  const double h = w.hy;
  double lhs = 0.0, slack = 0.0;
  for (int j = 1; j <= M - 1; ++j) {
    double dj = (w.values[j + 1] - w.values[j]) / h;
    lhs += w.values[j] * dj;
    slack += dj * dj;
  }
  CarlemanCheck out;
  out.lhs = -2.0 * h * lhs;
  out.rhs = -(w.values[M] * w.values[M] - w.values[1] * w.values[1]);
  out.slack = h * h * slack;
  out.holds = out.lhs >= out.rhs - 1e-12 * scale_of(out.lhs, out.rhs);
  out.ratio = out.rhs != 0.0 ? out.lhs / out.rhs : 0.0;
  return out;
}

CarlemanCheck check_theorem1(const DiscreteFunction1D& u, double lambda) {
  require_grid(u);
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("carleman: lambda > 0 required");
  }
  const int M = u.segments();
  const double h = u.hy;
  const double yM = u.y0 + M * h;
  // weight e^{2 lambda (y_j - y_M)} <= 1; common rescaling by e^{-2 lambda y_M}
  auto wgt = [&](int j) { return std::exp(2.0 * lambda * (u.y0 + j * h - yM)); };
  double lhs = 0.0, mass = 0.0;
  for (int j = 1; j <= M - 1; ++j) {
    double dj = (u.values[j + 1] - u.values[j]) / h;
    lhs += wgt(j) * dj * dj;
    mass += wgt(j) * u.values[j] * u.values[j];
  }
  double q = (1.0 - std::exp(-lambda * h)) / h;
  // The boundary term carries factor 1: the summation-by-parts step
  //   -2 h sum w_j w_j' >= w_1^2 - w_M^2
  // already absorbs the 2 from the cross term, so the tight bound is
  //   e^{-lambda h} q (w_1^2 - w_M^2);
  // doubling it makes the inequality fail on boundary-dominated data.
  double boundary = std::exp(-lambda * h) * q *
                    (wgt(1) * u.values[1] * u.values[1] -
                     wgt(M) * u.values[M] * u.values[M]);
  CarlemanCheck out;
  out.lhs = h * lhs;
  out.rhs = h * q * q * mass + boundary;
  out.slack = out.lhs - out.rhs;
  out.holds = out.lhs >= out.rhs - 1e-12 * scale_of(out.lhs, out.rhs);
  out.ratio = out.rhs != 0.0 ? out.lhs / out.rhs : 0.0;
  return out;
}

CarlemanCheck check_lemma2(const DiscreteFunction1D& u, double lambda) {
  require_grid(u);
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("carleman: lambda > 0 required");
  }
  if (u.values.back() != 0.0) {
    throw std::invalid_argument("carleman: lemma 2 requires u_M = 0");
  }
  if (!(lambda * u.hy < 1.0)) {
    throw std::invalid_argument("carleman: lemma 2 requires lambda * hy < 1");
  }
  const int M = u.segments();
  const double h = u.hy;
  const double yM = u.y0 + M * h;
  auto wgt = [&](int j) { return std::exp(2.0 * lambda * (u.y0 + j * h - yM)); };
  double lhs = 0.0, mass = 0.0;
  for (int j = 1; j <= M - 1; ++j) {
    double dj = (u.values[j + 1] - u.values[j]) / h;
    lhs += wgt(j) * dj * dj;
    mass += wgt(j) * u.values[j] * u.values[j];
  }
  CarlemanCheck out;
  out.lhs = h * lhs;
  out.rhs = 0.25 * lambda * lambda * h * mass;
  out.slack = out.lhs - out.rhs;
  out.holds = out.lhs >= out.rhs - 1e-12 * scale_of(out.lhs, out.rhs);
  out.ratio = out.rhs != 0.0 ? out.lhs / out.rhs : 0.0;
  return out;
}

}  // namespace rteqr
