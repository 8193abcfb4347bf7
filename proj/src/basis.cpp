#include "rteqr/basis.hpp"

#include <cmath>
#include <stdexcept>

#include "rteqr/errors.hpp"

namespace rteqr {

BasisSet::BasisSet(int order, double half_interval, int quad_points)
    : N_(order), d_(half_interval) {
  if (N_ < 1) throw ConfigError("basis: order N >= 1 required");
  if (!(d_ > 0.0)) throw ConfigError("basis: half-interval d > 0 required");
  if (quad_points < 2 * N_ + 8) {
    throw ConfigError("basis: quadrature resolution too low for requested order");
  }
  quad_ = gauss_legendre(quad_points, -d_, d_);
  const int Q = quad_points;

  // Raw family sampled at the quadrature nodes. The monomial factor is
  // scaled by 1/d; Gram-Schmidt output is invariant under positive scaling
  // of each raw function, and the scaling keeps the family well conditioned.
  Eigen::MatrixXd raw(N_, Q);
  Eigen::MatrixXd raw_coeffs = Eigen::MatrixXd::Zero(N_, N_);
  for (int q = 0; q < Q; ++q) {
    double t = quad_.x[q] / d_;
    double e = std::exp(quad_.x[q]);
    double tn = 1.0;
    for (int n = 0; n < N_; ++n) {
      raw(n, q) = tn * e;
      tn *= t;
    }
  }
  for (int n = 0; n < N_; ++n) raw_coeffs(n, n) = 1.0;

  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(quad_.w.data(), Q);
  auto dot = [&](const Eigen::RowVectorXd& f, const Eigen::RowVectorXd& g) {
    return (f.array() * g.array() * w.transpose().array()).sum();
  };

  // Modified Gram-Schmidt with one full re-orthogonalization pass.
  coeffs_ = Eigen::MatrixXd::Zero(N_, N_);
  psi_.resize(N_, Q);
  for (int n = 0; n < N_; ++n) {
    Eigen::RowVectorXd v = raw.row(n);
    Eigen::RowVectorXd c = raw_coeffs.row(n);
    double norm0 = std::sqrt(dot(v, v));
    for (int pass = 0; pass < 2; ++pass) {
      for (int m = 0; m < n; ++m) {
        double r = dot(psi_.row(m), v);
        v -= r * psi_.row(m);
        c -= r * coeffs_.row(m);
      }
    }
    double norm = std::sqrt(dot(v, v));
    if (!(norm > 1e-13 * norm0)) {
      throw NumericalError("basis: raw family numerically singular at n=" +
                           std::to_string(n + 1));
    }
    psi_.row(n) = v / norm;
    coeffs_.row(n) = c / norm;
  }

  // Psi_n = p(t) e^{dt} with t = alpha/d, p of degree n. Then
  // Psi_n' = (p(t) + p'(t)/d) e^{dt}, again degree n in t.
  dcoeffs_ = coeffs_;
  for (int n = 0; n < N_; ++n) {
    for (int k = 0; k + 1 < N_; ++k) {
      dcoeffs_(n, k) += (k + 1) * coeffs_(n, k + 1) / d_;
    }
  }
  dpsi_.resize(N_, Q);
  for (int q = 0; q < Q; ++q) {
    for (int n = 0; n < N_; ++n) dpsi_(n, q) = eval_poly(n, quad_.x[q], true);
  }

  mn_.resize(N_, N_);
  for (int m = 0; m < N_; ++m) {
    for (int n = 0; n < N_; ++n) {
      mn_(m, n) =
          (dpsi_.row(n).array() * psi_.row(m).array() * w.transpose().array())
              .sum();
    }
  }
}

double BasisSet::eval_poly(int n, double alpha, bool deriv) const {
  const Eigen::MatrixXd& c = deriv ? dcoeffs_ : coeffs_;
  double t = alpha / d_;
  double p = 0.0;
  for (int k = N_ - 1; k >= 0; --k) p = p * t + c(n, k);
  return p * std::exp(alpha);
}

double BasisSet::eval(int n, double alpha) const {
  if (n < 0 || n >= N_) throw std::out_of_range("basis: index out of range");
  if (std::abs(alpha) > d_ * (1.0 + 1e-12)) {
    throw std::invalid_argument("basis: alpha outside [-d, d]");
  }
  return eval_poly(n, alpha, false);
}

double BasisSet::eval_deriv(int n, double alpha) const {
  if (n < 0 || n >= N_) throw std::out_of_range("basis: index out of range");
  if (std::abs(alpha) > d_ * (1.0 + 1e-12)) {
    throw std::invalid_argument("basis: alpha outside [-d, d]");
  }
  return eval_poly(n, alpha, true);
}

Eigen::MatrixXd BasisSet::eval_table(const std::vector<double>& alphas) const {
  Eigen::MatrixXd t(N_, alphas.size());
  for (size_t q = 0; q < alphas.size(); ++q) {
    for (int n = 0; n < N_; ++n) t(n, q) = eval(n, alphas[q]);
  }
  return t;
}

Eigen::MatrixXd BasisSet::eval_deriv_table(
    const std::vector<double>& alphas) const {
  Eigen::MatrixXd t(N_, alphas.size());
  for (size_t q = 0; q < alphas.size(); ++q) {
    for (int n = 0; n < N_; ++n) t(n, q) = eval_deriv(n, alphas[q]);
  }
  return t;
}

double project(const std::vector<double>& samples, const AngleGrid& grid,
               const BasisSet& basis, int n) {
  if (n < 0 || n >= basis.order()) {
    throw std::out_of_range("project: basis index out of range");
  }
  if (static_cast<int>(samples.size()) != grid.count()) {
    throw std::invalid_argument("project: samples do not match the angle grid");
  }
  auto w = grid.trapezoid_weights();
  double s = 0.0;
  for (int k = 0; k < grid.count(); ++k) {
    s += w[k] * samples[k] * basis.eval(n, grid.alphas[k]);
  }
  return s;
}

Eigen::VectorXd project_all(const std::vector<double>& samples,
                            const AngleGrid& grid, const BasisSet& basis) {
  Eigen::VectorXd out(basis.order());
  for (int n = 0; n < basis.order(); ++n) out[n] = project(samples, grid, basis, n);
  return out;
}

double synthesize(const Eigen::VectorXd& coeffs, const BasisSet& basis,
                  double alpha, bool deriv) {
  if (coeffs.size() != basis.order()) {
    throw std::invalid_argument("synthesize: coefficient count mismatch");
  }
  double s = 0.0;
  for (int n = 0; n < basis.order(); ++n) {
    s += coeffs[n] * (deriv ? basis.eval_deriv(n, alpha) : basis.eval(n, alpha));
  }
  return s;
}

}  // namespace rteqr
