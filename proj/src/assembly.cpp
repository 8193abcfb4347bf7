#include "rteqr/assembly.hpp"

#include <cmath>
#include <limits>

#include "rteqr/parallel.hpp"

namespace rteqr {

NodeMatrices assemble(const BasisSet& basis, const MediaModel& media,
                      const Grid2D& grid, const AngleGrid& angles) {
  const int N = basis.order();
  const int na = angles.count();
  NodeMatrices out;
  out.N = N;
  out.nx = grid.nx();
  out.ny = grid.ny();
  out.MN = basis.coupling();
  size_t total = static_cast<size_t>(out.nx) * out.ny;
  out.A.resize(total);
  out.B.resize(total);
  out.C.resize(total);

  Eigen::MatrixXd psiA = basis.eval_table(angles.alphas);    // N x na
  Eigen::MatrixXd dpsiA = basis.eval_deriv_table(angles.alphas);
  auto tw = angles.trapezoid_weights();
  // Psi_m weighted by the trapezoid rule; every entry is a row of
  // weighted-psi times an integrand-scaled column table.
  Eigen::MatrixXd psiW = psiA;
  for (int k = 0; k < na; ++k) psiW.col(k) *= tw[k];

  bool need_kernel_term =
      !media.kernel_is_constant || static_cast<bool>(media.kernel_dalpha);
  double fd_step = 0.5 * angles.spacing();

  parallel_for(out.nx, [&](int i) {
    double x = grid.xs[i];
    Eigen::VectorXd qa(na), qb1(na), qb2(na), rr(na);
    Eigen::MatrixXd scaled(N, na), kint(N, na);
    for (int j = 0; j < out.ny; ++j) {
      double y = grid.ys[j];
      for (int k = 0; k < na; ++k) {
        double dx = x - angles.alphas[k];
        double r2 = dx * dx + y * y;
        qa[k] = dx / r2;
        qb1[k] = dx / y;
        qb2[k] = y / r2;
        rr[k] = std::sqrt(r2) / y;
      }
      size_t id = out.idx(i, j);

      // The system M_N U_y = A U_y + B U_x + C U collects the projections of
      //   u_{y,alpha} + (x-alpha)/y u_{x,alpha} - y/r^2 u_x + (x-alpha)/r^2 u_y
      //   + r/y [ sigma u_alpha - mu_s int K_alpha u dbeta ] = 0,
      // the alpha-derivative of the transport equation scaled by r/y.

      // A_{mn} = -int (x-alpha)/r^2 Psi_n Psi_m
      scaled = psiA.array().rowwise() * qa.transpose().array();
      out.A[id] = -(psiW * scaled.transpose());

      // B_{mn} = int [ y/r^2 Psi_n - (x-alpha)/y Psi_n' ] Psi_m
      scaled = psiA.array().rowwise() * qb2.transpose().array();
      scaled.array() -= dpsiA.array().rowwise() * qb1.transpose().array();
      out.B[id] = psiW * scaled.transpose();

      // C_{mn} = -int r/y [ (mu_a+mu_s) Psi_n' - mu_s int K_alpha Psi_n dbeta ] Psi_m
      double mus = media.mu_s(x, y);
      double sigma = media.mu_a(x, y) + mus;
      if (sigma == 0.0 && mus == 0.0) {
        out.C[id] = Eigen::MatrixXd::Zero(N, N);
        continue;
      }
      scaled = sigma * (dpsiA.array().rowwise() * rr.transpose().array());
      if (mus != 0.0 && need_kernel_term) {
        for (int k = 0; k < na; ++k) {
          double ak = angles.alphas[k];
          for (int n = 0; n < N; ++n) kint(n, k) = 0.0;
          for (int l = 0; l < na; ++l) {
            double bl = angles.alphas[l];
            double kd;
            if (media.kernel_dalpha) {
              kd = media.kernel_dalpha(x, y, ak, bl);
            } else {
              kd = (media.kernel(x, y, ak + fd_step, bl) -
                    media.kernel(x, y, ak - fd_step, bl)) /
                   (2.0 * fd_step);
            }
            double wkd = tw[l] * kd;
            for (int n = 0; n < N; ++n) kint(n, k) += wkd * psiA(n, l);
          }
        }
        scaled.array() -= mus * (kint.array().rowwise() * rr.transpose().array());
      }
      out.C[id] = -(psiW * scaled.transpose());
    }
  });
  return out;
}

ConditioningReport check_conditioning(const NodeMatrices& nodes,
                                      const BasisSet& basis) {
  ConditioningReport rep;
  rep.min_singular_value = std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd& MN = nodes.MN;
  for (int i = 0; i < nodes.nx; ++i) {
    for (int j = 0; j < nodes.ny; ++j) {
      size_t id = nodes.idx(i, j);
      Eigen::MatrixXd tilde = MN - nodes.A[id];
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(tilde, Eigen::ComputeThinU |
                                                       Eigen::ComputeThinV);
      double smin = svd.singularValues().tail(1)(0);
      if (smin < rep.min_singular_value) {
        rep.min_singular_value = smin;
        rep.argmin_i = i;
        rep.argmin_j = j;
      }
      if (smin < 1e-8) rep.flagged.emplace_back(i, j);
      rep.max_norm_A = std::max(rep.max_norm_A, nodes.A[id].norm());
      rep.max_norm_B = std::max(rep.max_norm_B, nodes.B[id].norm());
      rep.max_norm_C = std::max(rep.max_norm_C, nodes.C[id].norm());
      if (smin >= 1e-8) {
        Eigen::MatrixXd inv = tilde.inverse();
        rep.max_norm_A1 = std::max(rep.max_norm_A1, (inv * nodes.B[id]).norm());
        rep.max_norm_A2 = std::max(rep.max_norm_A2, (inv * nodes.C[id]).norm());
      }
    }
  }
  (void)basis;
  return rep;
}

}  // namespace rteqr
