#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "rteqr/basis.hpp"
#include "rteqr/grid.hpp"
#include "rteqr/media.hpp"

namespace rteqr {

// Per-node N x N matrices of the coupled first-order system
//   (M_N - A) U_y - B U_x - C U = 0.
struct NodeMatrices {
  int N = 0, nx = 0, ny = 0;
  std::vector<Eigen::MatrixXd> A, B, C;
  Eigen::MatrixXd MN;

  size_t idx(int i, int j) const { return static_cast<size_t>(i) * ny + j; }
};

// Assembles A, B, C at every grid node by trapezoid over the angle grid.
// The kernel derivative in alpha uses the model's analytic form when
// present, otherwise a central finite difference.
NodeMatrices assemble(const BasisSet& basis, const MediaModel& media,
                      const Grid2D& grid, const AngleGrid& angles);

struct ConditioningReport {
  double min_singular_value = 0.0;  // min over nodes of sigma_min(M_N - A)
  int argmin_i = 0, argmin_j = 0;
  std::vector<std::pair<int, int>> flagged;  // sigma_min < 1e-8
  double max_norm_A = 0.0, max_norm_B = 0.0, max_norm_C = 0.0;  // Frobenius
  double max_norm_A1 = 0.0, max_norm_A2 = 0.0;  // inverted-system view
};

ConditioningReport check_conditioning(const NodeMatrices& nodes,
                                      const BasisSet& basis);

}  // namespace rteqr
