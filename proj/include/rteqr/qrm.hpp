#pragma once

#include <Eigen/Sparse>
#include <array>
#include <vector>

#include "rteqr/assembly.hpp"
#include "rteqr/basis.hpp"
#include "rteqr/forward.hpp"
#include "rteqr/grid.hpp"

namespace rteqr {

// Flat index of the lined-up unknown vector; 1-based like the defining
// formula m-flat = (i-1)(Mx+1)N + (j-1)N + m with 1 <= i,j <= Mx+1.
int line_up(int i, int j, int m, int Mx, int N);
// Inverse map, returns {i, j, m} (1-based).
std::array<int, 3> line_down(int flat, int Mx, int N);

// Fourier coefficient grids u_m(x_i, y_j); 0-based indices in code.
struct FourierField {
  int nx = 0, ny = 0, N = 0;
  std::vector<double> v;

  FourierField() = default;
  FourierField(int nx_, int ny_, int n)
      : nx(nx_), ny(ny_), N(n), v(static_cast<size_t>(nx_) * ny_ * n, 0.0) {}

  double& at(int i, int j, int m) {
    return v[(static_cast<size_t>(i) * ny + j) * N + m];
  }
  double at(int i, int j, int m) const {
    return v[(static_cast<size_t>(i) * ny + j) * N + m];
  }
};

struct LinedSystem {
  int Mx = 0, N = 0;
  int dim = 0;  // (Mx+1)^2 N
  double hx = 0.0, hy = 0.0;
  Eigen::SparseMatrix<double> L, Dx, Dy;
  Eigen::VectorXd F;                // lined-up data; interior slots zero
  std::vector<char> boundary;      // diagonal of the constraint mask D
  double eps1 = 0.1, eps2 = 0.01;
};

// Encodes the forward-difference residual rows of the discrete functional
// at interior nodes; boundary-owned rows of L are zero. Requires a square
// grid (Mx == My), which the lined index map assumes.
LinedSystem build_operator(const NodeMatrices& nodes, const Grid2D& grid,
                           double eps1, double eps2);

// Fills the data vector with trapezoidal projections of the boundary trace
// onto the basis, and marks the constrained slots.
void apply_boundary(LinedSystem& system, const BoundaryData& data,
                    const BasisSet& basis, const AngleGrid& angles);

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;  // relative residual of the reduced normal equations
  std::vector<double> history;
};

// Minimizes |L u|^2 + eps1 |u|^2 + eps2 (|Dx u|^2 + |Dy u|^2) subject to
// the Dirichlet slots, by elimination and Jacobi-preconditioned conjugate
// gradients on the reduced SPD system. max_iter <= 0 selects
// 20 * sqrt(dim). Throws NumericalError on non-convergence or loss of
// positive definiteness.
FourierField solve(const LinedSystem& system, double tol, int max_iter,
                   SolveStats* stats = nullptr,
                   const Eigen::VectorXd* initial_guess = nullptr);

// Value of the discrete functional (without the common h^2 factor) at a
// full lined-up vector; used for diagnostics and minimality checks.
double functional_value(const LinedSystem& system, const Eigen::VectorXd& u);

// Conversions between the lined vector and the coefficient grids.
Eigen::VectorXd lined_vector(const FourierField& f);
FourierField field_from_vector(const Eigen::VectorXd& u, int Mx, int N);

}  // namespace rteqr
