#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rteqr/grid.hpp"
#include "rteqr/media.hpp"

namespace rteqr {

// Radiance samples u(x_i, y_j, alpha_k) on the closed grid.
struct RadianceField {
  int nx = 0, ny = 0, na = 0;
  std::vector<double> v;

  RadianceField() = default;
  RadianceField(int nx_, int ny_, int na_)
      : nx(nx_), ny(ny_), na(na_),
        v(static_cast<size_t>(nx_) * ny_ * na_, 0.0) {}

  double& at(int i, int j, int k) {
    return v[(static_cast<size_t>(i) * ny + j) * na + k];
  }
  double at(int i, int j, int k) const {
    return v[(static_cast<size_t>(i) * ny + j) * na + k];
  }
};

// Boundary trace; stored on the full grid with interior slots at zero.
struct BoundaryData {
  int nx = 0, ny = 0, na = 0;
  std::vector<double> v;

  BoundaryData() = default;
  BoundaryData(int nx_, int ny_, int na_)
      : nx(nx_), ny(ny_), na(na_),
        v(static_cast<size_t>(nx_) * ny_ * na_, 0.0) {}

  double& at(int i, int j, int k) {
    return v[(static_cast<size_t>(i) * ny + j) * na + k];
  }
  double at(int i, int j, int k) const {
    return v[(static_cast<size_t>(i) * ny + j) * na + k];
  }
};

// Arc-length integral of `field` along the segment from (alpha, 0) to
// (x, y), restricted to w in [a, y] where all fields are supported.
// Composite trapezoid with `steps` subintervals.
double ray_integral(const std::function<double(double, double)>& field,
                    const Domain& dom, double x, double y, double alpha,
                    int steps);

// Attenuation weight chi(x_i, y_j, alpha_k); chi >= 1 for nonnegative
// coefficients.
RadianceField attenuation_weight(const MediaModel& media, const Grid2D& grid,
                                 const AngleGrid& angles);

struct ForwardResult {
  RadianceField u;
  int iterations = 0;
  double residual = 0.0;  // final sup-norm Picard difference
};

// Picard iteration on the Volterra-type integral form of the transport
// boundary value problem. Throws NumericalError when max_iter is exceeded.
ForwardResult solve_forward(const MediaModel& media, const Grid2D& grid,
                            const AngleGrid& angles, double tol = 1e-10,
                            int max_iter = 100);

// Restriction of the radiance to the boundary nodes; inflow slots are
// exactly zero.
BoundaryData boundary_trace(const RadianceField& field, const Grid2D& grid,
                            const AngleGrid& angles);

// Multiplicative uniform noise value * (1 + delta * (2r - 1)) on non-inflow
// boundary values; inflow values stay zero. Deterministic for a fixed seed.
BoundaryData apply_noise(const BoundaryData& data, const Grid2D& grid,
                         const AngleGrid& angles, double delta, uint64_t seed);

}  // namespace rteqr
