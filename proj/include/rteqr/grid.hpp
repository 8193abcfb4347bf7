#pragma once

#include <vector>

namespace rteqr {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Rectangle (-R, R) x (a, b) with the external source segment
// {(alpha, 0) : |alpha| <= d} below it.
struct Domain {
  double R = 1.0;
  double a = 1.0;
  double b = 3.0;
  double d = 5.0;

  // Throws ConfigError when the geometric constraints are violated.
  // The theory wants a > 1 strictly; a == 1 is accepted because the
  // reference experiments run exactly there.
  void validate() const;

  bool contains(double x, double y) const {
    return x > -R && x < R && y > a && y < b;
  }
};

// Uniform grid on the closed rectangle. Node coordinates are stored
// explicitly so every module indexes bit-identical positions.
struct Grid2D {
  Domain domain;
  int Mx = 0;  // x subintervals, nodes 0..Mx
  int My = 0;  // y subintervals, nodes 0..My
  double hx = 0.0;
  double hy = 0.0;
  std::vector<double> xs;  // xs[i] = -R + i*hx
  std::vector<double> ys;  // ys[j] = a + j*hy

  static Grid2D make(const Domain& dom, int mx, int my);

  int nx() const { return Mx + 1; }
  int ny() const { return My + 1; }
  bool on_boundary(int i, int j) const {
    return i == 0 || j == 0 || i == Mx || j == My;
  }
};

// Uniform grid of source abscissas on [-d, d].
struct AngleGrid {
  int Ma = 0;  // subintervals, nodes 0..Ma
  double d = 0.0;
  std::vector<double> alphas;

  static AngleGrid make(double d, int ma);

  int count() const { return Ma + 1; }
  double spacing() const { return 2.0 * d / Ma; }
  // Composite trapezoid weights on [-d, d].
  std::vector<double> trapezoid_weights() const;
};

// Unit vector from the source point (alpha, 0) towards (x, y).
// Requires y > 0.
Vec2 direction_vector(double x, double y, double alpha);

enum class Flow { inflow, outflow };

// Classifies a boundary point of the rectangle for the source abscissa
// alpha. A point belongs to an edge when it lies within `tol` of it.
// Corners are inflow only when the test nu . n <= 0 passes for both
// adjacent edge normals. Throws std::invalid_argument for points that are
// not on the boundary.
Flow classify_inflow(const Domain& dom, double x, double y, double alpha,
                     double tol = 1e-9);

}  // namespace rteqr
