#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rteqr/grid.hpp"

namespace rteqr {

using ScalarField = std::function<double(double, double)>;
// Kernel arguments: (x, y, alpha, beta).
using Kernel = std::function<double(double, double, double, double)>;

// C1 mollified step: 1 inside (signed_dist < 0), 0 outside, transition of
// width `width`. width <= 0 gives the sharp indicator.
double smooth_step(double signed_dist, double width);

// Signed distance-like functions for the inclusion shapes (negative inside).
double disk_signed_dist(double x, double y, double cx, double cy, double r);
double bar_signed_dist(double x, double y, double cx, double cy,
                       double angle_deg, double half_len, double half_wid);

// Piecewise shape used by presets and config-defined media.
struct Shape {
  enum class Kind { disk, bar };
  Kind kind = Kind::disk;
  double cx = 0.0, cy = 0.0;
  double r = 0.0;                       // disk radius
  double angle_deg = 0.0;               // bar orientation
  double half_len = 0.0, half_wid = 0.0;  // bar extents
  double value = 1.0;
  double smooth_width = 0.0;  // 0 = sharp

  double eval(double x, double y) const;
  bool inside(double x, double y) const;  // nominal (unsmoothed) region
};

// Max over shapes; 0 where no shape covers the point.
ScalarField shape_field(std::vector<Shape> shapes);

// Wraps a field so it is exactly 0 for |x| > R or y outside (a, b).
ScalarField supported_in(const Domain& dom, ScalarField f);

struct HenyeyGreenstein {
  ScalarField g;  // anisotropy factor in [0, 1)
  double d = 5.0;

  double operator()(double x, double y, double alpha, double beta) const;
  // Analytic derivative in alpha.
  double dalpha(double x, double y, double alpha, double beta) const;
};

struct MediaModel {
  ScalarField mu_a;
  ScalarField mu_s;
  ScalarField f_true;
  Kernel kernel;
  Kernel kernel_dalpha;  // empty -> central finite difference in alpha
  bool kernel_is_constant = false;
  double d = 5.0;
};

// The three reference configurations. smooth_width controls the mollifier
// transition of the "smoothed" shapes (typically 2 * hx).
MediaModel preset(const std::string& test_id, const Domain& dom,
                  double smooth_width);

// Rescales the kernel per spatial point so its trapezoidal double integral
// over [-d, d]^2 equals 1. Idempotent. Throws NumericalError when the
// integral vanishes at a point with mu_s > 0.
MediaModel normalize_kernel(const MediaModel& media, const AngleGrid& grid);

}  // namespace rteqr
