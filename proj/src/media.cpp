#include "rteqr/media.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

#include "rteqr/errors.hpp"

namespace rteqr {

double smooth_step(double signed_dist, double width) {
  if (width <= 0.0) return signed_dist < 0.0 ? 1.0 : 0.0;
  return 0.5 * (1.0 + std::tanh(-signed_dist / width));
}

double disk_signed_dist(double x, double y, double cx, double cy, double r) {
  return std::hypot(x - cx, y - cy) - r;
}

double bar_signed_dist(double x, double y, double cx, double cy,
                       double angle_deg, double half_len, double half_wid) {
  double th = angle_deg * M_PI / 180.0;
  double c = std::cos(th), s = std::sin(th);
  double dx = x - cx, dy = y - cy;
  double u = c * dx + s * dy;
  double v = -s * dx + c * dy;
  return std::max(std::abs(u) - half_len, std::abs(v) - half_wid);
}

double Shape::eval(double x, double y) const {
  double sd = kind == Kind::disk
                  ? disk_signed_dist(x, y, cx, cy, r)
                  : bar_signed_dist(x, y, cx, cy, angle_deg, half_len, half_wid);
  return value * smooth_step(sd, smooth_width);
}

bool Shape::inside(double x, double y) const {
  double sd = kind == Kind::disk
                  ? disk_signed_dist(x, y, cx, cy, r)
                  : bar_signed_dist(x, y, cx, cy, angle_deg, half_len, half_wid);
  return sd < 0.0;
}

ScalarField shape_field(std::vector<Shape> shapes) {
  return [shapes = std::move(shapes)](double x, double y) {
    double v = 0.0;
    for (const auto& s : shapes) v = std::max(v, s.eval(x, y));
    return v;
  };
}

ScalarField supported_in(const Domain& dom, ScalarField f) {
  return [dom, f = std::move(f)](double x, double y) {
    if (std::abs(x) > dom.R || y <= dom.a || y >= dom.b) return 0.0;
    return f(x, y);
  };
}

double HenyeyGreenstein::operator()(double x, double y, double alpha,
                                    double beta) const {
  double gg = g(x, y);
  double denom = 1.0 + gg * gg - 2.0 * gg * std::cos(alpha - beta);
  return (1.0 - gg * gg) / denom / (2.0 * d);
}

double HenyeyGreenstein::dalpha(double x, double y, double alpha,
                                double beta) const {
  double gg = g(x, y);
  double denom = 1.0 + gg * gg - 2.0 * gg * std::cos(alpha - beta);
  return -(1.0 - gg * gg) * 2.0 * gg * std::sin(alpha - beta) /
         (denom * denom) / (2.0 * d);
}

namespace {

// The absorption/scattering disk printed in the reference tests.
Shape coefficient_disk(double value) {
  Shape s;
  s.kind = Shape::Kind::disk;
  s.cx = 0.0;
  s.cy = 0.0;
  s.r = std::sqrt(0.8);
  s.value = value;
  s.smooth_width = 0.0;
  return s;
}

std::vector<Shape> x_inclusion() {
  Shape bar;
  bar.kind = Shape::Kind::bar;
  bar.cx = 0.0;
  bar.cy = 2.0;
  bar.half_len = 0.4;
  bar.half_wid = 0.08;
  bar.value = 1.0;
  bar.smooth_width = 0.0;
  Shape b1 = bar, b2 = bar;
  b1.angle_deg = 45.0;
  b2.angle_deg = -45.0;
  return {b1, b2};
}

std::vector<Shape> y_inclusion(double smooth_width) {
  // Three arms meeting at (0, 2): two up at +-30 degrees off vertical,
  // one straight down. Bars are centered half way along each arm.
  std::vector<Shape> out;
  const double len = 0.4, hw = 0.08;
  for (double ang : {60.0, 120.0, 270.0}) {
    double th = ang * M_PI / 180.0;
    Shape b;
    b.kind = Shape::Kind::bar;
    b.cx = 0.0 + 0.5 * len * std::cos(th);
    b.cy = 2.0 + 0.5 * len * std::sin(th);
    b.angle_deg = ang;
    b.half_len = 0.5 * len;
    b.half_wid = hw;
    b.value = 1.0;
    b.smooth_width = smooth_width;
    out.push_back(b);
  }
  return out;
}

}  // namespace

MediaModel preset(const std::string& test_id, const Domain& dom,
                  double smooth_width) {
  MediaModel m;
  m.d = dom.d;

  Shape f_circle;
  f_circle.kind = Shape::Kind::disk;
  f_circle.cx = 0.0;
  f_circle.cy = 2.0;
  f_circle.r = 0.3;
  f_circle.value = 1.0;
  f_circle.smooth_width = smooth_width;

  if (test_id == "test1") {
    m.f_true = supported_in(dom, shape_field({f_circle}));
    m.mu_a = supported_in(dom, shape_field({coefficient_disk(0.1)}));
    m.mu_s = supported_in(dom, [](double, double) { return 0.0; });
    double d = dom.d;
    m.kernel = [d](double, double, double, double) { return 1.0 / (2.0 * d); };
    m.kernel_is_constant = true;
  } else if (test_id == "test2") {
    m.f_true = supported_in(dom, shape_field(x_inclusion()));
    m.mu_a = supported_in(dom, shape_field({coefficient_disk(0.1)}));
    m.mu_s = supported_in(dom, shape_field({coefficient_disk(0.01)}));
    double d = dom.d;
    m.kernel = [d](double, double, double, double) { return 1.0 / (2.0 * d); };
    m.kernel_is_constant = true;
  } else if (test_id == "test3") {
    auto arms = y_inclusion(smooth_width);
    auto f = shape_field(arms);
    m.f_true = supported_in(dom, f);
    // mu_a: 0.15 on the nominal inclusion, 0.1 on the disk, 0 elsewhere.
    Shape disk = coefficient_disk(0.1);
    m.mu_a = supported_in(dom, [arms, disk](double x, double y) {
      for (const auto& s : arms) {
        if (s.inside(x, y)) return 0.15;
      }
      return disk.inside(x, y) ? 0.1 : 0.0;
    });
    m.mu_s = supported_in(dom, shape_field({coefficient_disk(0.01)}));
    // Henyey-Greenstein factor smoothed from 0.9 inside the disk to 0.5.
    double w = smooth_width;
    ScalarField g = [disk, w](double x, double y) {
      double sd = disk_signed_dist(x, y, disk.cx, disk.cy, disk.r);
      return 0.5 + 0.4 * smooth_step(sd, w);
    };
    auto hg = std::make_shared<HenyeyGreenstein>(HenyeyGreenstein{g, dom.d});
    m.kernel = [hg](double x, double y, double a, double b) {
      return (*hg)(x, y, a, b);
    };
    m.kernel_dalpha = [hg](double x, double y, double a, double b) {
      return hg->dalpha(x, y, a, b);
    };
  } else {
    throw ConfigError("media: unknown preset '" + test_id + "'");
  }
  return m;
}

MediaModel normalize_kernel(const MediaModel& media, const AngleGrid& grid) {
  MediaModel out = media;
  auto weights = std::make_shared<std::vector<double>>(grid.trapezoid_weights());
  auto alphas = std::make_shared<std::vector<double>>(grid.alphas);
  Kernel base = media.kernel;
  ScalarField mu_s = media.mu_s;

  auto scale_at = [weights, alphas, base, mu_s](double x, double y) {
    double total = 0.0;
    const auto& w = *weights;
    const auto& a = *alphas;
    for (size_t i = 0; i < a.size(); ++i) {
      for (size_t j = 0; j < a.size(); ++j) {
        total += w[i] * w[j] * base(x, y, a[i], a[j]);
      }
    }
    if (!(total > 0.0)) {
      if (mu_s(x, y) > 0.0) {
        throw NumericalError("normalize_kernel: zero kernel where mu_s > 0");
      }
      return 0.0;
    }
    return 1.0 / total;
  };

  out.kernel = [base, scale_at](double x, double y, double a, double b) {
    return base(x, y, a, b) * scale_at(x, y);
  };
  if (media.kernel_dalpha) {
    Kernel dbase = media.kernel_dalpha;
    out.kernel_dalpha = [dbase, scale_at](double x, double y, double a,
                                          double b) {
      return dbase(x, y, a, b) * scale_at(x, y);
    };
  }
  return out;
}

}  // namespace rteqr
