#include "rteqr/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "rteqr/errors.hpp"

namespace rteqr {

void Domain::validate() const {
  if (!(R > 0.0)) throw ConfigError("domain: R must be positive");
  if (!(a >= 1.0)) throw ConfigError("domain: constraint 1 < a violated (a < 1)");
  if (!(a < b)) throw ConfigError("domain: constraint a < b violated");
  if (!(d >= R)) throw ConfigError("domain: constraint d >= R violated");
}

Grid2D Grid2D::make(const Domain& dom, int mx, int my) {
  dom.validate();
  if (mx < 2 || my < 2) throw ConfigError("grid: need at least 2 subintervals per axis");
  Grid2D g;
  g.domain = dom;
  g.Mx = mx;
  g.My = my;
  g.hx = 2.0 * dom.R / mx;
  g.hy = (dom.b - dom.a) / my;
  g.xs.resize(mx + 1);
  g.ys.resize(my + 1);
  for (int i = 0; i <= mx; ++i) g.xs[i] = -dom.R + i * g.hx;
  for (int j = 0; j <= my; ++j) g.ys[j] = dom.a + j * g.hy;
  g.xs[mx] = dom.R;
  g.ys[my] = dom.b;
  return g;
}

AngleGrid AngleGrid::make(double d, int ma) {
  if (!(d > 0.0)) throw ConfigError("angle grid: d must be positive");
  if (ma < 2) throw ConfigError("angle grid: need at least 2 subintervals");
  AngleGrid g;
  g.Ma = ma;
  g.d = d;
  g.alphas.resize(ma + 1);
  double h = 2.0 * d / ma;
  for (int k = 0; k <= ma; ++k) g.alphas[k] = -d + k * h;
  g.alphas[ma] = d;
  return g;
}

std::vector<double> AngleGrid::trapezoid_weights() const {
  std::vector<double> w(Ma + 1, spacing());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

Vec2 direction_vector(double x, double y, double alpha) {
  if (!(y > 0.0)) {
    throw std::invalid_argument("direction_vector: requires y > 0");
  }
  double dx = x - alpha;
  double r = std::hypot(dx, y);
  return Vec2{dx / r, y / r};
}

Flow classify_inflow(const Domain& dom, double x, double y, double alpha,
                     double tol) {
  bool in_x = x >= -dom.R - tol && x <= dom.R + tol;
  bool in_y = y >= dom.a - tol && y <= dom.b + tol;
  bool left = in_y && std::abs(x + dom.R) <= tol;
  bool right = in_y && std::abs(x - dom.R) <= tol;
  bool bottom = in_x && std::abs(y - dom.a) <= tol;
  bool top = in_x && std::abs(y - dom.b) <= tol;
  if (!(left || right || bottom || top)) {
    throw std::invalid_argument("classify_inflow: point is not on the boundary");
  }
  Vec2 nu = direction_vector(x, y, alpha);
  bool inflow = true;
  if (left) inflow = inflow && (-nu.x <= 0.0);
  if (right) inflow = inflow && (nu.x <= 0.0);
  if (bottom) inflow = inflow && (-nu.y <= 0.0);
  if (top) inflow = inflow && (nu.y <= 0.0);
  return inflow ? Flow::inflow : Flow::outflow;
}

}  // namespace rteqr
