#include "rteqr/forward.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "rteqr/errors.hpp"
#include "rteqr/parallel.hpp"

namespace rteqr {

namespace {

// Linear interpolation in x of one gridded row; exactly 0 outside [-R, R].
inline double interp_x(const double* row, size_t stride, const Grid2D& g,
                       double x) {
  double t = (x + g.domain.R) / g.hx;
  if (t < 0.0 || t > static_cast<double>(g.Mx)) return 0.0;
  int i0 = static_cast<int>(t);
  if (i0 >= g.Mx) return row[static_cast<size_t>(g.Mx) * stride];
  double f = t - i0;
  return (1.0 - f) * row[static_cast<size_t>(i0) * stride] +
         f * row[static_cast<size_t>(i0 + 1) * stride];
}

struct GriddedMedia {
  std::vector<double> sigma;  // mu_a + mu_s at nodes
  std::vector<double> mu_s;
  std::vector<double> f;
  bool has_scatter = false;
};

GriddedMedia sample_media(const MediaModel& m, const Grid2D& g) {
  GriddedMedia out;
  out.sigma.resize(static_cast<size_t>(g.nx()) * g.ny());
  out.mu_s.resize(out.sigma.size());
  out.f.resize(out.sigma.size());
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < g.ny(); ++j) {
      size_t id = static_cast<size_t>(i) * g.ny() + j;
      double ms = m.mu_s(g.xs[i], g.ys[j]);
      out.mu_s[id] = ms;
      out.sigma[id] = m.mu_a(g.xs[i], g.ys[j]) + ms;
      out.f[id] = m.f_true(g.xs[i], g.ys[j]);
      if (ms > 0.0) out.has_scatter = true;
    }
  }
  return out;
}

// Trapezoid along the ray towards (x_i, y_j) of a field given on the grid
// levels y_0..y_j; `value(l, zx)` evaluates the integrand at level l and
// x-position zx.
template <class F>
inline double ray_trapezoid(const Grid2D& g, int j, double xi, double alpha,
                            F&& value) {
  if (j == 0) return 0.0;
  double yj = g.ys[j];
  double slope = (xi - alpha) / yj;
  double s = 0.5 * (value(0, alpha + g.ys[0] * slope) +
                    value(j, alpha + yj * slope));
  for (int l = 1; l < j; ++l) s += value(l, alpha + g.ys[l] * slope);
  return s * g.hy;
}

}  // namespace

double ray_integral(const std::function<double(double, double)>& field,
                    const Domain& dom, double x, double y, double alpha,
                    int steps) {
  if (!(y > 0.0)) throw std::invalid_argument("ray_integral: requires y > 0");
  if (steps < 1) throw std::invalid_argument("ray_integral: steps >= 1");
  if (y <= dom.a) return 0.0;
  double rho = std::hypot(x - alpha, y) / y;
  double h = (y - dom.a) / steps;
  double slope = (x - alpha) / y;
  auto at = [&](double w) { return field(alpha + w * slope, w); };
  double s = 0.5 * (at(dom.a) + at(y));
  for (int l = 1; l < steps; ++l) s += at(dom.a + l * h);
  return rho * h * s;
}

RadianceField attenuation_weight(const MediaModel& media, const Grid2D& grid,
                                 const AngleGrid& angles) {
  GriddedMedia gm = sample_media(media, grid);
  RadianceField chi(grid.nx(), grid.ny(), angles.count());
  const int ny = grid.ny();
  parallel_for(grid.nx(), [&](int i) {
    double xi = grid.xs[i];
    for (int k = 0; k < angles.count(); ++k) {
      double alpha = angles.alphas[k];
      for (int j = 0; j < ny; ++j) {
        double yj = grid.ys[j];
        double rho = std::hypot(xi - alpha, yj) / yj;
        double integral = ray_trapezoid(
            grid, j, xi, alpha, [&](int l, double zx) {
              return interp_x(&gm.sigma[l], static_cast<size_t>(ny), grid, zx);
            });
        chi.at(i, j, k) = std::exp(rho * integral);
      }
    }
  });
  return chi;
}

ForwardResult solve_forward(const MediaModel& media, const Grid2D& grid,
                            const AngleGrid& angles, double tol,
                            int max_iter) {
  if (!(tol > 0.0)) throw ConfigError("forward: tol must be positive");
  const int nx = grid.nx(), ny = grid.ny(), na = angles.count();
  GriddedMedia gm = sample_media(media, grid);
  RadianceField chi = attenuation_weight(media, grid, angles);

  // Source term chi * f, fixed across iterations.
  RadianceField chif(nx, ny, na);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      double f = gm.f[static_cast<size_t>(i) * ny + j];
      for (int k = 0; k < na; ++k) chif.at(i, j, k) = chi.at(i, j, k) * f;
    }
  }

  auto apply = [&](const RadianceField& H, RadianceField& out) {
    parallel_for(nx, [&](int i) {
      double xi = grid.xs[i];
      for (int k = 0; k < na; ++k) {
        double alpha = angles.alphas[k];
        out.at(i, 0, k) = 0.0;
        for (int j = 1; j < ny; ++j) {
          double yj = grid.ys[j];
          double rho = std::hypot(xi - alpha, yj) / yj;
          double integral = ray_trapezoid(
              grid, j, xi, alpha, [&](int l, double zx) {
                return interp_x(&H.v[static_cast<size_t>(l) * na + k],
                                static_cast<size_t>(ny) * na, grid, zx);
              });
          out.at(i, j, k) = rho * integral / chi.at(i, j, k);
        }
      }
    });
  };

  auto tw = angles.trapezoid_weights();
  auto scatter_field = [&](const RadianceField& u, RadianceField& H) {
    parallel_for(nx, [&](int i) {
      double xi = grid.xs[i];
      for (int j = 0; j < ny; ++j) {
        double ms = gm.mu_s[static_cast<size_t>(i) * ny + j];
        if (ms == 0.0) {
          for (int k = 0; k < na; ++k) H.at(i, j, k) = chif.at(i, j, k);
          continue;
        }
        double yj = grid.ys[j];
        for (int k = 0; k < na; ++k) {
          double acc = 0.0;
          for (int l = 0; l < na; ++l) {
            acc += tw[l] *
                   media.kernel(xi, yj, angles.alphas[k], angles.alphas[l]) *
                   u.at(i, j, l);
          }
          H.at(i, j, k) = chi.at(i, j, k) * ms * acc + chif.at(i, j, k);
        }
      }
    });
  };

  ForwardResult res;
  res.u = RadianceField(nx, ny, na);
  apply(chif, res.u);  // pure-source initial iterate (exact for mu_s = 0)

  RadianceField H(nx, ny, na), next(nx, ny, na);
  for (int iter = 1; iter <= max_iter; ++iter) {
    if (gm.has_scatter) {
      scatter_field(res.u, H);
      apply(H, next);
    } else {
      next = res.u;  // fixed point is independent of u without scattering
    }
    double diff = 0.0;
    for (size_t s = 0; s < next.v.size(); ++s) {
      diff = std::max(diff, std::abs(next.v[s] - res.u.v[s]));
    }
    std::swap(res.u.v, next.v);
    res.iterations = iter;
    res.residual = diff;
    if (diff < tol) return res;
  }
  throw NumericalError("forward: Picard iteration did not converge within " +
                       std::to_string(max_iter) + " iterations");
}

BoundaryData boundary_trace(const RadianceField& field, const Grid2D& grid,
                            const AngleGrid& angles) {
  BoundaryData out(grid.nx(), grid.ny(), angles.count());
  double tol = 0.5 * std::min(grid.hx, grid.hy);
  for (int i = 0; i < grid.nx(); ++i) {
    for (int j = 0; j < grid.ny(); ++j) {
      if (!grid.on_boundary(i, j)) continue;
      for (int k = 0; k < angles.count(); ++k) {
        Flow f = classify_inflow(grid.domain, grid.xs[i], grid.ys[j],
                                 angles.alphas[k], tol);
        out.at(i, j, k) = f == Flow::inflow ? 0.0 : field.at(i, j, k);
      }
    }
  }
  return out;
}

BoundaryData apply_noise(const BoundaryData& data, const Grid2D& grid,
                         const AngleGrid& angles, double delta,
                         uint64_t seed) {
  if (delta < 0.0) throw ConfigError("noise: delta must be nonnegative");
  BoundaryData out = data;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < grid.nx(); ++i) {
    for (int j = 0; j < grid.ny(); ++j) {
      if (!grid.on_boundary(i, j)) continue;
      for (int k = 0; k < angles.count(); ++k) {
        double r = uni(rng);
        out.at(i, j, k) = data.at(i, j, k) * (1.0 + delta * (2.0 * r - 1.0));
      }
    }
  }
  return out;
}

}  // namespace rteqr
