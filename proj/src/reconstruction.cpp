#include "rteqr/reconstruction.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rteqr/parallel.hpp"

namespace rteqr {

SourceEstimate recover_source(const FourierField& U, const BasisSet& basis,
                              const MediaModel& media, const Grid2D& grid,
                              const AngleGrid& angles) {
  const int nx = grid.nx();
  const int ny = grid.ny();
  const int N = U.N;
  if (U.nx != nx || U.ny != ny) {
    throw std::invalid_argument("recover_source: field does not match the grid");
  }
  const int na = angles.count();
  Eigen::MatrixXd psiA = basis.eval_table(angles.alphas);  // N x na
  auto tw = angles.trapezoid_weights();
  double twsum = 0.0;
  for (double w : tw) twsum += w;

  // u_comp(i, j, k) = sum_m U_m(i, j) Psi_m(alpha_k)
  std::vector<double> u(static_cast<size_t>(nx) * ny * na);
  auto uat = [&](int i, int j, int k) -> double& {
    return u[(static_cast<size_t>(i) * ny + j) * na + k];
  };
  parallel_for(nx, [&](int i) {
    for (int j = 0; j < ny; ++j) {
      for (int k = 0; k < na; ++k) {
        double s = 0.0;
        for (int m = 0; m < N; ++m) s += U.at(i, j, m) * psiA(m, k);
        uat(i, j, k) = s;
      }
    }
  });

  SourceEstimate out;
  out.nx = nx;
  out.ny = ny;
  out.f_comp.assign(static_cast<size_t>(nx) * ny, 0.0);

  parallel_for(nx, [&](int i) {
    double x = grid.xs[i];
    std::vector<double> scatter(na);
    for (int j = 0; j < ny; ++j) {
      double y = grid.ys[j];
      double mus = media.mu_s(x, y);
      double sigma = media.mu_a(x, y) + mus;
      if (mus != 0.0) {
        for (int k = 0; k < na; ++k) {
          double s = 0.0;
          for (int l = 0; l < na; ++l) {
            s += tw[l] * media.kernel(x, y, angles.alphas[k], angles.alphas[l]) *
                 uat(i, j, l);
          }
          scatter[k] = s;
        }
      }
      double acc = 0.0;
      for (int k = 0; k < na; ++k) {
        double alpha = angles.alphas[k];
        double dx = x - alpha;
        double r = std::sqrt(dx * dx + y * y);
        double ux, uy;
        if (i == 0) {
          ux = (uat(1, j, k) - uat(0, j, k)) / grid.hx;
        } else if (i == nx - 1) {
          ux = (uat(i, j, k) - uat(i - 1, j, k)) / grid.hx;
        } else {
          ux = (uat(i + 1, j, k) - uat(i - 1, j, k)) / (2.0 * grid.hx);
        }
        if (j == 0) {
          uy = (uat(i, 1, k) - uat(i, 0, k)) / grid.hy;
        } else if (j == ny - 1) {
          uy = (uat(i, j, k) - uat(i, j - 1, k)) / grid.hy;
        } else {
          uy = (uat(i, j + 1, k) - uat(i, j - 1, k)) / (2.0 * grid.hy);
        }
        double fk = (dx / r) * ux + (y / r) * uy + sigma * uat(i, j, k);
        if (mus != 0.0) fk -= mus * scatter[k];
        acc += tw[k] * fk;
      }
      out.f_comp[static_cast<size_t>(i) * ny + j] = acc / twsum;
    }
  });
  return out;
}

void post_process(SourceEstimate& estimate, double threshold_fraction,
                  SmoothKernel kernel) {
  const int nx = estimate.nx;
  const int ny = estimate.ny;
  double m = 0.0;
  for (double v : estimate.f_comp) m = std::max(m, v);
  std::vector<double> clipped(estimate.f_comp.size(), 0.0);
  if (m > 0.0) {
    double cut = threshold_fraction * m;
    for (size_t s = 0; s < clipped.size(); ++s) {
      if (estimate.f_comp[s] > cut) clipped[s] = estimate.f_comp[s];
    }
  }
  estimate.f_post.assign(clipped.size(), 0.0);
  auto cat = [&](int i, int j) { return clipped[static_cast<size_t>(i) * ny + j]; };
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      double sum = 0.0;
      int count = 0;
      if (kernel == SmoothKernel::box3) {
        for (int di = -1; di <= 1; ++di) {
          for (int dj = -1; dj <= 1; ++dj) {
            int ii = i + di, jj = j + dj;
            if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
            sum += cat(ii, jj);
            ++count;
          }
        }
      } else {
        static const int off[5][2] = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (auto& o : off) {
          int ii = i + o[0], jj = j + o[1];
          if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
          sum += cat(ii, jj);
          ++count;
        }
      }
      estimate.f_post[static_cast<size_t>(i) * ny + j] = sum / count;
    }
  }
}

Metrics compute_metrics(const SourceEstimate& estimate, const ScalarField& f_true,
                        const Grid2D& grid, double threshold_fraction) {
  const int nx = estimate.nx;
  const int ny = estimate.ny;
  const std::vector<double>& f =
      estimate.f_post.empty() ? estimate.f_comp : estimate.f_post;
  std::vector<double> g(f.size());
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      g[static_cast<size_t>(i) * ny + j] = f_true(grid.xs[i], grid.ys[j]);
    }
  }
  Metrics m;
  double diff2 = 0.0, ref2 = 0.0;
  for (size_t s = 0; s < f.size(); ++s) {
    double d = f[s] - g[s];
    diff2 += d * d;
    ref2 += g[s] * g[s];
  }
  if (ref2 > 0.0) {
    m.relative_l2 = std::sqrt(diff2 / ref2);
  } else {
    m.relative_l2 = std::sqrt(diff2 * grid.hx * grid.hy);
    m.absolute_norm = true;
  }

  auto centroid = [&](const std::vector<double>& v, double& cx, double& cy,
                      bool& ok) {
    double mass = 0.0, sx = 0.0, sy = 0.0;
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        double w = v[static_cast<size_t>(i) * ny + j];
        if (w <= 0.0) continue;
        mass += w;
        sx += w * grid.xs[i];
        sy += w * grid.ys[j];
      }
    }
    ok = mass > 0.0;
    cx = ok ? sx / mass : 0.0;
    cy = ok ? sy / mass : 0.0;
  };
  double cx1, cy1, cx2, cy2;
  bool ok1, ok2;
  centroid(f, cx1, cy1, ok1);
  centroid(g, cx2, cy2, ok2);
  if (ok1 && ok2) {
    m.centroid_offset = std::hypot(cx1 - cx2, cy1 - cy2);
  } else {
    m.centroid_offset = ok1 == ok2 ? 0.0 : std::numeric_limits<double>::infinity();
  }

  auto support = [&](const std::vector<double>& v, std::vector<char>& s) {
    double mx = 0.0;
    for (double w : v) mx = std::max(mx, w);
    s.assign(v.size(), 0);
    if (mx <= 0.0) return;
    double cut = threshold_fraction * mx;
    for (size_t k = 0; k < v.size(); ++k) s[k] = v[k] > cut ? 1 : 0;
  };
  std::vector<char> sf, sg;
  support(f, sf);
  support(g, sg);
  size_t inter = 0, uni = 0;
  for (size_t k = 0; k < sf.size(); ++k) {
    inter += sf[k] && sg[k];
    uni += sf[k] || sg[k];
  }
  m.support_jaccard = uni > 0 ? static_cast<double>(inter) / uni : 1.0;
  return m;
}

}  // namespace rteqr
