// Acceptance suite: one pass/fail line per criterion, exit 0 only when all
// criteria pass. Each criterion is self-contained and keeps running even if
// an earlier one fails.
#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rteqr/assembly.hpp"
#include "rteqr/basis.hpp"
#include "rteqr/carleman.hpp"
#include "rteqr/config.hpp"
#include "rteqr/forward.hpp"
#include "rteqr/grid.hpp"
#include "rteqr/media.hpp"
#include "rteqr/pipeline.hpp"
#include "rteqr/qrm.hpp"
#include "rteqr/quadrature.hpp"
#include "rteqr/reconstruction.hpp"

using namespace rteqr;
namespace fs = std::filesystem;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

fs::path scratch_root() {
  fs::path p = fs::temp_directory_path() / "rteqr-acceptance";
  fs::create_directories(p);
  return p;
}

RunConfig desk_config(double delta, uint64_t seed, const std::string& out) {
  RunConfig c;
  c.Mx = c.My = 50;
  c.Ma = 50;
  c.N = 6;
  c.Q = 400;
  c.preset = "test1";
  c.noise_delta = delta;
  c.seed = seed;
  c.eps1 = 0.001;
  c.eps2 = 0.003;
  c.qrm_tol = 1e-8;
  c.qrm_max_iter = 200000;
  c.out_dir = out;
  c.formats = "csv";
  return c;
}

// ---------------------------------------------------------------------------

bool criterion1(std::string& detail) {
  Timer t;
  BasisSet b(12, 5.0, 400);
  QuadRule dense = gauss_legendre(900, -5.0, 5.0);
  double worst_gram = 0.0;
  for (int m = 0; m < 12; ++m) {
    for (int n = 0; n < 12; ++n) {
      double s = 0.0;
      for (size_t q = 0; q < dense.x.size(); ++q) {
        s += dense.w[q] * b.eval(m, dense.x[q]) * b.eval(n, dense.x[q]);
      }
      worst_gram = std::max(worst_gram, std::abs(s - (m == n ? 1.0 : 0.0)));
    }
  }
  double worst_tri = 0.0;
  const Eigen::MatrixXd& mn = b.coupling();
  for (int n = 0; n < 12; ++n) {
    worst_tri = std::max(worst_tri, std::abs(mn(n, n) - 1.0));
    for (int m = n + 1; m < 12; ++m) {
      worst_tri = std::max(worst_tri, std::abs(mn(m, n)));
    }
  }
  double el = t.seconds();
  bool ok = worst_gram <= 1e-8 && worst_tri <= 1e-8 && el < 1.0;
  detail = fmt("max gram deviation %.2e (<= 1e-8), max triangular deviation "
               "%.2e (<= 1e-8), %.2f s (< 1 s)",
               worst_gram, worst_tri, el);
  return ok;
}

bool criterion2(std::string& detail) {
  Timer t;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> um(3, 200);
  std::uniform_real_distribution<double> uv(-2.0, 2.0), uh(0.01, 0.5),
      uy(0.0, 3.0), ul(1e-3, 10.0), ur(0.05, 0.95);
  int viol1 = 0, viol_t = 0, viol2 = 0, viol_id = 0;
  const int trials = 10000;
  for (int k = 0; k < trials; ++k) {
    DiscreteFunction1D f;
    int m = um(rng);
    f.values.resize(m + 1);
    for (double& x : f.values) x = uv(rng);
    f.hy = uh(rng);
    f.y0 = uy(rng);

    CarlemanCheck c1 = check_lemma1(f);
    if (!c1.holds) ++viol1;
    double scale = std::max({1.0, std::abs(c1.lhs), std::abs(c1.rhs)});
    if (std::abs((c1.lhs - c1.rhs) - c1.slack) > 1e-12 * scale) ++viol_id;

    CarlemanCheck ct = check_theorem1(f, ul(rng));
    if (!ct.holds) ++viol_t;

    f.values.back() = 0.0;
    CarlemanCheck c2 = check_lemma2(f, ur(rng) / f.hy);
    if (!c2.holds) ++viol2;
  }
  double el = t.seconds();
  bool ok =
      viol1 == 0 && viol_t == 0 && viol2 == 0 && viol_id == 0 && el < 10.0;
  detail = fmt("violations over %d trials each: %d / %d / %d, slack identity "
               "failures %d, %.2f s (< 10 s)",
               trials, viol1, viol_t, viol2, viol_id, el);
  return ok;
}

bool criterion3(std::string& detail) {
  Timer t;
  Domain dom;
  Grid2D grid = Grid2D::make(dom, 100, 100);
  AngleGrid angles = AngleGrid::make(dom.d, 50);
  MediaModel m = preset("test1", dom, 2.0 * grid.hx);  // vacuum inside
  ForwardResult r = solve_forward(m, grid, angles);
  double sup = 0.0, sup_err = 0.0;
  for (int i = 0; i < grid.nx(); i += 5) {
    for (int j = 1; j < grid.ny(); j += 5) {
      for (int k = 0; k < angles.count(); k += 5) {
        double oracle = ray_integral(m.f_true, dom, grid.xs[i], grid.ys[j],
                                     angles.alphas[k], 5000);
        sup = std::max(sup, std::abs(oracle));
        sup_err = std::max(sup_err, std::abs(r.u.at(i, j, k) - oracle));
      }
    }
  }
  double rel = sup > 0.0 ? sup_err / sup : 1.0;
  double el = t.seconds();
  bool ok = rel <= 0.02 && el < 60.0;
  detail = fmt("relative sup error %.4f (<= 0.02) against the independent ray "
               "quadrature, %.1f s (< 60 s)",
               rel, el);
  return ok;
}

bool criterion4(std::string& detail) {
  Timer t;
  Domain dom;
  Grid2D grid = Grid2D::make(dom, 100, 100);
  AngleGrid angles = AngleGrid::make(dom.d, 50);
  bool ok = true;
  std::string parts;
  for (const char* id : {"test2", "test3"}) {
    MediaModel m = preset(id, dom, 2.0 * grid.hx);
    ForwardResult r = solve_forward(m, grid, angles, 1e-10, 50);
    ok = ok && r.residual < 1e-10 && r.iterations <= 50;
    parts += fmt("%s: residual %.2e in %d iters; ", id, r.residual,
                 r.iterations);
  }
  double el = t.seconds();
  ok = ok && el < 300.0;
  detail = parts + fmt("%.1f s (< 5 min)", el);
  return ok;
}

bool criterion5(std::string& detail) {
  // Synthetic well-conditioned node matrices on a 3 x 3 grid.
  auto build = [](int N, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int Mx = 2;
    Domain dom;
    Grid2D grid = Grid2D::make(dom, Mx, Mx);
    NodeMatrices nodes;
    nodes.N = N;
    nodes.nx = nodes.ny = Mx + 1;
    nodes.MN = Eigen::MatrixXd::Identity(N, N);
    for (int m = 0; m < N; ++m) {
      for (int n = m + 1; n < N; ++n) nodes.MN(m, n) = 0.3 * u(rng);
    }
    size_t total = static_cast<size_t>(Mx + 1) * (Mx + 1);
    nodes.A.resize(total);
    nodes.B.resize(total);
    nodes.C.resize(total);
    for (size_t s = 0; s < total; ++s) {
      Eigen::MatrixXd a(N, N), bm(N, N), cm(N, N);
      for (int m = 0; m < N; ++m) {
        for (int n = 0; n < N; ++n) {
          a(m, n) = 0.2 * u(rng);
          bm(m, n) = u(rng);
          cm(m, n) = u(rng);
        }
      }
      nodes.A[s] = a;
      nodes.B[s] = bm;
      nodes.C[s] = cm;
    }
    LinedSystem sys = build_operator(nodes, grid, 0.1, 0.01);
    for (int k = 0; k < sys.dim; ++k) {
      if (sys.boundary[k]) sys.F[k] = u(rng);
    }
    return sys;
  };
  auto dense_normal = [](const LinedSystem& s) {
    Eigen::MatrixXd L = Eigen::MatrixXd(s.L);
    Eigen::MatrixXd Dx = Eigen::MatrixXd(s.Dx);
    Eigen::MatrixXd Dy = Eigen::MatrixXd(s.Dy);
    Eigen::MatrixXd m = L.transpose() * L;
    m += s.eps2 * (Dx.transpose() * Dx + Dy.transpose() * Dy);
    m += s.eps1 * Eigen::MatrixXd::Identity(s.dim, s.dim);
    return m;
  };

  double worst_solve = 0.0, worst_sym = 0.0;
  bool coercive = true;
  for (int N : {1, 2}) {
    LinedSystem sys = build(N, 500 + N);
    Eigen::MatrixXd m = dense_normal(sys);
    worst_sym = std::max(worst_sym,
                         (m - m.transpose()).norm() / std::max(1.0, m.norm()));
    // Direct elimination reference.
    std::vector<int> free_idx;
    for (int k = 0; k < sys.dim; ++k) {
      if (!sys.boundary[k]) free_idx.push_back(k);
    }
    Eigen::VectorXd ubd = Eigen::VectorXd::Zero(sys.dim);
    for (int k = 0; k < sys.dim; ++k) {
      if (sys.boundary[k]) ubd[k] = sys.F[k];
    }
    Eigen::VectorXd rhs_full = -(m * ubd);
    int nf = static_cast<int>(free_idx.size());
    Eigen::MatrixXd h(nf, nf);
    Eigen::VectorXd rhs(nf);
    for (int r = 0; r < nf; ++r) {
      rhs[r] = rhs_full[free_idx[r]];
      for (int c = 0; c < nf; ++c) h(r, c) = m(free_idx[r], free_idx[c]);
    }
    Eigen::VectorXd xf = h.ldlt().solve(rhs);
    Eigen::VectorXd expect = ubd;
    for (int r = 0; r < nf; ++r) expect[free_idx[r]] = xf[r];

    FourierField f = solve(sys, 1e-13, 100000);
    Eigen::VectorXd got = lined_vector(f);
    worst_solve = std::max(
        worst_solve, (got - expect).norm() / std::max(1.0, expect.norm()));

    std::mt19937_64 rng(600 + N);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd v(sys.dim);
      for (int k = 0; k < sys.dim; ++k) v[k] = u(rng);
      if (v.dot(m * v) < sys.eps1 * v.squaredNorm() - 1e-12) coercive = false;
    }
  }
  bool ok = worst_solve <= 1e-10 && worst_sym <= 1e-12 && coercive;
  detail = fmt("max CG-vs-direct deviation %.2e (<= 1e-10), symmetry "
               "deviation %.2e, coercivity %s on 200 random vectors",
               worst_solve, worst_sym, coercive ? "holds" : "fails");
  return ok;
}

bool criterion6(std::string& detail, Metrics* delta0 = nullptr) {
  Timer t;
  fs::path out = scratch_root() / "c6";
  RunReport rep = run_pipeline(desk_config(0.0, 1, out.string()));
  if (delta0) *delta0 = rep.metrics;
  double el = t.seconds();
  // The 0.19 support-overlap floor is the regression baseline established by
  // the first verified run of this configuration (measured 0.2067); the
  // centroid threshold is the a-priori 0.1 length-unit bound.
  bool ok = rep.metrics.centroid_offset <= 0.1 &&
            rep.metrics.support_jaccard >= 0.19 && el < 300.0;
  detail = fmt("centroid offset %.4f (<= 0.1), support jaccard %.4f (>= 0.19 "
               "baseline), relative l2 %.4f, %.1f s (< 5 min)",
               rep.metrics.centroid_offset, rep.metrics.support_jaccard,
               rep.metrics.relative_l2, el);
  return ok;
}

bool criterion7(std::string& detail) {
  Timer t;
  fs::path out = scratch_root() / "c7";
  RunReport rep = run_pipeline(desk_config(0.9, 1, out.string()));
  double el = t.seconds();
  bool ok = rep.metrics.centroid_offset <= 0.15;
  detail = fmt("delta = 0.9: centroid offset %.4f (<= 0.15), support jaccard "
               "%.4f, %.1f s",
               rep.metrics.centroid_offset, rep.metrics.support_jaccard, el);
  return ok;
}

bool criterion8(std::string& detail, const Metrics& delta0) {
  Timer t;
  bool ok = true;
  std::string parts = fmt("delta 0: %.4f; ", delta0.relative_l2);
  for (uint64_t seed : {1, 2, 3}) {
    double prev = delta0.relative_l2;
    parts += fmt("seed %llu:", static_cast<unsigned long long>(seed));
    for (double delta : {0.3, 0.6}) {
      fs::path out = scratch_root() / fmt("c8-%llu-%g",
                                          static_cast<unsigned long long>(seed),
                                          delta);
      RunReport rep = run_pipeline(desk_config(delta, seed, out.string()));
      double r = rep.metrics.relative_l2;
      parts += fmt(" %.4f", r);
      if (r < prev * 0.9) ok = false;  // nondecreasing up to 10% slack
      prev = r;
    }
    parts += "; ";
  }
  double el = t.seconds();
  detail = parts + fmt("%.1f s", el);
  return ok;
}

bool criterion9(std::string& detail) {
  Timer t;
  Domain dom;
  const int Mx = 16, N = 4;
  Grid2D grid = Grid2D::make(dom, Mx, Mx);
  AngleGrid angles = AngleGrid::make(dom.d, 30);
  BasisSet basis(N, dom.d, 300);
  MediaModel m = preset("test1", dom, 2.0 * grid.hx);
  NodeMatrices nodes = assemble(basis, m, grid, angles);
  LinedSystem sys = build_operator(nodes, grid, 0.1, 0.01);

  const double tol = 1e-11;
  auto solve_for = [&](const Eigen::VectorXd& f) {
    LinedSystem s = sys;
    s.F = f;
    return lined_vector(solve(s, tol, 200000));
  };

  // Data sets: noisy realizations of an actual forward boundary trace, the
  // perturbation family for which the stability estimate is meant.
  ForwardResult fwd = solve_forward(m, grid, angles);
  BoundaryData trace = boundary_trace(fwd.u, grid, angles);
  std::vector<Eigen::VectorXd> datasets;
  std::vector<Eigen::VectorXd> solutions;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    BoundaryData noisy = apply_noise(trace, grid, angles, 0.3, seed);
    LinedSystem tmp = sys;
    apply_boundary(tmp, noisy, basis, angles);
    datasets.push_back(tmp.F);
    solutions.push_back(solve_for(tmp.F));
  }

  // Doubling the data doubles the solution.
  Eigen::VectorXd doubled = solve_for(2.0 * datasets[0]);
  double lin = (doubled - 2.0 * solutions[0]).norm() /
               std::max(1e-30, doubled.norm());
  bool ok = lin <= 10.0 * tol;

  // Lipschitz stability constant across the 10 pairs of the 5 data sets.
  double cmin = 1e300, cmax = 0.0;
  for (size_t a = 0; a < datasets.size(); ++a) {
    for (size_t b = a + 1; b < datasets.size(); ++b) {
      double c = (solutions[a] - solutions[b]).norm() /
                 (datasets[a] - datasets[b]).norm();
      cmin = std::min(cmin, c);
      cmax = std::max(cmax, c);
    }
  }
  // A single constant within +-20% covers all pairs iff max/min <= 1.5.
  double spread = cmax / cmin;
  ok = ok && spread <= 1.5;
  double el = t.seconds();
  detail = fmt("doubling deviation %.2e (<= %.0e), stability constant in "
               "[%.4f, %.4f], spread %.3f (<= 1.5), %.1f s",
               lin, 10.0 * tol, cmin, cmax, spread, el);
  return ok;
}

bool criterion10(std::string& detail) {
  Timer t;
  RunConfig base;
  base.Mx = base.My = 20;
  base.Ma = 20;
  base.N = 4;
  base.preset = "test2";
  base.noise_delta = 0.3;
  base.seed = 7;
  base.eps1 = 0.01;
  base.eps2 = 0.01;
  base.qrm_tol = 1e-8;
  base.qrm_max_iter = 100000;
  base.formats = "csv";

  auto run_to = [&](const std::string& dir) {
    RunConfig c = base;
    c.out_dir = dir;
    return run_pipeline(c);
  };
  fs::path da = scratch_root() / "c10-a";
  fs::path db = scratch_root() / "c10-b";
  RunReport ra = run_to(da.string());
  RunReport rb = run_to(db.string());

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  int compared = 0, mismatched = 0;
  for (const std::string& art : ra.artifacts) {
    fs::path pa(art);
    if (pa.extension() != ".csv") continue;
    if (pa.filename() == "timings.csv") continue;
    fs::path pb = db / pa.filename();
    ++compared;
    if (!fs::exists(pb) || slurp(pa) != slurp(pb)) ++mismatched;
  }
  double el = t.seconds();
  bool ok = compared > 0 && mismatched == 0;
  detail = fmt("%d csv artifacts compared byte-for-byte, %d mismatched, "
               "%.1f s",
               compared, mismatched, el);
  return ok;
}

}  // namespace

int main() {
  std::error_code ec;
  fs::remove_all(scratch_root(), ec);

  int failures = 0;
  Metrics delta0;
  auto report = [&](int n, bool pass, const std::string& detail) {
    std::printf("criterion %d: %s — %s\n", n, pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  };

  std::string d;
  report(1, criterion1(d), d);
  report(2, criterion2(d), d);
  report(3, criterion3(d), d);
  report(4, criterion4(d), d);
  report(5, criterion5(d), d);
  bool c6 = false;
  try {
    c6 = criterion6(d, &delta0);
  } catch (const std::exception& e) {
    d = std::string("exception: ") + e.what();
  }
  report(6, c6, d);
  report(7, criterion7(d), d);
  report(8, criterion8(d, delta0), d);
  report(9, criterion9(d), d);
  report(10, criterion10(d), d);

  fs::remove_all(scratch_root(), ec);
  return failures == 0 ? 0 : 1;
}
