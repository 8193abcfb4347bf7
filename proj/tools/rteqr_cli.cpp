#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "rteqr/assembly.hpp"
#include "rteqr/basis.hpp"
#include "rteqr/carleman.hpp"
#include "rteqr/config.hpp"
#include "rteqr/errors.hpp"
#include "rteqr/forward.hpp"
#include "rteqr/io.hpp"
#include "rteqr/pipeline.hpp"
#include "rteqr/qrm.hpp"
#include "rteqr/reconstruction.hpp"

namespace {

using namespace rteqr;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string preset;
  long long seed = -1;
};

RunConfig make_config(const CommonOpts& opts) {
  RunConfig c;
  if (!opts.config_path.empty()) c = load_config(opts.config_path);
  if (!opts.preset.empty()) c.preset = opts.preset;
  if (!opts.out_dir.empty()) c.out_dir = opts.out_dir;
  if (opts.seed >= 0) c.seed = static_cast<uint64_t>(opts.seed);
  return c;
}

int cmd_basis(const RunConfig& c) {
  std::string warn = c.validate();
  if (!warn.empty()) std::cerr << warn;
  BasisSet basis(c.N, c.domain.d, c.Q);
  const auto& quad = basis.quadrature();
  double ortho_dev = 0.0;
  for (int m = 0; m < c.N; ++m) {
    for (int n = 0; n < c.N; ++n) {
      double ip = 0.0;
      for (size_t q = 0; q < quad.x.size(); ++q) {
        ip += quad.w[q] * basis.psi()(m, q) * basis.psi()(n, q);
      }
      ortho_dev = std::max(ortho_dev, std::abs(ip - (m == n ? 1.0 : 0.0)));
    }
  }
  double tri_dev = 0.0;
  const Eigen::MatrixXd& mn = basis.coupling();
  for (int m = 0; m < c.N; ++m) {
    tri_dev = std::max(tri_dev, std::abs(mn(m, m) - 1.0));
    for (int n = 0; n < m; ++n) tri_dev = std::max(tri_dev, std::abs(mn(m, n)));
  }
  std::printf("order %d, half interval %g, %d quadrature points\n", c.N,
              c.domain.d, c.Q);
  std::printf("max |<psi_m, psi_n> - delta_mn| = %.3e\n", ortho_dev);
  std::printf("max unit-triangularity deviation of the coupling matrix = %.3e\n",
              tri_dev);
  std::filesystem::create_directories(c.out_dir);
  std::string path = (std::filesystem::path(c.out_dir) / "coupling.csv").string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  char buf[40];
  for (int m = 0; m < c.N; ++m) {
    for (int n = 0; n < c.N; ++n) {
      std::snprintf(buf, sizeof buf, "%.17g", mn(m, n));
      out << buf << (n + 1 < c.N ? "," : "\n");
    }
  }
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_forward(const RunConfig& c) {
  std::string warn = c.validate();
  if (!warn.empty()) std::cerr << warn;
  Grid2D grid = Grid2D::make(c.domain, c.Mx, c.My);
  AngleGrid angles = AngleGrid::make(c.domain.d, c.Ma);
  Grid2D g = grid;
  MediaModel media = media_from_config(c, grid);
  ForwardResult fwd = solve_forward(media, g, angles, c.forward_tol,
                                    c.forward_max_iter);
  BoundaryData data = boundary_trace(fwd.u, grid, angles);
  if (c.noise_delta > 0.0) {
    data = apply_noise(data, grid, angles, c.noise_delta, c.seed);
  }
  std::filesystem::create_directories(c.out_dir);
  auto path = [&](const char* n) {
    return (std::filesystem::path(c.out_dir) / n).string();
  };
  std::vector<double> f_true(static_cast<size_t>(grid.nx()) * grid.ny());
  for (int i = 0; i < grid.nx(); ++i) {
    for (int j = 0; j < grid.ny(); ++j) {
      f_true[static_cast<size_t>(i) * grid.ny() + j] =
          media.f_true(grid.xs[i], grid.ys[j]);
    }
  }
  export_grid_csv(f_true, grid, path("f_true.csv"));
  export_boundary_csv(data, grid, angles, path("boundary.csv"));
  std::printf("fixed point reached in %d iterations (sup difference %.3e)\n",
              fwd.iterations, fwd.residual);
  std::printf("wrote %s and %s\n", path("f_true.csv").c_str(),
              path("boundary.csv").c_str());
  return 0;
}

int cmd_reconstruct(const RunConfig& c, const std::string& data_path) {
  std::string warn = c.validate();
  if (!warn.empty()) std::cerr << warn;
  Grid2D grid = Grid2D::make(c.domain, c.Mx, c.My);
  AngleGrid angles = AngleGrid::make(c.domain.d, c.Ma);
  BoundaryData data = import_boundary_csv(data_path, grid, angles);
  BasisSet basis(c.N, c.domain.d, c.Q);
  MediaModel media = media_from_config(c, grid);
  NodeMatrices nodes = assemble(basis, media, grid, angles);
  LinedSystem sys = build_operator(nodes, grid, c.eps1, c.eps2);
  apply_boundary(sys, data, basis, angles);
  SolveStats stats;
  FourierField U = solve(sys, c.qrm_tol, c.qrm_max_iter, &stats);
  SourceEstimate est = recover_source(U, basis, media, grid, angles);
  post_process(est, c.threshold_fraction,
               c.post_kernel == "cross5" ? SmoothKernel::cross5
                                         : SmoothKernel::box3);
  est.metrics = compute_metrics(est, media.f_true, grid, c.threshold_fraction);
  std::filesystem::create_directories(c.out_dir);
  auto path = [&](const char* n) {
    return (std::filesystem::path(c.out_dir) / n).string();
  };
  export_grid_csv(est.f_comp, grid, path("f_comp.csv"));
  export_grid_csv(est.f_post, grid, path("f_post.csv"));
  export_grid_pgm(est.f_post, grid, path("f_post.pgm"));
  std::printf("solver: %d iterations, relative residual %.3e\n",
              stats.iterations, stats.residual);
  std::printf("relative_l2 %.6g  centroid_offset %.6g  support_jaccard %.6g\n",
              est.metrics.relative_l2, est.metrics.centroid_offset,
              est.metrics.support_jaccard);
  return 0;
}

int cmd_verify(int trials, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> lam_dist(1e-3, 10.0);
  std::uniform_int_distribution<int> m_dist(3, 200);

  auto random_fn = [&](bool zero_last) {
    int M = m_dist(rng);
    DiscreteFunction1D f;
    f.hy = (2.0 + unit(rng)) / M;  // spacing in (1/M, 3/M)
    f.y0 = 1.0 + unit(rng);
    f.values.resize(M + 1);
    for (auto& v : f.values) v = unit(rng);
    if (zero_last) f.values.back() = 0.0;
    return f;
  };

  int fail1 = 0, fail_t = 0, fail2 = 0, fail_slack = 0;
  double min_slack1 = 1e300, min_slack_t = 1e300, min_ratio2 = 1e300;
  for (int t = 0; t < trials; ++t) {
    auto w = random_fn(false);
    auto r1 = check_lemma1(w);
    if (!r1.holds) ++fail1;
    double scale = std::max(1.0, std::max(std::abs(r1.lhs), std::abs(r1.rhs)));
    if (std::abs((r1.lhs - r1.rhs) - r1.slack) > 1e-12 * scale) ++fail_slack;
    min_slack1 = std::min(min_slack1, r1.lhs - r1.rhs);

    auto u = random_fn(false);
    double lam = lam_dist(rng);
    auto rt = check_theorem1(u, lam);
    if (!rt.holds) ++fail_t;
    min_slack_t = std::min(min_slack_t, rt.slack);

    auto u2 = random_fn(true);
    double lam2 = lam_dist(rng);
    if (lam2 * u2.hy >= 1.0) lam2 = 0.99 / u2.hy;
    auto r2 = check_lemma2(u2, lam2);
    if (!r2.holds) ++fail2;
    if (r2.rhs > 0.0) min_ratio2 = std::min(min_ratio2, r2.ratio);
  }
  std::printf("%-28s %8s %10s %14s\n", "inequality", "trials", "violations",
              "min slack");
  std::printf("%-28s %8d %10d %14.3e\n", "summation by parts", trials, fail1,
              min_slack1);
  std::printf("%-28s %8d %10d %14.3e\n", "slack identity", trials, fail_slack,
              0.0);
  std::printf("%-28s %8d %10d %14.3e\n", "weighted estimate", trials, fail_t,
              min_slack_t);
  std::printf("%-28s %8d %10d %14.3e (min lhs/rhs)\n", "simplified corollary",
              trials, fail2, min_ratio2);
  bool ok = fail1 == 0 && fail_t == 0 && fail2 == 0 && fail_slack == 0;
  std::printf("verify: %s\n", ok ? "PASS" : "FAIL");
  return ok ? 0 : 3;
}

int cmd_pipeline(const RunConfig& c) {
  RunReport rep = run_pipeline(c);
  if (!rep.warnings.empty()) std::cerr << rep.warnings;
  std::printf("forward: %d iterations (sup difference %.3e)\n",
              rep.forward_iterations, rep.forward_residual);
  std::printf("solver: %d iterations, relative residual %.3e\n",
              rep.qrm_stats.iterations, rep.qrm_stats.residual);
  std::printf("relative_l2 %.6g  centroid_offset %.6g  support_jaccard %.6g\n",
              rep.metrics.relative_l2, rep.metrics.centroid_offset,
              rep.metrics.support_jaccard);
  for (const auto& t : rep.timings) {
    std::printf("  %-10s %8.3f s\n", t.stage.c_str(), t.seconds);
  }
  std::printf("artifacts in %s\n", c.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transport source reconstruction toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  int trials = 10000;
  std::string data_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "key=value config file");
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--preset", opts.preset, "media preset")
        ->check(CLI::IsMember({"test1", "test2", "test3", "custom"}));
    sub->add_option("--seed", opts.seed, "noise seed");
  };

  CLI::App* basis = app.add_subcommand("basis", "basis diagnostics");
  add_common(basis);
  CLI::App* forward = app.add_subcommand("forward", "simulate boundary data");
  add_common(forward);
  CLI::App* reconstruct =
      app.add_subcommand("reconstruct", "recover the source from boundary data");
  add_common(reconstruct);
  reconstruct->add_option("--data", data_path, "boundary data csv")->required();
  CLI::App* verify =
      app.add_subcommand("verify", "randomized checks of the discrete estimates");
  verify->add_option("--trials", trials, "trials per inequality");
  verify->add_option("--seed", opts.seed, "random seed");
  CLI::App* pipeline = app.add_subcommand("pipeline", "full end-to-end run");
  add_common(pipeline);

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      return cmd_verify(trials, opts.seed >= 0 ? opts.seed : 20260823ull);
    }
    RunConfig c = make_config(opts);
    if (basis->parsed()) return cmd_basis(c);
    if (forward->parsed()) return cmd_forward(c);
    if (reconstruct->parsed()) return cmd_reconstruct(c, data_path);
    return cmd_pipeline(c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
