#include "rteqr/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rteqr/assembly.hpp"
#include "rteqr/basis.hpp"
#include "rteqr/errors.hpp"
#include "rteqr/forward.hpp"
#include "rteqr/io.hpp"

namespace rteqr {

namespace {

std::vector<Shape> parse_shapes(const std::string& spec, double default_width) {
  std::vector<Shape> out;
  std::istringstream in(spec);
  std::string entry;
  while (std::getline(in, entry, ';')) {
    if (entry.empty()) continue;
    size_t colon = entry.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("media: shape entry needs kind:params, got '" + entry + "'");
    }
    std::string kind = entry.substr(0, colon);
    std::vector<double> p;
    std::istringstream ps(entry.substr(colon + 1));
    std::string tok;
    while (std::getline(ps, tok, ',')) {
      try {
        p.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ConfigError("media: bad number '" + tok + "' in '" + entry + "'");
      }
    }
    Shape s;
    if (kind == "disk") {
      if (p.size() != 4 && p.size() != 5) {
        throw ConfigError("media: disk needs cx,cy,r,value[,width]");
      }
      s.kind = Shape::Kind::disk;
      s.cx = p[0];
      s.cy = p[1];
      s.r = p[2];
      s.value = p[3];
      s.smooth_width = p.size() == 5 ? p[4] : default_width;
    } else if (kind == "bar") {
      if (p.size() != 6 && p.size() != 7) {
        throw ConfigError("media: bar needs cx,cy,angle,half_len,half_wid,value[,width]");
      }
      s.kind = Shape::Kind::bar;
      s.cx = p[0];
      s.cy = p[1];
      s.angle_deg = p[2];
      s.half_len = p[3];
      s.half_wid = p[4];
      s.value = p[5];
      s.smooth_width = p.size() == 7 ? p[6] : default_width;
    } else {
      throw ConfigError("media: unknown shape kind '" + kind + "'");
    }
    out.push_back(s);
  }
  if (out.empty()) throw ConfigError("media: empty shape list '" + spec + "'");
  return out;
}

template <typename F>
auto stage(const std::string& name, std::vector<StageTiming>& timings, F&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  try {
    auto result = fn();
    timings.push_back(
        {name, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                   .count()});
    return result;
  } catch (const ConfigError& e) {
    throw ConfigError("stage " + name + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError("stage " + name + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError("stage " + name + ": " + e.what());
  } catch (const std::exception& e) {
    throw NumericalError("stage " + name + ": " + e.what());
  }
}

}  // namespace

MediaModel media_from_config(const RunConfig& config, const Grid2D& grid) {
  double width = config.smooth_width >= 0.0 ? config.smooth_width : 2.0 * grid.hx;
  if (config.preset != "custom") {
    return preset(config.preset, config.domain, width);
  }
  MediaModel m;
  m.d = config.domain.d;
  m.f_true = supported_in(config.domain,
                          shape_field(parse_shapes(config.media_f, width)));
  if (!config.media_mu_a.empty()) {
    m.mu_a = supported_in(config.domain,
                          shape_field(parse_shapes(config.media_mu_a, width)));
  } else {
    m.mu_a = [](double, double) { return 0.0; };
  }
  if (!config.media_mu_s.empty()) {
    m.mu_s = supported_in(config.domain,
                          shape_field(parse_shapes(config.media_mu_s, width)));
  } else {
    m.mu_s = [](double, double) { return 0.0; };
  }
  double d = m.d;
  m.kernel = [d](double, double, double, double) { return 1.0 / (2.0 * d); };
  m.kernel_is_constant = true;
  return m;
}

RunReport run_pipeline(const RunConfig& config) {
  RunReport rep;
  rep.warnings = stage("config", rep.timings, [&] { return config.validate(); });

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw IoError("stage output: cannot create '" + config.out_dir + "'");
  bool want_csv = config.formats.find("csv") != std::string::npos;
  bool want_pgm = config.formats.find("pgm") != std::string::npos;
  auto path = [&](const std::string& name) {
    return (fs::path(config.out_dir) / name).string();
  };
  auto save_grid = [&](const std::vector<double>& field, const Grid2D& grid,
                       const std::string& name) {
    if (want_csv) {
      export_grid_csv(field, grid, path(name + ".csv"));
      rep.artifacts.push_back(path(name + ".csv"));
    }
    if (want_pgm) {
      export_grid_pgm(field, grid, path(name + ".pgm"));
      rep.artifacts.push_back(path(name + ".pgm"));
    }
  };

  Grid2D grid = Grid2D::make(config.domain, config.Mx, config.My);
  AngleGrid angles = AngleGrid::make(config.domain.d, config.Ma);

  BasisSet basis = stage("basis", rep.timings, [&] {
    return BasisSet(config.N, config.domain.d, config.Q);
  });
  MediaModel media = stage("media", rep.timings,
                           [&] { return media_from_config(config, grid); });

  std::vector<double> f_true(static_cast<size_t>(grid.nx()) * grid.ny());
  for (int i = 0; i < grid.nx(); ++i) {
    for (int j = 0; j < grid.ny(); ++j) {
      f_true[static_cast<size_t>(i) * grid.ny() + j] =
          media.f_true(grid.xs[i], grid.ys[j]);
    }
  }
  save_grid(f_true, grid, "f_true");

  ForwardResult fwd = stage("forward", rep.timings, [&] {
    return solve_forward(media, grid, angles, config.forward_tol,
                         config.forward_max_iter);
  });
  rep.forward_iterations = fwd.iterations;
  rep.forward_residual = fwd.residual;

  BoundaryData data = stage("boundary", rep.timings, [&] {
    BoundaryData trace = boundary_trace(fwd.u, grid, angles);
    if (config.noise_delta > 0.0) {
      trace = apply_noise(trace, grid, angles, config.noise_delta, config.seed);
    }
    return trace;
  });
  if (want_csv) {
    export_boundary_csv(data, grid, angles, path("boundary.csv"));
    rep.artifacts.push_back(path("boundary.csv"));
  }

  LinedSystem system = stage("assembly", rep.timings, [&] {
    NodeMatrices nodes = assemble(basis, media, grid, angles);
    LinedSystem sys = build_operator(nodes, grid, config.eps1, config.eps2);
    apply_boundary(sys, data, basis, angles);
    return sys;
  });

  FourierField U = stage("qrm", rep.timings, [&] {
    return solve(system, config.qrm_tol, config.qrm_max_iter, &rep.qrm_stats);
  });

  SourceEstimate est = stage("recover", rep.timings, [&] {
    SourceEstimate e = recover_source(U, basis, media, grid, angles);
    post_process(e, config.threshold_fraction,
                 config.post_kernel == "cross5" ? SmoothKernel::cross5
                                                : SmoothKernel::box3);
    e.metrics = compute_metrics(e, media.f_true, grid, config.threshold_fraction);
    return e;
  });
  rep.metrics = est.metrics;
  save_grid(est.f_comp, grid, "f_comp");
  save_grid(est.f_post, grid, "f_post");

  stage("report", rep.timings, [&] {
    if (want_csv) {
      std::ofstream out(path("solver_stats.csv"), std::ios::binary);
      if (!out) throw IoError("cannot write solver_stats.csv");
      out << "iteration,relative_residual\n";
      char buf[40];
      for (size_t k = 0; k < rep.qrm_stats.history.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", rep.qrm_stats.history[k]);
        out << k + 1 << ',' << buf << '\n';
      }
      rep.artifacts.push_back(path("solver_stats.csv"));
    }
    return 0;
  });

  write_summary(rep, path("summary.csv"));
  rep.artifacts.push_back(path("summary.csv"));
  {
    std::ofstream out(path("timings.txt"));
    for (const auto& t : rep.timings) {
      out << t.stage << ' ' << t.seconds << "s\n";
    }
  }
  return rep;
}

void write_summary(const RunReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("io: cannot write '" + path + "'");
  char buf[40];
  auto row = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << key << ',' << buf << '\n';
  };
  out << "key,value\n";
  row("relative_l2", report.metrics.relative_l2);
  row("centroid_offset", report.metrics.centroid_offset);
  row("support_jaccard", report.metrics.support_jaccard);
  out << "forward_iterations," << report.forward_iterations << '\n';
  row("forward_residual", report.forward_residual);
  out << "qrm_iterations," << report.qrm_stats.iterations << '\n';
  row("qrm_residual", report.qrm_stats.residual);
  if (!out) throw IoError("io: write failed for '" + path + "'");
}

}  // namespace rteqr
