#pragma once

#include <string>
#include <vector>

#include "rteqr/config.hpp"
#include "rteqr/media.hpp"
#include "rteqr/qrm.hpp"
#include "rteqr/reconstruction.hpp"

namespace rteqr {

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct RunReport {
  Metrics metrics;
  SolveStats qrm_stats;
  int forward_iterations = 0;
  double forward_residual = 0.0;
  std::vector<StageTiming> timings;
  std::vector<std::string> artifacts;  // paths of the files written
  std::string warnings;
};

// Builds the coefficient model selected by the config: one of the three
// reference presets, or the shape lists of preset=custom.
MediaModel media_from_config(const RunConfig& config, const Grid2D& grid);

// Full run: basis, forward data with the true source, noise, operator
// assembly, regularized solve, source recovery, post-processing, metrics.
// Artifacts land under config.out_dir. Deterministic for a fixed config
// and seed. Errors carry the failing stage in their message.
RunReport run_pipeline(const RunConfig& config);

// Serializes the report (metrics, solver statistics) as
// "key,value" CSV; timings go to a separate, non-deterministic file.
void write_summary(const RunReport& report, const std::string& path);

}  // namespace rteqr
