#pragma once

#include <vector>

#include "rteqr/basis.hpp"
#include "rteqr/grid.hpp"
#include "rteqr/media.hpp"
#include "rteqr/qrm.hpp"

namespace rteqr {

struct Metrics {
  double relative_l2 = 0.0;
  double centroid_offset = 0.0;
  double support_jaccard = 0.0;
  // When the reference field vanishes, relative_l2 holds the absolute norm.
  bool absolute_norm = false;
};

struct SourceEstimate {
  int nx = 0, ny = 0;
  std::vector<double> f_comp;  // raw recovered values, row-major (i * ny + j)
  std::vector<double> f_post;  // post-processed values; empty until post_process
  Metrics metrics;

  double raw(int i, int j) const { return f_comp[static_cast<size_t>(i) * ny + j]; }
  double post(int i, int j) const { return f_post[static_cast<size_t>(i) * ny + j]; }
};

enum class SmoothKernel { box3, cross5 };

// Substitutes the synthesized radiance back into the transport equation:
// f(x, y, alpha) = nu . grad u + (mu_a + mu_s) u - mu_s int K u dbeta,
// with central differences inside the grid and one-sided ones at the edges,
// then averages over the source abscissas with trapezoid weights.
SourceEstimate recover_source(const FourierField& U, const BasisSet& basis,
                              const MediaModel& media, const Grid2D& grid,
                              const AngleGrid& angles);

// Two-step cleanup: zero every node at or below threshold_fraction times the
// grid maximum, then replace each node by the mean over its neighborhood
// (truncated at the edges). An all-zero field passes through unchanged.
void post_process(SourceEstimate& estimate, double threshold_fraction = 0.2,
                  SmoothKernel kernel = SmoothKernel::box3);

// Quality of f_post against a reference field sampled on the same grid.
Metrics compute_metrics(const SourceEstimate& estimate, const ScalarField& f_true,
                        const Grid2D& grid, double threshold_fraction = 0.2);

}  // namespace rteqr
