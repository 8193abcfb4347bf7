#pragma once

#include <cstdint>
#include <string>

#include "rteqr/grid.hpp"

namespace rteqr {

// Flat key=value run configuration with dotted section names, e.g.
//   domain.a = 1
//   qrm.epsilon1 = 0.1
// Lines starting with '#' and blank lines are ignored.
struct RunConfig {
  Domain domain;

  int Mx = 100;
  int My = 100;
  int Ma = 50;

  int N = 12;
  int Q = 400;

  std::string preset = "test1";  // test1 | test2 | test3 | custom
  // Shape lists for preset=custom; ';'-separated entries of the form
  //   disk:cx,cy,r,value[,smooth_width]
  //   bar:cx,cy,angle_deg,half_len,half_wid,value[,smooth_width]
  std::string media_f;
  std::string media_mu_a;
  std::string media_mu_s;
  double smooth_width = -1.0;  // < 0 selects 2 * hx

  double noise_delta = 0.0;
  uint64_t seed = 1;

  double forward_tol = 1e-10;
  int forward_max_iter = 100;

  double eps1 = 0.1;
  double eps2 = 0.01;
  double qrm_tol = 1e-10;
  int qrm_max_iter = 0;  // <= 0 selects 20 * sqrt(dim)

  double threshold_fraction = 0.2;
  std::string post_kernel = "box3";  // box3 | cross5

  std::string out_dir = "out";
  std::string formats = "csv,pgm";

  // Throws ConfigError on any violated constraint; emits warnings (returned
  // as a human-readable string, empty when clean) for soft hypotheses.
  std::string validate() const;
};

// Parses the flat key=value text; unknown keys are a ConfigError.
RunConfig parse_config(const std::string& text);

// Reads and parses a config file. Throws IoError when unreadable.
RunConfig load_config(const std::string& path);

}  // namespace rteqr
