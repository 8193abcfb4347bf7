#include "rteqr/config.hpp"

#include <fstream>
#include <sstream>

#include "rteqr/errors.hpp"

namespace rteqr {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + ": not a number: '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + ": not an integer: '" + v + "'");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(lineno) +
                        ": expected key=value, got '" + s + "'");
    }
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (key == "domain.R") c.domain.R = to_double(key, val);
    else if (key == "domain.a") c.domain.a = to_double(key, val);
    else if (key == "domain.b") c.domain.b = to_double(key, val);
    else if (key == "domain.d") c.domain.d = to_double(key, val);
    else if (key == "grid.Mx") c.Mx = static_cast<int>(to_int(key, val));
    else if (key == "grid.My") c.My = static_cast<int>(to_int(key, val));
    else if (key == "grid.Malpha") c.Ma = static_cast<int>(to_int(key, val));
    else if (key == "basis.N") c.N = static_cast<int>(to_int(key, val));
    else if (key == "basis.Q") c.Q = static_cast<int>(to_int(key, val));
    else if (key == "media.preset") c.preset = val;
    else if (key == "media.f") c.media_f = val;
    else if (key == "media.mu_a") c.media_mu_a = val;
    else if (key == "media.mu_s") c.media_mu_s = val;
    else if (key == "media.smooth_width") c.smooth_width = to_double(key, val);
    else if (key == "noise.delta") c.noise_delta = to_double(key, val);
    else if (key == "noise.seed") c.seed = static_cast<uint64_t>(to_int(key, val));
    else if (key == "forward.tol") c.forward_tol = to_double(key, val);
    else if (key == "forward.max_iter") c.forward_max_iter = static_cast<int>(to_int(key, val));
    else if (key == "qrm.epsilon1") c.eps1 = to_double(key, val);
    else if (key == "qrm.epsilon2") c.eps2 = to_double(key, val);
    else if (key == "qrm.tol") c.qrm_tol = to_double(key, val);
    else if (key == "qrm.max_iter") c.qrm_max_iter = static_cast<int>(to_int(key, val));
    else if (key == "post.threshold_fraction") c.threshold_fraction = to_double(key, val);
    else if (key == "post.kernel") c.post_kernel = val;
    else if (key == "output.directory") c.out_dir = val;
    else if (key == "output.formats") c.formats = val;
    else {
      throw ConfigError("config: line " + std::to_string(lineno) +
                        ": unknown key '" + key + "'");
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("config: cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string RunConfig::validate() const {
  domain.validate();
  if (Mx < 2 || My < 2) throw ConfigError("config: grid.Mx, grid.My must be >= 2");
  if (Ma < 2) throw ConfigError("config: grid.Malpha must be >= 2");
  if (N < 1) throw ConfigError("config: basis.N must be >= 1");
  if (Q < N + 1) throw ConfigError("config: basis.Q must exceed basis.N");
  if (preset != "test1" && preset != "test2" && preset != "test3" &&
      preset != "custom") {
    throw ConfigError("config: media.preset must be test1, test2, test3 or custom");
  }
  if (preset == "custom" && media_f.empty()) {
    throw ConfigError("config: media.preset=custom requires media.f");
  }
  if (noise_delta < 0.0 || noise_delta > 1.0) {
    throw ConfigError("config: noise.delta must lie in [0, 1]");
  }
  if (!(forward_tol > 0.0)) throw ConfigError("config: forward.tol must be > 0");
  if (forward_max_iter < 1) throw ConfigError("config: forward.max_iter must be >= 1");
  if (!(eps1 > 0.0)) throw ConfigError("config: qrm.epsilon1 must be > 0");
  if (eps2 < 0.0) throw ConfigError("config: qrm.epsilon2 must be >= 0");
  if (!(qrm_tol > 0.0)) throw ConfigError("config: qrm.tol must be > 0");
  if (!(threshold_fraction >= 0.0 && threshold_fraction < 1.0)) {
    throw ConfigError("config: post.threshold_fraction must lie in [0, 1)");
  }
  if (post_kernel != "box3" && post_kernel != "cross5") {
    throw ConfigError("config: post.kernel must be box3 or cross5");
  }
  std::string warnings;
  double hx = 2.0 * domain.R / Mx;
  if (hx >= 1.0) {
    warnings += "warning: hx >= 1; the convergence theory assumes hx in [h1, 1)\n";
  }
  if (Mx != My) {
    warnings += "warning: Mx != My; the lined-up solve stage requires a square grid\n";
  }
  return warnings;
}

}  // namespace rteqr
