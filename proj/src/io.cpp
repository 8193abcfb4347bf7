#include "rteqr/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rteqr/errors.hpp"

namespace rteqr {

namespace {

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("io: cannot write '" + path + "'");
  return out;
}

void fmt17(char* buf, size_t n, double v) { std::snprintf(buf, n, "%.17g", v); }

}  // namespace

void export_grid_csv(const std::vector<double>& field, const Grid2D& grid,
                     const std::string& path) {
  const int nx = grid.nx();
  const int ny = grid.ny();
  if (field.size() != static_cast<size_t>(nx) * ny) {
    throw IoError("io: field size does not match the grid");
  }
  std::ofstream out = open_out(path, true);
  out << "x,y,value\n";
  char bx[40], by[40], bv[40];
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      fmt17(bx, sizeof bx, grid.xs[i]);
      fmt17(by, sizeof by, grid.ys[j]);
      fmt17(bv, sizeof bv, field[static_cast<size_t>(i) * ny + j]);
      out << bx << ',' << by << ',' << bv << '\n';
    }
  }
  if (!out) throw IoError("io: write failed for '" + path + "'");
}

void export_grid_pgm(const std::vector<double>& field, const Grid2D& grid,
                     const std::string& path) {
  const int nx = grid.nx();
  const int ny = grid.ny();
  if (field.size() != static_cast<size_t>(nx) * ny) {
    throw IoError("io: field size does not match the grid");
  }
  double lo = field[0], hi = field[0];
  for (double v : field) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::ofstream out = open_out(path, true);
  out << "P5\n# min-max normalized; min=" << lo << " max=" << hi << "\n"
      << nx << ' ' << ny << "\n255\n";
  double span = hi - lo;
  for (int j = ny - 1; j >= 0; --j) {
    for (int i = 0; i < nx; ++i) {
      double v = field[static_cast<size_t>(i) * ny + j];
      int g = span > 0.0 ? static_cast<int>(std::lround(255.0 * (v - lo) / span))
                         : 0;
      out.put(static_cast<char>(g));
    }
  }
  if (!out) throw IoError("io: write failed for '" + path + "'");
}

std::vector<double> import_grid_csv(const std::string& path, const Grid2D& grid) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("io: cannot read '" + path + "'");
  const int nx = grid.nx();
  const int ny = grid.ny();
  std::vector<double> field(static_cast<size_t>(nx) * ny, 0.0);
  std::string line;
  if (!std::getline(in, line)) throw IoError("io: empty csv '" + path + "'");
  size_t count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    size_t c1 = line.find(',');
    size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos) {
      throw IoError("io: malformed csv row in '" + path + "': " + line);
    }
    double v = 0.0;
    try {
      v = std::stod(line.substr(c2 + 1));
    } catch (const std::exception&) {
      throw IoError("io: malformed value in '" + path + "': " + line);
    }
    if (count >= field.size()) {
      throw IoError("io: too many rows in '" + path + "'");
    }
    int j = static_cast<int>(count) / nx;
    int i = static_cast<int>(count) % nx;
    field[static_cast<size_t>(i) * ny + j] = v;
    ++count;
  }
  if (count != field.size()) {
    throw IoError("io: expected " + std::to_string(field.size()) +
                  " rows in '" + path + "', got " + std::to_string(count));
  }
  return field;
}

void export_boundary_csv(const BoundaryData& data, const Grid2D& grid,
                         const AngleGrid& angles, const std::string& path) {
  std::ofstream out = open_out(path, true);
  out << "x,y,alpha,value\n";
  char bx[40], by[40], ba[40], bv[40];
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      if (!grid.on_boundary(i, j)) continue;
      for (int k = 0; k < angles.count(); ++k) {
        fmt17(bx, sizeof bx, grid.xs[i]);
        fmt17(by, sizeof by, grid.ys[j]);
        fmt17(ba, sizeof ba, angles.alphas[k]);
        fmt17(bv, sizeof bv, data.at(i, j, k));
        out << bx << ',' << by << ',' << ba << ',' << bv << '\n';
      }
    }
  }
  if (!out) throw IoError("io: write failed for '" + path + "'");
}

BoundaryData import_boundary_csv(const std::string& path, const Grid2D& grid,
                                 const AngleGrid& angles) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("io: cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoError("io: empty csv '" + path + "'");
  BoundaryData data(grid.nx(), grid.ny(), angles.count());
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      if (!grid.on_boundary(i, j)) continue;
      for (int k = 0; k < angles.count(); ++k) {
        if (!std::getline(in, line)) {
          throw IoError("io: truncated boundary csv '" + path + "'");
        }
        size_t c = line.rfind(',');
        if (c == std::string::npos) {
          throw IoError("io: malformed boundary row in '" + path + "': " + line);
        }
        try {
          data.at(i, j, k) = std::stod(line.substr(c + 1));
        } catch (const std::exception&) {
          throw IoError("io: malformed value in '" + path + "': " + line);
        }
      }
    }
  }
  return data;
}

}  // namespace rteqr
