#pragma once

#include <string>
#include <vector>

#include "rteqr/forward.hpp"
#include "rteqr/grid.hpp"

namespace rteqr {

// Writes "x,y,value" rows in row-major (j outer, i inner) order with full
// 17-significant-digit decimals. field is indexed as field[i * ny + j].
void export_grid_csv(const std::vector<double>& field, const Grid2D& grid,
                     const std::string& path);

// 8-bit binary PGM (P5); values min-max normalized, a constant field maps
// to 0. Row j = My is written first so the image reads with y upward.
void export_grid_pgm(const std::vector<double>& field, const Grid2D& grid,
                     const std::string& path);

// Reads a csv written by export_grid_csv back onto the same grid; the
// round trip is bit-exact. Throws IoError on malformed content or node
// count mismatch.
std::vector<double> import_grid_csv(const std::string& path, const Grid2D& grid);

// Boundary trace as "x,y,alpha,value" rows (boundary nodes only).
void export_boundary_csv(const BoundaryData& data, const Grid2D& grid,
                         const AngleGrid& angles, const std::string& path);

// Inverse of export_boundary_csv; rows must appear in the same order and
// cover every boundary node and angle.
BoundaryData import_boundary_csv(const std::string& path, const Grid2D& grid,
                                 const AngleGrid& angles);

}  // namespace rteqr
