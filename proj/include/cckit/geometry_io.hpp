#pragma once

#include <array>
#include <string>
#include <vector>

#include "cckit/slice.hpp"

namespace cckit {

/// Binary PGM (P5), one byte per cell: 255 = member, 0 = not.
void write_pgm(const SliceMask& mask, const std::string& path);

/// Closed polylines along the member/non-member interface, in zeta-plane
/// coordinates. Segments run along cell-boundary midlines and are chained
/// into loops.
std::vector<std::vector<Complex>> mask_contours(const SliceMask& mask);

/// SVG document with one path per polyline; view box fitted to the window.
void write_contours_svg(const SliceMask& mask,
                        const std::vector<std::vector<Complex>>& contours,
                        const std::string& path);

/// Polyline as CSV rows "re,im".
void write_polyline_csv(const std::vector<Complex>& polyline, const std::string& path);

/// Rows "x,y,value". Used for defining-function field dumps over a grid.
void write_field_csv(const std::vector<std::array<double, 3>>& rows,
                     const std::string& path);

/// Atomic file write (temp file + rename), shared by all emitters.
void write_file_atomic(const std::string& path, const std::string& payload);

}  // namespace cckit
