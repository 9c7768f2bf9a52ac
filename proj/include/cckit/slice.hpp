#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "cckit/domain.hpp"

namespace cckit {

/// Boolean grid over a square window in the zeta-plane of a complex line.
/// Sample (ix, iy) sits at zeta(ix, iy); cell true means line.at(zeta) is a
/// member of the sliced domain. Edges removed by the domain's edge-blocker are
/// listed in `blocked` (keys from edge_key); they matter for slit domains
/// whose removed set has measure zero and is invisible to pointwise sampling.
struct SliceMask {
  ComplexLine line;
  Complex center;        // window center in the zeta-plane
  double halfwidth = 1;  // window is center + [-halfwidth, halfwidth]^2
  int resolution = 0;    // resolution x resolution sample points
  std::vector<std::uint8_t> cells;  // row-major: cells[iy*resolution + ix]
  std::unordered_set<std::uint64_t> blocked;

  double step() const { return 2.0 * halfwidth / (resolution - 1); }
  Complex zeta(int ix, int iy) const {
    return center + Complex(-halfwidth + ix * step(), -halfwidth + iy * step());
  }
  bool cell(int ix, int iy) const {
    return cells[static_cast<std::size_t>(iy) * resolution + ix] != 0;
  }
  std::uint64_t edge_key(int lin_a, int lin_b) const {
    const std::uint64_t lo = static_cast<std::uint64_t>(std::min(lin_a, lin_b));
    const std::uint64_t hi = static_cast<std::uint64_t>(std::max(lin_a, lin_b));
    return lo * static_cast<std::uint64_t>(resolution) * resolution + hi;
  }
  bool edge_blocked(int lin_a, int lin_b) const {
    return !blocked.empty() && blocked.count(edge_key(lin_a, lin_b)) != 0;
  }
};

/// Digital topology summary of a mask: member cells under 4-connectivity with
/// blocked edges removed, complement under 8-connectivity (the standard
/// pairing that avoids connectivity paradoxes). A hole is a complement
/// component that does not reach the window border.
struct TopologyReport {
  int component_count = 0;
  int hole_count = 0;
  bool connected = false;         // component_count in {0, 1}
  bool simply_connected = false;  // hole_count == 0
  int true_cells = 0;
};

/// Rasterizes the slice D cap l. The window is centered on the parameter of
/// the point of l closest to the basepoint and sized from the bounding radius
/// plus a margin, so the border ring is guaranteed false for bounded domains.
SliceMask slice_mask(const DomainModel& d, const ComplexLine& l, int resolution);

TopologyReport mask_topology(const SliceMask& mask);

struct SliceWitness {
  ComplexLine line;
  TopologyReport base;     // at the requested resolution
  TopologyReport refined;  // at 2x resolution (witnesses must fail both)
  bool targeted = false;   // came from the deterministic probe family
};

struct CConvexityResult {
  Verdict verdict = Verdict::pass;
  int lines_checked = 0;
  /// Flags at base resolution that the 2x recheck identified as raster
  /// artifacts; they do not count as witnesses.
  int suppressed = 0;
  std::vector<SliceWitness> witnesses;
};

/// Samples `num_lines` lines (alternating: through two interior points /
/// through an interior point with a random direction) and, for n >= 2, a
/// deterministic two-parameter family of steep lines zeta -> (b(zeta-t), zeta)
/// that probes slices near flat boundary directions where disconnection shows
/// up first. Every slice must be connected and simply connected; failures are
/// re-checked at twice the resolution before being reported. For n = 1 the
/// only line is the coordinate chart itself.
CConvexityResult cconvexity_check(const DomainModel& d, int num_lines,
                                  std::uint64_t seed, int resolution);

/// Maximum pairwise distance of a planar point set, via convex hull.
double planar_diameter(const std::vector<Complex>& points);

}  // namespace cckit
