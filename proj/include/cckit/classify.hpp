#pragma once

#include <optional>
#include <string>

#include "cckit/domain.hpp"

namespace cckit {

/// Sampling cannot prove a universally quantified statement, so every verdict
/// carries its grid/tolerance context and an optional counterexample.
struct TriResult {
  Verdict verdict = Verdict::not_applicable;
  std::optional<CVec> witness;
  double tol = 0.0;  // touch tolerance actually used
  std::string detail;
};

struct AvoidanceResult {
  bool avoids = false;
  std::optional<CVec> witness;  // a member point lying on the hyperplane
};

/// Hyperplane through the boundary point p with the Wirtinger gradient of rho
/// as its normal — the unique support candidate at a C^1 boundary point.
/// For n = 1 this degenerates to the single point {p} (normal 1).
ComplexHyperplane tangent_hyperplane(const DomainModel& d, const CVec& p);

/// Scans H intersected with the bounding region on a grid of n-1 complex
/// parameters (grid points per real axis, axes capped for n = 3 to bound
/// work); reports a member witness if the hyperplane cuts the domain.
AvoidanceResult hyperplane_avoids(const DomainModel& d, const ComplexHyperplane& h,
                                  int grid);

/// Does H meet the closure of D only at p? Requires hyperplane_avoids first
/// (else not_applicable with the cutting witness). A sample q "touches the
/// closure" when rho(q) <= rho_tol (Level-1) or when membership flips within
/// distance tau along the segment from q to the basepoint (Level-0). Passes
/// when every touching sample lies within tau of p; the witness is the
/// farthest touching sample otherwise. tau = touch_tol, or 10 grid steps when
/// touch_tol = 0.
TriResult extreme_test(const DomainModel& d, const CVec& p, const ComplexHyperplane& h,
                       int grid, double touch_tol = 0.0);

/// extreme_test against the tangent hyperplane; at a C^1 boundary point that
/// is the only support candidate, so this is the strictness verdict.
TriResult strict_test(const DomainModel& d, const CVec& p, int grid,
                      double touch_tol = 0.0);

/// Does the line l (through p, disjoint from D) meet the closure only at p?
/// not_applicable when a sampled line point is a member.
TriResult line_touch_test(const DomainModel& d, const CVec& p, const ComplexLine& l,
                          int grid, double touch_tol = 0.0);

struct NormalityResult {
  Verdict verdict = Verdict::not_applicable;
  double u_radius = 0.0;
  double v_radius = 0.0;  // largest certified V (0 when failed)
  int resolution = 0;     // per-axis resolution actually used
  std::string detail;
};

/// Certificate for "every two points of B(p,V) cap D are connected inside
/// B(p,U) cap D": builds the grid graph of member cells of B(p,U_radius) cap D
/// over a 2n-real box (axis adjacency, edge-blocker respected) and searches
/// V = U/2^j, j = 1..6, for the largest V whose member cells all lie in one
/// component; fails when none works down to a V of two grid steps. Per-axis
/// resolution is capped at 24 (n = 2) / 10 (n = 3) to bound memory.
NormalityResult normality_test(const DomainModel& d, const CVec& p, double u_radius,
                               int resolution);

/// As normality_test, but B(p,V) cap D must additionally be one component of
/// its own induced grid graph.
NormalityResult strong_normality_test(const DomainModel& d, const CVec& p,
                                      double u_radius, int resolution);

struct BoundaryClassification {
  CVec point;
  std::optional<ComplexHyperplane> hyperplane;
  TriResult supported;
  TriResult extreme;
  TriResult strict;
  NormalityResult normal;
  NormalityResult strongly_normal;
  int grid = 0;
  double touch_tol = 0.0;
};

/// Runs the full battery at one boundary point. The hyperplane is the tangent
/// one for Level-1 domains, the degenerate {p} for planar domains, or the
/// supplied candidate; without any of those the hyperplane-based verdicts are
/// not_applicable. u_radius = 0 means 0.2 * bounding_radius.
BoundaryClassification classify_point(
    const DomainModel& d, const CVec& p, const SolverSettings& settings,
    double u_radius = 0.0,
    const std::optional<ComplexHyperplane>& supplied = std::nullopt);

}  // namespace cckit
