#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cckit/domain.hpp"

namespace cckit {

/// Data of the peak function F = f(sigma(z)) at an extreme boundary point p:
/// sigma projects along the supporting hyperplane H onto the line l through p
/// (sigma(p) = 0, sigma = 0 on H, sigma(p + zeta b) = zeta), and
/// f(lambda) = exp(-1/(log Delta - Log(lambda/nu_br))) with the principal log.
/// Delta over-estimates the diameter of the projected domain so that
/// Re(log Delta - Log lambda) >= 0 on it, which is what keeps |F| <= 1;
/// nu_br rotates the projected domain into the right half-plane where the
/// principal branch is holomorphic.
struct PeakFunctionSpec {
  CVec p;
  ComplexHyperplane hyperplane;
  ComplexLine line;         // base p, direction b
  Complex transversality;   // sum_j nu_j b_j (nonzero)
  double diameter_bound = 0.0;  // Delta
  Complex branch_dir;           // nu_br, unit modulus
};

/// sigma(z) = (sum_j nu_j (z_j - p_j)) / (sum_j nu_j b_j).
Complex projection_functional(const PeakFunctionSpec& spec, const CVec& z);

/// The principal branch is holomorphic exactly on the half-plane
/// Re(lambda/nu_br) > 0; samples outside it are reported, not evaluated
/// blindly.
bool peak_branch_valid(const PeakFunctionSpec& spec, Complex lambda);

/// f(lambda) as above. lambda = 0 returns the peak value 1 (the limit);
/// w = 0 (|lambda| = Delta on the branch axis) returns the limit 0.
Complex planar_weak_peak(double delta, Complex nu_br, Complex lambda);

/// F(z); projection residues below 1e-12 * Delta are snapped to the peak
/// value 1 so that F is exactly constant on the hyperplane.
Complex peak_value(const PeakFunctionSpec& spec, const CVec& z);

struct PeakBuildOptions {
  int boundary_samples = 256;  // for the diameter estimate
  int grid = 64;               // extreme-test grid
  std::uint64_t seed = 1;
  double delta_override = 0.0;  // 0 = 1.1 x sampled diameter
  double touch_tol = 0.0;
  bool skip_extreme_check = false;
};

/// Assembles the spec at p: H defaults to the tangent hyperplane (for n = 1,
/// to the degenerate {p}), b to the unit vector from the basepoint towards p
/// (which guarantees the line meets the domain), Delta to 1.1 x the diameter
/// of the projected boundary samples, and nu_br to sigma(basepoint)
/// normalized. Errors when p is not extreme for H (unless skipped), when the
/// line misses the domain, or when the transversality factor degenerates.
PeakFunctionSpec build_peak_function(const DomainModel& d, const CVec& p,
                                     std::optional<ComplexHyperplane> h = std::nullopt,
                                     std::optional<CVec> b = std::nullopt,
                                     const PeakBuildOptions& options = {});

struct PeakVerification {
  Verdict verdict = Verdict::not_applicable;
  struct RadiusMargin {
    double radius = 0.0;
    double max_modulus = 0.0;  // M(r) over member samples outside B(p, r)
    double margin = 0.0;       // 1 - M(r)
  };
  std::vector<RadiusMargin> margins;
  int interior_violations = 0;  // valid-branch member samples with |F| >= 1
  int branch_violations = 0;
  int samples_used = 0;
  std::vector<double> limit_trace;  // |F| along z_k = p + 2^{-k}(z0 - p)
  bool limit_dominates = false;     // trace tail exceeds every M(r)
  std::string detail;
};

/// Peak certificate: every member sample has |F| < 1, the shell maxima M(r)
/// stay strictly below 1 for each requested radius, no branch violations, and
/// |F| along the straight approach to p eventually dominates all shells.
PeakVerification verify_peak(const DomainModel& d, const PeakFunctionSpec& spec,
                             const std::vector<double>& radii, int samples,
                             std::uint64_t seed);

struct AdPeakVerification {
  Verdict verdict = Verdict::not_applicable;
  struct DistanceBin {
    double lo = 0.0, hi = 0.0;
    double max_modulus = 0.0;
    int count = 0;
  };
  std::vector<DistanceBin> bins;  // closure samples binned by |z - p|
  int branch_violations = 0;
  int samples_used = 0;
  double limit_value = 0.0;  // |F| at the end of the approach sequence
  std::string detail;
};

/// Closure certificate: |F| on boundary samples and near-boundary shells must
/// stay strictly below 1 in every distance bin beyond tau = 0.01 R, with no
/// branch violations, while the limit along the approach to p reaches 1.
/// Non-normal points (e.g. a point on a slit) fail through branch violations
/// on the far side — that failure mode is the point of the check.
AdPeakVerification verify_ad_peak(const DomainModel& d, const PeakFunctionSpec& spec,
                                  int samples, std::uint64_t seed);

}  // namespace cckit
