#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>

#include "cckit/domain.hpp"

namespace cckit {

/// Solved fiber critical points z -> phi(z), shared between copies of a
/// ShadowModel. Concurrent writers for the same key agree to solver tolerance,
/// so last-write-wins is safe; residuals are re-verified on read.
struct FiberCache {
  std::mutex mu;
  std::unordered_map<std::string, CVec> map;
};

/// Projection split C^{n+m} -> C^n of a Level-1 source domain. The shadow is
/// the image of the source; its induced defining function is
/// rho_tilde(z) = min over the fiber of rho(z, .), attained where the fiber
/// gradient vanishes.
struct ShadowModel {
  DomainModel source;
  int base_dim = 1;   // n
  int fiber_dim = 1;  // m
  SolverSettings settings;
  std::shared_ptr<FiberCache> cache;

  CVec base_point() const { return source.basepoint.head(base_dim); }
  CVec fiber_center() const { return source.basepoint.tail(fiber_dim); }
  CVec combined(const CVec& z, const CVec& w) const {
    CVec zw(base_dim + fiber_dim);
    zw << z, w;
    return zw;
  }
};

ShadowModel make_shadow(DomainModel source, int base_dim, int fiber_dim,
                        SolverSettings settings = {});

/// Damped Newton on the fiber gradient (the 2m-dimensional w-block of the
/// real gradient of rho) from w0, with the w-block Hessian as Jacobian and
/// step halving on residual increase. The solution's Hessian block must be
/// positive definite — an indefinite block signals loss of fiber convexity
/// and throws.
CVec fiber_critical_newton(const ShadowModel& s, const CVec& z, const CVec& w0);

/// Coarse 8-points-per-real-axis scan of the fiber box followed by Newton
/// polish; returns the minimizing w and rho_tilde(z) = rho(z, w). Results are
/// cached per z.
std::pair<CVec, double> fiber_global_min(const ShadowModel& s, const CVec& z);

struct ShadowDerivs {
  double value = 0.0;
  RVec grad;       // 2n; equals the z-block of grad rho at (z, phi(z))
  CVec wirtinger;  // n
  /// True Hessian of the composition: the Schur complement
  /// H_zz - H_zw H_ww^{-1} H_wz of the source Hessian at (z, phi(z)).
  RMat hess;
  /// The plain z-block H_zz, i.e. the quadratic form on extensions (X, 0).
  /// Bounds via either form agree in sign on complex tangents because the
  /// Schur value is the infimum of the full form over fiber extensions.
  RMat hess_x0;
};

ShadowDerivs shadow_rho_derivs(const ShadowModel& s, const CVec& z);

/// Phi(z) = (z, phi(z)) for z on the shadow boundary; the projection of the
/// lift is z by construction.
CVec boundary_lift(const ShadowModel& s, const CVec& z);

struct TangentCompatReport {
  /// |d rho / d w| at the lift — fiber directions are complex-tangent there.
  double fiber_grad_norm = 0.0;
  /// Max abs deviation between the z-block gradient of rho at the lift and an
  /// independent finite difference of the composed rho_tilde.
  double zgrad_dev = 0.0;
  /// Smallest eigenvalue of the w-block Hessian at the lift (the lower bound
  /// c restricted to fiber directions).
  double fiber_block_min_eig = 0.0;
};

TangentCompatReport tangent_compat(const ShadowModel& s, const CVec& z);

struct ShadowSlcReport {
  Verdict verdict = Verdict::not_applicable;
  bool vacuous = false;  // n = 1: no complex tangent directions in the shadow
  double source_margin = 0.0;  // c
  double shadow_margin = 0.0;  // c~ from the Schur form
  double x0_margin = 0.0;      // same scan with the (X,0) form
  int samples = 0;
};

/// Certifies strong linear convexity of the shadow: samples shadow boundary
/// points, restricts the Schur Hessian to the complex tangent space of
/// rho_tilde and takes the worst eigenvalue. Reported next to the source
/// margin (the property being certified: the shadow inherits positivity).
ShadowSlcReport shadow_slc_verify(const ShadowModel& s, int num_samples,
                                  std::uint64_t seed);

/// The shadow as a Level-1 DomainModel whose defining function is the solver's
/// rho_tilde (gradient and Hessian analytic via the fiber solve). Feeds the
/// classification and slicing machinery unchanged.
DomainModel shadow_domain(const ShadowModel& s);

/// Oracle-level shadow membership for sources without usable derivatives:
/// z is a member when some probed fiber point lies in the source. Level-1
/// sources refine the best seeded fiber sample by pattern search on rho down
/// to a step of 2R/resolution; Level-0 sources use the seeded samples alone.
/// The result is a Level-0 DomainModel suitable for slice-topology and
/// normality runs.
DomainModel shadow_mask(const DomainModel& source, int base_dim, int fiber_dim,
                        int resolution, int samples, std::uint64_t seed);

}  // namespace cckit
