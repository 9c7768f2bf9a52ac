#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cckit/types.hpp"

namespace cckit {

inline constexpr int kSmoothInfinity = std::numeric_limits<int>::max();

/// A C^k defining function rho for a domain: negative inside, positive
/// outside, nonvanishing gradient near the boundary. Derivatives are taken
/// over the realified coordinates (Re z_1, Im z_1, ...). Analytic evaluators
/// are optional; central finite differences with step fd_step fill the gaps.
struct DefiningFunction {
  int dim = 1;
  std::function<double(const CVec&)> value;
  std::function<RVec(const CVec&)> grad;  // 2n, optional
  std::function<RMat(const CVec&)> hess;  // 2n x 2n, optional
  double fd_step = 1e-5;
  int smoothness = kSmoothInfinity;  // k in {1, 2, ...}, kSmoothInfinity = C^inf
};

/// A bounded domain in C^n given by a membership oracle, an interior
/// basepoint z0 and a bounding radius R (members lie in B(z0, R)).
/// Level-1 domains additionally carry a DefiningFunction. Domains with
/// zero-measure slits declare them through edge_blocker: it returns true when
/// the straight segment between two member points leaves the domain.
struct DomainModel {
  std::string name;
  int dim = 1;
  std::function<bool(const CVec&)> membership;
  CVec basepoint;
  double bounding_radius = 1.0;
  std::optional<DefiningFunction> defining;
  std::function<bool(const CVec&, const CVec&)> edge_blocker;
  /// Scale-aware boundary tolerance, set by finalize_domain.
  double rho_tol = 1e-8;

  bool level1() const { return defining.has_value(); }
  bool contains(const CVec& z) const { return membership(z); }
  /// Evaluation box for derivative work; generous so near-boundary finite
  /// differences stay legal.
  double box_radius() const { return 1.5 * bounding_radius + 1.0; }
  bool in_box(const CVec& z) const {
    return (z - basepoint).norm() <= box_radius();
  }
};

/// Fills defaults: membership from rho < 0 when absent, and the scale-aware
/// boundary tolerance rho_tol = base * (1 + |grad rho(z0)| * R).
void finalize_domain(DomainModel& d, double rho_tol_base = 1e-8);

struct DomainDerivatives {
  double value = 0.0;
  RVec grad;       // 2n
  CVec wirtinger;  // n
  RMat hess;       // 2n x 2n, symmetrized
};

/// Value, real gradient, Wirtinger gradient and symmetrized real Hessian of
/// the defining function at z. Level-1 only; z must lie in the evaluation box.
DomainDerivatives derivatives(const DomainModel& d, const CVec& z);

/// Orthonormal basis of the kernel of the complex-linear functional
/// X -> sum_j nu_j X_j (no conjugation), i.e. the Hermitian orthocomplement of
/// conj(nu). Deterministic: built from the standard basis vectors most
/// orthogonal to conj(nu), so e.g. nu = (1,0) yields exactly {(0,1)}.
std::vector<CVec> functional_kernel_basis(const CVec& nu);

/// Orthonormal complex basis of the complex tangent space at a boundary
/// point: the kernel of X -> sum_j (d rho/d z_j)(z) X_j.
std::vector<CVec> complex_tangent_basis(const DomainModel& d, const CVec& z);

/// Real Hessian quadratic form applied to the realification of X.
double hessian_form(const DomainModel& d, const CVec& z, const CVec& X);

/// Minimum over sampled boundary points of the smallest eigenvalue of the
/// real Hessian restricted to the realified complex tangent space. A positive
/// value certifies strong linear convexity on the sample with margin c.
/// For n = 1 the complex tangent space is {0}; returns +infinity (vacuous).
double slc_margin(const DomainModel& d, int num_samples, std::uint64_t seed);

/// Boundary point on the ray z0 + t*direction, via bisection on membership
/// (Level-0) or the sign of rho (Level-1).
CVec boundary_project(const DomainModel& d, const CVec& direction);

/// count boundary points via boundary_project over seeded uniform directions.
std::vector<CVec> sample_boundary(const DomainModel& d, int count, std::uint64_t seed);

/// Rejection-sampled interior points from B(z0, R); deterministic per seed.
std::vector<CVec> sample_interior(const DomainModel& d, int count, std::uint64_t seed);

}  // namespace cckit
