#include "cckit/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cckit/rng.hpp"

namespace cckit {

namespace {

RVec fd_gradient(const DefiningFunction& f, const CVec& z, double h) {
  const int n2 = 2 * f.dim;
  RVec x = realify(z);
  RVec g(n2);
  for (int k = 0; k < n2; ++k) {
    RVec xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    g[k] = (f.value(unrealify(xp)) - f.value(unrealify(xm))) / (2.0 * h);
  }
  return g;
}

RMat fd_hessian(const DefiningFunction& f, const CVec& z, double h) {
  const int n2 = 2 * f.dim;
  RVec x = realify(z);
  RMat H(n2, n2);
  if (f.grad) {
    // differentiate the analytic gradient
    for (int k = 0; k < n2; ++k) {
      RVec xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      H.col(k) = (f.grad(unrealify(xp)) - f.grad(unrealify(xm))) / (2.0 * h);
    }
  } else {
    for (int k = 0; k < n2; ++k) {
      for (int l = k; l < n2; ++l) {
        RVec xpp = x, xpm = x, xmp = x, xmm = x;
        xpp[k] += h; xpp[l] += h;
        xpm[k] += h; xpm[l] -= h;
        xmp[k] -= h; xmp[l] += h;
        xmm[k] -= h; xmm[l] -= h;
        const double v = (f.value(unrealify(xpp)) - f.value(unrealify(xpm)) -
                          f.value(unrealify(xmp)) + f.value(unrealify(xmm))) /
                         (4.0 * h * h);
        H(k, l) = v;
        H(l, k) = v;
      }
    }
  }
  return 0.5 * (H + H.transpose());
}

}  // namespace

void finalize_domain(DomainModel& d, double rho_tol_base) {
  if (d.basepoint.size() != d.dim) throw Error("finalize_domain: basepoint dimension mismatch");
  if (!(d.bounding_radius > 0)) throw Error("finalize_domain: bounding radius must be positive");
  if (!d.membership) {
    if (!d.level1()) throw Error("finalize_domain: need membership or defining function");
    const DefiningFunction rho = *d.defining;
    d.membership = [rho](const CVec& z) { return rho.value(z) < 0.0; };
  }
  double grad_scale = 0.0;
  if (d.level1()) {
    const DefiningFunction& f = *d.defining;
    RVec g = f.grad ? f.grad(d.basepoint) : fd_gradient(f, d.basepoint, f.fd_step);
    grad_scale = g.norm();
  }
  d.rho_tol = rho_tol_base * (1.0 + grad_scale * d.bounding_radius);
  if (!d.membership(d.basepoint)) throw Error("finalize_domain: basepoint is not a member of " + d.name);
}

DomainDerivatives derivatives(const DomainModel& d, const CVec& z) {
  if (!d.level1())
    throw CapabilityError("derivatives: domain '" + d.name + "' has no defining function");
  if (z.size() != d.dim) throw Error("derivatives: dimension mismatch");
  if (!d.in_box(z)) throw Error("derivatives: point outside the evaluation box");
  const DefiningFunction& f = *d.defining;
  DomainDerivatives out;
  out.value = f.value(z);
  out.grad = f.grad ? f.grad(z) : fd_gradient(f, z, f.fd_step);
  if (f.hess) {
    RMat H = f.hess(z);
    out.hess = 0.5 * (H + H.transpose());
  } else {
    out.hess = fd_hessian(f, z, f.fd_step);
  }
  out.wirtinger = wirtinger_from_real(out.grad);
  return out;
}

std::vector<CVec> functional_kernel_basis(const CVec& nu) {
  const double gn = nu.norm();
  if (gn < 1e-12) throw Error("functional_kernel_basis: vanishing functional");
  // kernel of X -> sum_j nu_j X_j equals the Hermitian orthocomplement of conj(nu)
  CVec v = nu.conjugate() / gn;
  const int n = static_cast<int>(nu.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(v[a]) < std::abs(v[b]); });
  std::vector<CVec> basis;
  basis.reserve(n - 1);
  for (int idx : order) {
    if (static_cast<int>(basis.size()) == n - 1) break;
    CVec cand = CVec::Zero(n);
    cand[idx] = 1.0;
    cand -= v * v.dot(cand);
    for (const CVec& b : basis) cand -= b * b.dot(cand);
    const double nn = cand.norm();
    if (nn < 1e-8) continue;
    basis.push_back(cand / nn);
  }
  if (static_cast<int>(basis.size()) != n - 1)
    throw Error("functional_kernel_basis: failed to complete the basis");
  return basis;
}

std::vector<CVec> complex_tangent_basis(const DomainModel& d, const CVec& z) {
  DomainDerivatives der = derivatives(d, z);
  if (std::abs(der.value) > 10.0 * d.rho_tol)
    throw Error("complex_tangent_basis: point is not on the boundary");
  return functional_kernel_basis(der.wirtinger);
}

double hessian_form(const DomainModel& d, const CVec& z, const CVec& X) {
  if (X.size() != d.dim) throw Error("hessian_form: dimension mismatch");
  DomainDerivatives der = derivatives(d, z);
  RVec xr = realify(X);
  return xr.dot(der.hess * xr);
}

double slc_margin(const DomainModel& d, int num_samples, std::uint64_t seed) {
  if (d.dim == 1) return std::numeric_limits<double>::infinity();  // vacuous
  std::vector<CVec> pts = sample_boundary(d, num_samples, seed);
  double margin = std::numeric_limits<double>::infinity();
  for (const CVec& z : pts) {
    DomainDerivatives der = derivatives(d, z);
    std::vector<CVec> basis = complex_tangent_basis(d, z);
    const int k = static_cast<int>(basis.size());
    RMat B(2 * d.dim, 2 * k);
    for (int j = 0; j < k; ++j) {
      B.col(2 * j) = realify(basis[j]);
      B.col(2 * j + 1) = realify(CVec(Complex(0, 1) * basis[j]));
    }
    RMat M = B.transpose() * der.hess * B;
    Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (M + M.transpose()));
    margin = std::min(margin, es.eigenvalues().minCoeff());
  }
  return margin;
}

CVec boundary_project(const DomainModel& d, const CVec& direction) {
  const double dn = direction.norm();
  if (!(dn > 0)) throw Error("boundary_project: zero direction");
  CVec dir = direction / dn;
  const double R = d.bounding_radius;
  double t_hi = R * (1.0 + 1e-3);
  if (d.contains(d.basepoint + t_hi * dir))
    throw Error("boundary_project: ray never exits the bounding ball (bad R for '" + d.name + "')");
  double t_lo = 0.0;
  // bisection on membership; ~60 halvings put the bracket far below 1e-9
  for (int it = 0; it < 64; ++it) {
    const double mid = 0.5 * (t_lo + t_hi);
    if (d.contains(d.basepoint + mid * dir))
      t_lo = mid;
    else
      t_hi = mid;
  }
  return d.basepoint + t_hi * dir;
}

std::vector<CVec> sample_boundary(const DomainModel& d, int count, std::uint64_t seed) {
  if (count < 1) throw Error("sample_boundary: count must be >= 1");
  Rng rng(seed);
  std::vector<CVec> dirs(count);
  for (int i = 0; i < count; ++i) dirs[i] = rng.unit_direction(d.dim);
  std::vector<CVec> out(count);
  for (int i = 0; i < count; ++i) out[i] = boundary_project(d, dirs[i]);
  return out;
}

std::vector<CVec> sample_interior(const DomainModel& d, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CVec> out;
  out.reserve(count);
  const double R = d.bounding_radius;
  int guard = 0;
  while (static_cast<int>(out.size()) < count) {
    CVec z(d.dim);
    for (int j = 0; j < d.dim; ++j)
      z[j] = d.basepoint[j] + Complex(rng.uniform(-R, R), rng.uniform(-R, R));
    if (d.contains(z)) out.push_back(z);
    if (++guard > 1000 * count + 100000)
      throw Error("sample_interior: rejection sampling failed for '" + d.name + "'");
  }
  return out;
}

}  // namespace cckit
