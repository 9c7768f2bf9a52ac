#include "cckit/shadow.hpp"

#include <cmath>
#include <cstring>
#include <vector>

#include "cckit/parallel.hpp"
#include "cckit/rng.hpp"

namespace cckit {
namespace {

std::string cache_key(const CVec& z) {
  std::string key(sizeof(double) * 2 * z.size(), '\0');
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    const double re = z[j].real(), im = z[j].imag();
    std::memcpy(key.data() + sizeof(double) * (2 * j), &re, sizeof(double));
    std::memcpy(key.data() + sizeof(double) * (2 * j + 1), &im, sizeof(double));
  }
  return key;
}

RVec fiber_gradient(const ShadowModel& s, const CVec& z, const CVec& w) {
  return derivatives(s.source, s.combined(z, w)).grad.tail(2 * s.fiber_dim);
}

}  // namespace

ShadowModel make_shadow(DomainModel source, int base_dim, int fiber_dim,
                        SolverSettings settings) {
  if (base_dim < 1 || fiber_dim < 1)
    throw Error("make_shadow: split dimensions must be >= 1");
  if (base_dim + fiber_dim != source.dim)
    throw Error("make_shadow: split does not add up to the source dimension");
  if (!source.level1())
    throw CapabilityError("make_shadow: source must have a defining function");
  settings.validate();
  ShadowModel s;
  s.source = std::move(source);
  s.base_dim = base_dim;
  s.fiber_dim = fiber_dim;
  s.settings = settings;
  s.cache = std::make_shared<FiberCache>();
  return s;
}

CVec fiber_critical_newton(const ShadowModel& s, const CVec& z, const CVec& w0) {
  const int m2 = 2 * s.fiber_dim;
  const double box = 1.5 * s.source.bounding_radius + 0.5;
  CVec w = w0;
  RVec g = fiber_gradient(s, z, w);
  for (int iter = 0; iter < s.settings.newton_max_iter; ++iter) {
    if (g.norm() <= s.settings.newton_tol) {
      const RMat hww =
          derivatives(s.source, s.combined(z, w)).hess.bottomRightCorner(m2, m2);
      Eigen::SelfAdjointEigenSolver<RMat> es(hww);
      if (es.eigenvalues().minCoeff() <= 0)
        throw ConvergenceError(
            "fiber_critical_newton: fiber Hessian block is not positive "
            "definite at the critical point");
      return w;
    }
    const RMat hww =
        derivatives(s.source, s.combined(z, w)).hess.bottomRightCorner(m2, m2);
    Eigen::LDLT<RMat> ldlt(hww);
    if (ldlt.info() != Eigen::Success)
      throw ConvergenceError("fiber_critical_newton: singular fiber Hessian block");
    const RVec step = ldlt.solve(-g);
    bool improved = false;
    double scale = 1.0;
    for (int halving = 0; halving < 25; ++halving, scale *= 0.5) {
      const CVec w_try = unrealify(RVec(realify(w) + scale * step));
      if ((w_try - s.fiber_center()).norm() > box) continue;
      const RVec g_try = fiber_gradient(s, z, w_try);
      if (g_try.norm() < g.norm()) {
        w = w_try;
        g = g_try;
        improved = true;
        break;
      }
    }
    if (!improved)
      throw ConvergenceError("fiber_critical_newton: damping failed to reduce "
                             "the fiber residual");
  }
  throw ConvergenceError("fiber_critical_newton: no convergence within "
                         "newton_max_iter iterations");
}

std::pair<CVec, double> fiber_global_min(const ShadowModel& s, const CVec& z) {
  const std::string key = cache_key(z);
  bool cached = false;
  CVec cached_w;
  {
    std::lock_guard<std::mutex> lk(s.cache->mu);
    auto it = s.cache->map.find(key);
    if (it != s.cache->map.end()) {
      cached = true;
      cached_w = it->second;
    }
  }
  // Re-verify the cached residual before trusting it.
  if (cached && fiber_gradient(s, z, cached_w).norm() <= s.settings.newton_tol)
    return {cached_w, s.source.defining->value(s.combined(z, cached_w))};

  // 8 probe points per real fiber axis; strong fiber convexity near the
  // boundary makes any cell of the coarse grid a valid Newton basin, and the
  // grid keeps the polish from wandering far from the minimum elsewhere.
  const int per_axis = 8;
  const int m = s.fiber_dim;
  const double r = s.source.bounding_radius;
  const CVec center = s.fiber_center();
  std::size_t total = 1;
  for (int a = 0; a < 2 * m; ++a) total *= per_axis;
  CVec best;
  double best_val = std::numeric_limits<double>::infinity();
  const auto& value = s.source.defining->value;
  for (std::size_t flat = 0; flat < total; ++flat) {
    RVec x(2 * m);
    std::size_t rest = flat;
    for (int a = 0; a < 2 * m; ++a) {
      const int idx = static_cast<int>(rest % per_axis);
      rest /= per_axis;
      x[a] = -r + (2.0 * r) * (idx + 0.5) / per_axis;
    }
    CVec w = center + unrealify(x);
    const double v = value(s.combined(z, w));
    if (v < best_val) {
      best_val = v;
      best = w;
    }
  }

  const CVec w = fiber_critical_newton(s, z, best);
  const double rho = value(s.combined(z, w));
  {
    std::lock_guard<std::mutex> lk(s.cache->mu);
    s.cache->map[key] = w;
  }
  return {w, rho};
}

ShadowDerivs shadow_rho_derivs(const ShadowModel& s, const CVec& z) {
  const auto [w, rho] = fiber_global_min(s, z);
  const DomainDerivatives der = derivatives(s.source, s.combined(z, w));
  const int n2 = 2 * s.base_dim, m2 = 2 * s.fiber_dim;
  ShadowDerivs out;
  out.value = rho;
  out.grad = der.grad.head(n2);
  out.wirtinger = wirtinger_from_real(out.grad);
  const RMat hzz = der.hess.topLeftCorner(n2, n2);
  const RMat hzw = der.hess.topRightCorner(n2, m2);
  const RMat hww = der.hess.bottomRightCorner(m2, m2);
  Eigen::LDLT<RMat> ldlt(hww);
  if (ldlt.info() != Eigen::Success)
    throw ConvergenceError("shadow_rho_derivs: singular fiber Hessian block");
  RMat schur = hzz - hzw * ldlt.solve(hzw.transpose());
  out.hess = 0.5 * (schur + schur.transpose());
  out.hess_x0 = hzz;
  return out;
}

CVec boundary_lift(const ShadowModel& s, const CVec& z) {
  const auto [w, rho] = fiber_global_min(s, z);
  const double tol = 10.0 * s.source.rho_tol;
  if (std::abs(rho) > tol)
    throw Error("boundary_lift: point is not on the shadow boundary");
  return s.combined(z, w);
}

TangentCompatReport tangent_compat(const ShadowModel& s, const CVec& z) {
  const auto [w, rho] = fiber_global_min(s, z);
  (void)rho;
  const DomainDerivatives der = derivatives(s.source, s.combined(z, w));
  const int n2 = 2 * s.base_dim, m2 = 2 * s.fiber_dim;

  TangentCompatReport rep;
  rep.fiber_grad_norm = der.grad.tail(m2).norm();
  Eigen::SelfAdjointEigenSolver<RMat> es(der.hess.bottomRightCorner(m2, m2));
  rep.fiber_block_min_eig = es.eigenvalues().minCoeff();

  // Independent check of the gradient identity: finite differences of the
  // composed rho_tilde against the z-block of grad rho at the lift.
  const double h = s.settings.fd_step;
  const RVec zr = realify(z);
  for (int k = 0; k < n2; ++k) {
    RVec zp = zr, zm = zr;
    zp[k] += h;
    zm[k] -= h;
    const double fd = (fiber_global_min(s, unrealify(zp)).second -
                       fiber_global_min(s, unrealify(zm)).second) /
                      (2.0 * h);
    rep.zgrad_dev = std::max(rep.zgrad_dev, std::abs(fd - der.grad[k]));
  }
  return rep;
}

namespace {

/// Shadow boundary point in direction dir from the base point, by bisection
/// on the sign of rho_tilde.
CVec shadow_boundary_point(const ShadowModel& s, const CVec& dir) {
  const CVec z0 = s.base_point();
  const double R = s.source.bounding_radius;
  double lo = 0.0, hi = R * (1.0 + 1e-3);
  if (fiber_global_min(s, z0 + hi * dir).second <= 0)
    throw Error("shadow_boundary_point: ray never exits the shadow");
  for (int it = 0; it < 64; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (fiber_global_min(s, z0 + mid * dir).second < 0)
      lo = mid;
    else
      hi = mid;
  }
  return z0 + hi * dir;
}

}  // namespace

ShadowSlcReport shadow_slc_verify(const ShadowModel& s, int num_samples,
                                  std::uint64_t seed) {
  ShadowSlcReport rep;
  rep.samples = num_samples;
  rep.source_margin = slc_margin(s.source, num_samples, seed);
  if (s.base_dim == 1) {
    // Complex hyperplanes in C are points: no tangent directions to test.
    rep.vacuous = true;
    rep.verdict = Verdict::pass;
    rep.shadow_margin = std::numeric_limits<double>::infinity();
    rep.x0_margin = std::numeric_limits<double>::infinity();
    return rep;
  }

  Rng rng(seed + 1);
  std::vector<CVec> dirs(num_samples);
  for (int i = 0; i < num_samples; ++i) dirs[i] = rng.unit_direction(s.base_dim);

  std::vector<double> schur_min(num_samples), x0_min(num_samples);
  parallel_for(num_samples, [&](int i) {
    const CVec z = shadow_boundary_point(s, dirs[i]);
    const ShadowDerivs der = shadow_rho_derivs(s, z);
    const std::vector<CVec> basis = functional_kernel_basis(der.wirtinger);
    const int k = static_cast<int>(basis.size());
    RMat b(2 * s.base_dim, 2 * k);
    for (int j = 0; j < k; ++j) {
      b.col(2 * j) = realify(basis[j]);
      b.col(2 * j + 1) = realify(CVec(Complex(0, 1) * basis[j]));
    }
    const RMat restricted = b.transpose() * der.hess * b;
    Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (restricted + restricted.transpose()));
    schur_min[i] = es.eigenvalues().minCoeff();
    const RMat restricted0 = b.transpose() * der.hess_x0 * b;
    Eigen::SelfAdjointEigenSolver<RMat> es0(0.5 * (restricted0 + restricted0.transpose()));
    x0_min[i] = es0.eigenvalues().minCoeff();
  });

  rep.shadow_margin = *std::min_element(schur_min.begin(), schur_min.end());
  rep.x0_margin = *std::min_element(x0_min.begin(), x0_min.end());
  rep.verdict = rep.shadow_margin > 0 ? Verdict::pass : Verdict::fail;
  return rep;
}

DomainModel shadow_domain(const ShadowModel& s) {
  DomainModel d;
  d.name = s.source.name + "_shadow";
  d.dim = s.base_dim;
  d.basepoint = s.base_point();
  d.bounding_radius = s.source.bounding_radius;
  DefiningFunction f;
  f.dim = s.base_dim;
  f.fd_step = s.settings.fd_step;
  f.smoothness = s.source.defining->smoothness;
  const ShadowModel shared = s;  // copies share the fiber cache
  f.value = [shared](const CVec& z) { return fiber_global_min(shared, z).second; };
  f.grad = [shared](const CVec& z) { return shadow_rho_derivs(shared, z).grad; };
  f.hess = [shared](const CVec& z) { return shadow_rho_derivs(shared, z).hess; };
  d.defining = std::move(f);
  finalize_domain(d);
  return d;
}

DomainModel shadow_mask(const DomainModel& source, int base_dim, int fiber_dim,
                        int resolution, int samples, std::uint64_t seed) {
  if (base_dim < 1 || fiber_dim < 1 || base_dim + fiber_dim != source.dim)
    throw Error("shadow_mask: bad split");
  if (base_dim > 2) throw Error("shadow_mask: base dimension must be 1 or 2");
  if (samples < 8) throw Error("shadow_mask: need at least 8 fiber samples");
  if (resolution < 32) throw Error("shadow_mask: resolution must be >= 32");

  const double r = source.bounding_radius;
  const CVec fiber_center = source.basepoint.tail(fiber_dim);
  Rng rng(seed);
  std::vector<CVec> probes(samples);
  for (int i = 0; i < samples; ++i) {
    CVec w(fiber_dim);
    for (int j = 0; j < fiber_dim; ++j)
      w[j] = fiber_center[j] + Complex(rng.uniform(-r, r), rng.uniform(-r, r));
    probes[i] = w;
  }

  auto combined = [base_dim, fiber_dim](const CVec& z, const CVec& w) {
    CVec zw(base_dim + fiber_dim);
    zw << z, w;
    return zw;
  };

  DomainModel d;
  d.name = source.name + "_shadow_mask";
  d.dim = base_dim;
  d.basepoint = source.basepoint.head(base_dim);
  d.bounding_radius = r;

  if (source.level1()) {
    const auto value = source.defining->value;
    const double min_step = 2.0 * r / resolution;
    d.membership = [=](const CVec& z) {
      // Best seeded probe, then coordinate-descent refinement on rho.
      CVec best = probes[0];
      double best_val = std::numeric_limits<double>::infinity();
      for (const CVec& w : probes) {
        const double v = value(combined(z, w));
        if (v < best_val) {
          best_val = v;
          best = w;
        }
      }
      if (best_val < 0) return true;
      double step = r / 4.0;
      RVec x = realify(best);
      for (int round = 0; round < 4000 && step >= min_step; ++round) {
        bool moved = false;
        for (int a = 0; a < 2 * fiber_dim; ++a) {
          for (double dir : {step, -step}) {
            RVec xt = x;
            xt[a] += dir;
            const double v = value(combined(z, unrealify(xt)));
            if (v < best_val) {
              best_val = v;
              x = xt;
              moved = true;
            }
          }
        }
        if (best_val < 0) return true;
        if (!moved) step *= 0.5;
      }
      return best_val < 0;
    };
  } else {
    const auto membership = source.membership;
    d.membership = [=](const CVec& z) {
      for (const CVec& w : probes)
        if (membership(combined(z, w))) return true;
      return false;
    };
  }
  finalize_domain(d);
  return d;
}

}  // namespace cckit
