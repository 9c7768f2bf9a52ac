#include "cckit/classify.hpp"

#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

namespace cckit {
namespace {

/// Per-axis sample count for hyperplane grids: n-1 complex parameters means
/// 2(n-1) nested real axes, so n = 3 must be capped to stay at desk scale.
int effective_grid(int grid, int dim) {
  if (grid < 32) throw Error("hyperplane grid must be >= 32");
  if (dim <= 2) return grid;
  return std::min(grid, 20);
}

struct HyperplaneGrid {
  std::vector<CVec> points;
  double step = 0.0;  // real-axis spacing, tau default uses it
};

HyperplaneGrid hyperplane_grid(const DomainModel& d, const ComplexHyperplane& h,
                               int grid) {
  HyperplaneGrid out;
  const double extent = d.bounding_radius + (h.anchor - d.basepoint).norm();
  if (d.dim == 1) {  // hyperplanes in C are points
    out.points.push_back(h.anchor);
    out.step = 2.0 * extent / (grid - 1);
    return out;
  }
  const std::vector<CVec> basis = functional_kernel_basis(h.normal);
  const int g = effective_grid(grid, d.dim);
  const int axes = 2 * (d.dim - 1);
  out.step = 2.0 * extent / (g - 1);
  std::size_t total = 1;
  for (int a = 0; a < axes; ++a) total *= g;
  out.points.reserve(total);
  std::vector<int> idx(axes, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    CVec q = h.anchor;
    for (int a = 0; a < axes / 2; ++a) {
      const double re = -extent + idx[2 * a] * out.step;
      const double im = -extent + idx[2 * a + 1] * out.step;
      q += Complex(re, im) * basis[a];
    }
    out.points.push_back(q);
    for (int a = 0; a < axes; ++a) {
      if (++idx[a] < g) break;
      idx[a] = 0;
    }
  }
  return out;
}

/// Distance (along the straight segment towards the basepoint) at which a
/// non-member q first meets the domain; infinity when the closure is farther
/// than the whole segment. Used as the Level-0 "touches the closure" probe.
double closure_gap(const DomainModel& d, const CVec& q) {
  if (d.contains(q)) return 0.0;
  const CVec seg = d.basepoint - q;
  const double len = seg.norm();
  if (len < 1e-15) return 0.0;
  double lo = 0.0, hi = 1.0;  // membership false at lo, true at hi
  if (!d.contains(d.basepoint)) return std::numeric_limits<double>::infinity();
  for (int it = 0; it < 48; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (d.contains(q + mid * seg))
      hi = mid;
    else
      lo = mid;
  }
  return hi * len;
}

bool touches_closure(const DomainModel& d, const CVec& q, double tau) {
  if (d.level1()) return d.defining->value(q) <= d.rho_tol;
  return closure_gap(d, q) <= tau;
}

}  // namespace

ComplexHyperplane tangent_hyperplane(const DomainModel& d, const CVec& p) {
  DomainDerivatives der = derivatives(d, p);
  if (std::abs(der.value) > 10.0 * d.rho_tol)
    throw Error("tangent_hyperplane: point is not on the boundary");
  if (der.wirtinger.norm() < 1e-12)
    throw Error("tangent_hyperplane: vanishing gradient at the point");
  return ComplexHyperplane(p, der.wirtinger);
}

AvoidanceResult hyperplane_avoids(const DomainModel& d, const ComplexHyperplane& h,
                                  int grid) {
  AvoidanceResult res;
  res.avoids = true;
  for (const CVec& q : hyperplane_grid(d, h, grid).points) {
    if (d.contains(q)) {
      res.avoids = false;
      res.witness = q;
      break;
    }
  }
  return res;
}

TriResult extreme_test(const DomainModel& d, const CVec& p, const ComplexHyperplane& h,
                       int grid, double touch_tol) {
  TriResult res;
  const AvoidanceResult avoid = hyperplane_avoids(d, h, grid);
  if (!avoid.avoids) {
    res.verdict = Verdict::not_applicable;
    res.witness = avoid.witness;
    res.detail = "hyperplane cuts the domain; not a support candidate";
    return res;
  }
  const HyperplaneGrid hg = hyperplane_grid(d, h, grid);
  const double tau = touch_tol > 0 ? touch_tol : 10.0 * hg.step;
  res.tol = tau;
  double worst = 0.0;
  for (const CVec& q : hg.points) {
    if (!touches_closure(d, q, tau)) continue;
    const double dist = (q - p).norm();
    if (dist > tau && dist > worst) {
      worst = dist;
      res.witness = q;
    }
  }
  res.verdict = res.witness ? Verdict::fail : Verdict::pass;
  std::ostringstream os;
  os << "touch scan: " << hg.points.size() << " hyperplane samples, tau = " << tau;
  res.detail = os.str();
  return res;
}

TriResult strict_test(const DomainModel& d, const CVec& p, int grid, double touch_tol) {
  return extreme_test(d, p, tangent_hyperplane(d, p), grid, touch_tol);
}

TriResult line_touch_test(const DomainModel& d, const CVec& p, const ComplexLine& l,
                          int grid, double touch_tol) {
  if (l.dist(p) > 1e-8)
    throw Error("line_touch_test: line does not pass through the point");
  if (grid < 32) throw Error("line_touch_test: grid must be >= 32");
  TriResult res;
  const double extent = d.bounding_radius + (p - d.basepoint).norm();
  const int g = grid;
  const double step = 2.0 * extent / (g - 1);
  const double tau = touch_tol > 0 ? touch_tol : 10.0 * step;
  res.tol = tau;
  const Complex zeta_p = l.param(p);
  double worst = 0.0;
  for (int iy = 0; iy < g; ++iy) {
    for (int ix = 0; ix < g; ++ix) {
      const Complex zeta(-extent + ix * step, -extent + iy * step);
      const CVec q = l.at(zeta_p + zeta);
      if (d.contains(q)) {
        res.verdict = Verdict::not_applicable;
        res.witness = q;
        res.detail = "line meets the domain; touch test does not apply";
        return res;
      }
      if (!touches_closure(d, q, tau)) continue;
      const double dist = (q - p).norm();
      if (dist > tau && dist > worst) {
        worst = dist;
        res.witness = q;
      }
    }
  }
  res.verdict = res.witness ? Verdict::fail : Verdict::pass;
  std::ostringstream os;
  os << "touch scan: " << g * g << " line samples, tau = " << tau;
  res.detail = os.str();
  return res;
}

namespace {

struct NormalityGrid {
  int res = 0;            // per-axis
  int axes = 0;           // 2n
  double step = 0.0;
  std::vector<std::int32_t> component;  // -1 outside D, else component id
  std::vector<float> dist;              // |cell - p|
  int component_count = 0;
};

int clamp_normality_resolution(int resolution, int dim) {
  if (resolution < 2) throw Error("normality_test: resolution must be >= 2");
  if (dim == 1) return resolution;
  if (dim == 2) return std::min(resolution, 24);
  if (dim == 3) return std::min(resolution, 10);
  throw Error("normality_test: grids beyond C^3 are not supported");
}

NormalityGrid build_normality_grid(const DomainModel& d, const CVec& p,
                                   double u_radius, int resolution) {
  NormalityGrid g;
  g.res = clamp_normality_resolution(resolution, d.dim);
  g.axes = 2 * d.dim;
  g.step = 2.0 * u_radius / (g.res - 1);
  std::size_t total = 1;
  for (int a = 0; a < g.axes; ++a) total *= g.res;
  if (total > 50'000'000) throw Error("normality_test: grid too large");
  g.component.assign(total, -1);
  g.dist.assign(total, 0.0f);

  const RVec pr = realify(p);
  std::vector<std::int64_t> strides(g.axes);
  strides[0] = 1;
  for (int a = 1; a < g.axes; ++a) strides[a] = strides[a - 1] * g.res;

  auto cell_point = [&](std::size_t flat) {
    RVec x(g.axes);
    for (int a = 0; a < g.axes; ++a) {
      const int idx = static_cast<int>((flat / strides[a]) % g.res);
      x[a] = pr[a] - u_radius + idx * g.step;
    }
    return unrealify(x);
  };

  std::vector<std::uint8_t> member(total, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    const CVec z = cell_point(flat);
    const double dist = (z - p).norm();
    if (dist > u_radius || !d.contains(z)) continue;
    member[flat] = 1;
    g.dist[flat] = static_cast<float>(dist);
  }

  std::queue<std::size_t> q;
  for (std::size_t start = 0; start < total; ++start) {
    if (!member[start] || g.component[start] >= 0) continue;
    g.component[start] = g.component_count;
    q.push(start);
    while (!q.empty()) {
      const std::size_t cur = q.front();
      q.pop();
      for (int a = 0; a < g.axes; ++a) {
        const int idx = static_cast<int>((cur / strides[a]) % g.res);
        for (int dir : {-1, 1}) {
          if (idx + dir < 0 || idx + dir >= g.res) continue;
          const std::size_t nx = cur + dir * strides[a];
          if (!member[nx] || g.component[nx] >= 0) continue;
          if (d.edge_blocker && d.edge_blocker(cell_point(cur), cell_point(nx)))
            continue;
          g.component[nx] = g.component[cur];
          q.push(nx);
        }
      }
    }
    ++g.component_count;
  }
  return g;
}

NormalityResult normality_impl(const DomainModel& d, const CVec& p, double u_radius,
                               int resolution, bool strong) {
  if (!(u_radius > 0)) throw Error("normality_test: U radius must be positive");
  NormalityResult res;
  res.u_radius = u_radius;
  NormalityGrid g = build_normality_grid(d, p, u_radius, resolution);
  res.resolution = g.res;
  if (g.component_count == 0)
    throw Error("normality_test: no member cells in B(p,U) at this resolution");

  const std::size_t total = g.component.size();
  for (int j = 1; j <= 6; ++j) {
    const double v = u_radius / std::pow(2.0, j);
    if (v < 2.0 * g.step) break;  // below certificate granularity
    // All member cells within V must lie in one component of the U-graph; the
    // strong variant additionally floods the V-cells' own induced graph.
    int comp = -1;
    bool ok = true, any = false;
    std::vector<std::size_t> vcells;
    for (std::size_t i = 0; i < total && ok; ++i) {
      if (g.component[i] < 0 || g.dist[i] > v) continue;
      any = true;
      if (strong) vcells.push_back(i);
      if (comp < 0)
        comp = g.component[i];
      else if (g.component[i] != comp)
        ok = false;
    }
    if (!any || !ok) continue;
    if (strong && vcells.size() > 1) {
      std::vector<std::int64_t> strides(g.axes);
      strides[0] = 1;
      for (int a = 1; a < g.axes; ++a) strides[a] = strides[a - 1] * g.res;
      std::vector<std::uint8_t> in_v(total, 0), seen(total, 0);
      for (std::size_t i : vcells) in_v[i] = 1;
      std::queue<std::size_t> q;
      q.push(vcells[0]);
      seen[vcells[0]] = 1;
      std::size_t reached = 1;
      while (!q.empty()) {
        const std::size_t cur = q.front();
        q.pop();
        for (int a = 0; a < g.axes; ++a) {
          const int idx = static_cast<int>((cur / strides[a]) % g.res);
          for (int dir : {-1, 1}) {
            if (idx + dir < 0 || idx + dir >= g.res) continue;
            const std::size_t nx = cur + dir * strides[a];
            if (!in_v[nx] || seen[nx]) continue;
            seen[nx] = 1;
            ++reached;
            q.push(nx);
          }
        }
      }
      if (reached != vcells.size()) continue;
    }
    res.verdict = Verdict::pass;
    res.v_radius = v;
    std::ostringstream os;
    os << "V = U/2^" << j << " certified at " << g.res << " cells/axis ("
       << g.component_count << " components in U)";
    res.detail = os.str();
    return res;
  }
  res.verdict = Verdict::fail;
  std::ostringstream os;
  os << "no V down to 2 grid cells; " << g.component_count
     << " components in B(p,U) at " << g.res << " cells/axis";
  res.detail = os.str();
  return res;
}

}  // namespace

NormalityResult normality_test(const DomainModel& d, const CVec& p, double u_radius,
                               int resolution) {
  return normality_impl(d, p, u_radius, resolution, false);
}

NormalityResult strong_normality_test(const DomainModel& d, const CVec& p,
                                      double u_radius, int resolution) {
  return normality_impl(d, p, u_radius, resolution, true);
}

BoundaryClassification classify_point(const DomainModel& d, const CVec& p,
                                      const SolverSettings& settings, double u_radius,
                                      const std::optional<ComplexHyperplane>& supplied) {
  BoundaryClassification out;
  out.point = p;
  out.grid = std::max(32, std::min(settings.resolution, 64));
  out.touch_tol = settings.touch_tol;

  if (supplied) {
    out.hyperplane = supplied;
  } else if (d.level1()) {
    out.hyperplane = tangent_hyperplane(d, p);
  } else if (d.dim == 1) {
    out.hyperplane = ComplexHyperplane(p, CVec::Constant(1, Complex(1.0, 0.0)));
  }

  if (out.hyperplane) {
    const AvoidanceResult avoid = hyperplane_avoids(d, *out.hyperplane, out.grid);
    out.supported.verdict = avoid.avoids ? Verdict::pass : Verdict::fail;
    out.supported.witness = avoid.witness;
    out.extreme = extreme_test(d, p, *out.hyperplane, out.grid, settings.touch_tol);
    if (d.level1() || supplied || d.dim == 1)
      out.strict = out.extreme;  // single support candidate convention
  } else {
    out.supported.detail = out.extreme.detail = out.strict.detail =
        "no hyperplane candidate (Level-0 domain, none supplied)";
  }

  const double u = u_radius > 0 ? u_radius : 0.2 * d.bounding_radius;
  out.normal = normality_test(d, p, u, settings.resolution);
  out.strongly_normal = strong_normality_test(d, p, u, settings.resolution);
  return out;
}

}  // namespace cckit
