#include "cckit/peak.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <sstream>

#include "cckit/classify.hpp"
#include "cckit/parallel.hpp"
#include "cckit/slice.hpp"

namespace cckit {

Complex projection_functional(const PeakFunctionSpec& spec, const CVec& z) {
  const Complex num = (spec.hyperplane.normal.transpose() * (z - spec.p))(0);
  return num / spec.transversality;
}

bool peak_branch_valid(const PeakFunctionSpec& spec, Complex lambda) {
  return (lambda / spec.branch_dir).real() > 0.0;
}

Complex planar_weak_peak(double delta, Complex nu_br, Complex lambda) {
  if (!(delta > 0)) throw Error("planar_weak_peak: diameter bound must be positive");
  const double nn = std::abs(nu_br);
  if (nn < 1e-12) throw Error("planar_weak_peak: zero branch direction");
  if (lambda == Complex(0.0, 0.0)) return Complex(1.0, 0.0);  // peak value
  const Complex w = std::log(delta) - std::log(lambda / (nu_br / nn));
  if (std::abs(w) < 1e-12) return Complex(0.0, 0.0);  // limit through Re w > 0
  return std::exp(-1.0 / w);
}

Complex peak_value(const PeakFunctionSpec& spec, const CVec& z) {
  Complex lambda = projection_functional(spec, z);
  if (std::abs(lambda) <= 1e-12 * spec.diameter_bound) lambda = 0.0;
  return planar_weak_peak(spec.diameter_bound, spec.branch_dir, lambda);
}

PeakFunctionSpec build_peak_function(const DomainModel& d, const CVec& p,
                                     std::optional<ComplexHyperplane> h,
                                     std::optional<CVec> b,
                                     const PeakBuildOptions& options) {
  PeakFunctionSpec spec;
  spec.p = p;

  if (h) {
    spec.hyperplane = *h;
  } else if (d.level1()) {
    spec.hyperplane = tangent_hyperplane(d, p);
  } else if (d.dim == 1) {
    spec.hyperplane = ComplexHyperplane(p, CVec::Constant(1, Complex(1.0, 0.0)));
  } else {
    throw CapabilityError(
        "build_peak_function: Level-0 domain needs an explicit hyperplane");
  }

  CVec dir;
  if (b) {
    dir = *b;
  } else {
    dir = p - d.basepoint;
    if (dir.norm() < 1e-12)
      throw Error("build_peak_function: point coincides with the basepoint");
  }
  spec.line = ComplexLine(p, dir);
  spec.transversality =
      (spec.hyperplane.normal.transpose() * spec.line.dir)(0);
  if (std::abs(spec.transversality) < 1e-8)
    throw Error("build_peak_function: line is tangent to the hyperplane "
                "(degenerate transversality)");

  if (!options.skip_extreme_check) {
    const TriResult ext =
        extreme_test(d, p, spec.hyperplane, options.grid, options.touch_tol);
    if (ext.verdict != Verdict::pass)
      throw Error("build_peak_function: the point is not extreme for this "
                  "hyperplane (" + ext.detail + ")");
  }

  // The line has to meet the domain for the projection chart to see it.
  const Complex sigma0 = projection_functional(spec, d.basepoint);
  bool meets = false;
  for (int k = 1; k <= 64 && !meets; ++k)
    meets = d.contains(spec.line.at(sigma0 * (static_cast<double>(k) / 64.0)));
  if (!meets)
    throw Error("build_peak_function: line through p misses the domain");

  if (std::abs(sigma0) < 1e-9)
    throw Error("build_peak_function: basepoint projects onto p; "
                "cannot orient the branch");
  spec.branch_dir = sigma0 / std::abs(sigma0);

  std::vector<Complex> projected;
  for (const CVec& q : sample_boundary(d, options.boundary_samples, options.seed))
    projected.push_back(projection_functional(spec, q));
  const double diam = planar_diameter(projected);
  if (options.delta_override > 0) {
    if (options.delta_override < diam * (1.0 - 1e-6))
      throw Error("build_peak_function: supplied diameter bound is below the "
                  "sampled projected diameter");
    spec.diameter_bound = options.delta_override;
  } else {
    spec.diameter_bound = 1.1 * diam;
  }
  return spec;
}

namespace {

std::vector<double> approach_trace(const DomainModel& d, const PeakFunctionSpec& spec,
                                   int count) {
  std::vector<double> trace(count);
  const CVec step = d.basepoint - spec.p;
  for (int k = 0; k < count; ++k)
    trace[k] = std::abs(peak_value(spec, spec.p + std::pow(2.0, -k) * step));
  return trace;
}

}  // namespace

PeakVerification verify_peak(const DomainModel& d, const PeakFunctionSpec& spec,
                             const std::vector<double>& radii, int samples,
                             std::uint64_t seed) {
  PeakVerification rep;
  const std::vector<CVec> pts = sample_interior(d, samples, seed);
  rep.samples_used = static_cast<int>(pts.size());

  struct Slot {
    double modulus = 0.0;
    double dist = 0.0;
    bool valid = false;
  };
  std::vector<Slot> slots(pts.size());
  parallel_for(static_cast<int>(pts.size()), [&](int i) {
    const Complex lambda = projection_functional(spec, pts[i]);
    slots[i].dist = (pts[i] - spec.p).norm();
    slots[i].valid = peak_branch_valid(spec, lambda);
    slots[i].modulus = std::abs(peak_value(spec, pts[i]));
  });

  for (const Slot& s : slots) {
    if (!s.valid) {
      ++rep.branch_violations;
      continue;
    }
    if (s.modulus >= 1.0) ++rep.interior_violations;
  }
  for (double r : radii) {
    PeakVerification::RadiusMargin m;
    m.radius = r;
    for (const Slot& s : slots)
      if (s.valid && s.dist > r) m.max_modulus = std::max(m.max_modulus, s.modulus);
    m.margin = 1.0 - m.max_modulus;
    rep.margins.push_back(m);
  }

  rep.limit_trace = approach_trace(d, spec, 41);
  double worst_shell = 0.0;
  for (const auto& m : rep.margins) worst_shell = std::max(worst_shell, m.max_modulus);
  rep.limit_dominates = rep.limit_trace.back() > worst_shell;

  bool ok = rep.interior_violations == 0 && rep.branch_violations == 0 &&
            rep.limit_dominates;
  for (const auto& m : rep.margins) ok = ok && m.margin > 0.0;
  rep.verdict = ok ? Verdict::pass : Verdict::fail;

  std::ostringstream os;
  os << rep.samples_used << " member samples; approach tail |F| = "
     << rep.limit_trace.back();
  rep.detail = os.str();
  return rep;
}

AdPeakVerification verify_ad_peak(const DomainModel& d, const PeakFunctionSpec& spec,
                                  int samples, std::uint64_t seed) {
  AdPeakVerification rep;
  const double tau = 0.01 * d.bounding_radius;

  // Closure sample set: boundary points plus interior shells hugging them.
  std::vector<CVec> pts = sample_boundary(d, std::max(8, samples / 2), seed);
  const std::size_t nb = pts.size();
  for (std::size_t i = 0; i < nb; ++i) {
    for (double s : {0.9, 0.99}) {
      pts.push_back(d.basepoint + s * (pts[i] - d.basepoint));
    }
  }
  rep.samples_used = static_cast<int>(pts.size());

  struct Slot {
    double modulus = 0.0, dist = 0.0;
    bool valid = false;
  };
  std::vector<Slot> slots(pts.size());
  parallel_for(static_cast<int>(pts.size()), [&](int i) {
    const Complex lambda = projection_functional(spec, pts[i]);
    slots[i].dist = (pts[i] - spec.p).norm();
    slots[i].valid = peak_branch_valid(spec, lambda);
    slots[i].modulus = std::abs(peak_value(spec, pts[i]));
  });

  const double edges[] = {tau,  0.05, 0.1, 0.2, 0.5,
                          1.0,  2.0,  4.0, std::numeric_limits<double>::infinity()};
  const int nbins = static_cast<int>(std::size(edges)) - 1;
  rep.bins.resize(nbins);
  for (int b = 0; b < nbins; ++b) {
    rep.bins[b].lo = edges[b];
    rep.bins[b].hi = edges[b + 1];
  }
  for (const Slot& s : slots) {
    if (s.dist < tau) continue;  // the peak point's own neighborhood
    if (!s.valid) {
      ++rep.branch_violations;
      continue;
    }
    for (int b = 0; b < nbins; ++b) {
      if (s.dist >= rep.bins[b].lo && s.dist < rep.bins[b].hi) {
        rep.bins[b].max_modulus = std::max(rep.bins[b].max_modulus, s.modulus);
        ++rep.bins[b].count;
        break;
      }
    }
  }
  rep.bins.erase(std::remove_if(rep.bins.begin(), rep.bins.end(),
                                [](const auto& b) { return b.count == 0; }),
                 rep.bins.end());

  const std::vector<double> trace = approach_trace(d, spec, 41);
  rep.limit_value = trace.back();

  bool ok = rep.branch_violations == 0 && rep.limit_value >= 0.95;
  for (const auto& b : rep.bins) ok = ok && b.max_modulus < 1.0;
  rep.verdict = ok ? Verdict::pass : Verdict::fail;

  std::ostringstream os;
  os << rep.samples_used << " closure samples, tau = " << tau
     << ", limit |F| = " << rep.limit_value;
  rep.detail = os.str();
  return rep;
}

}  // namespace cckit
