// Acceptance gate: one line per criterion, pinned tolerances, wall-clock
// budgets. Exits 0 only when every criterion passes.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cckit/builtins.hpp"
#include "cckit/classify.hpp"
#include "cckit/peak.hpp"
#include "cckit/report.hpp"
#include "cckit/shadow.hpp"

using namespace cckit;

namespace {

struct Failure {
  std::string what;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw Failure{msg};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Value-only nested central differences of the composed shadow function —
// independent of the Schur-complement computation it checks.
double fd_hess_entry(const ShadowModel& s, const CVec& z, int k, int l, double h) {
  RVec x = realify(z);
  auto val = [&](const RVec& q) { return fiber_global_min(s, unrealify(q)).second; };
  RVec xpp = x, xpm = x, xmp = x, xmm = x;
  xpp[k] += h; xpp[l] += h;
  xpm[k] += h; xpm[l] -= h;
  xmp[k] -= h; xmp[l] += h;
  xmm[k] -= h; xmm[l] -= h;
  return (val(xpp) - val(xpm) - val(xmp) + val(xmm)) / (4.0 * h * h);
}

// --------------------------------------------------------------------------

std::string criterion1_ball_shadow_exactness() {
  const DomainModel ball = make_builtin("ball", {2});
  const ShadowModel s = make_shadow(ball, 1, 1);
  double worst = 0.0;
  for (int iy = 0; iy < 41; ++iy) {
    for (int ix = 0; ix < 41; ++ix) {
      const double x = -0.9 + 1.8 * ix / 40.0;
      const double y = -0.9 + 1.8 * iy / 40.0;
      const CVec z = CVec::Constant(1, Complex(x, y));
      const double got = fiber_global_min(s, z).second;
      const double want = x * x + y * y - 1.0;
      worst = std::max(worst, std::abs(got - want));
    }
  }
  require(worst <= 1e-8, "max |rho_tilde - (|z|^2-1)| = " + fmt(worst));
  return "max deviation " + fmt(worst) + " on 41x41 grid";
}

std::string criterion2_c3_pipeline() {
  const DomainModel d = make_builtin("perturbed_ball", {3, 0.1});
  const ShadowModel s = make_shadow(d, 2, 1);

  const ShadowSlcReport slc = shadow_slc_verify(s, 200, 2026);
  require(slc.source_margin > 0.0, "source margin c = " + fmt(slc.source_margin));
  require(slc.shadow_margin > 0.0, "shadow margin = " + fmt(slc.shadow_margin));
  require(slc.shadow_margin >= slc.source_margin - 0.05,
          "margin drop: c = " + fmt(slc.source_margin) +
              ", c~ = " + fmt(slc.shadow_margin));

  const DomainModel sd = shadow_domain(s);
  const std::vector<CVec> pts = sample_boundary(sd, 100, 2027);
  double worst_dev = 0.0;
  for (const CVec& z : pts) {
    const TangentCompatReport t = tangent_compat(s, z);
    worst_dev = std::max(worst_dev, t.zgrad_dev);
    require(t.fiber_block_min_eig > 0.0, "indefinite fiber Hessian block");
  }
  require(worst_dev <= 1e-8, "tangent gradient deviation " + fmt(worst_dev));

  double worst_fd = 0.0;
  for (int i = 0; i < 20; ++i) {
    const ShadowDerivs der = shadow_rho_derivs(s, pts[i]);
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b)
        worst_fd = std::max(
            worst_fd, std::abs(fd_hess_entry(s, pts[i], a, b, 1e-4) - der.hess(a, b)));
  }
  require(worst_fd <= 1e-4, "Schur vs FD Hessian deviation " + fmt(worst_fd));

  return "c = " + fmt(slc.source_margin) + ", c~ = " + fmt(slc.shadow_margin) +
         ", tangent dev " + fmt(worst_dev) + ", Schur-FD dev " + fmt(worst_fd);
}

std::string criterion3_disc_peak_values() {
  const DomainModel disc = make_builtin("disc", {});
  const CVec p = CVec::Constant(1, Complex(1.0, 0.0));
  PeakBuildOptions opts;
  opts.delta_override = 2.0;
  const PeakFunctionSpec spec = build_peak_function(disc, p, std::nullopt, std::nullopt, opts);

  const double f0 = std::abs(peak_value(spec, CVec::Constant(1, Complex(0, 0))));
  const double f99 = std::abs(peak_value(spec, CVec::Constant(1, Complex(0.99, 0))));
  require(std::abs(f0 - 0.23629) <= 1e-4, "F(0) = " + fmt(f0));
  require(std::abs(f99 - 0.82801) <= 1e-4, "F(0.99) = " + fmt(f99));

  const PeakVerification v = verify_peak(disc, spec, {0.1, 0.2, 0.4}, 10000, 2028);
  require(v.verdict == Verdict::pass, "verify_peak failed: " + v.detail);
  for (const auto& m : v.margins)
    require(m.margin > 0.0, "non-positive margin at r = " + fmt(m.radius));

  PeakFunctionSpec deflated = spec;
  deflated.diameter_bound = 0.5;  // true projected diameter is 2
  const PeakVerification bad = verify_peak(disc, deflated, {0.1}, 10000, 2028);
  require(bad.verdict == Verdict::fail, "deflated-Delta control did not fail");

  return "F(0) = " + fmt(f0) + ", F(0.99) = " + fmt(f99) +
         ", margins positive, deflated control fails";
}

std::string criterion4_cconvexity() {
  const DomainModel ball = make_builtin("ball", {2});
  const CConvexityResult good = cconvexity_check(ball, 500, 2029, 256);
  require(good.verdict == Verdict::pass && good.witnesses.empty(),
          "ball produced " + std::to_string(good.witnesses.size()) + " witnesses");

  const DomainModel egg = make_builtin("ellipsoid", {0.25, 1.0});
  const CConvexityResult bad = cconvexity_check(egg, 10000, 2029, 256);
  require(!bad.witnesses.empty(), "ellipsoid produced no witness");

  return "ball clean over " + std::to_string(good.lines_checked) +
         " lines; ellipsoid witnesses: " + std::to_string(bad.witnesses.size()) +
         " of " + std::to_string(bad.lines_checked);
}

std::string criterion5_normality() {
  const DomainModel slit = make_builtin("slit_disc", {});
  const CVec tip = CVec::Constant(1, Complex(0.5, 0.0));
  const NormalityResult f128 = normality_test(slit, tip, 0.2, 128);
  const NormalityResult f256 = normality_test(slit, tip, 0.2, 256);
  require(f128.verdict == Verdict::fail, "slit tip passed at 128");
  require(f256.verdict == Verdict::fail, "slit tip passed at 256");

  const NormalityResult far_ok =
      normality_test(slit, CVec::Constant(1, Complex(-1.0, 0.0)), 0.2, 128);
  require(far_ok.verdict == Verdict::pass, "slit at -1 did not pass");

  const DomainModel disc = make_builtin("disc", {});
  const NormalityResult disc_ok =
      normality_test(disc, CVec::Constant(1, Complex(1.0, 0.0)), 0.2, 128);
  require(disc_ok.verdict == Verdict::pass, "disc at 1 did not pass");

  return "slit tip fails at 128 and 256, passes at -1; disc passes at 1";
}

std::string criterion6_strict_extreme() {
  const DomainModel ball = make_builtin("ball", {2});
  SolverSettings st;
  st.resolution = 48;
  int strict_passes = 0;
  for (const CVec& p : sample_boundary(ball, 20, 2030)) {
    const BoundaryClassification c = classify_point(ball, p, st);
    require(c.strict.verdict == Verdict::pass,
            "ball strict_test failed at a seeded point");
    // implication check on every verdict pair produced here
    if (c.strict.verdict == Verdict::pass)
      require(c.extreme.verdict == Verdict::pass, "strict without extreme");
    ++strict_passes;
  }

  const DomainModel bidisc = make_builtin("bidisc", {});
  CVec corner(2);
  corner << Complex(1, 0), Complex(0, 0);
  const ComplexHyperplane face(corner, CVec::Unit(2, 0));
  const TriResult ex = extreme_test(bidisc, corner, face, 48, 0.05);
  require(ex.verdict == Verdict::fail, "bidisc extreme_test did not fail");
  require(ex.witness.has_value(), "bidisc failure carries no witness");
  const CVec w = *ex.witness;
  require(std::abs(w[0] - Complex(1, 0)) <= 1e-6,
          "witness off the face: |w1-1| = " + fmt(std::abs(w[0] - Complex(1, 0))));
  require(std::abs(w[1]) <= 1.0 + 0.05,
          "witness outside the face disc: |w2| = " + fmt(std::abs(w[1])));

  return std::to_string(strict_passes) +
         " strict ball points; bidisc witness (1, " + fmt(w[1].real()) +
         (w[1].imag() < 0 ? " - " : " + ") + fmt(std::abs(w[1].imag())) + "i)";
}

std::string criterion7_shadow_mask_pipeline() {
  const DomainModel d = make_builtin("perturbed_ball", {2, 0.1});
  const DomainModel mask = shadow_mask(d, 1, 1, 128, 64, 2031);

  const CConvexityResult top = cconvexity_check(mask, 1, 2031, 128);
  require(top.verdict == Verdict::pass, "shadow chart not connected/simply connected");

  int normal_passes = 0;
  for (const CVec& p : sample_boundary(mask, 10, 2032)) {
    const NormalityResult nr =
        normality_test(mask, p, 0.2 * mask.bounding_radius, 128);
    require(nr.verdict == Verdict::pass, "normality failed at a shadow boundary point");
    ++normal_passes;
  }
  return "shadow chart connected and simply connected; normality at " +
         std::to_string(normal_passes) + "/10 boundary points";
}

std::string criterion8_determinism() {
  std::vector<ExperimentConfig> configs;
  auto add = [&](ExperimentKind kind, const std::string& domain, std::uint64_t seed,
                 int samples, int resolution) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.domain_arg = domain;
    cfg.settings.seed = seed;
    cfg.samples = samples;
    cfg.resolution = resolution;
    configs.push_back(cfg);
  };
  // One config per criterion 1-7, smallest faithful sizes.
  add(ExperimentKind::shadow, "ball:2", 101, 50, 0);                    // 1
  add(ExperimentKind::theorem5_pipeline, "perturbed_ball:3,0.1", 102, 60, 0);  // 2
  add(ExperimentKind::peak, "disc", 103, 2000, 0);                      // 3
  add(ExperimentKind::cconvex, "ellipsoid:0.25,1", 104, 300, 128);      // 4
  {
    ExperimentConfig cfg;  // 5: slit tip classification
    cfg.kind = ExperimentKind::classify;
    cfg.domain_arg = "slit_disc";
    cfg.settings.seed = 105;
    cfg.resolution = 128;
    cfg.point = CVec::Constant(1, Complex(0.5, 0.0));
    configs.push_back(cfg);
  }
  add(ExperimentKind::classify, "bidisc", 106, 4, 32);                  // 6
  add(ExperimentKind::theorem4_pipeline, "perturbed_ball:2,0.1", 107, 32, 64);  // 7

  for (const ExperimentConfig& cfg : configs) {
    const std::string first = run_experiment(cfg).to_json(false).dump();
    const std::string second = run_experiment(cfg).to_json(false).dump();
    require(first == second,
            std::string("rerun differs for kind ") + to_string(cfg.kind) +
                " on " + cfg.domain_arg);
  }
  return std::to_string(configs.size()) + " configs byte-identical across reruns";
}

}  // namespace

int main() {
  struct Entry {
    int id;
    double budget_s;
    std::function<std::string()> run;
  };
  const std::vector<Entry> entries = {
      {1, 5.0, criterion1_ball_shadow_exactness},
      {2, 60.0, criterion2_c3_pipeline},
      {3, 10.0, criterion3_disc_peak_values},
      {4, 300.0, criterion4_cconvexity},
      {5, 30.0, criterion5_normality},
      {6, 30.0, criterion6_strict_extreme},
      {7, 120.0, criterion7_shadow_mask_pipeline},
      {8, 600.0, criterion8_determinism},
  };

  int failures = 0;
  for (const Entry& e : entries) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = e.run();
    } catch (const Failure& f) {
      ok = false;
      detail = f.what;
    } catch (const std::exception& ex) {
      ok = false;
      detail = std::string("exception: ") + ex.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && elapsed > e.budget_s) {
      ok = false;
      detail = "over time budget: " + fmt(elapsed) + " s > " + fmt(e.budget_s) + " s";
    }
    std::printf("criterion %d: %s (%s; %.2f s)\n", e.id, ok ? "PASS" : "FAIL",
                detail.c_str(), elapsed);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
