#include <doctest.h>

#include <cmath>

#include "cckit/builtins.hpp"
#include "cckit/rng.hpp"
#include "cckit/slice.hpp"

using namespace cckit;

namespace {

SliceMask synthetic_mask(int res) {
  SliceMask m;
  m.line = ComplexLine(CVec::Zero(1), CVec::Constant(1, Complex(1, 0)));
  m.center = 0.0;
  m.halfwidth = 1.0;
  m.resolution = res;
  m.cells.assign(static_cast<std::size_t>(res) * res, 0);
  return m;
}

void paint_disc(SliceMask& m, Complex c, double r_in, double r_out) {
  for (int iy = 0; iy < m.resolution; ++iy)
    for (int ix = 0; ix < m.resolution; ++ix) {
      const double d = std::abs(m.zeta(ix, iy) - c);
      if (d >= r_in && d <= r_out)
        m.cells[static_cast<std::size_t>(iy) * m.resolution + ix] = 1;
    }
}

}  // namespace

TEST_CASE("digital topology identifies discs, annuli and split shapes") {
  SliceMask disc = synthetic_mask(96);
  paint_disc(disc, 0.0, 0.0, 0.7);
  TopologyReport t = mask_topology(disc);
  CHECK(t.component_count == 1);
  CHECK(t.hole_count == 0);
  CHECK(t.connected);
  CHECK(t.simply_connected);
  CHECK(t.true_cells > 0);

  SliceMask annulus = synthetic_mask(96);
  paint_disc(annulus, 0.0, 0.35, 0.8);
  t = mask_topology(annulus);
  CHECK(t.component_count == 1);
  CHECK(t.hole_count == 1);
  CHECK(t.connected);
  CHECK(!t.simply_connected);

  SliceMask pair = synthetic_mask(96);
  paint_disc(pair, Complex(-0.5, 0.0), 0.0, 0.3);
  paint_disc(pair, Complex(0.55, 0.0), 0.0, 0.3);
  t = mask_topology(pair);
  CHECK(t.component_count == 2);
  CHECK(t.hole_count == 0);
  CHECK(!t.connected);
  CHECK(t.simply_connected);

  SliceMask empty = synthetic_mask(48);
  t = mask_topology(empty);
  CHECK(t.component_count == 0);
  CHECK(t.connected);  // vacuously
  CHECK(t.simply_connected);
}

TEST_CASE("disc slice rasterizes with an empty border and the right area") {
  const DomainModel disc = make_builtin("disc", {});
  const ComplexLine chart(disc.basepoint, CVec::Constant(1, Complex(1, 0)));
  const SliceMask m = slice_mask(disc, chart, 128);
  REQUIRE(m.resolution == 128);

  for (int i = 0; i < m.resolution; ++i) {
    CHECK(!m.cell(i, 0));
    CHECK(!m.cell(i, m.resolution - 1));
    CHECK(!m.cell(0, i));
    CHECK(!m.cell(m.resolution - 1, i));
  }

  const TopologyReport t = mask_topology(m);
  CHECK(t.connected);
  CHECK(t.simply_connected);
  const double cell_area = m.step() * m.step();
  const double area = t.true_cells * cell_area;
  CHECK(area == doctest::Approx(M_PI).epsilon(0.05));
}

TEST_CASE("slit disc slice stays simply connected through blocked edges") {
  const DomainModel slit = make_builtin("slit_disc", {});
  const ComplexLine chart(slit.basepoint, CVec::Constant(1, Complex(1, 0)));
  const SliceMask m = slice_mask(slit, chart, 128);

  // The slit has measure zero: pointwise sampling sees a full disc, the
  // edge-blocker is what separates the two banks.
  CHECK(!m.blocked.empty());
  const TopologyReport t = mask_topology(m);
  CHECK(t.component_count == 1);
  CHECK(t.hole_count == 0);

  // Direct blocker checks in ambient coordinates.
  const CVec above = CVec::Constant(1, Complex(0.5, 0.01));
  const CVec below = CVec::Constant(1, Complex(0.5, -0.01));
  const CVec left_above = CVec::Constant(1, Complex(-0.5, 0.01));
  const CVec left_below = CVec::Constant(1, Complex(-0.5, -0.01));
  CHECK(slit.edge_blocker(above, below));
  CHECK(!slit.edge_blocker(left_above, left_below));
  CHECK(!slit.edge_blocker(above, CVec::Constant(1, Complex(0.6, 0.01))));
}

TEST_CASE("slice verdicts are stable under resolution and rerun") {
  const DomainModel ball = make_builtin("ball", {2});
  Rng rng(41);
  for (int k = 0; k < 50; ++k) {
    CVec base = CVec::Zero(2);
    base[0] = Complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
    const ComplexLine l(base, rng.unit_direction(2));
    const TopologyReport lo = mask_topology(slice_mask(ball, l, 64));
    const TopologyReport hi = mask_topology(slice_mask(ball, l, 128));
    CHECK(lo.connected == hi.connected);
    CHECK(lo.simply_connected == hi.simply_connected);
  }

  const ComplexLine l(CVec::Zero(2), CVec::Unit(2, 0));
  const SliceMask a = slice_mask(ball, l, 96);
  const SliceMask b = slice_mask(ball, l, 96);
  CHECK(a.cells == b.cells);
}

TEST_CASE("ball slices all pass; steep ellipsoid probes find a witness") {
  const DomainModel ball = make_builtin("ball", {2});
  const CConvexityResult good = cconvexity_check(ball, 40, 11, 128);
  CHECK(good.verdict == Verdict::pass);
  CHECK(good.witnesses.empty());
  CHECK(good.lines_checked >= 40);

  // The flat-boundary ellipsoid splits along steep lines; the deterministic
  // probe family alone is enough to expose a disconnected slice.
  const DomainModel egg = make_builtin("ellipsoid", {0.25, 1.0});
  const CConvexityResult bad = cconvexity_check(egg, 2, 11, 128);
  CHECK(bad.verdict == Verdict::fail);
  REQUIRE(!bad.witnesses.empty());
  bool targeted = false;
  for (const SliceWitness& w : bad.witnesses) {
    CHECK(!(w.refined.connected && w.refined.simply_connected));
    targeted = targeted || w.targeted;
  }
  CHECK(targeted);
}

TEST_CASE("planar diameter matches the quadratic-time oracle") {
  Rng rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Complex> pts;
    const int n = 20 + trial * 40;
    for (int i = 0; i < n; ++i)
      pts.emplace_back(rng.uniform(-2, 2), rng.uniform(-2, 2));
    double brute = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        brute = std::max(brute, std::abs(pts[i] - pts[j]));
    CHECK(planar_diameter(pts) == doctest::Approx(brute).epsilon(1e-12));
  }

  CHECK(planar_diameter({Complex(0, 0)}) == 0.0);
  CHECK(planar_diameter({Complex(0, 0), Complex(3, 4)}) == doctest::Approx(5.0));
  const std::vector<Complex> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  CHECK(planar_diameter(square) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("degenerate slice windows are rejected") {
  const DomainModel ball = make_builtin("ball", {2});
  const ComplexLine l(CVec::Zero(2), CVec::Unit(2, 0));
  CHECK_THROWS_AS(slice_mask(ball, l, 8), Error);
}
