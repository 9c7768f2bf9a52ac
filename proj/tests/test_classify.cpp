#include <doctest.h>

#include <cmath>

#include "cckit/builtins.hpp"
#include "cckit/classify.hpp"
#include "cckit/rng.hpp"

using namespace cckit;

TEST_CASE("ball boundary points pass the whole battery") {
  for (int n : {2, 3}) {
    CAPTURE(n);
    const DomainModel d = make_builtin("ball", {static_cast<double>(n)});
    SolverSettings st;
    st.resolution = n == 3 ? 10 : 24;
    st.seed = 4;
    for (const CVec& p : sample_boundary(d, n == 3 ? 3 : 6, 21)) {
      const BoundaryClassification c = classify_point(d, p, st);
      REQUIRE(c.hyperplane.has_value());
      CHECK(c.supported.verdict == Verdict::pass);
      CHECK(c.extreme.verdict == Verdict::pass);
      CHECK(c.strict.verdict == Verdict::pass);
      CHECK(c.normal.verdict == Verdict::pass);
      CHECK(c.strongly_normal.verdict == Verdict::pass);
    }
  }
}

TEST_CASE("tangent hyperplane of the ball is the conjugate radius") {
  const DomainModel d = make_builtin("ball", {2});
  const CVec p = boundary_project(d, CVec::Unit(2, 0));
  const ComplexHyperplane h = tangent_hyperplane(d, p);
  CHECK((h.anchor - p).norm() < 1e-9);
  CHECK(std::abs(h.normal[0] - Complex(1, 0)) < 1e-9);
  CHECK(std::abs(h.normal[1]) < 1e-9);
  CHECK(std::abs(h.side(p)) < 1e-12);
  CHECK(std::abs(h.side(CVec::Zero(2)) - Complex(-1, 0)) < 1e-9);

  const AvoidanceResult av = hyperplane_avoids(d, h, 48);
  CHECK(av.avoids);
  CHECK(!av.witness.has_value());

  // Interior points must never be claimed boundary-tangent.
  CHECK_THROWS_AS(tangent_hyperplane(d, CVec::Zero(2)), Error);
}

TEST_CASE("bidisc face points are supported but not extreme") {
  const DomainModel d = make_builtin("bidisc", {});
  CVec p(2);
  p << Complex(1, 0), Complex(0, 0);
  const ComplexHyperplane face(p, CVec::Unit(2, 0));  // {z1 = 1}

  const AvoidanceResult av = hyperplane_avoids(d, face, 48);
  CHECK(av.avoids);

  const TriResult ex = extreme_test(d, p, face, 48, 0.05);
  CHECK(ex.verdict == Verdict::fail);
  REQUIRE(ex.witness.has_value());
  const CVec w = *ex.witness;
  CHECK(std::abs(w[0] - Complex(1, 0)) < 1e-6);  // on the face
  // The membership probe resolves the closure only to within tau, so the
  // witness sits in the tau-fattened closed disc of the face.
  CHECK(std::abs(w[1]) < 1.0 + 0.05);
  CHECK((w - p).norm() > 0.05);  // genuinely away from p

  // A tolerance larger than the whole scanned face absorbs every touching
  // sample, so the verdict flips to pass.
  const TriResult loose = extreme_test(d, p, face, 48, 4.0);
  CHECK(loose.verdict == Verdict::pass);
}

TEST_CASE("a hyperplane cutting the domain gives not_applicable with a witness") {
  const DomainModel d = make_builtin("ball", {2});
  CVec p(2);
  p << Complex(0.5, 0), Complex(0, 0);  // interior anchor: the plane cuts D
  const ComplexHyperplane cutting(p, CVec::Unit(2, 0));
  const TriResult ex = extreme_test(d, p, cutting, 48);
  CHECK(ex.verdict == Verdict::not_applicable);
  REQUIRE(ex.witness.has_value());
  CHECK(d.contains(*ex.witness));
}

TEST_CASE("line touch classification at a ball boundary point") {
  const DomainModel d = make_builtin("ball", {2});
  const CVec p = boundary_project(d, CVec::Unit(2, 0));

  // Complex-tangent line: meets the closure only at p.
  const ComplexLine tangent(p, CVec::Unit(2, 1));
  const TriResult touch = line_touch_test(d, p, tangent, 64);
  CHECK(touch.verdict == Verdict::pass);

  // Radial line: cuts straight through the ball.
  const ComplexLine radial(p, CVec::Unit(2, 0));
  const TriResult cut = line_touch_test(d, p, radial, 64);
  CHECK(cut.verdict == Verdict::not_applicable);
}

TEST_CASE("slit disc normality fails at the tip and holds away from it") {
  const DomainModel slit = make_builtin("slit_disc", {});

  const CVec tip = CVec::Constant(1, Complex(0.5, 0.0));
  const NormalityResult bad128 = normality_test(slit, tip, 0.2, 128);
  const NormalityResult bad256 = normality_test(slit, tip, 0.2, 256);
  CHECK(bad128.verdict == Verdict::fail);
  CHECK(bad256.verdict == Verdict::fail);

  const CVec far = CVec::Constant(1, Complex(-1.0, 0.0));
  const NormalityResult good = normality_test(slit, far, 0.2, 128);
  CHECK(good.verdict == Verdict::pass);
  CHECK(good.v_radius > 0.0);

  const DomainModel disc = make_builtin("disc", {});
  const CVec one = CVec::Constant(1, Complex(1.0, 0.0));
  const NormalityResult smooth = normality_test(disc, one, 0.2, 128);
  CHECK(smooth.verdict == Verdict::pass);

  const NormalityResult strong = strong_normality_test(disc, one, 0.2, 128);
  CHECK(strong.verdict == Verdict::pass);
  CHECK(strong.v_radius <= smooth.u_radius);
}

TEST_CASE("the perturbed ball keeps strict support at sampled boundary points") {
  const DomainModel d = make_builtin("perturbed_ball", {3, 0.1});
  SolverSettings st;
  st.resolution = 32;  // clamped per-axis for n = 3 internally
  for (const CVec& p : sample_boundary(d, 6, 33)) {
    const BoundaryClassification c = classify_point(d, p, st);
    CHECK(c.supported.verdict == Verdict::pass);
    CHECK(c.extreme.verdict == Verdict::pass);
    CHECK(c.strict.verdict == Verdict::pass);
    CHECK(c.normal.verdict == Verdict::pass);
  }
}

TEST_CASE("verdict implications hold across a mixed corpus") {
  SolverSettings st;
  st.resolution = 24;
  for (const char* name : {"ball", "ellipsoid", "perturbed_ball"}) {
    CAPTURE(name);
    DomainModel d = make_builtin(name, name == std::string("perturbed_ball")
                                           ? std::vector<double>{2, 0.2}
                                           : std::vector<double>{});
    if (d.dim > 2) continue;
    for (const CVec& p : sample_boundary(d, 4, 9)) {
      const BoundaryClassification c = classify_point(d, p, st);
      if (c.strict.verdict == Verdict::pass)
        CHECK(c.extreme.verdict == Verdict::pass);
      if (c.strongly_normal.verdict == Verdict::pass)
        CHECK(c.normal.verdict == Verdict::pass);
      if (c.extreme.verdict == Verdict::pass)
        CHECK(c.supported.verdict == Verdict::pass);
    }
  }
}
