#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cckit {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;  // point or direction in C^n
using RVec = Eigen::VectorXd;   // realified vector in R^{2n}
using RMat = Eigen::MatrixXd;

/// Realification convention used throughout: z_j = x_j + i y_j maps to the
/// interleaved real vector (x_1, y_1, x_2, y_2, ..., x_n, y_n).
inline RVec realify(const CVec& z) {
  RVec x(2 * z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    x[2 * j] = z[j].real();
    x[2 * j + 1] = z[j].imag();
  }
  return x;
}

inline CVec unrealify(const RVec& x) {
  CVec z(x.size() / 2);
  for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = Complex(x[2 * j], x[2 * j + 1]);
  return z;
}

/// Wirtinger gradient from the real one: d/dz_j = (d/dx_j - i d/dy_j)/2.
inline CVec wirtinger_from_real(const RVec& grad) {
  CVec w(grad.size() / 2);
  for (Eigen::Index j = 0; j < w.size(); ++j)
    w[j] = 0.5 * Complex(grad[2 * j], -grad[2 * j + 1]);
  return w;
}

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Operation needs a capability (usually a defining function) the domain lacks.
struct CapabilityError : Error {
  using Error::Error;
};
struct ConvergenceError : Error {
  using Error::Error;
};

/// Sampling cannot prove universally quantified statements, so test verdicts
/// are tri-state rather than boolean.
enum class Verdict { pass, fail, not_applicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "not_applicable";
  }
}

struct SolverSettings {
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  double fd_step = 1e-5;
  int resolution = 256;
  std::uint64_t seed = 0;
  /// Base boundary tolerance; domains scale it to 1e-8*(1+|grad rho(z0)|*R).
  double rho_tol = 1e-8;
  /// Touch tolerance for "meets the closure only at p" tests. 0 means derive
  /// from the sampling grid (10 grid steps).
  double touch_tol = 0.0;

  void validate() const {
    if (newton_tol <= 0 || fd_step <= 0 || rho_tol <= 0 || touch_tol < 0)
      throw Error("SolverSettings: tolerances must be positive");
    if (newton_max_iter < 1) throw Error("SolverSettings: newton_max_iter < 1");
    if (resolution < 32) throw Error("SolverSettings: resolution must be >= 32");
  }
};

/// Affine complex hyperplane {z : sum_j nu_j (z_j - p_j) = 0}.
struct ComplexHyperplane {
  CVec anchor;
  CVec normal;  // unit length after construction

  ComplexHyperplane() = default;
  ComplexHyperplane(CVec p, CVec nu) : anchor(std::move(p)), normal(std::move(nu)) {
    const double n = normal.norm();
    if (!(n > 0)) throw Error("ComplexHyperplane: zero normal");
    normal /= n;
  }

  /// The defining functional sum_j nu_j (z_j - p_j); no conjugation.
  Complex side(const CVec& z) const { return (normal.transpose() * (z - anchor))(0); }
};

/// Affine complex line zeta -> base + zeta*dir.
struct ComplexLine {
  CVec base;
  CVec dir;  // unit length after construction

  ComplexLine() = default;
  ComplexLine(CVec a, CVec b) : base(std::move(a)), dir(std::move(b)) {
    const double n = dir.norm();
    if (!(n > 0)) throw Error("ComplexLine: zero direction");
    dir /= n;
  }

  CVec at(Complex zeta) const { return base + zeta * dir; }
  /// Parameter of the orthogonal projection of q onto the line.
  Complex param(const CVec& q) const { return dir.dot(q - base); }
  /// Distance from q to the line.
  double dist(const CVec& q) const { return (q - at(param(q))).norm(); }
};

}  // namespace cckit
