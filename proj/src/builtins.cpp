#include "cckit/builtins.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace cckit {
namespace {

DomainModel make_ball(int n) {
  if (n < 1) throw Error("ball: dimension must be >= 1");
  DomainModel d;
  d.name = n == 1 ? "disc" : "ball";
  d.dim = n;
  d.basepoint = CVec::Zero(n);
  d.bounding_radius = 1.0;
  DefiningFunction f;
  f.dim = n;
  f.value = [](const CVec& z) { return z.squaredNorm() - 1.0; };
  f.grad = [](const CVec& z) { return RVec(2.0 * realify(z)); };
  f.hess = [n](const CVec&) { return RMat(2.0 * RMat::Identity(2 * n, 2 * n)); };
  d.defining = std::move(f);
  return d;
}

double power_term(double r2, double p) {
  if (p == 1.0) return r2;
  if (p == 2.0) return r2 * r2;
  if (p == 0.5) return std::sqrt(r2);
  if (p == 0.25) return std::sqrt(std::sqrt(r2));
  return std::pow(r2, p);
}

DomainModel make_ellipsoid(const std::vector<double>& exponents) {
  const int n = static_cast<int>(exponents.size());
  if (n < 1) throw Error("ellipsoid: needs one exponent per coordinate");
  double pmin = exponents[0];
  for (double p : exponents) {
    if (!(p > 0)) throw Error("ellipsoid: exponents must be positive");
    pmin = std::min(pmin, p);
  }
  DomainModel d;
  d.name = "ellipsoid";
  d.dim = n;
  d.basepoint = CVec::Zero(n);
  d.bounding_radius = std::sqrt(static_cast<double>(n));

  DefiningFunction f;
  f.dim = n;
  f.value = [exponents, n](const CVec& z) {
    double s = -1.0;
    for (int j = 0; j < n; ++j) s += power_term(std::norm(z[j]), exponents[j]);
    return s;
  };
  // |z_j|^{2p} has a singular gradient on the axis z_j = 0 when p < 1, so
  // analytic derivatives are wired only for p_j >= 1 everywhere; the rest fall
  // back to finite differences of the value.
  if (pmin >= 1.0) {
    f.grad = [exponents, n](const CVec& z) {
      RVec g(2 * n);
      for (int j = 0; j < n; ++j) {
        const double p = exponents[j];
        const double r2 = std::norm(z[j]);
        const double c = r2 > 0 ? 2.0 * p * power_term(r2, p - 1.0) : (p == 1.0 ? 2.0 : 0.0);
        g[2 * j] = c * z[j].real();
        g[2 * j + 1] = c * z[j].imag();
      }
      return g;
    };
    f.hess = [exponents, n](const CVec& z) {
      RMat h = RMat::Zero(2 * n, 2 * n);
      for (int j = 0; j < n; ++j) {
        const double p = exponents[j];
        const double x = z[j].real(), y = z[j].imag();
        const double r2 = std::norm(z[j]);
        double a = p == 1.0 ? 2.0 : 0.0;  // 2p r2^{p-1} at the axis
        double b = 0.0;                   // 4p(p-1) r2^{p-2}
        if (r2 > 0) {
          a = 2.0 * p * power_term(r2, p - 1.0);
          b = 4.0 * p * (p - 1.0) * power_term(r2, p - 2.0);
        }
        h(2 * j, 2 * j) = a + b * x * x;
        h(2 * j + 1, 2 * j + 1) = a + b * y * y;
        h(2 * j, 2 * j + 1) = h(2 * j + 1, 2 * j) = b * x * y;
      }
      return h;
    };
  }
  bool integral = true;
  for (double p : exponents) integral = integral && p == std::floor(p);
  f.smoothness = integral ? kSmoothInfinity : 1;
  d.defining = std::move(f);
  return d;
}

// rho = |z|^2 - 1 + eps * t with t = Re(z1^2 conj(z2)) in C^2 and
// t = Re(z1 z2 conj(z3)) in C^3. Gradients and Hessians of t are polynomial
// and written out by hand.
DomainModel make_perturbed_ball(int n, double eps) {
  if (n != 2 && n != 3) throw Error("perturbed_ball: dimension must be 2 or 3");
  if (!(std::abs(eps) <= 0.25))
    throw Error("perturbed_ball: |eps| must be <= 0.25 to keep the domain bounded");
  DomainModel d;
  d.name = "perturbed_ball";
  d.dim = n;
  d.basepoint = CVec::Zero(n);
  d.bounding_radius = 1.2;

  DefiningFunction f;
  f.dim = n;
  if (n == 2) {
    f.value = [eps](const CVec& z) {
      return z.squaredNorm() - 1.0 + eps * (z[0] * z[0] * std::conj(z[1])).real();
    };
    f.grad = [eps](const CVec& z) {
      const double x1 = z[0].real(), y1 = z[0].imag();
      const double x2 = z[1].real(), y2 = z[1].imag();
      RVec g = 2.0 * realify(z);
      g[0] += eps * (2 * x1 * x2 + 2 * y1 * y2);
      g[1] += eps * (-2 * y1 * x2 + 2 * x1 * y2);
      g[2] += eps * (x1 * x1 - y1 * y1);
      g[3] += eps * (2 * x1 * y1);
      return g;
    };
    f.hess = [eps](const CVec& z) {
      const double x1 = z[0].real(), y1 = z[0].imag();
      const double x2 = z[1].real(), y2 = z[1].imag();
      RMat h = 2.0 * RMat::Identity(4, 4);
      h(0, 0) += eps * 2 * x2;
      h(0, 1) += eps * 2 * y2;
      h(1, 1) -= eps * 2 * x2;
      h(0, 2) += eps * 2 * x1;
      h(0, 3) += eps * 2 * y1;
      h(1, 2) -= eps * 2 * y1;
      h(1, 3) += eps * 2 * x1;
      h(1, 0) = h(0, 1);
      h(2, 0) = h(0, 2);
      h(3, 0) = h(0, 3);
      h(2, 1) = h(1, 2);
      h(3, 1) = h(1, 3);
      return h;
    };
  } else {
    f.value = [eps](const CVec& z) {
      return z.squaredNorm() - 1.0 + eps * (z[0] * z[1] * std::conj(z[2])).real();
    };
    f.grad = [eps](const CVec& z) {
      const double x1 = z[0].real(), y1 = z[0].imag();
      const double x2 = z[1].real(), y2 = z[1].imag();
      const double x3 = z[2].real(), y3 = z[2].imag();
      RVec g = 2.0 * realify(z);
      g[0] += eps * (x2 * x3 + y2 * y3);
      g[1] += eps * (-y2 * x3 + x2 * y3);
      g[2] += eps * (x1 * x3 + y1 * y3);
      g[3] += eps * (-y1 * x3 + x1 * y3);
      g[4] += eps * (x1 * x2 - y1 * y2);
      g[5] += eps * (x1 * y2 + x2 * y1);
      return g;
    };
    f.hess = [eps](const CVec& z) {
      const double x1 = z[0].real(), y1 = z[0].imag();
      const double x2 = z[1].real(), y2 = z[1].imag();
      const double x3 = z[2].real(), y3 = z[2].imag();
      RMat h = 2.0 * RMat::Identity(6, 6);
      auto add = [&](int r, int c, double v) {
        h(r, c) += eps * v;
        h(c, r) += eps * v;
      };
      add(0, 2, x3);
      add(0, 3, y3);
      add(0, 4, x2);
      add(0, 5, y2);
      add(1, 2, y3);
      add(1, 3, -x3);
      add(1, 4, -y2);
      add(1, 5, x2);
      add(2, 4, x1);
      add(2, 5, y1);
      add(3, 4, -y1);
      add(3, 5, x1);
      return h;
    };
  }
  d.defining = std::move(f);
  return d;
}

DomainModel make_slit_disc() {
  DomainModel d;
  d.name = "slit_disc";
  d.dim = 1;
  d.basepoint = CVec::Constant(1, Complex(-0.5, 0.0));
  d.bounding_radius = 1.5;
  d.membership = [](const CVec& z) {
    const Complex w = z[0];
    if (std::abs(w) >= 1.0) return false;
    return !(w.imag() == 0.0 && w.real() >= 0.0);
  };
  // The removed segment [0,1) x {0} has measure zero, so grid samples almost
  // never land on it; connectivity scans must instead refuse edges whose
  // straight segment crosses it.
  d.edge_blocker = [](const CVec& a, const CVec& b) {
    const double ya = a[0].imag(), yb = b[0].imag();
    if (ya == 0.0 && a[0].real() >= 0.0 && a[0].real() < 1.0) return true;
    if (yb == 0.0 && b[0].real() >= 0.0 && b[0].real() < 1.0) return true;
    if (!((ya > 0.0 && yb < 0.0) || (ya < 0.0 && yb > 0.0))) return false;
    const double t = ya / (ya - yb);
    const double x = a[0].real() + t * (b[0].real() - a[0].real());
    return x >= 0.0 && x < 1.0;
  };
  return d;
}

DomainModel make_bidisc() {
  DomainModel d;
  d.name = "bidisc";
  d.dim = 2;
  d.basepoint = CVec::Zero(2);
  d.bounding_radius = std::sqrt(2.0);
  d.membership = [](const CVec& z) {
    return std::abs(z[0]) < 1.0 && std::abs(z[1]) < 1.0;
  };
  return d;
}

}  // namespace

DomainModel make_builtin(const std::string& name, const std::vector<double>& params) {
  DomainModel d;
  if (name == "ball") {
    const int n = params.empty() ? 2 : static_cast<int>(params[0]);
    if (!params.empty() && params[0] != std::floor(params[0]))
      throw Error("ball: dimension parameter must be an integer");
    d = make_ball(n);
    d.name = "ball";
  } else if (name == "disc") {
    if (!params.empty()) throw Error("disc: takes no parameters");
    d = make_ball(1);
  } else if (name == "ellipsoid") {
    // Bare name: the standard complex ellipsoid with exponents (1/4, 1).
    d = make_ellipsoid(params.empty() ? std::vector<double>{0.25, 1.0} : params);
  } else if (name == "perturbed_ball") {
    const int n = params.empty() ? 3 : static_cast<int>(params[0]);
    const double eps = params.size() > 1 ? params[1] : 0.1;
    d = make_perturbed_ball(n, eps);
  } else if (name == "slit_disc") {
    d = make_slit_disc();
  } else if (name == "bidisc") {
    d = make_bidisc();
  } else {
    throw Error("unknown builtin domain: " + name);
  }
  finalize_domain(d);
  return d;
}

DomainModel load_domain_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open domain spec: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed domain spec " + path + ": " + e.what());
  }
  if (!j.contains("name")) throw Error("domain spec missing \"name\": " + path);
  std::vector<double> params;
  if (j.contains("params")) params = j["params"].get<std::vector<double>>();
  DomainModel d = make_builtin(j["name"].get<std::string>(), params);

  if (j.contains("dimension") && j["dimension"].get<int>() != d.dim) {
    std::ostringstream os;
    os << "domain spec " << path << ": dimension " << j["dimension"].get<int>()
       << " does not match construction (" << d.dim << ")";
    throw Error(os.str());
  }
  if (j.contains("level")) {
    const int level = j["level"].get<int>();
    if (level == 0) d.defining.reset();  // explicit downgrade to membership-only
    else if (level == 1 && !d.level1())
      throw Error("domain spec " + path + ": level 1 requested but domain has no defining function");
  }
  if (j.contains("bounding_radius")) {
    const double r = j["bounding_radius"].get<double>();
    if (!(r > 0)) throw Error("domain spec " + path + ": bounding_radius must be positive");
    if (r < d.bounding_radius)
      throw Error("domain spec " + path + ": bounding_radius too small for this domain");
    d.bounding_radius = r;
  }
  if (j.contains("basepoint")) {
    const auto bp = j["basepoint"].get<std::vector<std::vector<double>>>();
    if (static_cast<int>(bp.size()) != d.dim)
      throw Error("domain spec " + path + ": basepoint dimension mismatch");
    CVec z0(d.dim);
    for (int k = 0; k < d.dim; ++k) {
      if (bp[k].size() != 2) throw Error("domain spec basepoint entries are [re, im] pairs");
      z0[k] = Complex(bp[k][0], bp[k][1]);
    }
    d.basepoint = z0;
  }
  finalize_domain(d);
  return d;
}

}  // namespace cckit
