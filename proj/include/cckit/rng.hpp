#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "cckit/types.hpp"

namespace cckit {

/// Deterministic RNG wrapper. Distributions are implemented explicitly so
/// streams do not depend on standard-library internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Uniform direction on the unit sphere of C^n (= S^{2n-1}).
  CVec unit_direction(int dim) {
    CVec v(dim);
    double nrm2 = 0.0;
    do {
      for (int j = 0; j < dim; ++j) {
        v[j] = Complex(normal(), normal());
      }
      nrm2 = v.norm();
    } while (nrm2 < 1e-12);
    return v / nrm2;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace cckit
