#pragma once

#include <string>
#include <vector>

#include "cckit/domain.hpp"

namespace cckit {

/// Documented builtin families:
///   "ball"           params [n]          unit ball in C^n           Level-1
///   "disc"           params []           unit disc (= ball, n=1)    Level-1
///   "ellipsoid"      params [p_1..p_n]   { sum |z_j|^{2 p_j} < 1 }  Level-1
///                    analytic derivatives only when all p_j >= 1
///   "perturbed_ball" params [N, eps]     |z|^2 - 1 + eps*Re(cubic)  Level-1
///                    cubic = z_1^2 conj(z_2) for N = 2, z_1 z_2 conj(z_N) for N >= 3
///   "slit_disc"      params []           unit disc minus [0, 1)     Level-0, edge blocker
///   "bidisc"         params []           unit bidisc in C^2         Level-0
DomainModel make_builtin(const std::string& name, const std::vector<double>& params);

/// Domain specification files are JSON documents
/// {name, params, dimension, level, bounding_radius, basepoint}; builtins are
/// constructed by name and the optional fields override/validate the result.
DomainModel load_domain_spec(const std::string& path);

}  // namespace cckit
