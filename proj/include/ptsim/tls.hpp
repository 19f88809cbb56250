#pragma once

// Closed-form results for the two-level model H = M_0 + i b. Used as
// reference values by the tests and the tls-table recipe.

#include <array>
#include <cmath>
#include <numbers>

#include "ptsim/types.hpp"

namespace ptsim::tls {

/// Eigenvalues i b +- sqrt(1 - b^2) (principal complex root).
inline std::array<cplx, 2> eigenvalues(double b) {
    const cplx root = std::sqrt(cplx{1.0 - b * b, 0.0});
    return {I * b + root, I * b - root};
}

/// Steady-state purity (1 + b^2) / 2 for |b| < 1 and 1 in the purifying phase.
inline double steady_purity(double b) { return std::abs(b) < 1.0 ? 0.5 * (1.0 + b * b) : 1.0; }

/// <sigma^z> of the time-averaged state for |b| < 1.
inline double steady_sigma_z(double b) { return 0.0 - std::abs(b); }

/// Imaginary-part splitting 2 sqrt(b^2 - 1), zero for |b| <= 1.
inline double gap(double b) { return std::abs(b) > 1.0 ? 2.0 * std::sqrt(b * b - 1.0) : 0.0; }

/// Exact period of the return probability to (0, 1): pi / sqrt(1 - b^2).
inline double return_period(double b) { return std::numbers::pi / std::sqrt(1.0 - b * b); }

/// Near-exceptional-point approximation 1 / [2 sqrt(2 (1 - b))] quoted for the revival spacing.
inline double revival_period_estimate(double b) { return 1.0 / (2.0 * std::sqrt(2.0 * (1.0 - b))); }

/// Normalized probability of finding (0, 1) at time t after starting there, |b| < 1.
inline double return_probability(double b, double t) {
    const double w = std::sqrt(1.0 - b * b);
    const double c = std::cos(w * t);
    const double s = std::sin(w * t) * (1.0 + b) / w;
    return c * c / (c * c + s * s);
}

/// Unnormalized T(t) (cos th, sin th) at b = 1 with the e^{t} growth removed:
/// (cos th - 2 i t sin th, sin th).
inline std::array<cplx, 2> exceptional_state(double theta, double t) {
    return {std::cos(theta) - 2.0 * I * t * std::sin(theta), cplx{std::sin(theta), 0.0}};
}

/// Purity of T T^dag / Tr at b = 1 from the maximally mixed state: 1 - 2 / (2 + 4 t^2)^2.
inline double exceptional_purity(double t) {
    const double tr = 2.0 + 4.0 * t * t;
    return 1.0 - 2.0 / (tr * tr);
}

}  // namespace ptsim::tls
