#pragma once

// Weiss mean-field theory for the translation-invariant chain. A single spin
// sees h_eff = h + J z m, and its diagonal-ensemble magnetization gives the
// self-consistency condition
//
//   m = -g gamma / (g^2 + (h + J z m)^2),
//
// i.e. the cubic m (g^2 + (h + J z m)^2) + g gamma = 0. The boundary is where
// the continued root reaches |m| = 1: g gamma = g^2 + (h - J z)^2.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ptsim/types.hpp"

namespace ptsim {

struct MeanFieldParameters {
    double h = 1.25;
    double g = 1.0;
    double J = 0.0;
    int z = 2;
    double gamma = 0.0;

    bool operator==(const MeanFieldParameters&) const = default;
};

struct MeanFieldOptions {
    bool squared_denominator = true;  // false: literal unsquared (h + J z m) term
    int feedback_sign = +1;           // -1 feeds back as h - J z m
    double gamma_step = 2e-3;         // continuation step

    bool operator==(const MeanFieldOptions&) const = default;
};

inline void validate(const MeanFieldParameters& p) {
    if (p.g == 0.0) throw ConfigError("mean-field theory needs g != 0");
    if (p.z < 0) throw ConfigError("coordination number z must be >= 0");
}

/// f(m) = m (g^2 + a(m)^k) + g gamma with a = h + s J z m; roots are self-consistent magnetizations.
inline double self_consistency_function(double m, const MeanFieldParameters& p, const MeanFieldOptions& opt = {}) {
    const double a = p.h + opt.feedback_sign * p.J * p.z * m;
    const double denom = p.g * p.g + (opt.squared_denominator ? a * a : a);
    return m * denom + p.g * p.gamma;
}

namespace detail {

/// Root of f on [lo, hi] with f(lo) and f(hi) of opposite sign (bisection to machine precision).
inline double bracketed_root(double lo, double hi, const MeanFieldParameters& p, const MeanFieldOptions& opt) {
    double flo = self_consistency_function(lo, p, opt);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = self_consistency_function(mid, p, opt);
        if (fm == 0.0) return mid;
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Continue the root from (gamma_from, m_from) to p.gamma. Returns nullopt when no
/// root with m >= -1 lies within `max_jump` of m_from.
inline std::optional<double> continue_root(double m_from, const MeanFieldParameters& p, const MeanFieldOptions& opt,
                                           double max_jump = 0.1) {
    const double scan = 1e-4;
    double hi = m_from;
    double fhi = self_consistency_function(hi, p, opt);
    if (fhi == 0.0) return hi;
    // Walk toward the sign change on the side the root moved to.
    const double dir = fhi > 0 ? -1.0 : 1.0;
    double prev = m_from;
    for (double step = scan; step <= max_jump + scan; step += scan) {
        const double m = std::clamp(m_from + dir * step, -1.0, 1.0);
        const double f = self_consistency_function(m, p, opt);
        if ((f < 0) != (fhi < 0) || f == 0.0) return bracketed_root(std::min(m, prev), std::max(m, prev), p, opt);
        if (m == -1.0 || m == 1.0) return std::nullopt;
        prev = m;
    }
    return std::nullopt;
}

}  // namespace detail

namespace detail {
/// Step the root from (gamma_from, m) to gamma_to in increments of at most opt.gamma_step.
inline std::optional<double> continue_between(double m, double gamma_from, const MeanFieldParameters& p,
                                              const MeanFieldOptions& opt) {
    MeanFieldParameters q = p;
    const double span = p.gamma - gamma_from;
    const int steps = std::max(1, static_cast<int>(std::ceil(span / opt.gamma_step)));
    for (int k = 1; k <= steps; ++k) {
        q.gamma = gamma_from + span * k / steps;
        auto next = continue_root(m, q, opt);
        if (!next) return std::nullopt;
        m = *next;
    }
    return m;
}
}  // namespace detail

/// Magnetization continued from m = 0 at gamma = 0. nullopt signals that the
/// continued root left [-1, 1] or ceased to exist: beyond the mean-field transition.
inline std::optional<double> solve_self_consistency(const MeanFieldParameters& p, const MeanFieldOptions& opt = {}) {
    validate(p);
    if (p.gamma < 0) throw ConfigError("gamma must be >= 0");
    return detail::continue_between(0.0, 0.0, p, opt);
}

/// Closed-form boundary gamma_c = [g^2 + (h - J z)^2] / g.
inline double phase_boundary(const MeanFieldParameters& p) {
    if (!(p.g > 0)) throw ConfigError("phase_boundary needs g > 0");
    const double a = p.h - p.J * p.z;
    return (p.g * p.g + a * a) / p.g;
}

/// gamma_c located by continuation: step until the root is lost, then bisect.
inline double continuation_gamma_c(const MeanFieldParameters& p, const MeanFieldOptions& opt = {},
                                   double gamma_max = 100.0, double tol = 1e-11) {
    validate(p);
    MeanFieldParameters q = p;
    double gamma = 0.0, m = 0.0;
    while (gamma < gamma_max) {
        q.gamma = std::min(gamma + opt.gamma_step, gamma_max);
        auto next = detail::continue_root(m, q, opt);
        if (!next) {
            double lo = gamma, hi = q.gamma;
            double m_lo = m;
            while (hi - lo > tol) {
                q.gamma = 0.5 * (lo + hi);
                auto r = detail::continue_root(m_lo, q, opt);
                if (r) {
                    lo = q.gamma;
                    m_lo = *r;
                } else {
                    hi = q.gamma;
                }
            }
            return 0.5 * (lo + hi);
        }
        gamma = q.gamma;
        m = *next;
    }
    throw NumericalError("continued root survives up to gamma = " + std::to_string(gamma_max));
}

/// (J, gamma_c) over a grid of couplings.
inline std::vector<std::pair<double, double>> boundary_curve(double g, double h, int z, const std::vector<double>& js) {
    std::vector<std::pair<double, double>> out;
    for (double j : js) out.emplace_back(j, phase_boundary({h, g, j, z, 0.0}));
    return out;
}

/// (gamma, m) along an ascending grid, continuing the root from one grid point to the next.
inline std::vector<std::pair<double, std::optional<double>>> magnetization_curve(MeanFieldParameters p,
                                                                                const std::vector<double>& gammas,
                                                                                const MeanFieldOptions& opt = {}) {
    validate(p);
    std::vector<std::pair<double, std::optional<double>>> out;
    std::optional<double> m = 0.0;
    double from = 0.0;
    for (double gamma : gammas) {
        if (gamma < from) throw ConfigError("magnetization_curve needs an ascending gamma grid starting at >= 0");
        if (m) {
            p.gamma = gamma;
            m = detail::continue_between(*m, from, p, opt);
        }
        from = gamma;
        out.emplace_back(gamma, m);
    }
    return out;
}

}  // namespace ptsim
