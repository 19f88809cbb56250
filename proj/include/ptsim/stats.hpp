#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>

namespace ptsim {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit needs >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("degenerate fit: all abscissae are equal");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

struct MeanError {
    double mean = 0.0;
    std::optional<double> standard_error;  // absent for a single sample
    std::size_t count = 0;
};

inline MeanError mean_and_stderr(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean of an empty sample");
    MeanError out;
    out.count = v.size();
    for (double x : v) out.mean += x;
    out.mean /= static_cast<double>(v.size());
    if (v.size() >= 2) {
        double ss = 0;
        for (double x : v) ss += (x - out.mean) * (x - out.mean);
        const double var = ss / static_cast<double>(v.size() - 1);
        out.standard_error = std::sqrt(var / static_cast<double>(v.size()));
    }
    return out;
}

}  // namespace ptsim
