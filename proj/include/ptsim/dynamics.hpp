#pragma once

// Normalized evolution under T(t) = exp(-i H t).
//
// All propagators are shifted by the slowest decay rate c = max Im lambda:
// the returned matrix is T(t) e^{-c t} and `log_scale` = c t, so the true
// propagator is e^{log_scale} * matrix. Normalized states do not depend on
// the shift; `norm_log` in the trajectories records everything that was
// divided out.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "ptsim/spectral.hpp"
#include "ptsim/states.hpp"
#include "ptsim/types.hpp"

namespace ptsim {

enum class PropagationMethod { automatic, eigenbasis, expm };

inline const char* to_string(PropagationMethod m) {
    switch (m) {
        case PropagationMethod::automatic: return "auto";
        case PropagationMethod::eigenbasis: return "eigenbasis";
        case PropagationMethod::expm: return "expm";
    }
    return "?";
}

/// Which side T sits on in the mixed-state update. `t_dag_t` (T^dag rho T) is the
/// ordering whose long-time average is the diagonal ensemble; `t_t_dag` is
/// T rho T^dag. Purities agree for rho0 proportional to the identity.
enum class Ordering { t_dag_t, t_t_dag };

inline const char* to_string(Ordering o) { return o == Ordering::t_dag_t ? "TdagT" : "TTdag"; }

inline constexpr double kEigenpathConditionLimit = 1e8;

struct Propagator {
    Matrix matrix;
    double log_scale = 0.0;
    bool via_expm = false;
};

inline bool eigenpath_valid(const SpectralData& s) {
    return s.has_inverse() && s.condition < kEigenpathConditionLimit;
}

inline double decay_shift(const SpectralData& s) { return s.eigenvalues(0).imag(); }

namespace detail {

inline bool use_expm(const SpectralData& s, PropagationMethod method) {
    if (method == PropagationMethod::expm) return true;
    if (method == PropagationMethod::eigenbasis) {
        if (!s.has_inverse()) throw NumericalError("eigenbasis propagation requested but P is not invertible");
        return false;
    }
    return !eigenpath_valid(s);
}

inline Vector shifted_phases(const SpectralData& s, double t) {
    const double c = decay_shift(s);
    Vector d(s.dim());
    for (Eigen::Index k = 0; k < s.dim(); ++k) d(k) = std::exp(-I * (s.eigenvalues(k) - I * c) * t);
    return d;
}

inline Matrix shifted_expm(const Matrix& h, double c, double t) {
    const auto n = h.rows();
    const Matrix generator = (-I * t) * (h - (I * c) * Matrix::Identity(n, n));
    Matrix out = generator.exp();
    if (!out.allFinite()) throw NumericalError("matrix exponential overflowed at t = " + std::to_string(t));
    return out;
}

inline void check_times(const std::vector<double>& times) {
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < 0) throw std::invalid_argument("evolution times must be >= 0");
        if (k > 0 && times[k] < times[k - 1]) throw std::invalid_argument("evolution times must be ascending");
    }
}

}  // namespace detail

/// T(t) e^{-c t}. Uses P diag(e^{-i lambda t}) P^{-1} when P is well conditioned,
/// scaling-and-squaring on H otherwise.
inline Propagator propagator(const Matrix& h, const SpectralData& s, double t,
                             PropagationMethod method = PropagationMethod::automatic) {
    if (t < 0) throw std::invalid_argument("propagator needs t >= 0");
    Propagator out;
    const double c = decay_shift(s);
    out.log_scale = c * t;
    out.via_expm = detail::use_expm(s, method);
    if (out.via_expm)
        out.matrix = detail::shifted_expm(h, c, t);
    else
        out.matrix = s.vectors * detail::shifted_phases(s, t).asDiagonal() * s.inverse;
    return out;
}

struct PureTrajectory {
    std::vector<double> times;
    std::vector<PureState> states;
    std::vector<double> norm_log;  // log |T(t) psi0|
};

/// psi(t) = T(t) psi0 / |T(t) psi0| at each requested time (ascending).
inline PureTrajectory evolve_pure(const Matrix& h, const SpectralData& s, const PureState& psi0,
                                  const std::vector<double>& times,
                                  PropagationMethod method = PropagationMethod::automatic) {
    detail::check_times(times);
    PureTrajectory out;
    out.times = times;
    const double c = decay_shift(s);
    if (!detail::use_expm(s, method)) {
        const Vector coeffs = s.inverse * psi0.amplitudes();
        for (double t : times) {
            Vector psi = s.vectors * detail::shifted_phases(s, t).cwiseProduct(coeffs);
            const double n = psi.norm();
            if (!(n > 0) || !std::isfinite(n))
                throw NumericalError("state norm underflowed at t = " + std::to_string(t));
            out.states.emplace_back(psi / n);
            out.norm_log.push_back(std::log(n) + c * t);
        }
        return out;
    }
    // Stepwise with renormalization after every step keeps the norm representable.
    Vector psi = psi0.amplitudes();
    double acc = 0.0, prev = 0.0, last_dt = -1.0;
    Matrix step;
    for (double t : times) {
        const double dt = t - prev;
        if (dt > 0) {
            if (dt != last_dt) {
                step = detail::shifted_expm(h, c, dt);
                last_dt = dt;
            }
            psi = step * psi;
            const double n = psi.norm();
            if (!(n > 0) || !std::isfinite(n))
                throw NumericalError("state norm underflowed at t = " + std::to_string(t));
            psi /= n;
            acc += std::log(n);
        }
        prev = t;
        out.states.emplace_back(psi);
        out.norm_log.push_back(acc + c * t);
    }
    return out;
}

struct MixedTrajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::vector<double> norm_log;  // log Tr[T rho0 T^dag] (or the T^dag T ordering)
};

/// rho(t) = T^dag rho0 T / Tr (default) or T rho0 T^dag / Tr.
inline MixedTrajectory evolve_mixed(const Matrix& h, const SpectralData& s, const DensityMatrix& rho0,
                                    const std::vector<double>& times, Ordering ordering = Ordering::t_dag_t,
                                    PropagationMethod method = PropagationMethod::automatic) {
    detail::check_times(times);
    MixedTrajectory out;
    out.times = times;
    const double c = decay_shift(s);
    const auto d = rho0.dim();
    const bool identity_like =
        (rho0.matrix() - Matrix::Identity(d, d) / static_cast<double>(d)).cwiseAbs().maxCoeff() == 0.0;

    auto sandwich = [&](const Matrix& t_mat, const Matrix& rho) -> Matrix {
        if (identity_like)
            return ordering == Ordering::t_dag_t ? Matrix(t_mat.adjoint() * t_mat) / static_cast<double>(d)
                                                 : Matrix(t_mat * t_mat.adjoint()) / static_cast<double>(d);
        return ordering == Ordering::t_dag_t ? Matrix(t_mat.adjoint() * rho * t_mat)
                                             : Matrix(t_mat * rho * t_mat.adjoint());
    };
    auto record = [&](Matrix rho, double log_acc, double t) {
        const double tr = rho.trace().real();
        if (!(tr > 0) || !std::isfinite(tr)) throw NumericalError("trace underflowed at t = " + std::to_string(t));
        rho = (0.5 / tr) * (rho + rho.adjoint()).eval();
        out.states.emplace_back(std::move(rho));
        out.norm_log.push_back(log_acc + std::log(tr) + 2.0 * c * t);
        return std::log(tr);
    };

    if (!detail::use_expm(s, method)) {
        for (double t : times) {
            const Matrix t_mat = s.vectors * detail::shifted_phases(s, t).asDiagonal() * s.inverse;
            record(sandwich(t_mat, rho0.matrix()), 0.0, t);
        }
        return out;
    }
    // T(t_k) = T(t_{k-1}) U(dt), and U commutes with T, so both orderings update stepwise.
    Matrix rho = rho0.matrix();
    double acc = 0.0, prev = 0.0, last_dt = -1.0;
    Matrix step;
    for (double t : times) {
        const double dt = t - prev;
        if (dt > 0) {
            if (dt != last_dt) {
                step = detail::shifted_expm(h, c, dt);
                last_dt = dt;
            }
            rho = ordering == Ordering::t_dag_t ? Matrix(step.adjoint() * rho * step)
                                                : Matrix(step * rho * step.adjoint());
            const double tr = rho.trace().real();
            if (!(tr > 0) || !std::isfinite(tr)) throw NumericalError("trace underflowed at t = " + std::to_string(t));
            rho /= tr;
            acc += std::log(tr);
        }
        prev = t;
        record(rho, acc, t);
    }
    return out;
}

/// Time grid: `count` points on [t_min, t_max], logarithmic when `log_spacing` (t_min > 0).
inline std::vector<double> time_grid(double t_min, double t_max, int count, bool log_spacing) {
    if (count < 1 || t_max < t_min || t_min < 0) throw ConfigError("invalid time grid");
    if (log_spacing && t_min <= 0) throw ConfigError("logarithmic time grid needs t_min > 0");
    std::vector<double> out;
    for (int k = 0; k < count; ++k) {
        const double f = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
        out.push_back(log_spacing ? t_min * std::pow(t_max / t_min, f) : t_min + (t_max - t_min) * f);
    }
    return out;
}

/// One row of a dynamics time series (CSV columns t, purity, S2, norm_log).
struct DynamicsPoint {
    double t;
    double purity;
    double s2;
    double norm_log;
};

inline std::vector<DynamicsPoint> series(const MixedTrajectory& tr, int cut) {
    std::vector<DynamicsPoint> out;
    for (std::size_t k = 0; k < tr.times.size(); ++k)
        out.push_back({tr.times[k], purity(tr.states[k]),
                       cut > 0 ? renyi2_reduced(tr.states[k], cut) : 0.0, tr.norm_log[k]});
    return out;
}

inline std::vector<DynamicsPoint> series(const PureTrajectory& tr, int cut) {
    std::vector<DynamicsPoint> out;
    for (std::size_t k = 0; k < tr.times.size(); ++k)
        out.push_back({tr.times[k], 1.0, cut > 0 ? renyi2_halfcut(tr.states[k], cut) : 0.0, tr.norm_log[k]});
    return out;
}

}  // namespace ptsim
