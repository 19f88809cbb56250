#pragma once

// Eigendecomposition of non-Hermitian operators and the diagnostics derived
// from it: PT classification, purification gap, exceptional-point search,
// level-spacing ratios, effective dimension of the eigenbasis and eigenstate
// entanglement.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "ptsim/hamiltonians.hpp"
#include "ptsim/lapack.hpp"
#include "ptsim/states.hpp"
#include "ptsim/stats.hpp"
#include "ptsim/types.hpp"

namespace ptsim {

enum class Phase { mixed, pure };

inline const char* to_string(Phase p) { return p == Phase::mixed ? "mixed" : "pure"; }

/// Eigenpairs of H sorted by (Im desc, Re asc). Columns of `vectors` are
/// unit-norm right eigenvectors.
struct SpectralData {
    Vector eigenvalues;
    Matrix vectors;
    Matrix inverse;               // empty if not requested or P is exactly singular
    RealVector singular_values;   // of P, descending; empty if not requested
    double residual = 0.0;        // max_k |H p_k - lambda_k p_k|
    double condition = std::numeric_limits<double>::quiet_NaN();
    double operator_norm = 0.0;   // |H|_2
    bool ill_conditioned = false; // condition > 1e10 or P singular
    bool hermitian = false;       // H == H^dag exactly; P is then unitary

    std::int64_t dim() const { return eigenvalues.size(); }
    int sites() const { return sites_for_dim(dim()); }
    bool has_inverse() const { return inverse.size() > 0; }
};

struct DecomposeOptions {
    bool inverse = true;
    bool singular_values = true;
    std::string context;  // parameters echoed in error messages
};

inline constexpr double kIllConditioned = 1e10;

/// Largest singular value by power iteration on A^dag A.
inline double spectral_norm(const Matrix& a, int max_iterations = 300, double rtol = 1e-12) {
    if (a.size() == 0) return 0.0;
    Vector v(a.cols());
    for (Eigen::Index k = 0; k < v.size(); ++k)
        v(k) = cplx{1.0 / (1.0 + static_cast<double>(k)), std::sin(1.0 + static_cast<double>(k))};
    v.normalize();
    double sigma2 = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
        Vector w = a.adjoint() * (a * v);
        const double next = w.norm();
        if (next == 0.0) return 0.0;
        v = w / next;
        if (std::abs(next - sigma2) <= rtol * next) {
            sigma2 = next;
            break;
        }
        sigma2 = next;
    }
    return std::sqrt(sigma2);
}

namespace detail {

inline std::vector<Eigen::Index> spectrum_order(const Vector& ev) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(ev.size()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (ev(a).imag() != ev(b).imag()) return ev(a).imag() > ev(b).imag();
        return ev(a).real() < ev(b).real();
    });
    return idx;
}

inline bool is_exactly_hermitian(const Matrix& h) {
    for (Eigen::Index j = 0; j < h.cols(); ++j)
        for (Eigen::Index i = 0; i <= j; ++i)
            if (h(i, j) != std::conj(h(j, i))) return false;
    return true;
}

inline bool is_real(const Matrix& h) { return h.imag().cwiseAbs().maxCoeff() == 0.0; }

}  // namespace detail

/// Full eigendecomposition with residual and conditioning diagnostics.
/// Throws NumericalError when the eigensolver fails or the residual exceeds 1e-8 |H|_2.
inline SpectralData decompose(const Matrix& h, const DecomposeOptions& opt = {}) {
    if (h.rows() != h.cols() || h.rows() == 0) throw std::invalid_argument("decompose needs a non-empty square matrix");
    const std::string where = opt.context.empty() ? std::string{} : " [" + opt.context + "]";
    SpectralData s;
    s.hermitian = detail::is_exactly_hermitian(h);

    Vector values;
    Matrix vectors;
    try {
        if (s.hermitian) {
            auto he = lapack::heev(h, true);
            values = he.values.cast<cplx>();
            vectors = std::move(he.vectors);
        } else {
            auto ge = lapack::zgeev(h, true);
            values = std::move(ge.values);
            vectors = std::move(ge.right_vectors);
        }
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("eigensolver did not converge") + where + ": " + e.what());
    }

    const auto order = detail::spectrum_order(values);
    s.eigenvalues.resize(values.size());
    s.vectors.resize(vectors.rows(), vectors.cols());
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto src = order[k];
        const auto dst = static_cast<Eigen::Index>(k);
        s.eigenvalues(dst) = values(src);
        s.vectors.col(dst) = vectors.col(src).normalized();
    }

    s.operator_norm = s.hermitian ? s.eigenvalues.cwiseAbs().maxCoeff() : spectral_norm(h);
    const Matrix r = h * s.vectors - s.vectors * s.eigenvalues.asDiagonal();
    s.residual = r.colwise().norm().maxCoeff();
    if (!(s.residual <= 1e-8 * std::max(s.operator_norm, 1e-300)))
        throw NumericalError("eigendecomposition residual " + std::to_string(s.residual) + " exceeds 1e-8 |H|" + where);

    if (opt.inverse) {
        if (s.hermitian) {
            s.inverse = s.vectors.adjoint();
        } else {
            try {
                s.inverse = lapack::inverse(s.vectors);
            } catch (const NumericalError&) {
                s.inverse.resize(0, 0);
            }
        }
    }

    if (opt.singular_values) {
        s.singular_values = lapack::singular_values(s.vectors);
        const double smin = s.singular_values(s.singular_values.size() - 1);
        s.condition = smin > 0 ? s.singular_values(0) / smin : std::numeric_limits<double>::infinity();
    } else if (s.hermitian) {
        s.condition = 1.0;
    } else if (s.has_inverse()) {
        s.condition = spectral_norm(s.vectors) * spectral_norm(s.inverse);
    }
    s.ill_conditioned = !(s.condition <= kIllConditioned) || (opt.inverse && !s.has_inverse());
    return s;
}

/// Eigenvalues only, sorted like SpectralData. Uses the Hermitian or real-symmetric
/// solvers when H allows it.
inline Vector eigenvalues_only(const Matrix& h) {
    if (h.rows() != h.cols() || h.rows() == 0) throw std::invalid_argument("eigenvalues_only needs a square matrix");
    Vector values;
    if (detail::is_exactly_hermitian(h)) {
        if (detail::is_real(h))
            values = lapack::dsyevd_values(h.real()).cast<cplx>();
        else
            values = lapack::heev(h, false).values.cast<cplx>();
    } else {
        values = lapack::zgeev(h, false).values;
    }
    const auto order = detail::spectrum_order(values);
    Vector out(values.size());
    for (std::size_t k = 0; k < order.size(); ++k) out(static_cast<Eigen::Index>(k)) = values(order[k]);
    return out;
}

/// Scale-aware default for classify_pt: 1e-7 * gamma * L, floored at 1e-7 so the
/// Hermitian limit (gamma = 0) is classified by roundoff-level agreement.
inline double default_pt_tolerance(double gamma, int sites) { return 1e-7 * std::max(gamma * sites, 1.0); }

/// Mixed iff every eigenvalue has the same imaginary part (spread below tol).
inline Phase classify_pt(const Vector& eigenvalues, double tol) {
    const auto im = eigenvalues.imag();
    return (im.maxCoeff() - im.minCoeff() < tol) ? Phase::mixed : Phase::pure;
}

inline Phase classify_pt(const SpectralData& s, double tol) { return classify_pt(s.eigenvalues, tol); }

/// Im lambda_(1) - Im lambda_(2) for the two slowest-decaying modes.
inline double purification_gap(const Vector& eigenvalues) {
    if (eigenvalues.size() < 2) return 0.0;
    double first = -std::numeric_limits<double>::infinity(), second = first;
    for (const auto& l : eigenvalues) {
        const double y = l.imag();
        if (y > first) {
            second = first;
            first = y;
        } else if (y > second) {
            second = y;
        }
    }
    return first - second;
}

inline double purification_gap(const SpectralData& s) { return purification_gap(s.eigenvalues); }

/// Gap above which a cell is declared purifying: max(1e-6, 1e-4 gamma).
inline double pure_gap_threshold(double gamma) { return std::max(1e-6, 1e-4 * gamma); }

struct GammaCResult {
    double gamma_c = 0.0;
    double gamma_lo = 0.0;  // final bracket, mixed side
    double gamma_hi = 0.0;  // final bracket, purifying side
    std::vector<double> bracket_widths;
    std::array<cplx, 2> pair_above{};  // two slowest modes at gamma_hi
    std::array<cplx, 2> pair_below{};  // their nearest partners (in Re) at gamma_lo
};

/// Bisection for the first exceptional point in gamma with the disorder of `p`
/// held fixed. The bracket must be mixed at gamma_lo and purifying at gamma_hi.
inline GammaCResult find_gamma_c(ChainParameters p, double gamma_lo, double gamma_hi, double tol) {
    if (!(gamma_lo < gamma_hi) || !(tol > 0)) throw ConfigError("find_gamma_c needs gamma_lo < gamma_hi and tol > 0");
    const auto fields = sample_fields(p);
    const auto couplings = sample_couplings(p);
    auto spectrum_at = [&](double gamma) {
        p.gamma = gamma;
        return eigenvalues_only(build_chain(p, fields, couplings));
    };
    auto purifies = [](const Vector& ev, double gamma) { return purification_gap(ev) > pure_gap_threshold(gamma); };

    Vector lo_ev = spectrum_at(gamma_lo);
    Vector hi_ev = spectrum_at(gamma_hi);
    if (purifies(lo_ev, gamma_lo) || !purifies(hi_ev, gamma_hi))
        throw ConfigError("invalid bracket: gamma_lo must be mixed and gamma_hi purifying");

    GammaCResult out;
    double lo = gamma_lo, hi = gamma_hi;
    out.bracket_widths.push_back(hi - lo);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        Vector ev = spectrum_at(mid);
        if (purifies(ev, mid)) {
            hi = mid;
            hi_ev = std::move(ev);
        } else {
            lo = mid;
            lo_ev = std::move(ev);
        }
        out.bracket_widths.push_back(hi - lo);
    }
    out.gamma_lo = lo;
    out.gamma_hi = hi;
    out.gamma_c = 0.5 * (lo + hi);
    // hi_ev is sorted by Im descending: the first two entries collided.
    out.pair_above = {hi_ev(0), hi_ev.size() > 1 ? hi_ev(1) : hi_ev(0)};
    const double centre = 0.5 * (out.pair_above[0].real() + out.pair_above[1].real());
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(lo_ev.size()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::partial_sort(idx.begin(), idx.begin() + std::min<std::ptrdiff_t>(2, lo_ev.size()), idx.end(),
                      [&](auto a, auto b) { return std::abs(lo_ev(a).real() - centre) < std::abs(lo_ev(b).real() - centre); });
    out.pair_below = {lo_ev(idx[0]), lo_ev(idx.size() > 1 ? idx[1] : idx[0])};
    return out;
}

struct LevelStatistics {
    std::vector<double> r_values;
    double r_mean = 0.0;
    std::vector<int> histogram;  // 50 equal bins on [0, 1]
};

inline constexpr int kRHistogramBins = 50;

/// Adjacent-gap ratios of the real parts. Levels closer than 1e-12 are merged.
/// `central_fraction` < 1 keeps only that fraction of levels around the middle of the spectrum.
inline LevelStatistics r_statistics(const Vector& eigenvalues, double central_fraction = 1.0) {
    std::vector<double> e(static_cast<std::size_t>(eigenvalues.size()));
    for (std::size_t k = 0; k < e.size(); ++k) e[k] = eigenvalues(static_cast<Eigen::Index>(k)).real();
    std::sort(e.begin(), e.end());
    std::vector<double> levels;
    for (double x : e)
        if (levels.empty() || x - levels.back() >= 1e-12) levels.push_back(x);
    if (central_fraction < 1.0) {
        const auto n = levels.size();
        const auto keep = static_cast<std::size_t>(std::ceil(central_fraction * static_cast<double>(n)));
        const auto first = (n - std::min(keep, n)) / 2;
        levels = std::vector<double>(levels.begin() + static_cast<std::ptrdiff_t>(first),
                                     levels.begin() + static_cast<std::ptrdiff_t>(first + std::min(keep, n)));
    }
    if (levels.size() < 3) throw std::invalid_argument("r_statistics needs at least 3 distinct levels");

    LevelStatistics out;
    out.histogram.assign(kRHistogramBins, 0);
    for (std::size_t i = 1; i + 1 < levels.size(); ++i) {
        const double a = levels[i] - levels[i - 1];
        const double b = levels[i + 1] - levels[i];
        const double r = std::min(a, b) / std::max(a, b);
        out.r_values.push_back(r);
        out.r_mean += r;
        out.histogram[static_cast<std::size_t>(std::min(kRHistogramBins - 1, static_cast<int>(r * kRHistogramBins)))]++;
    }
    out.r_mean /= static_cast<double>(out.r_values.size());
    return out;
}

inline LevelStatistics r_statistics(const SpectralData& s, double central_fraction = 1.0) {
    return r_statistics(s.eigenvalues, central_fraction);
}

enum class SingularWeighting { squared, linear };

/// Participation ratio of the normalized singular-value weights of P. With the
/// default squared weights p_k = s_k^2 / sum s^2, a unitary P gives exactly 2^L.
inline double effective_dimension(const RealVector& singular_values,
                                  SingularWeighting weighting = SingularWeighting::squared) {
    if (singular_values.size() == 0) throw std::invalid_argument("effective_dimension needs singular values");
    const RealVector w = weighting == SingularWeighting::squared ? RealVector(singular_values.array().square())
                                                                 : singular_values;
    const double total = w.sum();
    if (!(total > 0)) throw NumericalError("singular values sum to zero");
    return 1.0 / (w / total).squaredNorm();
}

inline double effective_dimension(const SpectralData& s, SingularWeighting weighting = SingularWeighting::squared) {
    return effective_dimension(s.singular_values, weighting);
}

/// Slope of log2(D_eff) against L.
inline double fit_alpha(const std::vector<std::pair<int, double>>& d_eff_by_sites) {
    if (d_eff_by_sites.size() < 3) throw std::invalid_argument("fit_alpha needs at least 3 sizes");
    std::vector<double> x, y;
    for (const auto& [L, d] : d_eff_by_sites) {
        x.push_back(L);
        y.push_back(std::log2(d));
    }
    return linear_fit(x, y).slope;
}

struct EigenstateEntropy {
    double energy;  // Re lambda
    double s2;
};

/// S2 of sites [0, cut) for every right eigenvector, sorted by Re lambda.
inline std::vector<EigenstateEntropy> eigenstate_entropy_profile(const SpectralData& s, int cut) {
    detail::check_cut(cut, s.sites());
    std::vector<EigenstateEntropy> out;
    out.reserve(static_cast<std::size_t>(s.dim()));
    for (Eigen::Index k = 0; k < s.dim(); ++k) {
        const PureState psi = PureState::normalized(s.vectors.col(k));
        out.push_back({s.eigenvalues(k).real(), renyi2_halfcut(psi, cut)});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.energy < b.energy; });
    return out;
}

}  // namespace ptsim
