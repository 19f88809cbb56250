#pragma once

// Time-averaged (diagonal-ensemble) density matrix of the mixed phase.
//
// With unit-norm right eigenvectors p_j (columns of P) and l_j the j-th column
// of (P^dag)^{-1}, the long-time average of the unnormalized T^dag T is
//
//   rho_ss  ~  sum_j (P^dag P)_jj  l_j l_j^dag  =  (P^{-1})^dag W P^{-1},
//
// because every cross term carries a phase exp(i (Re lambda_j - Re lambda_l) t)
// that averages to zero. Levels whose real parts agree within a tolerance do
// not dephase, so their cross terms are kept (block-diagonal W).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptsim/dynamics.hpp"
#include "ptsim/rng.hpp"
#include "ptsim/spectral.hpp"
#include "ptsim/states.hpp"
#include "ptsim/stats.hpp"

namespace ptsim {

/// Thrown when an operation that requires the mixed phase receives a purifying spectrum.
class PhaseError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct SteadyStateResult {
    DensityMatrix rho;
    double purity = 0.0;
    double sigma_z_mean = 0.0;  // site-averaged <sigma^z>
    double condition = 0.0;     // of P, carried for downstream filtering
    int merged_blocks = 0;      // degenerate real-part blocks with retained cross terms
    std::vector<std::string> warnings;
};

/// Tolerance for the mixed/pure decision when gamma is not at hand. In the mixed
/// phase every Im lambda equals gamma L, so the mean imaginary part recovers it.
inline double default_pt_tolerance(const Vector& eigenvalues) {
    return 1e-7 * std::max(eigenvalues.imag().mean(), 1.0);
}

inline double site_averaged_sigma_z(const Matrix& rho) {
    const int L = sites_for_dim(rho.rows());
    double acc = 0.0;
    for (std::int64_t x = 0; x < rho.rows(); ++x) {
        const int down = std::popcount(static_cast<std::uint64_t>(x));
        acc += rho(x, x).real() * static_cast<double>(L - 2 * down);
    }
    return acc / L / rho.trace().real();
}

/// Diagonal-ensemble steady state. Throws PhaseError on a purifying spectrum.
inline SteadyStateResult diagonal_ensemble(const SpectralData& s, double degeneracy_tol = 1e-9,
                                           double pt_tol = -1.0) {
    if (pt_tol < 0) pt_tol = default_pt_tolerance(s.eigenvalues);
    if (classify_pt(s, pt_tol) != Phase::mixed)
        throw PhaseError("diagonal ensemble requires the mixed phase; use dominant_projector for purifying spectra");
    if (!s.has_inverse()) throw NumericalError("diagonal ensemble needs P^{-1}, which is unavailable");

    const auto n = s.dim();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(),
              [&](auto a, auto b) { return s.eigenvalues(a).real() < s.eigenvalues(b).real(); });

    // A = W P^{-1}, with W_jj = |p_j|^2 and block off-diagonals (P^dag P)_jl.
    Matrix weighted = s.inverse;
    for (Eigen::Index j = 0; j < n; ++j) weighted.row(j) *= s.vectors.col(j).squaredNorm();
    SteadyStateResult out{DensityMatrix::maximally_mixed(0), 0.0, 0.0, s.condition, 0, {}};
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t end = start + 1;
        while (end < order.size() &&
               s.eigenvalues(order[end]).real() - s.eigenvalues(order[end - 1]).real() < degeneracy_tol)
            ++end;
        if (end - start > 1) {
            ++out.merged_blocks;
            for (std::size_t a = start; a < end; ++a)
                for (std::size_t b = start; b < end; ++b) {
                    if (a == b) continue;
                    const auto j = order[a], l = order[b];
                    const cplx w = s.vectors.col(j).dot(s.vectors.col(l));  // p_j^dag p_l
                    weighted.row(j) += w * s.inverse.row(l);
                }
        }
        start = end;
    }
    if (out.merged_blocks > 0)
        out.warnings.push_back(std::to_string(out.merged_blocks) +
                               " near-degenerate block(s) in Re lambda; intra-block coherences retained");
    if (s.ill_conditioned) out.warnings.push_back("eigenvector matrix is ill-conditioned (condition " +
                                                  std::to_string(s.condition) + ")");

    Matrix rho = s.inverse.adjoint() * weighted;
    rho = 0.5 * (rho + rho.adjoint()).eval();
    out.rho = DensityMatrix::normalized(std::move(rho));
    out.purity = out.rho.matrix().squaredNorm();
    out.sigma_z_mean = site_averaged_sigma_z(out.rho.matrix());
    return out;
}

/// Purifying-phase steady state: projector on the slowest-decaying eigenvector.
inline SteadyStateResult dominant_projector(const SpectralData& s) {
    const PureState psi = PureState::normalized(s.vectors.col(0));
    SteadyStateResult out{DensityMatrix::from_pure(psi), 1.0, 0.0, s.condition, 0, {}};
    out.sigma_z_mean = site_averaged_sigma_z(out.rho.matrix());
    return out;
}

/// Diagonal ensemble in the mixed phase, dominant projector otherwise.
inline SteadyStateResult steady_state(const SpectralData& s, double pt_tol = -1.0) {
    if (pt_tol < 0) pt_tol = default_pt_tolerance(s.eigenvalues);
    return classify_pt(s, pt_tol) == Phase::mixed ? diagonal_ensemble(s, 1e-9, pt_tol) : dominant_projector(s);
}

struct TimeAverageOptions {
    double t_burn = 0.0;
    std::uint64_t seed = 1;
    Ordering ordering = Ordering::t_dag_t;
    PropagationMethod method = PropagationMethod::automatic;
};

/// Brute-force long-time average of the evolving state at `n_samples` uniform
/// random times in [t_burn, t_max]. Each normalized sample is weighted by its
/// discarded trace relative to the slowest mode, i.e. the unnormalized
/// (shifted) rho(t) is averaged and normalized once at the end.
inline DensityMatrix long_time_average_oracle(const Matrix& h, const SpectralData& s, const DensityMatrix& rho0,
                                              double t_max, int n_samples, const TimeAverageOptions& opt = {}) {
    if (n_samples < 1 || !(t_max > opt.t_burn)) throw std::invalid_argument("invalid time-average window");
    Rng rng(opt.seed);
    std::vector<double> times(static_cast<std::size_t>(n_samples));
    for (auto& t : times) t = rng.uniform(opt.t_burn, t_max);
    std::sort(times.begin(), times.end());
    const auto traj = evolve_mixed(h, s, rho0, times, opt.ordering, opt.method);
    const double c = decay_shift(s);
    Matrix acc = Matrix::Zero(rho0.dim(), rho0.dim());
    for (std::size_t k = 0; k < times.size(); ++k)
        acc += std::exp(traj.norm_log[k] - 2.0 * c * times[k]) * traj.states[k].matrix();
    return DensityMatrix::normalized(std::move(acc));
}

/// Trace distance (1/2) |a - b|_1 for Hermitian a, b.
inline double trace_distance(const Matrix& a, const Matrix& b) {
    const Matrix diff = 0.5 * ((a - b) + (a - b).adjoint());
    return 0.5 * lapack::heev(diff, false).values.cwiseAbs().sum();
}

/// Slope c of -log2(Pi_ss) against L.
inline double purity_scaling_fit(const std::vector<std::pair<int, double>>& purity_by_sites) {
    if (purity_by_sites.size() < 3) throw std::invalid_argument("purity_scaling_fit needs at least 3 sizes");
    std::vector<double> x, y;
    for (const auto& [L, p] : purity_by_sites) {
        x.push_back(L);
        y.push_back(-std::log2(p));
    }
    return linear_fit(x, y).slope;
}

struct LogHistogram {
    std::vector<double> edges;         // bins + 1 edges, log-spaced on [floor, 1]
    std::vector<std::size_t> counts;   // bins
    std::size_t below_floor = 0;       // eigenvalues <= floor (including numerical zeros)
};

/// Log-binned histogram of the eigenvalues of rho on [floor, 1].
inline LogHistogram eigenvalue_histogram(const DensityMatrix& rho, int bins = 64, double floor = 1e-16) {
    if (bins < 1 || !(floor > 0 && floor < 1)) throw std::invalid_argument("invalid histogram binning");
    const Matrix sym = 0.5 * (rho.matrix() + rho.matrix().adjoint());
    const RealVector phi = lapack::heev(sym, false).values;
    LogHistogram out;
    const double lo = std::log10(floor);
    for (int k = 0; k <= bins; ++k) out.edges.push_back(std::pow(10.0, lo + (0.0 - lo) * k / bins));
    out.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double v : phi) {
        if (v <= floor) {
            ++out.below_floor;
            continue;
        }
        const double f = (std::log10(v) - lo) / (0.0 - lo);
        const int bin = std::clamp(static_cast<int>(f * bins), 0, bins - 1);
        ++out.counts[static_cast<std::size_t>(bin)];
    }
    return out;
}

// Binary dump: 16-byte header ("RHOSS", three zero bytes, int64 dim), then
// dim * dim row-major (re, im) pairs, all little-endian.
inline void write_rho_binary(const std::string& path, const DensityMatrix& rho) {
    static_assert(std::endian::native == std::endian::little, "binary dump assumes a little-endian host");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    const char magic[8] = {'R', 'H', 'O', 'S', 'S', 0, 0, 0};
    const std::int64_t dim = rho.dim();
    f.write(magic, sizeof magic);
    f.write(reinterpret_cast<const char*>(&dim), sizeof dim);
    for (std::int64_t i = 0; i < dim; ++i)
        for (std::int64_t j = 0; j < dim; ++j) {
            const double pair[2] = {rho.matrix()(i, j).real(), rho.matrix()(i, j).imag()};
            f.write(reinterpret_cast<const char*>(pair), sizeof pair);
        }
    if (!f) throw std::runtime_error("failed writing " + path);
}

inline Matrix read_rho_binary(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    char magic[8];
    std::int64_t dim = 0;
    f.read(magic, sizeof magic);
    f.read(reinterpret_cast<char*>(&dim), sizeof dim);
    if (!f || std::string(magic, 5) != "RHOSS" || dim <= 0) throw std::runtime_error(path + " is not a RHOSS file");
    Matrix m(dim, dim);
    for (std::int64_t i = 0; i < dim; ++i)
        for (std::int64_t j = 0; j < dim; ++j) {
            double pair[2];
            f.read(reinterpret_cast<char*>(pair), sizeof pair);
            m(i, j) = cplx{pair[0], pair[1]};
        }
    if (!f) throw std::runtime_error(path + " is truncated");
    return m;
}

}  // namespace ptsim
