#pragma once

// Non-Hermitian Ising chain
//
//   H = sum_i [ h_i Z_i + g X_i + i gamma (1 + Y_i) ] + sum_<ij> J_ij Z_i Z_j
//
// and its single-site toy version. The anti-Hermitian part is +i gamma (1 + Y),
// so the slowest-decaying mode in a normalized trajectory is the eigenvector
// with the LARGEST imaginary eigenvalue part. Flipping gamma -> -gamma
// conjugates the spectrum and leaves normalized observables unchanged.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "ptsim/operators.hpp"
#include "ptsim/rng.hpp"
#include "ptsim/types.hpp"

namespace ptsim {

enum class Boundary { open, periodic };

inline const char* to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }

inline Boundary boundary_from_string(const std::string& s) {
    if (s == "open") return Boundary::open;
    if (s == "periodic") return Boundary::periodic;
    throw ConfigError("boundary must be \"open\" or \"periodic\", got \"" + s + "\"");
}

struct ChainParameters {
    int sites = 8;
    double h0 = 1.25;
    double epsilon = 0.0;            // half-width of the uniform field disorder
    double g = 1.0;
    double gamma = 0.0;
    double J = 0.95;
    double coupling_disorder = 0.0;  // relative half-width: J_b in J [1 - d, 1 + d]
    Boundary boundary = Boundary::open;
    std::uint64_t seed = 0;
    std::uint64_t realization = 0;

    bool operator==(const ChainParameters&) const = default;
};

struct TLSParameters {
    double b = 0.0;
    double theta = 0.0;

    bool operator==(const TLSParameters&) const = default;
};

/// Largest register size the builders accept. PTSIM_MAX_L overrides the default of 14.
inline int max_sites() {
    if (const char* env = std::getenv("PTSIM_MAX_L")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1 && v <= 30) return v;
        } catch (const std::exception&) {
        }
        throw ConfigError(std::string("PTSIM_MAX_L must be an integer in [1, 30], got \"") + env + "\"");
    }
    return 14;
}

inline std::vector<std::string> validate(const ChainParameters& p) {
    if (p.sites < 1) throw ConfigError("L must be >= 1");
    if (p.gamma < 0) throw ConfigError("gamma must be >= 0");
    if (p.epsilon < 0 || p.coupling_disorder < 0) throw ConfigError("disorder widths must be >= 0");
    std::vector<std::string> warnings;
    if (p.epsilon > std::abs(p.h0) / 10)
        warnings.push_back("field disorder epsilon = " + std::to_string(p.epsilon) + " exceeds h0/10");
    return warnings;
}

inline std::size_t bond_count(int sites, Boundary boundary) {
    if (sites < 2) return 0;
    if (boundary == Boundary::periodic && sites > 2) return static_cast<std::size_t>(sites);
    return static_cast<std::size_t>(sites - 1);
}

/// h_i uniform on [h0 - epsilon, h0 + epsilon]; the stream depends only on (seed, L, realization).
inline std::vector<double> sample_fields(const ChainParameters& p) {
    std::vector<double> h(static_cast<std::size_t>(p.sites), p.h0);
    if (p.epsilon == 0.0) return h;
    Rng rng(derive_seed(p.seed, {static_cast<std::uint64_t>(p.sites), p.realization, 0}));
    for (auto& x : h) x = rng.uniform(p.h0 - p.epsilon, p.h0 + p.epsilon);
    return h;
}

/// J_b = J (1 + d u), u uniform on [-1, 1]; independent stream from the fields.
inline std::vector<double> sample_couplings(const ChainParameters& p) {
    std::vector<double> j(bond_count(p.sites, p.boundary), p.J);
    if (p.coupling_disorder == 0.0) return j;
    Rng rng(derive_seed(p.seed, {static_cast<std::uint64_t>(p.sites), p.realization, 1}));
    for (auto& x : j) x = p.J * (1.0 + p.coupling_disorder * rng.uniform(-1.0, 1.0));
    return j;
}

/// Toy model M_0 + i b = [[i b, 1 + b], [1 - b, i b]].
inline Matrix build_tls(const TLSParameters& p) {
    Matrix m(2, 2);
    m << I * p.b, 1.0 + p.b, 1.0 - p.b, I * p.b;
    return m;
}

namespace detail {
inline std::pair<int, int> bond_sites(std::size_t b, int sites) {
    return {static_cast<int>(b), static_cast<int>((b + 1) % static_cast<std::size_t>(sites))};
}
}  // namespace detail

/// Dense chain Hamiltonian with explicit fields and bond couplings.
inline Matrix build_chain(const ChainParameters& p, const std::vector<double>& fields,
                          const std::vector<double>& couplings) {
    const int L = p.sites;
    if (L < 1) throw ConfigError("L must be >= 1");
    if (L > max_sites())
        throw ConfigError("L = " + std::to_string(L) + " exceeds the configured maximum " +
                          std::to_string(max_sites()) + " (set PTSIM_MAX_L to raise it)");
    if (static_cast<int>(fields.size()) != L)
        throw std::invalid_argument("fields has length " + std::to_string(fields.size()) + ", expected L");
    if (couplings.size() != bond_count(L, p.boundary))
        throw std::invalid_argument("couplings length does not match the bond count");

    const std::int64_t dim = register_dim(L);
    Matrix h = Matrix::Zero(dim, dim);
    // X_i + i gamma Y_i flips bit i: amplitude g + gamma lowering the bit, g - gamma raising it.
    const cplx lower{p.g + p.gamma, 0.0};
    const cplx raise{p.g - p.gamma, 0.0};
    for (std::int64_t x = 0; x < dim; ++x) {
        double diag = 0.0;
        for (int i = 0; i < L; ++i) diag += fields[static_cast<std::size_t>(i)] * spin_z(x, i, L);
        for (std::size_t b = 0; b < couplings.size(); ++b) {
            const auto [i, j] = detail::bond_sites(b, L);
            diag += couplings[b] * spin_z(x, i, L) * spin_z(x, j, L);
        }
        h(x, x) = cplx{diag, p.gamma * L};
        for (int i = 0; i < L; ++i) {
            const std::int64_t mask = std::int64_t{1} << (L - 1 - i);
            h(x ^ mask, x) += site_bit(x, i, L) ? lower : raise;
        }
    }
    return h;
}

/// Chain with uniform coupling J on every bond.
inline Matrix build_chain(const ChainParameters& p, const std::vector<double>& fields) {
    return build_chain(p, fields, std::vector<double>(bond_count(p.sites, p.boundary), p.J));
}

/// Chain with both disorder draws taken from the parameters' seed and realization.
inline Matrix build_chain(const ChainParameters& p) {
    return build_chain(p, sample_fields(p), sample_couplings(p));
}

/// All 2^L classical energies sum_i h_i s_i + sum_b J_b s_i s_j, sorted ascending.
/// This is the spectrum (minus the i gamma L offset) on the gamma = 1 line.
inline std::vector<double> classical_ising_spectrum(const std::vector<double>& fields,
                                                     const std::vector<double>& couplings, Boundary boundary) {
    const int L = static_cast<int>(fields.size());
    if (L < 1 || L > 24) throw std::invalid_argument("classical_ising_spectrum supports 1 <= L <= 24");
    if (couplings.size() != bond_count(L, boundary))
        throw std::invalid_argument("couplings length does not match the bond count");
    const std::int64_t dim = register_dim(L);
    std::vector<double> e(static_cast<std::size_t>(dim));
    for (std::int64_t x = 0; x < dim; ++x) {
        double v = 0.0;
        for (int i = 0; i < L; ++i) v += fields[static_cast<std::size_t>(i)] * spin_z(x, i, L);
        for (std::size_t b = 0; b < couplings.size(); ++b) {
            const auto [i, j] = detail::bond_sites(b, L);
            v += couplings[b] * spin_z(x, i, L) * spin_z(x, j, L);
        }
        e[static_cast<std::size_t>(x)] = v;
    }
    std::sort(e.begin(), e.end());
    return e;
}

inline std::vector<double> classical_ising_spectrum(const std::vector<double>& fields, double J,
                                                     Boundary boundary) {
    return classical_ising_spectrum(
        fields, std::vector<double>(bond_count(static_cast<int>(fields.size()), boundary), J), boundary);
}

}  // namespace ptsim
