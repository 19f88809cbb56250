#pragma once

// Phase-diagram driver. A scan is the Cartesian product of gamma, J, L and
// disorder realizations; every cell is an independent work unit. Disorder
// draws depend only on (base_seed, L, realization), so a given realization
// is the same sample at every gamma and J and extending a grid never
// reshuffles existing cells.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "ptsim/csv.hpp"
#include "ptsim/dynamics.hpp"
#include "ptsim/hamiltonians.hpp"
#include "ptsim/spectral.hpp"
#include "ptsim/stats.hpp"
#include "ptsim/steady_state.hpp"

namespace ptsim {

enum class Observable { gap, purity_ss, alpha, r_mean, entropy_profile, histogram };

inline const char* to_string(Observable o) {
    switch (o) {
        case Observable::gap: return "gap";
        case Observable::purity_ss: return "purity_ss";
        case Observable::alpha: return "alpha";
        case Observable::r_mean: return "r_mean";
        case Observable::entropy_profile: return "entropy_profile";
        case Observable::histogram: return "histogram";
    }
    return "?";
}

inline Observable observable_from_string(const std::string& s) {
    for (auto o : {Observable::gap, Observable::purity_ss, Observable::alpha, Observable::r_mean,
                   Observable::entropy_profile, Observable::histogram})
        if (s == to_string(o)) return o;
    throw ConfigError("unknown observable \"" + s +
                      "\" (expected gap, purity_ss, alpha, r_mean, entropy_profile or histogram)");
}

struct ScanSpec {
    std::vector<double> gamma_grid;
    std::vector<double> J_grid;
    std::vector<int> L_list;
    int n_realizations = 1;
    double h0 = 1.25;
    double epsilon = 0.0;
    double coupling_disorder = 0.0;
    double g = 1.0;
    Boundary boundary = Boundary::open;
    std::uint64_t base_seed = 0;
    std::set<Observable> observables{Observable::gap, Observable::purity_ss, Observable::alpha};
    int histogram_bins = 64;

    bool operator==(const ScanSpec&) const = default;
};

inline void validate(const ScanSpec& s) {
    if (s.gamma_grid.empty() || s.J_grid.empty() || s.L_list.empty())
        throw ConfigError("scan grids gamma_grid, J_grid and L_list must be non-empty");
    if (s.n_realizations < 1) throw ConfigError("n_realizations must be >= 1");
    for (double g : s.gamma_grid)
        if (g < 0) throw ConfigError("gamma_grid values must be >= 0");
    for (int L : s.L_list)
        if (L < 1 || L > max_sites())
            throw ConfigError("L_list entry " + std::to_string(L) + " outside [1, " + std::to_string(max_sites()) + "]");
}

struct ScanRecord {
    double gamma = 0.0;
    double J = 0.0;
    int L = 0;
    int realization = 0;
    std::optional<double> gap;
    std::optional<double> purity_ss;
    std::optional<double> d_eff;
    std::optional<double> r_mean;
    std::optional<double> condition;
    std::string status;  // "mixed", "pure" or "failed: <reason>"
    double wall_time = 0.0;
    std::vector<EigenstateEntropy> entropy_profile;
    std::optional<LogHistogram> histogram;
};

inline bool needs_vectors(const ScanSpec& s) {
    return s.observables.contains(Observable::purity_ss) || s.observables.contains(Observable::alpha) ||
           s.observables.contains(Observable::entropy_profile) || s.observables.contains(Observable::histogram);
}

/// Rough flop-equivalent cost: ~25 dim^3 with eigenvectors, ~10 dim^3 without.
inline double estimated_cost(const ScanSpec& s) {
    double per_gj = 0.0;
    for (int L : s.L_list) {
        const double d = std::ldexp(1.0, L);
        per_gj += (needs_vectors(s) ? 25.0 : 10.0) * d * d * d;
    }
    return per_gj * static_cast<double>(s.gamma_grid.size() * s.J_grid.size()) * s.n_realizations;
}

inline constexpr double kCostWarning = 1e13;

inline ChainParameters cell_parameters(const ScanSpec& s, double gamma, double J, int L, int realization) {
    ChainParameters p;
    p.sites = L;
    p.h0 = s.h0;
    p.epsilon = s.epsilon;
    p.g = s.g;
    p.gamma = gamma;
    p.J = J;
    p.coupling_disorder = s.coupling_disorder;
    p.boundary = s.boundary;
    p.seed = s.base_seed;
    p.realization = static_cast<std::uint64_t>(realization);
    return p;
}

/// Compute one cell. Numerical failures are recorded in `status`, never thrown.
inline ScanRecord compute_cell(const ScanSpec& s, double gamma, double J, int L, int realization) {
    const auto start = std::chrono::steady_clock::now();
    ScanRecord r;
    r.gamma = gamma;
    r.J = J;
    r.L = L;
    r.realization = realization;
    const auto p = cell_parameters(s, gamma, J, L, realization);
    try {
        const Matrix h = build_chain(p);
        std::optional<SpectralData> sd;
        Vector ev;
        if (needs_vectors(s)) {
            sd = decompose(h, {.inverse = true,
                               .singular_values = true,
                               .context = "gamma=" + csv::format(gamma) + " J=" + csv::format(J) +
                                          " L=" + std::to_string(L) + " realization=" + std::to_string(realization)});
            ev = sd->eigenvalues;
            r.condition = sd->condition;
        } else {
            ev = eigenvalues_only(h);
        }
        const double gap = purification_gap(ev);
        const bool mixed = !(gap > pure_gap_threshold(gamma));
        r.status = mixed ? "mixed" : "pure";
        if (s.observables.contains(Observable::gap)) r.gap = gap;
        if (s.observables.contains(Observable::r_mean) && mixed && ev.size() >= 3) r.r_mean = r_statistics(ev).r_mean;
        if (sd) {
            if (s.observables.contains(Observable::alpha)) r.d_eff = effective_dimension(*sd);
            if (s.observables.contains(Observable::purity_ss) || s.observables.contains(Observable::histogram)) {
                const auto ss = steady_state(*sd);
                if (s.observables.contains(Observable::purity_ss)) r.purity_ss = ss.purity;
                if (s.observables.contains(Observable::histogram) && mixed)
                    r.histogram = eigenvalue_histogram(ss.rho, s.histogram_bins);
            }
            if (s.observables.contains(Observable::entropy_profile) && L >= 2)
                r.entropy_profile = eigenstate_entropy_profile(*sd, L / 2);
        }
    } catch (const std::exception& e) {
        r.status = std::string("failed: ") + e.what();
    }
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

struct ScanResult {
    std::vector<ScanRecord> records;  // canonical order: gamma, J, L, realization (grid order)
    std::vector<std::string> warnings;
};

/// Run every cell on a pool of `threads` workers. Output order is canonical and
/// independent of completion order.
inline ScanResult run_scan(const ScanSpec& spec, int threads = 1) {
    validate(spec);
    ScanResult out;
    const double cost = estimated_cost(spec);
    if (cost > kCostWarning)
        out.warnings.push_back("estimated cost " + csv::format(cost) + " flop-equivalents exceeds " +
                               csv::format(kCostWarning));

    struct Cell {
        double gamma, J;
        int L, realization;
    };
    std::vector<Cell> cells;
    for (double g : spec.gamma_grid)
        for (double j : spec.J_grid)
            for (int L : spec.L_list)
                for (int k = 0; k < spec.n_realizations; ++k) cells.push_back({g, j, L, k});

    out.records.resize(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++)
            out.records[i] = compute_cell(spec, cells[i].gamma, cells[i].J, cells[i].L, cells[i].realization);
    };
    const int n = std::max(1, std::min<int>(threads, static_cast<int>(cells.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    }
    for (const auto& r : out.records)
        if (r.status.starts_with("failed"))
            out.warnings.push_back("cell gamma=" + csv::format(r.gamma) + " J=" + csv::format(r.J) +
                                   " L=" + std::to_string(r.L) + " realization=" + std::to_string(r.realization) +
                                   " " + r.status);
    return out;
}

inline std::optional<double> field_of(const ScanRecord& r, Observable o) {
    switch (o) {
        case Observable::gap: return r.gap;
        case Observable::purity_ss: return r.purity_ss;
        case Observable::alpha: return r.d_eff;
        case Observable::r_mean: return r.r_mean;
        default: throw std::invalid_argument(std::string("observable ") + to_string(o) + " is not a scalar field");
    }
}

struct AveragedCell {
    double gamma;
    double J;
    int L;
    MeanError value;
};

/// Mean and standard error over realizations per (gamma, J, L); null fields are skipped.
inline std::vector<AveragedCell> disorder_average(const std::vector<ScanRecord>& records, Observable o) {
    std::vector<std::tuple<double, double, int>> keys;
    std::map<std::tuple<double, double, int>, std::vector<double>> groups;
    for (const auto& r : records) {
        const auto key = std::make_tuple(r.gamma, r.J, r.L);
        if (!groups.contains(key)) keys.push_back(key);
        auto& v = groups[key];
        if (auto x = field_of(r, o)) v.push_back(*x);
    }
    std::vector<AveragedCell> out;
    for (const auto& key : keys) {
        const auto& v = groups[key];
        if (v.empty()) continue;
        out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), mean_and_stderr(v)});
    }
    return out;
}

struct PurificationFit {
    bool decaying = false;
    double rate = 0.0;  // of 1 - Pi(t), when decaying
};

/// Exponential-rate fit of 1 - Pi(t) on the late-time tail of a dynamics series
/// started from the maximally mixed state. Non-decaying series signal the mixed phase.
inline PurificationFit purification_time_fit(const std::vector<DynamicsPoint>& series, double floor = 1e-12) {
    std::vector<double> t, y;
    for (const auto& pt : series) {
        const double d = 1.0 - pt.purity;
        if (d > floor) {
            t.push_back(pt.t);
            y.push_back(std::log(d));
        }
    }
    PurificationFit out;
    if (series.size() < 4) return out;
    const double first = 1.0 - series.front().purity;
    // Decayed through roundoff, or by at least three decades, before the series ended.
    const bool fell = t.size() < series.size() ? true : (y.back() < std::log(1e-3 * first));
    if (!fell || t.size() < 3) return out;
    const std::size_t half = t.size() / 2;
    const std::size_t begin = t.size() - std::max<std::size_t>(3, t.size() - half);
    const auto fit = linear_fit(std::span(t).subspan(begin), std::span(y).subspan(begin));
    if (fit.slope < 0) {
        out.decaying = true;
        out.rate = -fit.slope;
    }
    return out;
}

inline const std::vector<std::string>& scan_csv_header() {
    static const std::vector<std::string> h{"gamma", "J",         "L",         "realization", "gap",
                                            "purity_ss", "d_eff", "r_mean", "condition", "status"};
    return h;
}

inline void write_scan_csv(const std::string& path, const std::vector<ScanRecord>& records,
                           const std::string& config_hash = {}) {
    csv::Writer w(path, scan_csv_header(), config_hash);
    for (const auto& r : records)
        w.row({csv::format(r.gamma), csv::format(r.J), std::to_string(r.L), std::to_string(r.realization),
               csv::format(r.gap), csv::format(r.purity_ss), csv::format(r.d_eff), csv::format(r.r_mean),
               csv::format(r.condition), r.status});
}

}  // namespace ptsim
