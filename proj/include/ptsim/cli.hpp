#pragma once

// Command-line front end: `ptsim <subcommand> [--config FILE] [--set key=value ...]
// [--out DIR] [--seed N] [--threads N]`. Exit codes: 0 success, 1 runtime or
// numerical failure, 2 configuration error.
//
// Every run writes its tables (CSV or JSON) plus run.json, a manifest with the
// resolved configuration, its hash, the code version and the wall time. Each
// table embeds the config hash; binary density-matrix dumps carry it through
// the manifest.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ptsim/config.hpp"
#include "ptsim/csv.hpp"
#include "ptsim/dynamics.hpp"
#include "ptsim/hamiltonians.hpp"
#include "ptsim/meanfield.hpp"
#include "ptsim/recipes.hpp"
#include "ptsim/rng.hpp"
#include "ptsim/scan.hpp"
#include "ptsim/spectral.hpp"
#include "ptsim/steady_state.hpp"
#include "ptsim/tls.hpp"

#ifndef PTSIM_VERSION
#define PTSIM_VERSION "0.1.0"
#endif

namespace ptsim::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<json>> rows;
};

inline json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline std::string csv_field(const json& v) {
    if (v.is_null()) return {};
    if (v.is_number_float()) return csv::format(v.get<double>());
    if (v.is_number_integer()) return v.dump();
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
}

/// Writes files into one run directory and remembers them for the manifest.
class Output {
public:
    Output(const RunConfig& c, fs::path dir) : config_(c), hash_(config_hash(c)), dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_))
            throw ConfigError("output directory " + dir_.string() + " is not writable");
    }

    const std::string& hash() const { return hash_; }
    const fs::path& dir() const { return dir_; }

    void table(const std::string& stem, const Table& t) {
        if (config_.format == "json") {
            json rows = json::array();
            for (const auto& r : t.rows) rows.push_back(r);
            document(stem + ".json", {{"columns", t.header}, {"rows", rows}});
            return;
        }
        const auto path = dir_ / (stem + ".csv");
        csv::Writer w(path.string(), t.header, hash_);
        for (const auto& r : t.rows) {
            std::vector<std::string> fields;
            for (const auto& v : r) fields.push_back(csv_field(v));
            w.row(fields);
        }
        files_.push_back(path.filename().string());
    }

    void document(const std::string& name, json doc) {
        doc["config_hash"] = hash_;
        doc["version"] = PTSIM_VERSION;
        write_text(name, doc.dump(2) + "\n");
    }

    void binary_rho(const std::string& name, const DensityMatrix& rho) {
        write_rho_binary((dir_ / name).string(), rho);
        files_.push_back(name);
    }

    void manifest(double wall_time, const std::vector<std::string>& warnings) {
        json doc{{"config", serialize(config_)},
                 {"wall_time_seconds", wall_time},
                 {"outputs", files_},
                 {"warnings", warnings}};
        document("run.json", std::move(doc));
    }

private:
    void write_text(const std::string& name, const std::string& text) {
        std::ofstream f(dir_ / name);
        if (!f) throw std::runtime_error("cannot write " + (dir_ / name).string());
        f << text;
        if (name != "run.json") files_.push_back(name);
    }

    RunConfig config_;
    std::string hash_;
    fs::path dir_;
    std::vector<std::string> files_;
};

struct RunReport {
    std::vector<std::string> warnings;
};

inline json complex_pair(cplx z) { return json::array({z.real(), z.imag()}); }

// ---------------------------------------------------------------- tls

inline void run_tls(const RunConfig& c, Output& out, RunReport& rep) {
    const double b = c.tls.params.b, theta = c.tls.params.theta;
    const Matrix h = build_tls(c.tls.params);
    const SpectralData s = decompose(h);
    const double tol = default_pt_tolerance(b, 1);
    const Phase phase = classify_pt(s, tol);
    const auto closed = tls::eigenvalues(b);

    json summary{{"b", b},
                 {"theta", theta},
                 {"eigenvalues", {complex_pair(s.eigenvalues(0)), complex_pair(s.eigenvalues(1))}},
                 {"eigenvalues_closed_form", {complex_pair(closed[0]), complex_pair(closed[1])}},
                 {"phase", to_string(phase)},
                 {"gap", purification_gap(s)},
                 {"gap_closed_form", tls::gap(b)},
                 {"condition", s.condition}};
    try {
        const auto ss = steady_state(s, tol);
        summary["purity_ss"] = ss.purity;
        summary["sigma_z_ss"] = ss.sigma_z_mean;
        rep.warnings.insert(rep.warnings.end(), ss.warnings.begin(), ss.warnings.end());
    } catch (const NumericalError& e) {
        summary["purity_ss"] = nullptr;
        summary["sigma_z_ss"] = nullptr;
        rep.warnings.push_back(std::string("steady state unavailable: ") + e.what());
    }
    summary["purity_ss_closed_form"] = tls::steady_purity(b);
    summary["sigma_z_ss_closed_form"] = b < 1.0 ? json(tls::steady_sigma_z(b)) : json(nullptr);
    summary["return_period"] = b < 1.0 ? json(tls::return_period(b)) : json(nullptr);
    summary["revival_period_estimate"] = b < 1.0 ? json(tls::revival_period_estimate(b)) : json(nullptr);
    out.document("tls.json", summary);

    const auto times = time_grid(c.tls.time.t_min, c.tls.time.t_max, c.tls.time.n_times, c.tls.time.log_spacing);
    const double delta = std::abs(s.eigenvalues(0) - s.eigenvalues(1));
    Vector minus(2), psi_theta(2);
    minus << 0.0, 1.0;
    psi_theta << std::cos(theta), std::sin(theta);
    const auto ret = evolve_pure(h, s, PureState(minus), times);
    const auto gen = evolve_pure(h, s, PureState(psi_theta), times);
    const auto mixed = evolve_mixed(h, s, DensityMatrix::maximally_mixed(1), times);
    const Vector slow = s.vectors.col(0).normalized();

    Table t{{"t", "t_scaled", "return_probability", "return_probability_closed_form", "survival_theta",
             "transverse_weight_theta", "purity", "purity_closed_form"},
            {}};
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double tk = times[k];
        const double p_ret = std::norm(ret.states[k].amplitudes()(1));
        const double surv = std::norm(psi_theta.dot(gen.states[k].amplitudes()));
        const double along = std::norm(slow.dot(gen.states[k].amplitudes()));
        t.rows.push_back({tk, tk * delta, p_ret,
                          b < 1.0 ? json(tls::return_probability(b, tk)) : json(nullptr), surv, 1.0 - along,
                          purity(mixed.states[k]), b == 1.0 ? json(tls::exceptional_purity(tk)) : json(nullptr)});
    }
    out.table("tls", t);

    if (!c.tls.b_grid.empty()) {
        Table tab{{"b", "phase", "purity_ss", "purity_ss_closed_form", "sigma_z_ss", "sigma_z_ss_closed_form", "gap",
                   "gap_closed_form"},
                  {}};
        for (double bb : c.tls.b_grid) {
            const SpectralData sb = decompose(build_tls({bb, 0.0}));
            const double tb = default_pt_tolerance(bb, 1);
            const Phase ph = classify_pt(sb, tb);
            json pur = nullptr, sz = nullptr;
            try {
                const auto ss = steady_state(sb, tb);
                pur = ss.purity;
                sz = ss.sigma_z_mean;
            } catch (const NumericalError& e) {
                rep.warnings.push_back("b = " + csv::format(bb) + ": " + e.what());
            }
            tab.rows.push_back({bb, to_string(ph), pur, tls::steady_purity(bb), sz,
                                bb < 1.0 ? json(tls::steady_sigma_z(bb)) : json(nullptr), purification_gap(sb),
                                tls::gap(bb)});
        }
        out.table("tls_table", tab);
    }
}

// ---------------------------------------------------------------- chain helpers

inline int resolved_cut(int cut, int sites) { return sites < 2 ? 0 : (cut == -1 ? sites / 2 : cut); }

inline std::string context(const ChainParameters& p) {
    return "L=" + std::to_string(p.sites) + " gamma=" + csv::format(p.gamma) + " J=" + csv::format(p.J) +
           " seed=" + std::to_string(p.seed) + " realization=" + std::to_string(p.realization);
}

inline void chain_warnings(const ChainParameters& p, RunReport& rep) {
    for (auto& w : validate(p)) rep.warnings.push_back(w);
}

// ---------------------------------------------------------------- spectrum

inline void run_spectrum(const RunConfig& c, Output& out, RunReport& rep) {
    const auto& p = c.chain;
    chain_warnings(p, rep);
    const Matrix h = build_chain(p);
    std::optional<SpectralData> s;
    Vector ev;
    if (c.spectrum.eigenvectors) {
        s = decompose(h, {.inverse = false, .singular_values = true, .context = context(p)});
        ev = s->eigenvalues;
    } else {
        ev = eigenvalues_only(h);
    }
    const double tol = default_pt_tolerance(p.gamma, p.sites);
    const Phase phase = classify_pt(ev, tol);
    const double gap = purification_gap(ev);

    Table t{{"index", "re", "im"}, {}};
    for (Eigen::Index k = 0; k < ev.size(); ++k) t.rows.push_back({k, ev(k).real(), ev(k).imag()});
    out.table("spectrum", t);

    json summary{{"phase", to_string(phase)},
                 {"gap", gap},
                 {"pure_gap_threshold", pure_gap_threshold(p.gamma)},
                 {"pt_tolerance", tol},
                 {"d_eff", nullptr},
                 {"log2_d_eff_per_site", nullptr},
                 {"condition", nullptr},
                 {"r_mean", nullptr}};
    if (s) {
        const double d = effective_dimension(*s);
        summary["d_eff"] = d;
        summary["log2_d_eff_per_site"] = std::log2(d) / p.sites;
        summary["condition"] = s->condition;
    }
    if (phase == Phase::mixed && ev.size() >= 4) {
        const auto ls = r_statistics(ev, c.spectrum.central_fraction);
        summary["r_mean"] = ls.r_mean;
        const int bins = c.spectrum.r_bins;
        std::vector<int> counts(static_cast<std::size_t>(bins), 0);
        for (double r : ls.r_values) counts[static_cast<std::size_t>(std::min(bins - 1, static_cast<int>(r * bins)))]++;
        Table hist{{"r_lo", "r_hi", "count", "density"}, {}};
        for (int k = 0; k < bins; ++k)
            hist.rows.push_back({static_cast<double>(k) / bins, static_cast<double>(k + 1) / bins, counts[k],
                                 counts[k] * bins / static_cast<double>(ls.r_values.size())});
        out.table("r_histogram", hist);
    }
    out.document("spectrum.json", summary);

    if (c.spectrum.entropy_profile && p.sites >= 2) {
        const int cut = resolved_cut(c.spectrum.cut, p.sites);
        Table e{{"energy", "S2"}, {}};
        for (const auto& x : eigenstate_entropy_profile(*s, cut)) e.rows.push_back({x.energy, x.s2});
        out.table("entropy_profile", e);
    }
}

// ---------------------------------------------------------------- dynamics

inline PureState initial_pure_state(const std::string& kind, const ChainParameters& p) {
    std::vector<std::array<cplx, 2>> qubits;
    Rng rng(derive_seed(p.seed, {static_cast<std::uint64_t>(p.sites), p.realization, 2}));
    for (int i = 0; i < p.sites; ++i) {
        if (kind == "all_up") {
            qubits.push_back({1.0, 0.0});
        } else if (kind == "neel") {
            qubits.push_back(i % 2 == 0 ? std::array<cplx, 2>{1.0, 0.0} : std::array<cplx, 2>{0.0, 1.0});
        } else {  // random_product: uniform on the Bloch sphere
            const double th = std::acos(1.0 - 2.0 * rng.uniform());
            const double ph = 2.0 * std::numbers::pi * rng.uniform();
            qubits.push_back({std::cos(th / 2), std::polar(std::sin(th / 2), ph)});
        }
    }
    return product_state(qubits);
}

inline void run_dynamics(const RunConfig& c, Output& out, RunReport& rep) {
    const auto& p = c.chain;
    chain_warnings(p, rep);
    const Matrix h = build_chain(p);
    const SpectralData s = decompose(h, {.inverse = true, .singular_values = true, .context = context(p)});
    const auto& ts = c.dynamics.time;
    const auto times = time_grid(ts.t_min, ts.t_max, ts.n_times, ts.log_spacing);
    const int cut = resolved_cut(c.dynamics.cut, p.sites);
    if (c.dynamics.method == PropagationMethod::automatic && !eigenpath_valid(s))
        rep.warnings.push_back("eigenvector matrix ill-conditioned (condition " + csv::format(s.condition) +
                               "); using the matrix exponential");

    std::vector<DynamicsPoint> pts;
    if (c.dynamics.initial == "maximally_mixed")
        pts = series(evolve_mixed(h, s, DensityMatrix::maximally_mixed(p.sites), times, c.dynamics.ordering,
                                  c.dynamics.method),
                     cut);
    else
        pts = series(evolve_pure(h, s, initial_pure_state(c.dynamics.initial, p), times, c.dynamics.method), cut);

    Table t{{"t", "purity", "S2", "norm_log"}, {}};
    for (const auto& x : pts) t.rows.push_back({x.t, x.purity, cut > 0 ? json(x.s2) : json(nullptr), x.norm_log});
    out.table("dynamics", t);

    json summary{{"phase", to_string(classify_pt(s, default_pt_tolerance(p.gamma, p.sites)))},
                 {"gap", purification_gap(s)},
                 {"condition", s.condition},
                 {"cut", cut},
                 {"ordering", to_string(c.dynamics.ordering)}};
    if (c.dynamics.initial == "maximally_mixed") {
        const auto fit = purification_time_fit(pts);
        summary["purification_decaying"] = fit.decaying;
        summary["purification_rate"] = fit.decaying ? json(fit.rate) : json(nullptr);
    }
    out.document("dynamics.json", summary);
}

// ---------------------------------------------------------------- steady state

inline void run_steady_state(const RunConfig& c, Output& out, RunReport& rep) {
    const auto& p = c.chain;
    chain_warnings(p, rep);
    const SpectralData s = decompose(build_chain(p), {.inverse = true, .singular_values = true, .context = context(p)});
    const double tol = default_pt_tolerance(p.gamma, p.sites);
    const auto ss = steady_state(s, tol);
    rep.warnings.insert(rep.warnings.end(), ss.warnings.begin(), ss.warnings.end());
    const auto hist = eigenvalue_histogram(ss.rho, c.steady.histogram_bins, c.steady.histogram_floor);

    Table t{{"phi_lo", "phi_hi", "count"}, {}};
    for (std::size_t k = 0; k < hist.counts.size(); ++k)
        t.rows.push_back({hist.edges[k], hist.edges[k + 1], hist.counts[k]});
    out.table("rho_histogram", t);
    if (c.steady.write_rho) out.binary_rho("rho_ss.bin", ss.rho);

    out.document("steady_state.json", {{"phase", to_string(classify_pt(s, tol))},
                                       {"purity", ss.purity},
                                       {"sigma_z_mean", ss.sigma_z_mean},
                                       {"condition", ss.condition},
                                       {"merged_blocks", ss.merged_blocks},
                                       {"histogram_below_floor", hist.below_floor},
                                       {"rho_file", c.steady.write_rho ? json("rho_ss.bin") : json(nullptr)}});
}

// ---------------------------------------------------------------- mean field

inline void run_meanfield(const RunConfig& c, Output& out, RunReport& rep) {
    const auto& m = c.meanfield;
    json summary{{"gamma_c_closed_form", phase_boundary(m.params)}};
    try {
        summary["gamma_c_continuation"] = continuation_gamma_c(m.params, m.options);
    } catch (const NumericalError& e) {
        summary["gamma_c_continuation"] = nullptr;
        rep.warnings.push_back(e.what());
    }
    summary["magnetization"] = nullable(solve_self_consistency(m.params, m.options));
    out.document("meanfield.json", summary);

    if (!m.J_grid.empty()) {
        Table t{{"J", "gamma_c_closed_form", "gamma_c_continuation"}, {}};
        for (double J : m.J_grid) {
            MeanFieldParameters q = m.params;
            q.J = J;
            json cont = nullptr;
            try {
                cont = continuation_gamma_c(q, m.options);
            } catch (const NumericalError& e) {
                rep.warnings.push_back("J = " + csv::format(J) + ": " + e.what());
            }
            t.rows.push_back({J, phase_boundary(q), cont});
        }
        out.table("meanfield_boundary", t);
    }
    if (!m.gamma_grid.empty()) {
        Table t{{"gamma", "m"}, {}};
        for (const auto& [g, mag] : magnetization_curve(m.params, m.gamma_grid, m.options))
            t.rows.push_back({g, nullable(mag)});
        out.table("meanfield_magnetization", t);
    }
}

// ---------------------------------------------------------------- scan

inline json scan_spec_json(const RunConfig& c) {
    json doc = serialize(c);
    doc.erase("output_dir");
    doc.erase("threads");
    doc.erase("format");
    doc.erase("subcommand");
    return doc;
}

inline void run_scan_command(const RunConfig& c, Output& out, RunReport& rep) {
    const auto result = run_scan(c.scan, c.threads);
    rep.warnings.insert(rep.warnings.end(), result.warnings.begin(), result.warnings.end());
    Table t{scan_csv_header(), {}};
    for (const auto& r : result.records)
        t.rows.push_back({r.gamma, r.J, r.L, r.realization, nullable(r.gap), nullable(r.purity_ss), nullable(r.d_eff),
                          nullable(r.r_mean), nullable(r.condition), r.status});
    out.table("scan", t);
    out.document("scan.json", {{"scan_spec", scan_spec_json(c)}});

    if (c.scan.observables.contains(Observable::entropy_profile)) {
        Table e{{"gamma", "J", "L", "realization", "energy", "S2"}, {}};
        for (const auto& r : result.records)
            for (const auto& x : r.entropy_profile) e.rows.push_back({r.gamma, r.J, r.L, r.realization, x.energy, x.s2});
        out.table("scan_entropy_profile", e);
    }
    if (c.scan.observables.contains(Observable::histogram)) {
        Table hst{{"gamma", "J", "L", "realization", "phi_lo", "phi_hi", "count"}, {}};
        for (const auto& r : result.records)
            if (r.histogram)
                for (std::size_t k = 0; k < r.histogram->counts.size(); ++k)
                    hst.rows.push_back({r.gamma, r.J, r.L, r.realization, r.histogram->edges[k],
                                        r.histogram->edges[k + 1], r.histogram->counts[k]});
        out.table("scan_rho_histogram", hst);
    }
}

// ---------------------------------------------------------------- dispatch

inline void execute(const RunConfig& c, const fs::path& dir, std::ostream& log);

inline void run_reproduce(const RunConfig& c, Output& out, RunReport& rep, std::optional<std::uint64_t> seed,
                          std::ostream& log) {
    const Recipe recipe = expand_recipe(c.reproduce.target, c.reproduce.allow_large);
    if (expand_recipe(c.reproduce.target, true).runs.size() != recipe.runs.size())
        rep.warnings.push_back("L = 12 runs skipped; pass --allow-large to include them");
    json runs = json::array();
    int failures = 0;
    for (const auto& run : recipe.runs) {
        RunConfig rc = run.config;
        rc.format = c.format;
        rc.threads = c.threads;
        if (seed) {
            rc.chain.seed = *seed;
            rc.scan.base_seed = *seed;
        }
        const auto start = std::chrono::steady_clock::now();
        std::string status = "ok";
        try {
            execute(rc, out.dir() / run.name, log);
        } catch (const std::exception& e) {
            status = std::string("failed: ") + e.what();
            ++failures;
            log << "ptsim: " << c.reproduce.target << "/" << run.name << " " << status << "\n";
        }
        runs.push_back({{"name", run.name},
                        {"description", run.description},
                        {"subcommand", rc.subcommand},
                        {"config_hash", config_hash(rc)},
                        {"wall_time_seconds",
                         std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()},
                        {"status", status}});
    }
    out.document("reproduce.json", {{"target", recipe.target}, {"description", recipe.description}, {"runs", runs}});
    if (failures > 0)
        throw NumericalError(std::to_string(failures) + " of " + std::to_string(recipe.runs.size()) +
                             " runs failed; partial outputs kept in " + out.dir().string());
}

/// Run one resolved configuration into `dir` (reproduce recurses per run).
inline void execute(const RunConfig& c, const fs::path& dir, std::ostream& log) {
    const auto start = std::chrono::steady_clock::now();
    Output out(c, dir);
    RunReport rep;
    auto finish = [&] {
        for (const auto& w : rep.warnings) log << "warning: " << w << "\n";
        out.manifest(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), rep.warnings);
    };
    try {
        const auto& s = c.subcommand;
        if (s == "tls") run_tls(c, out, rep);
        else if (s == "spectrum") run_spectrum(c, out, rep);
        else if (s == "dynamics") run_dynamics(c, out, rep);
        else if (s == "steady-state") run_steady_state(c, out, rep);
        else if (s == "meanfield") run_meanfield(c, out, rep);
        else if (s == "scan") run_scan_command(c, out, rep);
        else if (s == "reproduce") run_reproduce(c, out, rep, std::nullopt, log);
        else throw ConfigError("unknown subcommand \"" + s + "\"");
    } catch (...) {
        finish();
        throw;
    }
    finish();
}

inline json read_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
}

struct Invocation {
    std::string subcommand;
    std::string target;
    std::string config_file;
    std::vector<std::string> sets;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    bool allow_large = false;
    bool print_config = false;
    bool print_recipe = false;
};

/// Merge file, then flags (flags win), into a validated RunConfig.
inline RunConfig resolve(const Invocation& inv) {
    if (std::find(subcommands().begin(), subcommands().end(), inv.subcommand) == subcommands().end())
        throw ConfigError("unknown subcommand \"" + inv.subcommand + "\"");
    json doc = inv.config_file.empty() ? json::object() : read_config_file(inv.config_file);
    if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
    for (const auto& kv : inv.sets) {
        auto [key, value] = parse_override(kv);
        doc[key] = value;
    }
    if (!inv.target.empty()) {
        if (inv.subcommand != "reproduce") throw ConfigError("unexpected argument \"" + inv.target + "\"");
        doc["target"] = inv.target;
    }
    if (inv.allow_large) {
        if (inv.subcommand != "reproduce") throw ConfigError("--allow-large only applies to reproduce");
        doc["allow_large"] = true;
    }
    if (!inv.out_dir.empty()) doc["output_dir"] = inv.out_dir;
    if (inv.threads) doc["threads"] = *inv.threads;
    if (inv.seed) {
        const auto& s = inv.subcommand;
        if (s == "spectrum" || s == "dynamics" || s == "steady-state") doc["seed"] = *inv.seed;
        else if (s == "scan") doc["base_seed"] = *inv.seed;
        else if (s != "reproduce") throw ConfigError("--seed does not apply to subcommand " + s);
    }
    return parse_config(inv.subcommand, doc);
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"ptsim: post-selected non-Hermitian Ising chain simulator"};
    app.set_version_flag("--version", std::string(PTSIM_VERSION));
    Invocation inv;
    app.add_option("subcommand", inv.subcommand,
                   "tls | spectrum | dynamics | steady-state | meanfield | scan | reproduce")
        ->required();
    app.add_option("target", inv.target, "reproduce target: fig1..fig6 | tls-table");
    app.add_option("--config", inv.config_file, "JSON configuration file");
    app.add_option("--set", inv.sets, "override a key: --set key=value (repeatable)")->take_all();
    app.add_option("--out", inv.out_dir, "output directory (default ptsim_out)");
    app.add_option("--seed", inv.seed, "disorder seed (seed, or base_seed for scan)");
    app.add_option("--threads", inv.threads, "worker threads for scans");
    app.add_flag("--allow-large", inv.allow_large, "reproduce: include the L = 12 runs");
    app.add_flag("--print-config", inv.print_config, "print the resolved configuration and exit");
    app.add_flag("--print-recipe", inv.print_recipe, "reproduce: print the recipe expansion and exit");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << PTSIM_VERSION << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "ptsim: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        const RunConfig c = resolve(inv);
        if (inv.print_config) {
            json doc = serialize(c);
            doc["config_hash"] = config_hash(c);
            out << doc.dump(2) << "\n";
            return kExitOk;
        }
        if (inv.print_recipe) {
            if (c.subcommand != "reproduce") throw ConfigError("--print-recipe only applies to reproduce");
            out << recipe_to_json(c.reproduce.target).dump(2) << "\n";
            return kExitOk;
        }
        if (c.subcommand == "reproduce") {
            const auto start = std::chrono::steady_clock::now();
            Output o(c, fs::path(c.output_dir) / c.reproduce.target);
            RunReport rep;
            std::exception_ptr failure;
            try {
                run_reproduce(c, o, rep, inv.seed, err);
            } catch (...) {
                failure = std::current_exception();
            }
            for (const auto& w : rep.warnings) err << "warning: " << w << "\n";
            o.manifest(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), rep.warnings);
            if (failure) std::rethrow_exception(failure);
        } else {
            execute(c, c.output_dir, err);
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "ptsim: config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "ptsim: error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace ptsim::cli
