#pragma once

// Reproduction recipes: each target expands to a list of named runs, each a
// complete RunConfig. The canonical expansions live here; recipes/<target>.json
// documents them and a fixture test keeps the two identical. Runs marked
// `large` (L = 12) are only expanded when the caller acknowledges the budget.

#include <cmath>
#include <string>
#include <vector>

#include "ptsim/config.hpp"

namespace ptsim {

struct RecipeRun {
    std::string name;
    std::string description;
    bool large = false;
    RunConfig config;
};

struct Recipe {
    std::string target;
    std::string description;
    std::vector<RecipeRun> runs;
};

namespace recipe_detail {

/// {first/den, (first+1)/den, ..., last/den}: exact decimal grids without accumulated steps.
inline std::vector<double> ratio_grid(int first, int last, int den) {
    std::vector<double> g;
    for (int k = first; k <= last; ++k) g.push_back(static_cast<double>(k) / den);
    return g;
}

inline RunConfig base(const std::string& sub) {
    RunConfig c;
    c.subcommand = sub;
    return c;
}

inline RunConfig chain_run(const std::string& sub, int L, double gamma, double J = 0.95) {
    RunConfig c = base(sub);
    c.chain.sites = L;
    c.chain.gamma = gamma;
    c.chain.J = J;
    return c;
}

inline std::string label(double v) { return csv::format(v); }

}  // namespace recipe_detail

inline Recipe expand_recipe(const std::string& target, bool allow_large = false) {
    using namespace recipe_detail;
    Recipe r;
    r.target = target;
    auto add = [&](std::string name, std::string description, RunConfig c, bool large = false) {
        if (large && !allow_large) return;
        r.runs.push_back({std::move(name), std::move(description), large, std::move(c)});
    };

    if (target == "fig1") {
        r.description = "Phase diagram: purification gap over (gamma, J), mean-field boundary, and gap opening vs L at J = 0.95";
        RunConfig pd = base("scan");
        pd.scan.gamma_grid = ratio_grid(0, 40, 20);
        pd.scan.J_grid = ratio_grid(0, 20, 10);
        pd.scan.L_list = {8};
        pd.scan.observables = {Observable::gap};
        add("phase_diagram", "clean chain, L = 8, gap on a 41 x 21 (gamma, J) grid", pd);

        RunConfig mf = base("meanfield");
        mf.meanfield.J_grid = ratio_grid(0, 40, 20);
        add("mean_field_boundary", "mean-field gamma_c(J), z = 2, closed form and continuation", mf);

        RunConfig sz = base("scan");
        sz.scan.gamma_grid = ratio_grid(20, 60, 40);
        sz.scan.J_grid = {0.95};
        sz.scan.L_list = {6, 8, 10};
        sz.scan.observables = {Observable::gap};
        add("gap_vs_size", "gap vs gamma at J = 0.95 for L = 6, 8, 10", sz);
        sz.scan.L_list = {12};
        add("gap_vs_size_L12", "gap vs gamma at J = 0.95 for L = 12", sz, true);
    } else if (target == "fig2") {
        r.description = "Two-level revivals near the exceptional point, rescaled time t * Delta";
        for (double delta : {0.1, 0.02, 0.004}) {
            RunConfig c = base("tls");
            c.tls.params.b = std::sqrt(1.0 - 0.25 * delta * delta);
            c.tls.time = {0.0, 20.0 / delta, 2001, false};
            add("delta_" + label(delta), "return probability to (0, 1) for eigenvalue splitting Delta = " + label(delta), c);
        }
        RunConfig ep = base("tls");
        ep.tls.params.b = 1.0;
        ep.tls.time = {0.1, 100.0, 121, true};
        add("exceptional_point", "b = 1: purity approaches 1 as a power law", ep);
    } else if (target == "fig3") {
        r.description = "Dynamics: purity from the maximally mixed state, half-cut S2 from a random product state, size dependence";
        for (double g : {0.2, 0.5, 0.8, 1.2}) {
            RunConfig c = chain_run("dynamics", 10, g);
            c.dynamics.time = {0.0, 40.0, 81, false};
            add("purity_gamma_" + label(g), "purity of I / 2^L, L = 10, gamma = " + label(g), c);
        }
        for (double g : {0.2, 0.5, 0.8}) {
            RunConfig c = chain_run("dynamics", 10, g);
            c.dynamics.initial = "random_product";
            c.dynamics.time = {0.01, 1000.0, 121, true};
            add("entropy_gamma_" + label(g), "half-cut S2 of a random product state, L = 10, gamma = " + label(g), c);
        }
        for (double g : {0.5, 1.5})
            for (int L : {6, 8, 10}) {
                RunConfig c = chain_run("dynamics", L, g);
                c.dynamics.initial = "random_product";
                c.dynamics.time = {0.01, 1000.0, 121, true};
                add("entropy_size_gamma_" + label(g) + "_L" + std::to_string(L),
                    "half-cut S2 growth, L = " + std::to_string(L) + ", gamma = " + label(g), c);
            }
    } else if (target == "fig4") {
        r.description = "Time-averaged state: purity vs gamma with 1% coupling disorder, and its eigenvalue histogram";
        RunConfig c = base("scan");
        c.scan.gamma_grid = ratio_grid(0, 14, 20);
        c.scan.J_grid = {0.95};
        c.scan.L_list = {6, 8, 10};
        c.scan.coupling_disorder = 0.01;
        c.scan.n_realizations = 5;
        c.scan.observables = {Observable::purity_ss};
        add("purity_vs_gamma", "purity of rho_ss, L = 6, 8, 10, 5 realizations", c);
        c.scan.L_list = {12};
        c.scan.n_realizations = 2;
        add("purity_vs_gamma_L12", "purity of rho_ss, L = 12, 2 realizations", c, true);

        RunConfig h = chain_run("steady-state", 10, 0.6);
        h.chain.coupling_disorder = 0.01;
        h.steady.write_rho = false;
        add("histogram_L10", "eigenvalue histogram of rho_ss at gamma = 0.6, L = 10", h);
        h.chain.sites = 12;
        add("histogram_L12", "eigenvalue histogram of rho_ss at gamma = 0.6, L = 12", h, true);
    } else if (target == "fig5") {
        r.description = "Level statistics with 10% longitudinal-field disorder";
        RunConfig c = base("scan");
        c.scan.gamma_grid = ratio_grid(0, 12, 10);
        c.scan.J_grid = {0.95};
        c.scan.L_list = {10};
        c.scan.epsilon = 0.125;
        c.scan.n_realizations = 3;
        c.scan.observables = {Observable::gap, Observable::r_mean};
        add("r_mean", "<r> vs gamma, L = 10, 3 realizations", c);
        c.scan.L_list = {12};
        add("r_mean_L12", "<r> vs gamma, L = 12, 3 realizations", c, true);
        for (int L : {10, 12})
            for (double g : {0.2, 0.6, 1.0}) {
                RunConfig s = chain_run("spectrum", L, g);
                s.chain.epsilon = 0.125;
                s.spectrum.eigenvectors = false;
                add("r_histogram_L" + std::to_string(L) + "_gamma_" + label(g),
                    "r distribution, L = " + std::to_string(L) + ", gamma = " + label(g), s, L == 12);
            }
    } else if (target == "fig6") {
        r.description = "Eigenvectors: effective dimension exponent and eigenstate entanglement vs energy";
        RunConfig c = base("scan");
        c.scan.gamma_grid = ratio_grid(0, 20, 20);
        c.scan.J_grid = {0.95};
        c.scan.L_list = {6, 8, 10};
        c.scan.coupling_disorder = 0.01;
        c.scan.n_realizations = 2;
        c.scan.observables = {Observable::alpha};
        add("effective_dimension", "d_eff vs gamma for L = 6, 8, 10 (fit alpha from log2 d_eff vs L)", c);
        c.scan.L_list = {12};
        add("effective_dimension_L12", "d_eff vs gamma for L = 12", c, true);
        for (double g : {0.05, 1.0}) {
            RunConfig s = chain_run("spectrum", 10, g);
            s.spectrum.entropy_profile = true;
            add("entropy_profile_gamma_" + label(g), "half-cut S2 of every right eigenvector, L = 10, gamma = " + label(g), s);
        }
    } else if (target == "tls-table") {
        r.description = "Two-level closed forms: (b, purity, <sigma^z>, gap) table";
        RunConfig c = base("tls");
        c.tls.b_grid = ratio_grid(0, 9, 10);
        for (double b : {1.5, 2.0}) c.tls.b_grid.push_back(b);
        add("table", "b = 0, 0.1, ..., 0.9 (mixed) and 1.5, 2 (purifying)", c);
    } else {
        throw ConfigError("unknown reproduce target \"" + target + "\"");
    }
    return r;
}

/// Keys that describe the physics of a run; output placement is left to the caller.
inline json recipe_run_config(const RunConfig& c) {
    json doc = serialize(c);
    doc.erase("subcommand");
    doc.erase("output_dir");
    doc.erase("threads");
    doc.erase("format");
    return doc;
}

inline json recipe_to_json(const std::string& target) {
    const Recipe r = expand_recipe(target, true);
    json runs = json::array();
    for (const auto& run : r.runs)
        runs.push_back({{"name", run.name},
                        {"description", run.description},
                        {"large", run.large},
                        {"subcommand", run.config.subcommand},
                        {"config", recipe_run_config(run.config)}});
    return {{"target", r.target}, {"description", r.description}, {"runs", runs}};
}

/// Parse a documented recipe file back into runs (large runs dropped unless allowed).
inline Recipe recipe_from_json(const json& doc, bool allow_large = false) {
    Recipe r;
    r.target = doc.at("target").get<std::string>();
    r.description = doc.at("description").get<std::string>();
    for (const auto& run : doc.at("runs")) {
        if (run.at("large").get<bool>() && !allow_large) continue;
        r.runs.push_back({run.at("name").get<std::string>(), run.at("description").get<std::string>(),
                          run.at("large").get<bool>(),
                          parse_config(run.at("subcommand").get<std::string>(), run.at("config"))});
    }
    return r;
}

}  // namespace ptsim
