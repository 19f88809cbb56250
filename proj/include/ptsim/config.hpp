#pragma once

// Run configuration: a flat JSON object per subcommand, parsed strictly.
// Unknown keys, type mismatches and missing required keys raise ConfigError
// with a one-line message naming the key. Documented defaults:
//   gamma >= 0 multiplies +i gamma sum (1 + sigma^y); boundary = open;
//   entropies in bits (log base 2); mixed-state ordering = TdagT.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ptsim/dynamics.hpp"
#include "ptsim/hamiltonians.hpp"
#include "ptsim/meanfield.hpp"
#include "ptsim/scan.hpp"

namespace ptsim {

using json = nlohmann::json;

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> s{"tls", "spectrum", "dynamics", "steady-state", "meanfield", "scan",
                                            "reproduce"};
    return s;
}

inline const std::vector<std::string>& reproduce_targets() {
    static const std::vector<std::string> t{"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "tls-table"};
    return t;
}

struct TimeSettings {
    double t_min = 0.0;
    double t_max = 50.0;
    int n_times = 201;
    bool log_spacing = false;

    bool operator==(const TimeSettings&) const = default;
};

struct TLSSettings {
    TLSParameters params{0.5, 0.0};
    std::vector<double> b_grid;  // non-empty: also write the closed-form table
    TimeSettings time{0.0, 20.0, 401, false};

    bool operator==(const TLSSettings&) const = default;
};

struct SpectrumSettings {
    int cut = -1;  // -1: L / 2
    bool eigenvectors = true;  // false: eigenvalues only (no d_eff, condition or entropies)
    bool entropy_profile = false;
    double central_fraction = 1.0;
    int r_bins = 50;

    bool operator==(const SpectrumSettings&) const = default;
};

struct DynamicsSettings {
    TimeSettings time;
    std::string initial = "maximally_mixed";  // maximally_mixed, random_product, all_up, neel
    Ordering ordering = Ordering::t_dag_t;
    PropagationMethod method = PropagationMethod::automatic;
    int cut = -1;

    bool operator==(const DynamicsSettings&) const = default;
};

struct SteadyStateSettings {
    bool write_rho = true;
    int histogram_bins = 64;
    double histogram_floor = 1e-16;

    bool operator==(const SteadyStateSettings&) const = default;
};

struct MeanFieldSettings {
    MeanFieldParameters params;
    MeanFieldOptions options;
    std::vector<double> J_grid;      // boundary curve
    std::vector<double> gamma_grid;  // magnetization curve at params.J

    bool operator==(const MeanFieldSettings&) const = default;
};

struct ReproduceSettings {
    std::string target;
    bool allow_large = false;

    bool operator==(const ReproduceSettings&) const = default;
};

struct RunConfig {
    std::string subcommand;
    std::string output_dir = "ptsim_out";
    std::string format = "csv";
    int threads = 1;
    ChainParameters chain;
    TLSSettings tls;
    SpectrumSettings spectrum;
    DynamicsSettings dynamics;
    SteadyStateSettings steady;
    MeanFieldSettings meanfield;
    ScanSpec scan;
    ReproduceSettings reproduce;

    bool operator==(const RunConfig&) const = default;
};

namespace config_detail {

enum class Kind { real, integer, unsigned_integer, boolean, string, real_list, int_list, string_list };

inline const char* kind_name(Kind k) {
    switch (k) {
        case Kind::real: return "a number";
        case Kind::integer: return "an integer";
        case Kind::unsigned_integer: return "a non-negative integer";
        case Kind::boolean: return "a boolean";
        case Kind::string: return "a string";
        case Kind::real_list: return "a list of numbers";
        case Kind::int_list: return "a list of integers";
        case Kind::string_list: return "a list of strings";
    }
    return "?";
}

inline bool matches(const json& v, Kind k) {
    auto is_int = [](const json& x) { return x.is_number_integer(); };
    switch (k) {
        case Kind::real: return v.is_number();
        case Kind::integer: return is_int(v);
        case Kind::unsigned_integer: return v.is_number_unsigned() || (is_int(v) && v.get<std::int64_t>() >= 0);
        case Kind::boolean: return v.is_boolean();
        case Kind::string: return v.is_string();
        case Kind::real_list: return v.is_array() && std::all_of(v.begin(), v.end(), [](auto& x) { return x.is_number(); });
        case Kind::int_list: return v.is_array() && std::all_of(v.begin(), v.end(), is_int);
        case Kind::string_list: return v.is_array() && std::all_of(v.begin(), v.end(), [](auto& x) { return x.is_string(); });
    }
    return false;
}

struct Field {
    std::string name;
    Kind kind;
    bool required = false;
    std::vector<std::string> choices;  // for strings and string lists
    std::function<json(const RunConfig&)> get;
    std::function<void(RunConfig&, const json&)> set;
};

#define PTSIM_FIELD(key, kind, member)                                                     \
    Field {                                                                                \
        key, kind, false, {}, [](const RunConfig& c) { return json(c.member); },           \
            [](RunConfig& c, const json& v) { v.get_to(c.member); }                        \
    }
#define PTSIM_REQUIRED(key, kind, member)                                                  \
    Field {                                                                                \
        key, kind, true, {}, [](const RunConfig& c) { return json(c.member); },            \
            [](RunConfig& c, const json& v) { v.get_to(c.member); }                        \
    }

inline std::vector<Field> common_fields() {
    return {
        PTSIM_FIELD("output_dir", Kind::string, output_dir),
        Field{"format", Kind::string, false, {"csv", "json"}, [](const RunConfig& c) { return json(c.format); },
              [](RunConfig& c, const json& v) { c.format = v.get<std::string>(); }},
        PTSIM_FIELD("threads", Kind::integer, threads),
    };
}

inline std::vector<Field> chain_fields() {
    return {
        PTSIM_FIELD("L", Kind::integer, chain.sites),
        PTSIM_FIELD("h0", Kind::real, chain.h0),
        PTSIM_FIELD("epsilon", Kind::real, chain.epsilon),
        PTSIM_FIELD("g", Kind::real, chain.g),
        PTSIM_FIELD("gamma", Kind::real, chain.gamma),
        PTSIM_FIELD("J", Kind::real, chain.J),
        PTSIM_FIELD("coupling_disorder", Kind::real, chain.coupling_disorder),
        Field{"boundary", Kind::string, false, {"open", "periodic"},
              [](const RunConfig& c) { return json(to_string(c.chain.boundary)); },
              [](RunConfig& c, const json& v) { c.chain.boundary = boundary_from_string(v.get<std::string>()); }},
        PTSIM_FIELD("seed", Kind::unsigned_integer, chain.seed),
        PTSIM_FIELD("realization", Kind::unsigned_integer, chain.realization),
    };
}

inline std::vector<Field> time_fields(bool tls) {
    if (tls)
        return {PTSIM_FIELD("t_min", Kind::real, tls.time.t_min), PTSIM_FIELD("t_max", Kind::real, tls.time.t_max),
                PTSIM_FIELD("n_times", Kind::integer, tls.time.n_times),
                PTSIM_FIELD("log_spacing", Kind::boolean, tls.time.log_spacing)};
    return {PTSIM_FIELD("t_min", Kind::real, dynamics.time.t_min),
            PTSIM_FIELD("t_max", Kind::real, dynamics.time.t_max),
            PTSIM_FIELD("n_times", Kind::integer, dynamics.time.n_times),
            PTSIM_FIELD("log_spacing", Kind::boolean, dynamics.time.log_spacing)};
}

inline std::vector<Field> fields_for(const std::string& sub) {
    std::vector<Field> f = common_fields();
    auto add = [&](std::vector<Field> more) { f.insert(f.end(), more.begin(), more.end()); };
    if (sub == "tls") {
        add({PTSIM_FIELD("b", Kind::real, tls.params.b), PTSIM_FIELD("theta", Kind::real, tls.params.theta),
             PTSIM_FIELD("b_grid", Kind::real_list, tls.b_grid)});
        add(time_fields(true));
    } else if (sub == "spectrum") {
        add(chain_fields());
        add({PTSIM_FIELD("cut", Kind::integer, spectrum.cut),
             PTSIM_FIELD("eigenvectors", Kind::boolean, spectrum.eigenvectors),
             PTSIM_FIELD("entropy_profile", Kind::boolean, spectrum.entropy_profile),
             PTSIM_FIELD("central_fraction", Kind::real, spectrum.central_fraction),
             PTSIM_FIELD("r_bins", Kind::integer, spectrum.r_bins)});
    } else if (sub == "dynamics") {
        add(chain_fields());
        add(time_fields(false));
        add({Field{"initial", Kind::string, false, {"maximally_mixed", "random_product", "all_up", "neel"},
                   [](const RunConfig& c) { return json(c.dynamics.initial); },
                   [](RunConfig& c, const json& v) { c.dynamics.initial = v.get<std::string>(); }},
             Field{"ordering", Kind::string, false, {"TdagT", "TTdag"},
                   [](const RunConfig& c) { return json(to_string(c.dynamics.ordering)); },
                   [](RunConfig& c, const json& v) {
                       c.dynamics.ordering = v.get<std::string>() == "TdagT" ? Ordering::t_dag_t : Ordering::t_t_dag;
                   }},
             Field{"method", Kind::string, false, {"auto", "eigenbasis", "expm"},
                   [](const RunConfig& c) { return json(to_string(c.dynamics.method)); },
                   [](RunConfig& c, const json& v) {
                       const auto s = v.get<std::string>();
                       c.dynamics.method = s == "auto"         ? PropagationMethod::automatic
                                           : s == "eigenbasis" ? PropagationMethod::eigenbasis
                                                               : PropagationMethod::expm;
                   }},
             PTSIM_FIELD("cut", Kind::integer, dynamics.cut)});
    } else if (sub == "steady-state") {
        add(chain_fields());
        add({PTSIM_FIELD("write_rho", Kind::boolean, steady.write_rho),
             PTSIM_FIELD("histogram_bins", Kind::integer, steady.histogram_bins),
             PTSIM_FIELD("histogram_floor", Kind::real, steady.histogram_floor)});
    } else if (sub == "meanfield") {
        add({PTSIM_FIELD("h", Kind::real, meanfield.params.h), PTSIM_FIELD("g", Kind::real, meanfield.params.g),
             PTSIM_FIELD("J", Kind::real, meanfield.params.J), PTSIM_FIELD("z", Kind::integer, meanfield.params.z),
             PTSIM_FIELD("gamma", Kind::real, meanfield.params.gamma),
             PTSIM_FIELD("J_grid", Kind::real_list, meanfield.J_grid),
             PTSIM_FIELD("gamma_grid", Kind::real_list, meanfield.gamma_grid),
             PTSIM_FIELD("squared_denominator", Kind::boolean, meanfield.options.squared_denominator),
             PTSIM_FIELD("feedback_sign", Kind::integer, meanfield.options.feedback_sign),
             PTSIM_FIELD("gamma_step", Kind::real, meanfield.options.gamma_step)});
    } else if (sub == "scan") {
        add({PTSIM_REQUIRED("gamma_grid", Kind::real_list, scan.gamma_grid),
             PTSIM_REQUIRED("J_grid", Kind::real_list, scan.J_grid),
             PTSIM_REQUIRED("L_list", Kind::int_list, scan.L_list),
             PTSIM_FIELD("n_realizations", Kind::integer, scan.n_realizations),
             PTSIM_FIELD("h0", Kind::real, scan.h0), PTSIM_FIELD("epsilon", Kind::real, scan.epsilon),
             PTSIM_FIELD("coupling_disorder", Kind::real, scan.coupling_disorder),
             PTSIM_FIELD("g", Kind::real, scan.g),
             Field{"boundary", Kind::string, false, {"open", "periodic"},
                   [](const RunConfig& c) { return json(to_string(c.scan.boundary)); },
                   [](RunConfig& c, const json& v) { c.scan.boundary = boundary_from_string(v.get<std::string>()); }},
             PTSIM_FIELD("base_seed", Kind::unsigned_integer, scan.base_seed),
             Field{"observables", Kind::string_list, false,
                   {"gap", "purity_ss", "alpha", "r_mean", "entropy_profile", "histogram"},
                   [](const RunConfig& c) {
                       json out = json::array();
                       for (auto o : c.scan.observables) out.push_back(to_string(o));
                       return out;
                   },
                   [](RunConfig& c, const json& v) {
                       c.scan.observables.clear();
                       for (const auto& s : v) c.scan.observables.insert(observable_from_string(s.get<std::string>()));
                   }},
             PTSIM_FIELD("histogram_bins", Kind::integer, scan.histogram_bins)});
    } else if (sub == "reproduce") {
        add({Field{"target", Kind::string, true, reproduce_targets(),
                   [](const RunConfig& c) { return json(c.reproduce.target); },
                   [](RunConfig& c, const json& v) { c.reproduce.target = v.get<std::string>(); }},
             PTSIM_FIELD("allow_large", Kind::boolean, reproduce.allow_large)});
    } else {
        throw ConfigError("unknown subcommand \"" + sub + "\"");
    }
    return f;
}

#undef PTSIM_FIELD
#undef PTSIM_REQUIRED

inline std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

inline std::string unknown_key_message(const std::string& key, const std::string& sub, const std::vector<Field>& fs) {
    std::string msg = "unknown key \"" + key + "\" for subcommand " + sub;
    std::string best;
    std::size_t best_d = 3;
    for (const auto& f : fs) {
        const auto d = edit_distance(key, f.name);
        if (d < best_d) {
            best_d = d;
            best = f.name;
        }
    }
    if (!best.empty()) msg += " (did you mean \"" + best + "\"?)";
    return msg;
}

}  // namespace config_detail

/// Semantic checks beyond types; throws ConfigError.
inline void validate(const RunConfig& c) {
    if (c.threads < 1) throw ConfigError("threads must be >= 1");
    auto check_time = [](const TimeSettings& t) { (void)time_grid(t.t_min, t.t_max, t.n_times, t.log_spacing); };
    const auto& s = c.subcommand;
    if (s == "spectrum" || s == "dynamics" || s == "steady-state") {
        if (c.chain.sites < 1) throw ConfigError("L must be >= 1");
        if (c.chain.sites > max_sites())
            throw ConfigError("L = " + std::to_string(c.chain.sites) + " exceeds PTSIM_MAX_L = " +
                              std::to_string(max_sites()));
        if (c.chain.gamma < 0) throw ConfigError("gamma must be >= 0");
    }
    if (s == "tls") {
        check_time(c.tls.time);
        if (c.tls.params.b < 0) throw ConfigError("b must be >= 0");
    }
    if (s == "spectrum") {
        if (!(c.spectrum.central_fraction > 0 && c.spectrum.central_fraction <= 1))
            throw ConfigError("central_fraction must lie in (0, 1]");
        if (c.spectrum.entropy_profile && !c.spectrum.eigenvectors)
            throw ConfigError("entropy_profile needs eigenvectors = true");
        if (c.spectrum.r_bins < 1) throw ConfigError("r_bins must be >= 1");
    }
    if ((s == "spectrum" || s == "dynamics") && c.chain.sites > 1) {
        const int cut = s == "spectrum" ? c.spectrum.cut : c.dynamics.cut;
        if (cut != -1 && (cut < 1 || cut >= c.chain.sites))
            throw ConfigError("cut must be -1 (half chain) or lie in [1, L-1]");
    }
    if (s == "dynamics") check_time(c.dynamics.time);
    if (s == "steady-state" && c.steady.histogram_bins < 1) throw ConfigError("histogram_bins must be >= 1");
    if (s == "meanfield") {
        validate(c.meanfield.params);
        if (c.meanfield.options.feedback_sign != 1 && c.meanfield.options.feedback_sign != -1)
            throw ConfigError("feedback_sign must be +1 or -1");
        if (!(c.meanfield.options.gamma_step > 0)) throw ConfigError("gamma_step must be > 0");
        if (!std::is_sorted(c.meanfield.gamma_grid.begin(), c.meanfield.gamma_grid.end()))
            throw ConfigError("gamma_grid must be ascending");
    }
    if (s == "scan") validate(c.scan);
}

/// Apply the keys of `doc` onto `c` (which already carries its subcommand).
inline void apply(RunConfig& c, const json& doc) {
    using namespace config_detail;
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    const auto fields = fields_for(c.subcommand);
    for (const auto& [key, value] : doc.items()) {
        if (key == "subcommand") {
            if (!value.is_string() || value.get<std::string>() != c.subcommand)
                throw ConfigError("key \"subcommand\" = " + value.dump() + " conflicts with subcommand " + c.subcommand);
            continue;
        }
        const auto it = std::find_if(fields.begin(), fields.end(), [&](const Field& f) { return f.name == key; });
        if (it == fields.end()) throw ConfigError(unknown_key_message(key, c.subcommand, fields));
        if (!matches(value, it->kind))
            throw ConfigError("key \"" + key + "\" must be " + kind_name(it->kind) + ", got " + value.dump());
        if (!it->choices.empty()) {
            const json items = value.is_array() ? value : json::array({value});
            for (const auto& v : items)
                if (std::find(it->choices.begin(), it->choices.end(), v.get<std::string>()) == it->choices.end()) {
                    std::string allowed;
                    for (const auto& ch : it->choices) allowed += (allowed.empty() ? "" : ", ") + ch;
                    throw ConfigError("key \"" + key + "\" has invalid value " + v.dump() + " (allowed: " + allowed + ")");
                }
        }
        try {
            it->set(c, value);
        } catch (const json::exception& e) {
            throw ConfigError("key \"" + key + "\": " + e.what());
        }
    }
}

/// Full parse: defaults, then `doc`, then required-key and semantic checks.
inline RunConfig parse_config(const std::string& subcommand, const json& doc) {
    using namespace config_detail;
    RunConfig c;
    c.subcommand = subcommand;
    apply(c, doc);
    for (const auto& f : fields_for(subcommand))
        if (f.required && !doc.contains(f.name))
            throw ConfigError("missing required key \"" + f.name + "\" for subcommand " + subcommand);
    validate(c);
    return c;
}

/// Every key of the subcommand with its resolved value.
inline json serialize(const RunConfig& c) {
    json out = json::object();
    out["subcommand"] = c.subcommand;
    for (const auto& f : config_detail::fields_for(c.subcommand)) out[f.name] = f.get(c);
    return out;
}

/// FNV-1a (64-bit) over the canonical serialization, excluding keys that do not
/// affect results (output_dir, threads, format).
inline std::string config_hash(const RunConfig& c) {
    json doc = serialize(c);
    doc.erase("output_dir");
    doc.erase("threads");
    doc.erase("format");
    const std::string text = doc.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Parse a `key=value` override. The value is read as JSON when it parses,
/// otherwise as a bare string (so `boundary=periodic` works unquoted).
inline std::pair<std::string, json> parse_override(const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got \"" + kv + "\"");
    const std::string key = kv.substr(0, eq), text = kv.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    return {key, value};
}

}  // namespace ptsim
