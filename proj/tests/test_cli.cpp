#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ptsim/cli.hpp"

using namespace ptsim;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ptsim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("ptsim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_config(const std::string& name, const std::string& text) {
        const auto p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    fs::path dir_;
};

}  // namespace

TEST(Config, ParsesExampleAndRoundTrips) {
    const auto doc = json::parse(R"({"L": 6, "gamma": 0.4, "J": 0.95, "epsilon": 0.1, "seed": 7,
                                      "boundary": "periodic", "t_max": 10, "n_times": 11,
                                      "initial": "neel", "ordering": "TTdag", "method": "expm"})");
    const RunConfig c = parse_config("dynamics", doc);
    EXPECT_EQ(c.chain.sites, 6);
    EXPECT_EQ(c.chain.boundary, Boundary::periodic);
    EXPECT_EQ(c.dynamics.ordering, Ordering::t_t_dag);
    EXPECT_EQ(c.dynamics.method, PropagationMethod::expm);
    EXPECT_EQ(parse_config("dynamics", serialize(c)), c);
}

TEST(Config, RoundTripEverySubcommand) {
    for (const auto& sub : subcommands()) {
        json doc = json::object();
        if (sub == "scan") doc = {{"gamma_grid", {0.1}}, {"J_grid", {0.95}}, {"L_list", {4}}};
        if (sub == "reproduce") doc = {{"target", "fig2"}};
        const RunConfig c = parse_config(sub, doc);
        EXPECT_EQ(parse_config(sub, serialize(c)), c) << sub;
    }
}

TEST(Config, UnknownKeyNamesIt) {
    try {
        parse_config("spectrum", json::parse(R"({"gama": 0.5})"));
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("\"gama\""), std::string::npos) << msg;
        EXPECT_NE(msg.find("did you mean \"gamma\""), std::string::npos) << msg;
    }
}

TEST(Config, TypeAndRequiredErrors) {
    EXPECT_THROW(parse_config("spectrum", json::parse(R"({"L": "six"})")), ConfigError);
    EXPECT_THROW(parse_config("spectrum", json::parse(R"({"L": 4.5})")), ConfigError);
    EXPECT_THROW(parse_config("spectrum", json::parse(R"({"boundary": "twisted"})")), ConfigError);
    EXPECT_THROW(parse_config("scan", json::parse(R"({"gamma_grid": [0.1], "J_grid": [1]})")), ConfigError);
    EXPECT_THROW(parse_config("reproduce", json::object()), ConfigError);
    EXPECT_THROW(parse_config("spectrum", json::parse(R"({"L": 15})")), ConfigError);
    EXPECT_THROW(parse_config("meanfield", json::parse(R"({"feedback_sign": 0})")), ConfigError);
}

TEST(Config, HashIgnoresPlacementOnly) {
    RunConfig a = parse_config("spectrum", json::parse(R"({"L": 4, "gamma": 0.3})"));
    RunConfig b = a;
    b.output_dir = "elsewhere";
    b.threads = 4;
    EXPECT_EQ(config_hash(a), config_hash(b));
    b.chain.gamma = 0.30000000000000004;
    EXPECT_NE(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Config, Overrides) {
    EXPECT_EQ(parse_override("gamma=0.5").second, json(0.5));
    EXPECT_EQ(parse_override("boundary=periodic").second, json("periodic"));
    EXPECT_EQ(parse_override("gamma_grid=[0.1,0.2]").second, json::parse("[0.1,0.2]"));
    EXPECT_THROW(parse_override("gamma"), ConfigError);
}

TEST(Recipes, DocumentedFilesMatchExpansion) {
    for (const auto& target : reproduce_targets()) {
        const fs::path file = fs::path(PTSIM_SOURCE_DIR) / "recipes" / (target + ".json");
        ASSERT_TRUE(fs::exists(file)) << file;
        const json doc = json::parse(slurp(file));
        EXPECT_EQ(doc, recipe_to_json(target)) << target;
        for (bool large : {false, true}) {
            const Recipe from_file = recipe_from_json(doc, large);
            const Recipe expanded = expand_recipe(target, large);
            ASSERT_EQ(from_file.runs.size(), expanded.runs.size()) << target;
            for (std::size_t k = 0; k < expanded.runs.size(); ++k) {
                EXPECT_EQ(from_file.runs[k].name, expanded.runs[k].name);
                EXPECT_EQ(from_file.runs[k].config, expanded.runs[k].config) << target << "/" << expanded.runs[k].name;
            }
        }
    }
}

TEST(Recipes, LargeRunsNeedOptIn) {
    for (const auto& target : reproduce_targets())
        for (const auto& run : expand_recipe(target, false).runs) EXPECT_FALSE(run.large) << target << "/" << run.name;
    EXPECT_GT(expand_recipe("fig1", true).runs.size(), expand_recipe("fig1", false).runs.size());
    EXPECT_THROW(expand_recipe("fig7"), ConfigError);
}

TEST_F(CliTest, MisspelledKeyExitsTwo) {
    const auto r = run_cli({"spectrum", "--set", "gama=0.5", "--out", dir_.string()});
    EXPECT_EQ(r.code, cli::kExitConfig);
    EXPECT_NE(r.err.find("gama"), std::string::npos) << r.err;
    const auto cfg = write_config("bad.json", R"({"L": 4, "gama": 0.5})");
    EXPECT_EQ(run_cli({"spectrum", "--config", cfg.string(), "--out", dir_.string()}).code, cli::kExitConfig);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
    EXPECT_EQ(run_cli({"bogus"}).code, cli::kExitConfig);
    EXPECT_EQ(run_cli({"spectrum", "--threads", "many"}).code, cli::kExitConfig);
    EXPECT_EQ(run_cli({"tls", "--seed", "3", "--out", dir_.string()}).code, cli::kExitConfig);
    EXPECT_EQ(run_cli({"spectrum", "--config", (dir_ / "missing.json").string()}).code, cli::kExitConfig);
    EXPECT_EQ(run_cli({"reproduce", "fig9", "--out", dir_.string()}).code, cli::kExitConfig);
}

TEST_F(CliTest, VersionAndPrintConfig) {
    auto r = run_cli({"--version"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, std::string(PTSIM_VERSION) + "\n");
    r = run_cli({"spectrum", "--set", "L=4", "--seed", "9", "--print-config"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = json::parse(r.out);
    EXPECT_EQ(doc.at("L"), 4);
    EXPECT_EQ(doc.at("seed"), 9);
    EXPECT_EQ(doc.at("config_hash").get<std::string>().size(), 16u);
}

TEST_F(CliTest, FlagsOverrideConfigFile) {
    const auto cfg = write_config("c.json", R"({"L": 5, "gamma": 0.2, "threads": 1})");
    const auto r = run_cli({"spectrum", "--config", cfg.string(), "--set", "gamma=0.7", "--threads", "2", "--print-config"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = json::parse(r.out);
    EXPECT_EQ(doc.at("L"), 5);
    EXPECT_EQ(doc.at("gamma"), 0.7);
    EXPECT_EQ(doc.at("threads"), 2);
}

TEST_F(CliTest, SpectrumOutputsEmbedHash) {
    const auto r = run_cli({"spectrum", "--set", "L=4", "--set", "gamma=0.3", "--out", dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto manifest = json::parse(slurp(dir_ / "run.json"));
    const std::string hash = manifest.at("config_hash");
    EXPECT_EQ(manifest.at("version"), PTSIM_VERSION);
    EXPECT_EQ(hash, config_hash(parse_config("spectrum", manifest.at("config"))));
    for (const auto& name : manifest.at("outputs")) {
        const std::string text = slurp(dir_ / name.get<std::string>());
        if (name.get<std::string>().ends_with(".csv"))
            EXPECT_TRUE(text.starts_with("# config_hash=" + hash + "\n")) << name;
        else
            EXPECT_EQ(json::parse(text).at("config_hash"), hash) << name;
    }
    std::ifstream f(dir_ / "spectrum.csv");
    std::string line;
    std::getline(f, line);
    std::getline(f, line);
    EXPECT_EQ(line, "index,re,im");
}

TEST_F(CliTest, DynamicsColumns) {
    const auto r = run_cli({"dynamics", "--set", "L=4", "--set", "gamma=0.5", "--set", "n_times=5", "--set", "t_max=2",
                            "--out", dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream f(dir_ / "dynamics.csv");
    std::string line;
    std::getline(f, line);
    std::getline(f, line);
    EXPECT_EQ(line, "t,purity,S2,norm_log");
    int rows = 0;
    while (std::getline(f, line)) ++rows;
    EXPECT_EQ(rows, 5);
}

TEST_F(CliTest, ScanCsvAndSidecar) {
    const auto r = run_cli({"scan", "--set", "gamma_grid=[0.2,1.5]", "--set", "J_grid=[0.95]", "--set", "L_list=[3]",
                            "--set", "n_realizations=2", "--set", "epsilon=0.1", "--seed", "5", "--out", dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream f(dir_ / "scan.csv");
    std::string line;
    std::getline(f, line);
    std::getline(f, line);
    EXPECT_EQ(line, "gamma,J,L,realization,gap,purity_ss,d_eff,r_mean,condition,status");
    int rows = 0;
    while (std::getline(f, line)) ++rows;
    EXPECT_EQ(rows, 4);
    const auto side = json::parse(slurp(dir_ / "scan.json"));
    EXPECT_EQ(side.at("version"), PTSIM_VERSION);
    EXPECT_EQ(side.at("scan_spec").at("base_seed"), 5);
    EXPECT_EQ(side.at("scan_spec").at("L_list"), json::parse("[3]"));
}

TEST_F(CliTest, SteadyStateBinary) {
    const auto r = run_cli({"steady-state", "--set", "L=3", "--set", "gamma=0.4", "--out", dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const Matrix rho = read_rho_binary((dir_ / "rho_ss.bin").string());
    EXPECT_EQ(rho.rows(), 8);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    const auto doc = json::parse(slurp(dir_ / "steady_state.json"));
    EXPECT_NEAR(doc.at("purity").get<double>(), rho.squaredNorm(), 1e-12);
}

TEST_F(CliTest, RerunIsByteIdentical) {
    const std::vector<std::string> args{"scan",        "--set", "gamma_grid=[0.3]", "--set", "J_grid=[0.5,1]",
                                        "--set",       "L_list=[3,4]", "--set", "epsilon=0.1", "--set",
                                        "n_realizations=2"};
    auto a = args, b = args;
    a.insert(a.end(), {"--out", (dir_ / "a").string(), "--threads", "1"});
    b.insert(b.end(), {"--out", (dir_ / "b").string(), "--threads", "2"});
    ASSERT_EQ(run_cli(a).code, 0);
    ASSERT_EQ(run_cli(b).code, 0);
    EXPECT_EQ(slurp(dir_ / "a" / "scan.csv"), slurp(dir_ / "b" / "scan.csv"));
}

TEST_F(CliTest, TlsTableRecipeRuns) {
    const auto r = run_cli({"reproduce", "tls-table", "--out", dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = json::parse(slurp(dir_ / "tls-table" / "reproduce.json"));
    ASSERT_EQ(doc.at("runs").size(), 1u);
    EXPECT_EQ(doc.at("runs")[0].at("status"), "ok");
    EXPECT_TRUE(fs::exists(dir_ / "tls-table" / "table" / "tls_table.csv"));
}

TEST_F(CliTest, PrintRecipeMatchesFile) {
    const auto r = run_cli({"reproduce", "fig1", "--print-recipe"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out), json::parse(slurp(fs::path(PTSIM_SOURCE_DIR) / "recipes" / "fig1.json")));
}

TEST_F(CliTest, UnwritableOutputExitsTwo) {
    const auto blocker = write_config("file", "x");
    EXPECT_EQ(run_cli({"tls", "--out", (blocker / "sub").string()}).code, cli::kExitConfig);
}
