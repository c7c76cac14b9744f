#include "ssann/cli.hpp"
#include "ssann/forecast.hpp"
#include "ssann/io.hpp"
#include "ssann/series.hpp"
#include "support/tempdir.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace ssann;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome run_cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

json read_json(const fs::path& p) { return json::parse(support::slurp(p)); }

// Sunspot config in `dir` with small training settings; `extra` is merged in.
fs::path sunspot_config(const support::TempDir& dir, json extra = json::object()) {
    json cfg = {
        {"input", SSANN_DATA_DIR "/sunspots_monthly.csv"},
        {"time_column", "year"},
        {"value_column", "sunspots"},
        {"epochs", 40},
        {"pc_step", 8},
        {"output_dir", (dir.path() / "out").string()},
    };
    cfg.update(extra);
    return dir.write("config.json", cfg.dump());
}

std::string out_file(const support::TempDir& dir, const std::string& name) {
    return support::slurp(dir.path() / "out" / name);
}

} // namespace

TEST(Cli, DecomposeWritesSpectrumAndComponents) {
    support::TempDir dir;
    const auto cfg = sunspot_config(dir);
    const auto r = run_cli({"decompose", "--config", cfg.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto spectrum = read_json(dir.path() / "out" / "spectrum.json");
    EXPECT_EQ(spectrum["M"], 35);
    EXPECT_EQ(spectrum["N"], 792);
    EXPECT_EQ(spectrum["eigenvalues"].size(), 35u);
    EXPECT_LT(spectrum["completeness_error"].get<double>(), 1e-10);
    EXPECT_EQ(spectrum["config_echo"]["config"]["window"], 35);
    EXPECT_FALSE(spectrum["config_echo"]["config"].contains("output_dir"));

    std::istringstream csv(out_file(dir, "components.csv"));
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(std::count(header.begin(), header.end(), ','), 36);
    EXPECT_EQ(header.substr(0, 20), "timestamp,series,rc1");
    EXPECT_NE(out_file(dir, "singular_spectrum.csv").find("k,log10_lambda,clamped\n1,"), std::string::npos);
}

TEST(Cli, DecomposeWithUnitWindowIsExact) {
    support::TempDir dir;
    const auto cfg = sunspot_config(dir, {{"window", 1}, {"pc_step", 1}});
    ASSERT_EQ(run_cli({"decompose", "--config", cfg.string()}).code, 0);
    EXPECT_LT(read_json(dir.path() / "out" / "spectrum.json")["completeness_error"].get<double>(), 1e-10);
}

TEST(Cli, RerunIsBitwiseIdentical) {
    support::TempDir dir;
    const auto cfg = sunspot_config(dir);
    ASSERT_EQ(run_cli({"train", "--config", cfg.string()}).code, 0);
    const auto first_net = out_file(dir, "network.json");
    const auto first_trace = out_file(dir, "trace.csv");
    ASSERT_EQ(run_cli({"train", "--config", cfg.string()}).code, 0);
    EXPECT_EQ(out_file(dir, "network.json"), first_net);
    EXPECT_EQ(out_file(dir, "trace.csv"), first_trace);
}

TEST(Cli, UnknownConfigKeyIsAConfigError) {
    support::TempDir dir;
    const auto cfg = sunspot_config(dir, {{"windw", 12}});
    const auto r = run_cli({"decompose", "--config", cfg.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("windw"), std::string::npos);
    const auto line = json::parse(r.err);
    EXPECT_EQ(line["error"], "ConfigError");
}

TEST(Cli, OverridesAreAppliedAndEchoed) {
    support::TempDir dir;
    const auto cfg = sunspot_config(dir);
    ASSERT_EQ(run_cli({"decompose", "--config", cfg.string(), "--set", "window=12", "--set", "pc_step=4"}).code, 0);
    const auto spectrum = read_json(dir.path() / "out" / "spectrum.json");
    EXPECT_EQ(spectrum["M"], 12);
    EXPECT_EQ(spectrum["config_echo"]["overrides"], (json{"window=12", "pc_step=4"}));
    EXPECT_EQ(run_cli({"decompose", "--config", cfg.string(), "--set", "window=\"x\""}).code, 2);
    EXPECT_EQ(run_cli({"decompose", "--config", cfg.string(), "--set", "nonsense"}).code, 2);
}

TEST(Cli, BaselineAndCurriculumShareInitialWeights) {
    support::TempDir dir;
    const auto cfg = sunspot_config(dir);
    ASSERT_EQ(run_cli({"train", "--config", cfg.string(), "--mode", "curriculum"}).code, 0);
    const auto cur = read_json(dir.path() / "out" / "summary.json");
    ASSERT_EQ(run_cli({"train", "--config", cfg.string(), "--mode", "baseline"}).code, 0);
    const auto base = read_json(dir.path() / "out" / "summary.json");
    EXPECT_EQ(cur["initial_network"], base["initial_network"]);
    EXPECT_EQ(cur["epoch_budget"], base["epoch_budget"]);
    EXPECT_EQ(cur["mode"], "curriculum");
    EXPECT_EQ(base["mode"], "baseline");
    EXPECT_EQ(cur["stage_boundaries"].size(), cur["stages"].size() + 1);
}

TEST(Cli, PredictHorizonOneEqualsOneStep) {
    support::TempDir dir;
    const auto cfg = sunspot_config(dir);
    ASSERT_EQ(run_cli({"train", "--config", cfg.string()}).code, 0);
    ASSERT_EQ(run_cli({"predict", "--config", cfg.string(), "--horizon", "1"}).code, 0);
    const auto doc = read_json(dir.path() / "out" / "forecast.json");
    EXPECT_EQ(doc["config_echo"]["overrides"], (json{"horizon=1"}));
    const auto net = io::network_from_json(read_json(dir.path() / "out" / "network.json"));
    const auto raw = load_csv(SSANN_DATA_DIR "/sunspots_monthly.csv", "sunspots", "year");
    const auto s = standardize(raw);
    const std::vector<double> tail(s.values.end() - 5, s.values.end());
    EXPECT_EQ(doc["standardized_predictions"][0].get<double>(), forecast::one_step_predict(net, tail));
    EXPECT_NEAR(doc["timestamps"][0].get<double>(), 1984.0, 1e-9);
}

TEST(Cli, PredictRejectsMismatchedEmbedding) {
    support::TempDir dir;
    const auto cfg = sunspot_config(dir);
    ASSERT_EQ(run_cli({"train", "--config", cfg.string()}).code, 0);
    const auto r = run_cli({"predict", "--config", cfg.string(), "--set", "embedding=6"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(json::parse(r.err)["error"], "DimensionMismatch");
}

TEST(Cli, InputValidationExitCodes) {
    support::TempDir dir;
    dir.write("flat.csv", "time,value\n0,3\n1,3\n2,3\n3,3\n4,3\n5,3\n6,3\n7,3\n8,3\n9,3\n10,3\n11,3\n");
    const auto flat = dir.write("flat.json", json{{"input", "flat.csv"}, {"window", 2}, {"embedding", 2}, {"pc_step", 1}}.dump());
    const auto r = run_cli({"decompose", "--config", flat.string(), "--set", "output_dir=" + (dir.path() / "o").string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(json::parse(r.err)["error"], "ZeroVariance");

    const auto cfg = sunspot_config(dir);
    EXPECT_EQ(json::parse(run_cli({"decompose", "--config", cfg.string(), "--set", "window=400"}).err)["error"],
              "WindowTooLarge");
    EXPECT_EQ(run_cli({"decompose", "--config", (dir.path() / "nope.json").string()}).code, 2);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
}

TEST(Cli, DivergenceExitsWithRuntimeCode) {
    support::TempDir dir;
    const auto cfg = sunspot_config(dir, {{"learning_rate", 1e6}});
    const auto r = run_cli({"train", "--config", cfg.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(json::parse(r.err)["error"], "DivergenceDetected");
    EXPECT_EQ(read_json(dir.path() / "out" / "summary.json")["status"], "diverged");
}

TEST(Cli, GoldenFixture) {
    // Regression fixture: outputs of train + predict on a small committed
    // series, recorded from a reference build.
    const fs::path golden = SSANN_TEST_DATA_DIR "/golden";
    support::TempDir dir;
    const std::string out_dir = "output_dir=" + dir.path().string();
    ASSERT_EQ(run_cli({"train", "--config", (golden / "config.json").string(), "--set", out_dir}).code, 0);
    ASSERT_EQ(run_cli({"predict", "--config", (golden / "config.json").string(), "--set", out_dir}).code, 0);
    EXPECT_EQ(support::slurp(dir.path() / "summary.json"), support::slurp(golden / "expected_summary.json"));
    EXPECT_EQ(support::slurp(dir.path() / "forecast.csv"), support::slurp(golden / "expected_forecast.csv"));
}
