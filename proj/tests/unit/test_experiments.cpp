// test_experiments.cpp — recipes, configs and run artifact tests

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "becgrad/experiments.hpp"
#include "becgrad/serialization.hpp"
#include "becgrad/statesynth.hpp"
#include "helpers.hpp"

using namespace becgrad;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("becgrad_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// small, fast curves config
ExperimentConfig tiny_curves(const fs::path& out) {
    ExperimentConfig c = preset("fig4");
    c.variants.resize(1);
    c.grid.samples = 41;
    c.output_dir = out;
    return c;
}

std::string config_error(const json& j) {
    try {
        config_from_json(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("every preset validates") {
    for (const auto& r : recipes()) {
        ExperimentConfig c = preset(r.name);
        c.output_dir = "unused";
        CHECK_NOTHROW(c.validate());
        CHECK(find_recipe(r.name)->kind == r.kind);
    }
    CHECK_THROWS_AS(preset("fig99"), ConfigError);
    CHECK(preset("fig6").params.N == 2);
    CHECK(preset("fig6").variants.size() == 5);
    CHECK(preset("fig10").params.N == 50);
}

TEST_CASE("config JSON round trip") {
    ExperimentConfig c = preset("fig8");
    c.output_dir = "out/fig8";
    c.grid.t_end = 90.0;
    const json j = config_to_json(c);
    const ExperimentConfig back = config_from_json(j);
    CHECK(config_to_json(back) == j);
}

TEST_CASE("config errors name the offending key") {
    CHECK(config_error({{"recipe", "fig7"}, {"rates", {{"gamm_o", 0.01}}}}).find("rates.gamm_o") != std::string::npos);
    CHECK(config_error({{"recipes", "fig7"}}).find("recipes") != std::string::npos);
    CHECK(config_error({{"params", {{"N", "four"}}}}).find("params.N") != std::string::npos);
    CHECK(config_error({{"variants", {{{"label", "a"}, {"chii", 1}}}}}).find("variants[0].chii") != std::string::npos);
    CHECK(config_error({{"recipe", "fig77"}}).find("fig77") != std::string::npos);
    CHECK(config_error({{"initial_state", "bell"}}).find("initial_state") != std::string::npos);
}

TEST_CASE("a minimal config takes the recipe defaults") {
    ExperimentConfig a = config_from_json({{"recipe", "fig5"}});
    CHECK(config_to_json(a) == config_to_json(preset("fig5")));
    ExperimentConfig b = config_from_json({{"params", {{"N", 6}}}}, preset("fig7"));
    CHECK(b.recipe == "fig7");
    CHECK(b.params.N == 6);
}

TEST_CASE("validation rejects bad values") {
    ExperimentConfig c = preset("custom");
    c.output_dir = "x";
    c.params.N = 3;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = preset("custom");
    CHECK_THROWS_AS(c.validate(), ConfigError);  // no output dir
    c.output_dir = "x";
    c.rates.gamma_o = -1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = preset("custom");
    c.output_dir = "x";
    c.variants[0].label = "../escape";
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("overrides") {
    ExperimentConfig c = preset("fig7");
    Overrides o;
    o.N = 6;
    apply_overrides(c, o);
    CHECK(c.N_list == std::vector<std::size_t>{6});
    Overrides g;
    g.gamma_o = 0.02;
    apply_overrides(c, g);
    REQUIRE(c.variants.size() == 1);
    CHECK(c.variants[0].label == "override");
    CHECK(resolve_variant(c, c.variants[0]).rates.gamma_o == 0.02);
}

TEST_CASE("a flag override shows in the manifest") {
    const fs::path dir = scratch("override");
    ExperimentConfig c = tiny_curves(dir);
    Overrides o;
    o.N = 6;
    apply_overrides(c, o);
    const RunResult r = run(c);
    CHECK(r.files.back() == "manifest.json");
    const json m = json::parse(slurp(dir / "manifest.json"));
    CHECK(m["config"]["params"]["N"] == 6);
    CHECK(m["recipe"] == "fig4");
    CHECK(m["version"] == kVersion);
    fs::remove_all(dir);
}

TEST_CASE("reruns are byte-identical and match the cosine law") {
    const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
    run(tiny_curves(a));
    run(tiny_curves(b));
    const std::string csv = slurp(a / "singlet.csv");
    CHECK(csv == slurp(b / "singlet.csv"));

    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,estimator,variance,uncertainty");
    const double omega_d = preset("fig4").params.Omega_D;
    int rows = 0;
    while (std::getline(in, line)) {
        double t = 0.0, e = 0.0;
        char comma = 0;
        std::istringstream cells(line);
        cells >> t >> comma >> e;
        CHECK(std::abs(e - 8.0 / 3.0 * std::cos(omega_d * t)) < 1e-6 * 8.0 / 3.0);
        ++rows;
    }
    CHECK(rows == 41);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("verification against the oracle") {
    const fs::path dir = scratch("verify");
    ExperimentConfig c = preset("custom");
    c.params.N = 4;
    c.rates.gamma_o = 0.01;
    c.grid.samples = 21;
    c.output_dir = dir;
    c.verify = true;
    const RunResult r = run(c);
    REQUIRE(r.verification.size() == 1);
    CHECK(r.verification[0].checked);
    CHECK(r.verification[0].max_difference < 1e-7);
    CHECK(r.verified_ok());
    const json m = json::parse(slurp(dir / "manifest.json"));
    CHECK(m["verification"]["all_passed"] == true);
    fs::remove_all(dir);

    DetectionSetup big;
    big.params.N = 20;  // 121 > 100 states
    const VerificationEntry e = verify_point(big, "big", 1.0);
    CHECK_FALSE(e.checked);
}

TEST_CASE("a failing run leaves no partial outputs") {
    const fs::path dir = scratch("partial");
    ExperimentConfig c = tiny_curves(dir);
    c.variants = preset("fig4").variants;
    fs::create_directories(dir / (c.variants[1].label + ".csv"));  // blocks the second file
    CHECK_THROWS(run(c));
    CHECK_FALSE(fs::exists(dir / (c.variants[0].label + ".csv")));
    CHECK_FALSE(fs::exists(dir / "manifest.json"));
    fs::remove_all(dir);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_number(std::nan("")) == "nan");
    const json e = error_record("config", "bad");
    CHECK(e["error"]["type"] == "config");
    CHECK(e["error"]["message"] == "bad");
}

TEST_CASE("state JSON round trip") {
    const QuantumState s = synthesize(4, 10.0).state;
    const QuantumState back = state_from_json(state_to_json(s));
    CHECK(back.basis()->same_space(*s.basis()));
    CHECK(testing::max_abs(back.amplitudes() - s.amplitudes()) == 0.0);

    const QuantumState m = singlet_state(4, WellPair::at_most(2).joint).to_mixed();
    const fs::path file = scratch("state.json");
    save_state(m, file);
    const QuantumState mb = load_state(file);
    CHECK_FALSE(mb.is_pure());
    CHECK(testing::max_abs(mb.density() - m.density()) == 0.0);
    fs::remove(file);

    json bad = state_to_json(s);
    bad["basis"]["dimension"] = 3;
    CHECK_THROWS(state_from_json(bad));
}
