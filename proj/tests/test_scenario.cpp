#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "rfdress/kernels.hpp"
#include "rfdress/scenario.hpp"
#include "rfdress/units.hpp"

using namespace rfdress;
using scenario::Config;
using scenario::ConfigError;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

struct ScalarGuard {
    ScalarGuard() { kernels::select_backend("scalar"); }
    ~ScalarGuard() { kernels::select_backend("auto"); }
};

int run_cli(const std::string& args, const std::filesystem::path& log) {
    const std::string cmd = std::string(RFDRESS_CLI_PATH) + " " + args + " >" + log.string() +
                            " 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

const std::filesystem::path kGolden = std::filesystem::path(RFDRESS_SOURCE_DIR) / "tests" /
                                      "golden";

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("config parsing with units") {
    const Config cfg = Config::from_string(
        "rf_frequency = 300 kHz\n"
        "b_par = 5 mG   # parallel component\n"
        "gradient = 0.25 G/cm\n"
        "drift_time = 35 ms\n"
        "mass = 52 amu\n"
        "spin_j = 3\n"
        "seed = 912 a0\n");
    CHECK(cfg.frequency("rf_frequency") == doctest::Approx(units::two_pi * 3e5));
    CHECK(cfg.field("b_par") == doctest::Approx(5e-7));
    CHECK(cfg.gradient_or("gradient", 0.0) == doctest::Approx(2.5e-3));
    CHECK(cfg.time("drift_time") == doctest::Approx(35e-3));
    CHECK(cfg.mass_or("mass", 0.0) == doctest::Approx(52.0 * codata().amu));
    CHECK(cfg.number("spin_j") == 3.0);
    CHECK(cfg.length_or("seed", 0.0) == doctest::Approx(912.0 * codata().a0));
    CHECK_NOTHROW(cfg.ensure_all_consumed());
}

TEST_CASE("config error paths name the offending key") {
    CHECK_THROWS_WITH_AS(Config::from_string("rf_frequency = 300\n").frequency("rf_frequency"),
                         doctest::Contains("rf_frequency"), ConfigError);
    CHECK_THROWS_WITH_AS(Config::from_string("b_par = 3 furlong\n").field("b_par"),
                         doctest::Contains("b_par"), ConfigError);
    CHECK_THROWS_WITH_AS(Config::from_string("spin_j = 3 mG\n").number("spin_j"),
                         doctest::Contains("spin_j"), ConfigError);
    CHECK_THROWS_WITH_AS(Config::from_string("").frequency("rf_frequency"),
                         doctest::Contains("rf_frequency"), ConfigError);
    const Config cfg = Config::from_string("zzz_mystery = 1\n");
    CHECK_THROWS_WITH_AS(cfg.ensure_all_consumed(), doctest::Contains("zzz_mystery"),
                         ConfigError);
    CHECK_THROWS_AS(Config::from_string("not a key value line\n"), ConfigError);
    CHECK_THROWS_AS(Config::from_string("UPPER = 1\n"), ConfigError);
}

TEST_CASE("inheritance overrides parent keys") {
    const auto dir = std::filesystem::temp_directory_path() / "rfdress_cfg_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "base.cfg") << "spin_j = 3\ng_j = 2.0\n";
    std::ofstream(dir / "child.cfg") << "inherit = base.cfg\ng_j = 1.9\n";
    const Config cfg = Config::load(dir / "child.cfg");
    CHECK(cfg.number("spin_j") == 3.0);
    CHECK(cfg.number("g_j") == doctest::Approx(1.9));
    CHECK_THROWS_AS(Config::load(dir / "missing.cfg"), ConfigError);
}

TEST_CASE("validate reports resolved values and regime warnings") {
    const Config ok = Config::from_string(
        "rf_frequency = 300 kHz\nlarmor_perp = 85 kHz\nratio_points = 5\n");
    const auto rep = scenario::validate_scenario("gj-sweep", ok);
    CHECK(rep.warnings.empty());
    CHECK(!rep.values.empty());

    const Config weak = Config::from_string(
        "rf_frequency = 90 kHz\nlarmor_perp = 85 kHz\nratio_points = 5\n");
    const auto rep2 = scenario::validate_scenario("gj-sweep", weak);
    REQUIRE(rep2.warnings.size() == 1);
    CHECK(rep2.warnings[0].find("strong-field assumption violated") != std::string::npos);

    CHECK_THROWS_AS(scenario::validate_scenario("nope", weak), ConfigError);
}

TEST_CASE("scenario names are registered") {
    CHECK(scenario::is_scenario("fig1"));
    CHECK(scenario::is_scenario("fig2b"));
    CHECK(scenario::is_scenario("fig3a"));
    CHECK(scenario::is_scenario("fig3b"));
    CHECK(scenario::is_scenario("fig4gap"));
    CHECK(scenario::is_scenario("gj-sweep"));
    CHECK(scenario::is_scenario("quasienergy"));
    CHECK(scenario::is_scenario("classical-avg"));
    CHECK(scenario::is_scenario("channels"));
    CHECK_FALSE(scenario::is_scenario("fig9"));
}

TEST_CASE("identical configs give byte-identical output regardless of jobs") {
    ScalarGuard guard;
    const Config cfg = Config::from_string(
        "rf_frequency = 300 kHz\nlarmor_perp = 25 kHz\nratio_min = 0\nratio_max = 2\n"
        "ratio_points = 5\nramp_up = 0.1 ms\n");
    scenario::RunOptions serial, parallel;
    serial.jobs = 1;
    parallel.jobs = 4;
    const auto t1 = scenario::compute_scenario("fig1", cfg, serial);
    const auto t2 = scenario::compute_scenario("fig1", cfg, parallel);
    CHECK(scenario::csv_string(t1) == scenario::csv_string(t2));
    // and a repeated run is bitwise stable
    const auto t3 = scenario::compute_scenario("fig1", cfg, serial);
    CHECK(scenario::csv_string(t1) == scenario::csv_string(t3));
}

TEST_CASE("golden files" * doctest::timeout(500)) {
    ScalarGuard guard;
    const bool regen = std::getenv("RFDRESS_REGEN_GOLDEN") != nullptr;
    for (const std::string name :
         {"fig1", "fig2b", "fig3a", "fig3b", "fig4gap", "gj-sweep", "quasienergy",
          "classical-avg", "channels"}) {
        CAPTURE(name);
        const auto cfg_path = kGolden / (name + ".cfg");
        REQUIRE(std::filesystem::exists(cfg_path));
        Config cfg = Config::load(cfg_path);
        scenario::RunOptions opt;
        opt.jobs = 1;
        const auto table = scenario::compute_scenario(name, cfg, opt);
        const auto csv = scenario::csv_string(table);
        const auto ref_path = kGolden / (name + ".csv");
        if (regen) {
            std::ofstream(ref_path, std::ios::binary) << csv;
            continue;
        }
        REQUIRE(std::filesystem::exists(ref_path));
        CHECK(csv == slurp(ref_path));
    }
}

TEST_CASE("command line interface round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "rfdress_cli_test";
    std::filesystem::create_directories(dir);
    const auto log = dir / "log.txt";

    SUBCASE("classical-avg writes a csv and exits 0") {
        std::ofstream(dir / "avg.cfg") << "x_min = 0\nx_max = 4\nx_points = 5\n";
        const auto out = dir / "avg.csv";
        const int rc = run_cli("classical-avg --config " + (dir / "avg.cfg").string() +
                                   " --out " + out.string() + " --jobs 1",
                               log);
        CHECK(rc == 0);
        const std::string csv = slurp(out);
        CHECK(csv.substr(0, 2) == "x,");
        CHECK(csv.find("\r") == std::string::npos);
    }
    SUBCASE("unknown key exits 1 and names the key") {
        std::ofstream(dir / "bad.cfg") << "x_points = 5\nwibble = 3\n";
        const int rc = run_cli("classical-avg --config " + (dir / "bad.cfg").string(), log);
        CHECK(rc == 1);
        CHECK(slurp(log).find("wibble") != std::string::npos);
    }
    SUBCASE("missing required key exits 1 and names it") {
        std::ofstream(dir / "missing.cfg") << "ratio_points = 3\n";
        const int rc = run_cli("gj-sweep --config " + (dir / "missing.cfg").string(), log);
        CHECK(rc == 1);
        CHECK(slurp(log).find("rf_frequency") != std::string::npos);
    }
    SUBCASE("numerical failure exits 2") {
        std::ofstream(dir / "gap0.cfg")
            << "rf_frequency = 500 kHz\nlarmor_perp = 85 kHz\nratio_min = 0\n"
            << "ratio_max = 0\nratio_points = 1\nn_max = 2\n";
        const int rc = run_cli("fig4gap --config " + (dir / "gap0.cfg").string(), log);
        CHECK(rc == 2);
    }
    SUBCASE("validate prints resolved values, warnings and ok") {
        std::ofstream(dir / "warn.cfg")
            << "rf_frequency = 90 kHz\nlarmor_perp = 85 kHz\nratio_points = 3\n";
        const int rc = run_cli("validate --scenario gj-sweep --config " +
                                   (dir / "warn.cfg").string(),
                               log);
        CHECK(rc == 0);
        const std::string text = slurp(log);
        CHECK(text.find("strong-field assumption violated") != std::string::npos);
        CHECK(text.find("ok") != std::string::npos);
    }
}

}  // TEST_SUITE
