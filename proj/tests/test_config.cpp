#include <doctest.h>

#include "scatlab/config.hpp"
#include "scatlab/runner.hpp"

#include <filesystem>
#include <fstream>

using namespace scatlab;

TEST_SUITE("config") {

TEST_CASE("serialize/parse round trip is the identity") {
    ScenarioConfig cfg;
    cfg.grid_n = 512;
    cfg.grid_rmax = 48.0;
    cfg.model_kind = "saturated";
    cfg.sat_m = 3.0;
    cfg.sat_n = 2.0;
    cfg.preset = "soliton";
    cfg.mass = 40.0;
    cfg.t1 = 25.0;
    cfg.dt = 2e-3;
    cfg.snapshots = "geometric";
    cfg.out_dir = "soliton_run";
    cfg.probes.push_back({"weak_localization", {}});
    cfg.probes.push_back({"gamma_limit", {{"alphas", "0.5,0.7,0.9"}}});

    const std::string text = serialize_config(cfg);
    const ScenarioConfig back = parse_config(text);
    CHECK(back == cfg);
    CHECK(serialize_config(back) == text);
}

TEST_CASE("parser rejects malformed input with named offenders") {
    CHECK_THROWS_AS(parse_config("[nosuch]\nx = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("[grid]\nn 12\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("[grid]\nbogus = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("x = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("[grid]\nn = banana\n"), std::invalid_argument);

    try {
        ScenarioConfig cfg = parse_config("[observers]\nprobe = no_such_probe\n");
        validate_probes(cfg);
        CHECK(false);
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("no_such_probe") != std::string::npos);
    }
}

TEST_CASE("probe argument parsing") {
    const ScenarioConfig cfg =
        parse_config("[observers]\nprobe = gamma_limit alphas=0.5,0.7 foo=2.5\n");
    REQUIRE(cfg.probes.size() == 1);
    CHECK(cfg.probes[0].arg("foo", 0.0) == doctest::Approx(2.5));
    const auto alphas = cfg.probes[0].arg_list("alphas", {});
    REQUIRE(alphas.size() == 2);
    CHECK(alphas[1] == doctest::Approx(0.7));
}

TEST_CASE("potential presets") {
    auto ew = parse_potential("exp_well:3,1");
    CHECK(ew(0.0) == doctest::Approx(-3.0));
    CHECK(ew(1.0) == doctest::Approx(-3.0 * std::exp(-1.0)));
    auto isq = parse_potential("inv_square:1");
    CHECK(isq(2.0) == doctest::Approx(0.2));
    CHECK_FALSE(static_cast<bool>(parse_potential("none")));
    CHECK_THROWS_AS(parse_potential("mystery:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_potential("exp_well:3"), std::invalid_argument);
}

TEST_CASE("initial data presets build and normalize") {
    ScenarioConfig cfg;
    cfg.grid_n = 256;
    cfg.grid_rmax = 32.0;
    cfg.preset = "outgoing_packet";
    cfg.r0 = 8.0;
    cfg.width = 1.5;
    cfg.wavenumber = 1.0;
    cfg.mass = 2.0;
    const RadialGrid g = config_grid(cfg);
    const EquationModel model = config_model(cfg);
    std::map<std::string, double> meta;
    WaveFunction u = config_initial_data(cfg, g, model, meta);
    CHECK(u.mass() == doctest::Approx(2.0).epsilon(1e-12));

    cfg.preset = "bound_state";
    CHECK_THROWS_AS(config_initial_data(cfg, g, model, meta), std::invalid_argument);

    cfg.model_kind = "static_potential";
    cfg.potential = "exp_well:3,1";
    const EquationModel m2 = config_model(cfg);
    WaveFunction b = config_initial_data(cfg, g, m2, meta);
    CHECK(meta.count("bound_energy") == 1);
    CHECK(b.mass() == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("run_scenario writes the full artifact set") {
    namespace fs = std::filesystem;
    ScenarioConfig cfg;
    cfg.grid_n = 128;
    cfg.grid_rmax = 16.0;
    cfg.preset = "gaussian";
    cfg.r0 = 4.0;
    cfg.width = 1.0;
    cfg.t1 = 2.0;
    cfg.dt = 2e-3;
    cfg.cadence = 0.25;
    cfg.snapshots = "geometric";
    cfg.out_dir = "cfg_test_run";
    cfg.probes.push_back({"virial", {}});

    const std::string root = (fs::temp_directory_path() / "scatlab_cfg_test").string();
    fs::remove_all(root);
    auto outcome = run_scenario(cfg, root);
    CHECK(outcome.status == ExitStatus::Ok);
    CHECK(fs::exists(outcome.directory + "/manifest.txt"));
    CHECK(fs::exists(outcome.directory + "/conserved.csv"));
    CHECK(fs::exists(outcome.directory + "/verdicts.csv"));
    CHECK(fs::exists(outcome.directory + "/probe_virial.txt"));
    CHECK(fs::exists(outcome.directory + "/final.dat"));

    // the manifest reparses to the same config
    std::ifstream mf(outcome.directory + "/manifest.txt");
    std::string first;
    std::getline(mf, first);
    std::stringstream rest;
    rest << mf.rdbuf();
    CHECK(parse_config(rest.str()) == cfg);
    fs::remove_all(root);
}

}  // TEST_SUITE
