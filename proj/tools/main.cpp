// Scenario runner for the radial NLS phase-space laboratory.
//
// Subcommands:
//   run <config>                 evolve a scenario and evaluate its probes
//   verify <suite>               run a verification suite (algebra, oracle,
//                                estimates, scattering, all)
//   decompose <dir> --alpha <a>  asymptotic decomposition of a finished run
//   oracle-compare <config>      dense-propagator cross-check (small grids)
//
// Exit codes: 0 all PASS, 1 FAIL verdicts, 2 usage/config errors, 3 runtime.

#include <CLI11.hpp>

#include "scatlab/runner.hpp"
#include "scatlab/verify.hpp"

#include <cstdio>
#include <iostream>

using namespace scatlab;

namespace {

int finish(const RunOutcome& outcome) {
    for (const auto& [name, verdict] : outcome.verdicts)
        std::printf("%s %s\n", to_string(verdict).c_str(), name.c_str());
    std::printf("run directory: %s\n", outcome.directory.c_str());
    return static_cast<int>(outcome.status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"phase-space scattering laboratory for radial NLS"};
    app.require_subcommand(1);

    std::string config_path, run_dir, suite;
    double alpha = 0.8;
    std::string output_root;

    auto* cmd_run = app.add_subcommand("run", "run a scenario config");
    cmd_run->add_option("config", config_path, "scenario config file")->required();
    cmd_run->add_option("--out-root", output_root, "output root (default $SCATLAB_OUT)");

    auto* cmd_verify = app.add_subcommand("verify", "run a verification suite");
    cmd_verify->add_option("suite", suite, "algebra|oracle|estimates|scattering|all")->required();

    auto* cmd_dec = app.add_subcommand("decompose", "asymptotic decomposition of a run directory");
    cmd_dec->add_option("dir", run_dir, "run directory with geometric snapshots")->required();
    cmd_dec->add_option("--alpha", alpha, "exterior exponent in (1/3, 1)");

    auto* cmd_oc = app.add_subcommand("oracle-compare", "dense-oracle cross-check of a scenario");
    cmd_oc->add_option("config", config_path, "scenario config file")->required();
    cmd_oc->add_option("--out-root", output_root, "output root (default $SCATLAB_OUT)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 2;
    }

    try {
        if (cmd_run->parsed()) {
            ScenarioConfig cfg;
            try {
                cfg = load_config(config_path);
                validate_probes(cfg);
            } catch (const std::invalid_argument& e) {
                std::fprintf(stderr, "config error: %s\n", e.what());
                return static_cast<int>(ExitStatus::Usage);
            }
            return finish(run_scenario(cfg, output_root));
        }
        if (cmd_verify->parsed()) {
            if (!is_known_suite(suite)) {
                std::fprintf(stderr, "usage error: unknown suite '%s'\n", suite.c_str());
                return static_cast<int>(ExitStatus::Usage);
            }
            const int failures = run_suite(suite, std::cout);
            return failures == 0 ? static_cast<int>(ExitStatus::Ok)
                                 : static_cast<int>(ExitStatus::VerdictFail);
        }
        if (cmd_dec->parsed()) {
            if (!(alpha > 1.0 / 3.0 && alpha < 1.0)) {
                std::fprintf(stderr, "usage error: alpha must lie in (1/3, 1)\n");
                return static_cast<int>(ExitStatus::Usage);
            }
            try {
                return finish(decompose_run(run_dir, alpha));
            } catch (const std::invalid_argument& e) {
                std::fprintf(stderr, "error: %s\n", e.what());
                return static_cast<int>(ExitStatus::Usage);
            }
        }
        if (cmd_oc->parsed()) {
            ScenarioConfig cfg;
            try {
                cfg = load_config(config_path);
            } catch (const std::invalid_argument& e) {
                std::fprintf(stderr, "config error: %s\n", e.what());
                return static_cast<int>(ExitStatus::Usage);
            }
            return finish(oracle_compare(cfg, output_root));
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return static_cast<int>(ExitStatus::Usage);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime failure: %s\n", e.what());
        return static_cast<int>(ExitStatus::Runtime);
    }
    return static_cast<int>(ExitStatus::Usage);
}
