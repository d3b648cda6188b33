#pragma once

#include "scatlab/config.hpp"
#include "scatlab/report.hpp"

#include <string>
#include <vector>

namespace scatlab {

inline constexpr const char* kVersion = "0.1.0";
/// Environment variable naming the default output root.
inline constexpr const char* kOutputRootEnv = "SCATLAB_OUT";

enum class ExitStatus : int {
    Ok = 0,           // all verdicts PASS (or no verdicts)
    VerdictFail = 1,  // at least one FAIL verdict
    Usage = 2,        // config / usage errors
    Runtime = 3,      // runtime failure
};

struct RunOutcome {
    std::string directory;
    std::vector<std::pair<std::string, Verdict>> verdicts;
    ExitStatus status = ExitStatus::Ok;
};

/// Executes a scenario: evolves, evaluates the configured probes, and writes
/// the run directory (manifest, conserved.csv, snapshots, probe reports,
/// verdict summary). Deterministic for a fixed config and code version.
RunOutcome run_scenario(const ScenarioConfig& cfg, const std::string& output_root = "");

/// Post-processing entry: loads geometric snapshots from a run directory and
/// writes the asymptotic decomposition next to them.
RunOutcome decompose_run(const std::string& run_directory, double alpha);

/// Dense-oracle cross-check of the split-step engine on a small grid:
/// endpoint errors at dt and dt/2 and the observed convergence order.
RunOutcome oracle_compare(const ScenarioConfig& cfg, const std::string& output_root = "");

std::string resolve_output_dir(const ScenarioConfig& cfg, const std::string& output_root);

}  // namespace scatlab
