#pragma once

#include "scatlab/evolve.hpp"
#include "scatlab/grid.hpp"
#include "scatlab/model.hpp"

#include <map>
#include <string>
#include <vector>

namespace scatlab {

struct ProbeSpec {
    std::string name;
    std::map<std::string, std::string> args;

    double arg(const std::string& key, double fallback) const;
    std::string arg_str(const std::string& key, const std::string& fallback) const;
    std::vector<double> arg_list(const std::string& key, const std::vector<double>& fallback) const;

    bool operator==(const ProbeSpec&) const = default;
};

/// Flat sectioned key-value scenario description; sections [grid], [model],
/// [initial], [run], [observers]. serialize(parse(text)) is canonical and
/// parse(serialize(cfg)) == cfg.
struct ScenarioConfig {
    // [grid]
    int grid_n = 1024;
    double grid_rmax = 64.0;
    // [model]
    std::string model_kind = "free";
    double power_p = 3.0;
    double sat_m = 3.0;
    double sat_n = 2.0;
    std::string potential = "none";
    double envelope_C = 1.0;
    double decay_q = 2.0;
    // [initial]
    std::string preset = "gaussian";
    double r0 = 5.0, width = 1.0, wavenumber = 0.0, mass = 1.0;
    double weight_bound = 0.5, weight_packet = 0.5;
    double window_eta = 0.0, window_cap = 0.0;  // both > 0 applies the energy window
    // [run]
    double t0 = 0.0, t1 = 10.0, dt = 1e-3, cadence = 0.5;
    std::string snapshots = "none";  // none | geometric
    bool absorber = false;
    double absorber_strength = 1.0;
    std::string out_dir = "run";
    // [observers]
    std::vector<ProbeSpec> probes;

    bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
std::string serialize_config(const ScenarioConfig& cfg);

/// Named potential profiles: none | exp_well:D,a (-D e^{-a r}) |
/// gauss_well:D,w (-D e^{-(r/w)^2}) | inv_square:A (A/(1+r^2)).
std::function<double(double)> parse_potential(const std::string& spec);

RadialGrid config_grid(const ScenarioConfig& cfg);
EquationModel config_model(const ScenarioConfig& cfg);

/// Builds the preset initial data (gaussian, outgoing_packet, bound_state,
/// soliton, mixture), applies the optional energy window, and fills the
/// metadata the probes consume.
WaveFunction config_initial_data(const ScenarioConfig& cfg, const RadialGrid& grid,
                                 const EquationModel& model,
                                 std::map<std::string, double>& metadata);

/// Throws when a probe name is unknown; lists the offender.
void validate_probes(const ScenarioConfig& cfg);
std::vector<std::string> known_probe_names();

}  // namespace scatlab
