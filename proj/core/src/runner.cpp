#include "scatlab/runner.hpp"

#include "scatlab/oracle.hpp"
#include "scatlab/probes.hpp"
#include "scatlab/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace scatlab {

namespace {

std::vector<double> geometric_times(double t1) {
    return {t1 / 8.0, t1 / 4.0, t1 / 2.0, t1};
}

std::string snapshot_name(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "snapshot_t%.6f.dat", t);
    return buf;
}

EstimateReport dispatch_probe(const ProbeSpec& p, const Trajectory& traj) {
    if (p.name == "heisenberg") {
        const std::string opname = p.arg_str("op", "x2");
        ObservableOperator op;
        if (opname == "x2") op = op_position_squared();
        else if (opname == "neg_laplacian") op = op_neg_laplacian();
        else if (opname == "dilation") op = op_dilation();
        else if (opname == "gamma") op = op_gamma();
        else if (opname == "cutoff") op = op_cutoff_fixed(cutoff_geq(1.0, 0.1), p.arg("scale", 10.0));
        else throw std::invalid_argument("heisenberg probe: unknown operator '" + opname + "'");
        return heisenberg_identity_check(traj, op);
    }
    if (p.name == "prob_gamma") return prob_gamma_series(traj, p.arg("alpha", 0.8));
    if (p.name == "pres1") return pres1_integral(traj, p.arg("alpha", 0.7), p.arg("eta", 0.1));
    if (p.name == "gamma_limit")
        return gamma_limit(traj, p.arg_list("alphas", {0.5, 0.7, 0.9}));
    if (p.name == "weak_localization") return weak_localization_diag(traj);
    if (p.name == "scaling_derivative")
        return scaling_derivative_series(traj, static_cast<int>(p.arg("kmax", 2)));
    if (p.name == "maximal_velocity")
        return maximal_velocity_diag(traj, p.arg("M", 5.0),
                                     p.arg("E", traj.metadata.count("energy_cap")
                                                    ? traj.metadata.at("energy_cap")
                                                    : 1.0),
                                     p.arg("tol", 1e-3));
    if (p.name == "regularity")
        return regularity_probe(traj.frames.front().state, traj.model,
                                p.arg_list("M", {16, 32, 64, 128, 256}), p.arg("K", 2.0));
    if (p.name == "morawetz") return morawetz_scan(traj, p.arg_list("M", {2, 4, 8}));
    if (p.name == "ap_plus") return ap_plus_series(traj, p.arg("M", 16.0), p.arg("R", 0.0));
    if (p.name == "second_microlocal")
        return second_microlocal_series(traj, p.arg("alpha", 0.9), p.arg("beta", 0.2),
                                        p.arg_str("direction", "geq") == "geq"
                                            ? MicrolocalDirection::Outgoing
                                            : MicrolocalDirection::Incoming);
    if (p.name == "virial") return virial_check(traj);
    if (p.name == "exterior_decay")
        return exterior_decay_check(traj, p.arg("alpha", traj.model.alpha_exterior),
                                    p.arg("beta0", traj.model.beta0));
    if (p.name == "low_frequency") return low_frequency_series(traj, p.arg("beta", 0.5));
    if (p.name == "cook") return cook_integrand(traj, p.arg("alpha", 0.9));
    throw std::invalid_argument("unknown probe name '" + p.name + "'");
}

void write_conserved(const std::string& path, const Trajectory& traj) {
    std::ofstream os(path);
    os << "t,mass,energy,h1norm,absorbed\n";
    char buf[200];
    for (const auto& c : traj.conserved) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", c.t, c.mass, c.energy,
                      c.h1, c.absorbed);
        os << buf;
    }
}

}  // namespace

std::string resolve_output_dir(const ScenarioConfig& cfg, const std::string& output_root) {
    std::string root = output_root;
    if (root.empty()) {
        if (const char* env = std::getenv(kOutputRootEnv)) root = env;
    }
    if (root.empty()) return cfg.out_dir;
    return root + "/" + cfg.out_dir;
}

RunOutcome run_scenario(const ScenarioConfig& cfg, const std::string& output_root) {
    validate_probes(cfg);
    const RadialGrid grid = config_grid(cfg);
    const EquationModel model = config_model(cfg);

    std::map<std::string, double> metadata;
    WaveFunction u0 = config_initial_data(cfg, grid, model, metadata);

    EvolveOptions opts;
    opts.dt = cfg.dt;
    opts.observer_cadence = cfg.cadence;
    opts.use_absorber = cfg.absorber;
    opts.absorber_strength = cfg.absorber_strength;
    if (cfg.snapshots == "geometric") opts.snapshot_times = geometric_times(cfg.t1);
    else if (cfg.snapshots != "none")
        throw std::invalid_argument("config: snapshots must be 'none' or 'geometric'");

    RunOutcome outcome;
    outcome.directory = resolve_output_dir(cfg, output_root);
    fs::create_directories(outcome.directory);
    {
        std::ofstream manifest(outcome.directory + "/manifest.txt");
        manifest << "# scatlab " << kVersion << "\n" << serialize_config(cfg);
    }

    Trajectory traj = evolve(u0, cfg.t0, cfg.t1, opts, model);
    traj.metadata = metadata;

    write_conserved(outcome.directory + "/conserved.csv", traj);
    save_wavefunction(outcome.directory + "/initial.dat", u0);
    if (cfg.snapshots == "geometric")
        for (double ts : opts.snapshot_times) {
            const auto& f = traj.frame_at(ts);
            save_wavefunction(outcome.directory + "/" + snapshot_name(f.t), f.state);
        }
    save_wavefunction(outcome.directory + "/final.dat", traj.frames.back().state);

    std::ofstream verdicts(outcome.directory + "/verdicts.csv");
    verdicts << "probe,verdict,margin\n";
    for (const auto& p : cfg.probes) {
        EstimateReport rep = dispatch_probe(p, traj);
        std::ofstream rf(outcome.directory + "/probe_" + p.name + ".txt");
        rep.write(rf);
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s,%s,%.17g\n", rep.probe.c_str(),
                      to_string(rep.verdict).c_str(), rep.margin);
        verdicts << buf;
        outcome.verdicts.emplace_back(rep.probe, rep.verdict);
    }
    if (!traj.warnings.empty()) {
        std::ofstream wf(outcome.directory + "/warnings.txt");
        for (const auto& w : traj.warnings) wf << w << "\n";
    }
    const bool any_fail = std::any_of(outcome.verdicts.begin(), outcome.verdicts.end(),
                                      [](const auto& v) { return v.second == Verdict::Fail; });
    outcome.status = any_fail ? ExitStatus::VerdictFail : ExitStatus::Ok;
    return outcome;
}

RunOutcome decompose_run(const std::string& run_directory, double alpha) {
    if (!fs::exists(run_directory + "/manifest.txt"))
        throw std::invalid_argument("decompose: no manifest in " + run_directory);
    std::ifstream mf(run_directory + "/manifest.txt");
    std::string first;
    std::getline(mf, first);
    std::stringstream rest;
    rest << mf.rdbuf();
    ScenarioConfig cfg = parse_config(rest.str());
    if (cfg.snapshots != "geometric")
        throw std::invalid_argument("decompose: run directory lacks geometric snapshots");

    Trajectory traj;
    traj.model = config_model(cfg);
    std::vector<double> times;
    for (double ts : geometric_times(cfg.t1)) {
        // snapshots are named by their snapped times; search the directory
        bool found = false;
        for (const auto& e : fs::directory_iterator(run_directory)) {
            const std::string name = e.path().filename().string();
            double t = 0;
            if (std::sscanf(name.c_str(), "snapshot_t%lf.dat", &t) == 1 &&
                std::abs(t - ts) <= std::max(0.05 * ts, 2.0 * cfg.dt)) {
                traj.frames.push_back({t, load_wavefunction(e.path().string())});
                found = true;
                break;
            }
        }
        if (!found)
            throw std::invalid_argument("decompose: missing geometric snapshot near t = " +
                                        std::to_string(ts));
        times.push_back(traj.frames.back().t);
    }
    std::sort(traj.frames.begin(), traj.frames.end(),
              [](const auto& a, const auto& b) { return a.t < b.t; });

    std::vector<Eigenstate> states;
    const std::vector<Eigenstate>* states_ptr = nullptr;
    if (!traj.model.nonlinear() && traj.model.potential) {
        auto es = eigenstates_linear(traj.model.potential, 8, traj.frames.front().state.grid);
        states = std::move(es.states);
        if (!states.empty()) states_ptr = &states;
    }
    // reconstruct the t = 0 data for the bound coefficients
    if (fs::exists(run_directory + "/initial.dat"))
        traj.frames.insert(traj.frames.begin(), {cfg.t0, load_wavefunction(run_directory + "/initial.dat")});

    DecompositionResult res = asymptotic_decompose(traj, alpha, times, states_ptr);
    res.write(run_directory + "/decomposition");

    RunOutcome out;
    out.directory = run_directory;
    out.verdicts.emplace_back("asymptotic_decompose", res.verdict);
    out.status = res.verdict == Verdict::Fail ? ExitStatus::VerdictFail : ExitStatus::Ok;
    return out;
}

RunOutcome oracle_compare(const ScenarioConfig& cfg, const std::string& output_root) {
    const RadialGrid grid = config_grid(cfg);
    if (grid.modes() > kDenseDimensionCap)
        throw std::invalid_argument("oracle-compare: grid dimension exceeds the dense cap (512)");
    const EquationModel model = config_model(cfg);
    if (model.nonlinear() || model.time_dependent())
        throw std::invalid_argument("oracle-compare: dense propagation covers linear autonomous models");

    std::map<std::string, double> metadata;
    WaveFunction u0 = config_initial_data(cfg, grid, model, metadata);

    DenseOperator H = dense_hamiltonian(model.potential ? model.potential
                                                        : std::function<double(double)>([](double) { return 0.0; }),
                                        grid);
    SpectralData sd = diagonalize(H);
    const WaveFunction exact = exact_propagate(sd, u0, cfg.t1 - cfg.t0);

    auto endpoint_error = [&](double dt) {
        EvolveOptions opts;
        opts.dt = dt;
        opts.observer_cadence = cfg.t1 - cfg.t0;
        Trajectory traj = evolve(u0, cfg.t0, cfg.t1, opts, model);
        WaveFunction d = traj.frames.back().state;
        d.values -= exact.values;
        return d.norm();
    };
    const double e1 = endpoint_error(cfg.dt);
    const double e2 = endpoint_error(cfg.dt / 2.0);

    RunOutcome out;
    out.directory = resolve_output_dir(cfg, output_root);
    fs::create_directories(out.directory);
    std::ofstream os(out.directory + "/oracle_compare.txt");
    char buf[160];
    std::snprintf(buf, sizeof buf, "endpoint_error_dt %.17g\nendpoint_error_dt_half %.17g\nratio %.17g\n",
                  e1, e2, e2 > 0 ? e1 / e2 : 0.0);
    os << buf;
    const bool order2 = e2 > 0 && e1 / e2 > 3.0 && e1 / e2 < 5.0;
    os << "order2 " << (order2 ? "PASS" : "FAIL") << "\n";
    out.verdicts.emplace_back("oracle_order2", order2 ? Verdict::Pass : Verdict::Fail);
    out.status = order2 ? ExitStatus::Ok : ExitStatus::VerdictFail;
    return out;
}

}  // namespace scatlab
