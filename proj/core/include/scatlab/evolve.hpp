#pragma once

#include "scatlab/grid.hpp"
#include "scatlab/model.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace scatlab {

/// Side-effect-free scalar evaluator sampled along a run.
struct ObservableProbe {
    std::string name;
    double cadence = 0.0;  // 0 = every recorded frame
    std::function<double(double, const WaveFunction&)> evaluate;
};

struct EvolveOptions {
    double dt = 1e-3;
    double cfl_factor = 0.25;       // dt_max = cfl_factor * spacing^2
    bool enforce_dt_max = true;
    double observer_cadence = 0.5;  // frame recording interval
    std::vector<double> snapshot_times;  // extra frames, snapped to steps
    bool use_absorber = false;
    double absorber_strength = 1.0;  // peak damping rate of the outer 10% layer
    double mass_tolerance = 1e-8;    // drift alarm per unit time, net of absorption
};

struct TrajectoryFrame {
    double t = 0.0;
    WaveFunction state;
};

struct ConservedSample {
    double t = 0.0, mass = 0.0, energy = 0.0, h1 = 0.0, absorbed = 0.0;
};

struct Trajectory {
    EquationModel model;
    EvolveOptions opts;
    double t0 = 0.0, t1 = 0.0;
    std::vector<TrajectoryFrame> frames;
    std::vector<ConservedSample> conserved;
    std::map<std::string, std::vector<std::pair<double, double>>> observer_series;
    std::map<std::string, double> metadata;  // energy caps, window bounds, ...
    double absorbed_total = 0.0;
    std::vector<std::string> warnings;

    const TrajectoryFrame& frame_at(double t) const;  // nearest recorded frame
    std::vector<double> frame_times() const;
};

double dt_max(const EquationModel& model, const RadialGrid& grid, double cfl_factor = 0.25);

/// One Strang step: half kinetic phase (exact in the sine spectrum), full
/// interaction phase at the midpoint, half kinetic phase. Unitary up to the
/// interaction-phase quadrature; local error O(dt^3).
WaveFunction step(const WaveFunction& u, double t, double dt, const EquationModel& model);

Trajectory evolve(const WaveFunction& u0, double t0, double t1, const EvolveOptions& opts,
                  const EquationModel& model, const std::vector<ObservableProbe>& observers = {});

/// Exact free propagation e^{i Delta t} via sine-spectrum phases (t of
/// either sign; negative t is the backward free evolution e^{-i Delta |t|}).
WaveFunction free_evolve(const WaveFunction& u, double t);

/// <psi|-Delta|psi> + interaction energy; conserved for autonomous models.
double total_energy(const EquationModel& model, const WaveFunction& u, double t);

struct GroundStateOptions {
    double tau = 0.1;
    int max_iterations = 200000;
    double residual_tolerance = 1e-8;
};

/// Normalized imaginary-time gradient flow with mass re-projection.
/// Requires a trapping mechanism (Saturated model or an attractive
/// potential); throws when the flow fails to settle below the continuum.
WaveFunction ground_state(const EquationModel& model, double mass, const RadialGrid& grid,
                          const GroundStateOptions& opts = {});

/// Chemical potential / linear energy of a stationary profile.
double stationary_eigenvalue(const EquationModel& model, const WaveFunction& u);
double stationary_residual(const EquationModel& model, const WaveFunction& u);

struct Eigenstate {
    double energy = 0.0;
    WaveFunction state;
};

struct EigenstatesResult {
    std::vector<Eigenstate> states;  // ascending energy, h-orthonormal
    bool complete = true;            // found at least the requested count
};

/// Negative-energy bound states of H = -Delta_r + V by dense diagonalization
/// on a truncated copy of the grid (same spacing), embedded back by zero
/// extension. States are orthonormal in the grid inner product.
EigenstatesResult eigenstates_linear(const std::function<double(double)>& V, int count,
                                     const RadialGrid& grid, double r_cut = 0.0);

}  // namespace scatlab
