#include "scatlab/evolve.hpp"

#include "scatlab/cutoff.hpp"
#include "scatlab/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scatlab {

const TrajectoryFrame& Trajectory::frame_at(double t) const {
    if (frames.empty()) throw std::runtime_error("Trajectory::frame_at: no frames");
    const TrajectoryFrame* best = &frames.front();
    for (const auto& f : frames)
        if (std::abs(f.t - t) < std::abs(best->t - t)) best = &f;
    return *best;
}

std::vector<double> Trajectory::frame_times() const {
    std::vector<double> ts;
    ts.reserve(frames.size());
    for (const auto& f : frames) ts.push_back(f.t);
    return ts;
}

double dt_max(const EquationModel&, const RadialGrid& grid, double cfl_factor) {
    return cfl_factor * grid.spacing * grid.spacing;
}

namespace {

void kinetic_phase(WaveFunction& u, double dt) {
    auto c = sine_transform(u);
    for (int k = 0; k < c.coef.size(); ++k) {
        const double kk = c.grid.wavenumber(k);
        c.coef[k] *= std::exp(Complex(0.0, -kk * kk * dt));
    }
    u = inverse_sine_transform(c);
}

void interaction_phase(WaveFunction& u, double t_mid, double dt, const EquationModel& model) {
    for (int i = 0; i < u.size(); ++i) {
        const double r = u.grid.node(i);
        const double a = std::abs(u.values[i]) / r;
        const double w = interaction_multiplier(model, r, t_mid, a);
        u.values[i] *= std::exp(Complex(0.0, -w * dt));
    }
}

RVector absorber_profile(const RadialGrid& g, double strength) {
    // smooth ramp over the outer 10% of the domain
    RVector w(g.n_points);
    const double edge = 0.9 * g.r_max, width = 0.1 * g.r_max;
    for (int i = 0; i < g.n_points; ++i)
        w[i] = strength * smooth_step::value((g.node(i) - edge) / width);
    return w;
}

void check_finite(const WaveFunction& u, double t) {
    if (!u.values.allFinite())
        throw std::runtime_error("evolve: non-finite amplitudes at t = " + std::to_string(t));
}

}  // namespace

WaveFunction step(const WaveFunction& u, double t, double dt, const EquationModel& model) {
    if (dt > dt_max(model, u.grid) * (1.0 + 1e-9))
        throw std::invalid_argument("step: dt exceeds dt_max for this grid");
    WaveFunction v = u;
    kinetic_phase(v, 0.5 * dt);
    interaction_phase(v, t + 0.5 * dt, dt, model);
    kinetic_phase(v, 0.5 * dt);
    check_finite(v, t + dt);
    return v;
}

Trajectory evolve(const WaveFunction& u0, double t0, double t1, const EvolveOptions& opts,
                  const EquationModel& model, const std::vector<ObservableProbe>& observers) {
    if (!(t1 > t0)) throw std::invalid_argument("evolve: t1 must exceed t0");
    const double dt = opts.dt;
    if (opts.enforce_dt_max && dt > dt_max(model, u0.grid, opts.cfl_factor) * (1.0 + 1e-9))
        throw std::invalid_argument("evolve: dt exceeds dt_max(model, grid)");

    const long n_steps = std::lround((t1 - t0) / dt);
    const long cadence_steps =
        std::max<long>(1, std::lround(opts.observer_cadence / dt));

    std::vector<long> extra_steps;
    for (double ts : opts.snapshot_times)
        extra_steps.push_back(std::clamp<long>(std::lround((ts - t0) / dt), 0, n_steps));
    std::sort(extra_steps.begin(), extra_steps.end());
    extra_steps.erase(std::unique(extra_steps.begin(), extra_steps.end()), extra_steps.end());

    Trajectory traj;
    traj.model = model;
    traj.opts = opts;
    traj.t0 = t0;
    traj.t1 = t0 + n_steps * dt;

    const RVector absorb = opts.use_absorber ? absorber_profile(u0.grid, opts.absorber_strength)
                                             : RVector();
    const double initial_mass = u0.mass();
    double absorbed = 0.0;
    bool resolution_warned = false;

    WaveFunction u = u0;
    auto record = [&](long k, const WaveFunction& state) {
        const double t = t0 + k * dt;
        traj.frames.push_back({t, state});
        ConservedSample cs;
        cs.t = t;
        cs.mass = state.mass();
        cs.energy = total_energy(model, state, t);
        cs.h1 = h1_norm(state);
        cs.absorbed = absorbed;
        traj.conserved.push_back(cs);
        for (const auto& ob : observers) {
            const long ob_steps = ob.cadence > 0 ? std::max<long>(1, std::lround(ob.cadence / dt))
                                                 : cadence_steps;
            if (k % ob_steps == 0 || k == n_steps) {
                double val = std::numeric_limits<double>::quiet_NaN();
                try {
                    val = ob.evaluate(t, state);
                } catch (const std::exception& e) {
                    traj.warnings.push_back("observer " + ob.name + " failed at t=" +
                                            std::to_string(t) + ": " + e.what());
                }
                traj.observer_series[ob.name].emplace_back(t, val);
            }
        }
        if (!resolution_warned && !is_resolved(state)) {
            traj.warnings.push_back("under-resolved state at t = " + std::to_string(t));
            resolution_warned = true;
        }
        // mass bookkeeping net of absorption
        const double drift = std::abs(cs.mass + absorbed - initial_mass);
        if (t > t0 && drift > opts.mass_tolerance * std::max(1.0, t - t0) * initial_mass)
            traj.warnings.push_back("mass drift " + std::to_string(drift) + " at t = " +
                                    std::to_string(t));
    };

    record(0, u);
    auto next_extra = extra_steps.begin();
    while (next_extra != extra_steps.end() && *next_extra == 0) ++next_extra;

    // fused Strang loop: the trailing and leading kinetic half steps between
    // recordings merge into whole steps
    kinetic_phase(u, 0.5 * dt);
    for (long k = 1; k <= n_steps; ++k) {
        const double t_mid = t0 + (k - 0.5) * dt;
        interaction_phase(u, t_mid, dt, model);
        if (opts.use_absorber) {
            const double before = u.values.squaredNorm() * u.grid.spacing;
            for (int i = 0; i < u.size(); ++i) u.values[i] *= std::exp(-dt * absorb[i]);
            absorbed += before - u.values.squaredNorm() * u.grid.spacing;
        }
        const bool want_record = (k % cadence_steps == 0) || k == n_steps ||
                                 (next_extra != extra_steps.end() && *next_extra == k);
        if (want_record) {
            kinetic_phase(u, 0.5 * dt);
            check_finite(u, t0 + k * dt);
            record(k, u);
            while (next_extra != extra_steps.end() && *next_extra <= k) ++next_extra;
            if (k < n_steps) kinetic_phase(u, 0.5 * dt);
        } else {
            kinetic_phase(u, dt);
        }
    }
    traj.absorbed_total = absorbed;
    return traj;
}

WaveFunction free_evolve(const WaveFunction& u, double t) {
    return apply_sine_multiplier(u, [t](double k) { return std::exp(Complex(0.0, -k * k * t)); });
}

double total_energy(const EquationModel& model, const WaveFunction& u, double t) {
    const WaveFunction lap = laplacian_radial(u);
    double e = expectation(lap, u).real();
    for (int i = 0; i < u.size(); ++i) {
        const double r = u.grid.node(i);
        const double a = std::abs(u.values[i]) / r;
        if (a == 0.0 && model.kind != ModelKind::StaticPotential &&
            model.kind != ModelKind::TimeDependentPotential)
            continue;
        e += interaction_energy_density(model, r, t, a) * r * r * u.grid.spacing;
    }
    return e;
}

double stationary_eigenvalue(const EquationModel& model, const WaveFunction& u) {
    WaveFunction hu = laplacian_radial(u);
    hu.values += nonlinearity_eval(model, u, 0.0).values;
    return expectation(hu, u).real() / u.mass();
}

double stationary_residual(const EquationModel& model, const WaveFunction& u) {
    WaveFunction hu = laplacian_radial(u);
    hu.values += nonlinearity_eval(model, u, 0.0).values;
    const double mu = expectation(hu, u).real() / u.mass();
    hu.values -= mu * u.values;
    return hu.norm() / u.norm();
}

WaveFunction ground_state(const EquationModel& model, double mass, const RadialGrid& grid,
                          const GroundStateOptions& opts) {
    if (!(mass > 0.0)) throw std::invalid_argument("ground_state: mass must be positive");
    if (model.kind == ModelKind::Free)
        throw std::invalid_argument("ground_state: the free model has no trapping mechanism");
    if (model.time_dependent())
        throw std::invalid_argument("ground_state: model must be autonomous");

    WaveFunction u = WaveFunction::sample(
        grid, [](double r) { return Complex(r * std::exp(-r * r / 8.0), 0.0); });
    u.values *= std::sqrt(mass) / u.norm();

    const double tau = opts.tau;
    for (int it = 0; it < opts.max_iterations; ++it) {
        auto c = sine_transform(u);
        for (int k = 0; k < c.coef.size(); ++k) {
            const double kk = grid.wavenumber(k);
            c.coef[k] *= std::exp(-kk * kk * tau);
        }
        u = inverse_sine_transform(c);
        for (int i = 0; i < u.size(); ++i) {
            const double r = grid.node(i);
            const double a = std::abs(u.values[i]) / r;
            u.values[i] *= std::exp(-tau * interaction_multiplier(model, r, 0.0, a));
        }
        u.values *= std::sqrt(mass) / u.norm();
        if (it % 32 == 31 && stationary_residual(model, u) < opts.residual_tolerance) break;
    }
    if (stationary_residual(model, u) >= opts.residual_tolerance)
        throw std::runtime_error("ground_state: imaginary-time flow did not converge");
    const double mu = stationary_eigenvalue(model, u);
    const double continuum_floor = grid.wavenumber(0) * grid.wavenumber(0);
    if (mu > -continuum_floor)
        throw std::runtime_error("ground_state: no state below the continuum (mu = " +
                                 std::to_string(mu) + ")");
    return u;
}

EigenstatesResult eigenstates_linear(const std::function<double(double)>& V, int count,
                                     const RadialGrid& grid, double r_cut) {
    if (!V) throw std::invalid_argument("eigenstates_linear: missing potential");
    if (r_cut <= 0.0) r_cut = std::min(grid.r_max, 72.0);

    RadialGrid sub = grid;
    int n_sub = grid.n_points;
    if (grid.r_max > r_cut) {
        n_sub = static_cast<int>(std::floor(r_cut / grid.spacing + 0.5));
        sub = RadialGrid{n_sub, n_sub * grid.spacing, grid.spacing};
    }
    if (sub.modes() > 3000)
        throw std::invalid_argument("eigenstates_linear: truncated grid still too large to diagonalize");

    const int m = sub.modes();
    Eigen::MatrixXd H = dense_laplacian_matrix(sub);
    for (int j = 0; j < m; ++j) H(j, j) += V(sub.node(j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigenstates_linear: eigensolver failed");

    EigenstatesResult out;
    const double inv_sqrt_h = 1.0 / std::sqrt(grid.spacing);
    for (int j = 0; j < m; ++j) {
        const double E = es.eigenvalues()[j];
        if (E >= -1e-10) break;
        CVector full = CVector::Zero(grid.n_points);
        for (int i = 0; i < m; ++i) full[i] = es.eigenvectors()(i, j) * inv_sqrt_h;
        WaveFunction psi(grid, std::move(full));
        // fix the overall sign for reproducibility: positive slope at the origin
        if (psi.values[0].real() < 0) psi.values = -psi.values;
        out.states.push_back({E, std::move(psi)});
        if (static_cast<int>(out.states.size()) == count) break;
    }
    out.complete = static_cast<int>(out.states.size()) >= count;
    return out;
}

}  // namespace scatlab
