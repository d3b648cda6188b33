#include <doctest.h>

#include "scatlab/oracle.hpp"
#include "scatlab/scattering.hpp"

#include <cmath>

using namespace scatlab;

namespace {

WaveFunction packet(const RadialGrid& g, double r0, double w, double k = 0.0, double mass = 1.0) {
    WaveFunction u = WaveFunction::sample(g, [&](double r) {
        return r * std::exp(-(r - r0) * (r - r0) / (2.0 * w * w)) * std::exp(Complex(0.0, k * r));
    });
    u.values *= std::sqrt(mass) / u.norm();
    return u;
}

Trajectory exact_free_trajectory(const WaveFunction& u0, const std::vector<double>& times) {
    Trajectory traj;
    traj.model = make_free();
    traj.opts.dt = 1e-3;
    traj.t0 = times.front();
    traj.t1 = times.back();
    for (double t : times) traj.frames.push_back({t, free_evolve(u0, t)});
    return traj;
}

Trajectory dense_trajectory(const WaveFunction& u0, const SpectralData& sd,
                            const EquationModel& model, const std::vector<double>& times) {
    Trajectory traj;
    traj.model = model;
    traj.opts.dt = 1e-3;
    traj.t0 = times.front();
    traj.t1 = times.back();
    for (double t : times) traj.frames.push_back({t, exact_propagate(sd, u0, t)});
    return traj;
}

}  // namespace

TEST_SUITE("scattering") {

TEST_CASE("energy window: spectral fixed point, bound-state kill, bad window") {
    const RadialGrid g = make_grid(256, 32.0);
    const double k2 = std::pow(g.wavenumber(10), 2.0);
    WaveFunction mode = WaveFunction::sample(g, [&](double r) {
        return Complex(std::sin(g.wavenumber(10) * r), 0.0);
    });
    EnergyWindow win{0.25 * k2, 4.0 * k2, EnergyWindow::Method::DenseSpectral};
    WaveFunction out = energy_window(mode, win, {});
    out.values -= mode.values;
    CHECK(out.norm() < 1e-10 * mode.norm());

    auto V = [](double r) { return -3.0 * std::exp(-r); };
    auto es = eigenstates_linear(V, 1, g);
    EnergyWindow pos{0.1, 10.0, EnergyWindow::Method::DenseSpectral};
    CHECK(energy_window(es.states.front().state, pos, V).norm() < 1e-8);

    CHECK_THROWS_AS(energy_window(mode, EnergyWindow{2.0, 1.0}, {}), std::invalid_argument);
}

TEST_CASE("energy window: subgrid method matches the dense one and is idempotent") {
    const RadialGrid fine = make_grid(1024, 32.0);
    const RadialGrid coarse = make_grid(256, 32.0);
    WaveFunction u = packet(fine, 8.0, 2.0, 1.0);
    auto V = [](double r) { return -1.0 * std::exp(-r); };
    EnergyWindow sub{0.2, 4.0, EnergyWindow::Method::SubgridSpectral};
    WaveFunction wa = energy_window(u, sub, V);

    // the same data restricted to the coarse grid, windowed densely
    auto cf = sine_transform(u);
    SpectralCoefficients cc{coarse, cf.coef.head(coarse.modes())};
    WaveFunction uc = inverse_sine_transform(cc);
    EnergyWindow dense{0.2, 4.0, EnergyWindow::Method::DenseSpectral};
    WaveFunction wc = energy_window(uc, dense, V);
    auto ca = sine_transform(wa);
    auto cb = sine_transform(wc);
    for (int k = 0; k < coarse.modes(); ++k)
        CHECK(std::abs(ca.coef[k] - cb.coef[k]) < 1e-10);

    WaveFunction twice = energy_window(wa, sub, V);
    twice.values -= wa.values;
    CHECK(twice.norm() < 1e-8 * std::max(1.0, wa.norm()));
}

TEST_CASE("cook integrand: V = 0 has no potential piece; eigenstate collapses") {
    const RadialGrid g = make_grid(1024, 96.0);
    Trajectory traj = exact_free_trajectory(packet(g, 8.0, 2.0, 1.2),
                                            {1, 2, 4, 8, 12, 16, 20, 24, 28, 32});
    traj.metadata["window_eta"] = 0.1;
    const auto rep = cook_integrand(traj, 0.9);
    for (double v : rep.column("f1v_bound").values) CHECK(v == 0.0);

    auto V = [](double r) { return -3.0 * std::exp(-r); };
    const RadialGrid gb = make_grid(400, 48.0);
    auto H = dense_hamiltonian(V, gb);
    auto sd = diagonalize(H);
    auto es = eigenstates_linear(V, 1, gb);
    Trajectory btraj = dense_trajectory(es.states.front().state, sd, make_static_potential(V),
                                        {1, 2, 4, 8, 16, 32});
    btraj.metadata["window_eta"] = 0.1;
    const auto brep = cook_integrand(btraj, 0.9);
    const auto& flux = brep.column("flux_piece").values;
    const auto& fv = brep.column("f1v_applied").values;
    // the total integrand dies faster than any sampled power of t
    const double early = flux.front() + fv.front();
    const double late = flux.back() + fv.back();
    CHECK(late < 1e-6 * early);
    CHECK_THROWS_AS(cook_integrand(exact_free_trajectory(packet(g, 8, 2, 1), {1, 2, 4}), 0.9),
                    std::invalid_argument);
}

TEST_CASE("channel wave operator: free data converges to the initial state") {
    const RadialGrid g = make_grid(8192, 560.0);
    WaveFunction u0 = packet(g, 8.0, 2.5, 2.5);
    const std::vector<double> times = {12.5, 25.0, 50.0, 100.0};
    Trajectory traj = exact_free_trajectory(u0, times);
    auto wo = channel_wave_operator(traj, 0.8, times);
    WaveFunction diff = wo.phi_plus;
    diff.values -= u0.values;
    CHECK(diff.norm() < 1e-3);
    CHECK(wo.verdict == Verdict::Pass);
    for (size_t k = 1; k < wo.weak_limit_proxy.size(); ++k)
        CHECK(wo.weak_limit_proxy[k] <= wo.weak_limit_proxy[k - 1] * 1.2 + 1e-12);
}

TEST_CASE("channel wave operator: bound state maps to zero free data") {
    auto V = [](double r) { return -3.0 * std::exp(-r); };
    const RadialGrid g = make_grid(500, 64.0);
    auto H = dense_hamiltonian(V, g);
    auto sd = diagonalize(H);
    auto es = eigenstates_linear(V, 1, g);
    const std::vector<double> times = {12.5, 25.0, 50.0, 100.0};
    Trajectory traj = dense_trajectory(es.states.front().state, sd, make_static_potential(V), times);
    auto wo = channel_wave_operator(traj, 0.8, times);
    CHECK(wo.phi_plus.norm() < 1e-3);
}

TEST_CASE("bound projection: orthonormality, Bessel, stability under the flow") {
    auto V = [](double r) { return -50.0 * std::exp(-r * r); };
    const RadialGrid g = make_grid(400, 40.0);
    auto es = eigenstates_linear(V, 3, g);
    REQUIRE(es.states.size() >= 2);

    auto bp0 = bound_projection(es.states[0].state, es.states);
    CHECK(std::abs(bp0.coefficients[0] - 1.0) < 1e-10);
    for (size_t j = 1; j < bp0.coefficients.size(); ++j)
        CHECK(std::abs(bp0.coefficients[j]) < 1e-10);
    WaveFunction p = bp0.projected;
    p.values -= es.states[0].state.values;
    CHECK(p.norm() < 1e-10);

    WaveFunction far = packet(g, 25.0, 1.0, 2.0);
    for (const auto& b : es.states) far.values -= inner_product(far, b.state) * b.state.values;
    auto bpf = bound_projection(far, es.states);
    for (const auto& a : bpf.coefficients) CHECK(std::abs(a) < 1e-12);

    WaveFunction mix = packet(g, 6.0, 2.0, 0.5);
    auto bpm = bound_projection(mix, es.states);
    double bessel = 0.0;
    for (const auto& a : bpm.coefficients) bessel += std::norm(a);
    CHECK(bessel <= mix.mass() * (1.0 + 1e-12));

    // coefficients evolve by pure phases under the dense flow
    auto sd = diagonalize(dense_hamiltonian(V, g));
    for (double t : {3.0, 7.0}) {
        WaveFunction ut = exact_propagate(sd, mix, t);
        auto bpt = bound_projection(ut, es.states);
        for (size_t j = 0; j < bpt.coefficients.size(); ++j) {
            CHECK(std::abs(bpt.coefficients[j]) ==
                  doctest::Approx(std::abs(bpm.coefficients[j])).epsilon(1e-8));
            const Complex expected =
                bpm.coefficients[j] * std::exp(Complex(0.0, -es.states[j].energy * t));
            CHECK(std::abs(bpt.coefficients[j] - expected) < 1e-8);
        }
    }
}

TEST_CASE("asymptotic decomposition: free data leaves no weakly localized part") {
    const RadialGrid g = make_grid(8192, 560.0);
    WaveFunction u0 = packet(g, 8.0, 2.5, 2.5);
    const std::vector<double> times = {12.5, 25.0, 50.0, 100.0};
    Trajectory traj = exact_free_trajectory(u0, times);
    auto dec = asymptotic_decompose(traj, 0.8, times);
    CHECK(std::sqrt(dec.mass_wb) < 1e-3);
    CHECK(std::abs(dec.cross_term) < 1e-2);
    CHECK(dec.localization_norm < 1e-3);
}

TEST_CASE("asymptotic decomposition: linear well reconstructs the bound cluster") {
    auto V = [](double r) { return -3.0 * std::exp(-r); };
    const RadialGrid g = make_grid(500, 64.0);
    auto sd = diagonalize(dense_hamiltonian(V, g));
    auto es = eigenstates_linear(V, 2, g);
    auto model = make_static_potential(V);

    WaveFunction pk = packet(g, 10.0, 2.0, 1.2);
    for (const auto& b : es.states) pk.values -= inner_product(pk, b.state) * b.state.values;
    pk.values /= pk.norm();
    WaveFunction mix = WaveFunction::zero(g);
    mix.values = 0.6 * es.states.front().state.values + 0.8 * pk.values;

    const std::vector<double> times = {12.5, 25.0, 50.0, 100.0};
    Trajectory traj = dense_trajectory(mix, sd, model, times);
    traj.frames.insert(traj.frames.begin(), {0.0, mix});
    auto dec = asymptotic_decompose(traj, 0.8, times, &es.states);
    CHECK(dec.ac_residual >= 0.0);
    CHECK(dec.ac_residual < 5e-2);
    CHECK(std::sqrt(dec.mass_wb) ==
          doctest::Approx(0.6).epsilon(0.05));  // the weakly localized part is the bound cluster
}

TEST_CASE("asymptotic decomposition: soliton plus radiation keeps the soliton mass") {
    const RadialGrid g = make_grid(512, 64.0);
    auto model = make_saturated(3.0, 2.0);
    WaveFunction sol = ground_state(model, 40.0, g);
    WaveFunction rad = packet(g, 14.0, 2.0, 1.5, 4.0);
    WaveFunction u0 = sol;
    u0.values += rad.values;

    EvolveOptions opts;
    opts.dt = 2e-3;
    opts.observer_cadence = 5.0;
    opts.use_absorber = true;
    opts.snapshot_times = {12.5, 25.0, 50.0, 100.0};
    Trajectory traj = evolve(u0, 0.0, 100.0, opts, model);
    auto dec = asymptotic_decompose(traj, 0.8, opts.snapshot_times);
    CHECK(dec.mass_wb == doctest::Approx(sol.mass()).epsilon(0.05));
}

TEST_CASE("wls exclusion: ballistic windowed data passes, contaminated data fails") {
    auto V = [](double r) { return -3.0 * std::exp(-r); };
    const RadialGrid g = make_grid(1024, 192.0);
    auto model = make_static_potential(V);
    auto es = eigenstates_linear(V, 1, g);

    // weighted-localized approximant: <x>^{-2} then the energy window
    WaveFunction seed = packet(g, 6.0, 2.0, 1.0);
    WaveFunction weighted = apply_profile(seed, [](double r) { return 1.0 / (1.0 + r * r); });
    EnergyWindow win{0.2, 6.0, EnergyWindow::Method::SubgridSpectral};
    WaveFunction clean = energy_window(weighted, win, V);
    clean.values /= clean.norm();

    EvolveOptions opts;
    opts.dt = 0.25 * g.spacing * g.spacing;
    opts.observer_cadence = 1.0;
    Trajectory tc = evolve(clean, 0.0, 40.0, opts, model);
    tc.metadata["window_eta"] = win.eta;
    const auto good = wls_exclusion_check(tc);
    CHECK(good.verdict == Verdict::Pass);

    WaveFunction dirty = WaveFunction::zero(g);
    dirty.values = 0.85 * es.states.front().state.values + 0.5 * clean.values;
    Trajectory td = evolve(dirty, 0.0, 40.0, opts, model);
    td.metadata["window_eta"] = win.eta;
    const auto bad = wls_exclusion_check(td);
    CHECK(bad.verdict == Verdict::Fail);

    // removing the bound projection restores the ballistic verdict
    WaveFunction fixed = dirty;
    for (const auto& b : es.states) fixed.values -= inner_product(fixed, b.state) * b.state.values;
    Trajectory tf = evolve(fixed, 0.0, 40.0, opts, model);
    tf.metadata["window_eta"] = win.eta;
    CHECK(wls_exclusion_check(tf).verdict == Verdict::Pass);
}

}  // TEST_SUITE
