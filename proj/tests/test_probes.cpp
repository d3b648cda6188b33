#include <doctest.h>

#include "scatlab/probes.hpp"
#include "scatlab/oracle.hpp"

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

Trajectory run(const WaveFunction& u0, double t1, double dt, double cadence,
               const EquationModel& model, bool absorber = false) {
    EvolveOptions opts;
    opts.dt = dt;
    opts.observer_cadence = cadence;
    opts.use_absorber = absorber;
    return evolve(u0, 0.0, t1, opts, model);
}

// exact free trajectory without time stepping
Trajectory exact_free_trajectory(const WaveFunction& u0, const std::vector<double>& times) {
    Trajectory traj;
    traj.model = make_free();
    traj.opts.dt = 1e-3;
    traj.t0 = times.front();
    traj.t1 = times.back();
    for (double t : times) traj.frames.push_back({t, free_evolve(u0, t)});
    return traj;
}

Trajectory eigenstate_trajectory(const Eigenstate& es, const EquationModel& model,
                                 const std::vector<double>& times) {
    Trajectory traj;
    traj.model = model;
    traj.opts.dt = 1e-3;
    traj.t0 = times.front();
    traj.t1 = times.back();
    for (double t : times) {
        WaveFunction w = es.state;
        w.values *= std::exp(Complex(0.0, -es.energy * t));
        traj.frames.push_back({t, w});
    }
    return traj;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
    return out;
}

}  // namespace

TEST_SUITE("probes") {

TEST_CASE("heisenberg: kinetic energy of the free flow is flat") {
    const RadialGrid g = make_grid(256, 24.0);
    Trajectory traj = run(packet(g, 8.0, 1.5, 0.8), 2.0, 1e-3, 0.05, make_free());
    const auto rep = heisenberg_identity_check(traj, op_neg_laplacian());
    CHECK(rep.scalars.at("residual_max") < 1e-10);
}

TEST_CASE("heisenberg: free x^2 reproduces 4<A> and scales as dt^2") {
    const RadialGrid g = make_grid(512, 48.0);
    WaveFunction u0 = packet(g, 8.0, 1.5, 0.8);
    Trajectory traj = run(u0, 2.0, 2e-3, 0.05, make_free());
    const auto rep = heisenberg_identity_check(traj, op_position_squared());
    // rhs equals 4<A> frame by frame
    const auto& rhs = rep.column("rhs");
    for (size_t i = 0; i < traj.frames.size(); i += 10) {
        const auto& f = traj.frames[i];
        const double a4 = 4.0 * expectation(dilation_apply(f.state), f.state).real();
        CHECK(rhs.values[i] == doctest::Approx(a4).epsilon(1e-8));
    }
    Trajectory traj2 = run(u0, 2.0, 1e-3, 0.025, make_free());
    const auto rep2 = heisenberg_identity_check(traj2, op_position_squared());
    const double ratio = rep.scalars.at("residual_max") / rep2.scalars.at("residual_max");
    CHECK(ratio > 3.6);
    CHECK(ratio < 4.4);
}

TEST_CASE("heisenberg: saturated model needs its interaction term") {
    const RadialGrid g = make_grid(256, 24.0);
    auto model = make_saturated(3.0, 2.0);
    WaveFunction u0 = packet(g, 6.0, 1.2, 0.5, 4.0);
    Trajectory traj = run(u0, 1.5, 1e-3, 0.05, model);
    const auto with_term = heisenberg_identity_check(traj, op_cutoff_fixed(cutoff_geq(1.0, 0.1), 6.0));

    Trajectory crippled = traj;
    crippled.model = make_free();  // drops the -2 Im(A psi, N(psi)) contribution
    const auto without = heisenberg_identity_check(crippled, op_cutoff_fixed(cutoff_geq(1.0, 0.1), 6.0));
    CHECK(without.scalars.at("residual_max") > 50.0 * with_term.scalars.at("residual_max"));
}

TEST_CASE("prob_gamma: outgoing packet rises to a plateau; eigenstate stays at zero") {
    const RadialGrid g = make_grid(1024, 96.0);
    Trajectory traj = run(packet(g, 8.0, 2.0, 1.5), 20.0, 2e-3, 0.5, make_free());
    const auto rep = prob_gamma_series(traj, 0.7);
    const auto& vals = rep.column("half_F1gamma_sym").values;
    CHECK(vals.front() < 0.2 * vals.back());          // rises
    CHECK(rep.scalars.at("monotonicity_defect") < 0.02 * vals.back());
    const double last = vals.back();
    const double mid = vals[vals.size() * 3 / 4];
    CHECK(last == doctest::Approx(mid).epsilon(0.05));  // plateaus
    CHECK(rep.scalars.at("angular_term") == 0.0);

    auto V = [](double r) { return -3.0 * std::exp(-r); };
    auto es = eigenstates_linear(V, 1, make_grid(256, 32.0));
    Trajectory btraj = eigenstate_trajectory(es.states.front(), make_static_potential(V),
                                             linspace(0.0, 20.0, 41));
    const auto brep = prob_gamma_series(btraj, 0.7);
    for (double v : brep.column("half_F1gamma_sym").values) CHECK(std::abs(v) < 1e-10);

    CHECK(prob_gamma_series(traj, 0.7).column("half_F1gamma_sym").values.front() ==
          doctest::Approx(0.0).epsilon(1e-10));  // real initial data
    CHECK_THROWS_AS(prob_gamma_series(traj, 0.2), std::invalid_argument);
}

TEST_CASE("pres1: windowed packet converges, eigenstate decays, zero data trivial") {
    const RadialGrid g = make_grid(1024, 96.0);
    Trajectory traj = run(packet(g, 8.0, 2.0, 1.2), 32.0, 2e-3, 0.5, make_free());
    traj.metadata["window_eta"] = 0.1;
    const auto rep = pres1_integral(traj, 0.7, 0.1);
    CHECK(rep.scalars.at("increment_ratio") < 0.5);
    CHECK(rep.scalars.at("integral") > 0.0);
    CHECK(rep.scalars.at("constant_C") < 50.0);

    auto V = [](double r) { return -3.0 * std::exp(-r); };
    auto es = eigenstates_linear(V, 1, make_grid(256, 32.0));
    Trajectory btraj = eigenstate_trajectory(es.states.front(), make_static_potential(V),
                                             linspace(0.0, 32.0, 65));
    btraj.metadata["window_eta"] = 0.1;
    const auto brep = pres1_integral(btraj, 0.7, 0.1);
    const auto& bi = brep.column("integrand").values;
    CHECK(bi.back() < 1e-2 * bi.front());

    Trajectory ztraj = exact_free_trajectory(WaveFunction::zero(g), linspace(0.0, 8.0, 17));
    ztraj.metadata["window_eta"] = 0.1;
    CHECK(pres1_integral(ztraj, 0.7, 0.1).scalars.at("integral") == 0.0);

    Trajectory no_meta = run(packet(g, 8.0, 2.0, 1.2), 4.0, 2e-3, 1.0, make_free());
    CHECK_THROWS_AS(pres1_integral(no_meta, 0.7, 0.1), std::invalid_argument);
}

TEST_CASE("gamma_limit: free packet positive, eigenstate and mixture classified") {
    const RadialGrid g = make_grid(2048, 160.0);
    WaveFunction u0 = packet(g, 6.0, 2.0, 1.5);
    Trajectory traj = run(u0, 24.0, 3e-3, 0.5, make_free());
    const auto rep = gamma_limit(traj, {0.5, 0.7});
    CHECK(rep.scalars.at("is_free_wave") == 1.0);
    CHECK(rep.scalars.at("gamma") > 0.5);
    CHECK(rep.verdict == Verdict::Pass);

    auto V = [](double r) { return -3.0 * std::exp(-r); };
    const RadialGrid gb = make_grid(256, 32.0);
    auto es = eigenstates_linear(V, 1, gb);
    Trajectory btraj = eigenstate_trajectory(es.states.front(), make_static_potential(V),
                                             linspace(0.0, 24.0, 49));
    const auto brep = gamma_limit(btraj, {0.5, 0.7});
    CHECK(brep.scalars.at("is_wls") == 1.0);
}

TEST_CASE("gamma_limit on a mixture tracks the free component") {
    // linear superposition of a bound state and an escaping packet
    auto V = [](double r) { return -3.0 * std::exp(-r); };
    auto model = make_static_potential(V);
    const RadialGrid g = make_grid(2048, 160.0);
    auto es = eigenstates_linear(V, 1, g);
    WaveFunction pk = packet(g, 10.0, 2.0, 1.5);
    for (const auto& b : es.states) pk.values -= inner_product(pk, b.state) * b.state.values;
    pk.values /= pk.norm();

    WaveFunction mix = WaveFunction::zero(g);
    mix.values = 0.6 * es.states.front().state.values + 0.8 * pk.values;
    Trajectory tmix = run(mix, 24.0, 3e-3, 0.5, model);
    Trajectory tfree = run(pk, 24.0, 3e-3, 0.5, model);
    const double g_mix = gamma_limit(tmix, {0.7}).scalars.at("gamma");
    const double g_free = gamma_limit(tfree, {0.7}).scalars.at("gamma");
    CHECK(g_mix == doctest::Approx(0.64 * g_free).epsilon(0.05));  // weight^2 of the free part
}

TEST_CASE("weak localization: eigenstate passes, free packet fails") {
    auto V = [](double r) { return -3.0 * std::exp(-r); };
    const RadialGrid gb = make_grid(256, 32.0);
    auto es = eigenstates_linear(V, 1, gb);
    Trajectory btraj = eigenstate_trajectory(es.states.front(), make_static_potential(V),
                                             linspace(0.0, 50.0, 101));
    const auto brep = weak_localization_diag(btraj);
    CHECK(brep.verdict == Verdict::Pass);

    const RadialGrid g = make_grid(1024, 128.0);
    Trajectory ftraj = exact_free_trajectory(packet(g, 6.0, 1.5, 1.5), linspace(0.0, 30.0, 61));
    const auto frep = weak_localization_diag(ftraj);
    CHECK(frep.verdict == Verdict::Fail);
}

TEST_CASE("scaling derivative norms: dense oracle, scale-invariant tail, zero") {
    const RadialGrid g = make_grid(384, 30.0);
    WaveFunction u = packet(g, 8.0, 1.5, 1.0);
    const auto norms = scaling_derivative_norms(u, 1);
    Eigen::MatrixXd D = dense_derivative_matrix(g);
    Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(g.modes(), g.modes());
    for (int i = 0; i < g.modes(); ++i)
        for (int j = 0; j < g.modes(); ++j)
            W(i, j) = g.node(i) * D(i, j) - (i == j ? 1.0 : 0.0);
    const double dense_norm = (W * restrict_interior(u)).norm() * std::sqrt(g.spacing);
    CHECK(norms[0] == doctest::Approx(dense_norm).epsilon(1e-8));

    // u ~ r^{1/2} (psi ~ r^{-1/2}): the scaling direction is nearly null
    WaveFunction tail = WaveFunction::sample(g, [&](double r) {
        const double window = smooth_step::value((r - 2.0) / 2.0) *
                              smooth_step::value((24.0 - r) / 2.0);
        return Complex(std::sqrt(r) * window, 0.0);
    });
    const auto tn = scaling_derivative_norms(tail, 1);
    CHECK(tn[0] < 0.8 * tail.norm());

    const auto zn = scaling_derivative_norms(WaveFunction::zero(g), 3);
    for (double v : zn) CHECK(v == 0.0);
}

TEST_CASE("maximal velocity: capped data decays, eigenstate trivial, slow cap fails") {
    const RadialGrid g = make_grid(1024, 128.0);
    WaveFunction u0 = packet(g, 6.0, 1.5, 0.6);
    Trajectory traj = exact_free_trajectory(u0, linspace(0.5, 12.0, 47));
    traj.metadata["energy_cap"] = 2.0;
    const auto rep = maximal_velocity_diag(traj, 5.0, 2.0);
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.scalars.at("final") < 1e-3);

    auto V = [](double r) { return -3.0 * std::exp(-r); };
    const RadialGrid gb = make_grid(256, 32.0);
    auto es = eigenstates_linear(V, 1, gb);
    Trajectory btraj = eigenstate_trajectory(es.states.front(), make_static_potential(V),
                                             linspace(0.5, 12.0, 24));
    btraj.metadata["energy_cap"] = 2.0;
    const auto brep = maximal_velocity_diag(btraj, 5.0, 2.0);
    CHECK(brep.verdict == Verdict::Pass);
    CHECK(brep.scalars.at("peak") < 1e-6);

    // a packet faster than the declared cap is caught
    WaveFunction fast = packet(g, 6.0, 1.5, 6.0);
    Trajectory ftraj = exact_free_trajectory(fast, linspace(0.5, 12.0, 47));
    ftraj.metadata["energy_cap"] = 0.25;
    const auto frep = maximal_velocity_diag(ftraj, 1.0, 0.25);
    CHECK(frep.verdict == Verdict::Fail);

    CHECK_THROWS_AS(maximal_velocity_diag(ftraj, 0.5, 0.25), std::invalid_argument);  // M^2 < 4E
}

TEST_CASE("morawetz: eigenstate A-norm is time independent; free packet grows") {
    auto V = [](double r) { return -3.0 * std::exp(-r); };
    const RadialGrid gb = make_grid(256, 48.0);
    auto es = eigenstates_linear(V, 1, gb);
    auto model = make_static_potential(V);
    Trajectory btraj = eigenstate_trajectory(es.states.front(), model, linspace(1.0, 64.0, 127));
    const auto rep = morawetz_scan(btraj, {1.5, 3.0});
    const auto& an = rep.column("a_norm").values;
    for (double v : an) CHECK(v == doctest::Approx(an.front()).epsilon(1e-8));

    const RadialGrid g = make_grid(1024, 192.0);
    Trajectory f1 = exact_free_trajectory(packet(g, 6.0, 1.5, 1.0), linspace(1.0, 40.0, 79));
    Trajectory f2 = exact_free_trajectory(packet(g, 6.0, 1.5, 1.0), linspace(1.0, 80.0, 159));
    const double p1 = morawetz_scan(f1, {1.5, 3.0}).scalars.at("a_norm_mean");
    const double p2 = morawetz_scan(f2, {1.5, 3.0}).scalars.at("a_norm_mean");
    CHECK(p2 > 1.5 * p1);  // ballistic growth: correctly not a WLS

    CHECK_THROWS_AS(morawetz_scan(f1, {20.0}), std::invalid_argument);  // sqrt(T) < 4 M_min
}

TEST_CASE("ap_plus: envelope scalar, eigenstate average at the floor, packet grows") {
    auto V = [](double r) { return -3.0 * std::exp(-r); };
    const RadialGrid gb = make_grid(512, 48.0);
    auto es = eigenstates_linear(V, 1, gb);
    auto model = make_static_potential(V);

    std::vector<double> avgs;
    for (double T : {16.0, 32.0, 64.0}) {
        Trajectory traj = eigenstate_trajectory(es.states.front(), model, linspace(0.0, T, 33));
        const auto rep = ap_plus_series(traj, 16.0, 0.0);
        CHECK(rep.scalars.at("sech_envelope_ok") == 1.0);
        avgs.push_back(rep.scalars.at("time_avg_pplus"));
    }
    for (double a : avgs) CHECK(a < 1e-2);                  // at the exponential floor
    CHECK(avgs[2] <= avgs[0] * 1.05 + 1e-12);               // no growth across T, 2T, 4T

    const RadialGrid g = make_grid(1024, 128.0);
    Trajectory ftraj = exact_free_trajectory(packet(g, 8.0, 2.0, 1.5), linspace(0.0, 16.0, 33));
    const auto frep = ap_plus_series(ftraj, 4.0, 1.5);
    const auto& b = frep.column("ap_plus").values;
    CHECK(b.back() > b.front());  // <p P+ p> positivity dominates

    CHECK_THROWS_AS(ap_plus_series(ftraj, 2.0, 0.0), std::invalid_argument);  // M < 4
}

TEST_CASE("second microlocalization: outgoing plateau, eigenstate vanishes, beta gate") {
    const RadialGrid g = make_grid(1024, 128.0);
    WaveFunction u0 = packet(g, 6.0, 2.0, 1.5);
    Trajectory traj = exact_free_trajectory(u0, linspace(1.0, 30.0, 59));
    const auto rep = second_microlocal_series(traj, 0.9, 0.2, MicrolocalDirection::Outgoing);
    const auto& vals = rep.column("sandwich").values;
    const double tail = vals.back();
    CHECK(tail > 0.6 * u0.mass());
    CHECK(tail == doctest::Approx(vals[vals.size() - 5]).epsilon(0.05));

    auto V = [](double r) { return -3.0 * std::exp(-r); };
    const RadialGrid gb = make_grid(256, 32.0);
    auto es = eigenstates_linear(V, 1, gb);
    Trajectory btraj = eigenstate_trajectory(es.states.front(), make_static_potential(V),
                                             linspace(1.0, 30.0, 59));
    const auto brep = second_microlocal_series(btraj, 0.9, 0.2, MicrolocalDirection::Outgoing);
    CHECK(std::abs(brep.column("sandwich").values.back()) < 1e-3);

    CHECK_THROWS_AS(second_microlocal_series(traj, 0.5, 0.5, MicrolocalDirection::Outgoing),
                    std::invalid_argument);
}

TEST_CASE("virial: stationary state balances, free curvature from the dense oracle") {
    auto V = [](double r) { return -3.0 * std::exp(-r); };
    const RadialGrid gb = make_grid(256, 32.0);
    auto es = eigenstates_linear(V, 1, gb);
    Trajectory btraj = eigenstate_trajectory(es.states.front(), make_static_potential(V),
                                             linspace(0.0, 4.0, 41));
    const auto brep = virial_check(btraj);
    CHECK(brep.scalars.at("residual_max") < 1e-4);
    // virial balance: 8<-Delta> = 4<r V'> for the eigenstate
    CHECK(std::abs(brep.column("rhs").values.front()) < 1e-4);

    // free gaussian: second difference equals 8<-Delta> exactly along the
    // dense-free (spectral) propagation
    const RadialGrid g = make_grid(512, 64.0);
    WaveFunction u0 = packet(g, 4.0, 1.2, 0.0);
    Trajectory ftraj = exact_free_trajectory(u0, linspace(0.0, 6.0, 61));
    const auto frep = virial_check(ftraj);
    CHECK(frep.scalars.at("curvature_fit") ==
          doctest::Approx(frep.scalars.at("curvature_expected")).epsilon(1e-6));
    CHECK(frep.scalars.at("residual_relative") < 1e-6);

    auto sat = make_saturated(3.0, 2.0);
    Trajectory straj = run(packet(g, 4.0, 1.2, 0.0, 2.0), 1.0, 1e-3, 0.1, sat);
    CHECK_THROWS_AS(virial_check(straj), std::invalid_argument);
}

TEST_CASE("exterior decay: saturated bounded, free zero, TD envelope arithmetic") {
    const RadialGrid g = make_grid(512, 64.0);
    auto sat = make_saturated(3.0, 2.0);
    Trajectory straj = run(packet(g, 5.0, 1.2, 0.0, 4.0), 12.0, 2e-3, 0.5, sat);
    const auto srep = exterior_decay_check(straj, 0.8, 1.2);
    CHECK(srep.verdict == Verdict::Pass);

    Trajectory ftraj = run(packet(g, 5.0, 1.2, 0.5), 8.0, 2e-3, 0.5, make_free());
    const auto frep = exterior_decay_check(ftraj, 0.8, 1.2);
    for (double v : frep.column("weighted_sup").values) CHECK(v == 0.0);

    auto td = make_time_dependent(
        [](double t, double r) { return 0.8 * std::cos(0.5 * t) / std::pow(1.0 + r, 3.0); }, 1.0,
        3.0);
    Trajectory ttraj = run(packet(g, 5.0, 1.2, 0.5), 12.0, 2e-3, 0.5, td);
    const auto trep = exterior_decay_check(ttraj, 0.8, 2.4);  // beta0 = q alpha
    CHECK(trep.verdict == Verdict::Pass);
}

TEST_CASE("low frequency series is a verdict-free diagnostic") {
    const RadialGrid g = make_grid(256, 32.0);
    Trajectory traj = run(packet(g, 6.0, 1.5, 0.5), 6.0, 2e-3, 0.5, make_free());
    const auto rep = low_frequency_series(traj, 0.5);
    CHECK(rep.verdict == Verdict::Inconclusive);
    for (double v : rep.column("fp_norm").values) {
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
    }
}

TEST_CASE("regularity probe: band gate errors") {
    const RadialGrid g = make_grid(512, 16.0);
    WaveFunction u0 = WaveFunction::sample(g, [](double r) {
        return Complex(smooth_step::value(r / 0.4) * smooth_step::value((2.0 - r) / 0.6), 0.0);
    });
    CHECK_THROWS_AS(regularity_probe(u0, make_free(), {1e5}, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(regularity_probe(packet(g, 8.0, 2.0), make_free(), {8.0}, 2.0),
                    std::invalid_argument);  // not supported in B_K
}

}  // TEST_SUITE
