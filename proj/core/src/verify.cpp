#include "scatlab/verify.hpp"

#include "scatlab/commutators.hpp"
#include "scatlab/config.hpp"
#include "scatlab/oracle.hpp"
#include "scatlab/probes.hpp"
#include "scatlab/scattering.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

namespace scatlab {

namespace {

Eigen::MatrixXcd random_hermitian(int dim, std::mt19937& rng, double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, scale);
    Eigen::MatrixXcd m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(dist(rng), dist(rng));
    return 0.5 * (m + m.adjoint().eval());
}

WaveFunction make_packet(const RadialGrid& g, double r0, double width, double k, double mass = 1.0) {
    WaveFunction u = WaveFunction::sample(g, [&](double r) {
        return r * std::exp(-(r - r0) * (r - r0) / (2.0 * width * width)) *
               std::exp(Complex(0.0, k * r));
    });
    u.values *= std::sqrt(mass) / u.norm();
    return u;
}

Trajectory quick_run(const WaveFunction& u0, double t1, double dt, double cadence,
                     const EquationModel& model, bool absorber = false,
                     std::vector<double> snaps = {}) {
    EvolveOptions opts;
    opts.dt = dt;
    opts.observer_cadence = cadence;
    opts.use_absorber = absorber;
    opts.snapshot_times = std::move(snaps);
    return evolve(u0, 0.0, t1, opts, model);
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[200];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

// -------------------------------------------------------------- criterion 1
CriterionResult criterion_algebra_identities() {
    CriterionResult res{1, "algebraic identity suite", true, 0.0, "", 0.0};
    std::mt19937 rng(12345);
    double worst_sym = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto F = random_hermitian(32, rng);
        const auto G = random_hermitian(32, rng);
        worst_sym = std::max(worst_sym, symmetrization_residual(F, G));
    }
    if (worst_sym > 1e-12) res.pass = false;

    double worst_cn = 0.0, worst_adj = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto A = random_hermitian(12, rng, 1.5);
        const auto B = random_hermitian(12, rng);
        std::uniform_real_distribution<double> cdist(-1.0, 1.0);
        const BnFunction f = gaussian_bn(cdist(rng), 1.0 + 0.5 * std::abs(cdist(rng)), 4);
        for (int order : {2, 3, 4}) {
            const auto rep = commutator_expand_verify(B, A, f, order);
            worst_cn = std::max(worst_cn, rep.measured_cn);
            worst_adj = std::max(worst_adj, rep.adjoint_consistency);
            if (!rep.within_bound) res.pass = false;
        }
    }
    if (worst_adj > 1e-12) res.pass = false;
    res.margin = worst_cn;
    res.detail = fmt("sym residual %.2e, max c_n %.3f, adjoint defect %.2e", worst_sym, worst_cn,
                     worst_adj);
    return res;
}

// -------------------------------------------------------------- criterion 2
CriterionResult criterion_tanh_commutator() {
    CriterionResult res{2, "tanh commutator and sech^2 envelope", true, 0.0, "", 0.0};
    const auto rep256 = tanh_commutator_check(1.0, make_grid(256, 16.0));
    const auto rep512 = tanh_commutator_check(1.0, make_grid(512, 16.0));
    const bool small = rep256.rel_residual <= 5e-3;
    const bool halves = rep512.rel_residual <= 0.6 * rep256.rel_residual;
    bool envelopes = true;
    double worst_ratio = 0.0;
    for (double M : {16.0, 25.0, 36.0}) {
        const double sup = sech_weight_negative_sup(M, std::sqrt(M));
        const double bound = 1.1 * sech_weight_envelope(M);
        worst_ratio = std::max(worst_ratio, sup / bound);
        if (sup > bound) envelopes = false;
    }
    res.pass = small && halves && envelopes;
    res.margin = rep256.rel_residual;
    res.detail = fmt("residual(256) %.2e, residual(512) %.2e, envelope ratio %.3f",
                     rep256.rel_residual, rep512.rel_residual, worst_ratio);
    return res;
}

// -------------------------------------------------------------- criterion 3
double heisenberg_residual(const EquationModel& model, const WaveFunction& u0, double dt,
                           double cadence) {
    Trajectory traj = quick_run(u0, 3.0, dt, cadence, model);
    const auto rep = heisenberg_identity_check(traj, op_cutoff_fixed(cutoff_geq(1.0, 0.1), 10.0));
    return rep.scalars.at("residual_max");
}

CriterionResult criterion_heisenberg() {
    CriterionResult res{3, "Heisenberg identity dt^2 scaling", true, 0.0, "", 0.0};
    const RadialGrid g = make_grid(512, 48.0);
    std::ostringstream detail;
    for (const char* which : {"free", "static", "saturated"}) {
        EquationModel model;
        WaveFunction u0 = make_packet(g, 8.0, 1.5, 0.8);
        if (std::string(which) == "free") {
            model = make_free();
        } else if (std::string(which) == "static") {
            model = make_static_potential([](double r) { return -3.0 * std::exp(-r); });
        } else {
            model = make_saturated(3.0, 2.0);
            u0 = make_packet(g, 8.0, 1.5, 0.8, 4.0);
        }
        const double r1 = heisenberg_residual(model, u0, 2e-3, 0.05);
        const double r2 = heisenberg_residual(model, u0, 1e-3, 0.025);
        const double ratio = r2 > 0 ? r1 / r2 : 0.0;
        detail << which << " ratio " << fmt("%.2f ", ratio);
        if (!(ratio >= 3.6 && ratio <= 4.4)) res.pass = false;
        res.margin = std::max(res.margin, std::abs(ratio - 4.0));
    }
    res.detail = detail.str();
    return res;
}

// -------------------------------------------------------------- criterion 4
CriterionResult criterion_virial() {
    CriterionResult res{4, "virial / dilation identity", true, 0.0, "", 0.0};
    const RadialGrid g = make_grid(1024, 64.0);
    // free curvature
    {
        WaveFunction u0 = make_packet(g, 3.0, 1.2, 0.0);
        Trajectory traj = quick_run(u0, 6.0, 9e-4, 0.25, make_free());
        const auto rep = virial_check(traj);
        const double fit = rep.scalars.at("curvature_fit");
        const double expected = rep.scalars.at("curvature_expected");
        const double rel = std::abs(fit - expected) / std::abs(expected);
        if (rel > 1e-4) res.pass = false;
        res.detail += fmt("curvature rel err %.2e; ", rel);
        res.margin = rel;
    }
    // with potential: residual must scale like dt^2
    {
        auto model = make_static_potential([](double r) { return -3.0 * std::exp(-r); });
        WaveFunction u0 = make_packet(g, 6.0, 1.5, 0.5);
        Trajectory t1 = quick_run(u0, 4.0, 8e-4, 0.2, model);
        Trajectory t2 = quick_run(u0, 4.0, 4e-4, 0.1, model);
        const double r1 = virial_check(t1).scalars.at("residual_max");
        const double r2 = virial_check(t2).scalars.at("residual_max");
        const double ratio = r2 > 0 ? r1 / r2 : 0.0;
        if (!(ratio >= 3.2 && ratio <= 4.8)) res.pass = false;
        res.detail += fmt("potential residual ratio %.2f", ratio);
    }
    return res;
}

// -------------------------------------------------------------- criterion 5
CriterionResult criterion_ac_reconstruction() {
    CriterionResult res{5, "linear AC reconstruction", true, 0.0, "", 0.0};
    const RadialGrid g = make_grid(4096, 200.0);
    auto V = [](double r) { return -3.0 * std::exp(-r); };
    auto model = make_static_potential(V);
    auto es = eigenstates_linear(V, 4, g);
    if (es.states.empty()) {
        res.pass = false;
        res.detail = "no bound state found";
        return res;
    }
    WaveFunction pk = make_packet(g, 12.0, 2.0, 0.8);
    for (const auto& b : es.states) pk.values -= inner_product(pk, b.state) * b.state.values;
    pk.values /= pk.norm();
    WaveFunction u0 = WaveFunction::zero(g);
    u0.values = 0.6 * es.states.front().state.values + 0.8 * pk.values;

    const std::vector<double> snaps = {12.5, 25.0, 50.0, 100.0};
    Trajectory traj = quick_run(u0, 100.0, dt_max(model, g), 12.5, model, false, snaps);

    double prev = 1e9;
    std::ostringstream detail;
    double final_res = 0.0;
    for (size_t upto : {2u, 3u, 4u}) {
        std::vector<double> times(snaps.begin(), snaps.begin() + upto);
        auto dec = asymptotic_decompose(traj, 0.8, times, &es.states);
        detail << fmt("res(T=%g) %.3e; ", times.back(), dec.ac_residual);
        if (dec.ac_residual >= prev) res.pass = false;
        prev = dec.ac_residual;
        final_res = dec.ac_residual;
    }
    if (final_res > 1e-2) res.pass = false;
    res.margin = final_res;
    res.detail = detail.str();
    return res;
}

// -------------------------------------------------------------- criterion 6
CriterionResult criterion_cook_rates() {
    CriterionResult res{6, "Cook's method rates", true, 0.0, "", 0.0};
    // (a) F1 V decay slope for V = <x>^-2, alpha = 0.9
    {
        const RadialGrid g = make_grid(2048, 160.0);
        auto V = [](double r) { return 1.0 / (1.0 + r * r); };
        auto model = make_static_potential(V);
        WaveFunction u0 = make_packet(g, 10.0, 2.0, 1.0);
        EnergyWindow w{0.25, 8.0, EnergyWindow::Method::Auto};
        u0 = energy_window(u0, w, V);
        Trajectory traj = quick_run(u0, 60.0, dt_max(model, g), 1.0, model);
        traj.metadata["window_eta"] = w.eta;
        const auto rep = cook_integrand(traj, 0.9);
        const double slope = rep.scalars.at("f1v_slope");
        if (!(std::abs(slope - (-1.8)) <= 0.2)) res.pass = false;
        res.detail += fmt("F1V slope %.3f; ", slope);
        res.margin = slope;
    }
    // (b) Cauchy differences halve per time doubling (short-range well)
    {
        const RadialGrid g = make_grid(1024, 128.0);
        auto V = [](double r) { return -3.0 * std::exp(-r); };
        auto model = make_static_potential(V);
        WaveFunction u0 = make_packet(g, 10.0, 2.0, 0.8);
        EnergyWindow w{0.1, 5.0, EnergyWindow::Method::Auto};
        u0 = energy_window(u0, w, V);
        const std::vector<double> samples = {6.0, 12.0, 24.0, 48.0};
        Trajectory traj = quick_run(u0, 48.0, dt_max(model, g), 6.0, model, false, samples);
        auto wo = channel_wave_operator(traj, 0.8, samples);
        std::ostringstream ds;
        for (size_t k = 1; k < wo.cauchy_differences.size(); ++k) {
            const double ratio = wo.cauchy_differences[k] / wo.cauchy_differences[k - 1];
            ds << fmt("%.3f ", ratio);
            if (!(ratio <= 0.55)) res.pass = false;
        }
        res.detail += "cauchy ratios " + ds.str();
    }
    return res;
}

// -------------------------------------------------------------- criterion 7
CriterionResult criterion_gamma_classification() {
    CriterionResult res{7, "Gamma limit classification", true, 0.0, "", 0.0};
    const std::vector<double> alphas = {0.5, 0.7, 0.9};
    // free outgoing packet: Gamma > 0 with small alpha spread
    {
        const RadialGrid g = make_grid(4096, 250.0);
        WaveFunction u0 = make_packet(g, 6.0, 2.0, 2.0);
        Trajectory traj = quick_run(u0, 30.0, dt_max(make_free(), g), 0.5, make_free(), true);
        const auto rep = gamma_limit(traj, alphas);
        const double gamma = rep.scalars.at("gamma");
        const double spread_rel = rep.scalars.at("spread_relative");
        if (!(rep.scalars.at("is_free_wave") > 0.5)) res.pass = false;
        if (!(spread_rel <= 0.05)) res.pass = false;
        res.detail += fmt("free Gamma %.4f spread %.2f%%; ", gamma, 100.0 * spread_rel);
        res.margin = spread_rel;
    }
    // bound state: Gamma = 0 within 3 standard errors
    {
        const RadialGrid g = make_grid(512, 64.0);
        auto V = [](double r) { return -3.0 * std::exp(-r); };
        auto model = make_static_potential(V);
        auto es = eigenstates_linear(V, 1, g);
        Trajectory traj = quick_run(es.states.front().state, 40.0, dt_max(model, g), 0.5, model);
        const auto rep = gamma_limit(traj, alphas);
        if (!(rep.scalars.at("is_wls") > 0.5)) res.pass = false;
        res.detail += fmt("bound Gamma %.2e; ", rep.scalars.at("gamma"));
    }
    // saturated soliton: Gamma = 0 within threshold
    {
        const RadialGrid g = make_grid(512, 64.0);
        auto model = make_saturated(3.0, 2.0);
        WaveFunction sol = ground_state(model, 40.0, g);
        Trajectory traj = quick_run(sol, 40.0, dt_max(model, g), 0.5, model);
        const auto rep = gamma_limit(traj, alphas);
        if (!(rep.scalars.at("is_wls") > 0.5)) res.pass = false;
        res.detail += fmt("soliton Gamma %.2e", rep.scalars.at("gamma"));
    }
    return res;
}

// -------------------------------------------------------------- criterion 8
CriterionResult criterion_wls_bound() {
    CriterionResult res{8, "weak localization bound", true, 0.0, "", 0.0};
    {
        const RadialGrid g = make_grid(512, 64.0);
        auto model = make_saturated(3.0, 2.0);
        WaveFunction sol = ground_state(model, 40.0, g);
        Trajectory traj = quick_run(sol, 100.0, dt_max(model, g), 1.0, model);
        const auto rep = weak_localization_diag(traj);
        if (rep.verdict != Verdict::Pass) res.pass = false;
        res.detail += fmt("soliton ratio tail/min %.2f; ", rep.margin);
        res.margin = rep.margin;
    }
    {
        const RadialGrid g = make_grid(4096, 256.0);
        WaveFunction u0 = make_packet(g, 6.0, 2.0, 2.0);
        Trajectory traj = quick_run(u0, 30.0, dt_max(make_free(), g), 0.5, make_free());
        const auto rep = weak_localization_diag(traj);
        if (rep.verdict != Verdict::Fail) res.pass = false;
        res.detail += fmt("free packet ratio %.2f (must fail)", rep.margin);
    }
    return res;
}

// -------------------------------------------------------------- criterion 9
CriterionResult criterion_morawetz() {
    CriterionResult res{9, "exterior Morawetz boundedness", true, 0.0, "", 0.0};
    const RadialGrid g = make_grid(512, 64.0);
    auto model = make_saturated(3.0, 2.0);
    WaveFunction sol = ground_state(model, 40.0, g);
    const std::vector<double> scales = {1.5, 3.0};
    Trajectory t1 = quick_run(sol, 50.0, dt_max(model, g), 1.0, model);
    Trajectory t2 = quick_run(sol, 100.0, dt_max(model, g), 1.0, model);
    const double p1 = morawetz_scan(t1, scales).scalars.at("a_norm_mean");
    const double p2 = morawetz_scan(t2, scales).scalars.at("a_norm_mean");
    const double rel = std::abs(p1 - p2) / std::max(p1, p2);
    if (!(rel <= 0.10)) res.pass = false;
    res.margin = rel;
    res.detail = fmt("A-norm proxy %.4f vs %.4f (rel %.3f)", p1, p2, rel);
    return res;
}

// ------------------------------------------------------------- criterion 10
CriterionResult criterion_regularity() {
    CriterionResult res{10, "regularity probe slopes", true, 0.0, "", 0.0};
    const RadialGrid g = make_grid(4096, 20.0);
    const std::vector<double> Ms = {4, 8, 16, 32, 64};
    auto model = make_saturated(3.0, 2.0);
    // smooth compactly supported data
    {
        WaveFunction u0 = WaveFunction::sample(g, [](double r) {
            return Complex(smooth_step::value(r / 0.4) * smooth_step::value((2.0 - r) / 0.6), 0.0);
        });
        u0.values /= u0.norm();
        const auto rep = regularity_probe(u0, model, Ms, 2.0);
        const double s_out = rep.scalars.at("slope_exterior");
        const double s_band = rep.scalars.at("slope_band");
        if (!(s_out <= -0.5 + 0.1)) res.pass = false;
        if (!(s_band <= -2.0)) res.pass = false;
        res.detail += fmt("smooth slopes band %.2f exterior %.2f; ", s_band, s_out);
    }
    // |r-1|^{3/2} kink reproduces its classical decay
    {
        const std::vector<double> Mk = {16, 32, 64, 128, 256};
        WaveFunction u0 = WaveFunction::sample(g, [](double r) {
            const double bump = smooth_step::value(r / 0.3) * smooth_step::value((2.0 - r) / 0.6);
            return Complex(bump * std::pow(std::abs(r - 1.0), 1.5), 0.0);
        });
        u0.values /= u0.norm();
        const auto rep = regularity_probe(u0, model, Mk, 2.0);
        const double s_band = rep.scalars.at("slope_band");
        if (!(std::abs(s_band - (-1.5)) <= 0.2)) res.pass = false;
        res.detail += fmt("kink band slope %.3f", s_band);
        res.margin = s_band;
    }
    return res;
}

// ------------------------------------------------------------- criterion 11
CriterionResult criterion_oracle_cross() {
    CriterionResult res{11, "oracle cross-validation", true, 0.0, "", 0.0};
    // order-2 convergence against the dense propagator on a 256-point grid
    {
        const RadialGrid g = make_grid(256, 32.0);
        auto V = [](double r) { return -3.0 * std::exp(-r); };
        auto model = make_static_potential(V);
        WaveFunction u0 = make_packet(g, 8.0, 1.5, 1.0);
        DenseOperator H = dense_hamiltonian(V, g);
        SpectralData sd = diagonalize(H);
        const WaveFunction exact = exact_propagate(sd, u0, 2.0);
        auto err = [&](double dt) {
            Trajectory t = quick_run(u0, 2.0, dt, 2.0, model);
            WaveFunction d = t.frames.back().state;
            d.values -= exact.values;
            return d.norm();
        };
        const double e1 = err(1.6e-3), e2 = err(8e-4);
        const double ratio = e2 > 0 ? e1 / e2 : 0.0;
        if (!(ratio >= 3.4 && ratio <= 4.6)) res.pass = false;
        res.detail += fmt("endpoint ratio %.2f; ", ratio);
    }
    // functional calculus vs dense spectral calculus of the dilation generator
    {
        const RadialGrid g = make_grid(512, 48.0);
        WaveFunction u = make_packet(g, 12.0, 2.5, 0.4);
        const double M = 5.0, R = std::sqrt(5.0);
        WaveFunction via_log = smooth_projection_pm(+1, M, R, u);
        DenseOperator A = dense_dilation(g);
        DenseOperator P = exact_function(A, [&](double l) { return 0.5 * (1.0 + std::tanh((l - M) / R)); });
        WaveFunction via_dense = apply_dense(P, u);
        via_dense.values -= via_log.values;
        const double rel = via_dense.norm() / u.norm();
        if (!(rel <= 1e-6)) res.pass = false;
        res.margin = rel;
        res.detail += fmt("functional calculus agreement %.2e", rel);
    }
    return res;
}

}  // namespace

std::vector<int> suite_criteria(const std::string& suite) {
    if (suite == "algebra") return {1, 2};
    if (suite == "oracle") return {11};
    if (suite == "estimates") return {3, 4, 7, 8, 9, 10};
    if (suite == "scattering") return {5, 6};
    if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    throw std::invalid_argument("unknown verification suite '" + suite + "'");
}

bool is_known_suite(const std::string& suite) {
    return suite == "algebra" || suite == "oracle" || suite == "estimates" ||
           suite == "scattering" || suite == "all";
}

CriterionResult run_criterion(int id) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult res;
    switch (id) {
        case 1: res = criterion_algebra_identities(); break;
        case 2: res = criterion_tanh_commutator(); break;
        case 3: res = criterion_heisenberg(); break;
        case 4: res = criterion_virial(); break;
        case 5: res = criterion_ac_reconstruction(); break;
        case 6: res = criterion_cook_rates(); break;
        case 7: res = criterion_gamma_classification(); break;
        case 8: res = criterion_wls_bound(); break;
        case 9: res = criterion_morawetz(); break;
        case 10: res = criterion_regularity(); break;
        case 11: res = criterion_oracle_cross(); break;
        default: throw std::invalid_argument("unknown criterion id " + std::to_string(id));
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

int run_suite(const std::string& suite, std::ostream& os) {
    int failures = 0;
    for (int id : suite_criteria(suite)) {
        CriterionResult r;
        try {
            r = run_criterion(id);
        } catch (const std::exception& e) {
            r.id = id;
            r.name = "criterion " + std::to_string(id);
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        os << (r.pass ? "PASS" : "FAIL") << " criterion-" << r.id << " " << r.name << " ["
           << r.detail << "] (" << static_cast<int>(r.seconds) << "s)\n";
        os.flush();
        if (!r.pass) ++failures;
    }
    return failures;
}

}  // namespace scatlab
