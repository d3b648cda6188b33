#include <doctest.h>

#include "scatlab/grid.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace scatlab;

namespace {

WaveFunction sine_mode(const RadialGrid& g, int k) {
    const double kk = g.wavenumber(k);
    return WaveFunction::sample(g, [kk](double r) { return Complex(std::sin(kk * r), 0.0); });
}

WaveFunction random_state(const RadialGrid& g, unsigned seed, int band = 0) {
    // random band-limited data built in the sine basis, so the wall condition
    // holds exactly
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist;
    SpectralCoefficients c{g, CVector::Zero(g.modes())};
    const int kmax = band > 0 ? std::min(band, g.modes()) : g.modes() / 2;
    for (int k = 0; k < kmax; ++k) c.coef[k] = Complex(dist(rng), dist(rng)) / (1.0 + k * k * 0.01);
    return inverse_sine_transform(c);
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("make_grid arithmetic and preconditions") {
    const RadialGrid g = make_grid(4096, 200.0);
    CHECK(g.spacing == doctest::Approx(200.0 / 4096).epsilon(1e-15));
    CHECK(g.node(g.n_points - 1) == doctest::Approx(200.0));
    CHECK(g.spacing * g.n_points == doctest::Approx(g.r_max).epsilon(1e-15));

    const RadialGrid g16 = make_grid(16, 1.0);
    CHECK(g16.node(0) == doctest::Approx(1.0 / 16));
    CHECK(g16.node(15) == doctest::Approx(1.0));
    for (int i = 1; i < 16; ++i) CHECK(g16.node(i) > g16.node(i - 1));

    CHECK_THROWS_AS(make_grid(8, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(64, -1.0), std::invalid_argument);
}

TEST_CASE("inner product: single node, sesquilinearity, orthogonality") {
    const RadialGrid g = make_grid(64, 8.0);
    WaveFunction u = WaveFunction::zero(g);
    u.values[0] = 1.0;
    CHECK(inner_product(u, u).real() == doctest::Approx(g.spacing));
    CHECK(inner_product(u, u).imag() == doctest::Approx(0.0));

    WaveFunction w = random_state(g, 7);
    WaveFunction iw = w;
    iw.values *= Complex(0.0, 1.0);
    const Complex p = inner_product(w, iw);
    CHECK(p.real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.imag() == doctest::Approx(-w.mass()).epsilon(1e-12));

    CHECK(std::abs(inner_product(sine_mode(g, 0), sine_mode(g, 1))) < 1e-12);

    const RadialGrid g2 = make_grid(32, 8.0);
    CHECK_THROWS_AS(inner_product(u, WaveFunction::zero(g2)), std::invalid_argument);
}

TEST_CASE("sine transform: basis vector, round trip, Parseval across sizes") {
    for (int n : {16, 64, 256, 1024}) {
        const RadialGrid g = make_grid(n, 12.5);
        WaveFunction u = sine_mode(g, 2);
        auto c = sine_transform(u);
        for (int k = 0; k < c.coef.size(); ++k)
            if (k != 2) CHECK(std::abs(c.coef[k]) < 1e-12 * c.norm());

        WaveFunction w = random_state(g, 100 + n);
        auto cw = sine_transform(w);
        CHECK(cw.norm() == doctest::Approx(w.norm()).epsilon(1e-12));
        WaveFunction back = inverse_sine_transform(cw);
        back.values -= w.values;
        CHECK(back.norm() < 1e-12 * w.norm());
    }
}

TEST_CASE("laplacian: eigenfunction, positivity, symmetry") {
    const RadialGrid g = make_grid(256, 10.0);
    WaveFunction u = sine_mode(g, 4);
    const double expected = std::pow(g.wavenumber(4), 2.0);
    WaveFunction lu = laplacian_radial(u);
    lu.values -= expected * u.values;
    CHECK(lu.norm() < 1e-10 * expected * u.norm());

    WaveFunction w = random_state(g, 3);
    CHECK(expectation(laplacian_radial(w), w).real() >= 0.0);

    WaveFunction v = random_state(g, 4);
    const Complex a = inner_product(laplacian_radial(w), v);
    const Complex b = inner_product(w, laplacian_radial(v));
    CHECK(std::abs(a - b) < 1e-12 * std::abs(a) + 1e-12);
}

TEST_CASE("laplacian matches the second-difference stencil at second order") {
    auto stencil_error = [](int n) {
        const RadialGrid g = make_grid(n, 16.0);
        WaveFunction u = WaveFunction::sample(g, [](double r) {
            return Complex(std::exp(-(r - 6.0) * (r - 6.0) / 2.0), 0.0);
        });
        WaveFunction lu = laplacian_radial(u);
        double worst = 0.0;
        for (int i = 1; i + 1 < g.n_points - 1; ++i) {
            const double fd = (-u.values[i + 1] - u.values[i - 1] + 2.0 * u.values[i]).real() /
                              (g.spacing * g.spacing);
            worst = std::max(worst, std::abs(lu.values[i].real() - fd));
        }
        return worst;
    };
    const double e1 = stencil_error(256);
    const double e2 = stencil_error(512);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));  // the defect is the stencil's O(h^2)
    CHECK(e1 < 1e-2);
}

TEST_CASE("derivative differentiates smooth data") {
    const RadialGrid g = make_grid(512, 20.0);
    WaveFunction u = WaveFunction::sample(g, [](double r) {
        return Complex(std::exp(-(r - 8.0) * (r - 8.0) / 3.0), 0.0);
    });
    WaveFunction du = derivative(u);
    double worst = 0.0;
    for (int i = 0; i < g.n_points - 1; ++i) {
        const double r = g.node(i);
        const double exact = -2.0 * (r - 8.0) / 3.0 * std::exp(-(r - 8.0) * (r - 8.0) / 3.0);
        worst = std::max(worst, std::abs(du.values[i].real() - exact));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("radial Sobolev report: gaussian, homogeneity, far packet, corpus bound") {
    const RadialGrid g = make_grid(2048, 100.0);
    WaveFunction u = WaveFunction::sample(g, [](double r) {
        return Complex(r * std::exp(-r * r / 2.0), 0.0);
    });
    const auto rep = radial_sobolev_check(u);
    CHECK(rep.ratio > 0.0);
    CHECK(rep.ratio < 1.0);

    // quadrature oracle for the H1 norm: trapezoid on |u|^2 + |u'|^2 with a
    // centered-difference derivative
    double q = 0.0;
    for (int i = 1; i + 1 < g.n_points; ++i) {
        const double du = (u.values[i + 1] - u.values[i - 1]).real() / (2.0 * g.spacing);
        q += (std::norm(u.values[i]) + du * du) * g.spacing;
    }
    CHECK(rep.h1 == doctest::Approx(std::sqrt(q)).epsilon(2e-3));
    // analytic value for u = r exp(-r^2/2): H1^2 = sqrt(pi)/4 + 3 sqrt(pi)/8
    CHECK(rep.h1 == doctest::Approx(std::sqrt(std::sqrt(M_PI) * 3.0 / 8.0 + std::sqrt(M_PI) / 4.0))
                        .epsilon(1e-10));

    WaveFunction u2 = u;
    u2.values *= 2.0;
    CHECK(radial_sobolev_check(u2).ratio == doctest::Approx(rep.ratio).epsilon(1e-14));

    WaveFunction far = WaveFunction::sample(g, [](double r) {
        return Complex(std::exp(-(r - 50.0) * (r - 50.0) / 2.0), 0.0);
    });
    const auto rep_far = radial_sobolev_check(far);
    CHECK(rep_far.ratio < 2.0 * rep.ratio + 1.0);

    for (unsigned seed = 0; seed < 20; ++seed) {
        WaveFunction w = random_state(g, 1000 + seed, 64);
        w.values /= h1_norm(w);
        const auto r = radial_sobolev_check(w);
        CHECK(r.ratio <= 1.0);  // |u(r)|^2 <= 2 ||u|| ||u'|| <= ||u||_{H1}^2
    }
}

TEST_CASE("spectral tail fraction flags rough data") {
    const RadialGrid g = make_grid(256, 16.0);
    WaveFunction smooth = WaveFunction::sample(g, [](double r) {
        return Complex(r * std::exp(-r * r / 4.0), 0.0);
    });
    CHECK(is_resolved(smooth));
    WaveFunction rough = random_state(g, 5, 0);
    SpectralCoefficients c{g, CVector::Zero(g.modes())};
    c.coef[g.modes() - 2] = 1.0;
    rough = inverse_sine_transform(c);
    CHECK_FALSE(is_resolved(rough));
}

TEST_CASE("wavefunction serialization round trip") {
    const RadialGrid g = make_grid(64, 5.0);
    WaveFunction u = random_state(g, 42);
    std::stringstream ss;
    write_wavefunction(ss, u);
    WaveFunction v = read_wavefunction(ss);
    CHECK(v.grid == u.grid);
    v.values -= u.values;
    CHECK(v.norm() < 1e-12 * u.norm());
}

}  // TEST_SUITE
