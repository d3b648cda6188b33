#include <doctest.h>

#include "scatlab/operators.hpp"
#include "scatlab/oracle.hpp"

#include <cmath>

using namespace scatlab;

namespace {

WaveFunction interior_gaussian(const RadialGrid& g, double r0, double w, double k = 0.0) {
    WaveFunction u = WaveFunction::sample(g, [&](double r) {
        return r * std::exp(-(r - r0) * (r - r0) / (2.0 * w * w)) * std::exp(Complex(0.0, k * r));
    });
    u.values /= u.norm();
    return u;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("dense hamiltonian: free spectrum and hermiticity") {
    const RadialGrid g = make_grid(128, 16.0);
    DenseOperator H = dense_hamiltonian([](double) { return 0.0; }, g);
    CHECK(H.hermiticity_defect() < 1e-12);
    SpectralData sd = diagonalize(H);
    CHECK(sd.reconstruction_residual < 1e-10);
    CHECK(sd.orthonormality_defect < 1e-12);
    for (int k = 0; k < g.modes() / 4; ++k) {
        const double expected = std::pow(g.wavenumber(k), 2.0);
        CHECK(sd.eigenvalues[k] == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("dense hamiltonian: exponential well binds") {
    const RadialGrid g = make_grid(400, 50.0);
    DenseOperator H = dense_hamiltonian([](double r) { return -3.0 * std::exp(-r); }, g);
    SpectralData sd = diagonalize(H);
    CHECK(sd.eigenvalues[0] < 0.0);
    // ground level pinned from an independent finite-difference computation
    CHECK(sd.eigenvalues[0] == doctest::Approx(-0.13342).epsilon(0.02));
    CHECK(sd.eigenvalues[1] > -1e-8);  // single bound state
}

TEST_CASE("potential regularity report discriminates sigma") {
    const RadialGrid g = make_grid(256, 64.0);
    const auto bad = check_potential_conditions(
        [](double r) { return std::pow(1.0 + r * r, -0.25); }, g, 1.5);
    CHECK_FALSE(bad.pass);  // <x>^{-1/2} cannot carry sigma = 1.5
    const auto good = check_potential_conditions(
        [](double r) { return -3.0 * std::exp(-r); }, g, 1.5);
    CHECK(good.pass);
}

TEST_CASE("dense dilation: hermitian, flat spectral density, flow agreement") {
    const RadialGrid g = make_grid(256, 32.0);
    DenseOperator A = dense_dilation(g);
    CHECK(A.hermiticity_defect() < 1e-12);

    SpectralData sd = diagonalize(A);
    // A has Lebesgue spectrum: the central eigenvalue histogram is flat
    const int m = A.dim();
    std::vector<double> central(sd.eigenvalues.data() + m / 5, sd.eigenvalues.data() + 4 * m / 5);
    const int bins = 8;
    const double lo = central.front(), hi = central.back();
    std::vector<int> counts(bins, 0);
    for (double l : central) {
        int b = static_cast<int>((l - lo) / (hi - lo) * bins);
        counts[std::min(b, bins - 1)]++;
    }
    const double mean = static_cast<double>(central.size()) / bins;
    for (int b = 0; b < bins; ++b) CHECK(std::abs(counts[b] - mean) <= 0.2 * mean + 1);

    // e^{iAs} through the eigendecomposition vs the interpolation flow
    WaveFunction u = interior_gaussian(g, 10.0, 1.5);
    for (double s : {0.3, -0.4}) {
        CVector x = restrict_interior(u);
        CVector y = sd.vectors.adjoint() * x;
        for (int i = 0; i < y.size(); ++i) y[i] *= std::exp(Complex(0.0, sd.eigenvalues[i] * s));
        WaveFunction via_dense = embed_interior(g, sd.vectors * y);
        WaveFunction via_flow = dilation_flow(u, s).state;
        via_dense.values -= via_flow.values;
        CHECK(via_dense.norm() < 1e-6 * u.norm());
    }
}

TEST_CASE("exact_function: identity, composition, Crank-Nicolson order") {
    const RadialGrid g = make_grid(96, 12.0);
    DenseOperator H = dense_hamiltonian([](double r) { return -2.0 * std::exp(-r); }, g);
    DenseOperator one = exact_function(H, [](double) { return 1.0; });
    CHECK((one.matrix - Eigen::MatrixXcd::Identity(H.dim(), H.dim())).norm() < 1e-12 * std::sqrt(H.dim()));

    auto fg = exact_function(H, [](double l) { return std::tanh(0.3 * l); });
    auto f_of_g = exact_function(exact_function(H, [](double l) { return 0.3 * l; }),
                                 [](double l) { return std::tanh(l); });
    CHECK((fg.matrix - f_of_g.matrix).norm() < 1e-10 * std::max(1.0, fg.matrix.norm()));

    // e^{-iHt} against Crank-Nicolson at two step sizes: second order
    WaveFunction u = interior_gaussian(g, 5.0, 1.0, 0.8);
    const double T = 0.5;
    SpectralData sd = diagonalize(H);
    const WaveFunction exact = exact_propagate(sd, u, T);
    auto cn_error = [&](int steps) {
        const double dt = T / steps;
        const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(H.dim(), H.dim());
        const Eigen::MatrixXcd Ap = I + Complex(0.0, 0.5 * dt) * H.matrix;
        const Eigen::MatrixXcd Am = I - Complex(0.0, 0.5 * dt) * H.matrix;
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Ap);
        CVector x = restrict_interior(u);
        for (int s = 0; s < steps; ++s) x = lu.solve(Am * x);
        WaveFunction out = embed_interior(g, x);
        out.values -= exact.values;
        return out.norm();
    };
    const double e1 = cn_error(64), e2 = cn_error(128);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("exact_propagate: eigenvector phases and unitarity") {
    const RadialGrid g = make_grid(64, 8.0);
    DenseOperator H = dense_hamiltonian([](double r) { return -1.0 * std::exp(-r * r); }, g);
    SpectralData sd = diagonalize(H);
    WaveFunction psi0 = embed_interior(g, sd.vectors.col(0));
    WaveFunction prop = exact_propagate(sd, psi0, 2.0);
    WaveFunction expect = psi0;
    expect.values *= std::exp(Complex(0.0, -sd.eigenvalues[0] * 2.0));
    expect.values -= prop.values;
    CHECK(expect.norm() < 1e-12);

    WaveFunction u = interior_gaussian(g, 3.0, 0.8);
    CHECK(exact_propagate(sd, u, 17.3).norm() == doctest::Approx(u.norm()).epsilon(1e-12));
}

TEST_CASE("dimension cap enforced") {
    CHECK_THROWS_AS(dense_hamiltonian([](double) { return 0.0; }, make_grid(1024, 10.0)),
                    std::invalid_argument);
}

}  // TEST_SUITE
