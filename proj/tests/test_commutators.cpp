#include <doctest.h>

#include "scatlab/commutators.hpp"

#include <cmath>
#include <random>

using namespace scatlab;

namespace {

Eigen::MatrixXcd rand_herm(int dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist;
    Eigen::MatrixXcd m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(dist(rng), dist(rng));
    return 0.5 * (m + m.adjoint().eval());
}

}  // namespace

TEST_SUITE("commutators") {

TEST_CASE("symmetrization identity: random, diagonal, projection") {
    CHECK(symmetrization_residual(rand_herm(32, 1), rand_herm(32, 2)) < 1e-12);

    Eigen::MatrixXcd F = Eigen::MatrixXcd::Zero(16, 16), G = Eigen::MatrixXcd::Zero(16, 16);
    for (int i = 0; i < 16; ++i) {
        F(i, i) = 0.5 + 0.1 * i;
        G(i, i) = 2.0 - 0.2 * i;
    }
    CHECK(symmetrization_residual(F, G) < 1e-14);

    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(24, 24);
    for (int i = 0; i < 12; ++i) P(i, i) = 1.0;
    CHECK(symmetrization_residual(P, rand_herm(24, 3)) < 1e-12);
}

TEST_CASE("commutator expansion: commuting case vanishes") {
    const int dim = 16;
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) A(i, i) = i + 1.0;
    // B = polynomial in A commutes with f(A)
    Eigen::MatrixXcd B = A * A - 3.0 * A;
    BnFunction f = gaussian_bn(6.0, 2.0, 4);
    const auto rep = commutator_expand_verify(B, A, f, 3);
    CHECK(rep.exact_norm < 1e-12);
    CHECK(rep.remainder_norm < 1e-12);
    CHECK(rep.within_bound);
}

TEST_CASE("commutator expansion: diagonal A, random B, orders 2..4") {
    const int dim = 16;
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) A(i, i) = i + 1.0;
    Eigen::MatrixXcd B = rand_herm(dim, 11);
    BnFunction f = gaussian_bn(8.0, 2.0, 4);

    double prev_remainder = -1.0, prev_ad = 0.0, prev_mom = 0.0;
    for (int order : {2, 3, 4}) {
        const auto rep = commutator_expand_verify(B, A, f, order);
        CHECK(rep.within_bound);
        CHECK(rep.measured_cn <= 1.0);
        CHECK(rep.adjoint_consistency < 1e-12);
        if (prev_remainder >= 0.0) {
            CHECK(rep.remainder_norm < prev_remainder);
            // growth between consecutive orders is controlled by the moment and
            // iterated-commutator ratios
            const double allowed = prev_remainder * (rep.moment_n / prev_mom) *
                                   (rep.ad_n_norm / prev_ad) * 1.5;
            CHECK(rep.remainder_norm <= allowed);
        }
        prev_remainder = rep.remainder_norm;
        prev_ad = rep.ad_n_norm;
        prev_mom = rep.moment_n;
    }
}

TEST_CASE("commutator expansion preconditions") {
    BnFunction f = gaussian_bn(0.0, 1.0, 2);
    Eigen::MatrixXcd A = rand_herm(8, 5);
    Eigen::MatrixXcd B = rand_herm(8, 6);
    CHECK_THROWS_AS(commutator_expand_verify(B, A, f, 4), std::invalid_argument);  // moments 2 < 4
    Eigen::MatrixXcd NH = Eigen::MatrixXcd::Random(8, 8);
    CHECK_THROWS_AS(commutator_expand_verify(B, NH, f, 2), std::invalid_argument);
}

TEST_CASE("tanh commutator identity at two resolutions") {
    const auto r1 = tanh_commutator_check(1.0, make_grid(256, 16.0));
    CHECK(r1.rel_residual < 5e-3);
    CHECK(r1.rhs_norm > 0.0);
    const auto r2 = tanh_commutator_check(1.0, make_grid(512, 16.0));
    CHECK(r2.rel_residual < 0.6 * r1.rel_residual);
    CHECK_THROWS_AS(tanh_commutator_check(0.5, make_grid(256, 16.0)), std::invalid_argument);
}

TEST_CASE("sech^2 weight: negative-branch sup under the exponential envelope") {
    for (double M : {16.0, 25.0, 36.0}) {
        const double sup = sech_weight_negative_sup(M, std::sqrt(M));
        CHECK(sup <= 1.1 * sech_weight_envelope(M));
        CHECK(sup > 0.0);
    }
    // spot value at M = 25, R = 5 against the closed-form bound sqrt(M) e^{-2 sqrt M}
    CHECK(sech_weight_negative_sup(25.0, 5.0) <= 1.1 * 5.0 * std::exp(-10.0));
}

}  // TEST_SUITE
