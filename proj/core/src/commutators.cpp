#include "scatlab/commutators.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace scatlab {

double operator_norm(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> s(m.adjoint() * m, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, s.eigenvalues().maxCoeff()));
}

double symmetrization_residual(const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& G) {
    const Eigen::MatrixXcd F2 = F * F;
    const Eigen::MatrixXcd comm = F * G - G * F;
    const Eigen::MatrixXcd lhs = F2 * G + G * F2;
    const Eigen::MatrixXcd rhs = 2.0 * F * G * F + (F * comm - comm * F);
    const double scale = operator_norm(F);
    const double den = scale * scale * operator_norm(G);
    if (den == 0.0) return 0.0;
    return operator_norm(lhs - rhs) / den;
}

CommutatorExpansionReport commutator_expand_verify(const Eigen::MatrixXcd& B,
                                                   const Eigen::MatrixXcd& A,
                                                   const BnFunction& f, int order) {
    const int dim = static_cast<int>(A.rows());
    if (dim > 256) throw std::invalid_argument("commutator_expand_verify: dimension cap is 256");
    if (order < 1 || order > f.order || order > 4)
        throw std::invalid_argument("commutator_expand_verify: f moments not tabulated to this order");
    if ((A - A.adjoint()).norm() > 1e-12 * std::max(1.0, A.norm()))
        throw std::invalid_argument("commutator_expand_verify: A must be self-adjoint");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
    const Eigen::MatrixXcd U = es.eigenvectors();
    const Eigen::VectorXd lam = es.eigenvalues();

    auto function_of_A = [&](const std::function<double(double)>& g) {
        Eigen::VectorXcd d(dim);
        for (int i = 0; i < dim; ++i) d[i] = g(lam[i]);
        return Eigen::MatrixXcd(U * d.asDiagonal() * U.adjoint());
    };

    const Eigen::MatrixXcd fA = function_of_A(f.f);
    const Eigen::MatrixXcd exact = B * fA - fA * B;

    std::vector<Eigen::MatrixXcd> ad(order + 1);
    ad[0] = B;
    for (int k = 1; k <= order; ++k) ad[k] = ad[k - 1] * A - A * ad[k - 1];

    Eigen::MatrixXcd e1 = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd e2 = Eigen::MatrixXcd::Zero(dim, dim);
    double fact = 1.0;
    for (int k = 1; k <= order - 1; ++k) {
        fact *= k;
        const Eigen::MatrixXcd fk = function_of_A(f.df[k - 1]);
        e1 += (1.0 / fact) * fk * ad[k];
        e2 += (std::pow(-1.0, k - 1) / fact) * ad[k] * fk;
    }

    CommutatorExpansionReport rep;
    rep.order = order;
    rep.exact_norm = operator_norm(exact);
    const Eigen::MatrixXcd remainder = exact - e1;
    rep.remainder_norm = operator_norm(remainder);
    rep.ad_n_norm = operator_norm(ad[order]);
    rep.moment_n = f.moment(order);
    rep.bound = rep.ad_n_norm * rep.moment_n;
    rep.measured_cn = rep.bound > 0.0 ? rep.remainder_norm / rep.bound : 0.0;
    rep.within_bound = rep.remainder_norm <= rep.bound * (1.0 + 1e-12) + 1e-14;
    const double scale = std::max(1.0, rep.exact_norm);
    rep.adjoint_consistency =
        operator_norm((e2 - e1) - (remainder + remainder.adjoint().eval())) / scale;
    return rep;
}

namespace {

Eigen::MatrixXd central_difference(const RadialGrid& g) {
    const int m = g.modes();
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, m);
    const double c = 1.0 / (2.0 * g.spacing);
    for (int j = 0; j < m; ++j) {
        if (j + 1 < m) D(j, j + 1) = c;
        if (j - 1 >= 0) D(j, j - 1) = -c;
    }
    return D;
}

}  // namespace

TanhCommutatorReport tanh_commutator_check(double R, const RadialGrid& grid) {
    if (!(R > 2.0 / M_PI))
        throw std::invalid_argument("tanh_commutator_check: requires R > 2/pi");
    const int m = grid.modes();
    if (m > 512) throw std::invalid_argument("tanh_commutator_check: dimension cap is 512");

    const Eigen::MatrixXd D = central_difference(grid);
    const Eigen::MatrixXd neg_lap = -(D * D).eval();
    Eigen::MatrixXcd P = Complex(0.0, -1.0) * D.cast<Complex>();

    Eigen::MatrixXcd Araw(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            Araw(i, j) = Complex(0.0, -0.5) * (grid.node(i) * D(i, j) + D(i, j) * grid.node(j));
    // already hermitian: -(i/2)(R D + D R) with D real antisymmetric

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Araw);
    const Eigen::MatrixXcd U = es.eigenvectors();
    const Eigen::VectorXd lam = es.eigenvalues();
    Eigen::VectorXcd tl(m), wl(m);
    for (int i = 0; i < m; ++i) {
        tl[i] = std::tanh(lam[i] / R);
        const double ch = std::cosh(lam[i] / R);
        wl[i] = 1.0 / (R * ch * ch);
    }
    const Eigen::MatrixXcd T = U * tl.asDiagonal() * U.adjoint();
    const Eigen::MatrixXcd W = U * wl.asDiagonal() * U.adjoint();

    const Eigen::MatrixXcd lap_c = neg_lap.cast<Complex>();
    const Eigen::MatrixXcd lhs = Complex(0.0, 1.0) * (lap_c * T - T * lap_c);
    const Eigen::MatrixXcd rhs = P * W * P;

    // smooth interior Gaussian test vector
    Eigen::VectorXcd v(m);
    const double r0 = grid.r_max * 0.35, w = grid.r_max * 0.08;
    for (int j = 0; j < m; ++j) {
        const double r = grid.node(j);
        v[j] = std::exp(-(r - r0) * (r - r0) / (2.0 * w * w));
    }
    v /= v.norm();

    TanhCommutatorReport rep;
    const Eigen::VectorXcd lv = lhs * v, rv = rhs * v;
    rep.lhs_norm = lv.norm();
    rep.rhs_norm = rv.norm();
    rep.rel_residual = rep.rhs_norm > 0 ? (lv - rv).norm() / rep.rhs_norm : (lv - rv).norm();
    return rep;
}

double sech_weight_negative_sup(double M, double R) {
    // coarse scan + golden-section refinement on lambda <= 0
    auto wfun = [&](double lam) {
        const double ch = std::cosh((lam - M) / R);
        return std::abs(lam) / (R * ch * ch);
    };
    double best = 0.0, best_l = 0.0;
    const double lo = -std::max(50.0, 10.0 * M);
    for (int i = 0; i <= 20000; ++i) {
        const double lam = lo + (0.0 - lo) * i / 20000.0;
        const double v = wfun(lam);
        if (v > best) {
            best = v;
            best_l = lam;
        }
    }
    double a = best_l - 0.01 * std::abs(lo), b = std::min(0.0, best_l + 0.01 * std::abs(lo));
    for (int it = 0; it < 200; ++it) {
        const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
        if (wfun(m1) < wfun(m2)) a = m1; else b = m2;
    }
    return std::max(best, wfun(0.5 * (a + b)));
}

double sech_weight_envelope(double M) {
    return std::sqrt(M) * std::exp(-2.0 * std::sqrt(M));
}

}  // namespace scatlab
