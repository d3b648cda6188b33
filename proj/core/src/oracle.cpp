#include "scatlab/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace scatlab {

namespace {

void check_cap(const RadialGrid& g) {
    if (g.modes() > kDenseDimensionCap)
        throw std::invalid_argument("dense oracle: grid exceeds the dimension cap of 512");
}

}  // namespace

double DenseOperator::hermiticity_defect() const {
    const double scale = matrix.norm();
    if (scale == 0.0) return 0.0;
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() / scale;
}

CVector restrict_interior(const WaveFunction& u) {
    return u.values.head(u.grid.modes());
}

WaveFunction embed_interior(const RadialGrid& g, const CVector& interior) {
    if (interior.size() != g.modes())
        throw std::invalid_argument("embed_interior: size mismatch");
    CVector full(g.n_points);
    full.head(g.modes()) = interior;
    full[g.n_points - 1] = 0.0;
    return WaveFunction(g, std::move(full));
}

Eigen::MatrixXd dense_sine_matrix(const RadialGrid& g) {
    const int m = g.modes();
    const int n = g.n_points;
    Eigen::MatrixXd S(m, m);
    const double amp = std::sqrt(2.0 / n);
    for (int k = 0; k < m; ++k)
        for (int j = 0; j < m; ++j)
            S(k, j) = amp * std::sin(M_PI * (k + 1) * (j + 1) / n);
    return S;
}

Eigen::MatrixXd dense_laplacian_matrix(const RadialGrid& g) {
    const int m = g.modes();
    Eigen::MatrixXd S = dense_sine_matrix(g);
    Eigen::VectorXd k2(m);
    for (int k = 0; k < m; ++k) {
        const double kk = g.wavenumber(k);
        k2[k] = kk * kk;
    }
    return S * k2.asDiagonal() * S;
}

Eigen::MatrixXd dense_derivative_matrix(const RadialGrid& g) {
    // d/dr maps the sine mode sin(k r) to k cos(k r); assemble column by column.
    const int m = g.modes();
    const int n = g.n_points;
    Eigen::MatrixXd S = dense_sine_matrix(g);
    Eigen::MatrixXd C(m, m);
    const double amp = std::sqrt(2.0 / n);
    for (int k = 0; k < m; ++k)
        for (int j = 0; j < m; ++j)
            C(j, k) = amp * std::cos(M_PI * (k + 1) * (j + 1) / n);
    Eigen::VectorXd kv(m);
    for (int k = 0; k < m; ++k) kv[k] = g.wavenumber(k);
    return C * kv.asDiagonal() * S;
}

DenseOperator dense_multiplication(const RadialGrid& g, const std::function<double(double)>& profile) {
    check_cap(g);
    const int m = g.modes();
    DenseOperator op;
    op.grid = g;
    op.hermitian = true;
    op.provenance = "multiplication operator";
    op.matrix = Eigen::MatrixXcd::Zero(m, m);
    for (int j = 0; j < m; ++j) op.matrix(j, j) = profile(g.node(j));
    return op;
}

DenseOperator dense_hamiltonian(const std::function<double(double)>& V, const RadialGrid& g) {
    check_cap(g);
    const int m = g.modes();
    Eigen::MatrixXd H = dense_laplacian_matrix(g);
    for (int j = 0; j < m; ++j) H(j, j) += V(g.node(j));
    DenseOperator op;
    op.grid = g;
    op.hermitian = true;
    op.provenance = "H = -Delta_r + V";
    op.matrix = H.cast<Complex>();
    return op;
}

VConditionReport check_potential_conditions(const std::function<double(double)>& V,
                                            const RadialGrid& g, double sigma) {
    VConditionReport rep;
    rep.sigma = sigma;
    const double dr = 1e-4;
    auto xdv = [&](double r) { return r * (V(r + dr) - V(r - dr)) / (2.0 * dr); };
    auto xd2v = [&](double r) { return r * (xdv(r + dr) - xdv(r - dr)) / (2.0 * dr); };
    double tail_early = 0.0, tail_late = 0.0;
    for (int j = 0; j < g.modes(); ++j) {
        const double r = g.node(j);
        const double w = std::pow(1.0 + r * r, sigma / 2.0);
        const double a = w * std::abs(V(r));
        rep.sup_v = std::max(rep.sup_v, a);
        rep.sup_xdv = std::max(rep.sup_xdv, w * std::abs(xdv(r)));
        rep.sup_xd2v = std::max(rep.sup_xd2v, w * std::abs(xd2v(r)));
        if (r > 0.4 * g.r_max && r < 0.6 * g.r_max) tail_early = std::max(tail_early, a);
        if (r > 0.8 * g.r_max) tail_late = std::max(tail_late, a);
    }
    // The weighted quantities must be bounded; growth toward the outer edge
    // means the declared sigma overstates the decay.
    const bool growing = tail_late > 1.2 * tail_early && tail_late > 1e-12;
    rep.pass = !growing && std::isfinite(rep.sup_v) && std::isfinite(rep.sup_xdv) &&
               std::isfinite(rep.sup_xd2v);
    return rep;
}

DenseOperator dense_dilation(const RadialGrid& g) {
    check_cap(g);
    const int m = g.modes();
    Eigen::MatrixXd D = dense_derivative_matrix(g);
    Eigen::MatrixXcd raw(m, m);
    const Complex mi(0.0, -1.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            raw(i, j) = mi * (g.node(i) * D(i, j) + (i == j ? 0.5 : 0.0));
    DenseOperator op;
    op.grid = g;
    op.hermitian = true;
    op.provenance = "A = -i(r d_r + 1/2), symmetrized";
    op.matrix = 0.5 * (raw + raw.adjoint().eval());
    return op;
}

DenseOperator dense_gamma(const RadialGrid& g, const std::function<double(double)>& g_profile,
                          const std::function<double(double)>& g_deriv) {
    check_cap(g);
    const int m = g.modes();
    Eigen::MatrixXd D = dense_derivative_matrix(g);
    Eigen::MatrixXcd raw(m, m);
    const Complex mi(0.0, -1.0);
    for (int i = 0; i < m; ++i) {
        const double r = g.node(i);
        for (int j = 0; j < m; ++j)
            raw(i, j) = mi * (g_profile(r) * D(i, j) + (i == j ? 0.5 * g_deriv(r) : 0.0));
    }
    DenseOperator op;
    op.grid = g;
    op.hermitian = true;
    op.provenance = "gamma = -i(g d_r + g'/2), symmetrized";
    op.matrix = 0.5 * (raw + raw.adjoint().eval());
    return op;
}

SpectralData diagonalize(const DenseOperator& op) {
    if (!op.hermitian) throw std::invalid_argument("diagonalize: operator not flagged hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op.matrix);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("diagonalize: eigensolver failed");
    SpectralData sd;
    sd.eigenvalues = solver.eigenvalues();
    sd.vectors = solver.eigenvectors();
    const Eigen::MatrixXcd recon =
        sd.vectors * sd.eigenvalues.cast<Complex>().asDiagonal() * sd.vectors.adjoint();
    const double scale = op.matrix.norm();
    sd.reconstruction_residual = scale > 0 ? (recon - op.matrix).norm() / scale : 0.0;
    sd.orthonormality_defect =
        (sd.vectors.adjoint() * sd.vectors - Eigen::MatrixXcd::Identity(op.dim(), op.dim()))
            .cwiseAbs()
            .maxCoeff();
    return sd;
}

DenseOperator exact_function(const SpectralData& sd, const std::function<double(double)>& f,
                             const DenseOperator& like) {
    Eigen::VectorXcd fl(sd.eigenvalues.size());
    for (int i = 0; i < sd.eigenvalues.size(); ++i) fl[i] = f(sd.eigenvalues[i]);
    DenseOperator out;
    out.grid = like.grid;
    out.hermitian = true;  // real f of a hermitian operator
    out.provenance = "f(" + like.provenance + ")";
    out.matrix = sd.vectors * fl.asDiagonal() * sd.vectors.adjoint();
    return out;
}

DenseOperator exact_function(const DenseOperator& op, const std::function<double(double)>& f) {
    return exact_function(diagonalize(op), f, op);
}

WaveFunction exact_propagate(const SpectralData& sd, const WaveFunction& u, double t) {
    CVector x = restrict_interior(u);
    CVector y = sd.vectors.adjoint() * x;
    for (int i = 0; i < y.size(); ++i) y[i] *= std::exp(Complex(0.0, -sd.eigenvalues[i] * t));
    return embed_interior(u.grid, sd.vectors * y);
}

WaveFunction exact_propagate(const DenseOperator& H, const WaveFunction& u, double t) {
    return exact_propagate(diagonalize(H), u, t);
}

WaveFunction apply_dense(const DenseOperator& op, const WaveFunction& u) {
    if (!(op.grid == u.grid)) throw std::invalid_argument("apply_dense: grid mismatch");
    return embed_interior(u.grid, op.matrix * restrict_interior(u));
}

Complex dense_expectation(const DenseOperator& op, const WaveFunction& u) {
    return inner_product(apply_dense(op, u), u);
}

}  // namespace scatlab
