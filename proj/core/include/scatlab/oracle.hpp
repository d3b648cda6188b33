#pragma once

#include "scatlab/grid.hpp"

#include <functional>
#include <string>

namespace scatlab {

/// Dense-matrix ground truth on small grids. Operators act on the interior
/// values u_1..u_{n-1} (the wall value is pinned to zero); expectations use
/// the h-weighted inner product so they agree with the grid pairing.
struct DenseOperator {
    Eigen::MatrixXcd matrix;
    bool hermitian = false;
    std::string provenance;
    RadialGrid grid;

    int dim() const { return static_cast<int>(matrix.rows()); }
    double hermiticity_defect() const;  // max |M - M^dagger| / ||M||
};

struct SpectralData {
    RVector eigenvalues;      // ascending
    Eigen::MatrixXcd vectors; // columns orthonormal
    double reconstruction_residual = 0.0;
    double orthonormality_defect = 0.0;
};

inline constexpr int kDenseDimensionCap = 512;

/// Interior restriction/embedding between WaveFunction and dense vectors.
CVector restrict_interior(const WaveFunction& u);
WaveFunction embed_interior(const RadialGrid& g, const CVector& interior);

/// Orthonormal DST matrix S (symmetric, S*S = I) and friends.
Eigen::MatrixXd dense_sine_matrix(const RadialGrid& g);
Eigen::MatrixXd dense_laplacian_matrix(const RadialGrid& g);   // -d^2/dr^2, positive
Eigen::MatrixXd dense_derivative_matrix(const RadialGrid& g);  // spectral d/dr

DenseOperator dense_multiplication(const RadialGrid& g, const std::function<double(double)>& profile);

struct VConditionReport {
    double sigma = 0.0;
    double sup_v = 0.0;        // sup <r>^sigma |V|
    double sup_xdv = 0.0;      // sup <r>^sigma |r V'|
    double sup_xd2v = 0.0;     // sup <r>^sigma |(r d_r)^2 V|
    bool pass = false;         // bounded and not growing toward r_max
};

/// H = -Delta_r + V on the interior nodes. Hermitian by construction.
DenseOperator dense_hamiltonian(const std::function<double(double)>& V, const RadialGrid& g);
VConditionReport check_potential_conditions(const std::function<double(double)>& V,
                                            const RadialGrid& g, double sigma);

/// Discretized dilation generator A = -i(r d_r + 1/2), symmetrized.
DenseOperator dense_dilation(const RadialGrid& g);

/// Discretized radial momentum gamma = -i(g d_r + g'/2), symmetrized.
DenseOperator dense_gamma(const RadialGrid& g, const std::function<double(double)>& g_profile,
                          const std::function<double(double)>& g_deriv);

SpectralData diagonalize(const DenseOperator& op);

/// f(op) through the eigendecomposition. Requires the hermitian flag.
DenseOperator exact_function(const DenseOperator& op, const std::function<double(double)>& f);
DenseOperator exact_function(const SpectralData& sd, const std::function<double(double)>& f,
                             const DenseOperator& like);

/// e^{-iHt} u, exact for the dense H.
WaveFunction exact_propagate(const DenseOperator& H, const WaveFunction& u, double t);
WaveFunction exact_propagate(const SpectralData& sd, const WaveFunction& u, double t);

WaveFunction apply_dense(const DenseOperator& op, const WaveFunction& u);
Complex dense_expectation(const DenseOperator& op, const WaveFunction& u);

}  // namespace scatlab
