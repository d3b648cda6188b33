#pragma once

#include "scatlab/cutoff.hpp"
#include "scatlab/grid.hpp"

#include <Eigen/Dense>

namespace scatlab {

double operator_norm(const Eigen::MatrixXcd& m);

/// ||F^2 G + G F^2 - 2 F G F - [F,[F,G]]|| / (||F||^2 ||G||); the identity is
/// exact, so anything above roundoff means broken algebra.
double symmetrization_residual(const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& G);

struct CommutatorExpansionReport {
    int order = 0;
    double exact_norm = 0.0;          // ||[B, f(A)]||
    double remainder_norm = 0.0;      // ||R_n||
    double ad_n_norm = 0.0;           // ||ad_A^(n)(B)||
    double moment_n = 0.0;            // int |fhat| |s|^n ds
    double bound = 0.0;               // ad_n_norm * moment_n
    double measured_cn = 0.0;         // remainder_norm / bound
    bool within_bound = false;        // measured_cn <= 1
    double adjoint_consistency = 0.0; // ||(E2 - E1) - (R_n + R_n^dag)|| / scale
};

/// Verifies [B, f(A)] = sum_{k=1}^{n-1} (1/k!) f^(k)(A) ad_A^(k)(B) + R_n
/// against the exact spectral commutator, and the adjoint-form counterpart.
/// A must be hermitian, dimension <= 256, f with moments tabulated to order n.
CommutatorExpansionReport commutator_expand_verify(const Eigen::MatrixXcd& B,
                                                   const Eigen::MatrixXcd& A,
                                                   const BnFunction& f, int order);

struct TanhCommutatorReport {
    double rel_residual = 0.0;  // ||(LHS-RHS)v|| / ||RHS v|| on the test vector
    double lhs_norm = 0.0;
    double rhs_norm = 0.0;
};

/// Checks [-i Delta, tanh(A/R)] = p (1/(R ch^2(A/R))) p on a dense
/// finite-difference realization (p exactly antihermitian, Delta = -p^2),
/// evaluated on a smooth interior test vector. Residual is the O(spacing^2)
/// algebra defect of the discretization.
TanhCommutatorReport tanh_commutator_check(double R, const RadialGrid& grid);

/// sup over the adversarial branch A <= 0 of |A| / (R ch^2((A-M)/R)), the
/// region where the sech^2 term of the AP+ derivative can turn negative.
double sech_weight_negative_sup(double M, double R);
/// The paper's envelope sqrt(M) e^{-2 sqrt(M)}.
double sech_weight_envelope(double M);

}  // namespace scatlab
