#pragma once

#include "scatlab/cutoff.hpp"
#include "scatlab/evolve.hpp"
#include "scatlab/operators.hpp"
#include "scatlab/report.hpp"

#include <functional>
#include <vector>

namespace scatlab {

/// A self-adjoint (possibly time-dependent) observable with its explicit
/// time derivative, for the Heisenberg-derivative identity.
struct ObservableOperator {
    std::string name;
    std::function<WaveFunction(double, const WaveFunction&)> apply;
    std::function<WaveFunction(double, const WaveFunction&)> time_derivative;  // optional
};

ObservableOperator op_multiplication(const std::string& name, std::function<double(double)> profile);
ObservableOperator op_position_squared();
ObservableOperator op_neg_laplacian();
ObservableOperator op_dilation();
ObservableOperator op_gamma();
/// F(r/t^alpha) as a time-dependent multiplication operator.
ObservableOperator op_cutoff_scaled(const SmoothCutoff& F, double alpha);
ObservableOperator op_cutoff_fixed(const SmoothCutoff& F, double scale);

/// d/dt <A> = <i[-Delta+V, A] + dA/dt> - 2 Im(A psi, N(psi)), checked by
/// centered differences on the recorded cadence. The linear potential sits in
/// the commutator; the amplitude-dependent interaction enters the Im term.
EstimateReport heisenberg_identity_check(const Trajectory& traj, const ObservableOperator& A);

/// Series of <(1/2)(F1 gamma + gamma F1)> with F1 = F(|x|/t^alpha >= 1);
/// the angular-momentum term is identically zero for radial data and logged.
EstimateReport prob_gamma_series(const Trajectory& traj, double alpha);

/// int_1^T t^{-alpha} ||sqrt(-Delta_r) Ftilde_1 psi||^2 dt against the
/// H^{1/2} norm of the initial data. Requires energy-window metadata.
EstimateReport pres1_integral(const Trajectory& traj, double alpha, double eta);

/// Plateau estimates of Gamma = lim <F1 gamma F1> per alpha, their spread,
/// and the free-wave / weakly-localized classification.
EstimateReport gamma_limit(const Trajectory& traj, const std::vector<double>& alphas);

/// <|x|>_t / t^{1/2} boundedness diagnostic for weakly localized states.
EstimateReport weak_localization_diag(const Trajectory& traj);

/// ||(x.grad)^k psi|| for k = 1..k_max; throws on resolution failure.
std::vector<double> scaling_derivative_norms(const WaveFunction& u, int k_max);
EstimateReport scaling_derivative_series(const Trajectory& traj, int k_max);

/// ||F(|x|/t >= 2M) psi(t)|| under an energy cap E with M^2 >= 4E.
EstimateReport maximal_velocity_diag(const Trajectory& traj, double M, double E,
                                     double tail_tolerance = 1e-3);

/// Littlewood-Paley regularity probe on compactly supported data: band
/// magnitudes of the gradient data, the free-evolved exterior piece at
/// t = M^{-1/2}, and their log-log slopes. Band magnitudes are reported as
/// per-mode RMS values so the slope measures the coefficient decay.
EstimateReport regularity_probe(const WaveFunction& u0, const EquationModel& model,
                                const std::vector<double>& M_list, double K);

/// Exterior Morawetz scan: per-M transition-shell flux at quiet times t_n in
/// the final quarter, the dyadic-weighted sum, and the ||A psi(t_n)|| proxy.
EstimateReport morawetz_scan(const Trajectory& traj, const std::vector<double>& M_list);

/// <A P+_{M,R}(A)> series with the kinetic / sech^2-weighted / interaction
/// decomposition of its derivative and the time-averaged <P+>.
EstimateReport ap_plus_series(const Trajectory& traj, double M, double R = 0.0);

/// <F1 F2(t^beta gamma <> 1) F1> series; requires beta < alpha.
enum class MicrolocalDirection { Outgoing, Incoming };  // F2(y >= 1) / F2(y <= -1)
EstimateReport second_microlocal_series(const Trajectory& traj, double alpha, double beta,
                                        MicrolocalDirection direction);

/// Second time-difference of <x^2> against <8(-Delta) - 4 x.grad V>.
EstimateReport virial_check(const Trajectory& traj);

/// sup_r |F1(|x|/t^alpha) W(r,t,|psi|)| t^{beta0} boundedness (N-decay).
EstimateReport exterior_decay_check(const Trajectory& traj, double alpha, double beta0);

/// ||F_p(t^beta |p| <= 1) psi(t)|| series; diagnostic only, no verdict.
EstimateReport low_frequency_series(const Trajectory& traj, double beta);

}  // namespace scatlab
