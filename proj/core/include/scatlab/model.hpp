#pragma once

#include "scatlab/grid.hpp"

#include <functional>
#include <string>

namespace scatlab {

enum class ModelKind {
    Free,
    StaticPotential,
    TimeDependentPotential,
    DefocusingPowerPlusPotential,
    Saturated,
};

std::string to_string(ModelKind k);

/// Tagged description of the interaction N(psi) = W(|x|, t, |psi|) psi for
/// i d_t psi + Delta psi = N(psi):
///   Free:                         W = 0
///   StaticPotential:              W = V(r)
///   TimeDependentPotential:       W = V(t, r), |V| <= C (1+r)^{-q}
///   DefocusingPowerPlusPotential: W = |psi|^{p-1} + V(r),  p in (7/3, 5)
///   Saturated (focusing):         W = -|psi|^{m-1} / (1 + |psi|^{m-n}),
///                                 m > 7/3, 1 < n < 7/3
struct EquationModel {
    ModelKind kind = ModelKind::Free;
    double power_p = 0.0;
    double sat_m = 0.0, sat_n = 0.0;
    std::function<double(double)> potential;            // V(r)
    std::function<double(double, double)> potential_t;  // V(t, r)
    double envelope_C = 0.0, decay_q = 0.0;
    // decay certificate for (N-decay): exterior exponent and decay rate
    double alpha_exterior = 0.8;
    double beta0 = 1.2;

    bool has_potential() const { return static_cast<bool>(potential) || static_cast<bool>(potential_t); }
    bool time_dependent() const { return kind == ModelKind::TimeDependentPotential; }
    bool nonlinear() const {
        return kind == ModelKind::DefocusingPowerPlusPotential || kind == ModelKind::Saturated;
    }
};

EquationModel make_free();
EquationModel make_static_potential(std::function<double(double)> V);
EquationModel make_time_dependent(std::function<double(double, double)> V, double C, double q);
EquationModel make_defocusing(double p, std::function<double(double)> V = {});
EquationModel make_saturated(double m, double n);

/// The multiplier W(r, t, a) with a = |psi|.
double interaction_multiplier(const EquationModel& model, double r, double t, double a);

/// r * N(psi) evaluated on the grid (psi = u/r).
WaveFunction nonlinearity_eval(const EquationModel& model, const WaveFunction& u, double t);

/// Potential-energy density g(a) with g'(a) = 2 a W_nl(a) for the amplitude
/// dependent part; the energy is <.|-Delta|.> + <V> + int g(|psi|).
double interaction_energy_density(const EquationModel& model, double r, double t, double a);

}  // namespace scatlab
