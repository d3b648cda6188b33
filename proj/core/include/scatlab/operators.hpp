#pragma once

#include "scatlab/cutoff.hpp"
#include "scatlab/grid.hpp"

#include <functional>

namespace scatlab {

/// Vector-field profile for the radial momentum gamma: smooth, 0 on [0,1],
/// rising on [1,2], identically 1 from r = 2 outward.
struct DilationSpec {
    RadialGrid grid;

    static double g(double r) { return smooth_step::value(r - 1.0); }
    static double g_deriv(double r) { return smooth_step::deriv(r - 1.0); }
};

/// gamma = (1/2)(g p_r + p_r g) = -i(g d_r + g'/2) on u = r*psi. Symmetric.
WaveFunction gamma_apply(const DilationSpec& spec, const WaveFunction& u);

/// Dilation generator A = (1/2)(x.p + p.x); on u this is -i(r d_r + 1/2).
WaveFunction dilation_apply(const WaveFunction& u);

/// x.grad(psi) pulled back to u: (r d_r - 1) u.
WaveFunction scaling_derivative(const WaveFunction& u);

struct DilationFlowResult {
    WaveFunction state;
    double truncation_loss = 0.0;  // mass pushed past the wall
};

/// e^{iAs} u (r) = e^{s/2} u(e^s r), off-grid values by 6-point Lagrange
/// interpolation, zero beyond r_max.
DilationFlowResult dilation_flow(const WaveFunction& u, double s, double s_max = 3.0);

/// Quadrature realization of f(A) = int fhat(s) e^{iAs} ds over the dilation
/// flow. Truncated to |s| <= min(s_max, fhat_halfwidth).
WaveFunction dilation_calculus_quadrature(const BnFunction& f, const WaveFunction& u,
                                          int quad_points = 801, double s_max = 3.0);

/// Log-coordinate realization: with r = e^y, v(y) = e^{y/2} u(e^y), the
/// generator A becomes -i d/dy, so any bounded multiplier m(xi) applies as a
/// Fourier multiplier in y. Handles tanh-type functions outside B_n.
WaveFunction dilation_calculus_log(const std::function<double(double)>& multiplier,
                                   const WaveFunction& u, int oversample = 4);

/// True when u vanishes near r = 0 fast enough (faster than r^{1/2}) for the
/// log-coordinate path to be trustworthy.
bool origin_vanishing_ok(const WaveFunction& u);

/// f(A) for f in B_n; defaults to the log-coordinate path.
WaveFunction functional_calculus_A(const BnFunction& f, const WaveFunction& u);

/// Smooth outgoing/incoming projections, defined for R > 2/pi:
///   P+_{M,R}(A) = (1 + tanh((A - M)/R))/2,
///   P-_{M,R}(A) = (1 - tanh((A + M)/R))/2.
WaveFunction smooth_projection_pm(int sign, double M, double R, const WaveFunction& u);

/// Scalar multiplier of the projections, exposed for dense cross-checks.
double projection_multiplier(int sign, double M, double R, double xi);

/// Littlewood-Paley piece at dyadic frequency M: smooth annular multiplier
/// supported in [M/2, 2M]; the dyadic family telescopes to the identity.
WaveFunction littlewood_paley(double M, const WaveFunction& u);
double littlewood_paley_multiplier(double M, double k);

/// F(p) for a signed-momentum multiplier m(k), via the even/odd split in the
/// sine/cosine bases. Exact for band-limited data away from the vector-field
/// region, where gamma = p.
WaveFunction apply_momentum_function(const WaveFunction& u, const std::function<double(double)>& m);

/// ||F(scale*|p| <= 1) u|| companion: smooth low-frequency projection.
WaveFunction low_frequency_project(const WaveFunction& u, double scale, double eps = 0.1);

}  // namespace scatlab
