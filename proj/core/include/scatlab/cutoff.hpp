#pragma once

#include "scatlab/grid.hpp"

#include <array>
#include <functional>
#include <limits>
#include <vector>

namespace scatlab {

/// C-infinity step rising 0 -> 1 on [0, 1]: the normalized integral of the
/// bump exp(-1/(x(1-x))). All derivatives vanish at both ends.
namespace smooth_step {
double value(double x);
double deriv(double x);   // d/dx
double deriv2(double x);
double deriv3(double x);
}  // namespace smooth_step

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool bounded_below() const { return std::isfinite(lo); }
    bool bounded_above() const { return std::isfinite(hi); }
    double length() const { return hi - lo; }
};

/// Smoothed characteristic function of an interval: 1 where
/// dist(lambda, boundary) >= eps inside, 0 outside, C-infinity transition of
/// width exactly eps just inside each finite endpoint. Monotone when the
/// interval is half-infinite.
class SmoothCutoff {
public:
    SmoothCutoff() = default;
    SmoothCutoff(Interval omega, double eps);

    double value(double lambda) const;
    double deriv(double lambda) const;
    double deriv2(double lambda) const;
    double deriv3(double lambda) const;

    const Interval& interval() const { return omega_; }
    double eps() const { return eps_; }

private:
    Interval omega_;
    double eps_ = 0.0;
};

/// Rejects eps >= |Omega|/2 for bounded intervals and non-positive eps.
SmoothCutoff make_cutoff(Interval omega, double eps);

/// Convenience: F(lambda >= a) and F(lambda <= a) with transition width eps.
SmoothCutoff cutoff_geq(double a, double eps);
SmoothCutoff cutoff_leq(double a, double eps);

/// Multiplication by F(r / scale): the spatial cutoff F_1(|x|/s >= 1) etc.
/// Never increases the norm.
WaveFunction apply_spatial_cutoff(const SmoothCutoff& F, double scale, const WaveFunction& u);

/// Multiplication by an arbitrary real profile of r.
WaveFunction apply_profile(const WaveFunction& u, const std::function<double(double)>& profile);

/// Smooth bounded function with certified Fourier moments, for the
/// representation f(A) = int fhat(s) e^{iAs} ds. moments[k-1] tabulates
/// int |fhat(s)| |s|^k ds for k = 1..order.
struct BnFunction {
    std::function<double(double)> f;
    std::array<std::function<double(double)>, 4> df;  // derivatives 1..4
    std::function<Complex(double)> fhat;
    int order = 0;
    std::vector<double> moments;
    double fhat_halfwidth = 0.0;  // |fhat| negligible beyond this |s|

    double moment(int k) const;  // k in [1, order]
};

/// Gaussian f(l) = exp(-(l-center)^2 / (2 width^2)); fhat is Gaussian too,
/// moments tabulated numerically.
BnFunction gaussian_bn(double center, double width, int order = 4);

}  // namespace scatlab
