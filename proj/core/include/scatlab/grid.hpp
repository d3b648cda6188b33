#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <iosfwd>
#include <string>

namespace scatlab {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Uniform half-line grid carrying the u = r*psi reduction of radial R^3.
/// Nodes are r_j = j*spacing for j = 1..n_points, so the last node sits at
/// r_max, which acts as a hard Dirichlet wall: valid states have u(r_max) = 0
/// and every spectral operation keeps it that way. The 4*pi of the radial
/// measure is dropped everywhere by convention.
struct RadialGrid {
    int n_points = 0;
    double r_max = 0.0;
    double spacing = 0.0;

    double node(int i) const { return (i + 1) * spacing; }  // i in [0, n_points)
    int modes() const { return n_points - 1; }               // sine modes k = 1..n_points-1
    double wavenumber(int k) const;                          // k in [0, modes())
    double max_wavenumber() const;
    RVector nodes() const;

    bool operator==(const RadialGrid&) const = default;
};

/// Rejects n_points < 16 (unusable resolution) and non-positive r_max.
RadialGrid make_grid(int n_points, double r_max);

/// Complex grid function u(r_j) ~ r*psi(r_j) with Dirichlet ends.
struct WaveFunction {
    RadialGrid grid;
    CVector values;

    WaveFunction() = default;
    WaveFunction(const RadialGrid& g, CVector v);
    static WaveFunction zero(const RadialGrid& g);
    /// Samples u(r) = f(r) on the nodes; the wall value is forced to zero.
    static WaveFunction sample(const RadialGrid& g, const std::function<Complex(double)>& f);

    int size() const { return static_cast<int>(values.size()); }
    double norm() const;
    double mass() const { double n = norm(); return n * n; }
};

/// Coefficients against the Dirichlet sine basis sin(k*pi*r/r_max),
/// wavenumbers k_j = j*pi/r_max, j = 1..n_points-1. Normalized so that
/// sum |coef|^2 equals the physical squared norm (Parseval).
struct SpectralCoefficients {
    RadialGrid grid;
    CVector coef;

    double norm() const { return coef.norm(); }
};

/// L2 pairing matching the radial R^3 inner product (4*pi dropped):
/// (u, v) = sum_j u_j * conj(v_j) * spacing. Conjugate-linear in v.
Complex inner_product(const WaveFunction& u, const WaveFunction& v);

SpectralCoefficients sine_transform(const WaveFunction& u);
WaveFunction inverse_sine_transform(const SpectralCoefficients& c);

/// Applies a real or complex multiplier m(k) in the sine spectrum.
WaveFunction apply_sine_multiplier(const WaveFunction& u, const std::function<Complex(double)>& m);
WaveFunction apply_sine_multiplier(const SpectralCoefficients& c, const std::function<Complex(double)>& m);

/// Action of -Delta_r = -d^2/dr^2, computed spectrally. Non-negative.
WaveFunction laplacian_radial(const WaveFunction& u);

/// d/dr u, computed by differentiating the sine series (cosine evaluation).
WaveFunction derivative(const WaveFunction& u);

/// Fraction of the squared norm carried by the top 10% of the spectrum.
/// Values above ~1e-2 mean the state is under-resolved.
double spectral_tail_fraction(const WaveFunction& u);
bool is_resolved(const WaveFunction& u, double tail_tolerance = 1e-2);

/// Sobolev norms of psi = u/r through the half-line reduction:
/// ||psi||_{L2}^2 = sum |c_k|^2, ||grad psi||_{L2}^2 = sum k^2 |c_k|^2.
double h1_norm(const WaveFunction& u);
double sobolev_norm(const WaveFunction& u, double s);  // (sum (1+k^2)^s |c_k|^2)^(1/2)

struct SobolevReport {
    double sup_r_psi = 0.0;  // sup_{r>=1} r*|psi(r)| = sup_{r>=1} |u(r)|
    double h1 = 0.0;
    double ratio = 0.0;      // sup / h1, scale-invariant
};
/// Measures the radial Sobolev embedding ratio sup_{r>=1} r|psi| / ||psi||_{H1}.
SobolevReport radial_sobolev_check(const WaveFunction& u);

/// Expectation helpers. expectation(u, w) = (w, u) with w = Op(u).
Complex expectation(const WaveFunction& op_u, const WaveFunction& u);
double position_moment(const WaveFunction& u, double power);  // <|x|^power>, normalized by mass

/// Columnar text format: "# radial-grid n=<int> rmax=<float>" then rows "r re(u) im(u)".
void save_wavefunction(const std::string& path, const WaveFunction& u);
WaveFunction load_wavefunction(const std::string& path);
void write_wavefunction(std::ostream& os, const WaveFunction& u);
WaveFunction read_wavefunction(std::istream& is);

}  // namespace scatlab
