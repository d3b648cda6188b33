#include "scatlab/operators.hpp"

#include "scatlab/fft.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace scatlab {

namespace {

// 6-point Lagrange interpolation on the padded array w[0..n] with w[j] = u(j*h),
// w[0] = 0 at the origin. Returns 0 beyond r_max.
Complex interp6(const CVector& values, const RadialGrid& g, double x) {
    const int n = g.n_points;
    const double h = g.spacing;
    if (x >= g.r_max || x < 0.0) return Complex(0.0, 0.0);
    auto w = [&](int j) -> Complex {
        if (j <= 0) return Complex(0.0, 0.0);
        if (j > n) return Complex(0.0, 0.0);
        return values[j - 1];
    };
    int j0 = static_cast<int>(std::floor(x / h));
    int a = j0 - 2;
    if (a < 0) a = 0;
    if (a > n - 5) a = n - 5;
    const double t = x / h - a;
    Complex acc(0.0, 0.0);
    for (int i = 0; i < 6; ++i) {
        double li = 1.0;
        for (int j = 0; j < 6; ++j) {
            if (j == i) continue;
            li *= (t - j) / (i - j);
        }
        acc += li * w(a + i);
    }
    return acc;
}

Complex interp6_uniform(const std::vector<Complex>& v, double x0, double dx, double x) {
    const int n = static_cast<int>(v.size());
    const double t_full = (x - x0) / dx;
    int a = static_cast<int>(std::floor(t_full)) - 2;
    if (a < 0) a = 0;
    if (a > n - 6) a = n - 6;
    const double t = t_full - a;
    Complex acc(0.0, 0.0);
    for (int i = 0; i < 6; ++i) {
        double li = 1.0;
        for (int j = 0; j < 6; ++j) {
            if (j == i) continue;
            li *= (t - j) / (i - j);
        }
        acc += li * v[a + i];
    }
    return acc;
}

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

WaveFunction gamma_apply(const DilationSpec& spec, const WaveFunction& u) {
    if (!(spec.grid == u.grid)) throw std::invalid_argument("gamma_apply: grid mismatch");
    WaveFunction du = derivative(u);
    CVector v(u.size());
    const Complex mi(0.0, -1.0);
    for (int i = 0; i < u.size(); ++i) {
        const double r = u.grid.node(i);
        v[i] = mi * (DilationSpec::g(r) * du.values[i] + 0.5 * DilationSpec::g_deriv(r) * u.values[i]);
    }
    return WaveFunction(u.grid, std::move(v));
}

WaveFunction dilation_apply(const WaveFunction& u) {
    WaveFunction du = derivative(u);
    CVector v(u.size());
    const Complex mi(0.0, -1.0);
    for (int i = 0; i < u.size(); ++i) {
        const double r = u.grid.node(i);
        v[i] = mi * (r * du.values[i] + 0.5 * u.values[i]);
    }
    return WaveFunction(u.grid, std::move(v));
}

WaveFunction scaling_derivative(const WaveFunction& u) {
    WaveFunction du = derivative(u);
    CVector v(u.size());
    for (int i = 0; i < u.size(); ++i) {
        const double r = u.grid.node(i);
        v[i] = r * du.values[i] - u.values[i];
    }
    return WaveFunction(u.grid, std::move(v));
}

DilationFlowResult dilation_flow(const WaveFunction& u, double s, double s_max) {
    if (std::abs(s) > s_max)
        throw std::invalid_argument("dilation_flow: |s| exceeds the resolvability bound s_max");
    DilationFlowResult out;
    if (s == 0.0) {
        out.state = u;
        return out;
    }
    const double es = std::exp(s);
    const double amp = std::exp(0.5 * s);
    CVector v(u.size());
    for (int i = 0; i < u.size(); ++i)
        v[i] = amp * interp6(u.values, u.grid, es * u.grid.node(i));
    v[u.size() - 1] = 0.0;
    out.state = WaveFunction(u.grid, std::move(v));
    out.truncation_loss = u.mass() - out.state.mass();
    return out;
}

WaveFunction dilation_calculus_quadrature(const BnFunction& f, const WaveFunction& u,
                                          int quad_points, double s_max) {
    const double S = std::min(s_max, f.fhat_halfwidth);
    if (quad_points < 3 || quad_points % 2 == 0)
        throw std::invalid_argument("dilation_calculus_quadrature: need an odd point count >= 3");
    const double ds = 2.0 * S / (quad_points - 1);
    CVector acc = CVector::Zero(u.size());
    for (int j = 0; j < quad_points; ++j) {
        const double s = -S + j * ds;
        const double wgt = (j == 0 || j == quad_points - 1) ? 0.5 : 1.0;
        auto flowed = dilation_flow(u, s, s_max);
        acc += (wgt * ds) * f.fhat(s) * flowed.state.values;
    }
    return WaveFunction(u.grid, std::move(acc));
}

WaveFunction dilation_calculus_log(const std::function<double(double)>& multiplier,
                                   const WaveFunction& u, int oversample) {
    const RadialGrid& g = u.grid;
    const double y_lo = std::log(g.spacing) - 3.0;
    const double y_hi = std::log(g.r_max) + 1.0;
    const int ny = next_pow2(oversample * g.n_points);
    const double dy = (y_hi - y_lo) / ny;

    // sample v(y) = e^{y/2} u(e^y)
    std::vector<Complex> v(ny);
    for (int l = 0; l < ny; ++l) {
        const double y = y_lo + l * dy;
        v[l] = std::exp(0.5 * y) * interp6(u.values, g, std::exp(y));
    }
    fft::cfft(v.data(), ny, true);
    const double L = ny * dy;
    for (int m = 0; m < ny; ++m) {
        const int mm = (m <= ny / 2) ? m : m - ny;
        const double xi = 2.0 * M_PI * mm / L;
        v[m] *= multiplier(xi) / static_cast<double>(ny);
    }
    fft::cfft(v.data(), ny, false);

    CVector out(g.n_points);
    for (int i = 0; i < g.n_points; ++i) {
        const double r = g.node(i);
        const double y = std::log(r);
        out[i] = std::exp(-0.5 * y) * interp6_uniform(v, y_lo, dy, y);
    }
    out[g.n_points - 1] = 0.0;
    return WaveFunction(g, std::move(out));
}

bool origin_vanishing_ok(const WaveFunction& u) {
    const double peak = u.values.cwiseAbs().maxCoeff();
    if (peak <= 0.0) return true;
    const double a1 = std::abs(u.values[0]);
    const double a4 = std::abs(u.values[3]);
    if (a1 < 1e-8 * peak) return true;
    // local power p with |u| ~ r^p near the origin; need p > 1/2
    const double p = std::log(a4 / a1) / std::log(u.grid.node(3) / u.grid.node(0));
    return p > 0.51;
}

WaveFunction functional_calculus_A(const BnFunction& f, const WaveFunction& u) {
    return dilation_calculus_log(f.f, u);
}

double projection_multiplier(int sign, double M, double R, double xi) {
    if (sign > 0) return 0.5 * (1.0 + std::tanh((xi - M) / R));
    return 0.5 * (1.0 - std::tanh((xi + M) / R));
}

WaveFunction smooth_projection_pm(int sign, double M, double R, const WaveFunction& u) {
    if (!(R > 2.0 / M_PI))
        throw std::invalid_argument("smooth_projection_pm: tanh(A/R) requires R > 2/pi");
    return dilation_calculus_log([sign, M, R](double xi) { return projection_multiplier(sign, M, R, xi); }, u);
}

double littlewood_paley_multiplier(double M, double k) {
    auto theta = [](double x) { return smooth_step::value(2.0 - x); };  // 1 for x<=1, 0 for x>=2
    return theta(k / M) - theta(2.0 * k / M);
}

WaveFunction littlewood_paley(double M, const WaveFunction& u) {
    const double k_lo = 2.0 * M_PI / u.grid.r_max;
    const double k_hi = M_PI / u.grid.spacing;
    if (!(M >= k_lo && M <= k_hi))
        throw std::invalid_argument("littlewood_paley: frequency outside the resolvable band");
    return apply_sine_multiplier(u, [M](double k) { return Complex(littlewood_paley_multiplier(M, k), 0.0); });
}

WaveFunction apply_momentum_function(const WaveFunction& u, const std::function<double(double)>& m) {
    // f(p) sin(kr) = E(k) sin(kr) - i O(k) cos(kr) with E/O the even/odd parts of m.
    auto c = sine_transform(u);
    const int nm = u.grid.modes();
    CVector even(nm);
    std::vector<double> br(nm), bi(nm), outr(nm + 1), outi(nm + 1);
    for (int k = 0; k < nm; ++k) {
        const double kk = u.grid.wavenumber(k);
        const double E = 0.5 * (m(kk) + m(-kk));
        const double O = 0.5 * (m(kk) - m(-kk));
        even[k] = c.coef[k] * E;
        br[k] = c.coef[k].real() * O;
        bi[k] = c.coef[k].imag() * O;
    }
    SpectralCoefficients ce{u.grid, std::move(even)};
    WaveFunction out = inverse_sine_transform(ce);
    fft::cosine_eval(br.data(), outr.data(), nm);
    fft::cosine_eval(bi.data(), outi.data(), nm);
    const double scale =
        2.0 * std::sqrt(u.grid.spacing / (2.0 * u.grid.n_points)) / u.grid.spacing;
    const Complex mi(0.0, -1.0);
    for (int j = 0; j < u.grid.n_points; ++j)
        out.values[j] += mi * Complex(outr[j], outi[j]) * scale;
    out.values[u.grid.n_points - 1] = 0.0;
    return out;
}

WaveFunction low_frequency_project(const WaveFunction& u, double scale, double eps) {
    SmoothCutoff F = cutoff_leq(1.0, eps);
    return apply_sine_multiplier(u, [&](double k) { return Complex(F.value(scale * k), 0.0); });
}

}  // namespace scatlab
