#include "scatlab/grid.hpp"

#include "scatlab/fft.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scatlab {

double RadialGrid::wavenumber(int k) const {
    return (k + 1) * M_PI / r_max;
}

double RadialGrid::max_wavenumber() const {
    return modes() * M_PI / r_max;
}

RVector RadialGrid::nodes() const {
    RVector r(n_points);
    for (int i = 0; i < n_points; ++i) r[i] = node(i);
    return r;
}

RadialGrid make_grid(int n_points, double r_max) {
    if (n_points < 16)
        throw std::invalid_argument("make_grid: n_points < 16 gives unusable resolution");
    if (!(r_max > 0.0))
        throw std::invalid_argument("make_grid: r_max must be positive");
    RadialGrid g;
    g.n_points = n_points;
    g.r_max = r_max;
    g.spacing = r_max / n_points;
    return g;
}

WaveFunction::WaveFunction(const RadialGrid& g, CVector v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.n_points)
        throw std::invalid_argument("WaveFunction: value count does not match grid");
}

WaveFunction WaveFunction::zero(const RadialGrid& g) {
    return WaveFunction(g, CVector::Zero(g.n_points));
}

WaveFunction WaveFunction::sample(const RadialGrid& g, const std::function<Complex(double)>& f) {
    CVector v(g.n_points);
    for (int i = 0; i < g.n_points; ++i) v[i] = f(g.node(i));
    v[g.n_points - 1] = 0.0;  // Dirichlet wall
    return WaveFunction(g, std::move(v));
}

double WaveFunction::norm() const {
    return values.norm() * std::sqrt(grid.spacing);
}

Complex inner_product(const WaveFunction& u, const WaveFunction& v) {
    if (!(u.grid == v.grid)) throw std::invalid_argument("inner_product: grid mismatch");
    // (u, v) = sum u_j conj(v_j) h; Eigen's dot conjugates the first factor.
    return v.values.dot(u.values) * u.grid.spacing;
}

namespace {

// DST-I scale factor: coef = s * RODFT00(values), s = sqrt(h / (2n)), which
// makes the transform an isometry between the h-weighted physical norm and
// the plain coefficient norm.
double dst_scale(const RadialGrid& g) {
    return std::sqrt(g.spacing / (2.0 * g.n_points));
}

void dst_complex(const CVector& in, CVector& out, int m) {
    std::vector<double> re(m), im(m), wr(m), wi(m);
    for (int j = 0; j < m; ++j) {
        re[j] = in[j].real();
        im[j] = in[j].imag();
    }
    fft::dst_i(re.data(), wr.data(), m);
    fft::dst_i(im.data(), wi.data(), m);
    out.resize(m);
    for (int k = 0; k < m; ++k) out[k] = Complex(wr[k], wi[k]);
}

}  // namespace

SpectralCoefficients sine_transform(const WaveFunction& u) {
    const int m = u.grid.modes();
    SpectralCoefficients c;
    c.grid = u.grid;
    dst_complex(u.values, c.coef, m);
    c.coef *= dst_scale(u.grid);
    return c;
}

WaveFunction inverse_sine_transform(const SpectralCoefficients& c) {
    const int m = c.grid.modes();
    if (c.coef.size() != m)
        throw std::invalid_argument("inverse_sine_transform: coefficient count mismatch");
    CVector vals;
    dst_complex(c.coef, vals, m);
    // inverse scale: 1/(2 n s) = s / h
    vals *= dst_scale(c.grid) / c.grid.spacing;
    CVector full(c.grid.n_points);
    full.head(m) = vals;
    full[c.grid.n_points - 1] = 0.0;
    return WaveFunction(c.grid, std::move(full));
}

WaveFunction apply_sine_multiplier(const SpectralCoefficients& c, const std::function<Complex(double)>& mfun) {
    SpectralCoefficients d = c;
    for (int k = 0; k < d.coef.size(); ++k) d.coef[k] *= mfun(c.grid.wavenumber(k));
    return inverse_sine_transform(d);
}

WaveFunction apply_sine_multiplier(const WaveFunction& u, const std::function<Complex(double)>& mfun) {
    return apply_sine_multiplier(sine_transform(u), mfun);
}

WaveFunction laplacian_radial(const WaveFunction& u) {
    return apply_sine_multiplier(u, [](double k) { return Complex(k * k, 0.0); });
}

WaveFunction derivative(const WaveFunction& u) {
    // u = sum c_k sin(k r) => u' = sum c_k k cos(k r). Evaluate the cosine
    // series on all nodes including the wall. The inverse DST normalization
    // s/h applies unchanged.
    auto c = sine_transform(u);
    const int m = u.grid.modes();
    std::vector<double> br(m), bi(m), outr(m + 1), outi(m + 1);
    for (int k = 0; k < m; ++k) {
        const double kk = u.grid.wavenumber(k);
        br[k] = c.coef[k].real() * kk;
        bi[k] = c.coef[k].imag() * kk;
    }
    fft::cosine_eval(br.data(), outr.data(), m);
    fft::cosine_eval(bi.data(), outi.data(), m);
    // the sine reconstruction carries 2s/h per coefficient (RODFT00 doubles,
    // the cosine evaluation does not)
    const double scale = 2.0 * dst_scale(u.grid) / u.grid.spacing;
    CVector vals(u.grid.n_points);
    for (int j = 0; j < u.grid.n_points; ++j)
        vals[j] = Complex(outr[j], outi[j]) * scale;
    return WaveFunction(u.grid, std::move(vals));
}

double spectral_tail_fraction(const WaveFunction& u) {
    auto c = sine_transform(u);
    const int m = u.grid.modes();
    const int cut = m - m / 10;
    double total = 0.0, tail = 0.0;
    for (int k = 0; k < m; ++k) {
        const double a = std::norm(c.coef[k]);
        total += a;
        if (k >= cut) tail += a;
    }
    return total > 0.0 ? tail / total : 0.0;
}

bool is_resolved(const WaveFunction& u, double tail_tolerance) {
    return spectral_tail_fraction(u) < tail_tolerance;
}

double h1_norm(const WaveFunction& u) {
    return sobolev_norm(u, 1.0);
}

double sobolev_norm(const WaveFunction& u, double s) {
    auto c = sine_transform(u);
    double acc = 0.0;
    for (int k = 0; k < c.coef.size(); ++k) {
        const double kk = u.grid.wavenumber(k);
        acc += std::pow(1.0 + kk * kk, s) * std::norm(c.coef[k]);
    }
    return std::sqrt(acc);
}

SobolevReport radial_sobolev_check(const WaveFunction& u) {
    SobolevReport rep;
    for (int i = 0; i < u.grid.n_points; ++i) {
        if (u.grid.node(i) < 1.0) continue;
        rep.sup_r_psi = std::max(rep.sup_r_psi, std::abs(u.values[i]));
    }
    rep.h1 = h1_norm(u);
    rep.ratio = rep.h1 > 0.0 ? rep.sup_r_psi / rep.h1 : 0.0;
    return rep;
}

Complex expectation(const WaveFunction& op_u, const WaveFunction& u) {
    // (A psi, psi) in the paper's pairing = inner_product(A u, u).
    return inner_product(op_u, u);
}

double position_moment(const WaveFunction& u, double power) {
    double acc = 0.0;
    for (int i = 0; i < u.grid.n_points; ++i)
        acc += std::pow(u.grid.node(i), power) * std::norm(u.values[i]);
    acc *= u.grid.spacing;
    const double m = u.mass();
    return m > 0.0 ? acc / m : 0.0;
}

void write_wavefunction(std::ostream& os, const WaveFunction& u) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "# radial-grid n=%d rmax=%.17g\n", u.grid.n_points, u.grid.r_max);
    os << buf;
    for (int i = 0; i < u.grid.n_points; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", u.grid.node(i),
                      u.values[i].real(), u.values[i].imag());
        os << buf;
    }
}

WaveFunction read_wavefunction(std::istream& is) {
    std::string header;
    std::getline(is, header);
    int n = 0;
    double rmax = 0.0;
    if (std::sscanf(header.c_str(), "# radial-grid n=%d rmax=%lg", &n, &rmax) != 2)
        throw std::runtime_error("read_wavefunction: bad header: " + header);
    RadialGrid g = make_grid(n, rmax);
    CVector v(n);
    for (int i = 0; i < n; ++i) {
        double r, re, im;
        if (!(is >> r >> re >> im))
            throw std::runtime_error("read_wavefunction: truncated data");
        v[i] = Complex(re, im);
    }
    return WaveFunction(g, std::move(v));
}

void save_wavefunction(const std::string& path, const WaveFunction& u) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_wavefunction: cannot open " + path);
    write_wavefunction(os, u);
}

WaveFunction load_wavefunction(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_wavefunction: cannot open " + path);
    return read_wavefunction(is);
}

}  // namespace scatlab
