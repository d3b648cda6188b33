#include "scatlab/cutoff.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace scatlab {

namespace smooth_step {

namespace {

// bump b(x) = exp(-1/(x(1-x))) on (0,1), 0 elsewhere; derivatives via
// phi = 1/(x - x^2): b = e^{-phi}, b' = -phi' b, etc.
double bump(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return std::exp(-1.0 / (x * (1.0 - x)));
}

void phi_derivs(double x, double& p1, double& p2, double& p3) {
    const double w = x - x * x;
    const double w1 = 1.0 - 2.0 * x;  // w', w'' = -2, w''' = 0
    const double iw = 1.0 / w;
    p1 = -w1 * iw * iw;
    p2 = 2.0 * w1 * w1 * iw * iw * iw + 2.0 * iw * iw;
    p3 = -6.0 * w1 * w1 * w1 * iw * iw * iw * iw - 12.0 * w1 * iw * iw * iw;
}

double bump_d1(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    double p1, p2, p3;
    phi_derivs(x, p1, p2, p3);
    return -p1 * bump(x);
}

double bump_d2(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    double p1, p2, p3;
    phi_derivs(x, p1, p2, p3);
    return (p1 * p1 - p2) * bump(x);
}

struct StepTable {
    static constexpr int kCells = 8192;
    std::array<double, kCells + 1> cumulative{};
    double total = 0.0;

    StepTable() {
        // Simpson on each cell with 8 panels; the bump is smooth with all
        // derivatives zero at the ends, so this is effectively exact.
        const double h = 1.0 / kCells;
        cumulative[0] = 0.0;
        for (int i = 0; i < kCells; ++i) {
            const double a = i * h;
            const int panels = 8;
            const double dh = h / panels;
            double s = 0.0;
            for (int p = 0; p < panels; ++p) {
                const double x0 = a + p * dh;
                s += dh / 6.0 * (bump(x0) + 4.0 * bump(x0 + 0.5 * dh) + bump(x0 + dh));
            }
            cumulative[i + 1] = cumulative[i] + s;
        }
        total = cumulative[kCells];
    }
};

const StepTable& table() {
    static StepTable t;
    return t;
}

}  // namespace

double value(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const auto& t = table();
    const double pos = x * StepTable::kCells;
    int cell = static_cast<int>(pos);
    if (cell >= StepTable::kCells) cell = StepTable::kCells - 1;
    const double h = 1.0 / StepTable::kCells;
    const double x0 = cell * h;
    const double s = (x - x0) / h;
    // cubic Hermite with exact derivatives (the bump itself) at cell ends
    const double y0 = t.cumulative[cell], y1 = t.cumulative[cell + 1];
    const double m0 = bump(x0) * h, m1 = bump(x0 + h) * h;
    const double s2 = s * s, s3 = s2 * s;
    const double v = (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 +
                     (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * m1;
    return v / t.total;
}

double deriv(double x) { return bump(x) / table().total; }
double deriv2(double x) { return bump_d1(x) / table().total; }
double deriv3(double x) { return bump_d2(x) / table().total; }

}  // namespace smooth_step

SmoothCutoff::SmoothCutoff(Interval omega, double eps) : omega_(omega), eps_(eps) {}

double SmoothCutoff::value(double l) const {
    double v = 1.0;
    if (omega_.bounded_below()) v *= smooth_step::value((l - omega_.lo) / eps_);
    if (omega_.bounded_above()) v *= smooth_step::value((omega_.hi - l) / eps_);
    return v;
}

double SmoothCutoff::deriv(double l) const {
    const bool lo = omega_.bounded_below(), hi = omega_.bounded_above();
    const double ie = 1.0 / eps_;
    if (lo && hi) {
        const double a = (l - omega_.lo) * ie, b = (omega_.hi - l) * ie;
        return smooth_step::deriv(a) * ie * smooth_step::value(b) -
               smooth_step::value(a) * smooth_step::deriv(b) * ie;
    }
    if (lo) return smooth_step::deriv((l - omega_.lo) * ie) * ie;
    if (hi) return -smooth_step::deriv((omega_.hi - l) * ie) * ie;
    return 0.0;
}

double SmoothCutoff::deriv2(double l) const {
    const bool lo = omega_.bounded_below(), hi = omega_.bounded_above();
    const double ie = 1.0 / eps_;
    if (lo && hi) {
        const double a = (l - omega_.lo) * ie, b = (omega_.hi - l) * ie;
        const double va = smooth_step::value(a), vb = smooth_step::value(b);
        const double da = smooth_step::deriv(a) * ie, db = smooth_step::deriv(b) * ie;
        const double d2a = smooth_step::deriv2(a) * ie * ie, d2b = smooth_step::deriv2(b) * ie * ie;
        return d2a * vb - 2.0 * da * db + va * d2b;
    }
    if (lo) return smooth_step::deriv2((l - omega_.lo) * ie) * ie * ie;
    if (hi) return smooth_step::deriv2((omega_.hi - l) * ie) * ie * ie;
    return 0.0;
}

double SmoothCutoff::deriv3(double l) const {
    const bool lo = omega_.bounded_below(), hi = omega_.bounded_above();
    const double ie = 1.0 / eps_;
    if (lo && hi) {
        const double a = (l - omega_.lo) * ie, b = (omega_.hi - l) * ie;
        const double va = smooth_step::value(a), vb = smooth_step::value(b);
        const double da = smooth_step::deriv(a) * ie, db = smooth_step::deriv(b) * ie;
        const double d2a = smooth_step::deriv2(a) * ie * ie, d2b = smooth_step::deriv2(b) * ie * ie;
        const double d3a = smooth_step::deriv3(a) * ie * ie * ie, d3b = smooth_step::deriv3(b) * ie * ie * ie;
        return d3a * vb - 3.0 * d2a * db + 3.0 * da * d2b - va * d3b;
    }
    if (lo) return smooth_step::deriv3((l - omega_.lo) * ie) * ie * ie * ie;
    if (hi) return -smooth_step::deriv3((omega_.hi - l) * ie) * ie * ie * ie;
    return 0.0;
}

SmoothCutoff make_cutoff(Interval omega, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("make_cutoff: eps must be positive");
    if (omega.bounded_below() && omega.bounded_above() && !(eps < omega.length() / 2.0))
        throw std::invalid_argument("make_cutoff: eps too large for bounded interval");
    return SmoothCutoff(omega, eps);
}

SmoothCutoff cutoff_geq(double a, double eps) {
    Interval om;
    om.lo = a;
    return make_cutoff(om, eps);
}

SmoothCutoff cutoff_leq(double a, double eps) {
    Interval om;
    om.hi = a;
    return make_cutoff(om, eps);
}

WaveFunction apply_spatial_cutoff(const SmoothCutoff& F, double scale, const WaveFunction& u) {
    if (!(scale > 0.0)) throw std::invalid_argument("apply_spatial_cutoff: scale must be positive");
    CVector v(u.size());
    for (int i = 0; i < u.size(); ++i) v[i] = u.values[i] * F.value(u.grid.node(i) / scale);
    return WaveFunction(u.grid, std::move(v));
}

WaveFunction apply_profile(const WaveFunction& u, const std::function<double(double)>& profile) {
    CVector v(u.size());
    for (int i = 0; i < u.size(); ++i) v[i] = u.values[i] * profile(u.grid.node(i));
    return WaveFunction(u.grid, std::move(v));
}

double BnFunction::moment(int k) const {
    if (k < 1 || k > static_cast<int>(moments.size()))
        throw std::invalid_argument("BnFunction::moment: order not tabulated");
    return moments[k - 1];
}

BnFunction gaussian_bn(double center, double width, int order) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian_bn: width must be positive");
    BnFunction bn;
    bn.order = order;
    const double w = width, c = center;
    bn.f = [c, w](double l) { return std::exp(-(l - c) * (l - c) / (2.0 * w * w)); };
    // d^k/dl^k via physicists' Hermite: f^(k) = (-1/(w sqrt2))^k H_k((l-c)/(w sqrt2)) f
    for (int k = 1; k <= 4; ++k) {
        bn.df[k - 1] = [c, w, k](double l) {
            const double x = (l - c) / (w * M_SQRT2);
            const double scale = std::pow(-1.0 / (w * M_SQRT2), k);
            return scale * std::hermite(static_cast<unsigned>(k), x) *
                   std::exp(-x * x);
        };
    }
    // f(l) = int fhat(s) e^{i l s} ds  =>  fhat(s) = (w/sqrt(2 pi)) e^{-w^2 s^2/2} e^{-i c s}
    const double amp = w / std::sqrt(2.0 * M_PI);
    bn.fhat = [amp, w, c](double s) {
        return amp * std::exp(-w * w * s * s / 2.0) * std::exp(Complex(0.0, -c * s));
    };
    bn.fhat_halfwidth = 12.0 / w;
    // moments by Simpson quadrature on [0, S], doubled (|fhat| is even)
    bn.moments.resize(order);
    const int npts = 40001;
    const double S = bn.fhat_halfwidth, h = S / (npts - 1);
    for (int k = 1; k <= order; ++k) {
        double acc = 0.0;
        for (int i = 0; i < npts; ++i) {
            const double s = i * h;
            const double g = amp * std::exp(-w * w * s * s / 2.0) * std::pow(s, k);
            const double wgt = (i == 0 || i == npts - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            acc += wgt * g;
        }
        bn.moments[k - 1] = 2.0 * acc * h / 3.0;
    }
    return bn;
}

}  // namespace scatlab
