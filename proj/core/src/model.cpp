#include "scatlab/model.hpp"

#include <cmath>
#include <stdexcept>

namespace scatlab {

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::Free: return "free";
        case ModelKind::StaticPotential: return "static_potential";
        case ModelKind::TimeDependentPotential: return "time_dependent_potential";
        case ModelKind::DefocusingPowerPlusPotential: return "defocusing_power";
        case ModelKind::Saturated: return "saturated";
    }
    return "?";
}

EquationModel make_free() {
    EquationModel m;
    m.kind = ModelKind::Free;
    return m;
}

EquationModel make_static_potential(std::function<double(double)> V) {
    if (!V) throw std::invalid_argument("make_static_potential: missing potential");
    EquationModel m;
    m.kind = ModelKind::StaticPotential;
    m.potential = std::move(V);
    return m;
}

EquationModel make_time_dependent(std::function<double(double, double)> V, double C, double q) {
    if (!V) throw std::invalid_argument("make_time_dependent: missing potential");
    if (!(C > 0.0) || !(q > 0.0))
        throw std::invalid_argument("make_time_dependent: envelope C and decay q must be positive");
    EquationModel m;
    m.kind = ModelKind::TimeDependentPotential;
    m.potential_t = std::move(V);
    m.envelope_C = C;
    m.decay_q = q;
    // sampled envelope check over a (t, r) lattice
    for (int it = 0; it <= 20; ++it) {
        const double t = 0.5 * it;
        for (int ir = 1; ir <= 200; ++ir) {
            const double r = 0.5 * ir;
            if (std::abs(m.potential_t(t, r)) > C * std::pow(1.0 + r, -q) * (1.0 + 1e-9))
                throw std::invalid_argument("make_time_dependent: |V(t,r)| exceeds the declared envelope");
        }
    }
    return m;
}

EquationModel make_defocusing(double p, std::function<double(double)> V) {
    if (!(p > 7.0 / 3.0 && p < 5.0))
        throw std::invalid_argument("make_defocusing: p must lie in (7/3, 5)");
    EquationModel m;
    m.kind = ModelKind::DefocusingPowerPlusPotential;
    m.power_p = p;
    m.potential = std::move(V);
    return m;
}

EquationModel make_saturated(double mm, double nn) {
    if (!(mm > 7.0 / 3.0))
        throw std::invalid_argument("make_saturated: m must exceed 7/3");
    if (!(nn > 1.0 && nn < 7.0 / 3.0))
        throw std::invalid_argument("make_saturated: n must lie in (1, 7/3)");
    EquationModel m;
    m.kind = ModelKind::Saturated;
    m.sat_m = mm;
    m.sat_n = nn;
    return m;
}

double interaction_multiplier(const EquationModel& model, double r, double t, double a) {
    switch (model.kind) {
        case ModelKind::Free:
            return 0.0;
        case ModelKind::StaticPotential:
            return model.potential(r);
        case ModelKind::TimeDependentPotential:
            return model.potential_t(t, r);
        case ModelKind::DefocusingPowerPlusPotential:
            return std::pow(a, model.power_p - 1.0) + (model.potential ? model.potential(r) : 0.0);
        case ModelKind::Saturated:
            return -std::pow(a, model.sat_m - 1.0) / (1.0 + std::pow(a, model.sat_m - model.sat_n));
    }
    return 0.0;
}

WaveFunction nonlinearity_eval(const EquationModel& model, const WaveFunction& u, double t) {
    CVector v(u.size());
    for (int i = 0; i < u.size(); ++i) {
        const double r = u.grid.node(i);
        const double a = std::abs(u.values[i]) / r;  // |psi|
        v[i] = interaction_multiplier(model, r, t, a) * u.values[i];
    }
    v[u.size() - 1] = 0.0;
    return WaveFunction(u.grid, std::move(v));
}

double interaction_energy_density(const EquationModel& model, double r, double t, double a) {
    switch (model.kind) {
        case ModelKind::Free:
            return 0.0;
        case ModelKind::StaticPotential:
            return model.potential(r) * a * a;
        case ModelKind::TimeDependentPotential:
            return model.potential_t(t, r) * a * a;
        case ModelKind::DefocusingPowerPlusPotential: {
            const double vpart = model.potential ? model.potential(r) * a * a : 0.0;
            return 2.0 * std::pow(a, model.power_p + 1.0) / (model.power_p + 1.0) + vpart;
        }
        case ModelKind::Saturated: {
            // g(a) = int_0^a 2 s W(s) ds, 24-node Gauss-Legendre
            static const double gx[] = {0.0323801709628694, 0.0970046992094627, 0.1612223560688917,
                                        0.2247637903946891, 0.2873624873554556, 0.3487558862921608,
                                        0.4086864819907167, 0.4669029047509584, 0.5231609747222330,
                                        0.5772247260839727, 0.6288673967765136, 0.6778723796326639,
                                        0.7240341309238146, 0.7671590325157404, 0.8070662040294426,
                                        0.8435882616243935, 0.8765720202742479, 0.9058791367155696,
                                        0.9313866907065543, 0.9529877031604309, 0.9705915925462473,
                                        0.9841245837228269, 0.9935301722663508, 0.9987710072524261};
            static const double gw[] = {0.0647376968126839, 0.0644661644359501, 0.0639242385846482,
                                        0.0631141922862540, 0.0620394231598927, 0.0607044391658939,
                                        0.0591148396983956, 0.0572772921004032, 0.0551995036999842,
                                        0.0528901894851937, 0.0503590355538545, 0.0476166584924905,
                                        0.0446745608566943, 0.0415450829434647, 0.0382413510658307,
                                        0.0347772225647704, 0.0311672278327981, 0.0274265097083569,
                                        0.0235707608393244, 0.0196161604573555, 0.0155793157229438,
                                        0.0114772345792345, 0.0073275539012763, 0.0031533460523058};
            double acc = 0.0;
            const double half = 0.5 * a;
            for (int i = 0; i < 24; ++i) {
                for (double sgn : {-1.0, 1.0}) {
                    const double s = half + sgn * half * gx[i];
                    acc += gw[i] * half * 2.0 * s * interaction_multiplier(model, r, t, s);
                }
            }
            return acc;
        }
    }
    return 0.0;
}

}  // namespace scatlab
