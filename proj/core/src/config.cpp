#include "scatlab/config.hpp"

#include "scatlab/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scatlab {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& s, const std::string& key) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw std::invalid_argument("config: bad numeric value for " + key + ": '" + s + "'");
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double ProbeSpec::arg(const std::string& key, double fallback) const {
    auto it = args.find(key);
    return it == args.end() ? fallback : to_double(it->second, name + "." + key);
}

std::string ProbeSpec::arg_str(const std::string& key, const std::string& fallback) const {
    auto it = args.find(key);
    return it == args.end() ? fallback : it->second;
}

std::vector<double> ProbeSpec::arg_list(const std::string& key,
                                        const std::vector<double>& fallback) const {
    auto it = args.find(key);
    if (it == args.end()) return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!trim(tok).empty()) out.push_back(to_double(trim(tok), key));
    return out;
}

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    cfg.probes.clear();
    std::stringstream ss(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config: malformed section at line " + std::to_string(lineno));
            section = line.substr(1, line.size() - 2);
            if (section != "grid" && section != "model" && section != "initial" &&
                section != "run" && section != "observers")
                throw std::invalid_argument("config: unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (section == "grid") {
            if (key == "n") cfg.grid_n = static_cast<int>(to_double(val, key));
            else if (key == "rmax") cfg.grid_rmax = to_double(val, key);
            else throw std::invalid_argument("config: unknown key '" + key + "' in [grid]");
        } else if (section == "model") {
            if (key == "kind") cfg.model_kind = val;
            else if (key == "p") cfg.power_p = to_double(val, key);
            else if (key == "m") cfg.sat_m = to_double(val, key);
            else if (key == "n") cfg.sat_n = to_double(val, key);
            else if (key == "potential") cfg.potential = val;
            else if (key == "envelope_c") cfg.envelope_C = to_double(val, key);
            else if (key == "decay_q") cfg.decay_q = to_double(val, key);
            else throw std::invalid_argument("config: unknown key '" + key + "' in [model]");
        } else if (section == "initial") {
            if (key == "preset") cfg.preset = val;
            else if (key == "r0") cfg.r0 = to_double(val, key);
            else if (key == "width") cfg.width = to_double(val, key);
            else if (key == "k") cfg.wavenumber = to_double(val, key);
            else if (key == "mass") cfg.mass = to_double(val, key);
            else if (key == "weight_bound") cfg.weight_bound = to_double(val, key);
            else if (key == "weight_packet") cfg.weight_packet = to_double(val, key);
            else if (key == "window_eta") cfg.window_eta = to_double(val, key);
            else if (key == "window_cap") cfg.window_cap = to_double(val, key);
            else throw std::invalid_argument("config: unknown key '" + key + "' in [initial]");
        } else if (section == "run") {
            if (key == "t0") cfg.t0 = to_double(val, key);
            else if (key == "t1") cfg.t1 = to_double(val, key);
            else if (key == "dt") cfg.dt = to_double(val, key);
            else if (key == "cadence") cfg.cadence = to_double(val, key);
            else if (key == "snapshots") cfg.snapshots = val;
            else if (key == "absorber") cfg.absorber = (val == "on" || val == "true" || val == "1");
            else if (key == "absorber_strength") cfg.absorber_strength = to_double(val, key);
            else if (key == "dir") cfg.out_dir = val;
            else throw std::invalid_argument("config: unknown key '" + key + "' in [run]");
        } else if (section == "observers") {
            if (key != "probe")
                throw std::invalid_argument("config: only 'probe' entries belong in [observers]");
            std::stringstream ps(val);
            ProbeSpec spec;
            ps >> spec.name;
            std::string tok;
            while (ps >> tok) {
                const auto e = tok.find('=');
                if (e == std::string::npos)
                    throw std::invalid_argument("config: probe argument '" + tok + "' is not key=value");
                spec.args[tok.substr(0, e)] = tok.substr(e + 1);
            }
            if (spec.name.empty())
                throw std::invalid_argument("config: empty probe entry");
            cfg.probes.push_back(std::move(spec));
        } else {
            throw std::invalid_argument("config: key outside any section at line " + std::to_string(lineno));
        }
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream buf;
    buf << is.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& cfg) {
    std::ostringstream os;
    os << "[grid]\n";
    os << "n = " << cfg.grid_n << "\n";
    os << "rmax = " << fmt(cfg.grid_rmax) << "\n";
    os << "[model]\n";
    os << "kind = " << cfg.model_kind << "\n";
    os << "p = " << fmt(cfg.power_p) << "\n";
    os << "m = " << fmt(cfg.sat_m) << "\n";
    os << "n = " << fmt(cfg.sat_n) << "\n";
    os << "potential = " << cfg.potential << "\n";
    os << "envelope_c = " << fmt(cfg.envelope_C) << "\n";
    os << "decay_q = " << fmt(cfg.decay_q) << "\n";
    os << "[initial]\n";
    os << "preset = " << cfg.preset << "\n";
    os << "r0 = " << fmt(cfg.r0) << "\n";
    os << "width = " << fmt(cfg.width) << "\n";
    os << "k = " << fmt(cfg.wavenumber) << "\n";
    os << "mass = " << fmt(cfg.mass) << "\n";
    os << "weight_bound = " << fmt(cfg.weight_bound) << "\n";
    os << "weight_packet = " << fmt(cfg.weight_packet) << "\n";
    os << "window_eta = " << fmt(cfg.window_eta) << "\n";
    os << "window_cap = " << fmt(cfg.window_cap) << "\n";
    os << "[run]\n";
    os << "t0 = " << fmt(cfg.t0) << "\n";
    os << "t1 = " << fmt(cfg.t1) << "\n";
    os << "dt = " << fmt(cfg.dt) << "\n";
    os << "cadence = " << fmt(cfg.cadence) << "\n";
    os << "snapshots = " << cfg.snapshots << "\n";
    os << "absorber = " << (cfg.absorber ? "on" : "off") << "\n";
    os << "absorber_strength = " << fmt(cfg.absorber_strength) << "\n";
    os << "dir = " << cfg.out_dir << "\n";
    os << "[observers]\n";
    for (const auto& p : cfg.probes) {
        os << "probe = " << p.name;
        for (const auto& [k, v] : p.args) os << " " << k << "=" << v;
        os << "\n";
    }
    return os.str();
}

std::function<double(double)> parse_potential(const std::string& spec) {
    if (spec == "none" || spec.empty()) return {};
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    std::vector<double> ps;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string tok;
        while (std::getline(ss, tok, ',')) ps.push_back(to_double(trim(tok), "potential"));
    }
    auto need = [&](size_t n) {
        if (ps.size() != n)
            throw std::invalid_argument("config: potential '" + spec + "' needs " +
                                        std::to_string(n) + " parameters");
    };
    if (kind == "exp_well") {
        need(2);
        const double D = ps[0], a = ps[1];
        return [D, a](double r) { return -D * std::exp(-a * r); };
    }
    if (kind == "gauss_well") {
        need(2);
        const double D = ps[0], w = ps[1];
        return [D, w](double r) { return -D * std::exp(-(r / w) * (r / w)); };
    }
    if (kind == "inv_square") {
        need(1);
        const double A = ps[0];
        return [A](double r) { return A / (1.0 + r * r); };
    }
    throw std::invalid_argument("config: unknown potential '" + spec + "'");
}

RadialGrid config_grid(const ScenarioConfig& cfg) {
    return make_grid(cfg.grid_n, cfg.grid_rmax);
}

EquationModel config_model(const ScenarioConfig& cfg) {
    auto V = parse_potential(cfg.potential);
    if (cfg.model_kind == "free") {
        if (V) throw std::invalid_argument("config: the free model takes no potential");
        return make_free();
    }
    if (cfg.model_kind == "static_potential") {
        if (!V) throw std::invalid_argument("config: static_potential needs a potential");
        return make_static_potential(V);
    }
    if (cfg.model_kind == "time_dependent_potential") {
        if (!V) throw std::invalid_argument("config: time_dependent_potential needs a potential");
        const double omega = 1.0;
        auto Vt = [V, omega](double t, double r) { return V(r) * 0.5 * (1.0 + std::cos(omega * t)); };
        return make_time_dependent(Vt, cfg.envelope_C, cfg.decay_q);
    }
    if (cfg.model_kind == "defocusing_power") return make_defocusing(cfg.power_p, V);
    if (cfg.model_kind == "saturated") return make_saturated(cfg.sat_m, cfg.sat_n);
    throw std::invalid_argument("config: unknown model kind '" + cfg.model_kind + "'");
}

namespace {

WaveFunction packet(const RadialGrid& grid, double r0, double width, double k, double mass) {
    WaveFunction u = WaveFunction::sample(grid, [&](double r) {
        const double env = r * std::exp(-(r - r0) * (r - r0) / (2.0 * width * width));
        return env * std::exp(Complex(0.0, k * r));
    });
    u.values *= std::sqrt(mass) / u.norm();
    return u;
}

}  // namespace

WaveFunction config_initial_data(const ScenarioConfig& cfg, const RadialGrid& grid,
                                 const EquationModel& model,
                                 std::map<std::string, double>& metadata) {
    WaveFunction u;
    if (cfg.preset == "gaussian") {
        u = packet(grid, cfg.r0, cfg.width, 0.0, cfg.mass);
    } else if (cfg.preset == "outgoing_packet") {
        u = packet(grid, cfg.r0, cfg.width, cfg.wavenumber, cfg.mass);
    } else if (cfg.preset == "bound_state") {
        if (!model.potential)
            throw std::invalid_argument("config: bound_state preset needs a potential");
        auto es = eigenstates_linear(model.potential, 1, grid);
        if (es.states.empty()) throw std::invalid_argument("config: potential has no bound state");
        u = es.states.front().state;
        u.values *= std::sqrt(cfg.mass);
        metadata["bound_energy"] = es.states.front().energy;
    } else if (cfg.preset == "soliton") {
        u = ground_state(model, cfg.mass, grid);
        metadata["soliton_mu"] = stationary_eigenvalue(model, u);
    } else if (cfg.preset == "mixture") {
        if (!model.potential)
            throw std::invalid_argument("config: mixture preset needs a potential");
        auto es = eigenstates_linear(model.potential, 4, grid);
        if (es.states.empty()) throw std::invalid_argument("config: potential has no bound state");
        WaveFunction pk = packet(grid, cfg.r0, cfg.width, cfg.wavenumber, 1.0);
        for (const auto& b : es.states) {
            const Complex a = inner_product(pk, b.state);
            pk.values -= a * b.state.values;
        }
        pk.values /= pk.norm();
        u = WaveFunction::zero(grid);
        u.values = cfg.weight_bound * es.states.front().state.values + cfg.weight_packet * pk.values;
        metadata["bound_energy"] = es.states.front().energy;
        metadata["weight_bound"] = cfg.weight_bound;
        metadata["weight_packet"] = cfg.weight_packet;
    } else {
        throw std::invalid_argument("config: unknown initial preset '" + cfg.preset + "'");
    }
    if (cfg.window_eta > 0.0 && cfg.window_cap > cfg.window_eta) {
        EnergyWindow w{cfg.window_eta, cfg.window_cap, EnergyWindow::Method::Auto};
        u = energy_window(u, w, model.potential ? model.potential : std::function<double(double)>());
        metadata["window_eta"] = cfg.window_eta;
        metadata["window_cap"] = cfg.window_cap;
        metadata["energy_cap"] = cfg.window_cap;
    }
    return u;
}

std::vector<std::string> known_probe_names() {
    return {"heisenberg",     "prob_gamma",        "pres1",
            "gamma_limit",    "weak_localization", "scaling_derivative",
            "maximal_velocity", "regularity",      "morawetz",
            "ap_plus",        "second_microlocal", "virial",
            "exterior_decay", "low_frequency",     "cook"};
}

void validate_probes(const ScenarioConfig& cfg) {
    const auto known = known_probe_names();
    for (const auto& p : cfg.probes)
        if (std::find(known.begin(), known.end(), p.name) == known.end())
            throw std::invalid_argument("config: unknown probe name '" + p.name + "'");
}

}  // namespace scatlab
