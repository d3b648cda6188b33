#include "scatlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace scatlab {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

const SeriesColumn& EstimateReport::column(const std::string& name) const {
    for (const auto& c : series)
        if (c.name == name) return c;
    throw std::out_of_range("EstimateReport: no series column named " + name);
}

void EstimateReport::add_series(const std::string& name, std::vector<double> values) {
    series.push_back({name, std::move(values)});
}

void EstimateReport::write(std::ostream& os) const {
    char buf[160];
    os << "probe " << probe << "\n";
    for (const auto& [k, v] : params) {
        std::snprintf(buf, sizeof buf, "param %s %.17g\n", k.c_str(), v);
        os << buf;
    }
    for (const auto& [k, v] : scalars) {
        std::snprintf(buf, sizeof buf, "scalar %s %.17g\n", k.c_str(), v);
        os << buf;
    }
    os << "verdict " << to_string(verdict) << "\n";
    std::snprintf(buf, sizeof buf, "margin %.17g\n", margin);
    os << buf;
    if (!note.empty()) os << "note " << note << "\n";
    os << "csv t";
    for (const auto& c : series) os << "," << c.name;
    os << "\n";
    for (size_t i = 0; i < times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", times[i]);
        os << buf;
        for (const auto& c : series) {
            std::snprintf(buf, sizeof buf, ",%.17g", i < c.values.size() ? c.values[i] : 0.0);
            os << buf;
        }
        os << "\n";
    }
}

SlopeFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = std::min(x.size(), y.size());
    if (n < 2) throw std::invalid_argument("fit_linear: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    SlopeFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0;
    for (size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        ss += r * r;
    }
    if (n > 2) f.stderr_slope = std::sqrt(ss / (n - 2) * n / denom);
    return f;
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (x[i] > 0 && y[i] > 0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    return fit_linear(lx, ly);
}

double series_median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double series_mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0;
    for (double a : v) s += a;
    return s / v.size();
}

double series_stderr(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = series_mean(v);
    double ss = 0;
    for (double a : v) ss += (a - m) * (a - m);
    return std::sqrt(ss / (v.size() - 1) / v.size());
}

double integrate_series(const std::vector<double>& t, const std::vector<double>& y) {
    double acc = 0.0;
    for (size_t i = 1; i < std::min(t.size(), y.size()); ++i)
        acc += 0.5 * (y[i] + y[i - 1]) * (t[i] - t[i - 1]);
    return acc;
}

}  // namespace scatlab
