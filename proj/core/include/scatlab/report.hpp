#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace scatlab {

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct SeriesColumn {
    std::string name;
    std::vector<double> values;
};

/// Self-describing diagnostic record: parameters, a CSV time-series block,
/// fitted scalars, and a verdict with its measured margin.
struct EstimateReport {
    std::string probe;
    std::map<std::string, double> params;
    std::vector<double> times;
    std::vector<SeriesColumn> series;
    std::map<std::string, double> scalars;
    Verdict verdict = Verdict::Inconclusive;
    double margin = 0.0;
    std::string note;

    const SeriesColumn& column(const std::string& name) const;
    void add_series(const std::string& name, std::vector<double> values);
    void write(std::ostream& os) const;
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
};

SlopeFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);
/// Least squares on (log x, log y); non-positive entries are skipped.
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

double series_median(std::vector<double> v);
double series_mean(const std::vector<double>& v);
double series_stderr(const std::vector<double>& v);  // std error of the mean

/// Trapezoid integral of y dt over the sampled times.
double integrate_series(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace scatlab
