#include "growthsde/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace growthsde::core {

DensityCurve::DensityCurve(std::vector<double> xs, std::vector<double> fs)
    : x(std::move(xs)), f(std::move(fs)) {
    if (x.size() != f.size() || x.size() < 2)
        throw std::invalid_argument("DensityCurve: mismatched or short grids");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw std::invalid_argument("DensityCurve: x grid must increase");
}

double DensityCurve::trapezoid_mass() const {
    double m = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        m += 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
    return m;
}

void DensityCurve::normalize(double target) {
    const double m = trapezoid_mass();
    if (!(m > 0.0)) throw std::runtime_error("DensityCurve: zero mass");
    const double s = target / m;
    for (double& v : f) v *= s;
}

double DensityCurve::value_at(double xq) const {
    if (xq < x.front() || xq > x.back()) return 0.0;
    auto it = std::upper_bound(x.begin(), x.end(), xq);
    if (it == x.begin()) return f.front();
    if (it == x.end()) return f.back();
    const std::size_t i = static_cast<std::size_t>(it - x.begin());
    const double w = (xq - x[i - 1]) / (x[i] - x[i - 1]);
    return f[i - 1] + w * (f[i] - f[i - 1]);
}

double DensityCurve::cdf_at(double xq) const {
    if (xq <= x.front()) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (xq < x[i]) {
            const double fq = value_at(xq);
            return acc + 0.5 * (f[i - 1] + fq) * (xq - x[i - 1]);
        }
        acc += 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
    }
    return acc;
}

double DensityCurve::sup_distance(const DensityCurve& other) const {
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        d = std::max(d, std::fabs(f[i] - other.value_at(x[i])));
    return d;
}

DensityCurve tabulate_law(const AnalyticLaw& law, double lo, double hi,
                          std::size_t n_points) {
    std::vector<double> xs(n_points), fs(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        xs[i] = lo + (hi - lo) * static_cast<double>(i) /
                         static_cast<double>(n_points - 1);
        fs[i] = law.pdf(xs[i]);
    }
    return DensityCurve(std::move(xs), std::move(fs));
}

DensityCurve histogram_density(const std::vector<double>& sample, double lo,
                               double hi, std::size_t n_bins) {
    if (sample.empty()) throw std::invalid_argument("histogram: empty sample");
    std::vector<std::size_t> counts(n_bins, 0);
    const double w = (hi - lo) / static_cast<double>(n_bins);
    std::size_t inside = 0;
    for (double v : sample) {
        if (v < lo || v >= hi) continue;
        ++counts[static_cast<std::size_t>((v - lo) / w)];
        ++inside;
    }
    std::vector<double> xs(n_bins), fs(n_bins);
    for (std::size_t i = 0; i < n_bins; ++i) {
        xs[i] = lo + w * (static_cast<double>(i) + 0.5);
        fs[i] = static_cast<double>(counts[i]) /
                (static_cast<double>(sample.size()) * w);
    }
    (void)inside;
    return DensityCurve(std::move(xs), std::move(fs));
}

}  // namespace growthsde::core
