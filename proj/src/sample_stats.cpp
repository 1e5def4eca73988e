#include "growthsde/sample_stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace growthsde::core {

Moments sample_moments(const std::vector<double>& sample) {
    if (sample.empty()) throw std::invalid_argument("sample_moments: empty sample");
    const double n = static_cast<double>(sample.size());
    double m = 0.0;
    for (double v : sample) m += v;
    m /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : sample) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    Moments out;
    out.mean = m;
    out.variance = m2 * n / (n - 1.0);
    out.skewness = m3 / std::pow(m2, 1.5);
    out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    out.n = sample.size();
    return out;
}

double sample_mean(const std::vector<double>& sample) {
    double m = 0.0;
    for (double v : sample) m += v;
    return m / static_cast<double>(sample.size());
}

double sample_variance(const std::vector<double>& sample) {
    return sample_moments(sample).variance;
}

double sample_median(std::vector<double> sample) {
    if (sample.empty()) throw std::invalid_argument("sample_median: empty sample");
    const std::size_t k = (sample.size() + 1) / 2;  // ceil(n/2), 1-based
    std::nth_element(sample.begin(), sample.begin() + (k - 1), sample.end());
    return sample[k - 1];
}

double ks_distance_cdf(const std::vector<double>& sample,
                       const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::vector<double> s(sample);
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double F = cdf(s[i]);
        d = std::max(d, std::fabs(F - static_cast<double>(i + 1) / n));
        d = std::max(d, std::fabs(F - static_cast<double>(i) / n));
    }
    return d;
}

double ks_distance(const std::vector<double>& sample, const AnalyticLaw& law) {
    return ks_distance_cdf(sample, [&law](double x) { return law.cdf(x); });
}

}  // namespace growthsde::core
