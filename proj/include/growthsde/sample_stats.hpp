#pragma once

#include <functional>
#include <vector>

#include "growthsde/law.hpp"

namespace growthsde::core {

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    std::size_t n = 0;
};

Moments sample_moments(const std::vector<double>& sample);

double sample_mean(const std::vector<double>& sample);
double sample_variance(const std::vector<double>& sample);

// empirical median with the inf convention: order statistic at ceil(n/2)
double sample_median(std::vector<double> sample);

// sup distance between the empirical cdf of the sample and the law cdf
double ks_distance(const std::vector<double>& sample, const AnalyticLaw& law);

// two-sided KS against an arbitrary cdf evaluator
double ks_distance_cdf(const std::vector<double>& sample,
                       const std::function<double(double)>& cdf);

}  // namespace growthsde::core
