#pragma once

#include <string>
#include <vector>

namespace growthsde::core {

enum class LawFamily {
    normal,             // {mean, variance}
    lognormal,          // {mean of ln X, variance of ln X}
    gamma,              // {shape k, rate r}
    generalized_gamma,  // {shape d, scale a, power p}: ~ x^{d-1} e^{-(x/a)^p}
    inverse_gamma,      // {shape k, scale s}: ~ x^{-k-1} e^{-s/x}
    log_gamma,          // {shape k, rate r}: law of ln X with X ~ gamma(k,r)
    degenerate,         // {c}
};

// Tagged parametric distribution with pdf/cdf/moment evaluators.
struct AnalyticLaw {
    LawFamily family = LawFamily::degenerate;
    std::vector<double> params{0.0};

    static AnalyticLaw normal(double mean, double variance);
    static AnalyticLaw lognormal(double log_mean, double log_variance);
    static AnalyticLaw gamma(double shape, double rate);
    static AnalyticLaw generalized_gamma(double shape, double scale, double power);
    static AnalyticLaw inverse_gamma(double shape, double scale);
    static AnalyticLaw log_gamma(double shape, double rate);
    static AnalyticLaw degenerate(double c);

    double pdf(double x) const;
    double cdf(double x) const;
    double mean() const;
    double variance() const;
    double median() const;
    // support as [lo, hi] (infinite endpoints allowed)
    std::pair<double, double> support() const;

    // numeric check that the pdf integrates to 1 (throws if off by > tol)
    double normalization(double tol = 1e-8) const;

    std::string name() const;
    std::string describe() const;
};

}  // namespace growthsde::core
