#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "growthsde/field.hpp"
#include "growthsde/law.hpp"

namespace growthsde::stats {

// Quantile function Q(p) = inf{x : p <= F(x)} built from an analytic law,
// an empirical sample, or an explicit discrete distribution.
class QuantileFunction {
  public:
    static QuantileFunction from_law(const core::AnalyticLaw& law);
    static QuantileFunction from_sample(std::vector<double> sample);
    static QuantileFunction from_discrete(std::vector<double> values,
                                          std::vector<double> probs);

    double operator()(double p) const;
    double cdf(double x) const;

  private:
    std::function<double(double)> q_;
    std::function<double(double)> cdf_;
};

struct MedianResult {
    double point = 0.0;                 // inf-convention median
    std::pair<double, double> segment;  // median segment [left, right]
};

MedianResult median(const core::AnalyticLaw& law);
MedianResult median(const std::vector<double>& sample);
MedianResult median_discrete(const std::vector<double>& values,
                             const std::vector<double>& probs);

// |MED[X] - a| <= (2 E|X - a|^p)^{1/p} on an empirical sample
bool median_bound_check(const std::vector<double>& sample, double a,
                        double p_order);

// transport a median through a monotone map (rejects non-monotone T)
MedianResult monotone_median_transport(const std::function<double(double)>& T,
                                       const MedianResult& med,
                                       double probe_lo, double probe_hi);

struct PdfEstimate {
    double value;
    double mc_stderr;
};

// Appendix-style semi-explicit transition pdf for a time-independent field:
// prefactor from the drift potential times the bridge expectation
// E[e^{(t-s) Z}], Z = Simpson integral of beta(Wbar + hbar) over [0,1].
PdfEstimate semi_explicit_pdf_general(const core::CoefficientField& field,
                                      double diffusion_d, double x, double t,
                                      double y, double s,
                                      std::size_t n_bridges, uint64_t seed);

}  // namespace growthsde::stats
