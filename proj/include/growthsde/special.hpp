#pragma once

namespace growthsde::special {

// Standard normal pdf/cdf and inverse cdf.
double normal_pdf(double z);
double normal_cdf(double z);
double normal_quantile(double p);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

}  // namespace growthsde::special
