#pragma once

#include <functional>

namespace growthsde::quad {

// Adaptive Simpson on [a,b] with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol = 1e-10, int max_depth = 50);

// Integral over the whole real line via tanh substitution x = c + s*sinh(u).
double integrate_real_line(const std::function<double(double)>& f,
                           double center = 0.0, double scale = 1.0,
                           double abs_tol = 1e-10);

// Integral over (0, inf) via x = exp(u) substitution.
double integrate_half_line(const std::function<double(double)>& f,
                           double abs_tol = 1e-10);

// Composite Simpson with n panels (n even) -- fixed-cost workhorse.
double simpson(const std::function<double(double)>& f, double a, double b,
               int n);

}  // namespace growthsde::quad
