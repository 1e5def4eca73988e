#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace growthsde::core {

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;  // (x, t)

// Evaluable drift/diffusion pair (a, b) with optional analytic partials.
// b must be nonzero and of constant sign on the open domain.
struct CoefficientField {
    Fn2 a;
    Fn2 b;
    Fn2 a_x, b_x, b_xx, b_t;  // optional; finite differences otherwise
    double domain_lo = -std::numeric_limits<double>::infinity();
    double domain_hi = std::numeric_limits<double>::infinity();
    bool time_independent = true;
    std::string label;

    // optional closed forms for p(x) = int dx/b and its spatial inverse
    Fn1 p_of_x;
    Fn1 p_inverse;

    double eval_a(double x, double t = 0.0) const { return a(x, t); }
    double eval_b(double x, double t = 0.0) const { return b(x, t); }
    double da_dx(double x, double t = 0.0) const;
    double db_dx(double x, double t = 0.0) const;
    double d2b_dx2(double x, double t = 0.0) const;
    double db_dt(double x, double t = 0.0) const;

    bool has_bounded_domain() const {
        return std::isfinite(domain_lo) || std::isfinite(domain_hi);
    }

    // check provided partials against central differences at probe points
    void validate_partials(const std::vector<double>& probes,
                           double rel_tol = 1e-5) const;
};

// Monotonic change of variables y = h(x,t) with spatial inverse x = g(y,t).
struct TransformMap {
    Fn2 h;
    Fn2 g;
    Fn2 h_x, h_xx, h_t;  // optional

    double dh_dx(double x, double t = 0.0) const;
    double d2h_dx2(double x, double t = 0.0) const;
    double dh_dt(double x, double t = 0.0) const;

    // verify g(h(x,t),t) == x at probe points
    void validate_inverse(const std::vector<double>& probes, double t = 0.0,
                          double abs_tol = 1e-10) const;
};

TransformMap identity_map();

// 257 Chebyshev-spaced probe points on [lo, hi]
std::vector<double> chebyshev_probes(double lo, double hi, std::size_t n = 257);

// Built-in fields (dimensionless forms).
CoefficientField gompertz_field(double alpha);
CoefficientField logistic_field();
CoefficientField theta_logistic_field(double theta);
// stochastic-mechanics field for the n-th QHO stationary state, b = 1
CoefficientField qho_field(int n, double omega, double sigma);

// Parse "gompertz(alpha)", "logistic", "theta-logistic(theta)",
// "qho(n,omega,sigma)".
CoefficientField parse_field(const std::string& spec_text);

}  // namespace growthsde::core
