#pragma once

#include <functional>

#include "growthsde/core.hpp"

namespace growthsde::gompertz {

struct GompertzParams {
    double alpha;        // dimensionless relaxation rate, must be > 0
    double diffusion_d;  // Wiener diffusion D (E[W^2] = 2 D t)

    GompertzParams(double a, double d);
};

// Deterministic rate alpha(t) for the parametric equation, with an optional
// exact antiderivative A(t) = int_0^t alpha(u) du to bypass quadrature.
struct RateFunction {
    std::function<double(double)> alpha_t;
    std::function<double(double)> antiderivative;  // optional

    // int_s^t alpha(u) du
    double integral(double s, double t) const;
    // check the supplied antiderivative against quadrature at probe times
    void validate(double t_max) const;
};

// x(t) = x0^{e^{-alpha t}} e^{(1 - e^{-alpha t})/alpha}
double deterministic_path(const GompertzParams& p, double x0, double t);

// Exact pathwise solution
//   X(t) = X0^{e^{-at}} e^{(1-D)(1-e^{-at})/a} exp(int_0^t e^{-a(t-u)} dW(u)),
// stochastic integral by left-point sums on the grid.
core::PathEnsemble exact_paths(const GompertzParams& p, double x0,
                               const core::TimeGrid& grid, uint64_t seed,
                               std::size_t n_paths);

// Lognormal transition law of X(t) given X(s) = y.
core::AnalyticLaw transition_law(const GompertzParams& p, double y, double s,
                                 double t);

struct MeanCov {
    double mean;  // E[Y(t)]
    double cov;   // Cov(Y(t), Y(t2))
};

// Mean/covariance of the parametric OU process dY = -alpha(t) Y dt + dW
// started at time s from Normal(y0, sigma0_sq).
MeanCov parametric_ou_moments(const RateFunction& rate, double y0,
                              double sigma0_sq, double s, double t, double t2,
                              double diffusion_d);

// Lognormal transition of the parametric Gompertz process X = e^Y.
core::AnalyticLaw parametric_transition(const RateFunction& rate, double y,
                                        double s, double t, double diffusion_d);

}  // namespace growthsde::gompertz
