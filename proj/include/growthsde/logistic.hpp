#pragma once

#include <vector>

#include "growthsde/core.hpp"

namespace growthsde::logistic {

struct ThetaLogisticParams {
    double theta;        // saturation exponent; 1 = plain logistic
    double diffusion_d;

    ThetaLogisticParams(double th, double d);
};

// Zbar(t) and A(t) = X0^theta int_0^t e^{-Zbar} du recorded along one path.
struct AuxIntegralProcess {
    std::vector<double> zbar_path;
    std::vector<double> a_path;
};

// x(t) = (x0^t / (x0^t + (1 - x0^t) e^{-theta t}))^{1/theta}, t meaning ^theta
double deterministic_path(const ThetaLogisticParams& p, double x0, double t);

// Exact pathwise solution via Zbar(t) = theta (D-1) t - theta W(t):
//   X(t) = (x0^th e^{-Zbar} / (1 + th x0^th int_0^t e^{-Zbar} du))^{1/th}.
// The running integral is accumulated in the log domain, so paths never
// overflow and X stays in (0, inf) by construction.
core::PathEnsemble pathwise_solution(const ThetaLogisticParams& p, double x0,
                                     const core::TimeGrid& grid, uint64_t seed,
                                     std::size_t n_paths,
                                     std::vector<AuxIntegralProcess>* aux = nullptr);

// Stationary law for D < 1: gamma for theta = 1, generalized gamma otherwise.
core::AnalyticLaw stationary_law(const ThetaLogisticParams& p);

// Inverse-gamma stationary law of Y = 1/X (theta = 1 only).
core::AnalyticLaw stationary_law_inverse(const ThetaLogisticParams& p);

struct TransitionEstimate {
    double value;
    double mc_stderr;
    double mu;  // bridge-expectation factor
};

// Semi-explicit transition density: explicit prefactor times the Monte Carlo
// bridge expectation mu_theta(x,t;y,s).  Bridge paths are sampled exactly at
// the 129 Simpson nodes.
TransitionEstimate semi_explicit_transition(const ThetaLogisticParams& p,
                                            double x, double t, double y,
                                            double s, std::size_t n_bridges,
                                            uint64_t seed);

// e^{-x - (sign - ln x)^2} / x, the explicit gamma-shaped factor; -> 0 at 0+.
double shape_prefactor(double x, int sign);

}  // namespace growthsde::logistic
