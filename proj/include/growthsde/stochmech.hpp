#pragma once

#include <functional>
#include <vector>

#include "growthsde/core.hpp"

namespace growthsde::qho {

// Stationary state n of a harmonic oscillator with frequency omega and
// length scale sigma; the process diffusion is D = omega sigma^2.
struct QhoState {
    int n;
    double omega;
    double sigma;

    QhoState(int n_, double omega_, double sigma_);
    double diffusion_d() const { return omega * sigma * sigma; }
};

// physicists' Hermite polynomial H_n(z) and its derivative 2n H_{n-1}(z)
double hermite(int n, double z);
double hermite_prime(int n, double z);

// zeros of H_n(x / (sigma sqrt 2)), ascending; poles of the velocity field
std::vector<double> nodes(const QhoState& state);

// quantum stationary density phi_n^2(x)
double phi_sq(const QhoState& state, double x);

// forward velocity v_n(x) = omega sigma sqrt2 [2n H_{n-1}/H_n - z]; throws
// with the node location when evaluated at a pole
double forward_velocity(const QhoState& state, double x);
double forward_velocity_derivative(const QhoState& state, double x);

// n = 0: Ornstein-Uhlenbeck transition Normal(y e^{-w tau}, sigma^2(1-e^{-2 w tau}))
core::AnalyticLaw ground_transition(const QhoState& state, double y, double s,
                                    double t);

// n = 1 closed-form transition density; for y = 0 the alpha -> 0 limit
// (the symmetric combination density) is returned.
double excited1_transition(const QhoState& state, double x, double y, double s,
                           double t);

// E[X(t) | X(0) = y] for the n = 1 process, y > 0
double excited1_conditional_mean(const QhoState& state, double y, double t);

// Gamma(q; x) = q Theta(x) + (2-q) Theta(-x); asymptotic density
// Gamma(q; x) phi_1^2(x) with q = 2 * (initial mass on x > 0)
double asymptotic_mixture_weight(double q, double x);
double asymptotic_mixture_density(const QhoState& state, double q, double x);

// deterministic D = 0 trajectories for n <= 3 (implicit cases root-solved)
double deterministic_trajectory(const QhoState& state, double y, double t);
// asymptotic attracting points for n <= 3, ascending
std::vector<double> attractors(const QhoState& state);

struct CombinationPdf {
    double alpha;                       // mean of p
    std::function<double(double)> f;    // Theta(x) (x/alpha)[p(x) - p(-x)]
    std::function<double(double)> fbar; // (x/2 alpha)[p(x) - p(-x)]
};

// Density algebra of the combination proposition; requires p(x) >= p(-x) for
// x >= 0 on a probe grid and alpha > 0 (alpha = 0 is rejected as undefined).
CombinationPdf combination_pdf(const std::function<double(double)>& p,
                               double probe_scale = 10.0);

// SDE paths confined to the sub-interval of `y` between velocity poles.
core::PathEnsemble simulate_state_sde(const QhoState& state, double y,
                                      const core::TimeGrid& grid, uint64_t seed,
                                      std::size_t n_paths);

struct SignedSquareResult {
    core::PathEnsemble direct;  // dY = (6 w s^2 sign Y - 2 w Y) dt + 2 sqrt|Y| dW
    core::PathEnsemble mapped;  // X-paths of the n=1 SDE pushed through x|x|
};

// Dual-route simulation of Y = X|X| for the n = 1 state.
SignedSquareResult signed_square_paths(const QhoState& state, double y0,
                                       const core::TimeGrid& grid, uint64_t seed,
                                       std::size_t n_paths);

}  // namespace growthsde::qho
