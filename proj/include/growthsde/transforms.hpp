#pragma once

#include <functional>
#include <optional>
#include <string>

#include "growthsde/core.hpp"
#include "growthsde/density.hpp"
#include "growthsde/field.hpp"
#include "growthsde/grid.hpp"
#include "growthsde/law.hpp"

namespace growthsde::transforms {

using core::CoefficientField;
using core::TransformMap;

// Coefficients of a process-linear SDE
//   dY = [a0(t) + a1(t) Y] dt + [b0(t) + b1(t) Y] dW.
struct LinearSdeCoefficients {
    std::function<double(double)> a0, a1, b0, b1;
    bool constant = true;

    static LinearSdeCoefficients constants(double a0c, double a1c, double b0c,
                                           double b1c);
};

// Rewrite (a,b) under the monotonic map y = h(x,t):
//   a_hat = [h_t + h_x a + D h_xx b^2] o g,   b_hat = [h_x b] o g.
CoefficientField ito_transform(const CoefficientField& field,
                               const TransformMap& map, double diffusion_d);

struct SmoluchowskyResult {
    TransformMap map;          // y = h(x) = int dx/b
    CoefficientField field;    // b_hat == 1, a_hat = [a/b - D b'] o g
};

// Reduce a time-independent field to unit diffusion via h(x) = int dx/b.
// `anchor` fixes the integration constant for fields without a closed-form p.
SmoluchowskyResult to_smoluchowsky(const CoefficientField& field,
                                   double diffusion_d, double anchor);

struct ConstantCheck {
    bool is_constant = false;
    double value = 0.0;     // alpha in a(x) = alpha + D b b'
    double residual = 0.0;  // sup deviation over the probe grid
};

// Does a(x) - D b b' reduce to a constant?  (transform-to-constant-coefficients
// precondition.)
ConstantCheck check_constant_coeff(const CoefficientField& field,
                                   double diffusion_d, double bracket_lo,
                                   double bracket_hi);

// Compatibility constant c of b [D b'' - (a/b)'] if it is x-independent.
std::optional<double> check_space_independent(const CoefficientField& field,
                                              double diffusion_d,
                                              double bracket_lo,
                                              double bracket_hi,
                                              double* residual = nullptr);

struct SpaceIndependentTransform {
    TransformMap map;                     // h(x,t) = e^{ct} int dx/b
    std::function<double(double)> a_hat;  // drift, function of t only
    std::function<double(double)> b_hat;  // e^{ct}
};

SpaceIndependentTransform space_independent_transform(
    const CoefficientField& field, double c, double diffusion_d, double anchor);

// b1_hat = -(1/q') d/dx [b q'] with q = a/b - D b', if x-independent.
// Probe points where q' vanishes are skipped and reported via n_indeterminate.
std::optional<double> check_linearizable(const CoefficientField& field,
                                         double diffusion_d, double bracket_lo,
                                         double bracket_hi,
                                         std::size_t* n_indeterminate = nullptr);

// Predicate for the stricter b1_hat = 0 reduction: d/dx[b q'] == 0.
std::optional<double> check_linearizable_b1_zero(const CoefficientField& field,
                                                 double diffusion_d,
                                                 double bracket_lo,
                                                 double bracket_hi);

// Residual of the time-dependent compatibility condition
// d_x { b [ b_t/b^2 - d_x(a/b) + D b_xx ] } over a probe grid at given times.
// No worked example pins a tolerance, so only the residual is reported.
double time_dependent_compat_residual(const CoefficientField& field,
                                      double diffusion_d, double bracket_lo,
                                      double bracket_hi,
                                      const std::vector<double>& times);

struct Linearization {
    TransformMap map;  // h(x) = e^{b1_hat p(x)}, integration constant c = 1
    LinearSdeCoefficients coeffs;
};

Linearization linearize(const CoefficientField& field, double b1_hat,
                        double diffusion_d, double anchor);

// Pathwise solution of the linear SDE:
//   Y(t) = Y0 e^{Z} + (a0 - 2 D b0 b1) int e^{Z(t)-Z(s)} ds
//          + b0 int e^{Z(t)-Z(s)} dW(s),
// Z(t) = int (a1 - D b1^2) ds + int b1 dW (trapezoid / left-point sums).
core::PathEnsemble solve_linear_sde(const LinearSdeCoefficients& coeffs,
                                    double y0, const core::TimeGrid& grid,
                                    const core::WienerConfig& cfg,
                                    std::size_t n_paths);

enum class StationaryKind { recognized_law, numeric_curve, no_stationary_law };

struct StationaryResult {
    StationaryKind kind = StationaryKind::no_stationary_law;
    core::AnalyticLaw law;
    core::DensityCurve curve;
    std::string divergence_endpoint;  // set when kind == no_stationary_law
};

// Invariant Boltzmann density ~ exp{(1/D) int (a/b - 2 D b') / b dx} with
// named-family recognition on a probe bracket.
StationaryResult boltzmann_stationary(const CoefficientField& field,
                                      double diffusion_d, double bracket_lo,
                                      double bracket_hi);

}  // namespace growthsde::transforms
