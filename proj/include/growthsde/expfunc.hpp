#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "growthsde/core.hpp"
#include "growthsde/density.hpp"

namespace growthsde::expfunc {

// Closed-form moment of int_0^t e^{W(s)} ds as an exact sum
//   M_n(t) = sum_j (coeff_j / D^n) e^{j D t},
// coefficients rational, exponent indices distinct nonnegative integers.
struct MomentExpression {
    int order_n = 0;
    std::vector<std::pair<mpq_class, int>> terms;  // sorted by exponent

    double evaluate(double t, double diffusion_d) const;
    bool operator==(const MomentExpression& other) const;
    std::string to_string() const;
};

// Moment by symbolic evaluation of the nested integral (term-by-term
// integration of exponentials in exact rational arithmetic).
MomentExpression moment_recursive(int n);

// Conjectured closed form:
//   M_n(t) = (-1)^n (n!/D^n) sum_{k=0}^n (-1)^k (2-delta_k0)
//            e^{k^2 D t} / ((n-k)! (n+k)!).
MomentExpression moment_conjecture(int n);

// Ensemble of the exponential functional X(t) = int_0^t e^{W(s)} ds
// (trapezoid along each Wiener path).
core::PathEnsemble sample_integral(const core::TimeGrid& grid,
                                   const core::WienerConfig& cfg,
                                   std::size_t n_paths);

// Density of Z = e^{W(s)} + e^{W(t)} by quadrature of the product formula
// f_Z(z) = int_0^z f_X(x) f_Y(z/x) / x dx with X lognormal and Y 1-shifted
// lognormal.
core::DensityCurve two_time_sum_pdf(double s, double t, double diffusion_d,
                                    const std::vector<double>& z_grid);
double two_time_sum_pdf_at(double z, double s, double t, double diffusion_d);

struct VelocityField {
    core::DensityCurve v;           // conditional mean of e^{W(t)} per X-bin
    std::vector<std::size_t> count; // samples per bin (0 = gap)
    double continuity_residual_l1;  // finite-difference continuity check
};

// Bin-wise estimate of v(x,t) = E[e^{W(t)} | int_0^t e^W = x] plus the
// continuity-equation residual between two nearby times.
VelocityField velocity_field_estimate(double t, const core::WienerConfig& cfg,
                                      std::size_t n_paths, std::size_t n_bins,
                                      double dt_check = 0.01,
                                      std::size_t n_steps = 1024);

struct JointFpeResult {
    double residual_l1;        // L1 residual of the joint FPE
    double y_marginal_ks;      // KS of the Y(t) marginal vs lognormal(0, 2Dt)
    std::size_t starved_cells; // cells with too few samples
};

// Monte Carlo histogram check of the joint Fokker-Planck equation for
// (X(t), Y(t) = e^{W(t)}) on a log-spaced grid.
JointFpeResult joint_fpe_residual(double t, const core::WienerConfig& cfg,
                                  std::size_t n_paths, std::size_t n_cells = 128,
                                  double dt_check = 0.02,
                                  std::size_t n_steps = 1024);

}  // namespace growthsde::expfunc
