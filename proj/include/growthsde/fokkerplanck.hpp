#pragma once

#include <functional>
#include <vector>

#include "growthsde/density.hpp"

namespace growthsde::fpe {

// 1-D Fokker-Planck problem   d_t f = d_x^2 (B f) - d_x (v f)
// on [lo, hi], zero probability current at the boundary and at any interior
// singular walls.
struct FpeProblem {
    std::function<double(double)> drift;           // v(x)
    std::function<double(double)> diffusion;       // B(x) = D b^2(x) > 0
    std::function<double(double)> drift_prime;     // optional
    std::function<double(double)> diffusion_prime; // optional
    double lo = 0.0, hi = 1.0;
    std::vector<double> walls;  // interior walls, increasing

    double dv(double x) const;
    double dB(double x) const;
};

enum class SlBoundary { dirichlet, zero_current };

// Sturm-Liouville form L[G] = (p G')' - q G after f = sqrt(f_tilde) g:
//   p = B,  q = (B'-v)^2/(4B) - (B'-v)'/2.
struct SturmLiouvilleProblem {
    std::function<double(double)> p;
    std::function<double(double)> q;
    double lo = 0.0, hi = 1.0;
    SlBoundary bc = SlBoundary::dirichlet;
    // for zero_current: G'/G = robin(x) at the endpoints
    std::function<double(double)> robin;
};

struct EvolveResult {
    core::DensityCurve f;
    double mass_drift;        // |final - initial| total mass
    double negativity_clip;   // L1 mass clipped to keep f >= 0
    bool oscillation_warning; // new sign oscillations detected
};

// Crank-Nicolson evolution with conservative fluxes; mass per sub-interval
// is conserved and negatives are clipped at -1e-10.
EvolveResult evolve(const FpeProblem& problem, const core::DensityCurve& f0,
                    double t_final, std::size_t n_time_steps);

SturmLiouvilleProblem reduce_to_sturm_liouville(const FpeProblem& problem);

// lambda_n = (1-D) n - D n^2 for the logistic reduced problem; entries with
// lambda < 0 are reported through `negative_from` (first such n), mirroring
// the finite positive spectrum.
std::vector<double> logistic_eigenvalues(double diffusion_d, int n_max,
                                         int* negative_from = nullptr);

struct EigenSolution {
    std::vector<double> eigenvalues;               // lowest k, ascending
    std::vector<std::vector<double>> eigenvectors; // normalized on the grid
    std::vector<double> grid;                      // cell centers
    std::vector<int> sign_changes;                 // Sturm oscillation counts
};

// Finite-difference discretization + symmetric tridiagonal eigensolve;
// eigenvectors by inverse iteration.
EigenSolution numeric_eigensolve(const SturmLiouvilleProblem& problem,
                                 std::size_t k, std::size_t n_grid = 3000);

struct ExpansionResult {
    core::DensityCurve f;
    double truncation_error;  // |c_k| e^{-lambda_k t} bound
};

// f(x,t) = sum_n c_n e^{-lambda_n t} G_0(x) G_n(x) with coefficients from
// grid inner products of f0 against G_n / G_0.
ExpansionResult eigen_expansion_solve(const FpeProblem& problem,
                                      const core::DensityCurve& f0, double t,
                                      std::size_t k = 32,
                                      std::size_t n_grid = 3000);

// Invariant density ~ exp(-int (B'-v)/B dx); per-sub-interval masses may be
// prescribed (walled problems), otherwise the result is normalized globally.
core::DensityCurve invariant_density(const FpeProblem& problem,
                                     std::size_t n_grid = 4096,
                                     const std::vector<double>& masses = {});

}  // namespace growthsde::fpe
