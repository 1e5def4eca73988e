#pragma once

#include "growthsde/density.hpp"
#include "growthsde/field.hpp"
#include "growthsde/grid.hpp"
#include "growthsde/law.hpp"
#include "growthsde/rng.hpp"
#include "growthsde/sample_stats.hpp"

namespace growthsde::core {

// number of OpenMP workers honoring the GROWTHSDE_THREADS cap
int worker_count();

// Wiener paths with W(t0) = 0 and increments Normal(0, 2*D*dt).
PathEnsemble sample_wiener(const TimeGrid& grid, const WienerConfig& cfg,
                           std::size_t n_paths);

// Explicit Euler-Maruyama with a reject-and-halve positivity clamp: a step
// whose proposal leaves the open domain is retried at half the substep, at
// most 30 halvings, after which the path is flagged invalid.
PathEnsemble euler_maruyama(const CoefficientField& field, double x0,
                            const TimeGrid& grid, const WienerConfig& cfg,
                            std::size_t n_paths);

}  // namespace growthsde::core
