#pragma once

#include <vector>

#include "growthsde/law.hpp"

namespace growthsde::core {

// Numeric density on a spatial grid.
struct DensityCurve {
    std::vector<double> x;
    std::vector<double> f;

    DensityCurve() = default;
    DensityCurve(std::vector<double> xs, std::vector<double> fs);

    double trapezoid_mass() const;
    // normalize in place so the trapezoid integral is `target`
    void normalize(double target = 1.0);
    // linear interpolation (0 outside the grid)
    double value_at(double xq) const;
    // cdf by cumulative trapezoid, linearly interpolated
    double cdf_at(double xq) const;
    double sup_distance(const DensityCurve& other) const;
};

DensityCurve tabulate_law(const AnalyticLaw& law, double lo, double hi,
                          std::size_t n_points);

// histogram of a sample as a density (mass 1) on n_bins over [lo,hi]
DensityCurve histogram_density(const std::vector<double>& sample, double lo,
                               double hi, std::size_t n_bins);

}  // namespace growthsde::core
