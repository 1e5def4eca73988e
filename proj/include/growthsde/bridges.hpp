#pragma once

#include <functional>
#include <vector>

#include "growthsde/core.hpp"

namespace growthsde::bridges {

// Interpolating shape x(t) = a g(t/T) + b h(t/T) with g(0)=1, g(1)=0,
// h(0)=0, h(1)=1.
struct BridgeShape {
    std::function<double(double)> g, h;          // on [0,1]
    std::function<double(double)> g_dot, h_dot;  // optional, FD otherwise
    double a = 0.0, b = 0.0, T = 1.0;

    double g_prime(double s) const;
    double h_prime(double s) const;
    void validate_boundary() const;
};

BridgeShape linear_shape(double a, double b, double T);
BridgeShape parabolic_shape(double a, double b, double T);   // (1-s)^2, s^2
BridgeShape trig_shape(double a, double b, double T);        // cos, sin
BridgeShape trig_sq_shape(double a, double b, double T);     // cos^2, sin^2

// Pathwise bridge X(t) = a g + b h + g(t/T) int_0^t dW(s)/g(s/T); the
// endpoint X(T) = b holds exactly because g(1) = 0.
core::PathEnsemble sample_bridge(const BridgeShape& shape,
                                 const core::TimeGrid& grid,
                                 const core::WienerConfig& cfg,
                                 std::size_t n_paths);

// Drift of the bridge SDE; for the linear shape reduces to (b - x)/(T - t).
double bridge_drift(const BridgeShape& shape, double x, double t);

// Exact Gaussian samples of the pinned bridge
//   Wbar_st(r) = W(s + (t-s) r) - (r W(t) + (1-r) W(s))
// at the requested r-nodes (sequential conditional normals).  Returns
// row-major n_samples x r_nodes.size(); values at r = 0 and r = 1 are 0.
std::vector<double> conditional_bridge_nodes(double s, double t,
                                             const std::vector<double>& r_nodes,
                                             const core::WienerConfig& cfg,
                                             std::size_t n_samples,
                                             uint64_t stream_tag = 0);

}  // namespace growthsde::bridges
