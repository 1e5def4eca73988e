#include "growthsde/bridges.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace growthsde::bridges {

double BridgeShape::g_prime(double s) const {
    if (g_dot) return g_dot(s);
    const double e = 1e-6;
    return (g(std::min(s + e, 1.0)) - g(std::max(s - e, 0.0))) /
           (std::min(s + e, 1.0) - std::max(s - e, 0.0));
}

double BridgeShape::h_prime(double s) const {
    if (h_dot) return h_dot(s);
    const double e = 1e-6;
    return (h(std::min(s + e, 1.0)) - h(std::max(s - e, 0.0))) /
           (std::min(s + e, 1.0) - std::max(s - e, 0.0));
}

void BridgeShape::validate_boundary() const {
    auto near = [](double u, double v) { return std::fabs(u - v) < 1e-12; };
    if (!near(g(0.0), 1.0) || !near(g(1.0), 0.0) || !near(h(0.0), 0.0) ||
        !near(h(1.0), 1.0))
        throw std::invalid_argument("BridgeShape: boundary conditions violated");
}

BridgeShape linear_shape(double a, double b, double T) {
    BridgeShape s;
    s.g = [](double u) { return 1.0 - u; };
    s.h = [](double u) { return u; };
    s.g_dot = [](double) { return -1.0; };
    s.h_dot = [](double) { return 1.0; };
    s.a = a; s.b = b; s.T = T;
    return s;
}

BridgeShape parabolic_shape(double a, double b, double T) {
    BridgeShape s;
    s.g = [](double u) { return (1.0 - u) * (1.0 - u); };
    s.h = [](double u) { return u * u; };
    s.g_dot = [](double u) { return -2.0 * (1.0 - u); };
    s.h_dot = [](double u) { return 2.0 * u; };
    s.a = a; s.b = b; s.T = T;
    return s;
}

BridgeShape trig_shape(double a, double b, double T) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    BridgeShape s;
    s.g = [](double u) { return std::cos(half_pi * u); };
    s.h = [](double u) { return std::sin(half_pi * u); };
    s.g_dot = [](double u) { return -half_pi * std::sin(half_pi * u); };
    s.h_dot = [](double u) { return half_pi * std::cos(half_pi * u); };
    s.a = a; s.b = b; s.T = T;
    return s;
}

BridgeShape trig_sq_shape(double a, double b, double T) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    BridgeShape s;
    s.g = [](double u) { const double c = std::cos(half_pi * u); return c * c; };
    s.h = [](double u) { const double c = std::sin(half_pi * u); return c * c; };
    s.g_dot = [](double u) { return -half_pi * std::sin(std::numbers::pi * u); };
    s.h_dot = [](double u) { return half_pi * std::sin(std::numbers::pi * u); };
    s.a = a; s.b = b; s.T = T;
    return s;
}

core::PathEnsemble sample_bridge(const BridgeShape& shape,
                                 const core::TimeGrid& grid,
                                 const core::WienerConfig& cfg,
                                 std::size_t n_paths) {
    shape.validate_boundary();
    if (std::fabs(grid.t0) > 1e-12 || std::fabs(grid.t1 - shape.T) > 1e-12)
        throw std::invalid_argument("sample_bridge: grid must span [0, T]");
    for (std::size_t k = 0; k + 1 < grid.n_points(); ++k)
        if (!(shape.g(grid.time(k) / shape.T) > 0.0))
            throw std::domain_error("sample_bridge: g vanishes before t = T");
    core::PathEnsemble ens(grid, n_paths, cfg.master_seed, "bridge");
    const double dt = grid.dt();
    const double step_sd = std::sqrt(2.0 * cfg.diffusion_d * dt);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(core::worker_count())
#endif
    for (long long ip = 0; ip < static_cast<long long>(n_paths); ++ip) {
        const std::size_t i = static_cast<std::size_t>(ip);
        const uint64_t stream = rng::mix2(cfg.master_seed ^ 0x42726964ull, i);
        auto x = ens.row(i);
        double weighted = 0.0;  // int_0^t dW/g, left-point
        x[0] = shape.a;
        for (std::size_t k = 0; k < grid.n_steps; ++k) {
            const double sk = grid.time(k) / shape.T;
            const double dw = step_sd * rng::normal(cfg.master_seed, stream, k);
            weighted += dw / shape.g(sk);
            const double s1 = grid.time(k + 1) / shape.T;
            x[k + 1] = shape.a * shape.g(s1) + shape.b * shape.h(s1) +
                       shape.g(s1) * weighted;
        }
        x[grid.n_steps] = shape.b;  // g(1) = 0 pins the endpoint
    }
    return ens;
}

double bridge_drift(const BridgeShape& shape, double x, double t) {
    if (!(t < shape.T))
        throw std::domain_error("bridge_drift: pole at t = T");
    const double s = t / shape.T;
    const double g = shape.g(s), h = shape.h(s);
    const double gd = shape.g_prime(s), hd = shape.h_prime(s);
    return (shape.b * (g * hd - gd * h) + x * gd) / (shape.T * g);
}

std::vector<double> conditional_bridge_nodes(double s, double t,
                                             const std::vector<double>& r_nodes,
                                             const core::WienerConfig& cfg,
                                             std::size_t n_samples,
                                             uint64_t stream_tag) {
    if (!(s >= 0.0 && t > s))
        throw std::invalid_argument("conditional_bridge_nodes: need 0 <= s < t");
    for (std::size_t j = 1; j < r_nodes.size(); ++j)
        if (!(r_nodes[j] > r_nodes[j - 1]))
            throw std::invalid_argument("conditional_bridge_nodes: r_nodes must be sorted");
    const double two_d_tau = 2.0 * cfg.diffusion_d * (t - s);
    const std::size_t m = r_nodes.size();
    std::vector<double> out(n_samples * m);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(core::worker_count())
#endif
    for (long long is = 0; is < static_cast<long long>(n_samples); ++is) {
        const std::size_t i = static_cast<std::size_t>(is);
        const uint64_t stream =
            rng::mix2(cfg.master_seed ^ 0x57626172ull, rng::mix2(stream_tag, i));
        double r_prev = 0.0, w_prev = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double r = r_nodes[j];
            double w;
            if (r <= 0.0 || r >= 1.0) {
                w = 0.0;
            } else {
                const double mean = w_prev * (1.0 - r) / (1.0 - r_prev);
                const double var =
                    two_d_tau * (r - r_prev) * (1.0 - r) / (1.0 - r_prev);
                w = mean + std::sqrt(var) * rng::normal(cfg.master_seed, stream, j);
            }
            out[i * m + j] = w;
            r_prev = r;
            w_prev = w;
        }
    }
    return out;
}

}  // namespace growthsde::bridges
