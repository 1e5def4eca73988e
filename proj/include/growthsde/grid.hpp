#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace growthsde::core {

// Uniform time grid on [t0, t1] with n_steps intervals.
struct TimeGrid {
    double t0 = 0.0;
    double t1 = 1.0;
    std::size_t n_steps = 1;

    TimeGrid() = default;
    TimeGrid(double t0_, double t1_, std::size_t n_steps_)
        : t0(t0_), t1(t1_), n_steps(n_steps_) {
        if (!(t1 > t0)) throw std::invalid_argument("TimeGrid: t1 must exceed t0");
        if (n_steps < 1) throw std::invalid_argument("TimeGrid: n_steps must be >= 1");
    }

    double dt() const { return (t1 - t0) / static_cast<double>(n_steps); }
    std::size_t n_points() const { return n_steps + 1; }
    double time(std::size_t k) const {
        return t0 + dt() * static_cast<double>(k);
    }
    std::vector<double> times() const {
        std::vector<double> t(n_points());
        for (std::size_t k = 0; k < t.size(); ++k) t[k] = time(k);
        return t;
    }
};

// Wiener process convention used throughout: E[W^2(t)] = 2 D t, so an
// increment over dt is Normal(0, 2*D*dt).  Most libraries use variance dt;
// all analytic formulas in this project assume the 2D convention.
struct WienerConfig {
    double diffusion_d = 0.5;
    uint64_t master_seed = 0;

    WienerConfig() = default;
    WienerConfig(double d, uint64_t seed) : diffusion_d(d), master_seed(seed) {
        if (!(d > 0.0)) throw std::invalid_argument("WienerConfig: D must be > 0");
    }
};

// Matrix of sample paths on a shared grid, row-major n_paths x (n_steps+1).
struct PathEnsemble {
    TimeGrid grid;
    std::size_t n_paths = 0;
    std::vector<double> values;
    uint64_t seed = 0;
    std::string process_label;
    std::vector<std::size_t> invalid_paths;  // paths flagged non-finite
    std::vector<std::size_t> invalid_steps;  // step index of first failure

    PathEnsemble() = default;
    PathEnsemble(TimeGrid g, std::size_t n, uint64_t s, std::string label)
        : grid(g), n_paths(n), values(n * g.n_points()), seed(s),
          process_label(std::move(label)) {
        if (n == 0) throw std::invalid_argument("PathEnsemble: empty ensemble");
    }

    std::span<double> row(std::size_t i) {
        return {values.data() + i * grid.n_points(), grid.n_points()};
    }
    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * grid.n_points(), grid.n_points()};
    }

    // Marginal column at grid point k.
    std::vector<double> marginal(std::size_t k) const {
        std::vector<double> m(n_paths);
        for (std::size_t i = 0; i < n_paths; ++i) m[i] = row(i)[k];
        return m;
    }
    std::vector<double> terminal() const { return marginal(grid.n_steps); }
};

}  // namespace growthsde::core
