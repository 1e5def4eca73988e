#include "growthsde/core.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace growthsde::core {

int worker_count() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
    if (const char* cap = std::getenv("GROWTHSDE_THREADS")) {
        const int c = std::atoi(cap);
        if (c >= 1 && c < n) n = c;
    }
    return n;
#else
    return 1;
#endif
}

PathEnsemble sample_wiener(const TimeGrid& grid, const WienerConfig& cfg,
                           std::size_t n_paths) {
    if (n_paths == 0) throw std::invalid_argument("sample_wiener: n_paths = 0");
    PathEnsemble ens(grid, n_paths, cfg.master_seed, "wiener");
    const double step_sd = std::sqrt(2.0 * cfg.diffusion_d * grid.dt());
    const std::size_t n_steps = grid.n_steps;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(worker_count())
#endif
    for (long long ip = 0; ip < static_cast<long long>(n_paths); ++ip) {
        const std::size_t i = static_cast<std::size_t>(ip);
        const uint64_t stream = rng::mix2(cfg.master_seed ^ 0x57696E6572ull, i);
        auto w = ens.row(i);
        w[0] = 0.0;
        for (std::size_t k = 0; k < n_steps; ++k)
            w[k + 1] = w[k] + step_sd * rng::normal(cfg.master_seed, stream, k);
    }
    return ens;
}

namespace {

struct StepResult {
    double x;
    bool ok;
};

// advance one grid step, halving the substep whenever the proposal
// leaves the open domain
StepResult clamped_step(const CoefficientField& field, double x, double t,
                        double dt, double two_d, uint64_t seed,
                        uint64_t retry_stream, uint64_t& retry_counter,
                        double base_draw) {
    const double lo = field.domain_lo, hi = field.domain_hi;
    double remaining = dt;
    double sub = dt;
    bool first = true;
    int halvings = 0;
    while (remaining > 0.0) {
        const double use = std::min(sub, remaining);
        const double xi = first ? base_draw
                                : rng::normal(seed, retry_stream, retry_counter++);
        const double prop = x + field.a(x, t) * use +
                            field.b(x, t) * std::sqrt(two_d * use) * xi;
        first = false;
        if (std::isfinite(prop) && prop > lo && prop < hi) {
            x = prop;
            t += use;
            remaining -= use;
        } else {
            if (++halvings > 30) return {x, false};
            sub = use * 0.5;
        }
    }
    return {x, true};
}

}  // namespace

PathEnsemble euler_maruyama(const CoefficientField& field, double x0,
                            const TimeGrid& grid, const WienerConfig& cfg,
                            std::size_t n_paths) {
    if (n_paths == 0) throw std::invalid_argument("euler_maruyama: n_paths = 0");
    if (field.has_bounded_domain() &&
        !(x0 > field.domain_lo && x0 < field.domain_hi))
        throw std::invalid_argument("euler_maruyama: x0 outside field domain");
    PathEnsemble ens(grid, n_paths, cfg.master_seed,
                     field.label.empty() ? "euler" : field.label);
    const double dt = grid.dt();
    const double two_d = 2.0 * cfg.diffusion_d;
    std::vector<std::size_t> bad_path(n_paths, 0), bad_step(n_paths, 0);
    std::vector<char> bad(n_paths, 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(worker_count())
#endif
    for (long long ip = 0; ip < static_cast<long long>(n_paths); ++ip) {
        const std::size_t i = static_cast<std::size_t>(ip);
        const uint64_t stream = rng::mix2(cfg.master_seed ^ 0x45756C6572ull, i);
        const uint64_t retry_stream = rng::mix2(stream, 0xDEADu);
        uint64_t retry_counter = 0;
        auto x = ens.row(i);
        x[0] = x0;
        bool valid = true;
        for (std::size_t k = 0; k < grid.n_steps; ++k) {
            if (!valid) {
                x[k + 1] = x[k];
                continue;
            }
            const double draw = rng::normal(cfg.master_seed, stream, k);
            const auto r = clamped_step(field, x[k], grid.time(k), dt, two_d,
                                        cfg.master_seed, retry_stream,
                                        retry_counter, draw);
            x[k + 1] = r.x;
            if (!r.ok) {
                valid = false;
                bad[i] = 1;
                bad_step[i] = k;
            }
        }
    }
    for (std::size_t i = 0; i < n_paths; ++i)
        if (bad[i]) {
            ens.invalid_paths.push_back(i);
            ens.invalid_steps.push_back(bad_step[i]);
        }
    return ens;
}

}  // namespace growthsde::core
