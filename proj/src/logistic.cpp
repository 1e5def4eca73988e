#include "growthsde/logistic.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "growthsde/bridges.hpp"

namespace growthsde::logistic {

namespace {

double logaddexp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

// ln(1 + e^u), overflow-safe
double softplus(double u) { return u > 36.0 ? u : std::log1p(std::exp(u)); }

}  // namespace

ThetaLogisticParams::ThetaLogisticParams(double th, double d)
    : theta(th), diffusion_d(d) {
    if (!(theta > 0.0))
        throw std::invalid_argument("ThetaLogisticParams: theta must be > 0");
    if (!(diffusion_d > 0.0))
        throw std::invalid_argument("ThetaLogisticParams: D must be > 0");
}

double deterministic_path(const ThetaLogisticParams& p, double x0, double t) {
    if (!(x0 > 0.0)) throw std::invalid_argument("deterministic_path: x0 must be > 0");
    const double xt = std::pow(x0, p.theta);
    const double denom = xt + (1.0 - xt) * std::exp(-p.theta * t);
    return std::pow(xt / denom, 1.0 / p.theta);
}

core::PathEnsemble pathwise_solution(const ThetaLogisticParams& p, double x0,
                                     const core::TimeGrid& grid, uint64_t seed,
                                     std::size_t n_paths,
                                     std::vector<AuxIntegralProcess>* aux) {
    if (!(x0 > 0.0)) throw std::invalid_argument("pathwise_solution: x0 must be > 0");
    if (n_paths == 0) throw std::invalid_argument("pathwise_solution: n_paths = 0");
    core::PathEnsemble ens(grid, n_paths, seed, "theta-logistic-pathwise");
    if (aux) aux->assign(n_paths, AuxIntegralProcess{});
    const double dt = grid.dt();
    const double th = p.theta, D = p.diffusion_d;
    const double step_sd = std::sqrt(2.0 * D * dt);
    const double drift = th * (D - 1.0) * dt;
    const double th_lx0 = th * std::log(x0);
    const double log_half_dt = std::log(0.5 * dt);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(core::worker_count())
#endif
    for (long long ip = 0; ip < static_cast<long long>(n_paths); ++ip) {
        const std::size_t i = static_cast<std::size_t>(ip);
        const uint64_t stream = rng::mix2(seed ^ 0x4C6F6769ull, i);
        auto x = ens.row(i);
        AuxIntegralProcess* rec = aux ? &(*aux)[i] : nullptr;
        if (rec) {
            rec->zbar_path.resize(grid.n_points());
            rec->a_path.resize(grid.n_points());
            rec->zbar_path[0] = 0.0;
            rec->a_path[0] = 0.0;
        }
        double zbar = 0.0;
        double log_integral = -std::numeric_limits<double>::infinity();
        x[0] = x0;
        for (std::size_t k = 0; k < grid.n_steps; ++k) {
            const double zprev = zbar;
            zbar += drift - th * step_sd * rng::normal(seed, stream, k);
            // trapezoid panel of int e^{-Zbar} du, accumulated in logs
            const double log_panel = log_half_dt + logaddexp(-zprev, -zbar);
            log_integral = logaddexp(log_integral, log_panel);
            const double log_denom =
                softplus(std::log(th) + th_lx0 + log_integral);
            x[k + 1] = std::exp((th_lx0 - zbar - log_denom) / th);
            if (rec) {
                rec->zbar_path[k + 1] = zbar;
                rec->a_path[k + 1] = std::exp(th_lx0 + log_integral);
            }
        }
    }
    return ens;
}

core::AnalyticLaw stationary_law(const ThetaLogisticParams& p) {
    if (!(p.diffusion_d < 1.0))
        throw std::domain_error(
            "stationary_law: no stationary law for D >= 1 (drift loses to "
            "diffusion)");
    const double D = p.diffusion_d;
    if (p.theta == 1.0)
        return core::AnalyticLaw::gamma((1.0 - D) / D, 1.0 / D);
    return core::AnalyticLaw::generalized_gamma(
        (1.0 - D) / D, std::pow(p.theta * D, 1.0 / p.theta), p.theta);
}

core::AnalyticLaw stationary_law_inverse(const ThetaLogisticParams& p) {
    if (p.theta != 1.0)
        throw std::invalid_argument(
            "stationary_law_inverse: only the theta = 1 reciprocal law is "
            "inverse-gamma");
    if (!(p.diffusion_d < 1.0))
        throw std::domain_error("stationary_law_inverse: no stationary law for D >= 1");
    const double D = p.diffusion_d;
    return core::AnalyticLaw::inverse_gamma((1.0 - D) / D, 1.0 / D);
}

TransitionEstimate semi_explicit_transition(const ThetaLogisticParams& p,
                                            double x, double t, double y,
                                            double s, std::size_t n_bridges,
                                            uint64_t seed) {
    if (!(t > s)) throw std::invalid_argument("semi_explicit_transition: need t > s");
    if (!(x > 0.0 && y > 0.0))
        throw std::invalid_argument("semi_explicit_transition: x, y must be > 0");
    if (n_bridges < 1000)
        throw std::invalid_argument("semi_explicit_transition: need n_bridges >= 1e3");
    const double th = p.theta, D = p.diffusion_d;
    const double tau = t - s;
    const double lxy = std::log(x / y);
    const double prefactor =
        std::exp(-(std::pow(x, th) - std::pow(y, th)) / (2.0 * D * th) -
                 std::pow((1.0 - D) * tau - lxy, 2) / (4.0 * D * tau)) /
        (x * std::sqrt(4.0 * std::numbers::pi * D * tau));

    // 129 Simpson nodes on [0,1]; exact Gaussian bridge samples at the nodes
    constexpr std::size_t n_nodes = 129;
    std::vector<double> r(n_nodes);
    for (std::size_t j = 0; j < n_nodes; ++j)
        r[j] = static_cast<double>(j) / static_cast<double>(n_nodes - 1);
    core::WienerConfig cfg(D, seed);
    uint64_t tag = rng::mix2(rng::mix2(std::bit_cast<uint64_t>(x),
                                       std::bit_cast<uint64_t>(t)),
                             rng::mix2(std::bit_cast<uint64_t>(y),
                                       std::bit_cast<uint64_t>(s)));
    const auto w = bridges::conditional_bridge_nodes(s, t, r, cfg, n_bridges, tag);

    const double coef1 = 2.0 * (1.0 + (th - 1.0) * D) * std::pow(y, th);
    const double coef2 = std::pow(y, 2.0 * th);
    double sum = 0.0, sum_sq = 0.0;
    const double hr = 1.0 / static_cast<double>(n_nodes - 1);
    for (std::size_t i = 0; i < n_bridges; ++i) {
        const double* wi = w.data() + i * n_nodes;
        double i1 = 0.0, i2 = 0.0;
        for (std::size_t j = 0; j < n_nodes; ++j) {
            const double weight = (j == 0 || j == n_nodes - 1) ? 1.0
                                  : (j % 2 ? 4.0 : 2.0);
            const double e1 = std::exp(th * (r[j] * lxy + wi[j]));
            i1 += weight * e1;
            i2 += weight * e1 * e1;
        }
        i1 *= hr / 3.0;
        i2 *= hr / 3.0;
        const double z = std::exp(-tau / (4.0 * D) * (coef2 * i2 - coef1 * i1));
        sum += z;
        sum_sq += z * z;
    }
    const double n = static_cast<double>(n_bridges);
    const double mu = sum / n;
    const double var = std::max(0.0, sum_sq / n - mu * mu) / (n - 1.0);
    return {prefactor * mu, prefactor * std::sqrt(var), mu};
}

double shape_prefactor(double x, int sign) {
    if (!(x > 0.0)) throw std::invalid_argument("shape_prefactor: x must be > 0");
    const double s = sign >= 0 ? 1.0 : -1.0;
    const double lx = std::log(x);
    return std::exp(-x - (s - lx) * (s - lx) - lx);
}

}  // namespace growthsde::logistic
