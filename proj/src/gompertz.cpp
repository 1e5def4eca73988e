#include "growthsde/gompertz.hpp"

#include <cmath>
#include <stdexcept>

#include "growthsde/quadrature.hpp"

namespace growthsde::gompertz {

GompertzParams::GompertzParams(double a, double d) : alpha(a), diffusion_d(d) {
    if (!(alpha > 0.0))
        throw std::invalid_argument("GompertzParams: alpha must be > 0");
    if (!(diffusion_d > 0.0))
        throw std::invalid_argument("GompertzParams: D must be > 0");
}

double RateFunction::integral(double s, double t) const {
    if (antiderivative) return antiderivative(t) - antiderivative(s);
    return quad::adaptive_simpson(alpha_t, s, t, 1e-10);
}

void RateFunction::validate(double t_max) const {
    if (!antiderivative) return;
    for (int i = 1; i <= 8; ++i) {
        const double t = t_max * static_cast<double>(i) / 8.0;
        const double exact = antiderivative(t) - antiderivative(0.0);
        const double num = quad::adaptive_simpson(alpha_t, 0.0, t, 1e-12);
        if (std::fabs(exact - num) > 1e-8 * std::max(1.0, std::fabs(num)))
            throw std::runtime_error(
                "RateFunction: antiderivative disagrees with quadrature");
    }
}

double deterministic_path(const GompertzParams& p, double x0, double t) {
    if (!(x0 > 0.0)) throw std::invalid_argument("deterministic_path: x0 must be > 0");
    const double e = std::exp(-p.alpha * t);
    return std::exp(e * std::log(x0) + (1.0 - e) / p.alpha);
}

core::PathEnsemble exact_paths(const GompertzParams& p, double x0,
                               const core::TimeGrid& grid, uint64_t seed,
                               std::size_t n_paths) {
    if (!(x0 > 0.0)) throw std::invalid_argument("exact_paths: x0 must be > 0");
    if (n_paths == 0) throw std::invalid_argument("exact_paths: n_paths = 0");
    core::PathEnsemble ens(grid, n_paths, seed, "gompertz-exact");
    const double dt = grid.dt();
    const double decay = std::exp(-p.alpha * dt);
    const double step_sd = std::sqrt(2.0 * p.diffusion_d * dt);
    const double lx0 = std::log(x0);
    const double D = p.diffusion_d;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(core::worker_count())
#endif
    for (long long ip = 0; ip < static_cast<long long>(n_paths); ++ip) {
        const std::size_t i = static_cast<std::size_t>(ip);
        const uint64_t stream = rng::mix2(seed ^ 0x476F6D70ull, i);
        auto x = ens.row(i);
        x[0] = x0;
        double integral = 0.0;  // int_0^t e^{-a(t-u)} dW(u), left-point
        for (std::size_t k = 0; k < grid.n_steps; ++k) {
            const double dw = step_sd * rng::normal(seed, stream, k);
            integral = decay * (integral + dw);
            const double e = std::exp(-p.alpha * grid.time(k + 1));
            x[k + 1] = std::exp(e * lx0 + (1.0 - D) * (1.0 - e) / p.alpha + integral);
        }
    }
    return ens;
}

core::AnalyticLaw transition_law(const GompertzParams& p, double y, double s,
                                 double t) {
    if (!(t > s)) throw std::invalid_argument("transition_law: need t > s");
    if (!(y > 0.0)) throw std::invalid_argument("transition_law: y must be > 0");
    const double tau = t - s;
    const double e = std::exp(-p.alpha * tau);
    const double mean = e * std::log(y) + (1.0 - p.diffusion_d) * (1.0 - e) / p.alpha;
    const double var = p.diffusion_d * (1.0 - std::exp(-2.0 * p.alpha * tau)) / p.alpha;
    return core::AnalyticLaw::lognormal(mean, var);
}

MeanCov parametric_ou_moments(const RateFunction& rate, double y0,
                              double sigma0_sq, double s, double t, double t2,
                              double diffusion_d) {
    if (t < s || t2 < s)
        throw std::invalid_argument("parametric_ou_moments: need t, t2 >= s");
    const double int_st = rate.integral(s, t);
    const double int_st2 = rate.integral(s, t2);
    const double mean = y0 * std::exp(-int_st);
    const double tmin = std::min(t, t2);
    const double noise =
        tmin > s ? 2.0 * diffusion_d *
                       quad::adaptive_simpson(
                           [&](double r) {
                               return std::exp(-rate.integral(r, t) -
                                               rate.integral(r, t2));
                           },
                           s, tmin, 1e-10)
                 : 0.0;
    const double cov = sigma0_sq * std::exp(-int_st - int_st2) + noise;
    return {mean, cov};
}

core::AnalyticLaw parametric_transition(const RateFunction& rate, double y,
                                        double s, double t, double diffusion_d) {
    if (!(t > s)) throw std::invalid_argument("parametric_transition: need t > s");
    if (!(y > 0.0)) throw std::invalid_argument("parametric_transition: y must be > 0");
    const double mean = std::exp(-rate.integral(s, t)) * std::log(y);
    const double var = 2.0 * diffusion_d *
                       quad::adaptive_simpson(
                           [&](double r) {
                               return std::exp(-2.0 * rate.integral(r, t));
                           },
                           s, t, 1e-10);
    return core::AnalyticLaw::lognormal(mean, var);
}

}  // namespace growthsde::gompertz
