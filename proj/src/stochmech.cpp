#include "growthsde/stochmech.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "growthsde/field.hpp"
#include "growthsde/quadrature.hpp"
#include "growthsde/special.hpp"

namespace growthsde::qho {

QhoState::QhoState(int n_, double omega_, double sigma_)
    : n(n_), omega(omega_), sigma(sigma_) {
    if (n < 0 || n > 8) throw std::invalid_argument("QhoState: need 0 <= n <= 8");
    if (!(omega > 0.0 && sigma > 0.0))
        throw std::invalid_argument("QhoState: omega, sigma must be > 0");
}

double hermite(int n, double z) {
    double hm1 = 0.0, h = 1.0;  // H_{-1}, H_0
    for (int k = 0; k < n; ++k) {
        const double next = 2.0 * z * h - 2.0 * k * hm1;
        hm1 = h;
        h = next;
    }
    return h;
}

double hermite_prime(int n, double z) {
    return n == 0 ? 0.0 : 2.0 * n * hermite(n - 1, z);
}

std::vector<double> nodes(const QhoState& state) {
    if (state.n == 0) return {};
    const int n = state.n;
    // Golub-Welsch: roots of H_n are eigenvalues of the Hermite Jacobi matrix
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 0; k + 1 < n; ++k) sub(k) = std::sqrt(0.5 * (k + 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    if (n == 1) {
        return {0.0};
    }
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        out[static_cast<std::size_t>(k)] =
            es.eigenvalues()(k) * state.sigma * std::numbers::sqrt2;
    return out;
}

double phi_sq(const QhoState& state, double x) {
    const double z = x / (state.sigma * std::numbers::sqrt2);
    double log_norm = 0.5 * std::log(2.0 * std::numbers::pi) +
                      std::log(state.sigma) +
                      state.n * std::log(2.0) + std::lgamma(state.n + 1.0);
    const double h = hermite(state.n, z);
    return h * h * std::exp(-x * x / (2.0 * state.sigma * state.sigma) - log_norm);
}

double forward_velocity(const QhoState& state, double x) {
    const double z = x / (state.sigma * std::numbers::sqrt2);
    const double hn = hermite(state.n, z);
    const double hp = hermite_prime(state.n, z);
    if (std::fabs(hn) < 1e-12 * std::max(1.0, std::fabs(hp))) {
        // locate the offending node for the error message
        double nearest = 0.0, best = 1e300;
        for (double nd : nodes(state))
            if (std::fabs(nd - x) < best) {
                best = std::fabs(nd - x);
                nearest = nd;
            }
        throw std::domain_error("forward_velocity: pole at node x = " +
                                std::to_string(nearest));
    }
    return state.omega * state.sigma * std::numbers::sqrt2 * (hp / hn - z);
}

double forward_velocity_derivative(const QhoState& state, double x) {
    // v = 2 D phi'/phi and D phi'' = ((V - E_n)/hbar) phi give
    // v' = 2D [x^2/(4 s^4) - (2n+1)/(2 s^2)] - v^2/(2D)
    const double D = state.diffusion_d();
    const double s2 = state.sigma * state.sigma;
    const double v = forward_velocity(state, x);
    return 2.0 * D * (x * x / (4.0 * s2 * s2) - (2.0 * state.n + 1.0) / (2.0 * s2)) -
           v * v / (2.0 * D);
}

core::AnalyticLaw ground_transition(const QhoState& state, double y, double s,
                                    double t) {
    if (!(t > s)) throw std::invalid_argument("ground_transition: need t > s");
    const double tau = t - s;
    const double mean = y * std::exp(-state.omega * tau);
    const double var = state.sigma * state.sigma *
                       (1.0 - std::exp(-2.0 * state.omega * tau));
    return core::AnalyticLaw::normal(mean, var);
}

double excited1_transition(const QhoState& state, double x, double y, double s,
                           double t) {
    if (!(t > s)) throw std::invalid_argument("excited1_transition: need t > s");
    const double tau = t - s;
    const double alpha = y * std::exp(-state.omega * tau);
    const double beta2 = state.sigma * state.sigma *
                         (1.0 - std::exp(-2.0 * state.omega * tau));
    const double beta = std::sqrt(beta2);
    const double norm = beta * std::sqrt(2.0 * std::numbers::pi);
    if (std::fabs(alpha) < 1e-12 * beta) {
        // l'Hopital limit: the symmetric combination density
        return x * x * std::exp(-0.5 * x * x / beta2) / (beta2 * norm);
    }
    if (x * y <= 0.0) return 0.0;
    // (x/alpha) e^{-(x^2+a^2)/2b^2} 2 sinh(x a / b^2) / norm, stable near 0
    const double core = std::exp(-0.5 * (x * x + alpha * alpha) / beta2);
    return (x / alpha) * core * 2.0 * std::sinh(x * alpha / beta2) / norm;
}

double excited1_conditional_mean(const QhoState& state, double y, double t) {
    if (!(y > 0.0))
        throw std::invalid_argument("excited1_conditional_mean: need y > 0");
    if (!(t > 0.0)) return y;
    const double alpha = y * std::exp(-state.omega * t);
    const double beta2 = state.sigma * state.sigma *
                         (1.0 - std::exp(-2.0 * state.omega * t));
    const double beta = std::sqrt(beta2);
    return std::sqrt(2.0 / std::numbers::pi) * beta *
               std::exp(-0.5 * alpha * alpha / beta2) +
           (alpha * alpha + beta2) / alpha *
               (2.0 * special::normal_cdf(alpha / beta) - 1.0);
}

double asymptotic_mixture_weight(double q, double x) {
    if (q < 0.0 || q > 2.0)
        throw std::invalid_argument("asymptotic_mixture: q must lie in [0,2]");
    return x > 0.0 ? q : (x < 0.0 ? 2.0 - q : 1.0);
}

double asymptotic_mixture_density(const QhoState& state, double q, double x) {
    return asymptotic_mixture_weight(q, x) * phi_sq(state, x);
}

namespace {

// conserved-quantity root solve used by the n = 2 and n = 3 trajectories
double bisect(const std::function<double(double)>& fn, double lo, double hi) {
    double flo = fn(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = fn(mid);
        if ((flo <= 0.0) == (fm <= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> attractors(const QhoState& state) {
    const double s = state.sigma;
    switch (state.n) {
        case 0:
            return {0.0};
        case 1:
            return {-s * std::numbers::sqrt2, s * std::numbers::sqrt2};
        case 2:
            return {-s * std::sqrt(5.0), 0.0, s * std::sqrt(5.0)};
        case 3: {
            const double r = std::sqrt(57.0);
            const double outer = s * std::sqrt((9.0 + r) / 2.0);
            const double inner = s * std::sqrt((9.0 - r) / 2.0);
            return {-outer, -inner, inner, outer};
        }
        default:
            throw std::invalid_argument("attractors: closed forms cover n <= 3");
    }
}

double deterministic_trajectory(const QhoState& state, double y, double t) {
    const double s = state.sigma, w = state.omega;
    const double s2 = s * s;
    switch (state.n) {
        case 0:
            return y * std::exp(-w * t);
        case 1: {
            if (y == 0.0)
                throw std::invalid_argument("deterministic_trajectory: y at node");
            const double sq = 2.0 * s2 + (y * y - 2.0 * s2) * std::exp(-2.0 * w * t);
            return (y > 0.0 ? 1.0 : -1.0) * std::sqrt(sq);
        }
        case 2: {
            // x (x^2 - 5 s^2)^2 = y (y^2 - 5 s^2)^2 e^{-5 w t}; the
            // conserved form is odd in x, so reflect negative starts
            if (y < 0.0) return -deterministic_trajectory(state, -y, t);
            if (std::fabs(y - s) < 1e-14)
                throw std::invalid_argument("deterministic_trajectory: y at node");
            const double C = y * std::pow(y * y - 5.0 * s2, 2) * std::exp(-5.0 * w * t);
            auto g = [s2, C](double x) {
                return x * std::pow(x * x - 5.0 * s2, 2) - C;
            };
            // walls at the nodes +-s; attractors 0, +-s sqrt5; the conserved
            // quantity is monotone between a wall and its attractor
            const double att = s * std::sqrt(5.0);
            double lo, hi;
            if (y < s) {                      // basin of 0
                lo = -s + 1e-15;
                hi = s - 1e-15;
            } else if (y < att) {             // (s, s sqrt5), approach from below
                lo = s + 1e-12;
                hi = att;
            } else {                          // above the attractor
                lo = att;
                hi = y + 1e-12;
            }
            return bisect(g, lo, hi);
        }
        case 3: {
            // conserved: |r+9-4u|^{19+r} |r-9+4u|^{19-r} e^{76 w t}, u = z^2
            if (y < 0.0) return -deterministic_trajectory(state, -y, t);
            const double r = std::sqrt(57.0);
            const double z2 = y * y / (2.0 * s2);
            const double wall = 1.5;  // node at x = s sqrt3 in z^2 units
            if (y == 0.0 || std::fabs(z2 - wall) < 1e-14)
                throw std::invalid_argument("deterministic_trajectory: y at node");
            auto F = [r](double u) {
                return (19.0 + r) * std::log(std::fabs(r + 9.0 - 4.0 * u)) +
                       (19.0 - r) * std::log(std::fabs(r - 9.0 + 4.0 * u));
            };
            const double target = F(z2) - 76.0 * w * t;
            const double u_out = (9.0 + r) / 4.0;  // attractors in u = z^2
            const double u_in = (9.0 - r) / 4.0;
            auto g = [&](double u) { return F(u) - target; };
            double lo, hi;
            if (z2 > u_out) {          // approach the outer attractor from above
                lo = u_out + 1e-13;
                hi = z2;
            } else if (z2 > wall) {    // from below
                lo = z2;
                hi = u_out - 1e-13;
            } else if (z2 > u_in) {    // inner attractor from above
                lo = u_in + 1e-13;
                hi = z2;
            } else {                   // from below
                lo = z2;
                hi = u_in - 1e-13;
            }
            const double u_sol = bisect(g, lo, hi);
            return std::sqrt(2.0 * s2 * u_sol);
        }
        default:
            throw std::invalid_argument(
                "deterministic_trajectory: implemented for n <= 3");
    }
}

CombinationPdf combination_pdf(const std::function<double(double)>& p,
                               double probe_scale) {
    for (int i = 1; i <= 64; ++i) {
        const double x = probe_scale * static_cast<double>(i) / 64.0;
        if (p(x) < p(-x) - 1e-12)
            throw std::invalid_argument(
                "combination_pdf: requires p(x) >= p(-x) for x >= 0");
    }
    const double alpha = quad::integrate_real_line(
        [&p](double x) { return x * p(x); }, 0.0, probe_scale / 4.0, 1e-12);
    if (std::fabs(alpha) < 1e-12)
        throw std::domain_error(
            "combination_pdf: alpha = 0 (symmetric p), density undefined "
            "without a limit");
    CombinationPdf out;
    out.alpha = alpha;
    out.f = [p, alpha](double x) {
        return x <= 0.0 ? 0.0 : x / alpha * (p(x) - p(-x));
    };
    out.fbar = [p, alpha](double x) { return x / (2.0 * alpha) * (p(x) - p(-x)); };
    return out;
}

core::PathEnsemble simulate_state_sde(const QhoState& state, double y,
                                      const core::TimeGrid& grid, uint64_t seed,
                                      std::size_t n_paths) {
    auto field = core::qho_field(state.n, state.omega, state.sigma);
    // confine to the sub-interval of y between velocity poles
    const auto nds = nodes(state);
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (double nd : nds) {
        if (nd < y) lo = std::max(lo, nd);
        if (nd > y) hi = std::min(hi, nd);
    }
    field.domain_lo = lo;
    field.domain_hi = hi;
    core::WienerConfig cfg(state.diffusion_d(), seed);
    return core::euler_maruyama(field, y, grid, cfg, n_paths);
}

SignedSquareResult signed_square_paths(const QhoState& state, double y0,
                                       const core::TimeGrid& grid, uint64_t seed,
                                       std::size_t n_paths) {
    if (state.n != 1)
        throw std::invalid_argument("signed_square_paths: defined for n = 1");
    if (y0 == 0.0)
        throw std::invalid_argument("signed_square_paths: y0 must be nonzero");
    const double w = state.omega, s2 = state.sigma * state.sigma;
    const double side = y0 > 0.0 ? 1.0 : -1.0;

    core::CoefficientField yfield;
    yfield.a = [w, s2](double y, double) {
        return 6.0 * w * s2 * (y >= 0.0 ? 1.0 : -1.0) - 2.0 * w * y;
    };
    yfield.b = [](double y, double) { return 2.0 * std::sqrt(std::fabs(y)); };
    if (side > 0.0)
        yfield.domain_lo = 0.0;
    else
        yfield.domain_hi = 0.0;
    yfield.label = "qho1-signed-square";
    core::WienerConfig cfg(state.diffusion_d(), seed);
    auto direct = core::euler_maruyama(yfield, y0, grid, cfg, n_paths);

    const double x0 = side * std::sqrt(std::fabs(y0));
    auto xpaths = simulate_state_sde(state, x0, grid, seed ^ 0x5853ull, n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) {
        auto row = xpaths.row(i);
        for (double& v : row) v = v * std::fabs(v);
    }
    xpaths.process_label = "qho1-x-mapped";
    return {std::move(direct), std::move(xpaths)};
}

}  // namespace growthsde::qho
