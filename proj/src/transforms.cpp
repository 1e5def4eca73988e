#include "growthsde/transforms.hpp"

#include <cmath>
#include <stdexcept>

#include "growthsde/quadrature.hpp"

namespace growthsde::transforms {

namespace {

using core::Fn1;

// p(x) = int dx/b from the anchor, plus a monotone inverse.  Closed forms on
// the field win; otherwise adaptive quadrature and bisection.
struct PMap {
    Fn1 p;
    Fn1 p_inv;
};

PMap make_p_map(const CoefficientField& field, double anchor) {
    if (field.p_of_x && field.p_inverse)
        return {field.p_of_x, field.p_inverse};
    auto b = field.b;
    auto p = [b, anchor](double x) {
        return quad::adaptive_simpson(
            [&b](double u) { return 1.0 / b(u, 0.0); }, anchor, x, 1e-12);
    };
    const double lo = field.domain_lo, hi = field.domain_hi;
    auto p_inv = [p, anchor, lo, hi](double y) {
        const double sign = p(anchor + 1e-6 * std::max(1.0, std::fabs(anchor))) >= 0
                                ? 1.0
                                : -1.0;
        double a = anchor, c = anchor;
        double step = std::max(1e-3, 1e-3 * std::fabs(anchor));
        // expand a bracket [a,c] with p(a) <= y <= p(c) (orientation-aware)
        auto val = [&](double x) { return sign * p(x); };
        const double target = sign * y;
        for (int i = 0; i < 200 && val(c) < target; ++i) {
            a = c;
            c += step;
            step *= 2.0;
            if (c >= hi) { c = std::nexttoward(hi, a); break; }
        }
        step = std::max(1e-3, 1e-3 * std::fabs(anchor));
        for (int i = 0; i < 200 && val(a) > target; ++i) {
            c = a;
            a -= step;
            step *= 2.0;
            if (a <= lo) { a = std::nexttoward(lo, c); break; }
        }
        for (int i = 0; i < 120; ++i) {
            const double m = 0.5 * (a + c);
            if (val(m) < target)
                a = m;
            else
                c = m;
        }
        return 0.5 * (a + c);
    };
    return {p, p_inv};
}

double fit_line(const std::vector<double>& u, const std::vector<double>& v,
                double& slope, double& intercept) {
    const double n = static_cast<double>(u.size());
    double su = 0, sv = 0, suu = 0, suv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        su += u[i];
        sv += v[i];
        suu += u[i] * u[i];
        suv += u[i] * v[i];
    }
    slope = (n * suv - su * sv) / (n * suu - su * su);
    intercept = (sv - slope * su) / n;
    double resid = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        resid = std::max(resid, std::fabs(v[i] - slope * u[i] - intercept));
    return resid;
}

double value_scale(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::fabs(x));
    return std::max(s, 1e-30);
}

}  // namespace

LinearSdeCoefficients LinearSdeCoefficients::constants(double a0c, double a1c,
                                                       double b0c, double b1c) {
    LinearSdeCoefficients c;
    c.a0 = [a0c](double) { return a0c; };
    c.a1 = [a1c](double) { return a1c; };
    c.b0 = [b0c](double) { return b0c; };
    c.b1 = [b1c](double) { return b1c; };
    c.constant = true;
    return c;
}

CoefficientField ito_transform(const CoefficientField& field,
                               const TransformMap& map, double diffusion_d) {
    CoefficientField out;
    const CoefficientField f = field;
    const TransformMap m = map;
    const double D = diffusion_d;
    out.a = [f, m, D](double y, double t) {
        const double x = m.g(y, t);
        const double bb = f.b(x, t);
        return m.dh_dt(x, t) + m.dh_dx(x, t) * f.a(x, t) +
               D * m.d2h_dx2(x, t) * bb * bb;
    };
    out.b = [f, m](double y, double t) {
        const double x = m.g(y, t);
        return m.dh_dx(x, t) * f.b(x, t);
    };
    out.time_independent = field.time_independent;
    // transformed domain endpoints follow the (monotone) map
    const double t0 = 0.0;
    double lo = field.domain_lo, hi = field.domain_hi;
    auto map_end = [&](double e, double toward) {
        if (!std::isfinite(e)) return e;  // refined by callers when needed
        return map.h(std::nexttoward(e, toward), t0);
    };
    const double mid = std::isfinite(lo) && std::isfinite(hi) ? 0.5 * (lo + hi)
                       : std::isfinite(lo)                    ? lo + 1.0
                       : std::isfinite(hi)                    ? hi - 1.0
                                                              : 0.0;
    const bool increasing = map.dh_dx(mid, t0) > 0.0;
    double new_lo = map_end(lo, mid), new_hi = map_end(hi, mid);
    if (!increasing) std::swap(new_lo, new_hi);
    out.domain_lo = new_lo;
    out.domain_hi = new_hi;
    out.label = field.label + "|transformed";
    return out;
}

SmoluchowskyResult to_smoluchowsky(const CoefficientField& field,
                                   double diffusion_d, double anchor) {
    if (!field.time_independent)
        throw std::invalid_argument("to_smoluchowsky: field must be time-independent");
    // b must not vanish inside the domain
    const auto probes = core::chebyshev_probes(
        std::isfinite(field.domain_lo) ? field.domain_lo + 1e-9 : anchor - 10.0,
        std::isfinite(field.domain_hi) ? field.domain_hi - 1e-9 : anchor + 10.0,
        33);
    double sign0 = 0.0;
    for (double x : probes) {
        const double bx = field.b(x, 0.0);
        if (bx == 0.0 || (sign0 != 0.0 && std::signbit(bx) != std::signbit(sign0)))
            throw std::domain_error("to_smoluchowsky: b vanishes inside domain");
        sign0 = bx;
    }
    const PMap pm = make_p_map(field, anchor);
    TransformMap map;
    const CoefficientField f = field;
    map.h = [pm](double x, double) { return pm.p(x); };
    map.g = [pm](double y, double) { return pm.p_inv(y); };
    map.h_x = [f](double x, double t) { return 1.0 / f.b(x, t); };
    map.h_xx = [f](double x, double t) {
        const double bb = f.b(x, t);
        return -f.db_dx(x, t) / (bb * bb);
    };
    map.h_t = [](double, double) { return 0.0; };

    CoefficientField out;
    const double D = diffusion_d;
    out.a = [f, pm, D](double y, double) {
        const double x = pm.p_inv(y);
        return f.a(x, 0.0) / f.b(x, 0.0) - D * f.db_dx(x, 0.0);
    };
    out.b = [](double, double) { return 1.0; };
    out.b_x = [](double, double) { return 0.0; };
    out.b_xx = [](double, double) { return 0.0; };
    out.b_t = [](double, double) { return 0.0; };
    out.time_independent = true;
    out.label = field.label + "|smoluchowsky";
    out.p_of_x = [](double x) { return x; };
    out.p_inverse = [](double y) { return y; };
    return {map, out};
}

ConstantCheck check_constant_coeff(const CoefficientField& field,
                                   double diffusion_d, double bracket_lo,
                                   double bracket_hi) {
    const auto probes = core::chebyshev_probes(bracket_lo, bracket_hi);
    std::vector<double> vals(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const double x = probes[i];
        vals[i] = field.a(x, 0.0) -
                  diffusion_d * field.b(x, 0.0) * field.db_dx(x, 0.0);
    }
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double resid = 0.0;
    for (double v : vals) resid = std::max(resid, std::fabs(v - mean));
    ConstantCheck out;
    out.value = mean;
    out.residual = resid;
    out.is_constant = resid <= 1e-8 * std::max(1.0, std::fabs(mean));
    return out;
}

namespace {

double compat_expression(const CoefficientField& f, double D, double x) {
    const double b = f.b(x, 0.0);
    const double aob_prime =
        (f.da_dx(x, 0.0) * b - f.a(x, 0.0) * f.db_dx(x, 0.0)) / (b * b);
    return b * (D * f.d2b_dx2(x, 0.0) - aob_prime);
}

}  // namespace

std::optional<double> check_space_independent(const CoefficientField& field,
                                              double diffusion_d,
                                              double bracket_lo,
                                              double bracket_hi,
                                              double* residual) {
    const auto probes = core::chebyshev_probes(bracket_lo, bracket_hi);
    std::vector<double> vals(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i)
        vals[i] = compat_expression(field, diffusion_d, probes[i]);
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double resid = 0.0;
    for (double v : vals) resid = std::max(resid, std::fabs(v - mean));
    if (residual) *residual = resid;
    if (resid <= 1e-8 * std::max(1.0, std::fabs(mean))) return mean;
    return std::nullopt;
}

SpaceIndependentTransform space_independent_transform(
    const CoefficientField& field, double c, double diffusion_d, double anchor) {
    double resid = 0.0;
    const double span = std::max(1.0, std::fabs(anchor));
    const auto got = check_space_independent(
        field, diffusion_d,
        std::isfinite(field.domain_lo) ? std::max(field.domain_lo + 1e-6, anchor - span)
                                       : anchor - span,
        anchor + span, &resid);
    if (!got || std::fabs(*got - c) > 1e-6 * std::max(1.0, std::fabs(c)))
        throw std::invalid_argument(
            "space_independent_transform: c does not match the compatibility "
            "constant");
    const PMap pm = make_p_map(field, anchor);
    const CoefficientField f = field;
    TransformMap map;
    map.h = [pm, c](double x, double t) { return std::exp(c * t) * pm.p(x); };
    map.g = [pm, c](double y, double t) { return pm.p_inv(y * std::exp(-c * t)); };
    map.h_x = [f, c](double x, double t) { return std::exp(c * t) / f.b(x, t); };
    map.h_xx = [f, c](double x, double t) {
        const double bb = f.b(x, t);
        return -std::exp(c * t) * f.db_dx(x, t) / (bb * bb);
    };
    map.h_t = [pm, c](double x, double t) { return c * std::exp(c * t) * pm.p(x); };

    const double D = diffusion_d;
    const double bracket = pm.p(anchor) * c + f.a(anchor, 0.0) / f.b(anchor, 0.0) -
                           D * f.db_dx(anchor, 0.0);
    auto a_hat = [bracket, c](double t) { return bracket * std::exp(c * t); };
    auto b_hat = [c](double t) { return std::exp(c * t); };
    return {map, a_hat, b_hat};
}

namespace {

// q(x) = a/b - D b' and derivatives by central differences on q itself
struct QFunc {
    const CoefficientField* f;
    double D;
    double operator()(double x) const {
        return f->a(x, 0.0) / f->b(x, 0.0) - D * f->db_dx(x, 0.0);
    }
    double prime(double x) const {
        const double h = 6e-6 * std::max(1.0, std::fabs(x));
        return ((*this)(x + h) - (*this)(x - h)) / (2.0 * h);
    }
};

}  // namespace

std::optional<double> check_linearizable(const CoefficientField& field,
                                         double diffusion_d, double bracket_lo,
                                         double bracket_hi,
                                         std::size_t* n_indeterminate) {
    const QFunc q{&field, diffusion_d};
    const auto probes = core::chebyshev_probes(bracket_lo, bracket_hi);
    std::vector<double> vals;
    std::size_t skipped = 0;
    for (double x : probes) {
        const double qp = q.prime(x);
        const double h = 6e-6 * std::max(1.0, std::fabs(x));
        const double bqp_prime = (field.b(x + h, 0.0) * q.prime(x + h) -
                                  field.b(x - h, 0.0) * q.prime(x - h)) /
                                 (2.0 * h);
        if (std::fabs(qp) < 1e-10 * std::max(1.0, std::fabs(bqp_prime))) {
            ++skipped;
            continue;
        }
        vals.push_back(-bqp_prime / qp);
    }
    if (n_indeterminate) *n_indeterminate = skipped;
    if (vals.size() < probes.size() / 2) return std::nullopt;
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double resid = 0.0;
    for (double v : vals) resid = std::max(resid, std::fabs(v - mean));
    // numerical q'' via differences limits the achievable constancy residual
    if (resid <= 1e-4 * std::max(1.0, std::fabs(mean))) return mean;
    return std::nullopt;
}

std::optional<double> check_linearizable_b1_zero(const CoefficientField& field,
                                                 double diffusion_d,
                                                 double bracket_lo,
                                                 double bracket_hi) {
    const QFunc q{&field, diffusion_d};
    const auto probes = core::chebyshev_probes(bracket_lo, bracket_hi);
    std::vector<double> vals(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i)
        vals[i] = field.b(probes[i], 0.0) * q.prime(probes[i]);
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double resid = 0.0;
    for (double v : vals) resid = std::max(resid, std::fabs(v - mean));
    if (resid <= 1e-6 * std::max(1.0, std::fabs(mean))) return mean;
    return std::nullopt;
}

double time_dependent_compat_residual(const CoefficientField& field,
                                      double diffusion_d, double bracket_lo,
                                      double bracket_hi,
                                      const std::vector<double>& times) {
    const auto probes = core::chebyshev_probes(bracket_lo, bracket_hi, 65);
    auto inner = [&](double x, double t) {
        const double b = field.b(x, t);
        const double h = 6e-6 * std::max(1.0, std::fabs(x));
        const double aob_p = (field.a(x + h, t) / field.b(x + h, t) -
                              field.a(x - h, t) / field.b(x - h, t)) /
                             (2.0 * h);
        return b * (field.db_dt(x, t) / (b * b) - aob_p +
                    diffusion_d * field.d2b_dx2(x, t));
    };
    double resid = 0.0;
    for (double t : times) {
        for (double x : probes) {
            const double h = 1e-4 * std::max(1.0, std::fabs(x));
            const double d = (inner(x + h, t) - inner(x - h, t)) / (2.0 * h);
            resid = std::max(resid, std::fabs(d));
        }
    }
    return resid;
}

Linearization linearize(const CoefficientField& field, double b1_hat,
                        double diffusion_d, double anchor) {
    const PMap pm = make_p_map(field, anchor);
    const CoefficientField f = field;
    const double b1 = b1_hat, D = diffusion_d;
    TransformMap map;
    map.h = [pm, b1](double x, double) { return std::exp(b1 * pm.p(x)); };
    map.g = [pm, b1](double y, double) { return pm.p_inv(std::log(y) / b1); };
    map.h_x = [pm, f, b1](double x, double t) {
        return b1 * std::exp(b1 * pm.p(x)) / f.b(x, t);
    };
    map.h_xx = [pm, f, b1](double x, double t) {
        const double bb = f.b(x, t);
        return b1 * std::exp(b1 * pm.p(x)) * (b1 - f.db_dx(x, t)) / (bb * bb);
    };
    map.h_t = [](double, double) { return 0.0; };

    const QFunc q{&field, diffusion_d};
    const double a1 =
        b1 * q(anchor) + field.b(anchor, 0.0) * q.prime(anchor) + D * b1 * b1;
    const double a0 =
        std::exp(b1 * pm.p(anchor)) * (b1 * q(anchor) + D * b1 * b1 - a1);
    return {map, LinearSdeCoefficients::constants(a0, a1, 0.0, b1)};
}

core::PathEnsemble solve_linear_sde(const LinearSdeCoefficients& coeffs,
                                    double y0, const core::TimeGrid& grid,
                                    const core::WienerConfig& cfg,
                                    std::size_t n_paths) {
    if (n_paths == 0) throw std::invalid_argument("solve_linear_sde: n_paths = 0");
    core::PathEnsemble ens(grid, n_paths, cfg.master_seed, "linear-sde");
    const double dt = grid.dt();
    const double D = cfg.diffusion_d;
    const double step_sd = std::sqrt(2.0 * D * dt);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(core::worker_count())
#endif
    for (long long ip = 0; ip < static_cast<long long>(n_paths); ++ip) {
        const std::size_t i = static_cast<std::size_t>(ip);
        const uint64_t stream = rng::mix2(cfg.master_seed ^ 0x4C696E65ull, i);
        auto y = ens.row(i);
        double z = 0.0;              // Z(t_k)
        double expmz = 1.0;          // e^{-Z(t_k)}
        double drift_int = 0.0;      // int (a0 - 2 D b0 b1) e^{-Z} ds, trapezoid
        double noise_int = 0.0;      // int b0 e^{-Z} dW, left-point
        y[0] = y0;
        for (std::size_t k = 0; k < grid.n_steps; ++k) {
            const double t = grid.time(k);
            const double dw = step_sd * rng::normal(cfg.master_seed, stream, k);
            const double drift_coef = coeffs.a0(t) - 2.0 * D * coeffs.b0(t) * coeffs.b1(t);
            const double prev_integrand = drift_coef * expmz;
            noise_int += coeffs.b0(t) * expmz * dw;
            z += (coeffs.a1(t) - D * coeffs.b1(t) * coeffs.b1(t)) * dt +
                 coeffs.b1(t) * dw;
            expmz = std::exp(-z);
            const double t1 = grid.time(k + 1);
            const double drift_coef1 =
                coeffs.a0(t1) - 2.0 * D * coeffs.b0(t1) * coeffs.b1(t1);
            drift_int += 0.5 * dt * (prev_integrand + drift_coef1 * expmz);
            y[k + 1] = (y0 + drift_int + noise_int) / expmz;
        }
    }
    return ens;
}

StationaryResult boltzmann_stationary(const CoefficientField& field,
                                      double diffusion_d, double bracket_lo,
                                      double bracket_hi) {
    if (!field.time_independent)
        throw std::invalid_argument("boltzmann_stationary: field must be time-independent");
    const double D = diffusion_d;
    // psi = d/dx log f_tilde = (a/b - 2 D b') / (D b)
    auto psi = [&](double x) {
        const double b = field.b(x, 0.0);
        return (field.a(x, 0.0) / b - 2.0 * D * field.db_dx(x, 0.0)) / (D * b);
    };
    const auto probes = core::chebyshev_probes(bracket_lo, bracket_hi, 129);
    std::vector<double> px(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) px[i] = psi(probes[i]);

    const bool positive_domain = field.domain_lo >= 0.0;
    const double scale = value_scale(px);
    double slope, intercept;

    // 1. psi affine in x -> normal
    if (fit_line(probes, px, slope, intercept) <= 1e-9 * scale && slope < 0.0) {
        const double v = -1.0 / slope;
        const double m = v * intercept;  // psi = (m - x)/v
        StationaryResult r;
        r.kind = StationaryKind::recognized_law;
        r.law = core::AnalyticLaw::normal(m, v);
        return r;
    }

    if (positive_domain) {
        std::vector<double> g(probes.size());
        for (std::size_t i = 0; i < probes.size(); ++i) g[i] = probes[i] * px[i];
        const double gscale = value_scale(g);
        // 2. x psi affine in x -> gamma(A+1, -slope)
        if (fit_line(probes, g, slope, intercept) <= 1e-9 * gscale) {
            const double shape = intercept + 1.0, rate = -slope;
            if (shape > 0.0 && rate > 0.0) {
                StationaryResult r;
                r.kind = StationaryKind::recognized_law;
                r.law = core::AnalyticLaw::gamma(shape, rate);
                return r;
            }
            StationaryResult r;
            r.divergence_endpoint = shape <= 0.0 ? "0" : "+inf";
            return r;
        }
        // 3. x psi affine in ln x -> lognormal
        std::vector<double> lx(probes.size());
        for (std::size_t i = 0; i < probes.size(); ++i) lx[i] = std::log(probes[i]);
        if (fit_line(lx, g, slope, intercept) <= 1e-9 * gscale && slope < 0.0) {
            const double v = -1.0 / slope;
            const double m = (intercept + 1.0) * v;
            StationaryResult r;
            r.kind = StationaryKind::recognized_law;
            r.law = core::AnalyticLaw::lognormal(m, v);
            return r;
        }
        // 5. x psi = A - c x^p -> generalized gamma / inverse gamma
        {
            std::vector<double> lgp, lxp;
            bool usable = true;
            double sgn = 0.0;
            for (std::size_t i = 1; i + 1 < probes.size(); ++i) {
                const double gp = (g[i + 1] - g[i - 1]) / (probes[i + 1] - probes[i - 1]);
                if (gp == 0.0 || (sgn != 0.0 && std::signbit(gp) != std::signbit(sgn))) {
                    usable = false;
                    break;
                }
                sgn = gp;
                lgp.push_back(std::log(std::fabs(gp)));
                lxp.push_back(std::log(probes[i]));
            }
            if (usable) {
                const double lr = fit_line(lxp, lgp, slope, intercept);
                if (lr <= 1e-5 * std::max(1.0, value_scale(lgp))) {
                    const double p = slope + 1.0;
                    if (std::fabs(p) > 1e-6) {
                        // g' = -c p x^{p-1}
                        const double cp = -sgn / std::fabs(sgn) *
                                          std::exp(intercept);  // |c p| signed
                        const double c = cp / p;
                        double A = 0.0;
                        for (std::size_t i = 0; i < probes.size(); ++i)
                            A += g[i] + c * std::pow(probes[i], p);
                        A /= static_cast<double>(probes.size());
                        if (std::fabs(p + 1.0) < 1e-6) {
                            const double shape = -(A + 1.0), s = -c;
                            if (shape > 0.0 && s > 0.0) {
                                StationaryResult r;
                                r.kind = StationaryKind::recognized_law;
                                r.law = core::AnalyticLaw::inverse_gamma(shape, s);
                                return r;
                            }
                        } else if (p > 0.0 && c > 0.0) {
                            const double d = A + 1.0;
                            if (d > 0.0) {
                                const double a_scale = std::pow(p / c, 1.0 / p);
                                StationaryResult r;
                                r.kind = StationaryKind::recognized_law;
                                r.law = core::AnalyticLaw::generalized_gamma(d, a_scale, p);
                                return r;
                            }
                            StationaryResult r;
                            r.divergence_endpoint = "0";
                            return r;
                        }
                    }
                }
            }
        }
    } else {
        // 4. psi affine in e^x -> log-gamma
        std::vector<double> ex(probes.size());
        for (std::size_t i = 0; i < probes.size(); ++i) ex[i] = std::exp(probes[i]);
        if (fit_line(ex, px, slope, intercept) <= 1e-9 * scale && slope < 0.0 &&
            intercept > 0.0) {
            StationaryResult r;
            r.kind = StationaryKind::recognized_law;
            r.law = core::AnalyticLaw::log_gamma(intercept, -slope);
            return r;
        }
    }

    // numeric fallback: accumulate log-weight from the bracket midpoint
    const std::size_t n = 2048;
    std::vector<double> xs(n), logw(n);
    const double lo =
        positive_domain ? std::max(bracket_lo, field.domain_lo + 1e-12) : bracket_lo;
    for (std::size_t i = 0; i < n; ++i)
        xs[i] = lo + (bracket_hi - lo) * static_cast<double>(i) /
                         static_cast<double>(n - 1);
    logw[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i)
        logw[i] = logw[i - 1] +
                  0.5 * (psi(xs[i]) + psi(xs[i - 1])) * (xs[i] - xs[i - 1]);
    // integrability: the log-weight must fall off toward both ends
    double peak = logw[0];
    for (double v : logw) peak = std::max(peak, v);
    if (logw.back() > peak - 8.0 || logw.front() > peak - 8.0) {
        StationaryResult r;
        r.divergence_endpoint = logw.back() > peak - 8.0 ? "+end" : "-end";
        return r;
    }
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = std::exp(logw[i] - peak);
    StationaryResult r;
    r.kind = StationaryKind::numeric_curve;
    r.curve = core::DensityCurve(std::move(xs), std::move(f));
    r.curve.normalize();
    return r;
}

}  // namespace growthsde::transforms
