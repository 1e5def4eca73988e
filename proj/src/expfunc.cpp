#include "growthsde/expfunc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "growthsde/quadrature.hpp"
#include "growthsde/sample_stats.hpp"

namespace growthsde::expfunc {

double MomentExpression::evaluate(double t, double diffusion_d) const {
    double acc = 0.0;
    for (const auto& [c, j] : terms)
        acc += c.get_d() * std::exp(static_cast<double>(j) * diffusion_d * t);
    return acc / std::pow(diffusion_d, order_n);
}

bool MomentExpression::operator==(const MomentExpression& other) const {
    return order_n == other.order_n && terms == other.terms;
}

std::string MomentExpression::to_string() const {
    std::ostringstream os;
    os << "M_" << order_n << "(t) = [";
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) os << " + ";
        os << terms[i].first.get_str() << " e^{" << terms[i].second << " D t}";
    }
    os << "] / D^" << order_n;
    return os.str();
}

MomentExpression moment_recursive(int n) {
    if (n < 1 || n > 64)
        throw std::invalid_argument("moment_recursive: need 1 <= n <= 64");
    // F_0 = 1; at level k multiply by e^{(2(n-k)+1) v} and integrate each
    // term with int_0^v e^{m u} du = (e^{m v} - 1)/m.
    std::map<int, mpq_class> poly{{0, mpq_class(1)}};
    for (int k = 1; k <= n; ++k) {
        const int shift = 2 * (n - k) + 1;
        std::map<int, mpq_class> integrated;
        mpq_class constant(0);
        for (const auto& [j, c] : poly) {
            const int m = j + shift;
            if (m == 0)
                throw std::logic_error(
                    "moment_recursive: zero exponent cannot occur");
            const mpq_class cm = c / m;
            integrated[m] += cm;
            constant -= cm;
        }
        if (constant != 0) integrated[0] += constant;
        for (auto it = integrated.begin(); it != integrated.end();)
            it = it->second == 0 ? integrated.erase(it) : std::next(it);
        poly = std::move(integrated);
    }
    mpz_class fact(1);
    for (int k = 2; k <= n; ++k) fact *= k;
    MomentExpression out;
    out.order_n = n;
    for (const auto& [j, c] : poly) {
        mpq_class v = c * fact;
        v.canonicalize();
        out.terms.emplace_back(v, j);
    }
    return out;
}

MomentExpression moment_conjecture(int n) {
    if (n < 1) throw std::invalid_argument("moment_conjecture: need n >= 1");
    mpz_class fact(1);
    for (int k = 2; k <= n; ++k) fact *= k;
    MomentExpression out;
    out.order_n = n;
    std::map<int, mpq_class> poly;
    for (int k = 0; k <= n; ++k) {
        mpz_class denom(1);
        for (int j = 2; j <= n - k; ++j) denom *= j;
        for (int j = 2; j <= n + k; ++j) denom *= j;
        mpq_class c(fact * (k == 0 ? 1 : 2), denom);
        if ((n + k) % 2) c = -c;
        c.canonicalize();
        poly[k * k] += c;
    }
    for (const auto& [j, c] : poly)
        if (c != 0) out.terms.emplace_back(c, j);
    return out;
}

core::PathEnsemble sample_integral(const core::TimeGrid& grid,
                                   const core::WienerConfig& cfg,
                                   std::size_t n_paths) {
    if (n_paths == 0) throw std::invalid_argument("sample_integral: n_paths = 0");
    core::PathEnsemble ens(grid, n_paths, cfg.master_seed, "exp-functional");
    const double dt = grid.dt();
    const double step_sd = std::sqrt(2.0 * cfg.diffusion_d * dt);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(core::worker_count())
#endif
    for (long long ip = 0; ip < static_cast<long long>(n_paths); ++ip) {
        const std::size_t i = static_cast<std::size_t>(ip);
        const uint64_t stream = rng::mix2(cfg.master_seed ^ 0x45787046ull, i);
        auto x = ens.row(i);
        double w = 0.0, ew_prev = 1.0;
        x[0] = 0.0;
        for (std::size_t k = 0; k < grid.n_steps; ++k) {
            w += step_sd * rng::normal(cfg.master_seed, stream, k);
            const double ew = std::exp(w);
            x[k + 1] = x[k] + 0.5 * dt * (ew_prev + ew);
            ew_prev = ew;
        }
    }
    return ens;
}

double two_time_sum_pdf_at(double z, double s, double t, double diffusion_d) {
    if (!(0.0 < s && s <= t))
        throw std::invalid_argument("two_time_sum_pdf: need 0 < s <= t");
    if (z <= 1e-12) return 0.0;
    const double D = diffusion_d;
    const double vs = 4.0 * D * s;            // log-variance scale of X
    const double vt = 4.0 * D * (t - s);      // of Y - 1
    // substitute x = z e^u/(1+e^u): integrand becomes Gaussian-weighted in u
    auto integrand = [&](double u) {
        const double sig = 1.0 / (1.0 + std::exp(-u));  // x/z
        const double x = z * sig;
        const double lx = std::log(x);
        const double fx = std::exp(-lx * lx / vs) /
                          (x * std::sqrt(std::numbers::pi * vs));
        const double gy = std::exp(-u * u / vt) / std::sqrt(std::numbers::pi * vt);
        return fx * gy * sig;
    };
    const double span = 10.0 * std::sqrt(std::max(vs, vt)) + 20.0;
    return quad::adaptive_simpson(integrand, -span, span, 1e-12);
}

core::DensityCurve two_time_sum_pdf(double s, double t, double diffusion_d,
                                    const std::vector<double>& z_grid) {
    std::vector<double> f(z_grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(core::worker_count())
#endif
    for (long long i = 0; i < static_cast<long long>(z_grid.size()); ++i)
        f[static_cast<std::size_t>(i)] =
            two_time_sum_pdf_at(z_grid[static_cast<std::size_t>(i)], s, t,
                                diffusion_d);
    return core::DensityCurve(z_grid, std::move(f));
}

namespace {

// simulate to t and return (X(t) = int e^W, Y(t) = e^{W(t)}) pairs
void simulate_xy(double t, const core::WienerConfig& cfg, std::size_t n_paths,
                 std::size_t n_steps, std::vector<double>& xs,
                 std::vector<double>& ys) {
    const double dt = t / static_cast<double>(n_steps);
    const double step_sd = std::sqrt(2.0 * cfg.diffusion_d * dt);
    xs.resize(n_paths);
    ys.resize(n_paths);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(core::worker_count())
#endif
    for (long long ip = 0; ip < static_cast<long long>(n_paths); ++ip) {
        const std::size_t i = static_cast<std::size_t>(ip);
        const uint64_t stream = rng::mix2(cfg.master_seed ^ 0x56656C6Full, i);
        double w = 0.0, ew_prev = 1.0, x = 0.0;
        for (std::size_t k = 0; k < n_steps; ++k) {
            w += step_sd * rng::normal(cfg.master_seed, stream, k);
            const double ew = std::exp(w);
            x += 0.5 * dt * (ew_prev + ew);
            ew_prev = ew;
        }
        xs[i] = x;
        ys[i] = ew_prev;
    }
}

}  // namespace

VelocityField velocity_field_estimate(double t, const core::WienerConfig& cfg,
                                      std::size_t n_paths, std::size_t n_bins,
                                      double dt_check, std::size_t n_steps) {
    if (!(t > 0.0)) throw std::invalid_argument("velocity_field_estimate: t > 0");
    std::vector<double> x0, y0, xm, ym, xp, yp;
    simulate_xy(t, cfg, n_paths, n_steps, x0, y0);
    simulate_xy(t - dt_check, cfg, n_paths, n_steps, xm, ym);
    simulate_xy(t + dt_check, cfg, n_paths, n_steps, xp, yp);

    // common bin range from the central sample's bulk
    std::vector<double> sorted(x0);
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted[static_cast<std::size_t>(0.001 * n_paths)];
    const double hi = sorted[static_cast<std::size_t>(0.995 * n_paths)];
    const double w = (hi - lo) / static_cast<double>(n_bins);

    std::vector<double> vsum(n_bins, 0.0);
    std::vector<std::size_t> count(n_bins, 0);
    for (std::size_t i = 0; i < n_paths; ++i) {
        if (x0[i] < lo || x0[i] >= hi) continue;
        const std::size_t b = static_cast<std::size_t>((x0[i] - lo) / w);
        vsum[b] += y0[i];
        ++count[b];
    }
    std::vector<double> centers(n_bins), v(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b) {
        centers[b] = lo + w * (static_cast<double>(b) + 0.5);
        v[b] = count[b] ? vsum[b] / static_cast<double>(count[b]) : 0.0;
    }

    auto hist = [&](const std::vector<double>& xs) {
        std::vector<double> f(n_bins, 0.0);
        for (double xv : xs)
            if (xv >= lo && xv < hi)
                f[static_cast<std::size_t>((xv - lo) / w)] += 1.0;
        for (double& fv : f) fv /= static_cast<double>(n_paths) * w;
        return f;
    };
    const auto fm = hist(xm), fp = hist(xp), f0 = hist(x0);

    // continuity residual: d_t f + d_x [v f] over interior bins
    double l1 = 0.0;
    for (std::size_t b = 1; b + 1 < n_bins; ++b) {
        const double dfdt = (fp[b] - fm[b]) / (2.0 * dt_check);
        const double flux_r = v[b + 1] * f0[b + 1];
        const double flux_l = v[b - 1] * f0[b - 1];
        const double dflux = (flux_r - flux_l) / (2.0 * w);
        l1 += std::fabs(dfdt + dflux) * w;
    }

    VelocityField out;
    out.v = core::DensityCurve(std::move(centers), std::move(v));
    out.count = std::move(count);
    out.continuity_residual_l1 = l1;
    return out;
}

JointFpeResult joint_fpe_residual(double t, const core::WienerConfig& cfg,
                                  std::size_t n_paths, std::size_t n_cells,
                                  double dt_check, std::size_t n_steps) {
    const double D = cfg.diffusion_d;
    std::vector<double> x0, y0, xm, ym, xp, yp;
    simulate_xy(t, cfg, n_paths, n_steps, x0, y0);
    simulate_xy(t - dt_check, cfg, n_paths, n_steps, xm, ym);
    simulate_xy(t + dt_check, cfg, n_paths, n_steps, xp, yp);

    // log-spaced cells covering the central bulk
    auto quantile = [](std::vector<double> v, double p) {
        const std::size_t k = static_cast<std::size_t>(p * (v.size() - 1));
        std::nth_element(v.begin(), v.begin() + k, v.end());
        return v[k];
    };
    const double xlo = std::log(quantile(x0, 0.002)),
                 xhi = std::log(quantile(x0, 0.998));
    const double ylo = std::log(quantile(y0, 0.002)),
                 yhi = std::log(quantile(y0, 0.998));
    const double wx = (xhi - xlo) / static_cast<double>(n_cells);
    const double wy = (yhi - ylo) / static_cast<double>(n_cells);

    auto hist2 = [&](const std::vector<double>& xs, const std::vector<double>& ys) {
        std::vector<double> f(n_cells * n_cells, 0.0);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double lx = std::log(xs[i]), ly = std::log(ys[i]);
            if (lx < xlo || lx >= xhi || ly < ylo || ly >= yhi) continue;
            const std::size_t bx = static_cast<std::size_t>((lx - xlo) / wx);
            const std::size_t by = static_cast<std::size_t>((ly - ylo) / wy);
            f[bx * n_cells + by] += 1.0;
        }
        // density in (x, y) space: divide by cell area x*y*wx*wy
        for (std::size_t bx = 0; bx < n_cells; ++bx)
            for (std::size_t by = 0; by < n_cells; ++by) {
                const double xc = std::exp(xlo + wx * (bx + 0.5));
                const double yc = std::exp(ylo + wy * (by + 0.5));
                f[bx * n_cells + by] /=
                    static_cast<double>(xs.size()) * xc * yc * wx * wy;
            }
        return f;
    };
    const auto f0 = hist2(x0, y0), fm = hist2(xm, ym), fp = hist2(xp, yp);

    auto cell = [&](const std::vector<double>& f, std::size_t bx, std::size_t by) {
        return f[bx * n_cells + by];
    };
    auto xc_of = [&](std::size_t bx) { return std::exp(xlo + wx * (bx + 0.5)); };
    auto yc_of = [&](std::size_t by) { return std::exp(ylo + wy * (by + 0.5)); };

    double l1 = 0.0;
    std::size_t starved = 0;
    const double min_density_paths = 16.0;
    for (std::size_t bx = 1; bx + 1 < n_cells; ++bx) {
        for (std::size_t by = 1; by + 1 < n_cells; ++by) {
            const double xc = xc_of(bx), yc = yc_of(by);
            const double area = xc * yc * wx * wy;
            if (cell(f0, bx, by) * area * static_cast<double>(n_paths) <
                min_density_paths) {
                ++starved;
                continue;
            }
            const double dfdt = (cell(fp, bx, by) - cell(fm, bx, by)) / (2.0 * dt_check);
            // d_x f on log grid: df/dx = df/dlx / x
            const double dfdx =
                (cell(f0, bx + 1, by) - cell(f0, bx - 1, by)) / (2.0 * wx * xc);
            // d_y [y f] and d_y^2 [y^2 f]
            auto yf = [&](std::size_t byy) { return yc_of(byy) * cell(f0, bx, byy); };
            auto y2f = [&](std::size_t byy) {
                const double yv = yc_of(byy);
                return yv * yv * cell(f0, bx, byy);
            };
            const double d_yf = (yf(by + 1) - yf(by - 1)) / (2.0 * wy * yc);
            // second derivative in y via log-spaced three-point stencil
            const double ym1 = yc_of(by - 1), yp1 = yc_of(by + 1);
            const double h1 = yc - ym1, h2 = yp1 - yc;
            const double d2_y2f = 2.0 * (h1 * y2f(by + 1) - (h1 + h2) * y2f(by) +
                                         h2 * y2f(by - 1)) /
                                  (h1 * h2 * (h1 + h2));
            const double resid = dfdt - D * d2_y2f + yc * dfdx + D * d_yf;
            l1 += std::fabs(resid) * area;
        }
    }

    JointFpeResult out;
    out.residual_l1 = l1;
    out.y_marginal_ks =
        core::ks_distance(y0, core::AnalyticLaw::lognormal(0.0, 2.0 * D * t));
    out.starved_cells = starved;
    return out;
}

}  // namespace growthsde::expfunc
