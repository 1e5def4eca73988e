#include "growthsde/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "growthsde/bridges.hpp"
#include "growthsde/core.hpp"
#include "growthsde/expfunc.hpp"
#include "growthsde/fokkerplanck.hpp"
#include "growthsde/gompertz.hpp"
#include "growthsde/io.hpp"
#include "growthsde/logistic.hpp"
#include "growthsde/quadrature.hpp"
#include "growthsde/stats.hpp"
#include "growthsde/stochmech.hpp"
#include "growthsde/transforms.hpp"

namespace growthsde::acceptance {

namespace {

using namespace growthsde;

struct Check {
    bool ok = true;
    std::ostringstream msg;

    void require(bool cond, const std::string& what) {
        if (!cond) ok = false;
        msg << (cond ? "[ok] " : "[FAIL] ") << what << "; ";
    }
};

std::string fmt(double v) {
    char b[32];
    std::snprintf(b, sizeof(b), "%.4g", v);
    return b;
}

// ---- criterion 1: moment conjecture settled in exact arithmetic -----------

CriterionResult c1_moments() {
    Check c;
    for (int n = 1; n <= 12; ++n) {
        const auto rec = expfunc::moment_recursive(n);
        const auto conj = expfunc::moment_conjecture(n);
        if (!(rec == conj)) c.require(false, "n=" + std::to_string(n));
    }
    if (c.ok) c.msg << "recursive == conjecture exactly for n <= 12; ";
    // the four printed low-order moments, frozen as exact rationals
    auto expect = [&](int n, std::vector<std::pair<long, int>> num,
                      long den) {
        const auto rec = expfunc::moment_recursive(n);
        bool same = rec.terms.size() == num.size();
        for (std::size_t i = 0; same && i < num.size(); ++i)
            same = rec.terms[i].first == mpq_class(num[i].first, den) &&
                   rec.terms[i].second == num[i].second;
        c.require(same, "printed M_" + std::to_string(n));
    };
    expect(1, {{-1, 0}, {1, 1}}, 1);
    expect(2, {{3, 0}, {-4, 1}, {1, 4}}, 6);
    expect(3, {{-10, 0}, {15, 1}, {-6, 4}, {1, 9}}, 60);
    expect(4, {{35, 0}, {-56, 1}, {28, 4}, {-8, 9}, {1, 16}}, 840);
    return {1, "moment-conjecture settlement (n <= 12, exact rationals)", c.ok,
            c.msg.str()};
}

// ---- criterion 2: Gompertz exactness ---------------------------------------

CriterionResult c2_gompertz(uint64_t seed, std::size_t n_paths) {
    Check c;
    const gompertz::GompertzParams p(1.0, 0.5);
    {
        const core::TimeGrid grid(0.0, 3.0, 4096 * 3);
        auto ens = gompertz::exact_paths(p, 1.0, grid, seed, n_paths);
        const double ks =
            core::ks_distance(ens.terminal(), gompertz::transition_law(p, 1.0, 0.0, 3.0));
        c.require(ks < 0.01, "KS(t=3) = " + fmt(ks) + " < 0.01");
    }
    {
        const core::TimeGrid grid(0.0, 20.0, 8192);
        auto ens = gompertz::exact_paths(p, 1.0, grid, seed + 1, n_paths);
        const auto stat = core::AnalyticLaw::lognormal(
            (1.0 - p.diffusion_d) / p.alpha, p.diffusion_d / p.alpha);
        const double ks = core::ks_distance(ens.terminal(), stat);
        c.require(ks < 0.01, "KS(t=20 vs stationary) = " + fmt(ks) + " < 0.01");
    }
    return {2, "Gompertz exact paths vs lognormal transition/stationary law",
            c.ok, c.msg.str()};
}

// ---- criterion 3: deterministic limits -------------------------------------

CriterionResult c3_deterministic(uint64_t seed) {
    Check c;
    const double D = 1e-12;
    const core::TimeGrid grid(0.0, 10.0, 4096);
    for (auto [alpha, x0] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {0.5, 3.0}}) {
        const gompertz::GompertzParams p(alpha, D);
        auto ens = gompertz::exact_paths(p, x0, grid, seed, 1);
        double sup = 0.0;
        const auto row = ens.row(0);
        for (std::size_t k = 0; k < grid.n_points(); ++k)
            sup = std::max(sup, std::fabs(row[k] - gompertz::deterministic_path(
                                                       p, x0, grid.time(k))));
        c.require(sup < 1e-4, "gompertz(alpha=" + fmt(alpha) + ",x0=" + fmt(x0) +
                                  ") sup = " + fmt(sup));
    }
    for (auto [theta, x0] : {std::pair{1.0, 0.5}, {2.0, 2.0}, {0.5, 1.5}}) {
        const logistic::ThetaLogisticParams p(theta, D);
        auto ens = logistic::pathwise_solution(p, x0, grid, seed, 1);
        double sup = 0.0;
        const auto row = ens.row(0);
        for (std::size_t k = 0; k < grid.n_points(); ++k)
            sup = std::max(sup, std::fabs(row[k] - logistic::deterministic_path(
                                                       p, x0, grid.time(k))));
        c.require(sup < 1e-4, "theta-logistic(theta=" + fmt(theta) + ",x0=" +
                                  fmt(x0) + ") sup = " + fmt(sup));
    }
    return {3, "deterministic D -> 0 limits of the exact solvers", c.ok,
            c.msg.str()};
}

// ---- criterion 4: logistic stationarity ------------------------------------

CriterionResult c4_logistic_stationary(uint64_t seed, std::size_t n_paths) {
    Check c;
    {
        const logistic::ThetaLogisticParams p(1.0, 0.5);
        const core::TimeGrid grid(0.0, 30.0, 8192);
        auto ens = logistic::pathwise_solution(p, 1.0 - p.diffusion_d, grid,
                                               seed, n_paths);
        const double ks =
            core::ks_distance(ens.terminal(), logistic::stationary_law(p));
        c.require(ks < 0.01, "D=0.5 KS = " + fmt(ks) + " < 0.01 (vs Gamma(1,2))");
    }
    {
        const logistic::ThetaLogisticParams p(1.0, 0.9);
        const core::TimeGrid grid(0.0, 30.0, 8192);
        auto ens = logistic::pathwise_solution(p, 1.0 - p.diffusion_d, grid,
                                               seed + 1, n_paths);
        const double ks =
            core::ks_distance(ens.terminal(), logistic::stationary_law(p));
        c.require(ks < 0.015, "D=0.9 KS = " + fmt(ks) + " < 0.015");
    }
    return {4, "logistic long-time marginal vs stationary gamma law", c.ok,
            c.msg.str()};
}

// ---- criterion 5: Appendix C.1 engine validation ---------------------------

CriterionResult c5_semi_explicit(uint64_t seed, std::size_t n_paths) {
    Check c;
    const double D = 0.5;
    {
        auto field = core::gompertz_field(1.0);
        const gompertz::GompertzParams p(1.0, D);
        const auto law = gompertz::transition_law(p, 1.0, 0.0, 1.0);
        double worst = 0.0;
        for (double x : {0.6, 0.9, 1.2, 1.6, 2.2}) {
            const auto est = stats::semi_explicit_pdf_general(field, D, x, 1.0,
                                                              1.0, 0.0, 10000,
                                                              seed);
            worst = std::max(worst,
                             std::fabs(est.value - law.pdf(x)) / law.pdf(x));
        }
        c.require(worst < 0.02,
                  "gompertz pointwise rel err = " + fmt(worst) + " < 2%");
    }
    {
        const logistic::ThetaLogisticParams p(1.0, D);
        const core::TimeGrid grid(0.0, 1.0, 4096);
        auto ens = logistic::pathwise_solution(p, 1.0, grid, seed + 2, n_paths);
        const auto terminal = ens.terminal();
        auto hist = core::histogram_density(terminal, 0.05, 3.0, 59);
        double sup = 0.0;
        for (std::size_t i = 0; i < hist.x.size(); ++i) {
            const auto est = logistic::semi_explicit_transition(
                p, hist.x[i], 1.0, 1.0, 0.0, 10000, seed + 3);
            sup = std::max(sup, std::fabs(est.value - hist.f[i]));
        }
        c.require(sup < 0.05, "logistic MC-vs-MC sup = " + fmt(sup) + " < 0.05");
    }
    return {5, "semi-explicit transition engine vs closed form / pathwise MC",
            c.ok, c.msg.str()};
}

// ---- criterion 6: spectrum checks ------------------------------------------

CriterionResult c6_spectra() {
    Check c;
    {  // logistic reduced problem at D = 0.1
        const double D = 0.1;
        fpe::FpeProblem prob;
        prob.drift = [](double x) { return x * (1.0 - x); };
        prob.drift_prime = [](double x) { return 1.0 - 2.0 * x; };
        prob.diffusion = [D](double x) { return D * x * x; };
        prob.diffusion_prime = [D](double x) { return 2.0 * D * x; };
        prob.lo = 1e-6;
        prob.hi = 25.0;
        auto sl = fpe::reduce_to_sturm_liouville(prob);
        auto eig = fpe::numeric_eigensolve(sl, 14, 6000);
        int negative_from = 0;
        const auto analytic = fpe::logistic_eigenvalues(D, 9, &negative_from);
        double worst = 0.0;
        for (std::size_t n = 1; n < analytic.size(); ++n) {
            if (analytic[n] <= 0.0) continue;
            double best = 1e300;
            for (double lam : eig.eigenvalues)
                best = std::min(best, std::fabs(lam - analytic[n]) / analytic[n]);
            worst = std::max(worst, best);
        }
        c.require(worst < 1e-2,
                  "logistic positive spectrum rel err = " + fmt(worst));
    }
    {  // QHO n = 1 on the positive half line: mu_m = 2m
        const qho::QhoState state(1, 1.0, 1.0);
        fpe::FpeProblem prob;
        prob.drift = [state](double x) { return qho::forward_velocity(state, x); };
        prob.drift_prime = [state](double x) {
            return qho::forward_velocity_derivative(state, x);
        };
        prob.diffusion = [](double) { return 1.0; };
        prob.diffusion_prime = [](double) { return 0.0; };
        prob.lo = 1e-6;
        prob.hi = 12.0;
        auto eig = fpe::numeric_eigensolve(fpe::reduce_to_sturm_liouville(prob),
                                           4, 4000);
        double worst = 0.0;
        for (int m = 0; m <= 3; ++m)
            worst = std::max(worst, std::fabs(eig.eigenvalues[m] - 2.0 * m) /
                                        std::max(1.0, 2.0 * m));
        c.require(worst < 1e-3, "qho n=1 mu_m=2m rel err = " + fmt(worst));
    }
    {  // QHO n = 2, central interval [-sigma, sigma]
        const qho::QhoState state(2, 1.0, 1.0);
        fpe::FpeProblem prob;
        prob.drift = [state](double x) { return qho::forward_velocity(state, x); };
        prob.drift_prime = [state](double x) {
            return qho::forward_velocity_derivative(state, x);
        };
        prob.diffusion = [](double) { return 1.0; };
        prob.diffusion_prime = [](double) { return 0.0; };
        prob.lo = -1.0;
        prob.hi = 1.0;
        auto eig = fpe::numeric_eigensolve(fpe::reduce_to_sturm_liouville(prob),
                                           8, 4000);
        // the numeric spectrum interleaves even modes the odd-family shortcut
        // skips, so each reported value is matched to its nearest eigenvalue
        const double ref[3] = {7.44, 37.06, 86.41};
        double worst = 0.0;
        for (double target : ref) {
            double best = 1e300;
            for (double lam : eig.eigenvalues)
                best = std::min(best, std::fabs(lam - target) / target);
            worst = std::max(worst, best);
        }
        c.require(worst < 0.01, "qho n=2 central eigenvalues rel err = " + fmt(worst));
    }
    return {6, "Sturm-Liouville spectra vs closed forms and reported values",
            c.ok, c.msg.str()};
}

// ---- criterion 7: QHO n = 1 closed form vs singular-drift MC ---------------

CriterionResult c7_qho1(uint64_t seed, std::size_t n_paths) {
    Check c;
    const qho::QhoState state(1, 1.0, 1.0);
    const core::TimeGrid grid(0.0, 1.0, 4096);
    auto ens = qho::simulate_state_sde(state, 1.0, grid, seed, n_paths);
    const auto terminal = ens.terminal();
    // tabulated cdf of the closed-form transition on (0, 8 sigma)
    const std::size_t m = 4001;
    std::vector<double> xs(m), pdf(m);
    for (std::size_t i = 0; i < m; ++i) {
        xs[i] = 8.0 * static_cast<double>(i) / static_cast<double>(m - 1);
        pdf[i] = qho::excited1_transition(state, std::max(xs[i], 1e-12), 1.0,
                                          0.0, 1.0);
    }
    core::DensityCurve curve(xs, pdf);
    const double ks = core::ks_distance_cdf(
        terminal, [&](double x) { return curve.cdf_at(x); });
    c.require(ks < 0.02, "KS(MC vs closed form) = " + fmt(ks) + " < 0.02");

    const double mc_mean = core::sample_mean(terminal);
    const double formula = qho::excited1_conditional_mean(state, 1.0, 1.0);
    c.require(std::fabs(mc_mean - formula) / formula < 0.01,
              "conditional mean MC " + fmt(mc_mean) + " vs formula " +
                  fmt(formula));

    const double asym = qho::excited1_conditional_mean(state, 1.0, 10.0);
    const double target = 2.0 * std::sqrt(2.0 / std::numbers::pi);
    c.require(std::fabs(asym - target) / target < 0.01,
              "t=10 mean " + fmt(asym) + " vs 2 sigma sqrt(2/pi) = " + fmt(target));
    return {7, "QHO n=1 transition law vs singular-drift Monte Carlo", c.ok,
            c.msg.str()};
}

// ---- criterion 8: bridge covariance ----------------------------------------

CriterionResult c8_bridges(uint64_t seed, std::size_t n_samples) {
    Check c;
    {
        const double D = 0.7, s = 0.3, t = 1.3;
        const std::vector<double> r{0.25, 0.6};
        const auto w = bridges::conditional_bridge_nodes(
            s, t, r, core::WienerConfig(D, seed), n_samples);
        double m1 = 0, m2 = 0, m12 = 0;
        for (std::size_t i = 0; i < n_samples; ++i) {
            m1 += w[2 * i];
            m2 += w[2 * i + 1];
            m12 += w[2 * i] * w[2 * i + 1];
        }
        const double n = static_cast<double>(n_samples);
        const double cov = m12 / n - (m1 / n) * (m2 / n);
        const double exact = 2.0 * D * (t - s) * (0.25 - 0.25 * 0.6);
        c.require(std::fabs(cov - exact) / exact < 0.01,
                  "bridge cov " + fmt(cov) + " vs " + fmt(exact));
    }
    {
        const double D = 0.8, T = 2.0;
        auto ens = bridges::sample_bridge(bridges::linear_shape(0.0, 0.0, T),
                                          core::TimeGrid(0.0, T, 2048),
                                          core::WienerConfig(D, seed + 1),
                                          100000);
        const double var = core::sample_variance(ens.marginal(1024));
        const double exact = D * T / 4.0;
        c.require(std::fabs(var - exact) / exact < 0.01,
                  "midpoint var " + fmt(var) + " vs D T/4 = " + fmt(exact));
    }
    return {8, "Brownian bridge covariance and midpoint variance", c.ok,
            c.msg.str()};
}

// ---- criterion 9: two-time sum pdf ------------------------------------------

CriterionResult c9_two_time_sum(uint64_t seed, std::size_t n_samples) {
    Check c;
    const double D = 0.25, s = 1.0, t = 2.0;  // 4Ds = 4D(t-s) = 1
    const double mass = quad::integrate_half_line(
        [&](double z) { return expfunc::two_time_sum_pdf_at(z, s, t, D); },
        1e-9);
    c.require(std::fabs(mass - 1.0) < 1e-6,
              "quadrature mass = 1 " + fmt(mass - 1.0));

    // dense tabulated cdf for the KS comparison
    const std::size_t m = 4000;
    std::vector<double> zg(m);
    for (std::size_t i = 0; i < m; ++i)
        zg[i] = std::exp(-6.0 + 10.0 * static_cast<double>(i) /
                                    static_cast<double>(m - 1));
    auto curve = expfunc::two_time_sum_pdf(s, t, D, zg);
    std::vector<double> sample(n_samples);
    const double sd_s = std::sqrt(2.0 * D * s), sd_t = std::sqrt(2.0 * D * (t - s));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(core::worker_count())
#endif
    for (long long i = 0; i < static_cast<long long>(n_samples); ++i) {
        double z1, z2;
        rng::normal_pair(seed ^ 0x5A5Aull, static_cast<uint64_t>(i), 0, z1, z2);
        const double ws = sd_s * z1;
        const double wt = ws + sd_t * z2;
        sample[static_cast<std::size_t>(i)] = std::exp(ws) + std::exp(wt);
    }
    const double ks = core::ks_distance_cdf(
        sample, [&](double z) { return curve.cdf_at(z); });
    c.require(ks < 0.01, "KS(MC vs quadrature curve) = " + fmt(ks) + " < 0.01");
    return {9, "two-time sum density: normalization and MC agreement", c.ok,
            c.msg.str()};
}

// ---- criterion 10: deterministic QHO attractors ----------------------------

CriterionResult c10_attractors() {
    Check c;
    const double T = 30.0;
    for (int n = 1; n <= 3; ++n) {
        const qho::QhoState state(n, 1.0, 1.0);
        const auto att = qho::attractors(state);
        double worst = 0.0;
        for (double y : {0.2, 0.9, 1.4, 2.6, -0.7, -3.0}) {
            bool at_node = false;
            for (double nd : qho::nodes(state))
                if (std::fabs(y - nd) < 1e-9) at_node = true;
            if (at_node) continue;
            const double xT = qho::deterministic_trajectory(state, y, T);
            double best = 1e300;
            for (double a : att) best = std::min(best, std::fabs(xT - a));
            worst = std::max(worst, best);
        }
        c.require(worst < 1e-3,
                  "n=" + std::to_string(n) + " worst attractor error = " + fmt(worst));
    }
    return {10, "deterministic trajectories converge to tabulated attractors",
            c.ok, c.msg.str()};
}

// ---- criterion 11: CLI determinism ------------------------------------------

CriterionResult c11_determinism(const std::string& cli_path) {
    Check c;
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "growthsde-verify";
    fs::create_directories(dir);
    const auto f1 = (dir / "run1.csv").string();
    const auto f2 = (dir / "run2.csv").string();
    auto run = [&](const std::string& out, int threads) {
        std::ostringstream cmd;
        cmd << "GROWTHSDE_THREADS=" << threads << " \"" << cli_path
            << "\" gompertz --alpha 1 --D 0.5 --x0 1 --t1 1 --paths 256"
            << " --steps-per-unit 512 --seed 7 --out \"" << out << "\"";
        return std::system(cmd.str().c_str());
    };
    bool ran = false;
    if (!cli_path.empty() && fs::exists(cli_path)) {
        ran = run(f1, 1) == 0 && run(f2, 4) == 0;
    }
    if (ran) {
        std::ifstream a(f1, std::ios::binary), b(f2, std::ios::binary);
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        c.require(sa.str() == sb.str() && !sa.str().empty(),
                  "CLI outputs byte-identical across 1 vs 4 workers");
    } else {
        // library-level fallback when the binary is not reachable
        const gompertz::GompertzParams p(1.0, 0.5);
        const core::TimeGrid grid(0.0, 1.0, 512);
        setenv("GROWTHSDE_THREADS", "1", 1);
        auto e1 = gompertz::exact_paths(p, 1.0, grid, 7, 256);
        setenv("GROWTHSDE_THREADS", "4", 1);
        auto e2 = gompertz::exact_paths(p, 1.0, grid, 7, 256);
        unsetenv("GROWTHSDE_THREADS");
        c.require(e1.values == e2.values,
                  "ensembles bit-identical across worker counts (library level)");
    }
    return {11, "seeded runs are byte-identical for any worker count", c.ok,
            c.msg.str()};
}

}  // namespace

namespace {

std::vector<std::function<CriterionResult()>> criterion_list(const Options& opts) {
    const std::size_t paths = opts.quick ? 100000 : 400000;
    const std::size_t big = opts.quick ? 1000000 : 4000000;
    const uint64_t seed = opts.seed;
    const std::string cli = opts.cli_path;
    return {
        [] { return c1_moments(); },
        [seed, paths] { return c2_gompertz(seed, paths); },
        [seed] { return c3_deterministic(seed); },
        [seed, paths] { return c4_logistic_stationary(seed, paths); },
        [seed, paths] { return c5_semi_explicit(seed, paths); },
        [] { return c6_spectra(); },
        [seed, paths] { return c7_qho1(seed, paths); },
        [seed, big] { return c8_bridges(seed, big); },
        [seed, big] { return c9_two_time_sum(seed, big); },
        [] { return c10_attractors(); },
        [cli] { return c11_determinism(cli); },
    };
}

}  // namespace

std::vector<CriterionResult> run_criteria(const Options& opts) {
    std::vector<CriterionResult> out;
    for (const auto& fn : criterion_list(opts)) out.push_back(fn());
    return out;
}

int run_all(const Options& opts) {
    const auto start = std::chrono::steady_clock::now();
    int failures = 0;
    for (const auto& fn : criterion_list(opts)) {
        const auto r = fn();
        std::printf("%s  %2d  %s\n      %s\n", r.passed ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.details.c_str());
        std::fflush(stdout);
        if (!r.passed) ++failures;
    }
    const auto secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    std::printf("%d/11 criteria passed in %.1f s\n", 11 - failures, secs);
    return failures;
}

}  // namespace growthsde::acceptance
