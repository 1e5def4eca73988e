#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "growthsde/acceptance.hpp"
#include "growthsde/bridges.hpp"
#include "growthsde/core.hpp"
#include "growthsde/expfunc.hpp"
#include "growthsde/fokkerplanck.hpp"
#include "growthsde/gompertz.hpp"
#include "growthsde/io.hpp"
#include "growthsde/logistic.hpp"
#include "growthsde/stats.hpp"
#include "growthsde/stochmech.hpp"
#include "growthsde/transforms.hpp"

namespace {

using namespace growthsde;

core::AnalyticLaw parse_law(const std::string& text) {
    const auto open = text.find('(');
    const std::string name = text.substr(0, open);
    std::vector<double> a;
    if (open != std::string::npos) {
        std::string inner = text.substr(open + 1, text.rfind(')') - open - 1);
        std::size_t pos = 0;
        while (pos < inner.size()) {
            auto comma = inner.find(',', pos);
            if (comma == std::string::npos) comma = inner.size();
            a.push_back(std::stod(inner.substr(pos, comma - pos)));
            pos = comma + 1;
        }
    }
    if (name == "normal") return core::AnalyticLaw::normal(a.at(0), a.at(1));
    if (name == "lognormal") return core::AnalyticLaw::lognormal(a.at(0), a.at(1));
    if (name == "gamma") return core::AnalyticLaw::gamma(a.at(0), a.at(1));
    if (name == "gengamma")
        return core::AnalyticLaw::generalized_gamma(a.at(0), a.at(1), a.at(2));
    if (name == "invgamma") return core::AnalyticLaw::inverse_gamma(a.at(0), a.at(1));
    if (name == "loggamma") return core::AnalyticLaw::log_gamma(a.at(0), a.at(1));
    if (name == "degenerate") return core::AnalyticLaw::degenerate(a.at(0));
    throw std::invalid_argument("unknown law: " + text);
}

io::Meta base_meta(uint64_t seed) {
    io::Meta m;
    m["tool"] = "growthsde";
    m["version"] = "1.0";
    m["seed"] = std::to_string(seed);
    m["wiener_convention"] = "Var W(t) = 2 D t";
    return m;
}

void emit_ensemble_or_density(const core::PathEnsemble& ens, bool density,
                              const std::string& out, io::Meta meta) {
    if (density) {
        auto terminal = ens.terminal();
        std::vector<double> sorted(terminal);
        std::sort(sorted.begin(), sorted.end());
        const double lo = sorted[static_cast<std::size_t>(0.001 * sorted.size())];
        const double hi =
            sorted[std::min(sorted.size() - 1,
                            static_cast<std::size_t>(0.999 * sorted.size()))];
        auto curve = core::histogram_density(terminal, lo, hi, 128);
        meta["kind"] = "terminal-density";
        io::write_density_csv(out, curve, meta);
    } else {
        meta["kind"] = "ensemble";
        io::write_ensemble_csv(out, ens, meta);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic Gompertz/logistic growth dynamics toolkit"};
    app.require_subcommand(1);

    // shared knobs
    uint64_t seed = 1;
    double D = 0.5;
    std::size_t paths = 10000;
    std::size_t steps_per_unit = 4096;
    std::string out;
    bool density = false;

    // gompertz
    auto* g = app.add_subcommand("gompertz", "exact Gompertz paths");
    double g_alpha = 1.0, g_x0 = 1.0, g_t1 = 5.0;
    g->add_option("--alpha", g_alpha);
    g->add_option("--D", D);
    g->add_option("--x0", g_x0);
    g->add_option("--t1", g_t1);
    g->add_option("--paths", paths);
    g->add_option("--seed", seed);
    g->add_option("--steps-per-unit", steps_per_unit);
    g->add_option("--out", out)->required();
    g->add_flag("--density", density, "write terminal-marginal density instead");

    // logistic
    auto* l = app.add_subcommand("logistic", "pathwise (theta-)logistic paths");
    double l_theta = 1.0, l_x0 = 1.0, l_t1 = 5.0;
    l->add_option("--theta", l_theta);
    l->add_option("--D", D);
    l->add_option("--x0", l_x0);
    l->add_option("--t1", l_t1);
    l->add_option("--paths", paths);
    l->add_option("--seed", seed);
    l->add_option("--steps-per-unit", steps_per_unit);
    l->add_option("--out", out)->required();
    l->add_flag("--density", density);

    // logistic-transition
    auto* lt = app.add_subcommand("logistic-transition",
                                  "semi-explicit transition density value");
    double lt_x = 1.0, lt_y = 1.0, lt_s = 0.0, lt_t = 1.0, lt_theta = 1.0;
    std::size_t lt_bridges = 10000;
    lt->add_option("--x", lt_x)->required();
    lt->add_option("--y", lt_y);
    lt->add_option("--s", lt_s);
    lt->add_option("--t", lt_t);
    lt->add_option("--theta", lt_theta);
    lt->add_option("--D", D);
    lt->add_option("--bridges", lt_bridges);
    lt->add_option("--seed", seed);

    // expfunc
    auto* e = app.add_subcommand("expfunc", "exponential functionals of BM");
    e->require_subcommand(1);
    auto* em = e->add_subcommand("moments", "exact moments of int e^W");
    int em_n = 4;
    double em_t = 1.0;
    em->add_option("--n", em_n);
    em->add_option("--D", D);
    em->add_option("--t", em_t);
    auto* es = e->add_subcommand("sumpdf", "pdf of e^{W(s)} + e^{W(t)}");
    double es_s = 1.0, es_t = 2.0, es_zmax = 30.0;
    std::size_t es_n = 512;
    es->add_option("--s", es_s);
    es->add_option("--t", es_t);
    es->add_option("--D", D);
    es->add_option("--zmax", es_zmax);
    es->add_option("--n", es_n);
    es->add_option("--out", out)->required();
    auto* ev = e->add_subcommand("vfield", "conditional velocity field");
    double ev_t = 0.5;
    std::size_t ev_bins = 64;
    ev->add_option("--t", ev_t);
    ev->add_option("--paths", paths);
    ev->add_option("--bins", ev_bins);
    ev->add_option("--D", D);
    ev->add_option("--seed", seed);
    ev->add_option("--out", out)->required();

    // fpe
    auto* f = app.add_subcommand("fpe", "Fokker-Planck solvers");
    f->require_subcommand(1);
    std::string f_field = "logistic";
    double f_lo = 1e-6, f_hi = 25.0, f_t = 1.0;
    std::size_t f_n = 4096, f_steps = 1000, f_k = 8;
    double f_mean = 1.0, f_sd = 0.1;
    auto* fe = f->add_subcommand("evolve", "Crank-Nicolson evolution");
    fe->add_option("--field", f_field);
    fe->add_option("--D", D);
    fe->add_option("--lo", f_lo);
    fe->add_option("--hi", f_hi);
    fe->add_option("--grid", f_n);
    fe->add_option("--t", f_t);
    fe->add_option("--steps", f_steps);
    fe->add_option("--init-mean", f_mean);
    fe->add_option("--init-sd", f_sd);
    fe->add_option("--out", out)->required();
    auto* fs = f->add_subcommand("spectrum", "Sturm-Liouville eigenvalues");
    fs->add_option("--field", f_field);
    fs->add_option("--D", D);
    fs->add_option("--lo", f_lo);
    fs->add_option("--hi", f_hi);
    fs->add_option("--grid", f_n);
    fs->add_option("--k", f_k);
    fs->add_option("--out", out)->required();

    // qho
    auto* q = app.add_subcommand("qho", "stochastic mechanics of QHO states");
    std::string q_mode;
    int q_n = 1;
    double q_omega = 1.0, q_sigma = 1.0, q_y = 1.0, q_t = 1.0;
    q->add_option("mode", q_mode, "transition|simulate|attractors|spectrum")
        ->required();
    q->add_option("--n", q_n);
    q->add_option("--omega", q_omega);
    q->add_option("--sigma", q_sigma);
    q->add_option("--y", q_y);
    q->add_option("--t", q_t);
    q->add_option("--paths", paths);
    q->add_option("--seed", seed);
    q->add_option("--steps-per-unit", steps_per_unit);
    q->add_option("--out", out);

    // stats
    auto* st = app.add_subcommand("stats", "quantiles and medians");
    st->require_subcommand(1);
    std::string st_law = "normal(0,1)";
    double st_p = 0.5;
    auto* stm = st->add_subcommand("median", "median point and segment");
    stm->add_option("--law", st_law);
    auto* stq = st->add_subcommand("quantile", "quantile Q(p)");
    stq->add_option("--law", st_law);
    stq->add_option("--p", st_p);

    // bridges
    auto* b = app.add_subcommand("bridges", "generalized Brownian bridges");
    std::string b_shape = "linear";
    double b_a = 0.0, b_b = 0.0, b_T = 1.0;
    b->add_option("--shape", b_shape, "linear|parabolic|trig|trig2");
    b->add_option("--a", b_a);
    b->add_option("--b", b_b);
    b->add_option("--T", b_T);
    b->add_option("--paths", paths);
    b->add_option("--seed", seed);
    b->add_option("--steps-per-unit", steps_per_unit);
    b->add_option("--D", D);
    b->add_option("--out", out)->required();

    // verify
    auto* v = app.add_subcommand("verify", "run the acceptance suite");
    bool v_quick = false;
    v->add_flag("--quick", v_quick, "desk-scale budget (default behavior)");
    v->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return 2;
    }

    try {
        if (g->parsed()) {
            gompertz::GompertzParams p(g_alpha, D);
            const std::size_t steps = std::max<std::size_t>(
                1, static_cast<std::size_t>(steps_per_unit * g_t1));
            auto ens = gompertz::exact_paths(p, g_x0,
                                             core::TimeGrid(0.0, g_t1, steps),
                                             seed, paths);
            auto meta = base_meta(seed);
            meta["process"] = "gompertz";
            meta["alpha"] = io::format_double(g_alpha);
            meta["D"] = io::format_double(D);
            emit_ensemble_or_density(ens, density, out, meta);
        } else if (l->parsed()) {
            logistic::ThetaLogisticParams p(l_theta, D);
            const std::size_t steps = std::max<std::size_t>(
                1, static_cast<std::size_t>(steps_per_unit * l_t1));
            auto ens = logistic::pathwise_solution(
                p, l_x0, core::TimeGrid(0.0, l_t1, steps), seed, paths);
            auto meta = base_meta(seed);
            meta["process"] = "theta-logistic";
            meta["theta"] = io::format_double(l_theta);
            meta["D"] = io::format_double(D);
            emit_ensemble_or_density(ens, density, out, meta);
        } else if (lt->parsed()) {
            logistic::ThetaLogisticParams p(lt_theta, D);
            const auto est = logistic::semi_explicit_transition(
                p, lt_x, lt_t, lt_y, lt_s, lt_bridges, seed);
            std::printf("f(x=%g, t=%g | y=%g, s=%g) = %.10g  (stderr %.3g, mu %.6g)\n",
                        lt_x, lt_t, lt_y, lt_s, est.value, est.mc_stderr, est.mu);
        } else if (em->parsed()) {
            const auto rec = expfunc::moment_recursive(em_n);
            const auto conj = expfunc::moment_conjecture(em_n);
            std::printf("%s\n", rec.to_string().c_str());
            std::printf("conjecture %s: %s\n",
                        rec == conj ? "matches" : "DIFFERS",
                        conj.to_string().c_str());
            std::printf("M_%d(t=%g, D=%g) = %.12g\n", em_n, em_t, D,
                        rec.evaluate(em_t, D));
        } else if (es->parsed()) {
            std::vector<double> zg(es_n);
            for (std::size_t i = 0; i < es_n; ++i)
                zg[i] = es_zmax * static_cast<double>(i + 1) /
                        static_cast<double>(es_n);
            auto curve = expfunc::two_time_sum_pdf(es_s, es_t, D, zg);
            auto meta = base_meta(seed);
            meta["kind"] = "two-time-sum-pdf";
            io::write_density_csv(out, curve, meta);
        } else if (ev->parsed()) {
            auto vf = expfunc::velocity_field_estimate(
                ev_t, core::WienerConfig(D, seed), paths, ev_bins);
            auto meta = base_meta(seed);
            meta["kind"] = "velocity-field";
            meta["continuity_residual_l1"] =
                io::format_double(vf.continuity_residual_l1);
            io::write_density_csv(out, vf.v, meta);
        } else if (fe->parsed() || fs->parsed()) {
            auto cfield = core::parse_field(f_field);
            fpe::FpeProblem prob;
            prob.drift = [cfield](double x) { return cfield.a(x, 0.0); };
            prob.diffusion = [cfield, D](double x) {
                const double bb = cfield.b(x, 0.0);
                return D * bb * bb;
            };
            prob.drift_prime = [cfield](double x) { return cfield.da_dx(x, 0.0); };
            prob.diffusion_prime = [cfield, D](double x) {
                return 2.0 * D * cfield.b(x, 0.0) * cfield.db_dx(x, 0.0);
            };
            prob.lo = f_lo;
            prob.hi = f_hi;
            if (fe->parsed()) {
                std::vector<double> xs(f_n), fs0(f_n);
                for (std::size_t i = 0; i < f_n; ++i) {
                    xs[i] = f_lo + (f_hi - f_lo) * static_cast<double>(i) /
                                       static_cast<double>(f_n - 1);
                    fs0[i] = core::AnalyticLaw::normal(f_mean, f_sd * f_sd).pdf(xs[i]);
                }
                core::DensityCurve f0(std::move(xs), std::move(fs0));
                f0.normalize();
                auto res = fpe::evolve(prob, f0, f_t, f_steps);
                auto meta = base_meta(seed);
                meta["kind"] = "fpe-evolved-density";
                meta["mass_drift"] = io::format_double(res.mass_drift);
                io::write_density_csv(out, res.f, meta);
            } else {
                auto sl = fpe::reduce_to_sturm_liouville(prob);
                auto eig = fpe::numeric_eigensolve(sl, f_k, f_n);
                std::vector<double> idx(eig.eigenvalues.size());
                for (std::size_t i = 0; i < idx.size(); ++i)
                    idx[i] = static_cast<double>(i);
                auto meta = base_meta(seed);
                meta["kind"] = "sl-spectrum";
                io::write_density_csv(
                    out, core::DensityCurve(idx, eig.eigenvalues), meta);
            }
        } else if (q->parsed()) {
            qho::QhoState state(q_n, q_omega, q_sigma);
            if (q_mode == "transition") {
                if (q_n == 0) {
                    auto law = qho::ground_transition(state, q_y, 0.0, q_t);
                    std::printf("%s\n", io::law_to_json(law).c_str());
                    if (!out.empty()) io::write_law_json(out, law);
                } else if (q_n == 1) {
                    for (double x = -4.0 * q_sigma; x <= 4.0 * q_sigma;
                         x += 0.5 * q_sigma)
                        std::printf("f(%+.2f) = %.8g\n", x,
                                    qho::excited1_transition(state, x, q_y, 0.0,
                                                             q_t));
                } else {
                    throw std::invalid_argument(
                        "closed-form transitions cover n = 0, 1");
                }
            } else if (q_mode == "simulate") {
                const std::size_t steps = std::max<std::size_t>(
                    1, static_cast<std::size_t>(steps_per_unit * q_t));
                auto ens = qho::simulate_state_sde(
                    state, q_y, core::TimeGrid(0.0, q_t, steps), seed, paths);
                if (out.empty()) throw std::invalid_argument("--out required");
                auto meta = base_meta(seed);
                meta["process"] = "qho-n" + std::to_string(q_n);
                emit_ensemble_or_density(ens, density, out, meta);
            } else if (q_mode == "attractors") {
                for (double a : qho::attractors(state))
                    std::printf("%.10g\n", a);
            } else if (q_mode == "spectrum") {
                fpe::FpeProblem prob;
                prob.drift = [state](double x) {
                    return qho::forward_velocity(state, x);
                };
                prob.drift_prime = [state](double x) {
                    return qho::forward_velocity_derivative(state, x);
                };
                const double Dq = state.diffusion_d();
                prob.diffusion = [Dq](double) { return Dq; };
                prob.diffusion_prime = [](double) { return 0.0; };
                const auto nds = qho::nodes(state);
                prob.lo = nds.empty() ? -8.0 * q_sigma : nds.back() + 1e-9;
                prob.hi = 8.0 * q_sigma;
                auto sl = fpe::reduce_to_sturm_liouville(prob);
                auto eig = fpe::numeric_eigensolve(sl, f_k, 3000);
                for (double lam : eig.eigenvalues) std::printf("%.8g\n", lam);
            } else {
                throw std::invalid_argument("unknown qho mode: " + q_mode);
            }
        } else if (stm->parsed()) {
            auto med = stats::median(parse_law(st_law));
            std::printf("median point = %.12g, segment = [%.12g, %.12g]\n",
                        med.point, med.segment.first, med.segment.second);
        } else if (stq->parsed()) {
            auto qf = stats::QuantileFunction::from_law(parse_law(st_law));
            std::printf("Q(%g) = %.12g\n", st_p, qf(st_p));
        } else if (b->parsed()) {
            bridges::BridgeShape shape =
                b_shape == "linear"      ? bridges::linear_shape(b_a, b_b, b_T)
                : b_shape == "parabolic" ? bridges::parabolic_shape(b_a, b_b, b_T)
                : b_shape == "trig"      ? bridges::trig_shape(b_a, b_b, b_T)
                : b_shape == "trig2"     ? bridges::trig_sq_shape(b_a, b_b, b_T)
                                         : throw std::invalid_argument(
                                               "unknown shape: " + b_shape);
            const std::size_t steps = std::max<std::size_t>(
                1, static_cast<std::size_t>(steps_per_unit * b_T));
            auto ens = bridges::sample_bridge(shape,
                                              core::TimeGrid(0.0, b_T, steps),
                                              core::WienerConfig(D, seed), paths);
            auto meta = base_meta(seed);
            meta["process"] = "bridge-" + b_shape;
            io::write_ensemble_csv(out, ens, meta);
        } else if (v->parsed()) {
            acceptance::Options opts;
            opts.quick = true;
            opts.seed = seed;
            opts.cli_path = argv[0];
            return acceptance::run_all(opts) == 0 ? 0 : 1;
        }
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
    return 0;
}
