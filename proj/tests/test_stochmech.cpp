#include <doctest.h>

#include <cmath>
#include <numbers>

#include "growthsde/quadrature.hpp"
#include "growthsde/sample_stats.hpp"
#include "growthsde/special.hpp"
#include "growthsde/stochmech.hpp"

using namespace growthsde;

TEST_CASE("hermite recurrence matches the table polynomials") {
    for (double z : {-1.3, 0.0, 0.4, 2.2}) {
        CHECK(qho::hermite(0, z) == doctest::Approx(1.0));
        CHECK(qho::hermite(1, z) == doctest::Approx(2.0 * z));
        CHECK(qho::hermite(2, z) == doctest::Approx(4.0 * z * z - 2.0));
        CHECK(qho::hermite(3, z) == doctest::Approx(8.0 * z * z * z - 12.0 * z));
        CHECK(qho::hermite(4, z) ==
              doctest::Approx(16.0 * std::pow(z, 4) - 48.0 * z * z + 12.0));
        CHECK(qho::hermite_prime(3, z) ==
              doctest::Approx(6.0 * (4.0 * z * z - 2.0)));
    }
}

TEST_CASE("forward velocities match the closed-form list") {
    const double w = 1.3, s = 0.7;
    const qho::QhoState s0(0, w, s), s1(1, w, s), s2(2, w, s), s3(3, w, s),
        s4(4, w, s);
    for (double x : {-1.9, -0.6, 0.5, 1.7}) {
        CHECK(qho::forward_velocity(s0, x) == doctest::Approx(-w * x));
        CHECK(qho::forward_velocity(s1, x) ==
              doctest::Approx(-w * x + 2.0 * w * s * s / x).epsilon(1e-10));
        if (std::fabs(x * x - s * s) > 1e-6)
            CHECK(qho::forward_velocity(s2, x) ==
                  doctest::Approx(-w * x + 4.0 * w * s * s * x / (x * x - s * s))
                      .epsilon(1e-10));
        if (std::fabs(x) > 1e-6 && std::fabs(x * x - 3.0 * s * s) > 1e-6)
            CHECK(qho::forward_velocity(s3, x) ==
                  doctest::Approx(-w * x + 6.0 * w * s * s * (x * x - s * s) /
                                               (x * (x * x - 3.0 * s * s)))
                      .epsilon(1e-10));
        CHECK(qho::forward_velocity(s4, x) ==
              doctest::Approx(-w * x +
                              8.0 * w * s * s * x * (x * x - 3.0 * s * s) /
                                  (std::pow(x, 4) - 6.0 * s * s * x * x +
                                   3.0 * std::pow(s, 4)))
                  .epsilon(1e-8));
    }
    // derivative cross-check against finite differences
    for (double x : {0.4, 1.1, 2.0}) {
        const double h = 1e-6;
        const double fd = (qho::forward_velocity(s2, x + h) -
                           qho::forward_velocity(s2, x - h)) /
                          (2.0 * h);
        CHECK(qho::forward_velocity_derivative(s2, x) ==
              doctest::Approx(fd).epsilon(1e-5));
    }
    // n = 1 zero of the velocity at sigma sqrt2
    CHECK(qho::forward_velocity(s1, s * std::numbers::sqrt2) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // pole error carries the node location
    CHECK_THROWS(qho::forward_velocity(s1, 0.0));
    CHECK_THROWS(qho::forward_velocity(s2, s));
}

TEST_CASE("velocity nodes are the hermite zeros") {
    const qho::QhoState s2(2, 1.0, 1.0);
    const auto n2 = qho::nodes(s2);
    REQUIRE(n2.size() == 2);
    CHECK(n2[0] == doctest::Approx(-1.0).epsilon(1e-10));  // +-sigma
    CHECK(n2[1] == doctest::Approx(1.0).epsilon(1e-10));
    const auto n3 = qho::nodes(qho::QhoState(3, 1.0, 1.0));
    REQUIRE(n3.size() == 3);
    CHECK(n3[1] == doctest::Approx(0.0));
    CHECK(n3[2] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));
}

TEST_CASE("ground state transition is the OU law") {
    const qho::QhoState state(0, 2.0, 0.8);
    const auto law = qho::ground_transition(state, 1.1, 0.2, 1.4);
    CHECK(law.params[0] == doctest::Approx(1.1 * std::exp(-2.0 * 1.2)));
    CHECK(law.params[1] ==
          doctest::Approx(0.64 * (1.0 - std::exp(-4.0 * 1.2))));
    // long time: Normal(0, sigma^2) = phi_0^2
    const auto inf = qho::ground_transition(state, 1.1, 0.0, 50.0);
    CHECK(inf.params[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(inf.params[1] == doctest::Approx(0.64));
    for (double x : {-0.5, 0.0, 0.9})
        CHECK(inf.pdf(x) == doctest::Approx(qho::phi_sq(state, x)).epsilon(1e-8));
}

TEST_CASE("excited n=1 transition density properties") {
    const qho::QhoState state(1, 1.0, 1.0);
    // vanishes across the node
    CHECK(qho::excited1_transition(state, -0.5, 1.0, 0.0, 1.0) == 0.0);
    // normalization over the half line containing y
    const double mass = quad::adaptive_simpson(
        [&](double x) { return qho::excited1_transition(state, x, 1.0, 0.0, 1.0); },
        1e-12, 12.0, 1e-10);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    // nonnegative everywhere probed
    for (double x = 0.05; x < 6.0; x += 0.2)
        CHECK(qho::excited1_transition(state, x, 0.7, 0.0, 0.8) >= 0.0);
    // long-time limit 2 Theta(xy) phi_1^2
    for (double x : {0.4, 1.0, 2.3})
        CHECK(qho::excited1_transition(state, x, 1.0, 0.0, 40.0) ==
              doctest::Approx(2.0 * qho::phi_sq(state, x)).epsilon(1e-6));
    // y = 0 start resolves to the symmetric alpha -> 0 limit
    const double at0 = qho::excited1_transition(state, 0.8, 0.0, 0.0, 1.0);
    const double beta2 = 1.0 - std::exp(-2.0);
    CHECK(at0 == doctest::Approx(0.64 * std::exp(-0.32 / beta2) /
                                 (beta2 * std::sqrt(beta2) *
                                  std::sqrt(2.0 * std::numbers::pi)))
                     .epsilon(1e-10));
}

TEST_CASE("excited n=1 transition: Chapman-Kolmogorov by MC resampling") {
    const qho::QhoState state(1, 1.0, 1.0);
    // sample x_u ~ f(.|y, 0) by inverse cdf on a grid, then x_t ~ f(.|x_u, u)
    const double y = 1.0, u = 0.4, t = 1.0;
    auto sample_from = [&](double start, double dt, uint64_t seed, std::size_t i) {
        // tabulated inverse cdf per call (coarse but adequate)
        const std::size_t m = 800;
        static thread_local std::vector<double> xs(m), cdf(m);
        for (std::size_t j = 0; j < m; ++j) {
            xs[j] = 6.0 * static_cast<double>(j + 1) / static_cast<double>(m);
            const double pdf =
                qho::excited1_transition(state, xs[j], start, 0.0, dt);
            cdf[j] = (j ? cdf[j - 1] : 0.0) + pdf * 6.0 / m;
        }
        const double un = rng::uniform(seed, 77, i) * cdf[m - 1];
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), un);
        return xs[static_cast<std::size_t>(it - cdf.begin())];
    };
    std::vector<double> composed(20000);
    for (std::size_t i = 0; i < composed.size(); ++i) {
        const double xu = sample_from(y, u, 1234, i);
        composed[i] = sample_from(xu, t - u, 5678, i);
    }
    // compare against the direct transition cdf
    const std::size_t m = 2000;
    std::vector<double> xs(m), pdf(m);
    for (std::size_t j = 0; j < m; ++j) {
        xs[j] = 8.0 * static_cast<double>(j + 1) / static_cast<double>(m);
        pdf[j] = qho::excited1_transition(state, xs[j], y, 0.0, t);
    }
    core::DensityCurve direct(xs, pdf);
    const double ks = core::ks_distance_cdf(
        composed, [&](double x) { return direct.cdf_at(x); });
    CHECK(ks < 0.02);
}

TEST_CASE("excited n=1 conditional mean") {
    const qho::QhoState state(1, 1.0, 1.0);
    // t -> 0 returns the start
    CHECK(qho::excited1_conditional_mean(state, 0.9, 1e-9) ==
          doctest::Approx(0.9).epsilon(1e-6));
    // t -> inf limit 2 sigma sqrt(2/pi)
    CHECK(qho::excited1_conditional_mean(state, 0.9, 40.0) ==
          doctest::Approx(2.0 * std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-8));
    // agrees with direct quadrature of x f(x,t|y,0)
    for (double t : {0.3, 1.0, 2.5}) {
        const double direct = quad::adaptive_simpson(
            [&](double x) {
                return x * qho::excited1_transition(state, x, 1.2, 0.0, t);
            },
            1e-12, 14.0, 1e-10);
        CHECK(qho::excited1_conditional_mean(state, 1.2, t) ==
              doctest::Approx(direct).epsilon(1e-7));
    }
}

TEST_CASE("asymptotic mixture density") {
    const qho::QhoState state(1, 1.0, 1.0);
    // q = 1 recovers phi_1^2 exactly
    for (double x : {-1.5, -0.2, 0.7})
        CHECK(qho::asymptotic_mixture_density(state, 1.0, x) ==
              doctest::Approx(qho::phi_sq(state, x)));
    // q = 2: doubled on the positive side, zero on the negative side
    CHECK(qho::asymptotic_mixture_density(state, 2.0, 0.9) ==
          doctest::Approx(2.0 * qho::phi_sq(state, 0.9)));
    CHECK(qho::asymptotic_mixture_density(state, 2.0, -0.9) == 0.0);
    // unit mass for any q
    for (double q : {0.0, 0.6, 1.0, 1.7}) {
        const double mass = quad::integrate_real_line(
            [&](double x) { return qho::asymptotic_mixture_density(state, q, x); },
            0.0, 1.0, 1e-10);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    }
    CHECK_THROWS(qho::asymptotic_mixture_weight(2.5, 0.0));
}

TEST_CASE("deterministic trajectories and attractors") {
    const double sg = 0.9, w = 1.3;
    // n = 0 decays to zero
    CHECK(qho::deterministic_trajectory(qho::QhoState(0, w, sg), 1.4, 3.0) ==
          doctest::Approx(1.4 * std::exp(-3.0 * w)));
    // n = 1 closed form
    const qho::QhoState s1(1, w, sg);
    const double x1 = qho::deterministic_trajectory(s1, 0.5, 0.8);
    CHECK(x1 == doctest::Approx(std::sqrt(2.0 * sg * sg +
                                          (0.25 - 2.0 * sg * sg) *
                                              std::exp(-2.0 * w * 0.8))));
    CHECK(qho::deterministic_trajectory(s1, -0.5, 30.0 / w) ==
          doctest::Approx(-sg * std::numbers::sqrt2).epsilon(1e-9));
    // trajectories continue from the start: t = 0 returns y
    for (int n : {2, 3}) {
        const qho::QhoState st(n, w, sg);
        for (double y : {0.3, 1.4, 2.9, -0.8})
            CHECK(qho::deterministic_trajectory(st, y, 0.0) ==
                  doctest::Approx(y).epsilon(1e-9));
    }
    // n = 2 basins: 0 and +- sigma sqrt5
    const qho::QhoState s2(2, w, sg);
    CHECK(qho::deterministic_trajectory(s2, 0.5, 40.0) ==
          doctest::Approx(0.0).epsilon(1e-6));
    CHECK(qho::deterministic_trajectory(s2, 1.5, 40.0) ==
          doctest::Approx(sg * std::sqrt(5.0)).epsilon(1e-6));
    CHECK(qho::deterministic_trajectory(s2, -2.5, 40.0) ==
          doctest::Approx(-sg * std::sqrt(5.0)).epsilon(1e-6));
    // n = 3 attractors +-2.8766 sigma, +-0.8515 sigma
    const qho::QhoState s3(3, w, sg);
    CHECK(qho::deterministic_trajectory(s3, 2.0, 40.0) ==
          doctest::Approx(2.8766 * sg).epsilon(1e-4));
    CHECK(qho::deterministic_trajectory(s3, 0.9, 40.0) ==
          doctest::Approx(0.8515 * sg).epsilon(1e-4));
    CHECK(qho::deterministic_trajectory(s3, -1.0, 40.0) ==
          doctest::Approx(-0.8515 * sg).epsilon(1e-4));
}

TEST_CASE("combination pdf proposition") {
    const qho::QhoState state(1, 1.0, 1.0);
    // p = Normal(alpha, beta^2) from the OU transition reproduces trans1
    const double t = 0.9, y = 1.1;
    const double alpha = y * std::exp(-t);
    const double beta2 = 1.0 - std::exp(-2.0 * t);
    auto p = [&](double x) {
        return std::exp(-0.5 * (x - alpha) * (x - alpha) / beta2) /
               std::sqrt(2.0 * std::numbers::pi * beta2);
    };
    auto comb = qho::combination_pdf(p);
    CHECK(comb.alpha == doctest::Approx(alpha).epsilon(1e-9));
    for (double x : {0.3, 0.9, 1.8})
        CHECK(comb.f(x) ==
              doctest::Approx(qho::excited1_transition(state, x, y, 0.0, t))
                  .epsilon(1e-9));
    // f is normalized and supported on x > 0; fbar symmetric with zero mean
    const double mass_f = quad::integrate_real_line(comb.f, 0.0, 2.0, 1e-11);
    CHECK(mass_f == doctest::Approx(1.0).epsilon(1e-8));
    const double mass_fbar = quad::integrate_real_line(comb.fbar, 0.0, 2.0, 1e-11);
    CHECK(mass_fbar == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(comb.fbar(0.7) == doctest::Approx(comb.fbar(-0.7)).epsilon(1e-12));
    const double mean_fbar = quad::integrate_real_line(
        [&](double x) { return x * comb.fbar(x); }, 0.0, 2.0, 1e-11);
    CHECK(std::fabs(mean_fbar) < 1e-9);
    // E over f equals E[x|x|/alpha] under p
    const double mean_f = quad::integrate_real_line(
        [&](double x) { return x * comb.f(x); }, 0.0, 2.0, 1e-11);
    const double xabs = quad::integrate_real_line(
        [&](double x) { return x * std::fabs(x) * p(x) / alpha; }, 0.0, 2.0,
        1e-11);
    CHECK(mean_f == doctest::Approx(xabs).epsilon(1e-8));
    // symmetric p is rejected
    auto sym = [](double x) {
        return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    };
    CHECK_THROWS(qho::combination_pdf(sym));
}

TEST_CASE("n=1 SDE paths never change sign") {
    const qho::QhoState state(1, 1.0, 1.0);
    const core::TimeGrid grid(0.0, 10.0, 4096);
    auto ens = qho::simulate_state_sde(state, 0.8, grid, 31, 2000);
    for (std::size_t i = 0; i < ens.n_paths; ++i)
        for (double v : ens.row(i)) CHECK(v > 0.0);
    CHECK(ens.invalid_paths.empty());
}

TEST_CASE("signed-square dual route marginals agree") {
    const qho::QhoState state(1, 1.0, 1.0);
    const core::TimeGrid grid(0.0, 2.0, 2048);
    auto res = qho::signed_square_paths(state, 1.0, grid, 13, 20000);
    // sign preserved along each direct path
    for (std::size_t i = 0; i < 200; ++i)
        for (double v : res.direct.row(i)) CHECK(v >= 0.0);
    const auto a = res.direct.terminal();
    const auto b = res.mapped.terminal();
    const double ks = core::ks_distance_cdf(a, [&](double v) {
        double c = 0.0;
        for (double x : b) c += x <= v ? 1.0 : 0.0;
        return c / static_cast<double>(b.size());
    });
    CHECK(ks < 0.02);
    // D -> 0 limit: y(t) = x(t) |x(t)| with x the deterministic trajectory
    const qho::QhoState tiny(1, 1.0, 1e-6);  // D = omega sigma^2 = 1e-12
    auto det = qho::signed_square_paths(tiny, 1.0, grid, 3, 1);
    const double x_det = qho::deterministic_trajectory(tiny, 1.0, 2.0);
    CHECK(det.direct.terminal()[0] ==
          doctest::Approx(x_det * std::fabs(x_det)).epsilon(1e-3));
    CHECK(det.mapped.terminal()[0] ==
          doctest::Approx(x_det * std::fabs(x_det)).epsilon(1e-3));
}
