#include <doctest.h>

#include <cmath>

#include "growthsde/logistic.hpp"
#include "growthsde/quadrature.hpp"

using namespace growthsde;

TEST_CASE("deterministic logistic path") {
    const logistic::ThetaLogisticParams p(1.0, 0.5);
    CHECK(logistic::deterministic_path(p, 0.5, 50.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(logistic::deterministic_path(p, 2.3, 0.0) == doctest::Approx(2.3));
    const logistic::ThetaLogisticParams p2(2.0, 0.5);
    CHECK(logistic::deterministic_path(p2, 2.0, 1.0) ==
          doctest::Approx(std::sqrt(4.0 / (4.0 - 3.0 * std::exp(-2.0))))
              .epsilon(1e-12));
    CHECK_THROWS(logistic::deterministic_path(p, 0.0, 1.0));
}

TEST_CASE("pathwise solution: D -> 0 recovers the deterministic solution") {
    for (double theta : {1.0, 2.0}) {
        const logistic::ThetaLogisticParams p(theta, 1e-13);
        const core::TimeGrid grid(0.0, 6.0, 4096);
        auto ens = logistic::pathwise_solution(p, 0.4, grid, 1, 1);
        const auto row = ens.row(0);
        for (std::size_t k = 0; k < grid.n_points(); k += 128)
            CHECK(row[k] == doctest::Approx(logistic::deterministic_path(
                                p, 0.4, grid.time(k)))
                                .epsilon(1e-5));
    }
}

TEST_CASE("pathwise paths stay positive and satisfy the A(t) identity") {
    const logistic::ThetaLogisticParams p(1.0, 0.5);
    const core::TimeGrid grid(0.0, 3.0, 2048);
    std::vector<logistic::AuxIntegralProcess> aux;
    auto ens = logistic::pathwise_solution(p, 1.0, grid, 9, 64, &aux);
    const double dt = grid.dt();
    for (std::size_t i = 0; i < ens.n_paths; ++i) {
        const auto row = ens.row(i);
        const auto& a = aux[i];
        CHECK(a.a_path[0] == 0.0);
        for (std::size_t k = 1; k < grid.n_points(); ++k) {
            CHECK(row[k] > 0.0);
            CHECK(a.a_path[k] >= a.a_path[k - 1]);  // nondecreasing
            // Adot = X0 e^{-Zbar} consistent with trapezoid differences
            const double adot_mid =
                (a.a_path[k] - a.a_path[k - 1]) / dt;
            const double adot_avg = 0.5 * (std::exp(-a.zbar_path[k]) +
                                           std::exp(-a.zbar_path[k - 1]));
            CHECK(adot_mid == doctest::Approx(adot_avg).epsilon(1e-9));
            // X = Adot/(1 + A) along the path (trapezoid accuracy)
            const double x_of_a =
                std::exp(-a.zbar_path[k]) / (1.0 + a.a_path[k]);
            CHECK(row[k] == doctest::Approx(x_of_a).epsilon(1e-9));
        }
    }
}

TEST_CASE("stationary law: gamma for theta = 1, generalized gamma otherwise") {
    const logistic::ThetaLogisticParams p(1.0, 0.5);
    const auto law = logistic::stationary_law(p);
    CHECK(law.family == core::LawFamily::gamma);
    CHECK(law.params[0] == doctest::Approx(1.0));  // Gamma(1,2) = Exp(2)
    CHECK(law.params[1] == doctest::Approx(2.0));
    CHECK(law.mean() == doctest::Approx(1.0 - 0.5));  // shape/rate = 1 - D

    const logistic::ThetaLogisticParams pt(3.0, 0.25);
    const auto glaw = logistic::stationary_law(pt);
    CHECK(glaw.family == core::LawFamily::generalized_gamma);
    // the generalized form evaluated at theta = 1 reduces to the gamma pdf
    const logistic::ThetaLogisticParams p1(1.0 + 1e-12, 0.5);
    const auto almost_gamma = logistic::stationary_law(p1);
    for (double x : {0.2, 0.7, 1.9})
        CHECK(almost_gamma.pdf(x) == doctest::Approx(law.pdf(x)).epsilon(1e-6));

    CHECK_THROWS(logistic::stationary_law(logistic::ThetaLogisticParams(1.0, 1.0)));
    const auto inv = logistic::stationary_law_inverse(p);
    CHECK(inv.family == core::LawFamily::inverse_gamma);
    CHECK_THROWS(logistic::stationary_law_inverse(pt));
}

TEST_CASE("long-time marginal approaches the stationary gamma law") {
    const logistic::ThetaLogisticParams p(1.0, 0.5);
    const core::TimeGrid grid(0.0, 20.0, 4096);
    auto ens = logistic::pathwise_solution(p, 0.5, grid, 23, 30000);
    CHECK(core::ks_distance(ens.terminal(), logistic::stationary_law(p)) < 0.015);
}

TEST_CASE("reciprocal process increments regress on the linear drift") {
    // 1/X satisfies dY = [(2D-1)Y + 1] dt - Y dW: regression of dY on
    // [(2D-1)y + 1] dt has unit slope
    const double D = 0.4;
    const logistic::ThetaLogisticParams p(1.0, D);
    const core::TimeGrid grid(0.0, 2.0, 4096);
    auto ens = logistic::pathwise_solution(p, 1.0, grid, 31, 400);
    double sxy = 0.0, sxx = 0.0;
    const double dt = grid.dt();
    for (std::size_t i = 0; i < ens.n_paths; ++i) {
        const auto row = ens.row(i);
        for (std::size_t k = 0; k + 1 < grid.n_points(); ++k) {
            const double y = 1.0 / row[k];
            const double dy = 1.0 / row[k + 1] - y;
            const double predictor = ((2.0 * D - 1.0) * y + 1.0) * dt;
            sxy += predictor * dy;
            sxx += predictor * predictor;
        }
    }
    const double slope = sxy / sxx;
    // slope estimator noise ~ (noise var)/(signal var); 4 sigma band
    CHECK(slope == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("shape prefactor is regular at the origin and positive") {
    CHECK(logistic::shape_prefactor(1e-300, +1) == doctest::Approx(0.0));
    CHECK(logistic::shape_prefactor(1e-12, -1) < 1e-50);
    CHECK(logistic::shape_prefactor(1.0, +1) ==
          doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    for (double x = 0.05; x < 50.0; x *= 1.7) {
        CHECK(logistic::shape_prefactor(x, +1) > 0.0);
        CHECK(logistic::shape_prefactor(x, -1) > 0.0);
    }
    CHECK_THROWS(logistic::shape_prefactor(0.0, 1));
}

TEST_CASE("semi-explicit transition: normalization and nonnegativity") {
    const logistic::ThetaLogisticParams p(1.0, 0.5);
    // integrate the estimator over x by quadrature on a modest budget
    const double mass = quad::adaptive_simpson(
        [&](double x) {
            if (x < 1e-6) return 0.0;
            const auto est =
                logistic::semi_explicit_transition(p, x, 1.0, 1.0, 0.0, 2000, 5);
            return est.value;
        },
        1e-6, 8.0, 5e-4, 12);
    CHECK(mass == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("semi-explicit transition estimates are nonnegative within noise") {
    const logistic::ThetaLogisticParams p(1.0, 0.5);
    for (double x : {0.3, 0.8, 1.5, 2.5}) {
        const auto est =
            logistic::semi_explicit_transition(p, x, 1.5, 0.8, 0.0, 2000, 11);
        CHECK(est.value > -3.0 * est.mc_stderr);
    }
    CHECK_THROWS(logistic::semi_explicit_transition(p, 1.0, 0.5, 1.0, 1.0, 2000, 1));
    CHECK_THROWS(logistic::semi_explicit_transition(p, 1.0, 1.0, 1.0, 0.0, 10, 1));
}
