#include <doctest.h>

#include <cmath>

#include "growthsde/expfunc.hpp"
#include "growthsde/quadrature.hpp"

using namespace growthsde;

TEST_CASE("moment recursion reproduces the printed closed forms") {
    // M_1 = (e^{Dt} - 1)/D
    const auto m1 = expfunc::moment_recursive(1);
    REQUIRE(m1.terms.size() == 2);
    CHECK(m1.terms[0] == std::pair{mpq_class(-1), 0});
    CHECK(m1.terms[1] == std::pair{mpq_class(1), 1});
    // M_2 = (e^{4Dt} - 4 e^{Dt} + 3)/(6 D^2)
    const auto m2 = expfunc::moment_recursive(2);
    REQUIRE(m2.terms.size() == 3);
    CHECK(m2.terms[0] == std::pair{mpq_class(1, 2), 0});
    CHECK(m2.terms[1] == std::pair{mpq_class(-2, 3), 1});
    CHECK(m2.terms[2] == std::pair{mpq_class(1, 6), 4});
    // M_3 = (e^{9Dt} - 6 e^{4Dt} + 15 e^{Dt} - 10)/(60 D^3)
    const auto m3 = expfunc::moment_recursive(3);
    REQUIRE(m3.terms.size() == 4);
    CHECK(m3.terms[0] == std::pair{mpq_class(-1, 6), 0});
    CHECK(m3.terms[1] == std::pair{mpq_class(1, 4), 1});
    CHECK(m3.terms[2] == std::pair{mpq_class(-1, 10), 4});
    CHECK(m3.terms[3] == std::pair{mpq_class(1, 60), 9});
    // M_4 = (e^{16Dt} - 8 e^{9Dt} + 28 e^{4Dt} - 56 e^{Dt} + 35)/(840 D^4)
    const auto m4 = expfunc::moment_recursive(4);
    REQUIRE(m4.terms.size() == 5);
    CHECK(m4.terms[4] == std::pair{mpq_class(1, 840), 16});
    CHECK(m4.terms[3] == std::pair{mpq_class(-1, 105), 9});
}

TEST_CASE("conjecture equals the recursion exactly up to n = 12") {
    for (int n = 1; n <= 12; ++n)
        CHECK(expfunc::moment_recursive(n) == expfunc::moment_conjecture(n));
}

TEST_CASE("moment expressions vanish at t = 0 and behave like t^n") {
    for (int n = 1; n <= 6; ++n) {
        const auto m = expfunc::moment_recursive(n);
        CHECK(std::fabs(m.evaluate(0.0, 0.7)) < 1e-12);
        // M_n(t)/t^n -> 1 as t -> 0 (the n-cube volume times n!/n! symmetry)
        const double t = 1e-4;
        CHECK(m.evaluate(t, 0.7) / std::pow(t, n) ==
              doctest::Approx(1.0).epsilon(0.01));
    }
}

TEST_CASE("exponent indices are distinct squares and positive at each level") {
    for (int n : {5, 9, 12}) {
        const auto m = expfunc::moment_recursive(n);
        for (std::size_t i = 0; i < m.terms.size(); ++i) {
            const int j = m.terms[i].second;
            const int k = static_cast<int>(std::lround(std::sqrt(j)));
            CHECK(k * k == j);  // exponent indices are perfect squares
            if (i) CHECK(m.terms[i].second > m.terms[i - 1].second);
        }
    }
}

TEST_CASE("moments grow and the root test shows no sign of convergence") {
    // numerical echo of the divergent characteristic-function series: the
    // scaled root M_n^{1/n}/n keeps growing through n = 12 (reported, the
    // growth ratio is asserted > 1)
    const double D = 1.0, t = 1.0;
    double prev = 0.0;
    bool growing = true;
    for (int n = 2; n <= 12; ++n) {
        const double mn = expfunc::moment_recursive(n).evaluate(t, D);
        CHECK(mn > 0.0);
        const double root = std::pow(mn, 1.0 / n) / n;
        if (n > 2 && root < prev) growing = false;
        prev = root;
    }
    CHECK(growing);
    // monotone in t
    const auto m3 = expfunc::moment_recursive(3);
    double last = 0.0;
    for (double t2 = 0.1; t2 < 2.0; t2 += 0.1) {
        const double v = m3.evaluate(t2, 0.5);
        CHECK(v > last);
        last = v;
    }
}

TEST_CASE("MC integral of e^W matches M_1 and M_2") {
    const double D = 0.5;
    const core::TimeGrid grid(0.0, 1.0, 1024);
    auto ens = expfunc::sample_integral(grid, core::WienerConfig(D, 77), 100000);
    const auto terminal = ens.terminal();
    const double m1 = expfunc::moment_recursive(1).evaluate(1.0, D);
    CHECK(core::sample_mean(terminal) == doctest::Approx(m1).epsilon(0.01));
    double m2_mc = 0.0;
    for (double v : terminal) m2_mc += v * v;
    m2_mc /= static_cast<double>(terminal.size());
    const double m2 = expfunc::moment_recursive(2).evaluate(1.0, D);
    CHECK(m2_mc == doctest::Approx(m2).epsilon(0.03));
    // X(t)/t -> 1 in probability as t -> 0
    const core::TimeGrid tiny(0.0, 1e-3, 64);
    auto small = expfunc::sample_integral(tiny, core::WienerConfig(D, 78), 2000);
    for (double v : small.terminal())
        CHECK(v / 1e-3 == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("two-time sum pdf: support, normalization, MC agreement") {
    const double D = 0.25, s = 1.0, t = 2.0;
    CHECK(expfunc::two_time_sum_pdf_at(-1.0, s, t, D) == 0.0);
    CHECK(expfunc::two_time_sum_pdf_at(0.0, s, t, D) == 0.0);
    const double mass = quad::integrate_half_line(
        [&](double z) { return expfunc::two_time_sum_pdf_at(z, s, t, D); }, 1e-9);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));

    std::vector<double> zg(1500);
    for (std::size_t i = 0; i < zg.size(); ++i)
        zg[i] = std::exp(-5.0 + 9.0 * static_cast<double>(i) /
                                    static_cast<double>(zg.size() - 1));
    auto curve = expfunc::two_time_sum_pdf(s, t, D, zg);
    std::vector<double> sample(200000);
    const double sd_s = std::sqrt(2.0 * D * s), sd_t = std::sqrt(2.0 * D * (t - s));
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double z1, z2;
        rng::normal_pair(0x7777, i, 0, z1, z2);
        sample[i] = std::exp(sd_s * z1) + std::exp(sd_s * z1 + sd_t * z2);
    }
    CHECK(core::ks_distance_cdf(sample, [&](double z) {
              return curve.cdf_at(z);
          }) < 0.012);
}

TEST_CASE("velocity field: v -> 1 near t = 0 and continuity residual is small") {
    auto vf = expfunc::velocity_field_estimate(0.01, core::WienerConfig(0.5, 3),
                                               100000, 24, 0.002, 256);
    // X ~ t and e^W ~ 1 at tiny t
    std::size_t used = 0;
    for (std::size_t i = 0; i < vf.v.x.size(); ++i) {
        if (vf.count[i] < 100) continue;
        ++used;
        CHECK(vf.v.f[i] == doctest::Approx(1.0).epsilon(0.05));
        CHECK(vf.v.f[i] > 0.0);
    }
    CHECK(used > 4);

    auto mid = expfunc::velocity_field_estimate(0.5, core::WienerConfig(0.5, 4),
                                                200000, 32, 0.01, 512);
    CHECK(mid.continuity_residual_l1 < 0.05);
    for (std::size_t i = 0; i < mid.v.x.size(); ++i)
        if (mid.count[i] > 0) CHECK(mid.v.f[i] > 0.0);
}

TEST_CASE("joint FPE residual: lognormal marginal and sample-size decay") {
    auto coarse = expfunc::joint_fpe_residual(0.5, core::WienerConfig(0.5, 6),
                                              100000, 48, 0.02, 256);
    auto fine = expfunc::joint_fpe_residual(0.5, core::WienerConfig(0.5, 6),
                                            400000, 48, 0.02, 256);
    CHECK(coarse.y_marginal_ks < 0.01);
    CHECK(fine.y_marginal_ks < 0.01);
    CHECK(fine.residual_l1 < coarse.residual_l1);
}
