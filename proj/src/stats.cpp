#include "growthsde/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "growthsde/bridges.hpp"
#include "growthsde/quadrature.hpp"
#include "growthsde/rng.hpp"

namespace growthsde::stats {

QuantileFunction QuantileFunction::from_law(const core::AnalyticLaw& law) {
    QuantileFunction qf;
    qf.cdf_ = [law](double x) { return law.cdf(x); };
    qf.q_ = [law](double p) {
        if (!(p > 0.0 && p < 1.0))
            throw std::domain_error("quantile: p must be in (0,1)");
        if (law.family == core::LawFamily::degenerate) return law.params[0];
        // bracket then bisect; inf convention holds since cdf is continuous
        double lo = -1.0, hi = 1.0;
        const auto [slo, shi] = law.support();
        if (slo == 0.0) lo = 0.0;
        while (law.cdf(hi) < p && hi < 1e300) hi *= 2.0;
        while (lo > slo && law.cdf(lo) > p && lo > -1e300)
            lo = lo == 0.0 ? 0.0 : lo * 2.0;
        if (lo == -1.0 && law.cdf(lo) > p) {
            while (law.cdf(lo) > p && lo > -1e300) lo *= 2.0;
        }
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (law.cdf(mid) < p)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    return qf;
}

QuantileFunction QuantileFunction::from_sample(std::vector<double> sample) {
    if (sample.empty())
        throw std::invalid_argument("QuantileFunction: empty sample");
    std::sort(sample.begin(), sample.end());
    QuantileFunction qf;
    auto s = std::make_shared<std::vector<double>>(std::move(sample));
    qf.q_ = [s](double p) {
        if (!(p > 0.0 && p < 1.0))
            throw std::domain_error("quantile: p must be in (0,1)");
        const double n = static_cast<double>(s->size());
        const std::size_t k = static_cast<std::size_t>(std::ceil(n * p));
        return (*s)[std::max<std::size_t>(k, 1) - 1];
    };
    qf.cdf_ = [s](double x) {
        const auto it = std::upper_bound(s->begin(), s->end(), x);
        return static_cast<double>(it - s->begin()) /
               static_cast<double>(s->size());
    };
    return qf;
}

QuantileFunction QuantileFunction::from_discrete(std::vector<double> values,
                                                 std::vector<double> probs) {
    if (values.size() != probs.size() || values.empty())
        throw std::invalid_argument("QuantileFunction: bad discrete spec");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] > values[i - 1]))
            throw std::invalid_argument("QuantileFunction: values must increase");
    double total = 0.0;
    for (double p : probs) total += p;
    if (std::fabs(total - 1.0) > 1e-12)
        throw std::invalid_argument("QuantileFunction: probs must sum to 1");
    auto v = std::make_shared<std::vector<double>>(std::move(values));
    auto cum = std::make_shared<std::vector<double>>(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        (*cum)[i] = acc;
    }
    QuantileFunction qf;
    qf.q_ = [v, cum](double p) {
        if (!(p > 0.0 && p < 1.0))
            throw std::domain_error("quantile: p must be in (0,1)");
        for (std::size_t i = 0; i < cum->size(); ++i)
            if (p <= (*cum)[i] + 1e-15) return (*v)[i];
        return v->back();
    };
    qf.cdf_ = [v, cum](double x) {
        double F = 0.0;
        for (std::size_t i = 0; i < v->size(); ++i)
            if ((*v)[i] <= x) F = (*cum)[i];
        return F;
    };
    return qf;
}

double QuantileFunction::operator()(double p) const { return q_(p); }
double QuantileFunction::cdf(double x) const { return cdf_(x); }

MedianResult median(const core::AnalyticLaw& law) {
    MedianResult out;
    if (law.family == core::LawFamily::degenerate) {
        out.point = law.params[0];
        out.segment = {out.point, out.point};
        return out;
    }
    out.point = law.median();
    out.segment = {out.point, out.point};  // continuous strictly-increasing cdf
    return out;
}

MedianResult median(const std::vector<double>& sample) {
    if (sample.empty()) throw std::invalid_argument("median: empty sample");
    std::vector<double> s(sample);
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    MedianResult out;
    out.point = s[(n + 1) / 2 - 1];
    if (n % 2 == 0)
        out.segment = {s[n / 2 - 1], s[n / 2]};
    else
        out.segment = {out.point, out.point};
    return out;
}

MedianResult median_discrete(const std::vector<double>& values,
                             const std::vector<double>& probs) {
    double acc = 0.0;
    MedianResult out;
    bool left_found = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        acc += probs[i];
        if (!left_found && acc >= 0.5 - 1e-15) {
            out.point = values[i];
            left_found = true;
        }
    }
    // right endpoint: largest atom whose upper tail still holds >= 1/2
    double tail = 1.0;
    double right = out.point;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (tail >= 0.5 - 1e-15) right = values[i];
        tail -= probs[i];
    }
    out.segment = {out.point, std::max(right, out.point)};
    return out;
}

bool median_bound_check(const std::vector<double>& sample, double a,
                        double p_order) {
    if (p_order < 1.0)
        throw std::invalid_argument("median_bound_check: need p >= 1");
    const double med = median(sample).point;
    double moment = 0.0;
    for (double x : sample) moment += std::pow(std::fabs(x - a), p_order);
    moment /= static_cast<double>(sample.size());
    return std::fabs(med - a) <= std::pow(2.0 * moment, 1.0 / p_order);
}

MedianResult monotone_median_transport(const std::function<double(double)>& T,
                                       const MedianResult& med, double probe_lo,
                                       double probe_hi) {
    bool increasing = true, decreasing = true;
    double prev = T(probe_lo);
    for (int i = 1; i <= 64; ++i) {
        const double x = probe_lo + (probe_hi - probe_lo) * i / 64.0;
        const double cur = T(x);
        if (cur < prev) increasing = false;
        if (cur > prev) decreasing = false;
        prev = cur;
    }
    if (!increasing && !decreasing)
        throw std::invalid_argument("monotone_median_transport: T is not monotone");
    MedianResult out;
    const double a = T(med.segment.first), b = T(med.segment.second);
    out.segment = {std::min(a, b), std::max(a, b)};
    out.point = out.segment.first;
    if (increasing) out.point = T(med.point);
    return out;
}

PdfEstimate semi_explicit_pdf_general(const core::CoefficientField& field,
                                      double diffusion_d, double x, double t,
                                      double y, double s, std::size_t n_bridges,
                                      uint64_t seed) {
    if (!field.time_independent)
        throw std::invalid_argument(
            "semi_explicit_pdf_general: field must be time-independent");
    if (!(t > s)) throw std::invalid_argument("semi_explicit_pdf_general: t > s");
    const double D = diffusion_d;
    const double tau = t - s;

    if (!field.p_of_x || !field.p_inverse)
        throw std::invalid_argument(
            "semi_explicit_pdf_general: field needs p(x) = int dx/b and inverse");
    const auto& h = field.p_of_x;
    const auto& g = field.p_inverse;
    auto a_hat = [&](double v) {
        const double xx = g(v);
        return field.a(xx, 0.0) / field.b(xx, 0.0) - D * field.db_dx(xx, 0.0);
    };
    auto beta = [&](double v) {
        const double ah = a_hat(v);
        const double e = 6e-6 * std::max(1.0, std::fabs(v));
        const double ahp = (a_hat(v + e) - a_hat(v - e)) / (2.0 * e);
        return -ah * ah / (4.0 * D) - 0.5 * ahp;
    };

    const double hx = h(x), hy = h(y);
    const double drift_int = quad::adaptive_simpson(
        [&](double z) {
            const double b = field.b(z, 0.0);
            return field.a(z, 0.0) / (b * b);
        },
        y, x, 1e-12);
    const double prefactor =
        std::sqrt(field.b(y, 0.0) / field.b(x, 0.0)) /
        (field.b(x, 0.0) * std::sqrt(4.0 * std::numbers::pi * D * tau)) *
        std::exp(drift_int / (2.0 * D) - (hx - hy) * (hx - hy) / (4.0 * D * tau));

    constexpr std::size_t n_nodes = 129;
    std::vector<double> r(n_nodes);
    for (std::size_t j = 0; j < n_nodes; ++j)
        r[j] = static_cast<double>(j) / static_cast<double>(n_nodes - 1);
    core::WienerConfig cfg(D, seed);
    const uint64_t tag = rng::mix2(rng::mix2(std::bit_cast<uint64_t>(x),
                                             std::bit_cast<uint64_t>(t)),
                                   rng::mix2(std::bit_cast<uint64_t>(y),
                                             std::bit_cast<uint64_t>(s)));
    const auto w = bridges::conditional_bridge_nodes(s, t, r, cfg, n_bridges, tag);

    const double hr = 1.0 / static_cast<double>(n_nodes - 1);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n_bridges; ++i) {
        const double* wi = w.data() + i * n_nodes;
        double z = 0.0;
        for (std::size_t j = 0; j < n_nodes; ++j) {
            const double weight =
                (j == 0 || j == n_nodes - 1) ? 1.0 : (j % 2 ? 4.0 : 2.0);
            z += weight * beta(wi[j] + r[j] * hx + (1.0 - r[j]) * hy);
        }
        z *= hr / 3.0;
        const double e = std::exp(tau * z);
        sum += e;
        sum_sq += e * e;
    }
    const double n = static_cast<double>(n_bridges);
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean) / (n - 1.0);
    return {prefactor * mean, prefactor * std::sqrt(var)};
}

}  // namespace growthsde::stats
