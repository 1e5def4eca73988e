#include "growthsde/law.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "growthsde/quadrature.hpp"
#include "growthsde/special.hpp"

namespace growthsde::core {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double digamma(double x) {
    double acc = 0.0;
    while (x < 6.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double r = 1.0 / x, r2 = r * r;
    return acc + std::log(x) - 0.5 * r -
           r2 * (1.0 / 12.0 - r2 * (1.0 / 120.0 - r2 / 252.0));
}

double trigamma(double x) {
    double acc = 0.0;
    while (x < 6.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    const double r = 1.0 / x, r2 = r * r;
    return acc + r * (1.0 + 0.5 * r +
                      r2 * (1.0 / 6.0 - r2 * (1.0 / 30.0 - r2 / 42.0)));
}

// bisection inverse of a monotone cdf on a bracket
double invert_cdf(const AnalyticLaw& law, double p, double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (law.cdf(mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

AnalyticLaw AnalyticLaw::normal(double mean, double variance) {
    require(variance > 0.0, "normal: variance must be > 0");
    return {LawFamily::normal, {mean, variance}};
}
AnalyticLaw AnalyticLaw::lognormal(double log_mean, double log_variance) {
    require(log_variance > 0.0, "lognormal: log-variance must be > 0");
    return {LawFamily::lognormal, {log_mean, log_variance}};
}
AnalyticLaw AnalyticLaw::gamma(double shape, double rate) {
    require(shape > 0.0 && rate > 0.0, "gamma: shape and rate must be > 0");
    return {LawFamily::gamma, {shape, rate}};
}
AnalyticLaw AnalyticLaw::generalized_gamma(double shape, double scale, double power) {
    require(shape > 0.0 && scale > 0.0 && power > 0.0,
            "generalized_gamma: parameters must be > 0");
    return {LawFamily::generalized_gamma, {shape, scale, power}};
}
AnalyticLaw AnalyticLaw::inverse_gamma(double shape, double scale) {
    require(shape > 0.0 && scale > 0.0, "inverse_gamma: parameters must be > 0");
    return {LawFamily::inverse_gamma, {shape, scale}};
}
AnalyticLaw AnalyticLaw::log_gamma(double shape, double rate) {
    require(shape > 0.0 && rate > 0.0, "log_gamma: parameters must be > 0");
    return {LawFamily::log_gamma, {shape, rate}};
}
AnalyticLaw AnalyticLaw::degenerate(double c) {
    return {LawFamily::degenerate, {c}};
}

double AnalyticLaw::pdf(double x) const {
    switch (family) {
        case LawFamily::normal: {
            const double m = params[0], v = params[1];
            return std::exp(-0.5 * (x - m) * (x - m) / v) /
                   std::sqrt(2.0 * std::numbers::pi * v);
        }
        case LawFamily::lognormal: {
            if (x <= 0.0) return 0.0;
            const double m = params[0], v = params[1];
            const double l = std::log(x);
            return std::exp(-0.5 * (l - m) * (l - m) / v) /
                   (x * std::sqrt(2.0 * std::numbers::pi * v));
        }
        case LawFamily::gamma: {
            if (x <= 0.0) return 0.0;
            const double k = params[0], r = params[1];
            return std::exp(k * std::log(r) + (k - 1.0) * std::log(x) - r * x -
                            std::lgamma(k));
        }
        case LawFamily::generalized_gamma: {
            if (x <= 0.0) return 0.0;
            const double d = params[0], a = params[1], p = params[2];
            return std::exp(std::log(p) + (d - 1.0) * std::log(x) -
                            std::pow(x / a, p) - d * std::log(a) -
                            std::lgamma(d / p));
        }
        case LawFamily::inverse_gamma: {
            if (x <= 0.0) return 0.0;
            const double k = params[0], s = params[1];
            return std::exp(k * std::log(s) - (k + 1.0) * std::log(x) - s / x -
                            std::lgamma(k));
        }
        case LawFamily::log_gamma: {
            const double k = params[0], r = params[1];
            return std::exp(k * std::log(r) + k * x - r * std::exp(x) -
                            std::lgamma(k));
        }
        case LawFamily::degenerate:
            return 0.0;
    }
    return 0.0;
}

double AnalyticLaw::cdf(double x) const {
    switch (family) {
        case LawFamily::normal:
            return special::normal_cdf((x - params[0]) / std::sqrt(params[1]));
        case LawFamily::lognormal:
            if (x <= 0.0) return 0.0;
            return special::normal_cdf((std::log(x) - params[0]) /
                                       std::sqrt(params[1]));
        case LawFamily::gamma:
            if (x <= 0.0) return 0.0;
            return special::gamma_p(params[0], params[1] * x);
        case LawFamily::generalized_gamma: {
            if (x <= 0.0) return 0.0;
            const double d = params[0], a = params[1], p = params[2];
            return special::gamma_p(d / p, std::pow(x / a, p));
        }
        case LawFamily::inverse_gamma:
            if (x <= 0.0) return 0.0;
            return special::gamma_q(params[0], params[1] / x);
        case LawFamily::log_gamma:
            return special::gamma_p(params[0], params[1] * std::exp(x));
        case LawFamily::degenerate:
            return x >= params[0] ? 1.0 : 0.0;
    }
    return 0.0;
}

double AnalyticLaw::mean() const {
    switch (family) {
        case LawFamily::normal:
            return params[0];
        case LawFamily::lognormal:
            return std::exp(params[0] + 0.5 * params[1]);
        case LawFamily::gamma:
            return params[0] / params[1];
        case LawFamily::generalized_gamma: {
            const double d = params[0], a = params[1], p = params[2];
            return a * std::exp(std::lgamma((d + 1.0) / p) - std::lgamma(d / p));
        }
        case LawFamily::inverse_gamma:
            if (params[0] <= 1.0) return kInf;
            return params[1] / (params[0] - 1.0);
        case LawFamily::log_gamma:
            return digamma(params[0]) - std::log(params[1]);
        case LawFamily::degenerate:
            return params[0];
    }
    return 0.0;
}

double AnalyticLaw::variance() const {
    switch (family) {
        case LawFamily::normal:
            return params[1];
        case LawFamily::lognormal: {
            const double m = params[0], v = params[1];
            return std::exp(2.0 * m + v) * (std::exp(v) - 1.0);
        }
        case LawFamily::gamma:
            return params[0] / (params[1] * params[1]);
        case LawFamily::generalized_gamma: {
            const double d = params[0], a = params[1], p = params[2];
            const double g1 = std::exp(std::lgamma((d + 1.0) / p) - std::lgamma(d / p));
            const double g2 = std::exp(std::lgamma((d + 2.0) / p) - std::lgamma(d / p));
            return a * a * (g2 - g1 * g1);
        }
        case LawFamily::inverse_gamma: {
            const double k = params[0], s = params[1];
            if (k <= 2.0) return kInf;
            return s * s / ((k - 1.0) * (k - 1.0) * (k - 2.0));
        }
        case LawFamily::log_gamma:
            return trigamma(params[0]);
        case LawFamily::degenerate:
            return 0.0;
    }
    return 0.0;
}

double AnalyticLaw::median() const {
    switch (family) {
        case LawFamily::normal:
            return params[0];
        case LawFamily::lognormal:
            return std::exp(params[0]);
        case LawFamily::gamma:
        case LawFamily::generalized_gamma:
        case LawFamily::inverse_gamma: {
            double hi = 1.0;
            while (cdf(hi) < 0.5 && hi < 1e300) hi *= 2.0;
            return invert_cdf(*this, 0.5, 0.0, hi);
        }
        case LawFamily::log_gamma: {
            double hi = 1.0, lo = -1.0;
            while (cdf(hi) < 0.5 && hi < 1e6) hi *= 2.0;
            while (cdf(lo) > 0.5 && lo > -1e6) lo *= 2.0;
            return invert_cdf(*this, 0.5, lo, hi);
        }
        case LawFamily::degenerate:
            return params[0];
    }
    return 0.0;
}

std::pair<double, double> AnalyticLaw::support() const {
    switch (family) {
        case LawFamily::normal:
        case LawFamily::log_gamma:
            return {-kInf, kInf};
        case LawFamily::lognormal:
        case LawFamily::gamma:
        case LawFamily::generalized_gamma:
        case LawFamily::inverse_gamma:
            return {0.0, kInf};
        case LawFamily::degenerate:
            return {params[0], params[0]};
    }
    return {-kInf, kInf};
}

double AnalyticLaw::normalization(double tol) const {
    if (family == LawFamily::degenerate) return 1.0;
    auto f = [this](double x) { return pdf(x); };
    double mass;
    if (support().first == 0.0) {
        mass = quad::integrate_half_line(f, tol * 1e-3);
    } else {
        const double c = mean();
        const double s = std::sqrt(variance());
        mass = quad::integrate_real_line(f, std::isfinite(c) ? c : 0.0,
                                         std::isfinite(s) && s > 0 ? s : 1.0,
                                         tol * 1e-3);
    }
    if (std::fabs(mass - 1.0) > tol)
        throw std::runtime_error("AnalyticLaw: pdf does not normalize to 1");
    return mass;
}

std::string AnalyticLaw::name() const {
    switch (family) {
        case LawFamily::normal: return "normal";
        case LawFamily::lognormal: return "lognormal";
        case LawFamily::gamma: return "gamma";
        case LawFamily::generalized_gamma: return "generalized_gamma";
        case LawFamily::inverse_gamma: return "inverse_gamma";
        case LawFamily::log_gamma: return "log_gamma";
        case LawFamily::degenerate: return "degenerate";
    }
    return "?";
}

std::string AnalyticLaw::describe() const {
    std::ostringstream os;
    os << name() << "(";
    for (std::size_t i = 0; i < params.size(); ++i)
        os << (i ? ", " : "") << params[i];
    os << ")";
    return os.str();
}

}  // namespace growthsde::core
