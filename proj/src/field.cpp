#include "growthsde/field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "growthsde/stochmech.hpp"

namespace growthsde::core {

namespace {

double fd_step1(double x) { return 6e-6 * std::max(1.0, std::fabs(x)); }
double fd_step2(double x) { return 1.2e-4 * std::max(1.0, std::fabs(x)); }

}  // namespace

double CoefficientField::da_dx(double x, double t) const {
    if (a_x) return a_x(x, t);
    const double h = fd_step1(x);
    return (a(x + h, t) - a(x - h, t)) / (2.0 * h);
}

double CoefficientField::db_dx(double x, double t) const {
    if (b_x) return b_x(x, t);
    const double h = fd_step1(x);
    return (b(x + h, t) - b(x - h, t)) / (2.0 * h);
}

double CoefficientField::d2b_dx2(double x, double t) const {
    if (b_xx) return b_xx(x, t);
    const double h = fd_step2(x);
    return (b(x + h, t) - 2.0 * b(x, t) + b(x - h, t)) / (h * h);
}

double CoefficientField::db_dt(double x, double t) const {
    if (b_t) return b_t(x, t);
    if (time_independent) return 0.0;
    const double h = fd_step1(t);
    return (b(x, t + h) - b(x, t - h)) / (2.0 * h);
}

void CoefficientField::validate_partials(const std::vector<double>& probes,
                                         double rel_tol) const {
    auto check = [&](const Fn2& given, double got, double num, double x) {
        if (!given) return;
        const double scale = std::max({1.0, std::fabs(got), std::fabs(num)});
        if (std::fabs(got - num) > rel_tol * scale)
            throw std::runtime_error(
                "CoefficientField: analytic partial disagrees with finite "
                "difference at x=" + std::to_string(x));
    };
    for (double x : probes) {
        const double h1 = fd_step1(x), h2 = fd_step2(x);
        if (a_x) check(a_x, a_x(x, 0.0), (a(x + h1, 0) - a(x - h1, 0)) / (2 * h1), x);
        if (b_x) check(b_x, b_x(x, 0.0), (b(x + h1, 0) - b(x - h1, 0)) / (2 * h1), x);
        if (b_xx)
            check(b_xx, b_xx(x, 0.0),
                  (b(x + h2, 0) - 2 * b(x, 0) + b(x - h2, 0)) / (h2 * h2), x);
    }
}

double TransformMap::dh_dx(double x, double t) const {
    if (h_x) return h_x(x, t);
    const double s = fd_step1(x);
    return (h(x + s, t) - h(x - s, t)) / (2.0 * s);
}

double TransformMap::d2h_dx2(double x, double t) const {
    if (h_xx) return h_xx(x, t);
    const double s = fd_step2(x);
    return (h(x + s, t) - 2.0 * h(x, t) + h(x - s, t)) / (s * s);
}

double TransformMap::dh_dt(double x, double t) const {
    if (h_t) return h_t(x, t);
    const double s = fd_step1(t);
    return (h(x, t + s) - h(x, t - s)) / (2.0 * s);
}

void TransformMap::validate_inverse(const std::vector<double>& probes, double t,
                                    double abs_tol) const {
    for (double x : probes) {
        const double back = g(h(x, t), t);
        if (std::fabs(back - x) > abs_tol * std::max(1.0, std::fabs(x)))
            throw std::runtime_error("TransformMap: g is not the inverse of h");
    }
}

TransformMap identity_map() {
    TransformMap m;
    m.h = [](double x, double) { return x; };
    m.g = [](double y, double) { return y; };
    m.h_x = [](double, double) { return 1.0; };
    m.h_xx = [](double, double) { return 0.0; };
    m.h_t = [](double, double) { return 0.0; };
    return m;
}

std::vector<double> chebyshev_probes(double lo, double hi, std::size_t n) {
    std::vector<double> p(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double c = std::cos(std::numbers::pi * (static_cast<double>(k) + 0.5) /
                                  static_cast<double>(n));
        p[k] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * c;
    }
    return p;
}

CoefficientField gompertz_field(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("gompertz: alpha must be > 0");
    CoefficientField f;
    f.a = [alpha](double x, double) { return x * (1.0 - alpha * std::log(x)); };
    f.b = [](double x, double) { return x; };
    f.a_x = [alpha](double x, double) { return 1.0 - alpha - alpha * std::log(x); };
    f.b_x = [](double, double) { return 1.0; };
    f.b_xx = [](double, double) { return 0.0; };
    f.b_t = [](double, double) { return 0.0; };
    f.domain_lo = 0.0;
    f.p_of_x = [](double x) { return std::log(x); };
    f.p_inverse = [](double y) { return std::exp(y); };
    f.label = "gompertz(" + std::to_string(alpha) + ")";
    return f;
}

CoefficientField logistic_field() { return theta_logistic_field(1.0); }

CoefficientField theta_logistic_field(double theta) {
    if (!(theta > 0.0)) throw std::invalid_argument("theta-logistic: theta must be > 0");
    CoefficientField f;
    f.a = [theta](double x, double) { return x * (1.0 - std::pow(x, theta)); };
    f.b = [](double x, double) { return x; };
    f.a_x = [theta](double x, double) {
        return 1.0 - (1.0 + theta) * std::pow(x, theta);
    };
    f.b_x = [](double, double) { return 1.0; };
    f.b_xx = [](double, double) { return 0.0; };
    f.b_t = [](double, double) { return 0.0; };
    f.domain_lo = 0.0;
    f.p_of_x = [](double x) { return std::log(x); };
    f.p_inverse = [](double y) { return std::exp(y); };
    f.label = theta == 1.0 ? "logistic"
                           : "theta-logistic(" + std::to_string(theta) + ")";
    return f;
}

CoefficientField qho_field(int n, double omega, double sigma) {
    const qho::QhoState state(n, omega, sigma);
    CoefficientField f;
    f.a = [state](double x, double) { return qho::forward_velocity(state, x); };
    f.b = [](double, double) { return 1.0; };
    f.a_x = [state](double x, double) {
        return qho::forward_velocity_derivative(state, x);
    };
    f.b_x = [](double, double) { return 0.0; };
    f.b_xx = [](double, double) { return 0.0; };
    f.b_t = [](double, double) { return 0.0; };
    const auto nodes = qho::nodes(state);
    // domain defaults to the rightmost sub-interval between velocity poles
    f.domain_lo = nodes.empty() ? -std::numeric_limits<double>::infinity()
                                : nodes.back();
    f.p_of_x = [](double x) { return x; };
    f.p_inverse = [](double y) { return y; };
    f.label = "qho(" + std::to_string(n) + ")";
    return f;
}

CoefficientField parse_field(const std::string& spec_text) {
    auto args_of = [&](const std::string& name) {
        std::vector<double> args;
        const auto open = spec_text.find('(');
        if (open == std::string::npos) return args;
        const auto close = spec_text.rfind(')');
        std::string inner = spec_text.substr(open + 1, close - open - 1);
        std::size_t pos = 0;
        while (pos < inner.size()) {
            auto comma = inner.find(',', pos);
            if (comma == std::string::npos) comma = inner.size();
            args.push_back(std::stod(inner.substr(pos, comma - pos)));
            pos = comma + 1;
        }
        (void)name;
        return args;
    };
    if (spec_text.rfind("gompertz", 0) == 0) {
        const auto args = args_of("gompertz");
        return gompertz_field(args.empty() ? 1.0 : args[0]);
    }
    if (spec_text.rfind("theta-logistic", 0) == 0) {
        const auto args = args_of("theta-logistic");
        return theta_logistic_field(args.empty() ? 1.0 : args[0]);
    }
    if (spec_text.rfind("logistic", 0) == 0) return logistic_field();
    if (spec_text.rfind("qho", 0) == 0) {
        const auto args = args_of("qho");
        const int n = args.empty() ? 0 : static_cast<int>(args[0]);
        const double omega = args.size() > 1 ? args[1] : 1.0;
        const double sigma = args.size() > 2 ? args[2] : 1.0;
        return qho_field(n, omega, sigma);
    }
    throw std::invalid_argument("unknown field: " + spec_text);
}

}  // namespace growthsde::core
