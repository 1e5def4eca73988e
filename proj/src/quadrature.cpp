#include "growthsde/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace growthsde::quad {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

double integrate_real_line(const std::function<double(double)>& f,
                           double center, double scale, double abs_tol) {
    auto g = [&](double u) {
        const double x = center + scale * std::sinh(u);
        return f(x) * scale * std::cosh(u);
    };
    return adaptive_simpson(g, -12.0, 12.0, abs_tol);
}

double integrate_half_line(const std::function<double(double)>& f,
                           double abs_tol) {
    auto g = [&](double u) {
        const double x = std::exp(u);
        return f(x) * x;
    };
    return adaptive_simpson(g, -40.0, 40.0, abs_tol);
}

double simpson(const std::function<double(double)>& f, double a, double b,
               int n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("simpson: n must be even");
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + h * i) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace growthsde::quad
