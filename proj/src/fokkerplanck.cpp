#include "growthsde/fokkerplanck.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "growthsde/rng.hpp"

namespace growthsde::fpe {

double FpeProblem::dv(double x) const {
    if (drift_prime) return drift_prime(x);
    const double h = 6e-6 * std::max(1.0, std::fabs(x));
    return (drift(x + h) - drift(x - h)) / (2.0 * h);
}

double FpeProblem::dB(double x) const {
    if (diffusion_prime) return diffusion_prime(x);
    const double h = 6e-6 * std::max(1.0, std::fabs(x));
    return (diffusion(x + h) - diffusion(x - h)) / (2.0 * h);
}

namespace {

void thomas_solve(std::vector<double>& a, std::vector<double>& b,
                  std::vector<double>& c, std::vector<double>& d) {
    const std::size_t n = b.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    d[n - 1] /= b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

}  // namespace

EvolveResult evolve(const FpeProblem& problem, const core::DensityCurve& f0,
                    double t_final, std::size_t n_time_steps) {
    const std::size_t n = f0.x.size();
    const double h = f0.x[1] - f0.x[0];
    for (std::size_t i = 2; i < n; ++i)
        if (std::fabs((f0.x[i] - f0.x[i - 1]) - h) > 1e-9 * h)
            throw std::invalid_argument("evolve: grid must be uniform");
    for (double v : f0.f)
        if (v < 0.0) throw std::invalid_argument("evolve: f0 must be nonnegative");

    // faces where the probability current vanishes: ends + interior walls
    std::vector<char> blocked(n + 1, 0);
    blocked[0] = blocked[n] = 1;
    for (double wall : problem.walls) {
        const auto j = static_cast<std::size_t>(
            std::llround((wall - (f0.x[0] - 0.5 * h)) / h));
        if (j <= n) blocked[j] = 1;
    }

    // flux F_{i+1/2} = [ (Bf)_{i+1} - (Bf)_i ]/h - v_{i+1/2} (f_i + f_{i+1})/2
    // d_t f_i = (F_{i+1/2} - F_{i-1/2}) / h, a tridiagonal operator M
    std::vector<double> B(n), v_face(n + 1);
    for (std::size_t i = 0; i < n; ++i) B[i] = problem.diffusion(f0.x[i]);
    for (std::size_t j = 1; j < n; ++j)
        v_face[j] = problem.drift(f0.x[j - 1] + 0.5 * h);
    std::vector<double> Ml(n, 0.0), Md(n, 0.0), Mu(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!blocked[i + 1]) {  // flux through right face
            Md[i] += (-B[i] / h - 0.5 * v_face[i + 1]) / h;
            Mu[i] += (B[i + 1] / h - 0.5 * v_face[i + 1]) / h;
        }
        if (!blocked[i]) {  // minus flux through left face
            Md[i] -= (B[i] / h - 0.5 * v_face[i]) / h;
            Ml[i] -= (-B[i - 1] / h - 0.5 * v_face[i]) / h;
        }
    }

    const double dt = t_final / static_cast<double>(n_time_steps);
    std::vector<double> f(f0.f);
    const double mass0 = f0.trapezoid_mass();
    std::size_t osc0 = 0;
    for (std::size_t i = 1; i < n; ++i)
        if ((f[i] - f[i - 1]) * (i > 1 ? f[i - 1] - f[i - 2] : 0.0) < 0.0) ++osc0;

    std::vector<double> a(n), b(n), c(n), rhs(n);
    for (std::size_t step = 0; step < n_time_steps; ++step) {
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = -0.5 * dt * Ml[i];
            b[i] = 1.0 - 0.5 * dt * Md[i];
            c[i] = -0.5 * dt * Mu[i];
            rhs[i] = f[i] + 0.5 * dt * (Ml[i] * (i ? f[i - 1] : 0.0) +
                                        Md[i] * f[i] +
                                        Mu[i] * (i + 1 < n ? f[i + 1] : 0.0));
        }
        thomas_solve(a, b, c, rhs);
        f.swap(rhs);
    }

    double clipped = 0.0;
    for (double& fv : f)
        if (fv < 0.0) {
            clipped += -fv * h;
            fv = 0.0;
        }
    std::size_t osc1 = 0;
    for (std::size_t i = 1; i < n; ++i)
        if ((f[i] - f[i - 1]) * (i > 1 ? f[i - 1] - f[i - 2] : 0.0) < 0.0) ++osc1;

    EvolveResult out;
    out.f = core::DensityCurve(f0.x, std::move(f));
    out.mass_drift = std::fabs(out.f.trapezoid_mass() - mass0);
    out.negativity_clip = clipped;
    out.oscillation_warning = osc1 > osc0 + 8;
    return out;
}

SturmLiouvilleProblem reduce_to_sturm_liouville(const FpeProblem& problem) {
    SturmLiouvilleProblem sl;
    const FpeProblem p = problem;
    sl.p = [p](double x) { return p.diffusion(x); };
    sl.q = [p](double x) {
        const double u = p.dB(x) - p.drift(x);
        const double h = 6e-6 * std::max(1.0, std::fabs(x));
        const double up = (p.dB(x + h) - p.drift(x + h) -
                           (p.dB(x - h) - p.drift(x - h))) /
                          (2.0 * h);
        return u * u / (4.0 * p.diffusion(x)) - 0.5 * up;
    };
    sl.lo = problem.lo;
    sl.hi = problem.hi;
    sl.bc = SlBoundary::zero_current;
    sl.robin = [p](double x) {
        return -(p.dB(x) - p.drift(x)) / (2.0 * p.diffusion(x));
    };
    return sl;
}

std::vector<double> logistic_eigenvalues(double diffusion_d, int n_max,
                                         int* negative_from) {
    if (!(diffusion_d > 0.0 && diffusion_d < 1.0))
        throw std::invalid_argument("logistic_eigenvalues: need 0 < D < 1");
    std::vector<double> lam(static_cast<std::size_t>(n_max) + 1);
    int neg = -1;
    for (int m = 0; m <= n_max; ++m) {
        lam[static_cast<std::size_t>(m)] =
            (1.0 - diffusion_d) * m - diffusion_d * static_cast<double>(m) * m;
        if (neg < 0 && lam[static_cast<std::size_t>(m)] < 0.0) neg = m;
    }
    if (negative_from) *negative_from = neg;
    return lam;
}

EigenSolution numeric_eigensolve(const SturmLiouvilleProblem& problem,
                                 std::size_t k, std::size_t n_grid) {
    const double h = (problem.hi - problem.lo) / static_cast<double>(n_grid);
    // cell centers keep q evaluations away from singular walls
    std::vector<double> x(n_grid);
    for (std::size_t i = 0; i < n_grid; ++i)
        x[i] = problem.lo + h * (static_cast<double>(i) + 0.5);

    Eigen::VectorXd diag(n_grid), sub(n_grid - 1);
    std::vector<double> p_face(n_grid + 1);
    for (std::size_t j = 0; j <= n_grid; ++j)
        p_face[j] = problem.p(problem.lo + h * static_cast<double>(j));
    for (std::size_t i = 0; i < n_grid; ++i) {
        double d = problem.q(x[i]);
        if (i > 0) d += p_face[i] / (h * h);
        if (i + 1 < n_grid) d += p_face[i + 1] / (h * h);
        if (i == 0) {
            if (problem.bc == SlBoundary::dirichlet) {
                d += 2.0 * p_face[0] / (h * h);
            } else {
                // flux p r G_face with G_face = G_0 / (1 + r h/2); degenerates
                // to the Dirichlet stencil when the Robin coefficient blows up
                const double r = problem.robin(problem.lo + 1e-3 * h);
                const double denom = 1.0 + 0.5 * r * h;
                const double r_eff = std::fabs(denom) > 0.1 ? r / denom : 2.0 / h;
                d += p_face[0] * r_eff / h;
            }
        }
        if (i + 1 == n_grid) {
            if (problem.bc == SlBoundary::dirichlet) {
                d += 2.0 * p_face[n_grid] / (h * h);
            } else {
                const double r = problem.robin(problem.hi - 1e-3 * h);
                const double denom = 1.0 - 0.5 * r * h;
                const double r_eff = std::fabs(denom) > 0.1 ? r / denom : -2.0 / h;
                d -= p_face[n_grid] * r_eff / h;
            }
        }
        diag(static_cast<Eigen::Index>(i)) = d;
        if (i + 1 < n_grid)
            sub(static_cast<Eigen::Index>(i)) = -p_face[i + 1] / (h * h);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("numeric_eigensolve: tridiagonal QL failed");
    const Eigen::VectorXd& all = es.eigenvalues();

    EigenSolution out;
    out.grid = x;
    const std::size_t kk = std::min(k, n_grid);
    out.eigenvalues.resize(kk);
    for (std::size_t m = 0; m < kk; ++m)
        out.eigenvalues[m] = all(static_cast<Eigen::Index>(m));

    // inverse iteration per eigenvalue, orthogonalizing inside near clusters
    out.eigenvectors.assign(kk, std::vector<double>(n_grid));
    for (std::size_t m = 0; m < kk; ++m) {
        const double shift = out.eigenvalues[m] +
                             1e-10 * std::max(1.0, std::fabs(out.eigenvalues[m]));
        std::vector<double> vvec(n_grid);
        for (std::size_t i = 0; i < n_grid; ++i)
            vvec[i] = rng::mix2(m, i) * 0x1p-64 - 0.5;
        for (int it = 0; it < 8; ++it) {
            // orthogonalize against earlier vectors in the same cluster
            for (std::size_t prev = 0; prev < m; ++prev) {
                if (std::fabs(out.eigenvalues[prev] - out.eigenvalues[m]) >
                    1e-3 * std::max(1.0, std::fabs(out.eigenvalues[m])))
                    continue;
                double dot = 0.0;
                for (std::size_t i = 0; i < n_grid; ++i)
                    dot += vvec[i] * out.eigenvectors[prev][i];
                for (std::size_t i = 0; i < n_grid; ++i)
                    vvec[i] -= dot * out.eigenvectors[prev][i] * h;
            }
            std::vector<double> a(n_grid), b(n_grid), c(n_grid), d(vvec);
            for (std::size_t i = 0; i < n_grid; ++i) {
                a[i] = i ? sub(static_cast<Eigen::Index>(i - 1)) : 0.0;
                b[i] = diag(static_cast<Eigen::Index>(i)) - shift;
                c[i] = i + 1 < n_grid ? sub(static_cast<Eigen::Index>(i)) : 0.0;
            }
            thomas_solve(a, b, c, d);
            double norm = 0.0;
            for (double dv : d) norm += dv * dv;
            norm = std::sqrt(norm * h);
            for (std::size_t i = 0; i < n_grid; ++i) vvec[i] = d[i] / norm;
        }
        if (vvec[n_grid / 2] < 0.0 ||
            (vvec[n_grid / 2] == 0.0 && vvec[n_grid / 3] < 0.0))
            for (double& vi : vvec) vi = -vi;
        out.eigenvectors[m] = std::move(vvec);
    }

    out.sign_changes.resize(kk);
    for (std::size_t m = 0; m < kk; ++m) {
        int changes = 0;
        double amp = 0.0;
        for (double vi : out.eigenvectors[m]) amp = std::max(amp, std::fabs(vi));
        double last = 0.0;
        for (double vi : out.eigenvectors[m]) {
            if (std::fabs(vi) < 1e-4 * amp) continue;
            if (last != 0.0 && std::signbit(vi) != std::signbit(last)) ++changes;
            last = vi;
        }
        out.sign_changes[m] = changes;
    }
    return out;
}

ExpansionResult eigen_expansion_solve(const FpeProblem& problem,
                                      const core::DensityCurve& f0, double t,
                                      std::size_t k, std::size_t n_grid) {
    const auto sl = reduce_to_sturm_liouville(problem);
    const auto eig = numeric_eigensolve(sl, k, n_grid);
    const auto& x = eig.grid;
    const double h = x[1] - x[0];
    const auto& g0 = eig.eigenvectors[0];

    std::vector<double> c(eig.eigenvalues.size(), 0.0);
    for (std::size_t m = 0; m < c.size(); ++m) {
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (std::fabs(g0[i]) < 1e-12) continue;
            acc += f0.value_at(x[i]) * eig.eigenvectors[m][i] / g0[i] * h;
        }
        c[m] = acc;
    }
    std::vector<double> f(x.size(), 0.0);
    for (std::size_t m = 0; m < c.size(); ++m) {
        const double decay = std::exp(-eig.eigenvalues[m] * t);
        for (std::size_t i = 0; i < x.size(); ++i)
            f[i] += c[m] * decay * g0[i] * eig.eigenvectors[m][i];
    }
    for (double& fv : f) fv = std::max(fv, 0.0);
    ExpansionResult out;
    out.f = core::DensityCurve(x, std::move(f));
    out.truncation_error =
        std::fabs(c.back()) * std::exp(-eig.eigenvalues.back() * t);
    return out;
}

core::DensityCurve invariant_density(const FpeProblem& problem,
                                     std::size_t n_grid,
                                     const std::vector<double>& masses) {
    const double h = (problem.hi - problem.lo) / static_cast<double>(n_grid);
    std::vector<double> x(n_grid), logw(n_grid);
    for (std::size_t i = 0; i < n_grid; ++i)
        x[i] = problem.lo + h * (static_cast<double>(i) + 0.5);
    auto dlog = [&](double xx) {
        return -(problem.dB(xx) - problem.drift(xx)) / problem.diffusion(xx);
    };
    // integrate d/dx log f_tilde, restarting at walls
    std::vector<std::size_t> segment(n_grid, 0);
    logw[0] = 0.0;
    double prev = dlog(x[0]);
    for (std::size_t i = 1; i < n_grid; ++i) {
        const double cur = dlog(x[i]);
        bool crossed = false;
        for (double wall : problem.walls)
            if (x[i - 1] < wall && wall <= x[i]) crossed = true;
        segment[i] = segment[i - 1] + (crossed ? 1 : 0);
        logw[i] = crossed ? 0.0 : logw[i - 1] + 0.5 * (prev + cur) * h;
        prev = cur;
    }
    const std::size_t n_seg = segment.back() + 1;
    std::vector<double> peak(n_seg, -1e300);
    for (std::size_t i = 0; i < n_grid; ++i)
        peak[segment[i]] = std::max(peak[segment[i]], logw[i]);
    std::vector<double> f(n_grid), seg_mass(n_seg, 0.0);
    for (std::size_t i = 0; i < n_grid; ++i) {
        f[i] = std::exp(logw[i] - peak[segment[i]]);
        if (!std::isfinite(f[i]))
            throw std::runtime_error("invariant_density: non-integrable weight");
        seg_mass[segment[i]] += f[i] * h;
    }
    double total = 0.0;
    for (double m : seg_mass) total += m;
    for (std::size_t i = 0; i < n_grid; ++i) {
        const std::size_t s = segment[i];
        const double target =
            masses.empty() ? 1.0 * seg_mass[s] / total
                           : (s < masses.size() ? masses[s] : 0.0);
        f[i] *= target / seg_mass[s];
    }
    // re-express per-segment normalization as plain global when no walls
    core::DensityCurve out(std::move(x), std::move(f));
    if (problem.walls.empty()) out.normalize();
    return out;
}

}  // namespace growthsde::fpe
