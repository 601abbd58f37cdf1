#include "fracdrift/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "fracdrift/errors.hpp"

namespace fracdrift {

AsymptoticConstants constants(HurstIndex H) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (H.value == 0.5) throw ValidationError("constants: H = 1/2 is excluded");
    if (H.value < 0.5) return {c1_const(H), nan, nan};
    return {nan, c2_const(H), c3_const(H)};
}

std::vector<double> cholesky_lower(const std::vector<double>& sym, std::size_t d) {
    double max_diag = 0.0;
    for (std::size_t i = 0; i < d; ++i) max_diag = std::max(max_diag, std::abs(sym[i * d + i]));
    const double pivot_floor = 1e-12 * max_diag;
    std::vector<double> L(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = sym[i * d + j];
            for (std::size_t k = 0; k < j; ++k) s -= L[i * d + k] * L[j * d + k];
            if (i == j) {
                if (!(s > pivot_floor))
                    throw ValidationError("matrix is not positive definite (Gamma assumption fails)");
                L[i * d + i] = std::sqrt(s);
            } else {
                L[i * d + j] = s / L[j * d + j];
            }
        }
    }
    return L;
}

std::vector<double> symmetric_inverse(const std::vector<double>& sym, std::size_t d) {
    const auto L = cholesky_lower(sym, d);
    // Solve L L^T X = I column by column.
    std::vector<double> inv(d * d, 0.0);
    std::vector<double> y(d), x(d);
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t i = 0; i < d; ++i) {
            double s = (i == c) ? 1.0 : 0.0;
            for (std::size_t k = 0; k < i; ++k) s -= L[i * d + k] * y[k];
            y[i] = s / L[i * d + i];
        }
        for (std::size_t ii = d; ii-- > 0;) {
            double s = y[ii];
            for (std::size_t k = ii + 1; k < d; ++k) s -= L[k * d + ii] * x[k];
            x[ii] = s / L[ii * d + ii];
        }
        for (std::size_t i = 0; i < d; ++i) inv[i * d + c] = x[i];
    }
    return inv;
}

std::vector<double> symmetric_eigenvalues(const std::vector<double>& sym, std::size_t d) {
    // Cyclic Jacobi; d is tiny so convergence is immediate.
    std::vector<double> a = sym;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j) off += a[i * d + j] * a[i * d + j];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                if (std::abs(a[p * d + q]) < 1e-300) continue;
                const double theta = 0.5 * (a[q * d + q] - a[p * d + p]) / a[p * d + q];
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < d; ++k) {
                    const double akp = a[k * d + p], akq = a[k * d + q];
                    a[k * d + p] = c * akp - s * akq;
                    a[k * d + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double apk = a[p * d + k], aqk = a[q * d + k];
                    a[p * d + k] = c * apk - s * aqk;
                    a[q * d + k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(d);
    for (std::size_t i = 0; i < d; ++i) ev[i] = a[i * d + i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

namespace {

/*
 * Both branches of the outer Fisher/contrast integrand factor as
 *
 *     phi_k(t) phi_l(t) = t^{1-2H} psi_k(t) psi_l(t)
 *
 * with psi smooth through t = 0 (the t^{1-2H} weight is integrable but
 * singular at 0 for H > 1/2, so a plain trapezoid cannot reach the stated
 * tolerances). The integrals are therefore computed by product integration
 * of the exact weight moments against the piecewise-linear psi_k psi_l,
 * with the t -> 0 limit of psi supplied analytically per branch.
 */
struct KernelFunctionals {
    std::vector<std::vector<double>> psi;  // psi_k at every node, including the limit at node 0
};

KernelFunctionals kernel_functionals(const SdeConfig& cfg, const std::vector<std::vector<double>>& integrands) {
    const TimeGrid& grid = cfg.grid;
    const std::size_t n = grid.steps();
    const double h = cfg.H.value;
    KernelFunctionals out;
    out.psi.assign(integrands.size(), std::vector<double>(n + 1, 0.0));

    if (h < 0.5) {
        const double sc1 = std::sqrt(c1_const(cfg.H));
        // psi(0) = sqrt(c1) B(3/2-H, 1/2-H) dbk(x_0)
        const double beta = std::tgamma(1.5 - h) * std::tgamma(0.5 - h) / std::tgamma(2.0 - 2.0 * h);
        const auto abel = build_abel_weights(grid, FracOrder(0.5 - h));
        for (std::size_t k = 0; k < integrands.size(); ++k) {
            std::vector<double> f(n + 1, 0.0);
            for (std::size_t j = 1; j <= n; ++j) f[j] = std::pow(grid.node(j), 0.5 - h) * integrands[k][j];
            const auto raw = apply_abel_left(abel, f);
            out.psi[k][0] = sc1 * beta * integrands[k][0];
            for (std::size_t i = 1; i <= n; ++i)
                out.psi[k][i] = sc1 * std::pow(grid.node(i), 2.0 * h - 1.0) * raw[i];
        }
    } else {
        const double c2 = c2_const(cfg.H);
        const double c3 = c3_const(cfg.H);
        const DualPowerDifferenceWeights diff(grid, 0.5 - h, -h - 0.5);
        for (std::size_t k = 0; k < integrands.size(); ++k) {
            const auto dk = diff.apply(integrands[k]);
            out.psi[k][0] = c2 * integrands[k][0];
            for (std::size_t i = 1; i <= n; ++i) {
                const double t = grid.node(i);
                out.psi[k][i] = c2 * integrands[k][i] + c3 * std::pow(t, 2.0 * h - 1.0) * dk[i];
            }
        }
    }
    return out;
}

// int_0^T t^{1-2H} PL(psi_k psi_l) dt with exact weight moments per cell.
double weighted_pair_integral(const TimeGrid& grid, double h, const std::vector<double>& psi_k,
                              const std::vector<double>& psi_l) {
    const std::size_t n = grid.steps();
    const double dt = grid.dt();
    const double e0 = 2.0 - 2.0 * h;
    const double e1 = 3.0 - 2.0 * h;
    double acc = 0.0;
    double pa = 0.0;  // a^{2-2H}, starts at 0
    double qa = 0.0;  // a^{3-2H}
    for (std::size_t j = 0; j < n; ++j) {
        const double a = static_cast<double>(j) * dt;
        const double b = static_cast<double>(j + 1) * dt;
        const double pb = std::pow(b, e0);
        const double qb = pb * b;
        const double m0 = (pb - pa) / e0;
        const double m1 = (qb - qa) / e1;
        const double w_right = (m1 - a * m0) / dt;
        const double w_left = m0 - w_right;
        acc += w_left * psi_k[j] * psi_l[j] + w_right * psi_k[j + 1] * psi_l[j + 1];
        pa = pb;
        qa = qb;
    }
    return acc;
}

}  // namespace

FisherMatrix gamma_matrix(const DriftModel& model, const std::vector<double>& theta0, const SdeConfig& cfg) {
    if (theta0.size() != model.dim) throw ValidationError("gamma_matrix: theta0 dimension mismatch");
    if (cfg.H.value == 0.5) throw ValidationError("gamma_matrix: H = 1/2 is excluded");
    const SampledPath x = solve_ode_limit(model, theta0, cfg);
    const std::size_t n = cfg.grid.steps();
    const std::size_t d = model.dim;

    std::vector<std::vector<double>> pd(d, std::vector<double>(n + 1));
    for (std::size_t j = 0; j <= n; ++j) {
        const auto g = model.grad_theta_b(x.values[j], theta0);
        for (std::size_t k = 0; k < d; ++k) pd[k][j] = g[k];
    }
    const auto kf = kernel_functionals(cfg, pd);

    FisherMatrix fm;
    fm.dim = d;
    fm.gamma.assign(d * d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t l = k; l < d; ++l) {
            const double v = weighted_pair_integral(cfg.grid, cfg.H.value, kf.psi[k], kf.psi[l]);
            fm.gamma[k * d + l] = v;
            fm.gamma[l * d + k] = v;
        }
    }
    fm.chol = cholesky_lower(fm.gamma, d);
    fm.inv = symmetric_inverse(fm.gamma, d);
    fm.eigenvalues = symmetric_eigenvalues(fm.gamma, d);
    return fm;
}

double y_limit(const DriftModel& model, const std::vector<double>& theta, const std::vector<double>& theta0,
               const SdeConfig& cfg) {
    if (theta.size() != model.dim || theta0.size() != model.dim)
        throw ValidationError("y_limit: parameter dimension mismatch");
    const SampledPath x = solve_ode_limit(model, theta0, cfg);
    const std::size_t n = cfg.grid.steps();
    std::vector<std::vector<double>> delta(1, std::vector<double>(n + 1));
    for (std::size_t j = 0; j <= n; ++j)
        delta[0][j] = model.b(x.values[j], theta) - model.b(x.values[j], theta0);
    const auto kf = kernel_functionals(cfg, delta);
    return 0.5 * weighted_pair_integral(cfg.grid, cfg.H.value, kf.psi[0], kf.psi[0]);
}

double y_empirical(const LikelihoodContext& ctx, const std::vector<double>& theta,
                   const std::vector<double>& theta0) {
    const double e2 = ctx.cfg.epsilon * ctx.cfg.epsilon;
    return e2 * (log_likelihood(ctx, theta) - log_likelihood(ctx, theta0));
}

SeparationFit assumption4_diagnostic(const DriftModel& model, const ParameterBox& box,
                                     const std::vector<double>& theta0, const SdeConfig& cfg,
                                     std::size_t points_per_axis) {
    const std::size_t d = box.dim();
    std::vector<double> logr, logy;
    std::vector<std::pair<double, double>> samples;  // (|theta-theta0|, Y)
    std::vector<std::size_t> idx(d, 0);
    const std::size_t total = [&] {
        std::size_t t = 1;
        for (std::size_t k = 0; k < d; ++k) t *= points_per_axis;
        return t;
    }();
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::vector<double> theta(d);
        std::size_t rem = flat;
        for (std::size_t k = 0; k < d; ++k) {
            const std::size_t ik = rem % points_per_axis;
            rem /= points_per_axis;
            const double frac = (ik + 1.0) / (points_per_axis + 1.0);
            theta[k] = box.lower[k] + frac * (box.upper[k] - box.lower[k]);
        }
        double r2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) r2 += (theta[k] - theta0[k]) * (theta[k] - theta0[k]);
        const double r = std::sqrt(r2);
        if (r < 1e-8) continue;
        const double y = y_limit(model, theta, theta0, cfg);
        if (y <= 0.0) return {0.0, 0.0, false};
        samples.emplace_back(r, y);
        logr.push_back(std::log(r));
        logy.push_back(std::log(y));
    }
    if (samples.size() < 3) return {0.0, 0.0, false};

    // Least-squares slope of log Y on log r, clamped into (1, 2].
    double mr = 0.0, my = 0.0;
    for (std::size_t i = 0; i < logr.size(); ++i) {
        mr += logr[i];
        my += logy[i];
    }
    mr /= logr.size();
    my /= logy.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < logr.size(); ++i) {
        sxx += (logr[i] - mr) * (logr[i] - mr);
        sxy += (logr[i] - mr) * (logy[i] - my);
    }
    double rho = (sxx > 0.0) ? sxy / sxx : 2.0;
    const bool rho_in_range = rho > 1.0 && rho <= 2.0 + 1e-9;
    rho = std::min(2.0, std::max(std::nextafter(1.0, 2.0), rho));
    double xi = std::numeric_limits<double>::infinity();
    for (const auto& [r, y] : samples) xi = std::min(xi, y / std::pow(r, rho));
    return {xi, rho, rho_in_range && xi > 0.0};
}

}  // namespace fracdrift
