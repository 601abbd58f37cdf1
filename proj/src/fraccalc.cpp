#include "fracdrift/fraccalc.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "fracdrift/errors.hpp"

namespace fracdrift {

FracOrder::FracOrder(double a) : alpha(a) {
    if (!std::isfinite(a) || a <= 0.0 || a >= 1.0) throw ValidationError("FracOrder: alpha must lie in (0,1)");
}

AbelWeights build_abel_weights(const TimeGrid& grid, FracOrder order) {
    const double alpha = order.alpha;
    const double dt = grid.dt();
    const std::size_t n = grid.steps();
    AbelWeights w;
    w.alpha = alpha;
    w.dt = dt;
    w.wl.assign(n + 1, 0.0);
    w.wr.assign(n + 1, 0.0);
    for (std::size_t l = 1; l <= n; ++l) {
        const double a = static_cast<double>(l - 1) * dt;
        const double b = static_cast<double>(l) * dt;
        const double pa = (l == 1) ? 0.0 : std::pow(a, alpha);
        const double pb = std::pow(b, alpha);
        const double m0 = (pb - pa) / alpha;                          // int u^{alpha-1}
        const double m1 = (pb * b - pa * a) / (alpha + 1.0);          // int u^{alpha}
        w.wl[l] = (m1 - a * m0) / dt;
        w.wr[l] = (b * m0 - m1) / dt;
    }
    return w;
}

MarchaudWeights build_marchaud_weights(const TimeGrid& grid, FracOrder order) {
    const double alpha = order.alpha;
    const double dt = grid.dt();
    const std::size_t n = grid.steps();
    MarchaudWeights w;
    w.alpha = alpha;
    w.dt = dt;
    w.cl.assign(n + 1, 0.0);
    w.cr.assign(n + 1, 0.0);
    for (std::size_t l = 1; l <= n; ++l) {
        const double a = static_cast<double>(l - 1) * dt;
        const double b = static_cast<double>(l) * dt;
        const double qb = std::pow(b, -alpha);
        const double rb = std::pow(b, 1.0 - alpha);
        if (l == 1) {
            // int_0^b (u-0) u^{-alpha-1} du = b^{1-alpha}/(1-alpha); the (b-u) moment
            // diverges but always multiplies an identically zero coefficient.
            w.cl[1] = rb / (1.0 - alpha) / dt;
            w.cr[1] = 0.0;
            continue;
        }
        const double qa = std::pow(a, -alpha);
        const double ra = std::pow(a, 1.0 - alpha);
        const double m0 = (qa - qb) / alpha;                          // int u^{-alpha-1}
        const double m1 = (rb - ra) / (1.0 - alpha);                  // int u^{-alpha}
        w.cl[l] = (m1 - a * m0) / dt;
        w.cr[l] = (b * m0 - m1) / dt;
    }
    return w;
}

std::vector<double> apply_abel_left(const AbelWeights& w, const std::vector<double>& f) {
    const std::size_t n = f.size() - 1;
    std::vector<double> g(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            const std::size_t l = i - j;
            acc += f[j] * w.wl[l] + f[j + 1] * w.wr[l];
        }
        g[i] = acc;
    }
    return g;
}

std::vector<double> apply_abel_right(const AbelWeights& w, const std::vector<double>& f) {
    const std::size_t n = f.size() - 1;
    std::vector<double> g(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = i; j < n; ++j) {
            const std::size_t l = j - i + 1;
            acc += f[j] * w.wr[l] + f[j + 1] * w.wl[l];
        }
        g[i] = acc;
    }
    return g;
}

SampledPath rl_integral_left(const SampledPath& f, FracOrder order) {
    const auto w = build_abel_weights(f.grid, order);
    auto g = apply_abel_left(w, f.values);
    const double inv_gamma = 1.0 / std::tgamma(order.alpha);
    for (double& x : g) x *= inv_gamma;
    return SampledPath(f.grid, std::move(g));
}

SampledPath rl_integral_right(const SampledPath& f, FracOrder order, double b) {
    if (std::abs(b - f.grid.horizon()) > 1e-12 * f.grid.horizon())
        throw ValidationError("rl_integral_right: b must equal the grid horizon");
    const auto w = build_abel_weights(f.grid, order);
    auto g = apply_abel_right(w, f.values);
    const double inv_gamma = 1.0 / std::tgamma(order.alpha);
    for (double& x : g) x *= inv_gamma;
    return SampledPath(f.grid, std::move(g));
}

SampledPath weyl_left(const SampledPath& f, FracOrder order) {
    const std::size_t n = f.grid.steps();
    if (n < 2) throw ValidationError("weyl_left: need at least 2 steps");
    const double alpha = order.alpha;
    const auto w = build_marchaud_weights(f.grid, order);
    const double inv_gamma = 1.0 / std::tgamma(1.0 - alpha);
    std::vector<double> g(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            const std::size_t l = i - j;
            s += (f.values[i] - f.values[j]) * w.cl[l] + (f.values[i] - f.values[j + 1]) * w.cr[l];
        }
        g[i] = inv_gamma * (f.values[i] * std::pow(f.grid.node(i), -alpha) + alpha * s);
    }
    return SampledPath(f.grid, std::move(g));
}

SampledPath weyl_right(const SampledPath& f, FracOrder order, double b) {
    if (std::abs(b - f.grid.horizon()) > 1e-12 * f.grid.horizon())
        throw ValidationError("weyl_right: b must equal the grid horizon");
    const std::size_t n = f.grid.steps();
    if (n < 2) throw ValidationError("weyl_right: need at least 2 steps");
    const double alpha = order.alpha;
    const auto w = build_marchaud_weights(f.grid, order);
    const double inv_gamma = 1.0 / std::tgamma(1.0 - alpha);
    std::vector<double> g(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = i; j < n; ++j) {
            const std::size_t l = j - i + 1;
            s += (f.values[i] - f.values[j + 1]) * w.cl[l] + (f.values[i] - f.values[j]) * w.cr[l];
        }
        g[i] = inv_gamma * (f.values[i] * std::pow(b - f.grid.node(i), -alpha) + alpha * s);
    }
    return SampledPath(f.grid, std::move(g));
}

double phi_profile(double c, double u) {
    if (c <= 0.0 || c >= 1.0) throw ValidationError("phi_profile: c must lie in (0,1)");
    if (!(u > 0.0)) throw ValidationError("phi_profile: u must be positive");
    if (u >= 1.0) return 0.0;
    if (u >= 0.5) {
        // Phi_c(u) = sum_{k>=0} (1-u)^{k+1-c} / (k+1-c)
        const double x = 1.0 - u;
        double xp = std::pow(x, 1.0 - c);
        double s = 0.0;
        for (int k = 0; k < 400; ++k) {
            const double term = xp / (k + 1.0 - c);
            s += term;
            if (term < 1e-17 * s) break;
            xp *= x;
        }
        return s;
    }
    // Phi_c(u) = Phi_c(1/2) + log(1/(2u)) + sum_{m>=1} (c)_m/m! (2^-m - u^m)/m
    double s = phi_profile(c, 0.5) + std::log(0.5 / u);
    double poch = 1.0, halfp = 1.0, up = 1.0;
    for (int m = 1; m < 400; ++m) {
        poch *= (c + m - 1.0) / m;
        halfp *= 0.5;
        up *= u;
        const double term = poch * (halfp - up) / m;
        s += term;
        if (std::abs(term) < 1e-17 * std::abs(s)) break;
    }
    return s;
}

double frac_integral_right_power(double alpha, double t, double s) {
    if (!(s > 0.0) || !(s < t)) throw ValidationError("frac_integral_right_power: need 0 < s < t");
    return phi_profile(1.0 - alpha, s / t) / std::tgamma(alpha);
}

double weyl_right_power(double alpha, double t, double s) {
    if (!(s > 0.0) || !(s < t)) throw ValidationError("weyl_right_power: need 0 < s < t");
    const double u = s / t;
    return (std::pow(1.0 - u, -alpha) - alpha * phi_profile(alpha, u)) / std::tgamma(1.0 - alpha);
}

namespace {

// 8-point Gauss-Legendre on [-1, 1]
constexpr double kGl8X[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                             0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double kGl8W[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                             0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

}  // namespace

DualPowerDifferenceWeights::DualPowerDifferenceWeights(const TimeGrid& grid, double p, double q)
    : n_(grid.steps()), p_(p), q_(q), dt_(grid.dt()) {
    if (p <= -1.0 || p > 0.0) throw ValidationError("DualPowerDifferenceWeights: p must lie in (-1, 0]");
    if (q <= -2.0 || q >= -1.0) throw ValidationError("DualPowerDifferenceWeights: q must lie in (-2, -1)");
    ml_.assign(n_ * (n_ + 1) / 2, 0.0);
    mr_.assign(n_ * (n_ + 1) / 2, 0.0);

    // Moments in the scaled variable sigma = s/dt over [j, j+1] against target i:
    //   ml = int (j+1-sigma) sigma^p (i-sigma)^q dsigma,  mr = int (sigma-j) sigma^p (i-sigma)^q dsigma,
    // then scale by dt^{p+q+1}.
    const double scale = std::pow(dt_, p_ + q_ + 1.0);
    boost::math::quadrature::tanh_sinh<double> ts;

    for (std::size_t i = 1; i <= n_; ++i) {
        const double di = static_cast<double>(i);
        const std::size_t base = offset(i);
        for (std::size_t j = 0; j < i; ++j) {
            const double dj = static_cast<double>(j);
            const bool s_singular = (j == 0);
            const bool t_singular = (j + 1 == i);
            double l = 0.0, r = 0.0;
            if (!s_singular && !t_singular) {
                for (int k = 0; k < 8; ++k) {
                    const double sig = dj + 0.5 + 0.5 * kGl8X[k];
                    const double w = 0.5 * kGl8W[k] * std::pow(sig, p_) * std::pow(di - sig, q_);
                    l += w * (dj + 1.0 - sig);
                    r += w * (sig - dj);
                }
            } else {
                // boost two-arg convention: xc < 0 means -(distance to left end),
                // xc > 0 means distance to the right end.
                auto hat_l = [&](double sig, double xc) {
                    const double from_left = (xc < 0) ? -xc : sig - dj;
                    const double to_right = (xc > 0) ? xc : dj + 1.0 - sig;
                    const double s_pow = s_singular ? std::pow(from_left, p_) : std::pow(sig, p_);
                    const double t_pow = t_singular ? std::pow(to_right, q_ + 1.0) : std::pow(di - sig, q_) * (dj + 1.0 - sig);
                    return s_pow * t_pow;
                };
                l = ts.integrate(hat_l, dj, dj + 1.0);
                if (t_singular) {
                    r = 0.0;  // pairs with g_i - g_i = 0
                } else {
                    auto hat_r = [&](double sig, double xc) {
                        const double from_left = (xc < 0) ? -xc : sig - dj;
                        const double s_pow = s_singular ? std::pow(from_left, p_) : std::pow(sig, p_);
                        return s_pow * std::pow(di - sig, q_) * from_left;
                    };
                    r = ts.integrate(hat_r, dj, dj + 1.0);
                }
            }
            ml_[base + j] = scale * l;
            mr_[base + j] = scale * r;
        }
    }
}

std::vector<double> DualPowerDifferenceWeights::apply(const std::vector<double>& g) const {
    if (g.size() != n_ + 1) throw ValidationError("DualPowerDifferenceWeights::apply: size mismatch");
    std::vector<double> out(n_ + 1, 0.0);
    for (std::size_t i = 1; i <= n_; ++i) {
        const std::size_t base = offset(i);
        const double gi = g[i];
        double acc = 0.0;
        for (std::size_t j = 0; j < i; ++j) acc += (gi - g[j]) * ml_[base + j] + (gi - g[j + 1]) * mr_[base + j];
        out[i] = acc;
    }
    return out;
}

}  // namespace fracdrift
