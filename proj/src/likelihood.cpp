#include "fracdrift/likelihood.hpp"

#include <cmath>
#include <utility>

#include "fracdrift/errors.hpp"

namespace fracdrift {

namespace {

// int_lo^hi rho(s) g(s) ds with rho(s) = dist(s)^{edge_exp}, dist measured
// from the singular end (lo if toward_lo). Subcells are dyadically graded
// toward that end; g is taken at subcell midpoints, rho integrated exactly.
template <class G>
double graded_edge_integral(double lo, double hi, int pieces, bool toward_lo, double edge_exp, const G& g) {
    const double len = hi - lo;
    const double mom = edge_exp + 1.0;
    double acc = 0.0;
    double d_far = len;  // distance of the current subcell's far boundary
    for (int q = 0; q < pieces; ++q) {
        const double d_near = (q + 1 == pieces) ? 0.0 : d_far * 0.5;
        const double mass = (std::pow(d_far, mom) - std::pow(d_near, mom)) / mom;
        const double mid_dist = 0.5 * (d_near + d_far);
        const double s = toward_lo ? lo + mid_dist : hi - mid_dist;
        acc += mass * g(s);
        d_far = d_near;
    }
    return acc;
}

}  // namespace

KernelCache::KernelCache(const TimeGrid& grid, HurstIndex H) : grid_(grid), H_(H), dh_(dh_const(H)) {
    if (H.value == 0.5) throw ValidationError("KernelCache: H = 1/2 is excluded from estimation");
    const std::size_t n = grid.steps();
    const double h = H.value;

    if (h < 0.5) {
        abel_.emplace(build_abel_weights(grid, FracOrder(0.5 - h)));
    } else {
        diff_.emplace(grid, 0.5 - h, -h - 0.5);
        c2_ = c2_const(H);
        c3_ = c3_const(H);
    }

    z_w_.assign(n * (n + 1) / 2, 0.0);
    const double dt = grid.dt();

    // Edge cells: the kernel behaves like s^{1/2-H} at s = 0 and like
    // (t-s)^{1/2-H} at s = t. The one-sided refinement evaluates the smooth
    // cofactor at points on subcells graded toward the singular end and
    // integrates the power factor exactly, so the cell average keeps the
    // full singular mass. Interior cells use the plain midpoint value.
    const double edge_exp = 0.5 - H.value;
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = grid.node(i);
        const std::size_t base = (i - 1) * i / 2;
        for (std::size_t j = 0; j < i; ++j) {
            const double s0 = static_cast<double>(j) * dt;
            const double s1 = s0 + dt;
            const bool left_edge = (j == 0);
            const bool right_edge = (j + 1 == i);
            if (!left_edge && !right_edge) {
                z_w_[base + j] = kernel(t, s0 + 0.5 * dt);
                continue;
            }
            const auto g_left = [&](double s) { return kernel(t, s) / std::pow(s, edge_exp); };
            const auto g_right = [&](double s) { return kernel(t, s) / std::pow(t - s, edge_exp); };
            double integral = 0.0;
            if (left_edge && right_edge) {
                // the single cell of row 1: both ends singular, two graded
                // evaluations against each edge factor
                const double mid = 0.5 * (s0 + s1);
                integral = graded_edge_integral(s0, mid, 2, true, edge_exp, g_left) +
                           graded_edge_integral(mid, s1, 2, false, edge_exp, g_right);
            } else if (left_edge) {
                integral = graded_edge_integral(s0, s1, 4, true, edge_exp, g_left);
            } else {
                integral = graded_edge_integral(s0, s1, 4, false, edge_exp, g_right);
            }
            z_w_[base + j] = integral / dt;
        }
    }
}

double KernelCache::kernel(double t, double s) const {
    const double h = H_.value;
    const double sp = std::pow(s, 0.5 - h);
    if (h < 0.5) return sp / dh_ * frac_integral_right_power(0.5 - h, t, s);
    return sp / dh_ * weyl_right_power(h - 0.5, t, s);
}

std::shared_ptr<const KernelCache> build_kernel_cache(const TimeGrid& grid, HurstIndex H) {
    return std::make_shared<const KernelCache>(grid, H);
}

SampledPath compute_z(const SampledPath& observed, const SdeConfig& cfg, const KernelCache& cache) {
    if (!observed.grid.same_as(cfg.grid)) throw ValidationError("compute_z: observed path grid mismatch");
    if (!cache.grid().same_as(cfg.grid)) throw ValidationError("compute_z: kernel cache grid mismatch");
    if (!(cfg.epsilon > 0.0)) throw ValidationError("compute_z: epsilon must be positive");
    const std::size_t n = cfg.grid.steps();
    const double inv_eps = 1.0 / cfg.epsilon;
    std::vector<double> z(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < i; ++j)
            acc += cache.z_weight(i, j) * (observed.values[j + 1] - observed.values[j]);
        z[i] = inv_eps * acc;
    }
    return SampledPath(cfg.grid, std::move(z));
}

SampledPath compute_z(const SampledPath& observed, const SdeConfig& cfg) {
    const KernelCache cache(cfg.grid, cfg.H);
    return compute_z(observed, cfg, cache);
}

LikelihoodContext make_context(SampledPath observed, const SdeConfig& cfg, DriftModel model,
                               std::shared_ptr<const KernelCache> cache) {
    if (cfg.H.value == 0.5) throw ValidationError("LikelihoodContext: H = 1/2 is excluded");
    if (!(cfg.epsilon > 0.0)) throw ValidationError("LikelihoodContext: epsilon must be positive");
    if (!cache) cache = build_kernel_cache(cfg.grid, cfg.H);
    SampledPath z = compute_z(observed, cfg, *cache);
    return LikelihoodContext{std::move(observed), cfg, std::move(model), std::move(cache), std::move(z)};
}

SampledPath compute_q_from_samples(const LikelihoodContext& ctx, const std::vector<double>& drift_samples) {
    const TimeGrid& grid = ctx.cfg.grid;
    const std::size_t n = grid.steps();
    if (drift_samples.size() != n + 1) throw ValidationError("compute_q_from_samples: size mismatch");
    const double h = ctx.cfg.H.value;
    const double inv_eps = 1.0 / ctx.cfg.epsilon;
    const KernelCache& cache = *ctx.kernel_cache;
    std::vector<double> q(n + 1, 0.0);

    if (h < 0.5) {
        // Q(t) = (eps d_H Gamma(1/2-H))^{-1} t^{H-1/2} int_0^t s^{1/2-H} (t-s)^{-1/2-H} b ds
        std::vector<double> f(n + 1, 0.0);
        for (std::size_t j = 1; j <= n; ++j) f[j] = std::pow(grid.node(j), 0.5 - h) * drift_samples[j];
        const auto raw = apply_abel_left(cache.abel(), f);
        const double c = inv_eps / (cache.dh() * std::tgamma(0.5 - h));
        for (std::size_t i = 1; i <= n; ++i) q[i] = c * std::pow(grid.node(i), h - 0.5) * raw[i];
    } else {
        // Q(t) = eps^{-1} [ c2 t^{1/2-H} b(X_t) + c3 t^{H-1/2} int_0^t (b(X_t)-b(X_s)) (t-s)^{-H-1/2} s^{1/2-H} ds ]
        const auto diff = cache.diff().apply(drift_samples);
        for (std::size_t i = 1; i <= n; ++i) {
            const double t = grid.node(i);
            q[i] = inv_eps * (cache.c2() * std::pow(t, 0.5 - h) * drift_samples[i] +
                              cache.c3() * std::pow(t, h - 0.5) * diff[i]);
        }
    }
    for (std::size_t i = 1; i <= n; ++i)
        if (!std::isfinite(q[i])) throw NumericalError("compute_q: non-finite Q at node " + std::to_string(i));
    return SampledPath(grid, std::move(q));
}

SampledPath compute_q(const LikelihoodContext& ctx, const std::vector<double>& theta) {
    if (theta.size() != ctx.model.dim) throw ValidationError("compute_q: theta dimension mismatch");
    const std::size_t n = ctx.cfg.grid.steps();
    std::vector<double> bvals(n + 1);
    for (std::size_t j = 0; j <= n; ++j) bvals[j] = ctx.model.b(ctx.observed.values[j], theta);
    return compute_q_from_samples(ctx, bvals);
}

namespace {

// Node 0 is excluded from both sums: the Q prefactor is singular there.
double ito_sum(const SampledPath& q, const SampledPath& z) {
    const std::size_t n = q.grid.steps();
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i) acc += q.values[i] * (z.values[i + 1] - z.values[i]);
    return acc;
}

double time_sum(const SampledPath& a, const SampledPath& b) {
    const std::size_t n = a.grid.steps();
    const double dt = a.grid.dt();
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i) acc += a.values[i] * b.values[i];
    return acc * dt;
}

}  // namespace

double log_likelihood(const LikelihoodContext& ctx, const std::vector<double>& theta) {
    const SampledPath q = compute_q(ctx, theta);
    return ito_sum(q, ctx.z_path) - 0.5 * time_sum(q, q);
}

std::vector<double> grad_log_likelihood(const LikelihoodContext& ctx, const std::vector<double>& theta) {
    if (theta.size() != ctx.model.dim) throw ValidationError("grad_log_likelihood: theta dimension mismatch");
    const std::size_t n = ctx.cfg.grid.steps();
    const std::size_t d = ctx.model.dim;

    const SampledPath q = compute_q(ctx, theta);
    std::vector<std::vector<double>> grads(d, std::vector<double>(n + 1));
    for (std::size_t j = 0; j <= n; ++j) {
        const auto g = ctx.model.grad_theta_b(ctx.observed.values[j], theta);
        for (std::size_t k = 0; k < d; ++k) grads[k][j] = g[k];
    }
    std::vector<double> out(d);
    for (std::size_t k = 0; k < d; ++k) {
        const SampledPath qk = compute_q_from_samples(ctx, grads[k]);
        out[k] = ito_sum(qk, ctx.z_path) - time_sum(q, qk);
    }
    return out;
}

}  // namespace fracdrift
