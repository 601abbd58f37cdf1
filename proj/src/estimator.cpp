#include "fracdrift/estimator.hpp"

#include <cmath>

#include "fracdrift/errors.hpp"

namespace fracdrift {

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

struct StartOutcome {
    std::vector<double> theta;
    double value;
    bool converged;
};

}  // namespace

EstimationResult maximize_objective(const std::function<double(const std::vector<double>&)>& value,
                                    const std::function<std::vector<double>(const std::vector<double>&)>& gradient,
                                    const ParameterBox& box, const OptimizerOptions& opts) {
    const std::size_t d = box.dim();
    const auto center = box.center();

    std::vector<std::vector<double>> starts;
    starts.push_back(center);
    for (std::size_t k = 0; k < d; ++k) {
        for (const double sgn : {+1.0, -1.0}) {
            auto s = center;
            s[k] += sgn * 0.4 * box.halfwidth(k);
            starts.push_back(s);
        }
    }
    // Extra starts walk a fixed golden-ratio lattice inside the box.
    for (int e = 0; e < opts.extra_starts; ++e) {
        std::vector<double> s(d);
        for (std::size_t k = 0; k < d; ++k) {
            double frac = std::fmod(0.5 + (e + 1) * 0.6180339887498949 * (k + 1), 1.0);
            s[k] = box.lower[k] + frac * (box.upper[k] - box.lower[k]);
        }
        starts.push_back(box.project(std::move(s)));
    }

    long n_evals = 0;
    std::vector<StartOutcome> outcomes;
    outcomes.reserve(starts.size());

    double step_scale = 0.0;  // reference step from the box size
    for (std::size_t k = 0; k < d; ++k) step_scale = std::max(step_scale, box.halfwidth(k));

    for (const auto& start : starts) {
        std::vector<double> theta = box.project(start);
        double f = value(theta);
        ++n_evals;
        bool converged = false;
        std::vector<double> prev_theta, prev_grad;

        for (int it = 0; it < opts.max_iterations; ++it) {
            const auto g = gradient(theta);
            ++n_evals;
            // KKT projected gradient: drop components that push out of the box.
            std::vector<double> pgv(d);
            for (std::size_t k = 0; k < d; ++k) {
                const double w = box.upper[k] - box.lower[k];
                const bool at_lower = theta[k] <= box.lower[k] + 1e-14 * w;
                const bool at_upper = theta[k] >= box.upper[k] - 1e-14 * w;
                pgv[k] = ((at_lower && g[k] < 0.0) || (at_upper && g[k] > 0.0)) ? 0.0 : g[k];
            }
            const double pg = norm2(pgv);
            if (pg <= opts.grad_tol * (1.0 + std::abs(f))) {
                converged = true;
                break;
            }

            // Barzilai-Borwein trial step (near-Newton on quadratics), Armijo
            // backtracking keeps the retained sequence strictly ascending.
            double tau = step_scale / std::max(norm2(g), 1e-300);
            if (!prev_theta.empty()) {
                double ss = 0.0, sy = 0.0;
                for (std::size_t k = 0; k < d; ++k) {
                    const double s = theta[k] - prev_theta[k];
                    const double y = prev_grad[k] - g[k];
                    ss += s * s;
                    sy += s * y;
                }
                if (sy > 0.0 && ss > 0.0) tau = ss / sy;
            }
            prev_theta = theta;
            prev_grad = g;

            bool advanced = false;
            for (int bt = 0; bt < 60; ++bt) {
                std::vector<double> cand(d);
                for (std::size_t k = 0; k < d; ++k) cand[k] = theta[k] + tau * g[k];
                cand = box.project(std::move(cand));
                const double fc = value(cand);
                ++n_evals;
                double dir = 0.0;  // Armijo decrease along the projected move
                for (std::size_t k = 0; k < d; ++k) dir += g[k] * (cand[k] - theta[k]);
                if (fc >= f + 1e-4 * dir && fc > f) {
                    theta = std::move(cand);
                    f = fc;
                    advanced = true;
                    break;
                }
                tau *= 0.5;
                if (tau * norm2(g) < 1e-18 * (1.0 + norm2(theta))) break;
            }
            if (!advanced) {
                // No ascent step exists at machine resolution; stationary up to rounding.
                converged = true;
                break;
            }
        }
        outcomes.push_back({std::move(theta), f, converged});
    }

    // Winner: best value; ties by distance to center, then start order.
    std::size_t best = 0;
    for (std::size_t s = 1; s < outcomes.size(); ++s) {
        const double diff = outcomes[s].value - outcomes[best].value;
        if (diff > opts.tie_tol) {
            best = s;
        } else if (std::abs(diff) <= opts.tie_tol) {
            if (dist2(outcomes[s].theta, center) < dist2(outcomes[best].theta, center) - 1e-15) best = s;
        }
    }

    EstimationResult res;
    res.theta_hat = outcomes[best].theta;
    res.loglik_at_hat = outcomes[best].value;
    res.converged = outcomes[best].converged;
    res.n_evals = n_evals;
    res.hit_boundary = false;
    for (std::size_t k = 0; k < d; ++k) {
        const double w = box.upper[k] - box.lower[k];
        if (res.theta_hat[k] <= box.lower[k] + 1e-12 * w || res.theta_hat[k] >= box.upper[k] - 1e-12 * w)
            res.hit_boundary = true;
    }
    return res;
}

EstimationResult maximize_likelihood(const LikelihoodContext& ctx, const ParameterBox& box,
                                     const OptimizerOptions& opts) {
    if (box.dim() != ctx.model.dim) throw ValidationError("maximize_likelihood: box dimension mismatch");
    auto value = [&ctx](const std::vector<double>& th) { return log_likelihood(ctx, th); };
    auto grad = [&ctx](const std::vector<double>& th) { return grad_log_likelihood(ctx, th); };
    EstimationResult res = maximize_objective(value, grad, box, opts);
    if (!box.true_theta.empty() && ctx.cfg.epsilon > 0.0) {
        res.normalized_error.resize(box.dim());
        for (std::size_t k = 0; k < box.dim(); ++k)
            res.normalized_error[k] = (res.theta_hat[k] - box.true_theta[k]) / ctx.cfg.epsilon;
    }
    return res;
}

}  // namespace fracdrift
