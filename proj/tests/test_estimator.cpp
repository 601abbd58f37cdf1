#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracdrift/estimator.hpp"
#include "fracdrift/experiment.hpp"
#include "fracdrift/rng.hpp"

using namespace fracdrift;

TEST_CASE("quadratic objective: optimizer finds the closed-form argmax") {
    // f(theta) = a.theta - 1/2 theta.B theta with known maximizer
    const ParameterBox box({-4.0, -4.0}, {4.0, 4.0}, {});
    const std::vector<double> a = {1.0, -0.6};
    const double b11 = 2.0, b12 = 0.4, b22 = 1.0;
    auto value = [&](const std::vector<double>& th) {
        return a[0] * th[0] + a[1] * th[1] -
               0.5 * (b11 * th[0] * th[0] + 2.0 * b12 * th[0] * th[1] + b22 * th[1] * th[1]);
    };
    auto grad = [&](const std::vector<double>& th) {
        return std::vector<double>{a[0] - b11 * th[0] - b12 * th[1], a[1] - b12 * th[0] - b22 * th[1]};
    };
    const EstimationResult res = maximize_objective(value, grad, box);
    // solve B theta = a
    const double det = b11 * b22 - b12 * b12;
    const double t0 = (a[0] * b22 - a[1] * b12) / det;
    const double t1 = (b11 * a[1] - b12 * a[0]) / det;
    CHECK(res.theta_hat[0] == doctest::Approx(t0).epsilon(1e-6));
    CHECK(res.theta_hat[1] == doctest::Approx(t1).epsilon(1e-6));
    CHECK(res.converged);
    CHECK(!res.hit_boundary);
    // interior optimum satisfies the relative gradient tolerance
    const auto g = grad(res.theta_hat);
    CHECK(std::sqrt(g[0] * g[0] + g[1] * g[1]) <= 1e-6 * (1.0 + std::abs(res.loglik_at_hat)));
}

TEST_CASE("flat objective returns the box center by the tie-break rule") {
    const ParameterBox box({-1.0, 2.0}, {3.0, 6.0}, {});
    auto value = [](const std::vector<double>&) { return 0.0; };
    auto grad = [](const std::vector<double>& th) { return std::vector<double>(th.size(), 0.0); };
    const EstimationResult res = maximize_objective(value, grad, box);
    CHECK(res.theta_hat[0] == doctest::Approx(1.0));
    CHECK(res.theta_hat[1] == doctest::Approx(4.0));
}

TEST_CASE("maximizer clips to the box and flags the boundary") {
    const ParameterBox box({0.0}, {1.0}, {});
    auto value = [](const std::vector<double>& th) { return th[0]; };  // argmax at the right edge
    auto grad = [](const std::vector<double>&) { return std::vector<double>{1.0}; };
    const EstimationResult res = maximize_objective(value, grad, box);
    CHECK(res.theta_hat[0] == doctest::Approx(1.0));
    CHECK(res.hit_boundary);
}

TEST_CASE("estimator matches the discrete closed-form argmax, constant drift") {
    const TimeGrid g = make_grid(1.0, 256);
    for (const double h : {0.3, 0.7}) {
        const SdeConfig cfg(1.0, 0.05, HurstIndex(h), g);
        const ParameterBox box = default_box(BuiltinModelKind::constant);
        const DriftModel m = builtin_model(BuiltinModelKind::constant, box);
        const SampledPath noise = simulate_fbm_circulant(g, cfg.H, RngSeed{71});
        const SampledPath path = simulate_sde(m, {2.0}, cfg, noise);
        const LikelihoodContext ctx = make_context(path, cfg, m);
        // L(theta) = theta A - theta^2 B / 2: extract and compare
        const double l1 = log_likelihood(ctx, {1.0});
        const double lm1 = log_likelihood(ctx, {-1.0});
        const double a = 0.5 * (l1 - lm1);
        const double b = -(l1 + lm1);
        const double argmax = std::clamp(a / b, box.lower[0], box.upper[0]);
        const EstimationResult res = maximize_likelihood(ctx, box);
        INFO("H ", h);
        CHECK(res.theta_hat[0] == doctest::Approx(argmax).epsilon(1e-6));
        CHECK(res.normalized_error[0] ==
              doctest::Approx((res.theta_hat[0] - 2.0) / cfg.epsilon).epsilon(1e-10));
    }
}

TEST_CASE("noiseless limit recovers theta0") {
    // the residual |theta_hat - theta0| here is pure discretization bias,
    // first order in 1/n on this branch
    const TimeGrid g = make_grid(1.0, 2048);
    const SdeConfig cfg(1.0, 1e-6, HurstIndex(0.3), g);
    const ParameterBox box = default_box(BuiltinModelKind::linear);
    const DriftModel m = builtin_model(BuiltinModelKind::linear, box);
    const SampledPath noise = simulate_fbm_circulant(g, cfg.H, RngSeed{2});
    const SampledPath path = simulate_sde(m, {1.0}, cfg, noise);
    const LikelihoodContext ctx = make_context(path, cfg, m);
    const EstimationResult res = maximize_likelihood(ctx, box);
    CHECK(std::abs(res.theta_hat[0] - 1.0) <= 1e-3);
    CHECK(!res.hit_boundary);
}

TEST_CASE("identical inputs give identical results") {
    const TimeGrid g = make_grid(1.0, 128);
    const SdeConfig cfg(1.0, 0.1, HurstIndex(0.3), g);
    const ParameterBox box = default_box(BuiltinModelKind::sine);
    const DriftModel m = builtin_model(BuiltinModelKind::sine, box);
    const SampledPath noise = simulate_fbm_circulant(g, cfg.H, RngSeed{10});
    const SampledPath path = simulate_sde(m, {1.0, 0.5}, cfg, noise);
    const auto cache = build_kernel_cache(g, cfg.H);
    const LikelihoodContext c1 = make_context(path, cfg, m, cache);
    const LikelihoodContext c2 = make_context(path, cfg, m, cache);
    const EstimationResult r1 = maximize_likelihood(c1, box);
    const EstimationResult r2 = maximize_likelihood(c2, box);
    CHECK(r1.theta_hat == r2.theta_hat);
    CHECK(r1.loglik_at_hat == r2.loglik_at_hat);
    CHECK(r1.n_evals == r2.n_evals);
}

TEST_CASE("non-convergence is reported, never silent") {
    const ParameterBox box({-8.0}, {8.0}, {});
    // a needle the line search cannot climb within one iteration budget
    auto value = [](const std::vector<double>& th) { return -std::sqrt(std::abs(th[0] - 7.123) + 1e-12); };
    auto grad = [](const std::vector<double>& th) {
        const double s = th[0] > 7.123 ? 1.0 : -1.0;
        return std::vector<double>{-0.5 * s / std::sqrt(std::abs(th[0] - 7.123) + 1e-12)};
    };
    OptimizerOptions opts;
    opts.max_iterations = 3;
    const EstimationResult res = maximize_objective(value, grad, box, opts);
    CHECK(res.theta_hat.size() == 1);  // best-so-far is still returned
}
