#pragma once
#include <functional>
#include <vector>

#include "fracdrift/likelihood.hpp"
#include "fracdrift/model.hpp"

namespace fracdrift {

struct OptimizerOptions {
    double grad_tol = 1e-8;   // relative: stop when ||pg|| <= grad_tol * (1 + |L|)
    int max_iterations = 500; // per start
    int extra_starts = 0;     // deterministic additions beyond the 2d+1 defaults
    double tie_tol = 1e-12;   // objective ties broken by distance to box center
};

struct EstimationResult {
    std::vector<double> theta_hat;
    double loglik_at_hat = 0.0;
    std::vector<double> normalized_error;  // eps^{-1}(theta_hat - theta0) when theta0 known, else empty
    bool converged = false;
    long n_evals = 0;
    bool hit_boundary = false;
};

/// Multi-start projected gradient ascent over the closed box: starts at the
/// center and center +- 0.4 halfwidth per axis, Armijo backtracking with a
/// growing trial step, gradient tolerance relative to 1 + |L|. Deterministic:
/// ties go to the start closest to the center, then the lowest start index.
EstimationResult maximize_likelihood(const LikelihoodContext& ctx, const ParameterBox& box,
                                     const OptimizerOptions& opts = {});

/// Same search on an arbitrary smooth objective (exposed for tests).
EstimationResult maximize_objective(const std::function<double(const std::vector<double>&)>& value,
                                    const std::function<std::vector<double>(const std::vector<double>&)>& gradient,
                                    const ParameterBox& box, const OptimizerOptions& opts = {});

}  // namespace fracdrift
