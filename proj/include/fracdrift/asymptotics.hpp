#pragma once
#include <vector>

#include "fracdrift/likelihood.hpp"
#include "fracdrift/model.hpp"

namespace fracdrift {

/// c1 is valid for H < 1/2; c2, c3 for H > 1/2. The inactive branch is NaN.
struct AsymptoticConstants {
    double c1;
    double c2;
    double c3;
};

AsymptoticConstants constants(HurstIndex H);

/// Limiting Fisher information with its Cholesky factor, inverse, and
/// eigenvalues (all row-major dense, d is small).
struct FisherMatrix {
    std::size_t dim = 0;
    std::vector<double> gamma;
    std::vector<double> chol;
    std::vector<double> inv;
    std::vector<double> eigenvalues;  // ascending

    double entry(std::size_t i, std::size_t j) const { return gamma[i * dim + j]; }
    double inv_entry(std::size_t i, std::size_t j) const { return inv[i * dim + j]; }
};

/// Gamma_H(theta0) along the limit path, by product integration of the inner
/// Abel/difference integrals and trapezoid (excluding t_0) outside.
/// Factorization failure (not positive definite) surfaces as ValidationError.
FisherMatrix gamma_matrix(const DriftModel& model, const std::vector<double>& theta0, const SdeConfig& cfg);

/// Deterministic contrast limit of -eps^2 (L(theta) - L(theta0)):
/// one half of the squared kernel functional of b(x, theta) - b(x, theta0).
double y_limit(const DriftModel& model, const std::vector<double>& theta, const std::vector<double>& theta0,
               const SdeConfig& cfg);

/// Empirical contrast eps^2 (L(theta) - L(theta0)); -E[y_empirical] converges
/// to y_limit as eps -> 0.
double y_empirical(const LikelihoodContext& ctx, const std::vector<double>& theta,
                   const std::vector<double>& theta0);

/// Separation diagnostic: fit Y_H(theta) >= xi |theta - theta0|^rho over a
/// box grid. Failure is a warning, not an error.
struct SeparationFit {
    double xi = 0.0;
    double rho = 0.0;
    bool ok = false;
};

SeparationFit assumption4_diagnostic(const DriftModel& model, const ParameterBox& box,
                                     const std::vector<double>& theta0, const SdeConfig& cfg,
                                     std::size_t points_per_axis = 7);

// Small dense symmetric helpers shared with the study harness.
std::vector<double> cholesky_lower(const std::vector<double>& sym, std::size_t d);  // throws ValidationError
std::vector<double> symmetric_inverse(const std::vector<double>& sym, std::size_t d);
std::vector<double> symmetric_eigenvalues(const std::vector<double>& sym, std::size_t d);

}  // namespace fracdrift
