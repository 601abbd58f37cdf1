#pragma once
#include <memory>
#include <optional>
#include <vector>

#include "fracdrift/constants.hpp"
#include "fracdrift/fraccalc.hpp"
#include "fracdrift/model.hpp"

namespace fracdrift {

/*
 * Precomputed quadrature state for one (grid, H): the inverse Volterra kernel
 * weights that turn an observed path into the semimartingale Z, and the
 * product-integration weights behind Q. Immutable once built; shared across
 * replicates and threads.
 *
 * Z weights: w_{i,j} is the cell average of k_H^{-1}(t_i, s) over
 * [t_j, t_{j+1}], taken as the midpoint kernel value, with a 4-point
 * one-sided refinement on the cells touching s = 0 and s = t_i where the
 * kernel is singular or steep.
 */
class KernelCache {
  public:
    KernelCache(const TimeGrid& grid, HurstIndex H);

    const TimeGrid& grid() const { return grid_; }
    HurstIndex hurst() const { return H_; }
    double dh() const { return dh_; }
    double z_weight(std::size_t i, std::size_t j) const { return z_w_[(i - 1) * i / 2 + j]; }

    /// k_H^{-1}(t, s) pointwise (0 < s < t).
    double kernel(double t, double s) const;

    const AbelWeights& abel() const { return *abel_; }                          // H < 1/2
    const DualPowerDifferenceWeights& diff() const { return *diff_; }           // H > 1/2
    double c2() const { return c2_; }
    double c3() const { return c3_; }

  private:
    TimeGrid grid_;
    HurstIndex H_;
    double dh_;
    std::vector<double> z_w_;
    std::optional<AbelWeights> abel_;
    std::optional<DualPowerDifferenceWeights> diff_;
    double c2_ = 0.0, c3_ = 0.0;
};

std::shared_ptr<const KernelCache> build_kernel_cache(const TimeGrid& grid, HurstIndex H);

/// Z(t_i) = eps^{-1} sum_{j<i} w_{i,j} (X_{t_{j+1}} - X_{t_j}), Z(0) = 0.
SampledPath compute_z(const SampledPath& observed, const SdeConfig& cfg, const KernelCache& cache);
SampledPath compute_z(const SampledPath& observed, const SdeConfig& cfg);

/// Observed path + model + config with the transform Z and kernel weights
/// computed once. Immutable; likelihood evaluations at different theta may run
/// concurrently.
struct LikelihoodContext {
    SampledPath observed;
    SdeConfig cfg;
    DriftModel model;
    std::shared_ptr<const KernelCache> kernel_cache;
    SampledPath z_path;
};

LikelihoodContext make_context(SampledPath observed, const SdeConfig& cfg, DriftModel model,
                               std::shared_ptr<const KernelCache> cache = nullptr);

/// Q for an arbitrary scalar function sampled along the observed path
/// (Q is linear in the drift, so gradients reuse this with d(b)/d(theta_k)).
SampledPath compute_q_from_samples(const LikelihoodContext& ctx, const std::vector<double>& drift_samples);

SampledPath compute_q(const LikelihoodContext& ctx, const std::vector<double>& theta);

/// Ito left-point sums over nodes 1..n-1 (node 0 excluded: the Q prefactor is
/// singular there): sum Q_i (Z_{i+1}-Z_i) - 1/2 sum Q_i^2 dt.
double log_likelihood(const LikelihoodContext& ctx, const std::vector<double>& theta);

std::vector<double> grad_log_likelihood(const LikelihoodContext& ctx, const std::vector<double>& theta);

}  // namespace fracdrift
