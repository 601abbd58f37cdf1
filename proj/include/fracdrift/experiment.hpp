#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracdrift/asymptotics.hpp"
#include "fracdrift/estimator.hpp"

namespace fracdrift {

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
    bool degenerate = false;
};

/// One-sample Kolmogorov-Smirnov against N(0, sigma2), asymptotic p-value.
/// Requires at least 8 observations; a zero-variance sample is flagged.
KsResult ks_normality(const std::vector<double>& sample, double sigma2);

/// Two-sample KS with effective size n1 n2 / (n1 + n2).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Kolmogorov distribution: P(K > lambda).
double kolmogorov_tail(double lambda);

struct StudyConfig {
    BuiltinModelKind model_kind = BuiltinModelKind::constant;
    ParameterBox box;  // carries theta0
    HurstIndex H;
    std::vector<double> epsilons;  // one or more values in (0,1]
    double T = 1.0;
    std::size_t n = 1024;
    std::size_t M = 2;
    RngSeed master_seed;
    double x0 = 1.0;
    OptimizerOptions optimizer;
    bool run_contrast = false;
    std::vector<double> contrast_theta;  // probe for the contrast diagnostic
    bool run_hessian_check = false;
    double hessian_step = 1e-3;
    int threads = 0;  // 0: FRACDRIFT_THREADS env or hardware concurrency

    StudyConfig(ParameterBox b, HurstIndex h) : box(std::move(b)), H(h) {}

    void validate() const;
};

struct ReplicateRecord {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    EstimationResult estimate;
    bool failed = false;
    std::string error;
};

struct MomentComparison {
    std::string name;
    double empirical = 0.0;
    double theoretical = 0.0;
};

struct CoordinateSummary {
    double mean = 0.0;
    double variance = 0.0;
    double mean_stderr = 0.0;
    std::optional<KsResult> ks;  // absent when fewer than 8 usable replicates
    std::vector<MomentComparison> moments;
    std::vector<double> tail_freq;      // P(|u| > r sd) at r = 1, 2, 3
    std::vector<double> tail_expected;
};

struct EpsilonBlock {
    double epsilon = 0.0;
    std::vector<ReplicateRecord> replicates;
    std::vector<double> mean_u;
    std::vector<double> cov_u;  // row-major d x d
    std::vector<CoordinateSummary> coordinates;
    double frobenius_rel_distance = 0.0;  // |cov - Gamma^{-1}|_F / |Gamma^{-1}|_F
    std::size_t boundary_hits = 0;
    std::size_t failures = 0;
    bool unreliable = false;
    std::optional<double> contrast_mean_neg_y;  // mean of -Y_{H,eps}(theta_probe)
    std::optional<double> contrast_stderr;
};

struct HessianCheckResult {
    std::vector<double> avg_neg_eps2_hessian;  // row-major d x d
    std::vector<double> max_rel_error_entrywise;
    std::size_t replicates = 0;
};

struct StudyReport {
    FisherMatrix fisher;
    std::vector<double> gamma_inv_diag;
    std::vector<EpsilonBlock> blocks;
    std::optional<double> contrast_y_limit;
    std::optional<HessianCheckResult> hessian_check;
    std::uint64_t master_seed = 0;
};

/// Simulates replicate r of the study at its first epsilon: fBm + Euler path
/// at theta0, context, MLE. Deterministic per (config, r).
EstimationResult run_replicate(const StudyConfig& cfg, std::size_t r);

/// Full study: all epsilons, all replicates (concurrently; aggregation is a
/// deterministic fold in replicate order), Fisher comparisons, diagnostics.
StudyReport run_study(const StudyConfig& cfg);

/// Var(Z_t) against t at t = T/4, T/2, T with b = 0 (the transform of pure
/// fBm must be a standard Wiener process).
struct VolterraCheckResult {
    std::vector<double> times;
    std::vector<double> variance;
    std::size_t replicates = 0;
};

VolterraCheckResult volterra_variance_check(HurstIndex H, const TimeGrid& grid, std::size_t replicates,
                                            RngSeed seed, int threads = 0);

int resolve_thread_count(int requested);

}  // namespace fracdrift
