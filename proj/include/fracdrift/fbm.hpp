#pragma once
#include <complex>
#include <vector>

#include "fracdrift/grid.hpp"
#include "fracdrift/rng.hpp"

namespace fracdrift {

/// Hurst index in (0,1). H = 1/2 is plain Brownian motion: the samplers accept
/// it (useful as an oracle), estimation objects reject it at their own door.
struct HurstIndex {
    double value;
    explicit HurstIndex(double h);
    bool rough() const { return value < 0.5; }
};

/// Cov(B^H_s, B^H_t) = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2.
double fbm_covariance(double s, double t, HurstIndex H);

/// Exact sampler via Cholesky factorization of the stationary increment
/// covariance (reference path, O(n^3) setup per instance, O(n^2) per draw).
class FbmCholeskySampler {
  public:
    FbmCholeskySampler(TimeGrid grid, HurstIndex H);
    SampledPath sample(RngSeed seed) const;
    const TimeGrid& grid() const { return grid_; }

  private:
    TimeGrid grid_;
    HurstIndex H_;
    std::vector<double> chol_;  // lower triangular, row-major
};

/// Exact sampler via circulant embedding of the increment covariance
/// (O(n log n) per draw). Throws NumericalError with a Cholesky-fallback hint
/// if the embedding has an eigenvalue below -tolerance.
class FbmCirculantSampler {
  public:
    FbmCirculantSampler(TimeGrid grid, HurstIndex H);
    SampledPath sample(RngSeed seed) const;
    const TimeGrid& grid() const { return grid_; }

  private:
    TimeGrid grid_;
    HurstIndex H_;
    std::size_t m_;                    // embedding size (power of two >= 2n)
    std::vector<double> sqrt_eigen_;   // sqrt(lambda_k / m)
};

SampledPath simulate_fbm_cholesky(const TimeGrid& grid, HurstIndex H, RngSeed seed);
SampledPath simulate_fbm_circulant(const TimeGrid& grid, HurstIndex H, RngSeed seed);

/// In-place iterative radix-2 FFT (size must be a power of two).
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse);

}  // namespace fracdrift
