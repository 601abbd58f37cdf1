#include "fracdrift/fbm.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "fracdrift/errors.hpp"

namespace fracdrift {

HurstIndex::HurstIndex(double h) : value(h) {
    if (!std::isfinite(h) || h <= 0.0 || h >= 1.0) throw ValidationError("HurstIndex: H must lie in (0,1)");
}

double fbm_covariance(double s, double t, HurstIndex H) {
    if (s < 0.0 || t < 0.0) throw ValidationError("fbm_covariance: times must be nonnegative");
    const double h2 = 2.0 * H.value;
    return 0.5 * (std::pow(t, h2) + std::pow(s, h2) - std::pow(std::abs(t - s), h2));
}

namespace {

// Autocovariance of the increment sequence (fractional Gaussian noise):
// gamma(k) = dt^{2H} (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2.
double fgn_autocov(std::size_t k, double dt, double H) {
    const double h2 = 2.0 * H;
    const double dk = static_cast<double>(k);
    if (k == 0) return std::pow(dt, h2);
    return 0.5 * std::pow(dt, h2) *
           (std::pow(dk + 1.0, h2) - 2.0 * std::pow(dk, h2) + std::pow(dk - 1.0, h2));
}

std::vector<double> increments_to_path(const TimeGrid& grid, const std::vector<double>& incr) {
    std::vector<double> path(grid.node_count());
    path[0] = 0.0;
    for (std::size_t i = 0; i < grid.steps(); ++i) path[i + 1] = path[i] + incr[i];
    return path;
}

}  // namespace

FbmCholeskySampler::FbmCholeskySampler(TimeGrid grid, HurstIndex H) : grid_(std::move(grid)), H_(H) {
    const std::size_t n = grid_.steps();
    std::vector<double> cov(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) cov[i * n + j] = fgn_autocov(i - j, grid_.dt(), H_.value);

    chol_.assign(n * n, 0.0);
    const double pivot_floor = 1e-13 * fgn_autocov(0, grid_.dt(), H_.value);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = cov[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= chol_[i * n + k] * chol_[j * n + k];
            if (i == j) {
                if (s <= pivot_floor)
                    throw NumericalError("fbm Cholesky factorization lost positive definiteness at row " +
                                         std::to_string(i));
                chol_[i * n + i] = std::sqrt(s);
            } else {
                chol_[i * n + j] = s / chol_[j * n + j];
            }
        }
    }
}

SampledPath FbmCholeskySampler::sample(RngSeed seed) const {
    const std::size_t n = grid_.steps();
    GaussianStream rng(seed);
    std::vector<double> z(n);
    for (auto& x : z) x = rng.gaussian();
    std::vector<double> incr(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k <= i; ++k) s += chol_[i * n + k] * z[k];
        incr[i] = s;
    }
    return SampledPath(grid_, increments_to_path(grid_, incr));
}

void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t m = a.size();
    if (m == 0 || (m & (m - 1)) != 0) throw ValidationError("fft_pow2: size must be a power of two");
    for (std::size_t i = 1, j = 0; i < m; ++i) {
        std::size_t bit = m >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= m; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < m; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(m);
}

FbmCirculantSampler::FbmCirculantSampler(TimeGrid grid, HurstIndex H) : grid_(std::move(grid)), H_(H) {
    const std::size_t n = grid_.steps();
    m_ = 1;
    while (m_ < 2 * n) m_ <<= 1;

    // First row of the circulant: gamma continued to lag m/2, mirrored.
    std::vector<std::complex<double>> c(m_);
    for (std::size_t k = 0; k <= m_ / 2; ++k) c[k] = fgn_autocov(k, grid_.dt(), H_.value);
    for (std::size_t k = m_ / 2 + 1; k < m_; ++k) c[k] = c[m_ - k];

    fft_pow2(c, false);
    double min_eig = 0.0, max_eig = 0.0;
    for (const auto& e : c) {
        min_eig = std::min(min_eig, e.real());
        max_eig = std::max(max_eig, e.real());
    }
    if (min_eig < -1e-10 * max_eig)
        throw NumericalError(
            "circulant embedding has a negative eigenvalue (min " + std::to_string(min_eig) +
            "); use the Cholesky sampler for this (H, n)");

    sqrt_eigen_.resize(m_);
    for (std::size_t k = 0; k < m_; ++k) sqrt_eigen_[k] = std::sqrt(std::max(0.0, c[k].real()));
}

SampledPath FbmCirculantSampler::sample(RngSeed seed) const {
    const std::size_t n = grid_.steps();
    GaussianStream rng(seed);

    // Hermitian-symmetric spectrum with E|Z_k|^2 = lambda_k; the transform
    // divided by sqrt(m) is a real Gaussian vector with the circulant covariance.
    std::vector<std::complex<double>> spec(m_);
    spec[0] = sqrt_eigen_[0] * rng.gaussian();
    spec[m_ / 2] = sqrt_eigen_[m_ / 2] * rng.gaussian();
    const double rhalf = std::sqrt(0.5);
    for (std::size_t k = 1; k < m_ / 2; ++k) {
        const double re = rng.gaussian();
        const double im = rng.gaussian();
        spec[k] = sqrt_eigen_[k] * rhalf * std::complex<double>(re, im);
        spec[m_ - k] = std::conj(spec[k]);
    }
    fft_pow2(spec, false);

    const double norm = 1.0 / std::sqrt(static_cast<double>(m_));
    std::vector<double> incr(n);
    for (std::size_t i = 0; i < n; ++i) incr[i] = spec[i].real() * norm;
    return SampledPath(grid_, increments_to_path(grid_, incr));
}

SampledPath simulate_fbm_cholesky(const TimeGrid& grid, HurstIndex H, RngSeed seed) {
    return FbmCholeskySampler(grid, H).sample(seed);
}

SampledPath simulate_fbm_circulant(const TimeGrid& grid, HurstIndex H, RngSeed seed) {
    return FbmCirculantSampler(grid, H).sample(seed);
}

}  // namespace fracdrift
