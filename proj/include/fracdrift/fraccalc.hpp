#pragma once
#include <cstddef>
#include <vector>

#include "fracdrift/grid.hpp"

namespace fracdrift {

/// Fractional order restricted to (0, 1), the only range the estimation
/// pipeline needs.
struct FracOrder {
    double alpha;
    explicit FracOrder(double a);
};

/*
 * Product-integration weights for the weakly singular convolution kernels
 *
 *     (t - y)^{alpha-1}        (Riemann-Liouville integral, alpha in (0,1))
 *     (t - y)^{-alpha-1}       (Marchaud/Weyl difference integral)
 *
 * against piecewise-linear data on a uniform grid. The kernel moments over
 * each cell are elementary, so a cell [t_j, t_{j+1}] at lag l = i - j
 * contributes with lag-only weights:
 *
 *     WL(l) = (1/dt) int_{a}^{b} (u - a) u^{alpha-1} du,   a = (l-1) dt, b = l dt
 *     WR(l) = (1/dt) int_{a}^{b} (b - u) u^{alpha-1} du
 *
 * and analogously with exponent -alpha-1 for the Marchaud weights, where the
 * divergent moment of the cell touching the singularity is never used (its
 * coefficient f(t_i) - f(t_i) vanishes identically).
 */
struct AbelWeights {
    double alpha = 0;
    double dt = 0;
    std::vector<double> wl, wr;  // index by lag, wl[0]/wr[0] unused
};

struct MarchaudWeights {
    double alpha = 0;
    double dt = 0;
    std::vector<double> cl, cr;  // cr[1] is the never-used divergent moment, stored as 0
};

AbelWeights build_abel_weights(const TimeGrid& grid, FracOrder order);
MarchaudWeights build_marchaud_weights(const TimeGrid& grid, FracOrder order);

/// Raw convolution sum_j int_cell (t_i - y)^{alpha-1} f_PL(y) dy for all nodes
/// (no 1/Gamma(alpha) factor); result[0] = 0.
std::vector<double> apply_abel_left(const AbelWeights& w, const std::vector<double>& f);
/// Mirror image over [t_i, T]; result[n] = 0.
std::vector<double> apply_abel_right(const AbelWeights& w, const std::vector<double>& f);

/// I_{0+}^alpha f on the grid of f (product integration, value 0 at t=0).
SampledPath rl_integral_left(const SampledPath& f, FracOrder order);
/// I_{b-}^alpha f; b must equal the grid horizon. Value 0 at t=b.
SampledPath rl_integral_right(const SampledPath& f, FracOrder order, double b);

/// Marchaud-form Weyl derivative D_{0+}^alpha f (value 0 at t=0 by convention).
SampledPath weyl_left(const SampledPath& f, FracOrder order);
/// D_{b-}^alpha f; b must equal the grid horizon (value 0 at t=b).
SampledPath weyl_right(const SampledPath& f, FracOrder order, double b);

/*
 * Exact power-function evaluations used by the Volterra kernel. Both reduce
 * by scaling to the one-dimensional profile
 *
 *     Phi_c(u) = int_u^1 w^{-1} (1 - w)^{-c} dw,         c in (0,1), u in (0,1],
 *
 * via
 *
 *     I_{t-}^{alpha}[y -> y^{-alpha}](s) = Phi_{1-alpha}(s/t) / Gamma(alpha)
 *     D_{t-}^{alpha}[y -> y^{ alpha}](s) = [ (1-s/t)^{-alpha} - alpha Phi_alpha(s/t) ] / Gamma(1-alpha).
 *
 * Phi is evaluated by two convergent series (around u=1, and log + binomial
 * series below u = 1/2); accuracy ~1e-15 over the whole range.
 */
double phi_profile(double c, double u);
double frac_integral_right_power(double alpha, double t, double s);
double weyl_right_power(double alpha, double t, double s);

/*
 * Product integration for the doubly singular difference kernel
 *
 *     D(t_i) = int_0^{t_i} ( g(t_i) - g(s) ) s^p (t_i - s)^q ds,
 *
 * with p in (-1, 0] and q in (-2, -1) (hypersingular, tamed by the
 * difference). g is taken piecewise linear; writing the cell contribution in
 * the differenced hat basis
 *
 *     (g_i - g_j) ML(i,j) + (g_i - g_{j+1}) MR(i,j)
 *
 * keeps every stored moment finite: MR(i, i-1) multiplies g_i - g_i = 0 and
 * is stored as 0. Interior cell moments use Gauss-Legendre; the cells
 * touching s = 0 and s = t_i use tanh-sinh. Tables depend only on
 * (grid, p, q) and are reused across many g.
 */
class DualPowerDifferenceWeights {
  public:
    DualPowerDifferenceWeights(const TimeGrid& grid, double p, double q);

    std::vector<double> apply(const std::vector<double>& g) const;

    std::size_t steps() const { return n_; }
    double ml(std::size_t i, std::size_t j) const { return ml_[offset(i) + j]; }
    double mr(std::size_t i, std::size_t j) const { return mr_[offset(i) + j]; }

  private:
    static std::size_t offset(std::size_t i) { return (i - 1) * i / 2; }
    std::size_t n_;
    double p_, q_, dt_;
    std::vector<double> ml_, mr_;
};

}  // namespace fracdrift
