#include "fracdrift/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

#include "fracdrift/errors.hpp"
#include "fracdrift/fbm.hpp"

namespace fracdrift {

double kolmogorov_tail(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 1.18) {
        // theta-function form, accurate for small lambda
        const double pi = std::numbers::pi;
        const double y = std::exp(-pi * pi / (8.0 * lambda * lambda));
        const double cdf = std::sqrt(2.0 * pi) / lambda * (y + std::pow(y, 9) + std::pow(y, 25) + std::pow(y, 49));
        return 1.0 - cdf;
    }
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        s += term;
        if (std::abs(term) < 1e-16) break;
    }
    return std::max(0.0, std::min(1.0, s));
}

KsResult ks_normality(const std::vector<double>& sample, double sigma2) {
    if (sample.size() < 8) throw ValidationError("ks_normality: need at least 8 observations");
    if (!(sigma2 > 0.0)) throw ValidationError("ks_normality: sigma2 must be positive");
    std::vector<double> x = sample;
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    const double sd = std::sqrt(sigma2);

    double mean = 0.0, var = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    for (double v : x) var += (v - mean) * (v - mean);
    const bool degenerate = var == 0.0;

    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-x[i] / (sd * std::numbers::sqrt2));
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
    }
    return {d, degenerate ? 0.0 : kolmogorov_tail(std::sqrt(n) * d), degenerate};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.size() < 8 || b.size() < 8) throw ValidationError("ks_two_sample: need at least 8 observations each");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double xa = a[i], xb = b[j];
        if (xa <= xb) ++i;
        if (xb <= xa) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double neff = na * nb / (na + nb);
    return {d, kolmogorov_tail(std::sqrt(neff) * d), false};
}

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FRACDRIFT_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {

template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    threads = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (threads == 1) {
        for (std::size_t r = 0; r < count; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&fn, t, threads, count] {
            for (std::size_t r = static_cast<std::size_t>(t); r < count; r += static_cast<std::size_t>(threads))
                fn(r);
        });
    for (auto& th : pool) th.join();
}

double normal_tail2(double r) { return std::erfc(r / std::numbers::sqrt2); }  // P(|N(0,1)| > r)

}  // namespace

void StudyConfig::validate() const {
    if (M < 2) throw ValidationError("StudyConfig: replicate count M must be >= 2");
    if (epsilons.empty()) throw ValidationError("StudyConfig: at least one epsilon required");
    for (double e : epsilons)
        if (!(e > 0.0) || e > 1.0) throw ValidationError("StudyConfig: epsilon values must lie in (0,1]");
    if (H.value == 0.5) throw ValidationError("StudyConfig: H = 1/2 is excluded");
    if (box.true_theta.empty()) throw ValidationError("StudyConfig: theta0 required for simulation studies");
    if (n < 4) throw ValidationError("StudyConfig: grid too coarse");
    if (run_contrast && contrast_theta.size() != box.dim())
        throw ValidationError("StudyConfig: contrast probe dimension mismatch");
}

namespace {

struct ReplicateWork {
    ReplicateRecord record;
    double contrast_neg_y = 0.0;
    std::vector<double> neg_eps2_hessian;  // filled when the Hessian check runs (first epsilon only)
};

// Central finite-difference Hessian of the discrete log-likelihood.
std::vector<double> fd_hessian(const LikelihoodContext& ctx, const std::vector<double>& theta0, double step) {
    const std::size_t d = theta0.size();
    std::vector<double> h(d);
    for (std::size_t k = 0; k < d; ++k) h[k] = step * std::max(1.0, std::abs(theta0[k]));
    const double l0 = log_likelihood(ctx, theta0);
    std::vector<double> hess(d * d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
        auto tp = theta0, tm = theta0;
        tp[k] += h[k];
        tm[k] -= h[k];
        hess[k * d + k] = (log_likelihood(ctx, tp) - 2.0 * l0 + log_likelihood(ctx, tm)) / (h[k] * h[k]);
        for (std::size_t l = k + 1; l < d; ++l) {
            auto tpp = theta0, tpm = theta0, tmp = theta0, tmm = theta0;
            tpp[k] += h[k]; tpp[l] += h[l];
            tpm[k] += h[k]; tpm[l] -= h[l];
            tmp[k] -= h[k]; tmp[l] += h[l];
            tmm[k] -= h[k]; tmm[l] -= h[l];
            const double v = (log_likelihood(ctx, tpp) - log_likelihood(ctx, tpm) - log_likelihood(ctx, tmp) +
                              log_likelihood(ctx, tmm)) /
                             (4.0 * h[k] * h[l]);
            hess[k * d + l] = v;
            hess[l * d + k] = v;
        }
    }
    return hess;
}

}  // namespace

EstimationResult run_replicate(const StudyConfig& cfg, std::size_t r) {
    cfg.validate();
    if (r >= cfg.M) throw ValidationError("run_replicate: replicate index out of range");
    try {
        const TimeGrid grid = make_grid(cfg.T, cfg.n);
        const DriftModel model = builtin_model(cfg.model_kind, cfg.box);
        const SdeConfig sde(cfg.x0, cfg.epsilons.front(), cfg.H, grid);
        const FbmCirculantSampler sampler(grid, cfg.H);
        const SampledPath noise = sampler.sample(derive_seed(cfg.master_seed, r));
        const SampledPath path = simulate_sde(model, cfg.box.true_theta, sde, noise);
        LikelihoodContext ctx = make_context(path, sde, model);
        return maximize_likelihood(ctx, cfg.box, cfg.optimizer);
    } catch (const ValidationError& e) {
        throw ValidationError("replicate " + std::to_string(r) + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError("replicate " + std::to_string(r) + ": " + e.what());
    }
}

StudyReport run_study(const StudyConfig& cfg) {
    cfg.validate();
    const TimeGrid grid = make_grid(cfg.T, cfg.n);
    const DriftModel model = builtin_model(cfg.model_kind, cfg.box);
    const std::size_t d = model.dim;
    const auto& theta0 = cfg.box.true_theta;

    StudyReport report;
    report.master_seed = cfg.master_seed.value;
    {
        const SdeConfig gamma_cfg(cfg.x0, cfg.epsilons.front(), cfg.H, grid);
        report.fisher = gamma_matrix(model, theta0, gamma_cfg);
    }
    report.gamma_inv_diag.resize(d);
    for (std::size_t k = 0; k < d; ++k) report.gamma_inv_diag[k] = report.fisher.inv_entry(k, k);

    if (cfg.run_contrast) {
        const SdeConfig ycfg(cfg.x0, cfg.epsilons.front(), cfg.H, grid);
        report.contrast_y_limit = y_limit(model, cfg.contrast_theta, theta0, ycfg);
    }

    const auto cache = build_kernel_cache(grid, cfg.H);
    const FbmCirculantSampler sampler(grid, cfg.H);
    const int threads = resolve_thread_count(cfg.threads);

    for (std::size_t e = 0; e < cfg.epsilons.size(); ++e) {
        const double eps = cfg.epsilons[e];
        const SdeConfig sde(cfg.x0, eps, cfg.H, grid);
        const bool do_hessian = cfg.run_hessian_check && e == 0;

        std::vector<ReplicateWork> work(cfg.M);
        parallel_for(cfg.M, threads, [&](std::size_t r) {
            ReplicateWork& w = work[r];
            w.record.index = r;
            const RngSeed seed_r = derive_seed(cfg.master_seed, r);
            w.record.seed = seed_r.value;
            try {
                const SampledPath noise = sampler.sample(seed_r);
                const SampledPath path = simulate_sde(model, theta0, sde, noise);
                LikelihoodContext ctx = make_context(path, sde, model, cache);
                w.record.estimate = maximize_likelihood(ctx, cfg.box, cfg.optimizer);
                if (cfg.run_contrast) w.contrast_neg_y = -y_empirical(ctx, cfg.contrast_theta, theta0);
                if (do_hessian) {
                    w.neg_eps2_hessian = fd_hessian(ctx, theta0, cfg.hessian_step);
                    for (auto& v : w.neg_eps2_hessian) v *= -eps * eps;
                }
            } catch (const std::exception& ex) {
                w.record.failed = true;
                w.record.error = ex.what();
            }
        });

        EpsilonBlock block;
        block.epsilon = eps;
        block.replicates.reserve(cfg.M);
        for (auto& w : work) block.replicates.push_back(std::move(w.record));

        // Deterministic fold in replicate order.
        std::vector<const std::vector<double>*> us;
        for (const auto& rec : block.replicates) {
            if (rec.failed) {
                ++block.failures;
                continue;
            }
            if (rec.estimate.hit_boundary) ++block.boundary_hits;
            us.push_back(&rec.estimate.normalized_error);
        }
        const std::size_t m = us.size();
        block.mean_u.assign(d, 0.0);
        block.cov_u.assign(d * d, 0.0);
        if (m >= 2) {
            for (const auto* u : us)
                for (std::size_t k = 0; k < d; ++k) block.mean_u[k] += (*u)[k];
            for (std::size_t k = 0; k < d; ++k) block.mean_u[k] /= static_cast<double>(m);
            for (const auto* u : us)
                for (std::size_t k = 0; k < d; ++k)
                    for (std::size_t l = 0; l < d; ++l)
                        block.cov_u[k * d + l] += ((*u)[k] - block.mean_u[k]) * ((*u)[l] - block.mean_u[l]);
            for (auto& v : block.cov_u) v /= static_cast<double>(m - 1);
        }

        double fro_num = 0.0, fro_den = 0.0;
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t l = 0; l < d; ++l) {
                const double diff = block.cov_u[k * d + l] - report.fisher.inv_entry(k, l);
                fro_num += diff * diff;
                fro_den += report.fisher.inv_entry(k, l) * report.fisher.inv_entry(k, l);
            }
        block.frobenius_rel_distance = std::sqrt(fro_num / fro_den);

        block.coordinates.resize(d);
        for (std::size_t k = 0; k < d; ++k) {
            CoordinateSummary& cs = block.coordinates[k];
            cs.mean = block.mean_u[k];
            cs.variance = block.cov_u[k * d + k];
            cs.mean_stderr = m >= 2 ? std::sqrt(cs.variance / static_cast<double>(m)) : 0.0;
            const double sigma2 = report.gamma_inv_diag[k];
            std::vector<double> uk(m);
            for (std::size_t r = 0; r < m; ++r) uk[r] = (*us[r])[k];
            if (m >= 8) cs.ks = ks_normality(uk, sigma2);

            double m1 = 0.0, m2 = 0.0, m4 = 0.0, a3 = 0.0;
            for (double u : uk) {
                m1 += u;
                m2 += u * u;
                m4 += u * u * u * u;
                a3 += std::abs(u * u * u);
            }
            const double dm = std::max<double>(1, m);
            const double sd = std::sqrt(sigma2);
            cs.moments = {
                {"x", m1 / dm, 0.0},
                {"x^2", m2 / dm, sigma2},
                {"x^4", m4 / dm, 3.0 * sigma2 * sigma2},
                {"|x|^3", a3 / dm, 2.0 * std::sqrt(2.0 / std::numbers::pi) * sd * sd * sd},
            };
            cs.tail_freq.assign(3, 0.0);
            cs.tail_expected.assign(3, 0.0);
            for (int r3 = 1; r3 <= 3; ++r3) {
                std::size_t count = 0;
                for (double u : uk)
                    if (std::abs(u) > r3 * sd) ++count;
                cs.tail_freq[r3 - 1] = static_cast<double>(count) / dm;
                cs.tail_expected[r3 - 1] = normal_tail2(r3);
            }
        }

        if (cfg.run_contrast) {
            double mean = 0.0, var = 0.0;
            std::size_t cnt = 0;
            for (std::size_t r = 0; r < cfg.M; ++r)
                if (!block.replicates[r].failed) {
                    mean += work[r].contrast_neg_y;
                    ++cnt;
                }
            if (cnt > 0) mean /= static_cast<double>(cnt);
            for (std::size_t r = 0; r < cfg.M; ++r)
                if (!block.replicates[r].failed) var += (work[r].contrast_neg_y - mean) * (work[r].contrast_neg_y - mean);
            if (cnt >= 2) var /= static_cast<double>(cnt - 1);
            block.contrast_mean_neg_y = mean;
            block.contrast_stderr = cnt >= 2 ? std::sqrt(var / static_cast<double>(cnt)) : 0.0;
        }

        if (do_hessian) {
            HessianCheckResult hc;
            hc.avg_neg_eps2_hessian.assign(d * d, 0.0);
            std::size_t cnt = 0;
            for (std::size_t r = 0; r < cfg.M; ++r) {
                if (block.replicates[r].failed || work[r].neg_eps2_hessian.empty()) continue;
                for (std::size_t ix = 0; ix < d * d; ++ix) hc.avg_neg_eps2_hessian[ix] += work[r].neg_eps2_hessian[ix];
                ++cnt;
            }
            if (cnt > 0)
                for (auto& v : hc.avg_neg_eps2_hessian) v /= static_cast<double>(cnt);
            hc.replicates = cnt;
            hc.max_rel_error_entrywise.assign(d * d, 0.0);
            for (std::size_t ix = 0; ix < d * d; ++ix) {
                const double g = report.fisher.gamma[ix];
                const double scale = std::abs(g) > 1e-12 ? std::abs(g) : 1.0;
                hc.max_rel_error_entrywise[ix] = std::abs(hc.avg_neg_eps2_hessian[ix] - g) / scale;
            }
            report.hessian_check = std::move(hc);
        }

        block.unreliable =
            static_cast<double>(block.failures + block.boundary_hits) > 0.05 * static_cast<double>(cfg.M);
        report.blocks.push_back(std::move(block));
    }
    return report;
}

VolterraCheckResult volterra_variance_check(HurstIndex H, const TimeGrid& grid, std::size_t replicates,
                                            RngSeed seed, int threads) {
    if (replicates < 2) throw ValidationError("volterra_variance_check: need at least 2 replicates");
    const std::size_t n = grid.steps();
    if (n % 4 != 0) throw ValidationError("volterra_variance_check: n must be divisible by 4");
    const auto cache = build_kernel_cache(grid, H);
    const FbmCirculantSampler sampler(grid, H);
    const std::array<std::size_t, 3> idx = {n / 4, n / 2, n};

    std::vector<std::array<double, 3>> z(replicates);
    std::vector<std::string> errors(replicates);
    parallel_for(replicates, resolve_thread_count(threads), [&](std::size_t r) {
        try {
            const SampledPath noise = sampler.sample(derive_seed(seed, r));
            for (std::size_t q = 0; q < 3; ++q) {
                const std::size_t i = idx[q];
                double acc = 0.0;
                for (std::size_t j = 0; j < i; ++j)
                    acc += cache->z_weight(i, j) * (noise.values[j + 1] - noise.values[j]);
                z[r][q] = acc;
            }
        } catch (const std::exception& ex) {
            errors[r] = ex.what();
        }
    });
    for (const auto& e : errors)
        if (!e.empty()) throw NumericalError("volterra_variance_check: " + e);

    VolterraCheckResult res;
    res.replicates = replicates;
    for (std::size_t q = 0; q < 3; ++q) {
        res.times.push_back(grid.node(idx[q]));
        double mean = 0.0;
        for (const auto& row : z) mean += row[q];
        mean /= static_cast<double>(replicates);
        double var = 0.0;
        for (const auto& row : z) var += (row[q] - mean) * (row[q] - mean);
        var /= static_cast<double>(replicates - 1);
        res.variance.push_back(var);
    }
    return res;
}

}  // namespace fracdrift
