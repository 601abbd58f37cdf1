#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fracdrift/errors.hpp"
#include "fracdrift/experiment.hpp"
#include "fracdrift/fbm.hpp"

using namespace fracdrift;

TEST_CASE("fbm covariance closed form") {
    CHECK(fbm_covariance(1.0, 2.0, HurstIndex(0.5)) == doctest::Approx(1.0));          // min(s,t) at H = 1/2
    CHECK(fbm_covariance(2.0, 2.0, HurstIndex(0.75)) == doctest::Approx(std::pow(2.0, 1.5)));
    CHECK(fbm_covariance(0.0, 5.0, HurstIndex(0.3)) == doctest::Approx(0.0));
    CHECK_THROWS_AS(fbm_covariance(-1.0, 1.0, HurstIndex(0.3)), ValidationError);
}

TEST_CASE("hurst index domain") {
    CHECK_THROWS_AS(HurstIndex(0.0), ValidationError);
    CHECK_THROWS_AS(HurstIndex(1.0), ValidationError);
    CHECK_NOTHROW(HurstIndex(0.5));
}

TEST_CASE("single-step sample is one gaussian of variance t^{2H}") {
    const TimeGrid g = make_grid(0.7, 1);
    const HurstIndex H(0.3);
    double m2 = 0.0;
    const int reps = 20000;
    for (int r = 0; r < reps; ++r) {
        const SampledPath p = simulate_fbm_cholesky(g, H, RngSeed{static_cast<std::uint64_t>(r)});
        REQUIRE(p.size() == 2);
        CHECK(p[0] == 0.0);
        m2 += p[1] * p[1];
    }
    m2 /= reps;
    const double expected = std::pow(0.7, 0.6);
    CHECK(std::abs(m2 - expected) < 4.0 * expected * std::sqrt(2.0 / reps));
}

TEST_CASE("fixed seed gives bit-identical paths") {
    const TimeGrid g = make_grid(1.0, 64);
    for (const double h : {0.3, 0.7}) {
        const SampledPath a = simulate_fbm_cholesky(g, HurstIndex(h), RngSeed{99});
        const SampledPath b = simulate_fbm_cholesky(g, HurstIndex(h), RngSeed{99});
        CHECK(a.values == b.values);
        const SampledPath c = simulate_fbm_circulant(g, HurstIndex(h), RngSeed{99});
        const SampledPath d = simulate_fbm_circulant(g, HurstIndex(h), RngSeed{99});
        CHECK(c.values == d.values);
    }
}

TEST_CASE("H = 1/2 increments are iid N(0, T/n) for both samplers") {
    const TimeGrid g = make_grid(1.0, 16);
    const int reps = 10000;
    for (const bool circulant : {false, true}) {
        double m2 = 0.0;
        std::size_t count = 0;
        for (int r = 0; r < reps; ++r) {
            const RngSeed seed{static_cast<std::uint64_t>(1000 + r)};
            const SampledPath p = circulant ? simulate_fbm_circulant(g, HurstIndex(0.5), seed)
                                            : simulate_fbm_cholesky(g, HurstIndex(0.5), seed);
            for (std::size_t i = 0; i < 16; ++i) {
                const double d = p[i + 1] - p[i];
                m2 += d * d;
                ++count;
            }
        }
        m2 /= count;
        const double expected = 1.0 / 16.0;
        CHECK(std::abs(m2 - expected) < 4.0 * expected * std::sqrt(2.0 / double(count)));
    }
}

TEST_CASE("sample covariance matches the fbm covariance on a subgrid") {
    // 3-sigma criterion on an 8-point subgrid, both H branches, smaller M than
    // the acceptance run to stay fast.
    const std::size_t n = 32;
    const TimeGrid g = make_grid(1.0, n);
    const int reps = 10000;
    for (const double h : {0.3, 0.7}) {
        const HurstIndex H(h);
        const FbmCholeskySampler sampler(g, H);
        std::vector<std::size_t> idx = {4, 8, 12, 16, 20, 24, 28, 32};
        std::vector<std::vector<double>> draws(reps);
        for (int r = 0; r < reps; ++r) {
            const SampledPath p = sampler.sample(RngSeed{static_cast<std::uint64_t>(5000 + r)});
            draws[r].resize(idx.size());
            for (std::size_t k = 0; k < idx.size(); ++k) draws[r][k] = p[idx[k]];
        }
        int violations = 0;
        for (std::size_t a = 0; a < idx.size(); ++a) {
            for (std::size_t b = a; b < idx.size(); ++b) {
                double acc = 0.0, acc2 = 0.0;
                for (int r = 0; r < reps; ++r) {
                    const double prod = draws[r][a] * draws[r][b];
                    acc += prod;
                    acc2 += prod * prod;
                }
                const double mean = acc / reps;
                const double se = std::sqrt((acc2 / reps - mean * mean) / reps);
                const double expected = fbm_covariance(g.node(idx[a]), g.node(idx[b]), H);
                if (std::abs(mean - expected) > 3.0 * se) ++violations;
            }
        }
        // 36 checked pairs; allow the rare 3-sigma event
        CHECK(violations <= 2);
    }
}

TEST_CASE("self-similarity: Var(B_T) is T^{2H}") {
    const TimeGrid g = make_grid(2.0, 64);
    const int reps = 8000;
    for (const double h : {0.3, 0.7}) {
        const FbmCirculantSampler sampler(g, HurstIndex(h));
        double m2 = 0.0;
        for (int r = 0; r < reps; ++r) {
            const SampledPath p = sampler.sample(RngSeed{static_cast<std::uint64_t>(r)});
            m2 += p[64] * p[64];
        }
        m2 /= reps;
        const double expected = std::pow(2.0, 2.0 * h);
        CHECK(std::abs(m2 - expected) < 3.5 * expected * std::sqrt(2.0 / reps));
    }
}

TEST_CASE("circulant and Cholesky sampler laws agree at B_T (two-sample KS)") {
    const TimeGrid g = make_grid(1.0, 64);
    const int reps = 5000;
    for (const double h : {0.3, 0.7}) {
        const FbmCholeskySampler chol(g, HurstIndex(h));
        const FbmCirculantSampler circ(g, HurstIndex(h));
        std::vector<double> a(reps), b(reps);
        for (int r = 0; r < reps; ++r) {
            a[r] = chol.sample(derive_seed(RngSeed{11}, r)).values[64];
            b[r] = circ.sample(derive_seed(RngSeed{22}, r)).values[64];
        }
        const KsResult ks = ks_two_sample(a, b);
        CHECK(ks.p_value > 0.01);
    }
}
