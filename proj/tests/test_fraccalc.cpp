#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fracdrift/errors.hpp"
#include "fracdrift/fraccalc.hpp"
#include "fracdrift/rng.hpp"
#include "oracles.hpp"

using namespace fracdrift;

namespace {

SampledPath sample_fn(const TimeGrid& g, double (*fn)(double)) {
    std::vector<double> v(g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) v[i] = fn(g.node(i));
    return SampledPath(g, std::move(v));
}

double max_rel_err_on_tail(const SampledPath& got, const std::function<double(double)>& expect, double from) {
    double worst = 0.0;
    for (std::size_t i = 0; i <= got.grid.steps(); ++i) {
        const double t = got.grid.node(i);
        if (t < from) continue;
        const double e = expect(t);
        worst = std::max(worst, std::abs(got[i] - e) / std::abs(e));
    }
    return worst;
}

}  // namespace

TEST_CASE("frac order domain") {
    CHECK_THROWS_AS(FracOrder(0.0), ValidationError);
    CHECK_THROWS_AS(FracOrder(1.0), ValidationError);
    CHECK_NOTHROW(FracOrder(0.5));
}

TEST_CASE("integral of a constant is exact product integration") {
    const TimeGrid g = make_grid(1.0, 256);
    const SampledPath one = sample_fn(g, [](double) { return 1.0; });
    const SampledPath out = rl_integral_left(one, FracOrder(0.5));
    // I^{1/2} 1 = x^{1/2} / Gamma(3/2); at x=1 this is 1/Gamma(3/2)
    const double expected = 1.0 / oracles::hp_gamma(1.5);
    CHECK(out[256] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(out[0] == 0.0);

    const SampledPath right = rl_integral_right(one, FracOrder(0.5), 1.0);
    CHECK(right[0] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(right[256] == 0.0);
}

TEST_CASE("zero input maps to zero") {
    const TimeGrid g = make_grid(1.0, 64);
    const SampledPath zero = sample_fn(g, [](double) { return 0.0; });
    for (const double v : rl_integral_left(zero, FracOrder(0.3)).values) CHECK(v == 0.0);
    for (const double v : weyl_left(zero, FracOrder(0.3)).values) CHECK(v == 0.0);
}

TEST_CASE("power rule for the left integral") {
    // I^alpha x^beta = Gamma(beta+1)/Gamma(beta+alpha+1) x^{beta+alpha}
    const TimeGrid g = make_grid(1.0, 1024);
    for (const double alpha : {0.2, 0.3, 0.45}) {
        for (const double beta : {0.0, 0.3, 0.8, 1.0}) {
            std::vector<double> v(g.node_count());
            for (std::size_t i = 0; i < g.node_count(); ++i) v[i] = std::pow(g.node(i), beta);
            const SampledPath out = rl_integral_left(SampledPath(g, v), FracOrder(alpha));
            const double coef = oracles::hp_gamma(beta + 1.0) / oracles::hp_gamma(beta + alpha + 1.0);
            const double err = max_rel_err_on_tail(
                out, [&](double t) { return coef * std::pow(t, beta + alpha); }, 1.0 / 8.0);
            INFO("alpha ", alpha, " beta ", beta, " err ", err);
            CHECK(err < 2e-3);
        }
    }
}

TEST_CASE("fractional integral of t^{0.3} at order 0.2") {
    const TimeGrid g = make_grid(1.0, 2048);
    std::vector<double> v(g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) v[i] = std::pow(g.node(i), 0.3);
    const SampledPath out = rl_integral_left(SampledPath(g, v), FracOrder(0.2));
    const double expected = oracles::hp_gamma(1.3) / oracles::hp_gamma(1.5);  // = 1.0126878...
    CHECK(out[2048] == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("power rule for the Weyl derivative") {
    // D^alpha x^beta = Gamma(beta+1)/Gamma(beta-alpha+1) x^{beta-alpha}
    const TimeGrid g = make_grid(1.0, 1024);
    for (const double alpha : {0.2, 0.3, 0.45}) {
        for (const double beta : {0.3, 0.8, 1.0}) {
            std::vector<double> v(g.node_count());
            for (std::size_t i = 0; i < g.node_count(); ++i) v[i] = std::pow(g.node(i), beta);
            const SampledPath out = weyl_left(SampledPath(g, v), FracOrder(alpha));
            const double coef = oracles::hp_gamma(beta + 1.0) / oracles::hp_gamma(beta - alpha + 1.0);
            const double err = max_rel_err_on_tail(
                out, [&](double t) { return coef * std::pow(t, beta - alpha); }, 1.0 / 8.0);
            INFO("alpha ", alpha, " beta ", beta, " err ", err);
            CHECK(err < 2e-3);
        }
    }
}

TEST_CASE("weyl of a constant is the boundary term alone, exactly") {
    const TimeGrid g = make_grid(1.0, 128);
    const SampledPath one = sample_fn(g, [](double) { return 1.0; });
    const SampledPath out = weyl_left(one, FracOrder(0.5));
    const double expected = 1.0 / oracles::hp_gamma(0.5);  // x^{-1/2}/Gamma(1/2) at x=1
    CHECK(out[128] == doctest::Approx(expected).epsilon(1e-12));

    const SampledPath right = weyl_right(one, FracOrder(0.5), 1.0);
    CHECK(right[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("fractional derivative of t^{0.8} at order 0.3") {
    const TimeGrid g = make_grid(1.0, 2048);
    std::vector<double> v(g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) v[i] = std::pow(g.node(i), 0.8);
    const SampledPath out = weyl_left(SampledPath(g, v), FracOrder(0.3));
    const double expected = oracles::hp_gamma(1.8) / oracles::hp_gamma(1.5);  // = 1.0509545...
    CHECK(out[2048] == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("reflection: right operators are the time reversal of left ones") {
    const TimeGrid g = make_grid(1.0, 200);
    std::vector<double> v(g.node_count()), vr(g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) v[i] = std::sin(3.0 * g.node(i)) + 0.5;
    for (std::size_t i = 0; i < g.node_count(); ++i) vr[i] = v[g.node_count() - 1 - i];
    for (const double alpha : {0.25, 0.6}) {
        const SampledPath right = rl_integral_right(SampledPath(g, v), FracOrder(alpha), 1.0);
        const SampledPath left_rev = rl_integral_left(SampledPath(g, vr), FracOrder(alpha));
        for (std::size_t i = 0; i < g.node_count(); ++i)
            CHECK(right[i] == doctest::Approx(left_rev[g.node_count() - 1 - i]).epsilon(1e-12));

        const SampledPath wright = weyl_right(SampledPath(g, v), FracOrder(alpha), 1.0);
        const SampledPath wleft_rev = weyl_left(SampledPath(g, vr), FracOrder(alpha));
        for (std::size_t i = 1; i + 1 < g.node_count(); ++i)
            CHECK(wright[i] == doctest::Approx(wleft_rev[g.node_count() - 1 - i]).epsilon(1e-10));
    }
}

TEST_CASE("linearity to rounding precision") {
    const TimeGrid g = make_grid(1.0, 128);
    std::vector<double> f1(g.node_count()), f2(g.node_count()), combo(g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const double t = g.node(i);
        f1[i] = std::exp(-t);
        f2[i] = t * t;
        combo[i] = 2.5 * f1[i] - 1.25 * f2[i];
    }
    const FracOrder a(0.35);
    const auto g1 = rl_integral_left(SampledPath(g, f1), a);
    const auto g2 = rl_integral_left(SampledPath(g, f2), a);
    const auto gc = rl_integral_left(SampledPath(g, combo), a);
    for (std::size_t i = 0; i < g.node_count(); ++i)
        CHECK(gc[i] == doctest::Approx(2.5 * g1[i] - 1.25 * g2[i]).epsilon(1e-11));

    const auto w1 = weyl_left(SampledPath(g, f1), a);
    const auto w2 = weyl_left(SampledPath(g, f2), a);
    const auto wc = weyl_left(SampledPath(g, combo), a);
    for (std::size_t i = 1; i < g.node_count(); ++i)
        CHECK(wc[i] == doctest::Approx(2.5 * w1[i] - 1.25 * w2[i]).epsilon(1e-10));
}

TEST_CASE("inverse property: D^alpha I^alpha f recovers f away from 0") {
    const TimeGrid g = make_grid(1.0, 2048);
    std::vector<double> v(g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) v[i] = std::cos(2.0 * g.node(i)) + 1.5;
    for (const double alpha : {0.3, 0.7}) {
        const SampledPath integ = rl_integral_left(SampledPath(g, v), FracOrder(alpha));
        const SampledPath back = weyl_left(integ, FracOrder(alpha));
        double worst = 0.0;
        for (std::size_t i = 0; i <= g.steps(); ++i) {
            if (g.node(i) < 0.25) continue;
            worst = std::max(worst, std::abs(back[i] - v[i]) / std::abs(v[i]));
        }
        INFO("alpha ", alpha, " worst ", worst);
        CHECK(worst < 1e-2);
    }
    // and the right-sided pair
    const SampledPath rinteg = rl_integral_right(SampledPath(g, v), FracOrder(0.4), 1.0);
    const SampledPath rback = weyl_right(rinteg, FracOrder(0.4), 1.0);
    double worst = 0.0;
    for (std::size_t i = 0; i <= g.steps(); ++i) {
        if (g.node(i) > 0.75) continue;
        worst = std::max(worst, std::abs(rback[i] - v[i]) / std::abs(v[i]));
    }
    CHECK(worst < 1e-2);
}

TEST_CASE("empirical convergence order at least 1 under refinement") {
    const double alpha = 0.3, beta = 0.8;
    const double coef = oracles::hp_gamma(beta + 1.0) / oracles::hp_gamma(beta + alpha + 1.0);
    double prev_err = 0.0;
    for (const std::size_t n : {512u, 1024u, 2048u}) {
        const TimeGrid g = make_grid(1.0, n);
        std::vector<double> v(g.node_count());
        for (std::size_t i = 0; i < g.node_count(); ++i) v[i] = std::pow(g.node(i), beta);
        const SampledPath out = rl_integral_left(SampledPath(g, v), FracOrder(alpha));
        const double err = max_rel_err_on_tail(
            out, [&](double t) { return coef * std::pow(t, beta + alpha); }, 0.125);
        if (prev_err > 0.0) CHECK(err < prev_err / 1.8);
        prev_err = err;
    }
}

TEST_CASE("phi profile matches the quadrature oracle across the range") {
    for (const double c : {0.2, 0.45, 0.8, 0.95}) {
        for (const double u : {1e-6, 1e-3, 0.1, 0.3, 0.6, 0.9, 0.99}) {
            const double got = phi_profile(c, u);
            const double expect = oracles::phi_quadrature(c, u);
            INFO("c ", c, " u ", u);
            CHECK(got == doctest::Approx(expect).epsilon(1e-9));
        }
    }
    CHECK(phi_profile(0.3, 1.0) == 0.0);
}

TEST_CASE("pointwise power-function operators match direct singular quadrature") {
    const double t = 0.8, s = 0.37;
    {
        const double alpha = 0.2;  // H = 0.3 branch
        const double direct = oracles::singular_integral(
                                  [&](double y, double xc) {
                                      const double ys = (xc < 0) ? -xc : y - s;
                                      return std::pow(ys, alpha - 1.0) * std::pow(y, -alpha);
                                  },
                                  s, t) /
                              oracles::hp_gamma(alpha);
        CHECK(frac_integral_right_power(alpha, t, s) == doctest::Approx(direct).epsilon(1e-9));
    }
    {
        const double alpha = 0.2;  // H = 0.7 branch
        const double integral = oracles::singular_integral(
            [&](double y, double xc) {
                const double ys = (xc < 0) ? -xc : y - s;
                if (ys < 1e-10 * s)  // Taylor limit of (s^a - y^a)(y-s)^{-a-1}
                    return -alpha * std::pow(s, alpha - 1.0) * std::pow(ys, -alpha);
                return (std::pow(s, alpha) - std::pow(y, alpha)) * std::pow(ys, -alpha - 1.0);
            },
            s, t);
        const double direct =
            (std::pow(s, alpha) * std::pow(t - s, -alpha) + alpha * integral) / oracles::hp_gamma(1.0 - alpha);
        CHECK(weyl_right_power(alpha, t, s) == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("dual power difference operator matches a direct singular quadrature") {
    const std::size_t n = 256;
    const TimeGrid g = make_grid(1.0, n);
    const double h = 0.7;
    const double p = 0.5 - h, q = -h - 0.5;
    const DualPowerDifferenceWeights op(g, p, q);
    std::vector<double> gv(g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) gv[i] = std::cos(2.0 * g.node(i));
    const auto got = op.apply(gv);
    for (const std::size_t i : {n / 4, n / 2, n}) {
        const double t = g.node(i);
        const double gi = std::cos(2.0 * t);
        const double expect = oracles::singular_integral(
            [&](double s, double xc) {
                const double sv = (xc < 0) ? -xc : s;
                const double ts = (xc > 0) ? xc : t - s;
                if (ts < 1e-10 * t)  // g(t) - g(s) ~ g'(t) (t - s): avoids 0 * inf
                    return 2.0 * std::sin(2.0 * t) * std::pow(ts, q + 1.0) * std::pow(sv, p);
                return (gi - std::cos(2.0 * s)) * std::pow(sv, p) * std::pow(ts, q);
            },
            0.0, t);
        INFO("node ", i);
        CHECK(got[i] == doctest::Approx(expect).epsilon(2e-3));
    }
}

TEST_CASE("property: linearity and reflection hold for random sampled functions") {
    // hand-rolled generator: random piecewise-smooth samples and random orders
    GaussianStream rng(RngSeed{777});
    const TimeGrid g = make_grid(1.0, 96);
    for (int trial = 0; trial < 25; ++trial) {
        const double alpha = 0.05 + 0.9 * rng.uniform01();
        std::vector<double> f1(g.node_count()), f2(g.node_count());
        const double w1 = 1.0 + 3.0 * rng.uniform01(), w2 = 1.0 + 3.0 * rng.uniform01();
        const double p1 = rng.gaussian(), p2 = rng.gaussian();
        for (std::size_t i = 0; i < g.node_count(); ++i) {
            const double t = g.node(i);
            f1[i] = std::sin(w1 * t + p1) + 0.5 * t;
            f2[i] = std::cos(w2 * t + p2) - t * t;
        }
        const double a = 2.0 * rng.gaussian(), b = 2.0 * rng.gaussian();
        std::vector<double> combo(g.node_count());
        for (std::size_t i = 0; i < g.node_count(); ++i) combo[i] = a * f1[i] + b * f2[i];

        const FracOrder order(alpha);
        const auto ga = rl_integral_left(SampledPath(g, f1), order);
        const auto gb = rl_integral_left(SampledPath(g, f2), order);
        const auto gc = rl_integral_left(SampledPath(g, combo), order);
        double scale = 1e-12;
        for (std::size_t i = 0; i < g.node_count(); ++i) scale = std::max(scale, std::abs(gc[i]));
        for (std::size_t i = 0; i < g.node_count(); ++i)
            CHECK(std::abs(gc[i] - (a * ga[i] + b * gb[i])) < 1e-10 * scale);

        // reflection: right integral of f == time reversal of left integral of reversed f
        std::vector<double> rev(g.node_count());
        for (std::size_t i = 0; i < g.node_count(); ++i) rev[i] = combo[g.node_count() - 1 - i];
        const auto right = rl_integral_right(SampledPath(g, combo), order, 1.0);
        const auto left_rev = rl_integral_left(SampledPath(g, rev), order);
        for (std::size_t i = 0; i < g.node_count(); ++i)
            CHECK(std::abs(right[i] - left_rev[g.node_count() - 1 - i]) < 1e-10 * scale);
    }
}

TEST_CASE("domain checks on the grid operators") {
    const TimeGrid g = make_grid(1.0, 8);
    const SampledPath f = SampledPath(g, std::vector<double>(9, 1.0));
    CHECK_THROWS_AS(rl_integral_right(f, FracOrder(0.5), 2.0), ValidationError);
    CHECK_THROWS_AS(weyl_right(f, FracOrder(0.5), 0.5), ValidationError);
    const TimeGrid g1 = make_grid(1.0, 1);
    const SampledPath f1 = SampledPath(g1, std::vector<double>(2, 1.0));
    CHECK_THROWS_AS(weyl_left(f1, FracOrder(0.5)), ValidationError);
}
