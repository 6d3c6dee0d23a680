// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "o2i/coverage.hpp"
#include "o2i/errors.hpp"
#include "test_support.hpp"

using namespace o2i;

namespace {

long double q_oracle(long double x) {
    const long double c = 1.0L / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
    auto phi = [&](long double t) { return c * std::exp(-t * t / 2.0L); };
    const long double ax = std::fabs(x);
    const long double tail = test::simpson(phi, ax, ax + 40.0L, 800000);
    return x >= 0 ? tail : 1.0L - tail;
}

LinkGains make_gains(double big_g, std::vector<double> a) {
    LinkGains g;
    g.big_g = big_g;
    g.base = a;
    g.a = std::move(a);
    return g;
}

} // namespace

TEST(Coverage, QFunctionAgainstIntegration) {
    for (double x = -8.0; x <= 8.0; x += 0.5)
        EXPECT_NEAR(q_function(x), static_cast<double>(q_oracle(x)), 1e-12) << "x = " << x;
    EXPECT_DOUBLE_EQ(q_function(0.0), 0.5);
    EXPECT_NEAR(static_cast<double>(q_oracle(6.0L)), 9.865876e-10, 1e-15);
}

TEST(Coverage, MomentsHandValues) {
    const auto g = make_gains(1.0, {1.0, 2.0});
    const std::vector<double> p{0.5, 0.5};
    const auto m = moments(g, p);
    EXPECT_DOUBLE_EQ(m.mean_M, 1.5);
    EXPECT_DOUBLE_EQ(m.var_sigma2, 1.25);

    const auto m0 = moments(g, std::vector<double>{0.0, 0.0});
    EXPECT_DOUBLE_EQ(m0.mean_M, 3.0);
    EXPECT_DOUBLE_EQ(m0.var_sigma2, 0.0);
    const auto m1 = moments(g, std::vector<double>{1.0, 1.0});
    EXPECT_DOUBLE_EQ(m1.mean_M, 0.0);
    EXPECT_DOUBLE_EQ(m1.var_sigma2, 0.0);
    EXPECT_THROW(moments(g, std::vector<double>{0.5}), InvariantError);
}

TEST(Coverage, MomentsMatchEnumeration) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> a(7);
        for (auto& x : a) x = u(rng);
        const auto p = test::random_probabilities(7, rng);
        const auto g = make_gains(2.0, a);
        double mean = 0.0, sq = 0.0;
        for (std::uint32_t mask = 0; mask < 128; ++mask) {
            double prob = 1.0, snr = 0.0;
            for (int i = 0; i < 7; ++i) {
                const bool open = (mask >> i) & 1u;
                prob *= open ? 1.0 - p[i] : p[i];
                if (open) snr += 2.0 * a[i];
            }
            mean += prob * snr;
            sq += prob * snr * snr;
        }
        const auto m = moments(g, p);
        EXPECT_NEAR(m.mean_M, mean, 1e-12);
        EXPECT_NEAR(m.var_sigma2, sq - mean * mean, 1e-10);
    }
}

TEST(Coverage, GaussianSpotValues) {
    const GaussianMoments m{10.0, 4.0, 1.0};
    EXPECT_DOUBLE_EQ(coverage_gaussian(m, 10.0), 0.5);
    EXPECT_NEAR(coverage_gaussian(m, 10.0 + 6.0 * 2.0), static_cast<double>(q_oracle(6.0L)), 1e-20);
    const GaussianMoments flat{10.0, 0.0, 1.0};
    EXPECT_EQ(coverage_gaussian(flat, 9.0), 1.0);
    EXPECT_EQ(coverage_gaussian(flat, 11.0), 0.0);
}

TEST(Coverage, Approx2Edges) {
    const auto g = make_gains(2.0, {1.0, 1.0, 1.0, 1.0});
    const std::vector<double> p{0.2, 0.3, 0.4, 0.5};
    const Approx2 a(g, p);
    EXPECT_DOUBLE_EQ(a.lattice_step(), 2.0);
    EXPECT_EQ(a(-1.0), 1.0);
    EXPECT_EQ(a(8.0), 0.0);
    EXPECT_EQ(a(100.0), 0.0);
    const Approx2 clear(g, std::vector<double>(4, 0.0));
    EXPECT_NEAR(clear(1.0), 1.0, 1e-12);
    EXPECT_NEAR(clear(7.9), 1.0, 1e-12);
}

TEST(Coverage, Approx2EqualGainsIsExact) {
    std::mt19937_64 rng(9);
    for (std::size_t n : {3u, 8u, 12u}) {
        const auto p = test::random_probabilities(n, rng);
        const auto g = make_gains(1.5, std::vector<double>(n, 0.7));
        std::vector<double> grid;
        for (double t = -0.5; t < 1.5 * 0.7 * n + 1.0; t += 0.173) grid.push_back(t);
        const auto exact = coverage_enumeration(g, p, grid);
        const Approx2 a(g, p);
        for (std::size_t j = 0; j < grid.size(); ++j) EXPECT_NEAR(a(grid[j]), exact[j], 1e-9);
    }
}

TEST(Coverage, AnalyticCurvesNonIncreasing) {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    std::vector<double> a(30);
    for (auto& x : a) x = u(rng);
    const auto g = make_gains(1.0, a);
    const auto p = test::random_probabilities(30, rng);
    const auto m = moments(g, p);
    const Approx2 a2(g, p);
    double pg = 1.0, pa = 1.0, pc = 1.0;
    for (double t = 0.0; t < 60.0; t += 0.25) {
        const double cg = coverage_gaussian(m, t), ca = a2(t), cc = coverage_chernoff(m, t);
        EXPECT_LE(cg, pg + 1e-15);
        EXPECT_LE(ca, pa + 1e-15);
        if (t - 0.25 > m.mean_M) {
            EXPECT_LE(cc, pc + 1e-15);
        }
        for (double v : {cg, ca, cc}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
        pg = cg;
        pa = ca;
        pc = cc;
    }
}

TEST(Coverage, ChernoffFormula) {
    const GaussianMoments m{1.0, 0.5, 1.0};
    EXPECT_NEAR(coverage_chernoff(m, 2.0), std::pow(2.0, -2.0) * std::exp(1.0), 1e-14);
    EXPECT_NEAR(coverage_chernoff(m, 2.0), 0.6796, 1e-4);
    EXPECT_EQ(coverage_chernoff(m, 1.0), 1.0);
    EXPECT_LT(coverage_chernoff(m, 40.0), 1e-30);
    const double t = 0.5;
    EXPECT_NEAR(coverage_chernoff(m, t), 1.0 - std::pow(2.0 - t, t - 2.0) * std::exp(1.0 - t), 1e-14);
    EXPECT_THROW(coverage_chernoff(GaussianMoments{0.0, 0.0, 1.0}, 1.0), InvariantError);
}

TEST(Coverage, ChernoffUpperBranchBoundsExact) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> a(10);
        for (auto& x : a) x = u(rng);
        const auto g = make_gains(5.0, a);
        const auto p = test::random_probabilities(10, rng);
        const auto m = moments(g, p);
        std::vector<double> grid;
        for (double t = m.mean_M * 1.01; t < g.max_snr(); t += m.mean_M * 0.05) grid.push_back(t);
        const auto exact = coverage_enumeration(g, p, grid);
        for (std::size_t j = 0; j < grid.size(); ++j) EXPECT_GE(coverage_chernoff(m, grid[j]) + 1e-12, exact[j]);
    }
}

TEST(Coverage, EnumerationCap) {
    const auto g = make_gains(1.0, std::vector<double>(21, 1.0));
    const std::vector<double> grid{1.0};
    EXPECT_THROW(coverage_enumeration(g, std::vector<double>(21, 0.5), grid), CapExceededError);
}

TEST(Coverage, MonteCarloMatchesEnumeration) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.2, 2.0);
    std::vector<double> a(9);
    for (auto& x : a) x = u(rng);
    const auto g = make_gains(1.0, a);
    const auto p = test::random_probabilities(9, rng);
    std::vector<double> grid;
    for (double t = 0.0; t < g.max_snr(); t += 0.3) grid.push_back(t);
    const auto exact = coverage_enumeration(g, p, grid);
    const auto mc = coverage_monte_carlo(g, IndependentBlockageSampler(p), grid, RunOptions{50000, 2}, StreamKey(3));
    for (std::size_t j = 0; j < grid.size(); ++j)
        EXPECT_NEAR(mc.coverage[j], exact[j], 4.0 * mc.stderr_[j] + 1e-12) << "T = " << grid[j];
}

TEST(Coverage, MonteCarloDegenerateCases) {
    const auto g = make_gains(2.0, {1.0, 2.0, 3.0});
    const double top = g.max_snr();
    const std::vector<double> grid{0.0, top * 0.5, std::nextafter(top, 0.0), top, top * 2.0};
    const auto clear = coverage_monte_carlo(g, IndependentBlockageSampler({0.0, 0.0, 0.0}), grid, RunOptions{5000, 1},
                                            StreamKey(1));
    EXPECT_EQ(clear.coverage, (std::vector<double>{1.0, 1.0, 1.0, 0.0, 0.0}));
    for (double se : clear.stderr_) EXPECT_EQ(se, 0.0);
    const auto dark = coverage_monte_carlo(g, IndependentBlockageSampler({1.0, 1.0, 1.0}), grid, RunOptions{5000, 1},
                                           StreamKey(1));
    for (double c : dark.coverage) EXPECT_EQ(c, 0.0);
}

TEST(Coverage, MonteCarloWorkerInvariantAndMonotone) {
    Scenario s;
    const auto geo = build_geometry(s);
    const auto gains = assemble_gains(s, geo);
    std::vector<double> p(gains.size(), 0.4);
    const auto grid = thresholds_linear(std::vector<double>{50, 52, 54, 56, 58, 60});
    const IndependentBlockageSampler sampler(p);
    const auto ref = coverage_monte_carlo(gains, sampler, grid, RunOptions{20000, 1}, StreamKey(77));
    for (unsigned w : {2u, 5u}) {
        const auto other = coverage_monte_carlo(gains, sampler, grid, RunOptions{20000, w}, StreamKey(77));
        EXPECT_EQ(other.coverage, ref.coverage);
    }
    for (std::size_t j = 1; j < grid.size(); ++j) EXPECT_LE(ref.coverage[j], ref.coverage[j - 1]);
    EXPECT_THROW(coverage_monte_carlo(gains, sampler, std::vector<double>{2.0, 1.0}, RunOptions{}, StreamKey(1)),
                 InvariantError);
}

TEST(Coverage, FadingRedrawChangesSamplesNotMean) {
    const auto g = make_gains(1.0, std::vector<double>(16, 1.0));
    const std::vector<double> p(16, 0.0);
    const std::vector<double> grid{16.0};
    const auto fixed = coverage_monte_carlo(g, IndependentBlockageSampler(p), grid, RunOptions{20000, 1}, StreamKey(1));
    EXPECT_EQ(fixed.coverage[0], 0.0);
    const auto redraw = coverage_monte_carlo(g, IndependentBlockageSampler(p), grid, RunOptions{20000, 1},
                                             StreamKey(1), FadingRedraw{3});
    // sum of 16 products of unit-mean gammas is roughly symmetric about 16
    EXPECT_GT(redraw.coverage[0], 0.3);
    EXPECT_LT(redraw.coverage[0], 0.6);
}

TEST(Coverage, KsDistance) {
    std::vector<double> samples;
    for (int i = 0; i < 1000; ++i) samples.push_back((i + 0.5) / 1000.0);
    // uniform samples against N(0.5, 1/12): KS is small but clearly positive
    const double d = ks_distance_gaussian(samples, GaussianMoments{0.5, 1.0 / 12.0, 1.0});
    double oracle = 0.0;
    const double sd = std::sqrt(1.0 / 12.0);
    for (int i = 0; i <= 100000; ++i) {
        const double x = i / 100000.0;
        oracle = std::max(oracle, std::abs(x - 0.5 * std::erfc(-(x - 0.5) / (sd * std::sqrt(2.0)))));
    }
    EXPECT_NEAR(d, oracle, 1.5e-3);
    const std::vector<double> point(100, 3.0);
    EXPECT_NEAR(ks_distance_gaussian(point, GaussianMoments{3.0, 1.0, 1.0}), 0.5, 1e-12);
}
