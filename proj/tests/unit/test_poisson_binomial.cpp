// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <numeric>

#include "o2i/errors.hpp"
#include "o2i/poisson_binomial.hpp"
#include "test_support.hpp"

using namespace o2i;

namespace {

// Recursive convolution oracle: pmf after adding one path at a time.
std::vector<double> convolution_oracle(const std::vector<double>& p) {
    std::vector<double> pmf{1.0};
    for (double pi : p) {
        std::vector<double> next(pmf.size() + 1, 0.0);
        for (std::size_t k = 0; k < pmf.size(); ++k) {
            next[k] += pmf[k] * pi;
            next[k + 1] += pmf[k] * (1.0 - pi);
        }
        pmf = std::move(next);
    }
    return pmf;
}

double binomial(int n, int k, double q) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c * std::pow(q, k) * std::pow(1.0 - q, n - k);
}

} // namespace

TEST(PoissonBinomial, EnumerationSpotValues) {
    const std::vector<double> p{0.1, 0.2, 0.3, 0.4, 0.5};
    EXPECT_NEAR(pmf_enumeration(p, 0), 0.1 * 0.2 * 0.3 * 0.4 * 0.5, 1e-15);
    EXPECT_NEAR(pmf_enumeration(p, 0), 0.0012, 1e-15);
    EXPECT_DOUBLE_EQ(pmf_enumeration(std::vector<double>(6, 1.0), 0), 1.0);
    EXPECT_DOUBLE_EQ(pmf_enumeration(std::vector<double>(6, 0.0), 6), 1.0);
}

TEST(PoissonBinomial, EnumerationMatchesConvolution) {
    std::mt19937_64 rng(1);
    for (std::size_t n = 1; n <= 14; ++n) {
        const auto p = test::random_probabilities(n, rng);
        const auto ref = convolution_oracle(p);
        const auto all = pmf_enumeration_all(p);
        for (std::size_t k = 0; k <= n; ++k) EXPECT_NEAR(all[k], ref[k], 1e-13);
    }
}

TEST(PoissonBinomial, EnumerationCap) {
    EXPECT_THROW(pmf_enumeration(std::vector<double>(21, 0.5), 3), CapExceededError);
    EXPECT_NO_THROW(pmf_enumeration(std::vector<double>(20, 0.5), 3));
}

TEST(PoissonBinomial, DftMatchesEnumerationAtN5) {
    const std::vector<double> p{0.1, 0.2, 0.3, 0.4, 0.5};
    for (int k = 0; k <= 5; ++k) EXPECT_NEAR(pmf_dft(p, k), pmf_enumeration(p, k), 1e-12);
}

TEST(PoissonBinomial, DftBinomialSpecialCase) {
    EXPECT_NEAR(pmf_dft(std::vector<double>(4, 0.5), 2), 0.375, 1e-12);
    for (int n : {7, 30, 100}) {
        const auto pmf = pmf_dft_all(std::vector<double>(static_cast<std::size_t>(n), 0.3));
        for (int k = 0; k <= n; ++k) EXPECT_NEAR(pmf[static_cast<std::size_t>(k)], binomial(n, k, 0.7), 1e-10);
    }
}

TEST(PoissonBinomial, DftMatchesConvolutionLargeN) {
    std::mt19937_64 rng(3);
    for (std::size_t n : {50u, 257u, 600u}) {
        const auto p = test::random_probabilities(n, rng);
        const auto ref = convolution_oracle(p);
        const auto dft = pmf_dft_all(p);
        for (std::size_t k = 0; k <= n; ++k) EXPECT_NEAR(dft[k], ref[k], 1e-10);
    }
}

TEST(PoissonBinomial, DftNormalization) {
    std::mt19937_64 rng(4);
    for (std::size_t n : {64u, 256u, 1024u}) {
        const auto pmf = pmf_dft_all(test::random_probabilities(n, rng));
        EXPECT_NEAR(std::accumulate(pmf.begin(), pmf.end(), 0.0), 1.0, 1e-9);
        for (double v : pmf) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
}

TEST(PoissonBinomial, OutsideSupportIsZero) {
    EXPECT_EQ(pmf_dft(std::vector<double>(3, 0.5), 4), 0.0);
    EXPECT_EQ(pmf_dft(std::vector<double>(3, 0.5), -1), 0.0);
    EXPECT_EQ(pmf_enumeration(std::vector<double>(3, 0.5), 4), 0.0);
}
