// SPDX-License-Identifier: Apache-2.0
//
// o2i-ris: coverage analysis of RIS-assisted outdoor-to-indoor mmWave links
// ------------------------------------------------------------------------
//
// Distribution of the number of unblocked paths, sum_n Z_n with independent
// Z_n ~ Bernoulli(1 - p_n): by exhaustive subset enumeration (small N) and by
// the closed-form DFT of its characteristic function.

#ifndef O2I_POISSON_BINOMIAL_HPP
#define O2I_POISSON_BINOMIAL_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "o2i/errors.hpp"
#include "o2i/units.hpp"

namespace o2i {

inline constexpr std::size_t kEnumerationCap = 20;
inline constexpr double kDftImagTolerance = 1e-9;
inline constexpr std::size_t kDftLogDomainAbove = 256;

/// Full PMF over k = 0..N by summing over every subset of surviving paths.
/// `p` holds blockage probabilities.
inline std::vector<double> pmf_enumeration_all(std::span<const double> p) {
    const std::size_t n = p.size();
    if (n > kEnumerationCap)
        throw CapExceededError("subset enumeration is capped at N = " + std::to_string(kEnumerationCap) +
                               ", got N = " + std::to_string(n));
    std::vector<double> pmf(n + 1, 0.0);
    const std::uint32_t subsets = 1u << n;
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
        double prod = 1.0;
        for (std::size_t i = 0; i < n; ++i) prod *= (mask >> i) & 1u ? 1.0 - p[i] : p[i];
        pmf[static_cast<std::size_t>(std::popcount(mask))] += prod;
    }
    return pmf;
}

inline double pmf_enumeration(std::span<const double> p, int k) {
    if (k < 0 || static_cast<std::size_t>(k) > p.size()) {
        if (p.size() > kEnumerationCap) pmf_enumeration_all(p); // still report the cap
        return 0.0;
    }
    return pmf_enumeration_all(p)[static_cast<std::size_t>(k)];
}

/// Full PMF over k = 0..N from
///   Pr{K = k} = 1/(N+1) sum_l C^{-kl} prod_n [1 + (C^l - 1)(1 - p_n)],  C = e^{2 pi j/(N+1)}.
/// Above 256 paths the products are accumulated as log-magnitude and angle.
/// Throws NumericInstabilityError if any imaginary residue reaches 1e-9.
inline std::vector<double> pmf_dft_all(std::span<const double> p) {
    const std::size_t n = p.size();
    const std::size_t len = n + 1;
    const double step = 2.0 * kPi / static_cast<double>(len);

    std::vector<std::complex<double>> phi(len);
    const bool log_domain = n > kDftLogDomainAbove;
    for (std::size_t l = 0; l < len; ++l) {
        const std::complex<double> c = std::polar(1.0, step * static_cast<double>(l));
        if (!log_domain) {
            std::complex<double> prod = 1.0;
            for (double pi : p) prod *= pi + (1.0 - pi) * c;
            phi[l] = prod;
        } else {
            double log_mag = 0.0, angle = 0.0;
            bool zero = false;
            for (double pi : p) {
                const std::complex<double> f = pi + (1.0 - pi) * c;
                const double mag = std::abs(f);
                if (mag == 0.0) {
                    zero = true;
                    break;
                }
                log_mag += std::log(mag);
                angle += std::arg(f);
            }
            phi[l] = zero ? std::complex<double>(0.0) : std::polar(std::exp(log_mag), angle);
        }
    }

    std::vector<std::complex<double>> inv_roots(len);
    for (std::size_t e = 0; e < len; ++e) inv_roots[e] = std::polar(1.0, -step * static_cast<double>(e));

    std::vector<double> pmf(len);
    for (std::size_t k = 0; k < len; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t l = 0; l < len; ++l) acc += inv_roots[(k * l) % len] * phi[l];
        acc /= static_cast<double>(len);
        if (std::abs(acc.imag()) >= kDftImagTolerance)
            throw NumericInstabilityError("DFT PMF imaginary residue " + std::to_string(acc.imag()) + " at k = " +
                                          std::to_string(k));
        pmf[k] = std::clamp(acc.real(), 0.0, 1.0);
    }
    return pmf;
}

inline double pmf_dft(std::span<const double> p, int k) {
    if (k < 0 || static_cast<std::size_t>(k) > p.size()) return 0.0;
    return pmf_dft_all(p)[static_cast<std::size_t>(k)];
}

} // namespace o2i

#endif
