// SPDX-License-Identifier: Apache-2.0
//
// o2i-ris: coverage analysis of RIS-assisted outdoor-to-indoor mmWave links
// ------------------------------------------------------------------------
//
// SNR coverage Pr[SNR > T] for SNR = G sum_n a_n Z_n, Z_n ~ Bernoulli(1 - p_n):
//   - Monte Carlo over blockage states (independent or correlated sampler),
//   - Gaussian approximation from the first two moments,
//   - Poisson-binomial approximation with every a_n replaced by their mean,
//   - exact enumeration of all 2^N blockage states (small N),
//   - Chernoff upper bounds.

#ifndef O2I_COVERAGE_HPP
#define O2I_COVERAGE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "o2i/channel.hpp"
#include "o2i/errors.hpp"
#include "o2i/parallel.hpp"
#include "o2i/poisson_binomial.hpp"
#include "o2i/rng.hpp"
#include "o2i/units.hpp"

namespace o2i {

/// Gaussian tail Q(x) = Pr[N(0,1) > x].
inline double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

struct GaussianMoments {
    double mean_M = 0.0;
    double var_sigma2 = 0.0;
    /// Largest single-path SNR contribution G max_n a_n; the Chernoff bounds
    /// are evaluated in these units so every summand lies in [0, 1].
    double unit = 1.0;
};

inline GaussianMoments moments(const LinkGains& gains, std::span<const double> p) {
    if (p.size() != gains.size()) throw InvariantError("blockage vector length does not match the gains");
    GaussianMoments m;
    double mean = 0.0, var = 0.0, amax = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        mean += gains.a[i] * (1.0 - p[i]);
        var += gains.a[i] * gains.a[i] * (1.0 - p[i]) * p[i];
        amax = std::max(amax, gains.a[i]);
    }
    m.mean_M = gains.big_g * mean;
    m.var_sigma2 = gains.big_g * gains.big_g * var;
    m.unit = amax > 0.0 ? gains.big_g * amax : 1.0;
    return m;
}

inline double coverage_gaussian(const GaussianMoments& m, double threshold_T) {
    const double sigma = std::sqrt(m.var_sigma2);
    if (!(sigma > 0.0)) return threshold_T < m.mean_M ? 1.0 : 0.0;
    return q_function((threshold_T - m.mean_M) / sigma);
}

/// Upper Chernoff bound on Pr[SNR > T], evaluated on SNR / unit:
///   T > M:  (T/M)^-T e^(T - M)
///   T < M:  1 - (2 - T/M)^(T - 2M) e^(M - T)
///   T = M:  1
inline double coverage_chernoff(const GaussianMoments& m, double threshold_T) {
    if (!(m.mean_M > 0.0)) throw InvariantError("Chernoff bound needs a positive mean SNR");
    const double mu = m.mean_M / m.unit;
    const double t = threshold_T / m.unit;
    double bound = 1.0;
    if (t > mu) {
        bound = std::exp(-t * std::log(t / mu) + t - mu);
    } else if (t < mu) {
        bound = 1.0 - std::exp((t - 2.0 * mu) * std::log(2.0 - t / mu) + mu - t);
    }
    return std::clamp(bound, 0.0, 1.0);
}

/// Poisson-binomial approximation: with every a_n set to their mean A, the SNR
/// lives on the lattice k G A. Coverage = 1 - sum_{q=0}^{floor(T / (G A))} Pr{K = q}.
class Approx2 {
public:
    Approx2(const LinkGains& gains, std::span<const double> p) : n_(p.size()) {
        if (p.size() != gains.size()) throw InvariantError("blockage vector length does not match the gains");
        const double mean_a = gains.a.empty() ? 0.0
                                              : std::accumulate(gains.a.begin(), gains.a.end(), 0.0) /
                                                    static_cast<double>(gains.a.size());
        lattice_ = gains.big_g * mean_a;
        pmf_ = pmf_dft_all(p);
        if (n_ <= 12) {
            const auto ref = pmf_enumeration_all(p);
            for (std::size_t k = 0; k <= n_; ++k)
                if (std::abs(ref[k] - pmf_[k]) > 1e-9)
                    throw NumericInstabilityError("DFT and enumeration PMFs disagree at k = " + std::to_string(k));
        }
        cdf_.resize(pmf_.size());
        std::partial_sum(pmf_.begin(), pmf_.end(), cdf_.begin());
    }

    double operator()(double threshold_T) const {
        if (threshold_T < 0.0) return 1.0;
        if (!(lattice_ > 0.0)) return 0.0;
        const double kf = std::floor(threshold_T / lattice_);
        if (kf >= static_cast<double>(n_)) return 0.0;
        return std::clamp(1.0 - cdf_[static_cast<std::size_t>(kf)], 0.0, 1.0);
    }

    double lattice_step() const { return lattice_; }
    const std::vector<double>& pmf() const { return pmf_; }

private:
    std::size_t n_;
    double lattice_ = 0.0;
    std::vector<double> pmf_;
    std::vector<double> cdf_;
};

inline double coverage_approx2(const LinkGains& gains, std::span<const double> p, double threshold_T) {
    return Approx2(gains, p)(threshold_T);
}

/// Exact Pr[SNR > T] under independent blockage by summing over all 2^N states.
inline std::vector<double> coverage_enumeration(const LinkGains& gains, std::span<const double> p,
                                                std::span<const double> thresholds) {
    const std::size_t n = p.size();
    if (n > kEnumerationCap)
        throw CapExceededError("exact enumeration is capped at N = " + std::to_string(kEnumerationCap) +
                               ", got N = " + std::to_string(n));
    std::vector<double> cov(thresholds.size(), 0.0);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double prob = 1.0, sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if ((mask >> i) & 1u) {
                prob *= 1.0 - p[i];
                sum += gains.a[i];
            } else {
                prob *= p[i];
            }
        }
        const double snr = gains.big_g * sum;
        for (std::size_t j = 0; j < thresholds.size(); ++j)
            if (snr > thresholds[j]) cov[j] += prob;
    }
    for (double& c : cov) c = std::clamp(c, 0.0, 1.0);
    return cov;
}

/// Draws z_n ~ Bernoulli(1 - p_n) independently per path.
class IndependentBlockageSampler {
public:
    explicit IndependentBlockageSampler(std::vector<double> p) : p_(std::move(p)) {}
    std::size_t size() const { return p_.size(); }
    void sample(Engine& eng, std::vector<std::uint8_t>& z) const {
        z.resize(p_.size());
        for (std::size_t i = 0; i < p_.size(); ++i) z[i] = uniform01(eng) >= p_[i] ? 1 : 0;
    }

private:
    std::vector<double> p_;
};

struct McEstimate {
    std::vector<double> coverage;
    std::vector<double> stderr_;
    std::uint64_t trials = 0;
};

inline double binomial_stderr(double p_hat, std::uint64_t trials) {
    return trials ? std::sqrt(std::max(0.0, p_hat * (1.0 - p_hat)) / static_cast<double>(trials)) : 0.0;
}

/// Optional per-trial fading redraw for sensitivity studies.
struct FadingRedraw {
    int nakagami_m = 3;
};

/// Monte Carlo estimate of Pr[SNR > T] for each threshold (linear, ascending).
/// Each block of trials draws from `key.child(block)`; counts are summed, so
/// the result is independent of `workers`.
template <typename Sampler>
McEstimate coverage_monte_carlo(const LinkGains& gains, const Sampler& sampler, std::span<const double> thresholds,
                                const RunOptions& run, const StreamKey& key,
                                std::optional<FadingRedraw> redraw = std::nullopt) {
    if (run.trials < 1) throw InvariantError("Monte Carlo needs at least one trial");
    if (!std::is_sorted(thresholds.begin(), thresholds.end()))
        throw InvariantError("thresholds must be ascending");
    const std::size_t nt = thresholds.size();
    using Counts = std::vector<std::uint64_t>;

    auto body = [&](std::uint64_t block, std::uint64_t, std::uint64_t count) {
        Engine eng = key.child(block).engine();
        Counts hist(nt + 1, 0);
        std::vector<std::uint8_t> z;
        LinkGains local;
        if (redraw) local = gains;
        for (std::uint64_t t = 0; t < count; ++t) {
            sampler.sample(eng, z);
            double snr;
            if (redraw) {
                for (std::size_t i = 0; i < local.a.size(); ++i)
                    local.a[i] = local.base[i] * draw_nakagami_power(redraw->nakagami_m, eng) *
                                 draw_nakagami_power(redraw->nakagami_m, eng);
                snr = snr_realization(local, z);
            } else {
                snr = snr_realization(gains, z);
            }
            // thresholds[0 .. idx) lie strictly below snr
            const auto idx = static_cast<std::size_t>(
                std::lower_bound(thresholds.begin(), thresholds.end(), snr) - thresholds.begin());
            ++hist[idx];
        }
        return hist;
    };
    auto merge = [](Counts& acc, const Counts& h) {
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += h[i];
    };
    const Counts hist = run_blocks(run.trials, run.workers, Counts(nt + 1, 0), body, merge);

    McEstimate est;
    est.trials = run.trials;
    est.coverage.resize(nt);
    est.stderr_.resize(nt);
    std::uint64_t above = 0;
    for (std::size_t j = nt; j-- > 0;) {
        above += hist[j + 1];
        const double c = static_cast<double>(above) / static_cast<double>(run.trials);
        est.coverage[j] = c;
        est.stderr_[j] = binomial_stderr(c, run.trials);
    }
    return est;
}

/// Raw SNR draws in trial order.
template <typename Sampler>
std::vector<double> simulate_snr(const LinkGains& gains, const Sampler& sampler, const RunOptions& run,
                                 const StreamKey& key) {
    using Samples = std::vector<double>;
    auto body = [&](std::uint64_t block, std::uint64_t, std::uint64_t count) {
        Engine eng = key.child(block).engine();
        Samples out;
        out.reserve(count);
        std::vector<std::uint8_t> z;
        for (std::uint64_t t = 0; t < count; ++t) {
            sampler.sample(eng, z);
            out.push_back(snr_realization(gains, z));
        }
        return out;
    };
    auto merge = [](Samples& acc, const Samples& s) { acc.insert(acc.end(), s.begin(), s.end()); };
    return run_blocks(run.trials, run.workers, Samples{}, body, merge);
}

/// Coverage methods selectable from the CLI.
enum class Method { MonteCarlo, Approx1, Approx2, Chernoff, Enumeration };

inline const char* method_name(Method m) {
    switch (m) {
    case Method::MonteCarlo: return "mc";
    case Method::Approx1: return "approx1";
    case Method::Approx2: return "approx2";
    case Method::Chernoff: return "chernoff";
    case Method::Enumeration: return "enum";
    }
    return "?";
}

struct MethodCurve {
    std::string method;
    std::vector<double> coverage;
    std::vector<double> stderr_; // zero for analytic methods
    std::uint64_t trials = 0;
};

/// Coverage per method on a common threshold grid (dB, ascending).
struct CoverageCurve {
    std::vector<double> thresholds_db;
    std::vector<MethodCurve> curves;
};

inline std::vector<double> thresholds_linear(std::span<const double> thresholds_db) {
    std::vector<double> out;
    out.reserve(thresholds_db.size());
    for (double t : thresholds_db) out.push_back(db_to_linear(t));
    return out;
}

/// Kolmogorov-Smirnov distance between the empirical CDF of `samples` and the
/// Gaussian CDF with the given moments.
inline double ks_distance_gaussian(std::vector<double> samples, const GaussianMoments& m) {
    std::sort(samples.begin(), samples.end());
    const double sigma = std::sqrt(m.var_sigma2);
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size();) {
        std::size_t j = i;
        while (j < samples.size() && samples[j] == samples[i]) ++j;
        const double f = 1.0 - q_function((samples[i] - m.mean_M) / sigma);
        d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(j) / n)});
        i = j;
    }
    return d;
}

} // namespace o2i

#endif
