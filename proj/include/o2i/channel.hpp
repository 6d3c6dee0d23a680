// SPDX-License-Identifier: Apache-2.0
//
// o2i-ris: coverage analysis of RIS-assisted outdoor-to-indoor mmWave links
// ------------------------------------------------------------------------

#ifndef O2I_CHANNEL_HPP
#define O2I_CHANNEL_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "o2i/rng.hpp"
#include "o2i/scenario.hpp"
#include "o2i/scene.hpp"
#include "o2i/units.hpp"

namespace o2i {

/// Large-scale gain C_L * d^-alpha.
inline double pathloss(double distance, double alpha, double intercept_CL) {
    return intercept_CL * std::pow(distance, -alpha);
}

/// Free-space gain at a 1 m reference distance, (c / (4 pi f))^2.
inline double free_space_intercept(double carrier_freq_hz) {
    const double r = kSpeedOfLight / (4.0 * kPi * carrier_freq_hz);
    return r * r;
}

inline double pathloss_intercept(const Scenario& s) {
    return s.pathloss_intercept_db ? db_to_linear(*s.pathloss_intercept_db) : free_space_intercept(s.carrier_freq_hz);
}

struct FadingPowers {
    std::vector<double> h2; // BS -> sensor
    std::vector<double> g2; // sensor -> UE
};

/// One unit-mean Gamma(m, 1/m) power draw, i.e. |x|^2 of Nakagami(m, 1).
inline double draw_nakagami_power(int m, Engine& eng) {
    return std::gamma_distribution<double>(static_cast<double>(m), 1.0 / m)(eng);
}

inline FadingPowers draw_fading_powers(const Scenario& s, std::size_t n, Engine& eng) {
    FadingPowers f;
    f.h2.assign(n, 1.0);
    f.g2.assign(n, 1.0);
    if (s.fading == FadingMode::Deterministic) return f;
    for (std::size_t i = 0; i < n; ++i) {
        f.h2[i] = draw_nakagami_power(s.nakagami_m, eng);
        f.g2[i] = draw_nakagami_power(s.nakagami_m, eng);
    }
    return f;
}

/// The per-scenario fading draw, from its own sub-stream of the scenario seed.
inline FadingPowers scenario_fading(const Scenario& s, std::size_t n) {
    auto eng = StreamKey(s.rng_seed).child(StreamTag::Fading).engine();
    return draw_fading_powers(s, n, eng);
}

/// SNR = big_g * sum_n a_n Z_n. big_g = M^2 L / noise (with transmit power),
/// a_n = B gb_n |h_n|^2 |g_n|^2.
struct LinkGains {
    double big_g = 0.0;
    std::vector<double> a;
    std::vector<double> base; // B gb_n, the fading-free part of a_n
    std::vector<double> h2;
    std::vector<double> g2;

    std::size_t size() const { return a.size(); }
    double max_snr() const {
        double s = 0.0;
        for (double v : a) s += v;
        return big_g * s;
    }
};

/// M^2 C_L R^-alpha P_tx / sigma^2 with the pathloss taken at the wall center.
/// Indoor pathloss is neglected.
inline double global_gain(const Scenario& s) {
    const double m = static_cast<double>(s.m_antennas);
    return m * m * pathloss(s.bs_distance_R, s.alpha, pathloss_intercept(s)) * dbm_to_watt(s.tx_power_dbm) /
           dbm_to_watt(s.noise_power_dbm);
}

inline LinkGains assemble_gains(const Scenario& s, const LinkGeometry& g, std::vector<double> h2,
                                std::vector<double> g2) {
    LinkGains out;
    out.big_g = global_gain(s);
    if (h2.size() != g.size() || g2.size() != g.size())
        throw InvariantError("fading vectors do not match the number of sensors");
    out.a.resize(g.size());
    out.base.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        out.base[i] = s.attenuation_B * g.gb[i];
        out.a[i] = out.base[i] * h2[i] * g2[i];
    }
    out.h2 = std::move(h2);
    out.g2 = std::move(g2);
    return out;
}

inline LinkGains assemble_gains(const Scenario& s, const LinkGeometry& g) {
    auto f = scenario_fading(s, g.size());
    return assemble_gains(s, g, std::move(f.h2), std::move(f.g2));
}

/// Linear SNR for one blockage state; z_n = 1 when path n is unblocked end to end.
inline double snr_realization(const LinkGains& gains, std::span<const std::uint8_t> z) {
    if (z.size() != gains.a.size()) throw InvariantError("blockage state length does not match the gains");
    double acc = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i)
        if (z[i]) acc += gains.a[i];
    return gains.big_g * acc;
}

} // namespace o2i

#endif
