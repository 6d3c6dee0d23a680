// SPDX-License-Identifier: Apache-2.0
//
// o2i-ris: coverage analysis of RIS-assisted outdoor-to-indoor mmWave links
// ------------------------------------------------------------------------
//
// Single-path reference links without the RIS wall: the BS beam going
// straight through the glass, and a simplified two-hop relay mounted on the
// wall. Neither has path diversity, so one blockage event is an outage.

#ifndef O2I_BASELINES_HPP
#define O2I_BASELINES_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>

#include "o2i/blockage_analytic.hpp"
#include "o2i/channel.hpp"
#include "o2i/coverage.hpp"
#include "o2i/parallel.hpp"
#include "o2i/rng.hpp"
#include "o2i/scenario.hpp"
#include "o2i/scene.hpp"

namespace o2i {

enum class DistanceMode { Full3D, Horizontal };

/// Two-hop relay on the wall. Hop 1 is BS -> outdoor antenna; hop 2 re-radiates
/// the hop-1 budget indoors scaled by relay_gain_db. No field has a default.
struct RelayConfig {
    double relay_outdoor_height; // m, absolute
    double relay_indoor_height;  // m, absolute
    double relay_gain_db;
};

struct BaselineConfig {
    double penetration_loss_db = 3.6; // clear glass at 28 GHz
    DistanceMode distance_mode = DistanceMode::Full3D;
    std::optional<RelayConfig> relay;
};

struct BaselineEstimate {
    McEstimate mc;
    double outage_probability = 0.0; // p_out + p_in - p_out p_in of the single path
    double snr_unblocked = 0.0;      // with the scenario's fixed fading draw
};

namespace detail {

struct SinglePath {
    double p_block = 0.0;
    double snr = 0.0;
};

inline BaselineEstimate run_single_path(const SinglePath& path, std::span<const double> thresholds,
                                        const RunOptions& run, const StreamKey& key) {
    const IndependentBlockageSampler sampler({path.p_block});
    LinkGains gains;
    gains.big_g = path.snr;
    gains.a = {1.0};
    gains.base = {1.0};
    BaselineEstimate e;
    e.mc = coverage_monte_carlo(gains, sampler, thresholds, run, key);
    e.outage_probability = path.p_block;
    e.snr_unblocked = path.snr;
    return e;
}

inline double indoor_blockage_single(const Scenario& s, double r2, double height_above_floor) {
    const auto& in = s.indoor_blockage;
    return 1.0 - los_indoor_self(in) * los_indoor_static(r2, in) * los_indoor_dynamic(r2, height_above_floor, in);
}

} // namespace detail

/// Direct through-wall link BS -> UE with a penetration loss.
inline BaselineEstimate coverage_penetration(const Scenario& s, const BaselineConfig& cfg,
                                             std::span<const double> thresholds, const RunOptions& run,
                                             const StreamKey& key) {
    if (!(cfg.penetration_loss_db >= 0.0)) throw InvariantError("penetration_loss_db must be >= 0");
    const auto g = build_geometry(s);

    // Where the direct ray crosses the wall plane.
    double crossing_height = s.wall_center_height;
    double d = s.bs_distance_R;
    if (cfg.distance_mode == DistanceMode::Full3D) {
        d = distance3d(g.bs, g.ue);
        const double frac = s.bs_distance_R / (s.bs_distance_R + s.ue_offset);
        crossing_height = g.bs.z + (g.ue.z - g.bs.z) * frac;
    }

    auto fading_eng = key.child(StreamTag::Fading).engine();
    const double h2 = s.fading == FadingMode::Deterministic ? 1.0 : draw_nakagami_power(s.nakagami_m, fading_eng);

    const double m = static_cast<double>(s.m_antennas);
    detail::SinglePath path;
    path.snr = m * m * pathloss(d, s.alpha, pathloss_intercept(s)) * db_to_linear(-cfg.penetration_loss_db) * h2 *
               dbm_to_watt(s.tx_power_dbm) / dbm_to_watt(s.noise_power_dbm);
    const double p_out = 1.0 - los_outdoor_static(s.bs_distance_R, s.outdoor_blockage);
    const double p_in = detail::indoor_blockage_single(s, s.ue_offset, crossing_height - s.ue_floor_height);
    path.p_block = combine_blockage(p_out, p_in);
    return detail::run_single_path(path, thresholds, run, key.child(StreamTag::Penetration));
}

/// Two-hop relay; end-to-end SNR is the weaker hop, outage is either hop blocked.
inline BaselineEstimate coverage_relay(const Scenario& s, const BaselineConfig& cfg, std::span<const double> thresholds,
                                       const RunOptions& run, const StreamKey& key) {
    if (!cfg.relay) throw InvariantError("relay baseline needs an explicit [relay] configuration");
    const RelayConfig& r = *cfg.relay;
    const auto g = build_geometry(s);

    const Point3 relay_out{0.0, 0.0, r.relay_outdoor_height};
    const double d1 = cfg.distance_mode == DistanceMode::Full3D ? distance3d(g.bs, relay_out) : s.bs_distance_R;

    auto fading_eng = key.child(StreamTag::Fading).engine();
    double h2 = 1.0, g2 = 1.0;
    if (s.fading == FadingMode::Nakagami) {
        h2 = draw_nakagami_power(s.nakagami_m, fading_eng);
        g2 = draw_nakagami_power(s.nakagami_m, fading_eng);
    }
    const double m = static_cast<double>(s.m_antennas);
    const double budget = m * m * pathloss(d1, s.alpha, pathloss_intercept(s)) * dbm_to_watt(s.tx_power_dbm) /
                          dbm_to_watt(s.noise_power_dbm);
    const double snr1 = budget * h2;
    const double snr2 = budget * db_to_linear(r.relay_gain_db) * g2;

    detail::SinglePath path;
    path.snr = std::min(snr1, snr2);
    const double p_out = 1.0 - los_outdoor_static(s.bs_distance_R, s.outdoor_blockage);
    const double p_in = detail::indoor_blockage_single(s, s.ue_offset, r.relay_indoor_height - s.ue_floor_height);
    path.p_block = combine_blockage(p_out, p_in);
    return detail::run_single_path(path, thresholds, run, key.child(StreamTag::Relay));
}

} // namespace o2i

#endif
