// SPDX-License-Identifier: Apache-2.0
//
// o2i-ris: coverage analysis of RIS-assisted outdoor-to-indoor mmWave links
// ------------------------------------------------------------------------

#ifndef O2I_SCENARIO_HPP
#define O2I_SCENARIO_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "o2i/errors.hpp"
#include "o2i/units.hpp"

namespace o2i {

/// Outdoor static blockers (buildings, trees). Density is stored per m^2;
/// the config file takes it per km^2.
struct OutdoorBlockageParams {
    double lambda_st_out = per_km2_to_per_m2(25.0);
    double mean_len = 10.0;
    double mean_wid = 10.0;
    double eta1 = 0.5;
};

struct IndoorBlockageParams {
    double lambda_st_in = 0.1;
    double lambda_dy_in = 0.1;
    double mean_len_in = 0.5;
    double mean_wid_in = 0.5;
    double eta2 = 0.25;
    double blocker_height_H = 2.0;
    double ue_height = 1.3;
    double mobility_speed_V = 0.5;
    double unblock_rate_mu = 1.0;
    double self_open_fraction = 1.0; // omega / Psi
};

enum class BeamTaper { RaisedCosine, Flat };
enum class FadingMode { Nakagami, Deterministic };
enum class BlockerSize { Exponential, Fixed };
enum class HeightThinning { PerRectangle, PerPath };

/// Controls for the random-rectangle blockage sampler.
struct GeometricParams {
    BlockerSize size = BlockerSize::Exponential;
    HeightThinning thinning = HeightThinning::PerRectangle;
    double window_pad_factor = 3.0; // pad = factor * max(mean_len, mean_wid)
};

/// Full experiment configuration. Defaults are the outdoor-to-indoor
/// comparison setup: 30 dBm, -110 dBm noise, alpha 4, M 64, Nakagami(3,1),
/// B 0.9, 20x20 m wall, BS 60 m from the wall, UE 10 m behind it.
struct Scenario {
    // geometry
    double bs_distance_R = 60.0;
    double bs_height = 200.0;
    double ue_floor_height = 100.0;
    double ue_offset = 10.0;
    double ue_height_above_floor = 1.3;
    double wall_width = 20.0;
    double wall_height = 20.0;
    double wall_center_height = 112.0;
    int n_sensors = 36;
    BeamTaper beam_taper = BeamTaper::RaisedCosine;

    // link budget
    double tx_power_dbm = 30.0;
    double noise_power_dbm = -110.0;
    int m_antennas = 64;
    double alpha = 4.0;
    double carrier_freq_hz = 28e9;
    std::optional<double> pathloss_intercept_db; // overrides the free-space 1 m intercept
    int nakagami_m = 3;
    FadingMode fading = FadingMode::Nakagami;
    bool redraw_fading_per_trial = false;
    double attenuation_B = 0.9;

    OutdoorBlockageParams outdoor_blockage;
    IndoorBlockageParams indoor_blockage;
    GeometricParams geometric;

    /// Replaces every end-to-end blockage probability with one value.
    std::optional<double> uniform_blockage_p;

    std::uint64_t rng_seed = 1;
};

struct Violation {
    std::string key;
    std::string message;
};

namespace detail {

inline void require_positive(std::vector<Violation>& out, const char* key, double v) {
    if (!(v > 0.0)) {
        std::ostringstream os;
        os << "must be > 0, got " << v;
        out.push_back({key, os.str()});
    }
}

inline void require_non_negative(std::vector<Violation>& out, const char* key, double v) {
    if (!(v >= 0.0)) {
        std::ostringstream os;
        os << "must be >= 0, got " << v;
        out.push_back({key, os.str()});
    }
}

inline void require_unit(std::vector<Violation>& out, const char* key, double v) {
    if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream os;
        os << "must lie in [0, 1], got " << v;
        out.push_back({key, os.str()});
    }
}

} // namespace detail

/// Height of the lowest sensor row above the UE's floor.
inline double lowest_sensor_height_above_floor(const Scenario& s) {
    const int side = isqrt_exact(std::max(s.n_sensors, 1));
    const double pitch = s.wall_height / side;
    return s.wall_center_height - s.wall_height / 2.0 + pitch / 2.0 - s.ue_floor_height;
}

/// Lists every invariant violation, keyed by `section.field`.
inline std::vector<Violation> validate(const Scenario& s) {
    using namespace detail;
    std::vector<Violation> v;

    if (s.n_sensors < 1 || !is_perfect_square(s.n_sensors))
        v.push_back({"scene.n_sensors", std::to_string(s.n_sensors) + " is not a positive perfect square"});
    require_positive(v, "scene.bs_distance_R", s.bs_distance_R);
    require_positive(v, "scene.bs_height", s.bs_height);
    require_positive(v, "scene.ue_floor_height", s.ue_floor_height);
    if (!(s.ue_offset > 0.0)) v.push_back({"scene.ue_offset", "UE must be indoors (ue_offset > 0)"});
    require_positive(v, "scene.ue_height_above_floor", s.ue_height_above_floor);
    require_positive(v, "scene.wall_width", s.wall_width);
    require_positive(v, "scene.wall_height", s.wall_height);
    require_positive(v, "scene.wall_center_height", s.wall_center_height);
    if (s.wall_center_height - s.wall_height / 2.0 < 0.0)
        v.push_back({"scene.wall_center_height", "wall extends below ground"});

    if (s.m_antennas < 1) v.push_back({"channel.m_antennas", "must be >= 1"});
    require_positive(v, "channel.alpha", s.alpha);
    require_positive(v, "channel.carrier_freq_hz", s.carrier_freq_hz);
    if (s.nakagami_m < 1) v.push_back({"channel.nakagami_m", "must be >= 1"});
    if (!(s.attenuation_B >= 0.0 && s.attenuation_B < 1.0))
        v.push_back({"channel.attenuation_B", "must lie in [0, 1)"});

    const auto& o = s.outdoor_blockage;
    require_non_negative(v, "outdoor_blockage.lambda_st_out", o.lambda_st_out);
    require_non_negative(v, "outdoor_blockage.mean_len", o.mean_len);
    require_non_negative(v, "outdoor_blockage.mean_wid", o.mean_wid);
    require_unit(v, "outdoor_blockage.eta1", o.eta1);

    const auto& i = s.indoor_blockage;
    require_non_negative(v, "indoor_blockage.lambda_st_in", i.lambda_st_in);
    require_non_negative(v, "indoor_blockage.lambda_dy_in", i.lambda_dy_in);
    require_non_negative(v, "indoor_blockage.mean_len_in", i.mean_len_in);
    require_non_negative(v, "indoor_blockage.mean_wid_in", i.mean_wid_in);
    require_unit(v, "indoor_blockage.eta2", i.eta2);
    require_non_negative(v, "indoor_blockage.blocker_height_H", i.blocker_height_H);
    require_non_negative(v, "indoor_blockage.ue_height", i.ue_height);
    require_non_negative(v, "indoor_blockage.mobility_speed_V", i.mobility_speed_V);
    require_positive(v, "indoor_blockage.unblock_rate_mu", i.unblock_rate_mu);
    require_unit(v, "indoor_blockage.self_open_fraction", i.self_open_fraction);
    if (i.ue_height != s.ue_height_above_floor)
        v.push_back({"indoor_blockage.ue_height", "must equal scene.ue_height_above_floor"});
    if (i.lambda_dy_in > 0.0) {
        if (!(i.blocker_height_H > i.ue_height))
            v.push_back({"indoor_blockage.blocker_height_H", "must exceed ue_height when dynamic blockage is enabled"});
        if (s.n_sensors >= 1 && is_perfect_square(s.n_sensors) && !(lowest_sensor_height_above_floor(s) > i.ue_height))
            v.push_back({"scene.wall_center_height", "lowest sensor row is not above the UE antenna height"});
    }

    require_positive(v, "geometric.window_pad_factor", s.geometric.window_pad_factor);
    if (s.uniform_blockage_p) require_unit(v, "blockage.uniform_p", *s.uniform_blockage_p);
    return v;
}

inline void require_valid(const Scenario& s) {
    const auto v = validate(s);
    if (v.empty()) return;
    std::string msg = "invalid scenario:";
    for (const auto& e : v) msg += " [" + e.key + ": " + e.message + "]";
    throw InvariantError(msg);
}

} // namespace o2i

#endif
