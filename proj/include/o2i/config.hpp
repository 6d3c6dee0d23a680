// SPDX-License-Identifier: Apache-2.0
//
// o2i-ris: coverage analysis of RIS-assisted outdoor-to-indoor mmWave links
// ------------------------------------------------------------------------
//
// Scenario files: `key = value` lines grouped under `[section]` headers,
// `#` or `;` comments. Every key mirrors a Scenario / BaselineConfig field.

#ifndef O2I_CONFIG_HPP
#define O2I_CONFIG_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "o2i/baselines.hpp"
#include "o2i/errors.hpp"
#include "o2i/scenario.hpp"

namespace o2i {

struct Config {
    Scenario scenario;
    BaselineConfig baseline;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ConfigError(key + ": expected a number, got '" + v + "'");
    return out;
}

inline long long parse_int(const std::string& key, const std::string& v) {
    long long out = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return out;
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ConfigError(key + ": expected an unsigned integer, got '" + v + "'");
    return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

template <typename E>
E parse_enum(const std::string& key, const std::string& v, std::initializer_list<std::pair<const char*, E>> names) {
    std::string allowed;
    for (const auto& [name, value] : names) {
        if (v == name) return value;
        allowed += allowed.empty() ? name : std::string("|") + name;
    }
    throw ConfigError(key + ": expected one of " + allowed + ", got '" + v + "'");
}

using Setter = std::function<void(Config&, const std::string& key, const std::string& value)>;

inline RelayConfig& relay_slot(Config& c) {
    if (!c.baseline.relay) c.baseline.relay = RelayConfig{std::numeric_limits<double>::quiet_NaN(),
                                                          std::numeric_limits<double>::quiet_NaN(),
                                                          std::numeric_limits<double>::quiet_NaN()};
    return *c.baseline.relay;
}

inline const std::map<std::string, Setter>& setters() {
    using K = const std::string&;
    static const std::map<std::string, Setter> table = {
        {"scene.bs_distance_R", [](Config& c, K k, K v) { c.scenario.bs_distance_R = parse_double(k, v); }},
        {"scene.bs_height", [](Config& c, K k, K v) { c.scenario.bs_height = parse_double(k, v); }},
        {"scene.ue_floor_height", [](Config& c, K k, K v) { c.scenario.ue_floor_height = parse_double(k, v); }},
        {"scene.ue_offset", [](Config& c, K k, K v) { c.scenario.ue_offset = parse_double(k, v); }},
        {"scene.ue_height_above_floor",
         [](Config& c, K k, K v) { c.scenario.ue_height_above_floor = parse_double(k, v); }},
        {"scene.wall_width", [](Config& c, K k, K v) { c.scenario.wall_width = parse_double(k, v); }},
        {"scene.wall_height", [](Config& c, K k, K v) { c.scenario.wall_height = parse_double(k, v); }},
        {"scene.wall_center_height", [](Config& c, K k, K v) { c.scenario.wall_center_height = parse_double(k, v); }},
        {"scene.n_sensors", [](Config& c, K k, K v) { c.scenario.n_sensors = static_cast<int>(parse_int(k, v)); }},
        {"scene.beam_taper",
         [](Config& c, K k, K v) {
             c.scenario.beam_taper =
                 parse_enum<BeamTaper>(k, v, {{"raised_cosine", BeamTaper::RaisedCosine}, {"flat", BeamTaper::Flat}});
         }},
        {"channel.tx_power_dbm", [](Config& c, K k, K v) { c.scenario.tx_power_dbm = parse_double(k, v); }},
        {"channel.noise_power_dbm", [](Config& c, K k, K v) { c.scenario.noise_power_dbm = parse_double(k, v); }},
        {"channel.m_antennas", [](Config& c, K k, K v) { c.scenario.m_antennas = static_cast<int>(parse_int(k, v)); }},
        {"channel.alpha", [](Config& c, K k, K v) { c.scenario.alpha = parse_double(k, v); }},
        {"channel.carrier_freq_hz", [](Config& c, K k, K v) { c.scenario.carrier_freq_hz = parse_double(k, v); }},
        {"channel.pathloss_intercept_db",
         [](Config& c, K k, K v) { c.scenario.pathloss_intercept_db = parse_double(k, v); }},
        {"channel.nakagami_m", [](Config& c, K k, K v) { c.scenario.nakagami_m = static_cast<int>(parse_int(k, v)); }},
        {"channel.fading",
         [](Config& c, K k, K v) {
             c.scenario.fading = parse_enum<FadingMode>(
                 k, v, {{"nakagami", FadingMode::Nakagami}, {"deterministic", FadingMode::Deterministic}});
         }},
        {"channel.redraw_fading_per_trial",
         [](Config& c, K k, K v) { c.scenario.redraw_fading_per_trial = parse_bool(k, v); }},
        {"channel.attenuation_B", [](Config& c, K k, K v) { c.scenario.attenuation_B = parse_double(k, v); }},
        {"outdoor_blockage.lambda_st_out",
         [](Config& c, K k, K v) { c.scenario.outdoor_blockage.lambda_st_out = per_km2_to_per_m2(parse_double(k, v)); }},
        {"outdoor_blockage.mean_len", [](Config& c, K k, K v) { c.scenario.outdoor_blockage.mean_len = parse_double(k, v); }},
        {"outdoor_blockage.mean_wid", [](Config& c, K k, K v) { c.scenario.outdoor_blockage.mean_wid = parse_double(k, v); }},
        {"outdoor_blockage.eta1", [](Config& c, K k, K v) { c.scenario.outdoor_blockage.eta1 = parse_double(k, v); }},
        {"indoor_blockage.lambda_st_in",
         [](Config& c, K k, K v) { c.scenario.indoor_blockage.lambda_st_in = parse_double(k, v); }},
        {"indoor_blockage.lambda_dy_in",
         [](Config& c, K k, K v) { c.scenario.indoor_blockage.lambda_dy_in = parse_double(k, v); }},
        {"indoor_blockage.mean_len_in",
         [](Config& c, K k, K v) { c.scenario.indoor_blockage.mean_len_in = parse_double(k, v); }},
        {"indoor_blockage.mean_wid_in",
         [](Config& c, K k, K v) { c.scenario.indoor_blockage.mean_wid_in = parse_double(k, v); }},
        {"indoor_blockage.eta2", [](Config& c, K k, K v) { c.scenario.indoor_blockage.eta2 = parse_double(k, v); }},
        {"indoor_blockage.blocker_height_H",
         [](Config& c, K k, K v) { c.scenario.indoor_blockage.blocker_height_H = parse_double(k, v); }},
        {"indoor_blockage.ue_height",
         [](Config& c, K k, K v) { c.scenario.indoor_blockage.ue_height = parse_double(k, v); }},
        {"indoor_blockage.mobility_speed_V",
         [](Config& c, K k, K v) { c.scenario.indoor_blockage.mobility_speed_V = parse_double(k, v); }},
        {"indoor_blockage.unblock_rate_mu",
         [](Config& c, K k, K v) { c.scenario.indoor_blockage.unblock_rate_mu = parse_double(k, v); }},
        {"indoor_blockage.self_open_fraction",
         [](Config& c, K k, K v) { c.scenario.indoor_blockage.self_open_fraction = parse_double(k, v); }},
        {"geometric.size",
         [](Config& c, K k, K v) {
             c.scenario.geometric.size = parse_enum<BlockerSize>(
                 k, v, {{"exponential", BlockerSize::Exponential}, {"fixed", BlockerSize::Fixed}});
         }},
        {"geometric.height_thinning",
         [](Config& c, K k, K v) {
             c.scenario.geometric.thinning = parse_enum<HeightThinning>(
                 k, v, {{"per_rectangle", HeightThinning::PerRectangle}, {"per_path", HeightThinning::PerPath}});
         }},
        {"geometric.window_pad_factor",
         [](Config& c, K k, K v) { c.scenario.geometric.window_pad_factor = parse_double(k, v); }},
        {"blockage.uniform_p", [](Config& c, K k, K v) { c.scenario.uniform_blockage_p = parse_double(k, v); }},
        {"baseline.penetration_loss_db",
         [](Config& c, K k, K v) { c.baseline.penetration_loss_db = parse_double(k, v); }},
        {"baseline.distance_mode",
         [](Config& c, K k, K v) {
             c.baseline.distance_mode = parse_enum<DistanceMode>(
                 k, v, {{"full3d", DistanceMode::Full3D}, {"horizontal", DistanceMode::Horizontal}});
         }},
        {"relay.relay_outdoor_height",
         [](Config& c, K k, K v) { relay_slot(c).relay_outdoor_height = parse_double(k, v); }},
        {"relay.relay_indoor_height",
         [](Config& c, K k, K v) { relay_slot(c).relay_indoor_height = parse_double(k, v); }},
        {"relay.relay_gain_db", [](Config& c, K k, K v) { relay_slot(c).relay_gain_db = parse_double(k, v); }},
        {"run.rng_seed", [](Config& c, K k, K v) { c.scenario.rng_seed = parse_u64(k, v); }},
    };
    return table;
}

} // namespace detail

/// Sets one `section.key` from its textual value.
inline void apply_setting(Config& c, const std::string& dotted_key, const std::string& value) {
    const auto& table = detail::setters();
    const auto it = table.find(dotted_key);
    if (it == table.end()) throw ConfigError("unknown key '" + dotted_key + "'");
    it->second(c, dotted_key, detail::trim(value));
}

/// Parses a `section.key=value` override as given on the command line.
inline void apply_override(Config& c, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not of the form section.key=value");
    apply_setting(c, detail::trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

inline Config parse_config(std::istream& in) {
    Config c;
    std::string line, section;
    std::set<std::string> seen;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError("unterminated section header", line_no);
            section = detail::trim(std::string_view(t).substr(1, t.size() - 2));
            if (section.empty()) throw ConfigError("empty section name", line_no);
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
        if (section.empty()) throw ConfigError("key outside of any [section]", line_no);
        std::string value = detail::trim(std::string_view(t).substr(eq + 1));
        if (const auto hash = value.find_first_of("#;"); hash != std::string::npos) value = detail::trim(value.substr(0, hash));
        const std::string key = section + "." + detail::trim(std::string_view(t).substr(0, eq));
        if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", line_no);
        try {
            apply_setting(c, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(e.what(), line_no);
        }
    }
    if (c.baseline.relay) {
        const auto& r = *c.baseline.relay;
        for (const auto& [name, v] : {std::pair{"relay.relay_outdoor_height", r.relay_outdoor_height},
                                      std::pair{"relay.relay_indoor_height", r.relay_indoor_height},
                                      std::pair{"relay.relay_gain_db", r.relay_gain_db}})
            if (std::isnan(v)) throw ConfigError(std::string("missing key '") + name + "' in [relay]");
    }
    return c;
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    return parse_config(in);
}

/// Scenario invariants plus the baseline / relay fields.
inline std::vector<Violation> validate(const Config& c) {
    auto v = validate(c.scenario);
    if (!(c.baseline.penetration_loss_db >= 0.0))
        v.push_back({"baseline.penetration_loss_db", "must be >= 0"});
    if (c.baseline.relay) {
        const auto& r = *c.baseline.relay;
        if (!(r.relay_outdoor_height > 0.0)) v.push_back({"relay.relay_outdoor_height", "must be > 0"});
        if (!(r.relay_indoor_height - c.scenario.ue_floor_height > c.scenario.indoor_blockage.ue_height))
            v.push_back({"relay.relay_indoor_height", "must be above the UE antenna height"});
    }
    return v;
}

namespace detail {

/// Shortest decimal text that reads back to the same double.
struct Num {
    double v;
    friend std::ostream& operator<<(std::ostream& os, Num n) {
        char buf[32];
        const auto r = std::to_chars(buf, buf + sizeof buf, n.v);
        return os.write(buf, r.ptr - buf);
    }
};

} // namespace detail

/// Canonical text of the full configuration; every value printed round-trip exact.
inline std::string canonical_text(const Config& c) {
    using N = detail::Num;
    const auto& s = c.scenario;
    std::ostringstream os;
    os << "[scene]\nbs_distance_R=" << N{s.bs_distance_R} << "\nbs_height=" << N{s.bs_height}
       << "\nue_floor_height=" << N{s.ue_floor_height} << "\nue_offset=" << N{s.ue_offset}
       << "\nue_height_above_floor=" << N{s.ue_height_above_floor} << "\nwall_width=" << N{s.wall_width}
       << "\nwall_height=" << N{s.wall_height} << "\nwall_center_height=" << N{s.wall_center_height}
       << "\nn_sensors=" << s.n_sensors
       << "\nbeam_taper=" << (s.beam_taper == BeamTaper::Flat ? "flat" : "raised_cosine") << "\n";
    os << "[channel]\ntx_power_dbm=" << N{s.tx_power_dbm} << "\nnoise_power_dbm=" << N{s.noise_power_dbm}
       << "\nm_antennas=" << s.m_antennas << "\nalpha=" << N{s.alpha} << "\ncarrier_freq_hz=" << N{s.carrier_freq_hz};
    if (s.pathloss_intercept_db) os << "\npathloss_intercept_db=" << N{*s.pathloss_intercept_db};
    os << "\nnakagami_m=" << s.nakagami_m
       << "\nfading=" << (s.fading == FadingMode::Deterministic ? "deterministic" : "nakagami")
       << "\nredraw_fading_per_trial=" << (s.redraw_fading_per_trial ? "true" : "false")
       << "\nattenuation_B=" << N{s.attenuation_B} << "\n";
    const auto& o = s.outdoor_blockage;
    os << "[outdoor_blockage]\nlambda_st_out=" << N{per_m2_to_per_km2(o.lambda_st_out)} << "\nmean_len=" << N{o.mean_len}
       << "\nmean_wid=" << N{o.mean_wid} << "\neta1=" << N{o.eta1} << "\n";
    const auto& i = s.indoor_blockage;
    os << "[indoor_blockage]\nlambda_st_in=" << N{i.lambda_st_in} << "\nlambda_dy_in=" << N{i.lambda_dy_in}
       << "\nmean_len_in=" << N{i.mean_len_in} << "\nmean_wid_in=" << N{i.mean_wid_in} << "\neta2=" << N{i.eta2}
       << "\nblocker_height_H=" << N{i.blocker_height_H} << "\nue_height=" << N{i.ue_height}
       << "\nmobility_speed_V=" << N{i.mobility_speed_V} << "\nunblock_rate_mu=" << N{i.unblock_rate_mu}
       << "\nself_open_fraction=" << N{i.self_open_fraction} << "\n";
    os << "[geometric]\nsize=" << (s.geometric.size == BlockerSize::Fixed ? "fixed" : "exponential")
       << "\nheight_thinning=" << (s.geometric.thinning == HeightThinning::PerPath ? "per_path" : "per_rectangle")
       << "\nwindow_pad_factor=" << N{s.geometric.window_pad_factor} << "\n";
    if (s.uniform_blockage_p) os << "[blockage]\nuniform_p=" << N{*s.uniform_blockage_p} << "\n";
    os << "[baseline]\npenetration_loss_db=" << N{c.baseline.penetration_loss_db}
       << "\ndistance_mode=" << (c.baseline.distance_mode == DistanceMode::Horizontal ? "horizontal" : "full3d")
       << "\n";
    if (c.baseline.relay) {
        const auto& r = *c.baseline.relay;
        os << "[relay]\nrelay_outdoor_height=" << N{r.relay_outdoor_height}
           << "\nrelay_indoor_height=" << N{r.relay_indoor_height} << "\nrelay_gain_db=" << N{r.relay_gain_db} << "\n";
    }
    os << "[run]\nrng_seed=" << s.rng_seed << "\n";
    return os.str();
}

/// 64-bit FNV-1a, used to fingerprint configurations in output files.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string config_hash(const Config& c) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_text(c))));
    return buf;
}

} // namespace o2i

#endif
