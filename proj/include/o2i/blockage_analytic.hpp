// SPDX-License-Identifier: Apache-2.0
//
// o2i-ris: coverage analysis of RIS-assisted outdoor-to-indoor mmWave links
// ------------------------------------------------------------------------
//
// Closed-form line-of-sight probabilities of independent per-link blockage.
// Blockers are homogeneous PPPs of random rectangles (static) or moving
// bodies (dynamic); probabilities are marginal per link.

#ifndef O2I_BLOCKAGE_ANALYTIC_HPP
#define O2I_BLOCKAGE_ANALYTIC_HPP

#include <cmath>
#include <string>
#include <vector>

#include "o2i/errors.hpp"
#include "o2i/scenario.hpp"
#include "o2i/scene.hpp"
#include "o2i/units.hpp"

namespace o2i {

/// LoS probability of a segment of length `distance` through a Boolean model
/// of random rectangles: exp(-eta (kappa d + upsilon)),
/// kappa = 2 lambda (E[L] + E[W]) / pi, upsilon = lambda E[L] E[W].
inline double los_static(double distance, double density, double mean_len, double mean_wid, double eta) {
    const double kappa = 2.0 * density / kPi * (mean_len + mean_wid);
    const double upsilon = density * mean_len * mean_wid;
    return std::exp(-eta * (kappa * distance + upsilon));
}

inline double los_outdoor_static(double distance_r1, const OutdoorBlockageParams& p) {
    return los_static(distance_r1, p.lambda_st_out, p.mean_len, p.mean_wid, p.eta1);
}

inline double los_indoor_static(double distance_r2, const IndoorBlockageParams& p) {
    return los_static(distance_r2, p.lambda_st_in, p.mean_len_in, p.mean_wid_in, p.eta2);
}

inline double los_indoor_self(const IndoorBlockageParams& p) { return p.self_open_fraction; }

/// Arrival rate (bl/s) of dynamic blockers crossing a link of horizontal
/// length r2 ending at a sensor `sensor_height` above the floor.
inline double dynamic_blocker_rate(double distance_r2, double sensor_height, const IndoorBlockageParams& p) {
    if (!(sensor_height > p.ue_height))
        throw DegenerateGeometryError("sensor height " + std::to_string(sensor_height) +
                                      " m is not above the UE height " + std::to_string(p.ue_height) + " m");
    return 2.0 / kPi * p.lambda_dy_in * p.mobility_speed_V * (p.blocker_height_H - p.ue_height) /
           (sensor_height - p.ue_height) * distance_r2;
}

/// Stationary unblocked probability mu / (beta + mu) of the blocked/unblocked alternation.
inline double los_indoor_dynamic(double distance_r2, double sensor_height, const IndoorBlockageParams& p) {
    const double beta = dynamic_blocker_rate(distance_r2, sensor_height, p);
    const double mu = p.unblock_rate_mu;
    if (std::isinf(mu)) return 1.0;
    return mu / (beta + mu);
}

inline double combine_blockage(double p_out, double p_in) { return p_out + p_in - p_out * p_in; }

/// Poisson probability of exactly `count` blockers in `area` at `density`.
inline double poisson_count_pmf(double density, double area, int count) {
    if (count < 0) return 0.0;
    const double mean = density * area;
    if (mean == 0.0) return count == 0 ? 1.0 : 0.0;
    return std::exp(count * std::log(mean) - mean - std::lgamma(count + 1.0));
}

struct LinkBlockage {
    std::vector<double> p_out;
    std::vector<double> p_in;
    std::vector<double> p_e2e;
    // LoS components of the indoor segment
    std::vector<double> los_self;
    std::vector<double> los_st_in;
    std::vector<double> los_dy_in;

    std::size_t size() const { return p_e2e.size(); }
};

inline LinkBlockage end_to_end_blockage(const LinkGeometry& g, const Scenario& s) {
    const auto n = g.size();
    LinkBlockage b;
    b.p_out.resize(n);
    b.p_in.resize(n);
    b.p_e2e.resize(n);
    b.los_self.resize(n);
    b.los_st_in.resize(n);
    b.los_dy_in.resize(n);
    const auto& in = s.indoor_blockage;
    for (std::size_t i = 0; i < n; ++i) {
        b.p_out[i] = 1.0 - los_outdoor_static(g.r1[i], s.outdoor_blockage);
        b.los_self[i] = los_indoor_self(in);
        b.los_st_in[i] = los_indoor_static(g.r2[i], in);
        b.los_dy_in[i] = los_indoor_dynamic(g.r2[i], g.sensor_height_above_floor(i, s.ue_floor_height), in);
        b.p_in[i] = 1.0 - b.los_self[i] * b.los_st_in[i] * b.los_dy_in[i];
        b.p_e2e[i] = combine_blockage(b.p_out[i], b.p_in[i]);
    }
    return b;
}

/// Per-link blockage vector fed to the coverage methods: the analytic one,
/// or a constant when the scenario pins a uniform probability.
inline std::vector<double> effective_blockage(const LinkBlockage& b, const Scenario& s) {
    if (s.uniform_blockage_p) return std::vector<double>(b.size(), *s.uniform_blockage_p);
    return b.p_e2e;
}

} // namespace o2i

#endif
