// SPDX-License-Identifier: Apache-2.0
//
// o2i-ris: coverage analysis of RIS-assisted outdoor-to-indoor mmWave links
// ------------------------------------------------------------------------
//
// Deployment geometry. The wall lies in the x-z plane (y = 0) centered on
// x = 0; the BS stands outdoors at (0, -R, bs_height) and the UE indoors at
// (0, ue_offset, ue_floor_height + ue_height_above_floor). Link distances
// are measured in the horizontal plane.

#ifndef O2I_SCENE_HPP
#define O2I_SCENE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "o2i/errors.hpp"
#include "o2i/scenario.hpp"
#include "o2i/units.hpp"

namespace o2i {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline double horizontal_distance(const Point3& a, const Point3& b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline double distance3d(const Point3& a, const Point3& b) {
    return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}
inline Point2 ground(const Point3& p) { return {p.x, p.y}; }

/// Angular offset of a sensor from the BS boresight (which targets the wall center).
struct AngleOffset {
    double azimuth = 0.0;   // rad
    double elevation = 0.0; // rad, positive = above the boresight
};

/// Largest offsets reached on the wall boundary, used to normalize the taper.
struct AngleExtent {
    double azimuth = 0.0;
    double elevation_up = 0.0;
    double elevation_down = 0.0;
};

inline constexpr double kBeamEdgeMargin = 1e-6;

/// Raised-cosine taper of the transmit beam over the wall: 1 at the wall
/// center, 0.5 + 1e-6 at the corners of the wall, non-increasing outward.
inline double beam_gain(const AngleOffset& off, const AngleExtent& ext) {
    auto ratio = [](double v, double lim) { return lim > 0.0 ? std::abs(v) / lim : 0.0; };
    const double ua = ratio(off.azimuth, ext.azimuth);
    const double ue = ratio(off.elevation, off.elevation >= 0.0 ? ext.elevation_up : ext.elevation_down);
    const double u = std::min(1.0, std::sqrt((ua * ua + ue * ue) / 2.0));
    return 1.0 - (0.5 - kBeamEdgeMargin) * 0.5 * (1.0 - std::cos(kPi * u));
}

struct LinkGeometry {
    Point3 bs;
    Point3 ue;
    Point3 wall_center;
    int grid_side = 1;
    std::vector<Point3> sensor_positions;
    std::vector<double> r1; // BS -> sensor, horizontal
    std::vector<double> r2; // sensor -> UE, horizontal
    std::vector<double> gb;

    std::size_t size() const { return sensor_positions.size(); }
    /// Sensor height above the UE's floor, as consumed by the dynamic-blockage rate.
    double sensor_height_above_floor(std::size_t n, double floor_height) const {
        return sensor_positions[n].z - floor_height;
    }
};

namespace detail {

inline AngleOffset offset_from_boresight(const Point3& bs, const Point3& center, const Point3& p) {
    const double depth = center.y - bs.y;
    const double el_c = std::atan2(center.z - bs.z, std::hypot(center.x - bs.x, depth));
    return {std::atan2(p.x - bs.x, depth) - std::atan2(center.x - bs.x, depth),
            std::atan2(p.z - bs.z, std::hypot(p.x - bs.x, depth)) - el_c};
}

} // namespace detail

inline LinkGeometry build_geometry(const Scenario& s) {
    if (s.n_sensors < 1 || !is_perfect_square(s.n_sensors))
        throw InvariantError("n_sensors = " + std::to_string(s.n_sensors) + " is not a positive perfect square");
    if (!(s.ue_offset > 0.0)) throw InvariantError("UE must be indoors (ue_offset > 0)");
    if (!(s.bs_distance_R > 0.0 && s.wall_width > 0.0 && s.wall_height > 0.0))
        throw InvariantError("distances and wall dimensions must be positive");

    LinkGeometry g;
    g.bs = {0.0, -s.bs_distance_R, s.bs_height};
    g.ue = {0.0, s.ue_offset, s.ue_floor_height + s.ue_height_above_floor};
    g.wall_center = {0.0, 0.0, s.wall_center_height};
    g.grid_side = isqrt_exact(s.n_sensors);

    const int side = g.grid_side;
    const double pitch_x = s.wall_width / side;
    const double pitch_z = s.wall_height / side;
    const double x0 = -s.wall_width / 2.0;
    const double z0 = s.wall_center_height - s.wall_height / 2.0;

    AngleExtent ext;
    if (s.beam_taper == BeamTaper::RaisedCosine) {
        const double hw = s.wall_width / 2.0, hh = s.wall_height / 2.0;
        for (double fx : {-1.0, 0.0, 1.0}) {
            for (double fz : {-1.0, 0.0, 1.0}) {
                const Point3 b{fx * hw, 0.0, s.wall_center_height + fz * hh};
                const auto off = detail::offset_from_boresight(g.bs, g.wall_center, b);
                ext.azimuth = std::max(ext.azimuth, std::abs(off.azimuth));
                if (off.elevation >= 0.0) ext.elevation_up = std::max(ext.elevation_up, off.elevation);
                else ext.elevation_down = std::max(ext.elevation_down, -off.elevation);
            }
        }
    }

    const auto n = static_cast<std::size_t>(s.n_sensors);
    g.sensor_positions.reserve(n);
    g.r1.reserve(n);
    g.r2.reserve(n);
    g.gb.reserve(n);
    // Row-major over (row = height index, col = horizontal index).
    for (int row = 0; row < side; ++row) {
        for (int col = 0; col < side; ++col) {
            const Point3 p{x0 + (col + 0.5) * pitch_x, 0.0, z0 + (row + 0.5) * pitch_z};
            g.sensor_positions.push_back(p);
            g.r1.push_back(horizontal_distance(g.bs, p));
            g.r2.push_back(horizontal_distance(p, g.ue));
            g.gb.push_back(s.beam_taper == BeamTaper::Flat
                               ? 1.0
                               : beam_gain(detail::offset_from_boresight(g.bs, g.wall_center, p), ext));
        }
    }
    return g;
}

} // namespace o2i

#endif
