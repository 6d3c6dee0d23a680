// SPDX-License-Identifier: Apache-2.0
//
// o2i-ris: coverage analysis of RIS-assisted outdoor-to-indoor mmWave links
// ------------------------------------------------------------------------
//
// Monte Carlo Boolean model: a Poisson number of randomly oriented
// rectangles dropped in a window of the ground plane. A path is blocked when
// a rectangle footprint meets its ground projection and the blocker is tall
// enough. Paths sharing blockers are blocked jointly, which the closed-form
// per-link probabilities cannot express.

#ifndef O2I_BLOCKAGE_GEOMETRIC_HPP
#define O2I_BLOCKAGE_GEOMETRIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "o2i/blockage_analytic.hpp"
#include "o2i/errors.hpp"
#include "o2i/parallel.hpp"
#include "o2i/rng.hpp"
#include "o2i/scenario.hpp"
#include "o2i/scene.hpp"

namespace o2i {

struct Window {
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
    double area() const { return (xmax - xmin) * (ymax - ymin); }
    bool contains(const Point2& p) const { return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax; }
};

struct Segment {
    Point2 a;
    Point2 b;
};

struct Rectangle {
    Point2 center;
    double len = 0.0;
    double wid = 0.0;
    double theta = 0.0; // orientation of the length axis, [0, pi)
    bool tall = true;   // only meaningful under per-rectangle height thinning
};

struct RectangleProcess {
    double density = 0.0; // per m^2
    double mean_len = 0.0;
    double mean_wid = 0.0;
    double height_factor_eta = 1.0;
    BlockerSize size = BlockerSize::Exponential;
    HeightThinning thinning = HeightThinning::PerRectangle;
    Window region;
};

enum class SegmentSelector { Outdoor, Indoor };

/// One realization of the blockage vector; blocked[n] = true means path n is obstructed.
struct BlockageSample {
    std::vector<bool> blocked;
};

/// Segment vs oriented rectangle in the ground plane. The segment is moved
/// into the rectangle frame and clipped against the box (Liang-Barsky).
inline bool segment_intersects_rectangle(const Segment& s, const Rectangle& r) {
    const double c = std::cos(r.theta), sn = std::sin(r.theta);
    auto local = [&](const Point2& p) {
        const double dx = p.x - r.center.x, dy = p.y - r.center.y;
        return Point2{c * dx + sn * dy, -sn * dx + c * dy};
    };
    const Point2 p0 = local(s.a), p1 = local(s.b);
    const double hx = r.len / 2.0, hy = r.wid / 2.0;
    const double dx = p1.x - p0.x, dy = p1.y - p0.y;
    double t0 = 0.0, t1 = 1.0;
    auto clip = [&](double p, double q) {
        if (p == 0.0) return q >= 0.0;
        const double t = q / p;
        if (p < 0.0) {
            if (t > t1) return false;
            t0 = std::max(t0, t);
        } else {
            if (t < t0) return false;
            t1 = std::min(t1, t);
        }
        return true;
    };
    return clip(-dx, p0.x + hx) && clip(dx, hx - p0.x) && clip(-dy, p0.y + hy) && clip(dy, hy - p0.y) && t0 <= t1;
}

/// Ground projections of the outdoor (BS -> sensor) or indoor (sensor -> UE) segments.
inline std::vector<Segment> path_segments(const LinkGeometry& g, SegmentSelector sel) {
    std::vector<Segment> out;
    out.reserve(g.size());
    for (const auto& p : g.sensor_positions) {
        if (sel == SegmentSelector::Outdoor) out.push_back({ground(g.bs), ground(p)});
        else out.push_back({ground(p), ground(g.ue)});
    }
    return out;
}

/// Bounding box of the segments padded by `pad` on every side.
inline Window padded_window(std::span<const Segment> segs, double pad) {
    Window w{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest(),
             std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
    for (const auto& s : segs) {
        for (const auto& p : {s.a, s.b}) {
            w.xmin = std::min(w.xmin, p.x);
            w.xmax = std::max(w.xmax, p.x);
            w.ymin = std::min(w.ymin, p.y);
            w.ymax = std::max(w.ymax, p.y);
        }
    }
    w.xmin -= pad;
    w.xmax += pad;
    w.ymin -= pad;
    w.ymax += pad;
    return w;
}

/// Blocker process for one side of the wall, window padded by
/// window_pad_factor * max(mean length, mean width) (at least 1 m).
inline RectangleProcess make_process(const Scenario& s, const LinkGeometry& g, SegmentSelector sel) {
    RectangleProcess p;
    if (sel == SegmentSelector::Outdoor) {
        const auto& o = s.outdoor_blockage;
        p.density = o.lambda_st_out;
        p.mean_len = o.mean_len;
        p.mean_wid = o.mean_wid;
        p.height_factor_eta = o.eta1;
    } else {
        const auto& i = s.indoor_blockage;
        p.density = i.lambda_st_in;
        p.mean_len = i.mean_len_in;
        p.mean_wid = i.mean_wid_in;
        p.height_factor_eta = i.eta2;
    }
    p.size = s.geometric.size;
    p.thinning = s.geometric.thinning;
    const auto segs = path_segments(g, sel);
    const double pad = std::max(1.0, s.geometric.window_pad_factor * std::max(p.mean_len, p.mean_wid));
    p.region = padded_window(segs, pad);
    return p;
}

inline void check_window(const RectangleProcess& proc, std::span<const Segment> segs) {
    if (!(proc.region.area() > 0.0)) throw InvariantError("blocker window has no area");
    if (!(proc.density >= 0.0)) throw InvariantError("blocker density must be non-negative");
    for (const auto& s : segs)
        if (!proc.region.contains(s.a) || !proc.region.contains(s.b))
            throw WindowTooSmallError("path segment leaves the blocker window");
}

inline std::vector<Rectangle> draw_rectangles(const RectangleProcess& proc, Engine& eng) {
    std::vector<Rectangle> out;
    const double mean_count = proc.density * proc.region.area();
    if (!(mean_count > 0.0)) return out;
    const auto count = std::poisson_distribution<std::uint64_t>(mean_count)(eng);
    out.reserve(count);
    std::uniform_real_distribution<double> ux(proc.region.xmin, proc.region.xmax);
    std::uniform_real_distribution<double> uy(proc.region.ymin, proc.region.ymax);
    std::uniform_real_distribution<double> ut(0.0, kPi);
    auto dim = [&](double mean) {
        if (proc.size == BlockerSize::Fixed || mean <= 0.0) return mean;
        return std::exponential_distribution<double>(1.0 / mean)(eng);
    };
    for (std::uint64_t i = 0; i < count; ++i) {
        Rectangle r;
        r.center = {ux(eng), uy(eng)};
        r.theta = ut(eng);
        r.len = dim(proc.mean_len);
        r.wid = dim(proc.mean_wid);
        r.tall = proc.thinning == HeightThinning::PerRectangle ? uniform01(eng) < proc.height_factor_eta : true;
        out.push_back(r);
    }
    return out;
}

/// Marks every segment crossed by a tall-enough rectangle. Under per-path
/// thinning each (rectangle, crossed segment) pair draws its own height coin.
inline void mark_blocked(std::span<const Rectangle> rects, std::span<const Segment> segs, const RectangleProcess& proc,
                         Engine& eng, std::vector<bool>& blocked) {
    blocked.assign(segs.size(), false);
    for (const auto& r : rects) {
        if (proc.thinning == HeightThinning::PerRectangle && !r.tall) continue;
        for (std::size_t n = 0; n < segs.size(); ++n) {
            if (!segment_intersects_rectangle(segs[n], r)) continue;
            if (proc.thinning == HeightThinning::PerPath && !(uniform01(eng) < proc.height_factor_eta)) continue;
            blocked[n] = true;
        }
    }
}

inline BlockageSample sample_blockage_realization(const RectangleProcess& proc, const LinkGeometry& g,
                                                  SegmentSelector sel, Engine& eng) {
    const auto segs = path_segments(g, sel);
    check_window(proc, segs);
    BlockageSample s;
    const auto rects = draw_rectangles(proc, eng);
    mark_blocked(rects, segs, proc, eng, s.blocked);
    return s;
}

/// Angle (rad) between paths m and n at their shared endpoint (BS outdoors, UE indoors).
inline double separation_angle(const LinkGeometry& g, SegmentSelector sel, std::size_t m, std::size_t n) {
    const Point2 apex = sel == SegmentSelector::Outdoor ? ground(g.bs) : ground(g.ue);
    const Point2 a = ground(g.sensor_positions[m]), b = ground(g.sensor_positions[n]);
    const double ang = std::atan2(a.y - apex.y, a.x - apex.x) - std::atan2(b.y - apex.y, b.x - apex.x);
    return std::abs(std::remainder(ang, 2.0 * kPi));
}

/// Second-order blockage statistics estimated from independent realizations.
/// `rho_defined(m, n)` is false where a marginal is 0 or 1 and the
/// correlation coefficient has a zero denominator (its entry is then NaN).
struct JointBlockageStats {
    std::size_t n = 0;
    std::uint64_t trial_count = 0;
    std::vector<double> marginal_los;
    std::vector<double> marginal_los_stderr;
    std::vector<double> pairwise_joint_los; // row-major n x n
    std::vector<double> pairwise_joint_los_stderr;
    std::vector<double> correlation_rho;
    std::vector<std::uint8_t> rho_defined_flags;
    std::vector<double> joint_block_count_pmf; // Pr[exactly k paths blocked], k = 0..n

    double joint(std::size_t a, std::size_t b) const { return pairwise_joint_los[a * n + b]; }
    double joint_stderr(std::size_t a, std::size_t b) const { return pairwise_joint_los_stderr[a * n + b]; }
    double rho(std::size_t a, std::size_t b) const { return correlation_rho[a * n + b]; }
    bool rho_defined(std::size_t a, std::size_t b) const { return rho_defined_flags[a * n + b] != 0; }
};

namespace detail {

struct JointCounts {
    std::vector<std::uint64_t> los;
    std::vector<std::uint64_t> joint;
    std::vector<std::uint64_t> blocked_hist;
};

inline JointBlockageStats finalize(const JointCounts& c, std::size_t n, std::uint64_t trials) {
    JointBlockageStats st;
    st.n = n;
    st.trial_count = trials;
    const double t = static_cast<double>(trials);
    auto se = [&](double p) { return std::sqrt(std::max(0.0, p * (1.0 - p)) / t); };
    st.marginal_los.resize(n);
    st.marginal_los_stderr.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        st.marginal_los[i] = static_cast<double>(c.los[i]) / t;
        st.marginal_los_stderr[i] = se(st.marginal_los[i]);
    }
    st.pairwise_joint_los.resize(n * n);
    st.pairwise_joint_los_stderr.resize(n * n);
    st.correlation_rho.resize(n * n);
    st.rho_defined_flags.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const std::size_t lo = std::min(a, b), hi = std::max(a, b);
            const double j = static_cast<double>(c.joint[lo * n + hi]) / t;
            st.pairwise_joint_los[a * n + b] = j;
            st.pairwise_joint_los_stderr[a * n + b] = se(j);
            const double pa = st.marginal_los[lo], pb = st.marginal_los[hi];
            const double denom = std::sqrt(pa * pb * (1.0 - pa) * (1.0 - pb));
            if (a == b) {
                st.correlation_rho[a * n + b] = 1.0;
                st.rho_defined_flags[a * n + b] = 1;
            } else if (denom > 0.0) {
                st.correlation_rho[a * n + b] = std::clamp((j - pa * pb) / denom, -1.0, 1.0);
                st.rho_defined_flags[a * n + b] = 1;
            } else {
                st.correlation_rho[a * n + b] = std::numeric_limits<double>::quiet_NaN();
                st.rho_defined_flags[a * n + b] = 0;
            }
        }
    }
    st.joint_block_count_pmf.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        st.joint_block_count_pmf[k] = static_cast<double>(c.blocked_hist[k]) / t;
    return st;
}

} // namespace detail

inline JointBlockageStats estimate_joint_stats(const RectangleProcess& proc, const LinkGeometry& g,
                                               SegmentSelector sel, const RunOptions& run, const StreamKey& key) {
    if (run.trials < 1) throw InvariantError("joint statistics need at least one trial");
    const auto segs = path_segments(g, sel);
    check_window(proc, segs);
    const std::size_t n = segs.size();

    const detail::JointCounts zero{std::vector<std::uint64_t>(n, 0), std::vector<std::uint64_t>(n * n, 0),
                                   std::vector<std::uint64_t>(n + 1, 0)};
    auto body = [&](std::uint64_t block, std::uint64_t, std::uint64_t count) {
        Engine eng = key.child(block).engine();
        detail::JointCounts c = zero;
        std::vector<bool> blocked;
        std::vector<std::size_t> open;
        for (std::uint64_t t = 0; t < count; ++t) {
            const auto rects = draw_rectangles(proc, eng);
            mark_blocked(rects, segs, proc, eng, blocked);
            open.clear();
            for (std::size_t i = 0; i < n; ++i)
                if (!blocked[i]) open.push_back(i);
            for (std::size_t ia = 0; ia < open.size(); ++ia) {
                ++c.los[open[ia]];
                for (std::size_t ib = ia; ib < open.size(); ++ib) ++c.joint[open[ia] * n + open[ib]];
            }
            ++c.blocked_hist[n - open.size()];
        }
        return c;
    };
    auto merge = [](detail::JointCounts& acc, const detail::JointCounts& c) {
        for (std::size_t i = 0; i < acc.los.size(); ++i) acc.los[i] += c.los[i];
        for (std::size_t i = 0; i < acc.joint.size(); ++i) acc.joint[i] += c.joint[i];
        for (std::size_t i = 0; i < acc.blocked_hist.size(); ++i) acc.blocked_hist[i] += c.blocked_hist[i];
    };
    const auto counts = run_blocks(run.trials, run.workers, zero, body, merge);
    return detail::finalize(counts, n, run.trials);
}

/// End-to-end blockage realizations with spatially correlated static
/// blockage: outdoor and indoor static blockers come from the rectangle
/// processes; dynamic blockage stays independent per path with its
/// stationary probability; self blockage is one coin per realization (the
/// user's body shadows all paths at once).
class CorrelatedBlockageSampler {
public:
    CorrelatedBlockageSampler(const Scenario& s, const LinkGeometry& g)
        : outdoor_(make_process(s, g, SegmentSelector::Outdoor)),
          indoor_(make_process(s, g, SegmentSelector::Indoor)),
          out_segs_(path_segments(g, SegmentSelector::Outdoor)),
          in_segs_(path_segments(g, SegmentSelector::Indoor)),
          self_open_(los_indoor_self(s.indoor_blockage)) {
        check_window(outdoor_, out_segs_);
        check_window(indoor_, in_segs_);
        los_dy_.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            los_dy_[i] = los_indoor_dynamic(g.r2[i], g.sensor_height_above_floor(i, s.ue_floor_height),
                                            s.indoor_blockage);
    }

    std::size_t size() const { return los_dy_.size(); }

    /// z_n = 1 when path n is open end to end.
    void sample(Engine& eng, std::vector<std::uint8_t>& z) const {
        const std::size_t n = los_dy_.size();
        z.assign(n, 1);
        const auto out_rects = draw_rectangles(outdoor_, eng);
        mark_blocked(out_rects, out_segs_, outdoor_, eng, scratch_);
        for (std::size_t i = 0; i < n; ++i)
            if (scratch_[i]) z[i] = 0;
        const auto in_rects = draw_rectangles(indoor_, eng);
        mark_blocked(in_rects, in_segs_, indoor_, eng, scratch_);
        for (std::size_t i = 0; i < n; ++i)
            if (scratch_[i]) z[i] = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (!(uniform01(eng) < los_dy_[i])) z[i] = 0;
        if (self_open_ < 1.0 && !(uniform01(eng) < self_open_)) std::fill(z.begin(), z.end(), 0);
    }

private:
    RectangleProcess outdoor_;
    RectangleProcess indoor_;
    std::vector<Segment> out_segs_;
    std::vector<Segment> in_segs_;
    std::vector<double> los_dy_;
    double self_open_;
    static thread_local inline std::vector<bool> scratch_;
};

enum class BlockageMode { Independent, Correlated };
enum class DistanceAxis { Outdoor, Indoor };

struct BlockageCurvePoint {
    double distance = 0.0;
    double all_blocked = 0.0;         // Pr[every path blocked at once]
    double all_blocked_stderr = 0.0;
    double mean_path_blocked = 0.0;   // average per-path blockage probability
    double mean_path_stderr = 0.0;
    std::uint64_t trials = 0;         // 0 for the closed-form mode
};

/// End-to-end blockage of the RIS link against the BS-wall (or wall-UE)
/// distance. Independent mode multiplies the closed-form per-path
/// probabilities; correlated mode samples the rectangle processes.
inline std::vector<BlockageCurvePoint> end_to_end_blockage_curve(const Scenario& base,
                                                                 std::span<const double> distances,
                                                                 const RunOptions& run, BlockageMode mode,
                                                                 const StreamKey& key,
                                                                 DistanceAxis axis = DistanceAxis::Outdoor) {
    if (!std::is_sorted(distances.begin(), distances.end()))
        throw InvariantError("distance grid must be ascending");
    std::vector<BlockageCurvePoint> out;
    for (std::size_t di = 0; di < distances.size(); ++di) {
        Scenario s = base;
        if (axis == DistanceAxis::Outdoor) s.bs_distance_R = distances[di];
        else s.ue_offset = distances[di];
        const auto g = build_geometry(s);
        BlockageCurvePoint pt;
        pt.distance = distances[di];
        if (mode == BlockageMode::Independent) {
            const auto b = end_to_end_blockage(g, s);
            double prod = 1.0, sum = 0.0;
            for (double p : b.p_e2e) {
                prod *= p;
                sum += p;
            }
            pt.all_blocked = prod;
            pt.mean_path_blocked = sum / static_cast<double>(b.size());
        } else {
            if (run.trials < 1) throw InvariantError("correlated mode needs at least one trial");
            const CorrelatedBlockageSampler sampler(s, g);
            struct Acc {
                std::uint64_t all = 0;
                double frac_sum = 0.0;
                double frac_sq = 0.0;
            };
            const auto pkey = key.child(di);
            auto body = [&](std::uint64_t block, std::uint64_t, std::uint64_t count) {
                Engine eng = pkey.child(block).engine();
                Acc a;
                std::vector<std::uint8_t> z;
                for (std::uint64_t t = 0; t < count; ++t) {
                    sampler.sample(eng, z);
                    std::size_t blocked = 0;
                    for (auto v : z) blocked += v ? 0 : 1;
                    if (blocked == z.size()) ++a.all;
                    const double f = static_cast<double>(blocked) / static_cast<double>(z.size());
                    a.frac_sum += f;
                    a.frac_sq += f * f;
                }
                return a;
            };
            auto merge = [](Acc& acc, const Acc& a) {
                acc.all += a.all;
                acc.frac_sum += a.frac_sum;
                acc.frac_sq += a.frac_sq;
            };
            const Acc acc = run_blocks(run.trials, run.workers, Acc{}, body, merge);
            const double t = static_cast<double>(run.trials);
            pt.trials = run.trials;
            pt.all_blocked = static_cast<double>(acc.all) / t;
            pt.all_blocked_stderr = std::sqrt(std::max(0.0, pt.all_blocked * (1.0 - pt.all_blocked)) / t);
            pt.mean_path_blocked = acc.frac_sum / t;
            const double var = std::max(0.0, acc.frac_sq / t - pt.mean_path_blocked * pt.mean_path_blocked);
            pt.mean_path_stderr = std::sqrt(var / t);
        }
        out.push_back(pt);
    }
    return out;
}

} // namespace o2i

#endif
