// SPDX-License-Identifier: Apache-2.0
//
// o2i-ris: coverage analysis of RIS-assisted outdoor-to-indoor mmWave links
// ------------------------------------------------------------------------
//
// Coverage curves for a whole scenario and parameter sweeps over them.

#ifndef O2I_SWEEP_HPP
#define O2I_SWEEP_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "o2i/blockage_analytic.hpp"
#include "o2i/blockage_geometric.hpp"
#include "o2i/channel.hpp"
#include "o2i/coverage.hpp"
#include "o2i/errors.hpp"
#include "o2i/parallel.hpp"
#include "o2i/rng.hpp"
#include "o2i/scenario.hpp"
#include "o2i/scene.hpp"
#include "o2i/units.hpp"

namespace o2i {

/// Coverage of the RIS link for each method on a dB threshold grid.
/// `mode` picks the Monte Carlo blockage source; the analytic methods always
/// use the independent per-path probabilities.
inline CoverageCurve coverage_curve(const Scenario& s, std::span<const double> thresholds_db,
                                    std::span<const Method> methods, BlockageMode mode, const RunOptions& run,
                                    const StreamKey& key) {
    require_valid(s);
    const auto g = build_geometry(s);
    const auto gains = assemble_gains(s, g);
    const auto p = effective_blockage(end_to_end_blockage(g, s), s);
    const auto t_lin = thresholds_linear(thresholds_db);

    CoverageCurve out;
    out.thresholds_db.assign(thresholds_db.begin(), thresholds_db.end());
    const auto m = moments(gains, p);
    for (Method method : methods) {
        MethodCurve c;
        c.method = method_name(method);
        c.stderr_.assign(t_lin.size(), 0.0);
        switch (method) {
        case Method::MonteCarlo: {
            std::optional<FadingRedraw> redraw;
            if (s.redraw_fading_per_trial && s.fading == FadingMode::Nakagami) redraw = FadingRedraw{s.nakagami_m};
            McEstimate e;
            const auto mc_key = key.child(StreamTag::CoverageTrials);
            if (mode == BlockageMode::Correlated) {
                if (s.uniform_blockage_p)
                    throw InvariantError("correlated blockage cannot be combined with blockage.uniform_p");
                e = coverage_monte_carlo(gains, CorrelatedBlockageSampler(s, g), t_lin, run,
                                         key.child(StreamTag::GeometricTrials), redraw);
            } else {
                e = coverage_monte_carlo(gains, IndependentBlockageSampler(p), t_lin, run, mc_key, redraw);
            }
            c.coverage = std::move(e.coverage);
            c.stderr_ = std::move(e.stderr_);
            c.trials = e.trials;
            break;
        }
        case Method::Approx1:
            for (double t : t_lin) c.coverage.push_back(coverage_gaussian(m, t));
            break;
        case Method::Approx2: {
            const Approx2 a(gains, p);
            for (double t : t_lin) c.coverage.push_back(a(t));
            break;
        }
        case Method::Chernoff:
            for (double t : t_lin) c.coverage.push_back(coverage_chernoff(m, t));
            break;
        case Method::Enumeration:
            c.coverage = coverage_enumeration(gains, p, t_lin);
            break;
        }
        out.curves.push_back(std::move(c));
    }
    return out;
}

enum class SweepVariable { ThresholdDb, LambdaStIn, LambdaStOut, LambdaDyIn, NSensors, DistanceR, UniformP };

inline const char* sweep_variable_name(SweepVariable v) {
    switch (v) {
    case SweepVariable::ThresholdDb: return "threshold_db";
    case SweepVariable::LambdaStIn: return "lambda_st_in";
    case SweepVariable::LambdaStOut: return "lambda_st_out";
    case SweepVariable::LambdaDyIn: return "lambda_dy_in";
    case SweepVariable::NSensors: return "n_sensors";
    case SweepVariable::DistanceR: return "distance_R";
    case SweepVariable::UniformP: return "uniform_p";
    }
    return "?";
}

inline SweepVariable parse_sweep_variable(const std::string& name) {
    for (auto v : {SweepVariable::ThresholdDb, SweepVariable::LambdaStIn, SweepVariable::LambdaStOut,
                   SweepVariable::LambdaDyIn, SweepVariable::NSensors, SweepVariable::DistanceR,
                   SweepVariable::UniformP})
        if (name == sweep_variable_name(v)) return v;
    throw ConfigError("unknown sweep variable '" + name + "'");
}

/// One swept axis. lambda_st_out values are in blockers per km^2, the other
/// densities per m^2.
struct SweepSpec {
    SweepVariable variable = SweepVariable::ThresholdDb;
    std::vector<double> values;
};

/// `start:stop:step` (inclusive, tolerant to rounding) or `v1,v2,...`.
inline std::vector<double> parse_values(const std::string& text) {
    auto num = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw ConfigError("bad number '" + s + "' in '" + text + "'");
        return v;
    };
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        const auto c1 = text.find(':');
        const auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos) throw ConfigError("range '" + text + "' must be start:stop:step");
        const double start = num(text.substr(0, c1));
        const double stop = num(text.substr(c1 + 1, c2 - c1 - 1));
        const double step = num(text.substr(c2 + 1));
        if (!(step > 0.0) || stop < start) throw ConfigError("range '" + text + "' needs step > 0 and stop >= start");
        const auto n = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9));
        for (std::int64_t i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
    } else {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto comma = text.find(',', pos);
            const auto end = comma == std::string::npos ? text.size() : comma;
            out.push_back(num(text.substr(pos, end - pos)));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    if (out.empty()) throw ConfigError("empty value list '" + text + "'");
    return out;
}

/// Parses `variable=values`.
inline SweepSpec parse_sweep(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("sweep '" + text + "' must be variable=values");
    SweepSpec spec{parse_sweep_variable(text.substr(0, eq)), parse_values(text.substr(eq + 1))};
    return spec;
}

inline void check_sweep(const SweepSpec& spec) {
    if (spec.values.empty()) throw InvariantError(std::string("sweep over ") + sweep_variable_name(spec.variable) +
                                                  " has no values");
    if (spec.variable == SweepVariable::NSensors) {
        for (double v : spec.values)
            if (v != std::floor(v) || v < 1.0 || !is_perfect_square(static_cast<std::uint64_t>(v)))
                throw InvariantError("n_sensors sweep value " + std::to_string(v) + " is not a perfect square");
    }
}

/// Applies one non-threshold sweep value to a scenario.
inline void apply_sweep_value(Scenario& s, SweepVariable v, double value) {
    switch (v) {
    case SweepVariable::ThresholdDb: break;
    case SweepVariable::LambdaStIn: s.indoor_blockage.lambda_st_in = value; break;
    case SweepVariable::LambdaStOut: s.outdoor_blockage.lambda_st_out = per_km2_to_per_m2(value); break;
    case SweepVariable::LambdaDyIn: s.indoor_blockage.lambda_dy_in = value; break;
    case SweepVariable::NSensors: s.n_sensors = static_cast<int>(value); break;
    case SweepVariable::DistanceR: s.bs_distance_R = value; break;
    case SweepVariable::UniformP: s.uniform_blockage_p = value; break;
    }
}

struct SweepRow {
    std::vector<double> point; // one value per non-threshold axis, in axis order
    double threshold_db = 0.0;
    std::string method;
    double coverage = 0.0;
    double stderr_ = 0.0;
    std::uint64_t trials = 0;
};

/// Outer product of the axes, first axis slowest. A threshold_db axis replaces
/// `thresholds_db`. Every point reuses the same random streams, so adjacent
/// points differ only through the swept parameter.
inline std::vector<SweepRow> run_sweep(const Scenario& base, std::span<const SweepSpec> axes,
                                       std::vector<double> thresholds_db, std::span<const Method> methods,
                                       BlockageMode mode, const RunOptions& run, const StreamKey& key) {
    std::vector<const SweepSpec*> params;
    for (const auto& a : axes) {
        check_sweep(a);
        if (a.variable == SweepVariable::ThresholdDb) thresholds_db = a.values;
        else params.push_back(&a);
    }
    std::vector<SweepRow> rows;
    std::vector<std::size_t> idx(params.size(), 0);
    while (true) {
        Scenario s = base;
        std::vector<double> point;
        for (std::size_t i = 0; i < params.size(); ++i) {
            const double v = params[i]->values[idx[i]];
            apply_sweep_value(s, params[i]->variable, v);
            point.push_back(v);
        }
        const auto curve = coverage_curve(s, thresholds_db, methods, mode, run, key);
        for (const auto& c : curve.curves)
            for (std::size_t j = 0; j < thresholds_db.size(); ++j)
                rows.push_back({point, thresholds_db[j], c.method, c.coverage[j], c.stderr_[j], c.trials});
        std::size_t d = params.size();
        while (d > 0) {
            --d;
            if (++idx[d] < params[d]->values.size()) break;
            idx[d] = 0;
            if (d == 0) return rows;
        }
        if (params.empty()) return rows;
    }
}

} // namespace o2i

#endif
