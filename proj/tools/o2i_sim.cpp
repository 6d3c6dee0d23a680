// SPDX-License-Identifier: Apache-2.0
//
// o2i-sim: command-line runner. Every subcommand writes one CSV table
// (stdout or --out) preceded by a `#` provenance line.
//
// Exit codes: 0 ok, 1 usage, 2 config parse, 3 invariant violation,
// 4 numeric instability, 5 cap exceeded, 6 I/O.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "o2i/baselines.hpp"
#include "o2i/blockage_geometric.hpp"
#include "o2i/config.hpp"
#include "o2i/coverage.hpp"
#include "o2i/csv.hpp"
#include "o2i/errors.hpp"
#include "o2i/sweep.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kInvariant = 3, kNumeric = 4, kCap = 5, kIo = 6 };

class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::uint64_t trials = 10000;
    unsigned workers = 1;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Common& c, bool with_run = true) {
    cmd->add_option("--config", c.config_path, "scenario file (defaults when omitted)");
    cmd->add_option("--set", c.overrides, "override, section.key=value (repeatable)");
    if (!with_run) return;
    cmd->add_option("--out", c.out_path, "output CSV (stdout when omitted)");
    cmd->add_option("--seed", c.seed, "RNG seed, replaces run.rng_seed");
    cmd->add_option("--trials", c.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    cmd->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
}

o2i::Config load(const Common& c) {
    o2i::Config cfg = c.config_path.empty() ? o2i::Config{} : o2i::load_config(c.config_path);
    for (const auto& o : c.overrides) o2i::apply_override(cfg, o);
    if (c.seed) cfg.scenario.rng_seed = *c.seed;
    return cfg;
}

void require_valid(const o2i::Config& cfg) {
    const auto v = o2i::validate(cfg);
    if (v.empty()) return;
    std::string msg = "invalid configuration:";
    for (const auto& x : v) msg += "\n  " + x.key + ": " + x.message;
    throw o2i::InvariantError(msg);
}

/// Buffers the table and writes it in one go, so a failed run leaves no partial file.
class Output {
public:
    explicit Output(std::string path) : path_(std::move(path)) {}
    std::ostream& stream() { return buf_; }
    void commit() {
        if (path_.empty()) {
            std::cout << buf_.str() << std::flush;
            return;
        }
        std::ofstream f(path_, std::ios::binary);
        if (!f) throw IoError("cannot open '" + path_ + "' for writing");
        f << buf_.str();
        f.flush();
        if (!f) throw IoError("write to '" + path_ + "' failed");
    }

private:
    std::string path_;
    std::ostringstream buf_;
};

using Provenance = std::vector<std::pair<std::string, std::string>>;

Provenance provenance(const std::string& command, const o2i::Config& cfg) {
    return {{"o2i-sim", command},
            {"seed", std::to_string(cfg.scenario.rng_seed)},
            {"config_hash", o2i::config_hash(cfg)}};
}

std::vector<o2i::Method> parse_methods(const std::string& name, std::size_t n_paths) {
    using o2i::Method;
    if (name == "mc") return {Method::MonteCarlo};
    if (name == "approx1") return {Method::Approx1};
    if (name == "approx2") return {Method::Approx2};
    if (name == "chernoff") return {Method::Chernoff};
    if (name == "enum") return {Method::Enumeration};
    if (name == "all") {
        std::vector<Method> m{Method::MonteCarlo, Method::Approx1, Method::Approx2, Method::Chernoff};
        if (n_paths <= o2i::kEnumerationCap) m.push_back(Method::Enumeration);
        return m;
    }
    throw CLI::ValidationError("--method", "unknown method '" + name + "'");
}

o2i::BlockageMode parse_mode(const std::string& name) {
    if (name == "independent") return o2i::BlockageMode::Independent;
    if (name == "correlated") return o2i::BlockageMode::Correlated;
    throw CLI::ValidationError("--mode", "expected independent|correlated, got '" + name + "'");
}

int run_validate(const Common& c) {
    const auto cfg = load(c);
    const auto v = o2i::validate(cfg);
    for (const auto& x : v) std::cout << x.key << ": " << x.message << '\n';
    if (v.empty()) std::cout << "ok\n";
    return v.empty() ? kOk : kInvariant;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS outdoor-to-indoor coverage simulator"};
    app.require_subcommand(1);
    Common common;

    std::string method = "all", mode = "independent", thresholds = "0:30:1";
    std::string distances = "10:100:10", axis = "outdoor", side = "outdoor", table = "pairs";
    std::vector<std::string> sweeps;
    bool dump = false;

    auto* cov = app.add_subcommand("coverage", "SNR coverage curves of the RIS link");
    add_common(cov, common);
    cov->add_option("--method", method, "mc|approx1|approx2|chernoff|enum|all");
    cov->add_option("--mode", mode, "Monte Carlo blockage source: independent|correlated");
    cov->add_option("--thresholds", thresholds, "dB grid, start:stop:step or a,b,c");

    auto* blk = app.add_subcommand("blockage", "end-to-end blockage against distance");
    add_common(blk, common);
    blk->add_option("--mode", mode, "independent|correlated|both");
    blk->add_option("--distances", distances, "distance grid in m");
    blk->add_option("--axis", axis, "outdoor (BS-wall) or indoor (wall-UE)");

    auto* cor = app.add_subcommand("correlation", "joint LoS statistics from the rectangle process");
    add_common(cor, common);
    cor->add_option("--side", side, "outdoor|indoor");
    cor->add_option("--table", table, "pairs|counts");

    auto* cmp = app.add_subcommand("compare", "RIS link against penetration and relay baselines");
    add_common(cmp, common);
    cmp->add_option("--mode", mode, "RIS Monte Carlo blockage source: independent|correlated");
    cmp->add_option("--thresholds", thresholds, "dB grid");

    auto* swp = app.add_subcommand("sweep", "coverage over a parameter grid");
    add_common(swp, common);
    swp->add_option("--sweep", sweeps, "variable=values (repeatable; outer product)")->required();
    swp->add_option("--method", method, "mc|approx1|approx2|chernoff|enum|all");
    swp->add_option("--mode", mode, "independent|correlated");
    swp->add_option("--thresholds", thresholds, "dB grid when threshold_db is not swept");

    auto* val = app.add_subcommand("validate", "list invariant violations of a scenario");
    add_common(val, common, false);
    val->add_flag("--dump", dump, "print the canonical configuration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (val->parsed()) {
            if (dump) std::cout << o2i::canonical_text(load(common));
            return run_validate(common);
        }

        const auto cfg = load(common);
        require_valid(cfg);
        const o2i::RunOptions run{common.trials, common.workers};
        const o2i::StreamKey key(cfg.scenario.rng_seed);
        Output out(common.out_path);
        o2i::csv::Writer w(out.stream());

        if (cov->parsed()) {
            const auto methods = parse_methods(method, static_cast<std::size_t>(cfg.scenario.n_sensors));
            const auto grid = o2i::parse_values(thresholds);
            const auto curve = o2i::coverage_curve(cfg.scenario, grid, methods, parse_mode(mode), run, key);
            auto prov = provenance("coverage", cfg);
            prov.insert(prov.end(), {{"trials", std::to_string(run.trials)}, {"method", method}, {"mode", mode},
                                     {"thresholds", thresholds}});
            w.provenance(prov);
            w.header({"threshold_db", "method", "coverage", "stderr", "trials"});
            for (const auto& c : curve.curves)
                for (std::size_t j = 0; j < grid.size(); ++j)
                    w.row({grid[j], c.method, c.coverage[j], c.stderr_[j], static_cast<long long>(c.trials)});
        } else if (blk->parsed()) {
            const auto grid = o2i::parse_values(distances);
            if (axis != "outdoor" && axis != "indoor")
                throw CLI::ValidationError("--axis", "expected outdoor|indoor, got '" + axis + "'");
            const auto ax = axis == "outdoor" ? o2i::DistanceAxis::Outdoor : o2i::DistanceAxis::Indoor;
            std::vector<std::pair<std::string, o2i::BlockageMode>> modes;
            if (mode == "both" || mode == "independent") modes.emplace_back("independent", o2i::BlockageMode::Independent);
            if (mode == "both" || mode == "correlated") modes.emplace_back("correlated", o2i::BlockageMode::Correlated);
            if (modes.empty()) throw CLI::ValidationError("--mode", "expected independent|correlated|both");
            auto prov = provenance("blockage", cfg);
            prov.insert(prov.end(), {{"trials", std::to_string(run.trials)}, {"mode", mode}, {"axis", axis},
                                     {"distances", distances}});
            w.provenance(prov);
            w.header({"distance_m", "mode", "all_blocked", "all_blocked_stderr", "mean_path_blocked",
                      "mean_path_stderr", "trials"});
            for (const auto& [name, m] : modes) {
                const auto pts = o2i::end_to_end_blockage_curve(cfg.scenario, grid, run, m,
                                                                key.child(o2i::StreamTag::Curve), ax);
                for (const auto& p : pts)
                    w.row({p.distance, name, p.all_blocked, p.all_blocked_stderr, p.mean_path_blocked,
                           p.mean_path_stderr, static_cast<long long>(p.trials)});
            }
        } else if (cor->parsed()) {
            if (side != "outdoor" && side != "indoor")
                throw CLI::ValidationError("--side", "expected outdoor|indoor, got '" + side + "'");
            if (table != "pairs" && table != "counts")
                throw CLI::ValidationError("--table", "expected pairs|counts, got '" + table + "'");
            const auto sel = side == "outdoor" ? o2i::SegmentSelector::Outdoor : o2i::SegmentSelector::Indoor;
            const auto g = o2i::build_geometry(cfg.scenario);
            const auto proc = o2i::make_process(cfg.scenario, g, sel);
            const auto st = o2i::estimate_joint_stats(proc, g, sel, run, key.child(o2i::StreamTag::GeometricTrials));
            auto prov = provenance("correlation", cfg);
            prov.insert(prov.end(), {{"trials", std::to_string(run.trials)}, {"side", side}, {"table", table}});
            w.provenance(prov);
            if (table == "pairs") {
                w.header({"sensor_m", "sensor_n", "separation_rad", "los_m", "los_n", "joint_los", "joint_los_stderr",
                          "rho"});
                for (std::size_t a = 0; a < st.n; ++a)
                    for (std::size_t b = a + 1; b < st.n; ++b)
                        w.row({static_cast<long long>(a), static_cast<long long>(b), o2i::separation_angle(g, sel, a, b),
                               st.marginal_los[a], st.marginal_los[b], st.joint(a, b), st.joint_stderr(a, b),
                               st.rho_defined(a, b) ? o2i::csv::Cell{st.rho(a, b)} : o2i::csv::Cell{std::string()}});
            } else {
                w.header({"blocked_count", "probability"});
                for (std::size_t k = 0; k <= st.n; ++k)
                    w.row({static_cast<long long>(k), st.joint_block_count_pmf[k]});
            }
        } else if (cmp->parsed()) {
            const auto grid = o2i::parse_values(thresholds);
            const auto t_lin = o2i::thresholds_linear(grid);
            const std::vector<o2i::Method> mc{o2i::Method::MonteCarlo};
            const auto ris = o2i::coverage_curve(cfg.scenario, grid, mc, parse_mode(mode), run, key);
            const auto pen = o2i::coverage_penetration(cfg.scenario, cfg.baseline, t_lin, run, key);
            std::optional<o2i::BaselineEstimate> relay;
            if (cfg.baseline.relay) relay = o2i::coverage_relay(cfg.scenario, cfg.baseline, t_lin, run, key);
            auto prov = provenance("compare", cfg);
            prov.insert(prov.end(), {{"trials", std::to_string(run.trials)}, {"mode", mode}, {"thresholds", thresholds},
                                     {"relay", relay ? "on" : "off"}});
            w.provenance(prov);
            w.header({"threshold_db", "model", "coverage", "stderr", "trials"});
            auto emit = [&](const char* model, const std::vector<double>& c, const std::vector<double>& se,
                            std::uint64_t n) {
                for (std::size_t j = 0; j < grid.size(); ++j)
                    w.row({grid[j], std::string(model), c[j], se[j], static_cast<long long>(n)});
            };
            emit("ris", ris.curves[0].coverage, ris.curves[0].stderr_, ris.curves[0].trials);
            emit("penetration", pen.mc.coverage, pen.mc.stderr_, pen.mc.trials);
            if (relay) emit("relay", relay->mc.coverage, relay->mc.stderr_, relay->mc.trials);
        } else if (swp->parsed()) {
            std::vector<o2i::SweepSpec> axes;
            std::size_t max_n = static_cast<std::size_t>(cfg.scenario.n_sensors);
            for (const auto& s : sweeps) {
                axes.push_back(o2i::parse_sweep(s));
                if (axes.back().variable == o2i::SweepVariable::NSensors)
                    for (double v : axes.back().values) max_n = std::max(max_n, static_cast<std::size_t>(v));
            }
            const auto methods = parse_methods(method, max_n);
            const auto rows = o2i::run_sweep(cfg.scenario, axes, o2i::parse_values(thresholds), methods,
                                             parse_mode(mode), run, key);
            auto prov = provenance("sweep", cfg);
            prov.insert(prov.end(), {{"trials", std::to_string(run.trials)}, {"method", method}, {"mode", mode},
                                     {"thresholds", thresholds}});
            for (const auto& s : sweeps) prov.emplace_back("sweep", s);
            w.provenance(prov);
            std::vector<std::string> names;
            for (const auto& a : axes)
                if (a.variable != o2i::SweepVariable::ThresholdDb) names.emplace_back(o2i::sweep_variable_name(a.variable));
            std::string header;
            for (const auto& n : names) header += n + ",";
            out.stream() << header << "threshold_db,method,coverage,stderr,trials\n";
            for (const auto& r : rows) {
                std::vector<o2i::csv::Cell> cells(r.point.begin(), r.point.end());
                cells.insert(cells.end(), {r.threshold_db, r.method, r.coverage, r.stderr_,
                                           static_cast<long long>(r.trials)});
                w.row(cells);
            }
        }
        out.commit();
        return kOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const o2i::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const o2i::InvariantError& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return kInvariant;
    } catch (const o2i::NumericInstabilityError& e) {
        std::cerr << "numeric instability: " << e.what() << '\n';
        return kNumeric;
    } catch (const o2i::CapExceededError& e) {
        std::cerr << "cap exceeded: " << e.what() << '\n';
        return kCap;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    }
}
