// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "o2i/baselines.hpp"
#include "o2i/blockage_analytic.hpp"
#include "o2i/blockage_geometric.hpp"
#include "o2i/channel.hpp"
#include "o2i/config.hpp"
#include "o2i/coverage.hpp"
#include "o2i/poisson_binomial.hpp"
#include "o2i/sweep.hpp"

using namespace o2i;

namespace {

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

Config scenario_file(const char* name) { return load_config(std::string(O2I_SCENARIO_DIR) + "/" + name); }

std::vector<double> random_p(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> p(n);
    for (auto& x : p) x = u(rng);
    return p;
}

double combined_se(double a, double b) { return std::sqrt(a * a + b * b); }

Outcome pmf_oracle() {
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        for (std::size_t n = 1; n <= 12; ++n) {
            const auto p = random_p(n, rng);
            const auto a = pmf_dft_all(p);
            const auto b = pmf_enumeration_all(p);
            for (std::size_t k = 0; k <= n; ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
        }
    }
    return {worst <= 1e-9, fmt("max |dft - enum| = %.3g", worst)};
}

Outcome pmf_normalization() {
    std::mt19937_64 rng(102);
    double worst = 0.0;
    for (std::size_t n : {64u, 256u, 1024u}) {
        for (int rep = 0; rep < 5; ++rep) {
            const auto pmf = pmf_dft_all(random_p(n, rng));
            double sum = 0.0;
            for (double v : pmf) sum += v;
            worst = std::max(worst, std::abs(sum - 1.0));
        }
    }
    return {worst <= 1e-9, fmt("max |sum - 1| = %.3g", worst)};
}

Outcome clt_agreement() {
    Scenario s;
    s.n_sensors = 64;
    const auto g = build_geometry(s);
    const auto gains = assemble_gains(s, g);
    const auto p = effective_blockage(end_to_end_blockage(g, s), s);
    const auto m = moments(gains, p);
    const double sd = std::sqrt(m.var_sigma2);
    std::vector<double> grid;
    for (int i = 0; i < 40; ++i) grid.push_back(std::max(0.0, m.mean_M - 4.0 * sd + 8.0 * sd * i / 39.0));
    const RunOptions run{100000, workers()};
    const StreamKey key = StreamKey(s.rng_seed).child(StreamTag::CoverageTrials);
    const IndependentBlockageSampler sampler(p);
    const auto mc = coverage_monte_carlo(gains, sampler, grid, run, key);
    double gap = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j)
        gap = std::max(gap, std::abs(mc.coverage[j] - coverage_gaussian(m, grid[j])));
    const double ks = ks_distance_gaussian(simulate_snr(gains, sampler, run, key), m);
    return {gap <= 0.05 && ks <= 0.05, fmt("sup gap %.4f, KS %.4f", gap, ks)};
}

Outcome density_trend() {
    const std::vector<SweepSpec> axes{{SweepVariable::LambdaStIn, {0.0, 0.05, 0.1, 0.2, 0.3}}};
    const std::vector<Method> mc{Method::MonteCarlo};
    bool ok = true;
    std::ostringstream d;
    for (const char* file : {"defaults.ini", "low_budget.ini"}) {
        const auto c = scenario_file(file);
        const auto rows = run_sweep(c.scenario, axes, {20.0}, mc, BlockageMode::Independent,
                                    RunOptions{10000, workers()}, StreamKey(c.scenario.rng_seed));
        d << file << ':';
        for (std::size_t i = 0; i < rows.size(); ++i) {
            d << ' ' << fmt("%.4f", rows[i].coverage);
            if (i > 0 && rows[i].coverage > rows[i - 1].coverage + 3.0 * combined_se(rows[i].stderr_, rows[i - 1].stderr_))
                ok = false;
        }
        d << "; ";
    }
    return {ok, d.str()};
}

Outcome sensor_count_trend() {
    const auto c = scenario_file("low_budget.ini");
    const std::vector<SweepSpec> axes{{SweepVariable::UniformP, {0.2, 0.5}}, {SweepVariable::NSensors, {9, 36, 144}}};
    const std::vector<Method> mc{Method::MonteCarlo};
    const auto rows = run_sweep(c.scenario, axes, {22.0}, mc, BlockageMode::Independent, RunOptions{10000, workers()},
                                StreamKey(c.scenario.rng_seed));
    bool ok = rows.size() == 6;
    std::ostringstream d;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i % 3 == 0) d << "p=" << rows[i].point[0] << ':';
        d << ' ' << fmt("%.4f", rows[i].coverage);
        if (i % 3 != 0) {
            const double rise = rows[i].coverage - rows[i - 1].coverage;
            if (!(rise > 3.0 * combined_se(rows[i].stderr_, rows[i - 1].stderr_))) ok = false;
        }
        if (i % 3 == 2) d << "; ";
    }
    return {ok, d.str()};
}

Outcome model_ordering() {
    const auto c = scenario_file("defaults.ini");
    std::vector<double> grid;
    for (double t = 0.0; t <= 30.0; t += 1.0) grid.push_back(t);
    const auto t_lin = thresholds_linear(grid);
    const RunOptions run{10000, workers()};
    const StreamKey key(c.scenario.rng_seed);
    const std::vector<Method> mc{Method::MonteCarlo};
    const auto ris = coverage_curve(c.scenario, grid, mc, BlockageMode::Independent, run, key).curves[0];
    const auto pen = coverage_penetration(c.scenario, c.baseline, t_lin, run, key).mc;
    const auto rel = coverage_relay(c.scenario, c.baseline, t_lin, run, key).mc;
    bool ok = true;
    double pen_gap = -1.0, rel_gap = -1.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (ris.coverage[j] + 3.0 * combined_se(ris.stderr_[j], pen.stderr_[j]) < pen.coverage[j]) ok = false;
        if (ris.coverage[j] + 3.0 * combined_se(ris.stderr_[j], rel.stderr_[j]) < rel.coverage[j]) ok = false;
        pen_gap = std::max(pen_gap, pen.coverage[j] - ris.coverage[j]);
        rel_gap = std::max(rel_gap, rel.coverage[j] - ris.coverage[j]);
    }
    return {ok, fmt("max(pen - ris) %.4f, max(relay - ris) %.4f", pen_gap, rel_gap)};
}

Outcome blockage_monotone() {
    const Scenario s;
    std::vector<double> d;
    for (double x = 10.0; x <= 100.0; x += 10.0) d.push_back(x);
    const RunOptions run{20000, workers()};
    const StreamKey key = StreamKey(s.rng_seed).child(StreamTag::Curve);
    const auto ind = end_to_end_blockage_curve(s, d, run, BlockageMode::Independent, key);
    const auto cor = end_to_end_blockage_curve(s, d, run, BlockageMode::Correlated, key);
    bool ok = true;
    for (std::size_t i = 1; i < d.size(); ++i) {
        const double se = combined_se(cor[i].all_blocked_stderr, cor[i - 1].all_blocked_stderr);
        if (ind[i].all_blocked < ind[i - 1].all_blocked) ok = false;
        if (ind[i].mean_path_blocked < ind[i - 1].mean_path_blocked) ok = false;
        if (cor[i].all_blocked < cor[i - 1].all_blocked - 3.0 * se) ok = false;
        const double gap_i = cor[i].all_blocked - ind[i].all_blocked;
        const double gap_prev = cor[i - 1].all_blocked - ind[i - 1].all_blocked;
        if (gap_i < gap_prev - 3.0 * se) ok = false;
    }
    return {ok, fmt("P(all blocked) correlated %.4f -> %.4f", cor.front().all_blocked, cor.back().all_blocked) +
                    fmt(", independent %.3g -> %.3g", ind.front().all_blocked, ind.back().all_blocked)};
}

Outcome positive_association() {
    const Scenario s;
    const auto g = build_geometry(s);
    const auto proc = make_process(s, g, SegmentSelector::Outdoor);
    const auto st = estimate_joint_stats(proc, g, SegmentSelector::Outdoor, RunOptions{100000, workers()},
                                         StreamKey(s.rng_seed).child(StreamTag::GeometricTrials));
    bool ok = true;
    for (std::size_t a = 0; a < st.n; ++a)
        for (std::size_t b = a + 1; b < st.n; ++b)
            if (st.joint(a, b) < st.marginal_los[a] * st.marginal_los[b] - 3.0 * st.joint_stderr(a, b)) ok = false;
    double lo = 1.0, hi = 0.0;
    int groups = 0;
    for (std::size_t k = 2; k < st.joint_block_count_pmf.size(); ++k) {
        const double v = st.joint_block_count_pmf[k];
        if (v == 0.0) continue;
        ++groups;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (groups == 0 || lo < 1e-3 || hi > 1e-2) ok = false;
    return {ok, std::to_string(groups) + " group sizes, joint blockage in " + fmt("[%.3g, %.3g]", lo, hi)};
}

Outcome chernoff_validity() {
    std::mt19937_64 rng(109);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::array<int, 6> sizes{4, 9, 16, 36, 64, 144};
    int violations = 0, points = 0;
    for (int rep = 0; rep < 20; ++rep) {
        Scenario s;
        s.n_sensors = sizes[rep % sizes.size()];
        s.bs_distance_R = 20.0 + 80.0 * u(rng);
        s.outdoor_blockage.lambda_st_out = per_km2_to_per_m2(200.0 * u(rng));
        s.indoor_blockage.lambda_st_in = 0.3 * u(rng);
        s.indoor_blockage.lambda_dy_in = 0.3 * u(rng);
        s.indoor_blockage.self_open_fraction = 0.8 + 0.2 * u(rng);
        s.nakagami_m = 1 + static_cast<int>(5.0 * u(rng));
        s.pathloss_intercept_db = -100.0 + 40.0 * u(rng);
        s.rng_seed = 1000 + rep;
        const auto g = build_geometry(s);
        const auto gains = assemble_gains(s, g);
        const auto p = effective_blockage(end_to_end_blockage(g, s), s);
        const auto m = moments(gains, p);
        std::vector<double> grid;
        for (int i = 1; i <= 20; ++i) grid.push_back(m.mean_M + (gains.max_snr() - m.mean_M) * i / 21.0);
        const auto mc = coverage_monte_carlo(gains, IndependentBlockageSampler(p), grid, RunOptions{10000, workers()},
                                             StreamKey(s.rng_seed).child(StreamTag::CoverageTrials));
        for (std::size_t j = 0; j < grid.size(); ++j) {
            ++points;
            if (coverage_chernoff(m, grid[j]) + 3.0 * mc.stderr_[j] < mc.coverage[j]) ++violations;
        }
    }
    return {violations == 0, std::to_string(violations) + " violations in " + std::to_string(points) + " points"};
}

Outcome spot_values() {
    OutdoorBlockageParams out;
    out.lambda_st_out = per_km2_to_per_m2(25.0);
    out.mean_len = out.mean_wid = 10.0;
    out.eta1 = 0.5;
    const double los_out = los_outdoor_static(60.0, out);
    IndoorBlockageParams in;
    in.lambda_dy_in = 0.1;
    in.mobility_speed_V = 0.5;
    in.blocker_height_H = 2.0;
    in.ue_height = 1.3;
    in.unblock_rate_mu = 1.0;
    const double los_dy = los_indoor_dynamic(10.0, 2.5, in);
    const bool ok = std::abs(los_out - 0.98926) <= 1e-5 && std::abs(los_dy - 0.84340) <= 1e-5;
    return {ok, fmt("outdoor %.6f, dynamic %.6f", los_out, los_dy)};
}

std::string run_cli(const std::string& args, int& status) {
    const std::string cmd = std::string(O2I_SIM_PATH) + " " + args;
    std::string out;
    status = -1;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return out;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int st = pclose(pipe);
    status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return out;
}

Outcome determinism() {
    const std::string cfg = std::string(" --config ") + O2I_SCENARIO_DIR + "/defaults.ini --seed 4242";
    const std::vector<std::string> cmds{
        "coverage --method all --set scene.n_sensors=16 --trials 20000",
        "coverage --method mc --mode correlated --trials 5000",
        "blockage --mode both --trials 5000",
        "correlation --table pairs --trials 5000",
        "correlation --side indoor --table counts --trials 5000",
        "compare --trials 20000",
        "sweep --sweep uniform_p=0.2,0.5 --sweep n_sensors=9,36 --method mc --thresholds 22 --trials 5000"};
    int mismatches = 0, failures = 0;
    for (const auto& c : cmds) {
        int s1 = 0, s2 = 0, s3 = 0;
        const auto a = run_cli(c + cfg + " --workers 1", s1);
        const auto b = run_cli(c + cfg + " --workers 4", s2);
        const auto d = run_cli(c + cfg + " --workers 7", s3);
        if (s1 != 0 || s2 != 0 || s3 != 0 || a.empty()) ++failures;
        if (a != b || a != d) ++mismatches;
    }
    return {mismatches == 0 && failures == 0, std::to_string(cmds.size()) + " commands, " + std::to_string(mismatches) +
                                                  " mismatches, " + std::to_string(failures) + " failed runs"};
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> check;
        double time_limit_s; // 0 = none
    };
    const std::vector<Criterion> criteria{
        {"pmf-oracle-equivalence", pmf_oracle, 10.0},
        {"pmf-normalization", pmf_normalization, 5.0},
        {"gaussian-agreement", clt_agreement, 60.0},
        {"indoor-density-trend", density_trend, 0.0},
        {"sensor-count-trend", sensor_count_trend, 0.0},
        {"model-ordering", model_ordering, 0.0},
        {"blockage-distance-monotone", blockage_monotone, 0.0},
        {"positive-association", positive_association, 0.0},
        {"chernoff-validity", chernoff_validity, 0.0},
        {"closed-form-spot-values", spot_values, 0.0},
        {"cli-determinism", determinism, 0.0},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0.0 && secs >= c.time_limit_s) {
            o.pass = false;
            o.detail += fmt(" (over the %.0f s limit)", c.time_limit_s);
        }
        if (!o.pass) ++failed;
        std::printf("%s %2zu %-28s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
