// Acceptance battery: drives the full default experiment end to end and
// checks the eleven release gates, one verdict line each. The exit status is
// the number of failed gates, so the harness shows up red if any gate fails.
//
// Budget: two full default sweeps (10,000 instances x 9 noise levels each)
// plus two single-level sweeps and the property checks. Expect several
// minutes of wall time on one core.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "canoma/channel_model.hpp"
#include "canoma/comparative_advantage.hpp"
#include "canoma/core_model.hpp"
#include "canoma/montecarlo.hpp"
#include "canoma/optimizers.hpp"
#include "canoma/reporting.hpp"
#include "canoma/rng.hpp"
#include "test_support.hpp"

using namespace canoma;
namespace fs = std::filesystem;
namespace ts = test_support;

namespace {

struct Gate {
    int passed = 0;
    int failed = 0;

    void verdict(int id, const char* name, bool ok, const std::string& detail) {
        std::printf("[%s] %02d %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
        std::fflush(stdout);
        (ok ? passed : failed) += 1;
    }
};

std::string fmt(const char* spec, ...) {
    char buf[512];
    va_list args;
    va_start(args, spec);
    std::vsnprintf(buf, sizeof buf, spec, args);
    va_end(args);
    return buf;
}

double elapsed_s(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

ExperimentSummary timed_run(const char* label, const ExperimentConfig& config) {
    std::printf("-- running %s (%d instances x %zu levels, %d workers)\n", label,
                config.n_instances, config.noise_levels_w.size(), config.threads);
    std::fflush(stdout);
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentSummary summary = run_experiment(config);
    std::printf("   done in %.1f s\n", elapsed_s(t0));
    std::fflush(stdout);
    return summary;
}

const LevelStats& level_near(const ExperimentSummary& summary, double noise_w) {
    std::size_t best = 0;
    double best_d = std::abs(std::log(summary.levels[0].noise_w) - std::log(noise_w));
    for (std::size_t i = 1; i < summary.levels.size(); ++i) {
        const double d = std::abs(std::log(summary.levels[i].noise_w) - std::log(noise_w));
        if (d < best_d) {
            best = i;
            best_d = d;
        }
    }
    return summary.levels[best];
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Relabels both users and both BSs at once. With equal weights this is an
// exact symmetry of the two-user problem, and the search grids are closed
// under it, so optimal values must agree bit for bit.
ScenarioInstance mirrored(const ScenarioInstance& inst) {
    ScenarioInstance m = inst;
    m.gains.g(0, 0) = inst.gains.g(1, 1);
    m.gains.g(0, 1) = inst.gains.g(1, 0);
    m.gains.g(1, 0) = inst.gains.g(0, 1);
    m.gains.g(1, 1) = inst.gains.g(0, 0);
    m.powers.p(0) = inst.powers.p(1);
    m.powers.p(1) = inst.powers.p(0);
    return m;
}

}  // namespace

int main() {
    std::printf("canoma acceptance battery\n");
    std::fflush(stdout);
    Gate gate;
    const auto t_start = std::chrono::steady_clock::now();

    // ---- heavy sweeps ------------------------------------------------------
    ExperimentConfig base;  // library defaults are the standard experiment
    base.threads = 2;
    const ExperimentSummary eq = timed_run("default sweep", base);
    const TrendReport trend = trend_statistics(eq);
    const LevelStats& eq_mid = level_near(eq, 5e-11);

    // Worker-count invariance: same seed, different thread count, full rerun.
    const fs::path out_root = fs::temp_directory_path() / "canoma_acceptance";
    fs::remove_all(out_root);
    write_run_outputs(eq, trend, out_root / "run_a");
    {
        ExperimentConfig other = base;
        other.threads = 5;
        const ExperimentSummary eq2 = timed_run("default sweep, second worker count", other);
        write_run_outputs(eq2, trend_statistics(eq2), out_root / "run_b");
    }

    ExperimentConfig weighted = base;
    weighted.weights_case = WeightsCase::two_to_one;
    weighted.noise_levels_w = {5e-11};
    const ExperimentSummary w21 = timed_run("weighted single-level sweep", weighted);

    ExperimentConfig dynamic_cfg = base;
    dynamic_cfg.target_kind = TargetKind::dynamic_alloc;
    dynamic_cfg.noise_levels_w = {5e-11};
    const ExperimentSummary dyn = timed_run("dynamic-target single-level sweep", dynamic_cfg);

    // ---- gate 1: match rate of the default run -----------------------------
    {
        const bool ok = std::abs(eq_mid.pct_global - 0.90) <= 0.05;
        gate.verdict(1, "default match rate", ok,
                     fmt("pct_global(5e-11 W) = %.5f, band 0.90 +/- 0.05, n = %d", eq_mid.pct_global,
                         eq_mid.n));
    }

    // ---- gate 2: weighted match rate ---------------------------------------
    {
        const double pct_w = w21.levels[0].pct_global;
        const bool band_ok = std::abs(pct_w - 0.92) <= 0.05;
        const double delta = pct_w - eq_mid.pct_global;  // paired: same seeds, same channels
        const bool paired_ok = delta >= -0.02;
        gate.verdict(2, "weighted match rate", band_ok && paired_ok,
                     fmt("pct_global = %.5f, band 0.92 +/- 0.05 %s; paired delta vs equal weights = "
                         "%+.5f, floor -0.02 %s",
                         pct_w, band_ok ? "ok" : "MISSED", delta, paired_ok ? "ok" : "MISSED"));
    }

    // ---- gate 3: edge-conditional hit rate ---------------------------------
    {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < eq.levels.size(); ++i)
            if (eq.levels[i].pct_edge_conditional < eq.levels[worst].pct_edge_conditional)
                worst = i;
        const LevelStats& l = eq.levels[worst];
        gate.verdict(3, "edge-conditional hit rate", l.pct_edge_conditional >= 0.98,
                     fmt("min over levels = %.5f at %.3g W (%d edge instances), floor 0.98",
                         l.pct_edge_conditional, l.noise_w, l.n_edge));
    }

    // ---- gate 4: value degradation -----------------------------------------
    {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < eq.levels.size(); ++i)
            if (eq.levels[i].mean_degradation_pct > eq.levels[worst].mean_degradation_pct)
                worst = i;
        const LevelStats& l = eq.levels[worst];
        gate.verdict(4, "value degradation", l.mean_degradation_pct <= 0.1,
                     fmt("worst mean relative gap = %.5f%% at %.3g W, cap 0.1%%",
                         l.mean_degradation_pct, l.noise_w));
    }

    // ---- gate 5: noise trend ------------------------------------------------
    {
        const bool ok = trend.rank_correlation > 0.0 && trend.significant_increase;
        gate.verdict(5, "noise trend", ok,
                     fmt("rank correlation = %.5f; pct(last) - pct(first) = %.5f vs 2*SE = %.5f",
                         trend.rank_correlation, trend.delta_last_first, 2.0 * trend.se_delta));
    }

    // ---- gate 6: alpha separates the classes --------------------------------
    {
        int applicable = 0;
        int separated = 0;
        for (const LevelStats& l : eq.levels) {
            if (l.n_global < 30 || l.n_subopt < 30) continue;
            ++applicable;
            if (l.alpha_global_mean > l.alpha_subopt_mean) ++separated;
        }
        const LevelStats& hi = level_near(eq, 5e-9);
        const bool sep_ok = applicable > 0 && separated == applicable;
        const bool rule_ok = hi.alpha_rule_accuracy > hi.majority_baseline_accuracy;
        gate.verdict(6, "alpha separation", sep_ok && rule_ok,
                     fmt("means separated at %d/%d applicable levels %s; rule accuracy at 5e-9 W = "
                         "%.5f vs majority baseline %.5f %s",
                         separated, applicable, sep_ok ? "ok" : "MISSED", hi.alpha_rule_accuracy,
                         hi.majority_baseline_accuracy, rule_ok ? "ok" : "MISSED"));
    }

    // ---- gate 7: split structure of the independent optimum -----------------
    {
        const auto t0 = std::chrono::steady_clock::now();
        const int k_grid = 21;
        const double step = 1.0 / (k_grid - 1);
        double worst_product = 0.0;
        int violations = 0;
        for (int rep = 0; rep < 200; ++rep) {
            ScenarioConfig scen;  // default two-BS geometry, Rayleigh fading
            scen.n_users = 2 + rep % 2;
            std::mt19937_64 rng(mix_seed(9100, static_cast<std::uint64_t>(rep)));
            const ScenarioInstance inst = generate_instance(rng, scen);
            Weights w;
            w.w = Eigen::VectorXd::Ones(scen.n_users);
            const IndependentSearchResult r =
                brute_force_independent(inst.gains, inst.powers, w, k_grid);
            const std::vector<int> order = order_users_by_advantage(inst.gains);
            for (std::size_t a = 0; a < order.size(); ++a) {
                for (std::size_t b = a + 1; b < order.size(); ++b) {
                    const double product =
                        r.f_opt.f(order[a], 1) * r.f_opt.f(order[b], 0);
                    if (product > worst_product) worst_product = product;
                    if (product > 2.0 * step) ++violations;
                }
            }
        }
        gate.verdict(7, "split structure", violations == 0,
                     fmt("200 instances (2 and 3 users), worst cross product = %.5f, cap 2/%d = "
                         "%.5f, violations = %d, %.1f s",
                         worst_product, k_grid - 1, 2.0 * step, violations, elapsed_s(t0)));
    }

    // ---- gate 8: oracle consistency ------------------------------------------
    {
        const auto t0 = std::chrono::steady_clock::now();
        std::mt19937_64 rng(mix_seed(9200, 0));
        GridSpec nested;  // equal spacing: the edge grid is a subset of the 2D boundary
        nested.points_2d = 201;
        nested.points_edge = 201;
        const Weights w = ts::weights2(1.0, 1.0);
        int sinr_mismatch = 0, edge_below = 0, negative_gap = 0, swap_mismatch = 0;
        for (int rep = 0; rep < 1000; ++rep) {
            const ChannelGains g = ts::random_gains(rng, 2);
            const NormalizedPowers p = ts::random_powers2(rng);
            const AllocationMatrix f = ts::random_alloc2_with_boundary(rng);
            for (int code = 0; code < 3; ++code) {
                const DecodingOrder order = two_user_order(code);
                const SinrVector a = limiting_sinr_general(f, g, p, order);
                const SinrVector b = limiting_sinr_two_user(f, g, p, order);
                if (a(0) != b(0) || a(1) != b(1)) ++sinr_mismatch;
            }
            const ScenarioInstance inst = ts::instance_of(g, p);
            const OptimizationResult oracle =
                grid_oracle_two_user(inst, w, nested, TargetKind::static_alloc);
            const OptimizationResult edge =
                edge_search_two_user(inst, w, nested, TargetKind::static_alloc);
            if (edge.value < oracle.value) ++edge_below;
            if (compare_results(edge, oracle).rel_gap < 0.0) ++negative_gap;
            const OptimizationResult swapped =
                grid_oracle_two_user(mirrored(inst), w, nested, TargetKind::static_alloc);
            const OptimizationResult swapped_edge =
                edge_search_two_user(mirrored(inst), w, nested, TargetKind::static_alloc);
            if (swapped.value != oracle.value || swapped_edge.value != edge.value)
                ++swap_mismatch;
        }
        const bool ok =
            sinr_mismatch == 0 && edge_below == 0 && negative_gap == 0 && swap_mismatch == 0;
        gate.verdict(8, "oracle consistency", ok,
                     fmt("1000 instances: SINR rule mismatches %d, edge minima below the oracle %d, "
                         "negative gaps %d, relabel-symmetry mismatches %d, %.1f s",
                         sinr_mismatch, edge_below, negative_gap, swap_mismatch, elapsed_s(t0)));
    }

    // ---- gate 9: steep wall at vanishing SINR --------------------------------
    {
        const ChannelGains g = ts::gains2(2.0, 1.0, 1.0, 3.0);
        const NormalizedPowers p = ts::powers2(4.0, 5.0);
        const Weights w = ts::weights2(1.0, 1.0);
        const auto phi = [&](double f11) {
            return target_independent(independent_sinr(ts::alloc2(f11, 0.0), g, p), w);
        };
        const auto slope = [&](double x) {
            const double h = x * 1e-3;
            return std::abs(phi(x + h) - phi(x - h)) / (2.0 * h);
        };
        const double steep = slope(1e-6);
        const double shallow = slope(1e-3);
        gate.verdict(9, "steep wall at vanishing SINR", steep >= 10.0 * shallow,
                     fmt("|slope| at f11 = 1e-6 is %.3e, at 1e-3 is %.3e, ratio = %.3e, floor 10",
                         steep, shallow, steep / shallow));
    }

    // ---- gate 10: dynamic target ----------------------------------------------
    {
        // (a) both completion branches agree where the users tie, and the
        // value is continuous across the switch.
        const ChannelGains g = ts::gains2(2.0, 1.0, 1.0, 2.0);
        const NormalizedPowers p = ts::powers2(1.0, 1.0);
        const Weights w = ts::weights2(1.0, 1.0);
        const DecodingOrder none = DecodingOrder::none();
        const double t_tie = 0.375;
        const auto dyn_at = [&](double t) {
            return target_dynamic_two_user(ts::alloc2(t, 1.0 - t), g, p, w, none);
        };
        const double at_tie = dyn_at(t_tie);
        const SinrVector eta = limiting_sinr_two_user(ts::alloc2(t_tie, 1.0 - t_tie), g, p, none);
        const double both_branches = 1.0 / std::log2(1.0 + eta(0));
        const bool tie_ok =
            eta(0) == eta(1) && std::abs(at_tie - both_branches) <= 1e-12 * both_branches;
        bool continuous = true;
        double worst_jump = 0.0;
        for (double d : {1e-9, 1e-10, 1e-11}) {
            const double jump = std::abs(dyn_at(t_tie + d) - dyn_at(t_tie - d));
            worst_jump = std::max(worst_jump, jump / at_tie);
            if (jump > 1e-6 * at_tie) continuous = false;
        }

        // (b) re-pointing the leftover power never hurts: dynamic <= static.
        std::mt19937_64 rng(mix_seed(9300, 0));
        int dominance_violations = 0;
        for (int rep = 0; rep < 1000; ++rep) {
            const ChannelGains gr = ts::random_gains(rng, 2);
            const NormalizedPowers pr = ts::random_powers2(rng);
            const AllocationMatrix fr = ts::random_interior_alloc2(rng);
            const Weights wr = (rep % 2 == 0) ? ts::weights2(1.0, 1.0) : ts::weights2(2.0, 1.0);
            const double v_dyn =
                best_over_sic_orders(fr, gr, pr, wr, TargetKind::dynamic_alloc).value;
            const double v_static =
                best_over_sic_orders(fr, gr, pr, wr, TargetKind::static_alloc).value;
            if (v_dyn > v_static * (1.0 + 1e-12)) ++dominance_violations;
        }

        // (c) the heuristic's match rate moves by at most 0.07 when the
        // target switches from static to dynamic.
        const double pct_dyn = dyn.levels[0].pct_global;
        const double shift = pct_dyn - eq_mid.pct_global;
        const bool near_ok = std::abs(shift) <= 0.07;
        gate.verdict(10, "dynamic target", tie_ok && continuous && dominance_violations == 0 && near_ok,
                     fmt("branch tie %s (rel jump %.1e), dominance violations %d/1000, "
                         "pct_global = %.5f vs static %.5f, |shift| = %.5f, cap 0.07 %s",
                         tie_ok && continuous ? "ok" : "MISSED", worst_jump, dominance_violations,
                         pct_dyn, eq_mid.pct_global, std::abs(shift), near_ok ? "ok" : "MISSED"));
    }

    // ---- gate 11: determinism across worker counts -----------------------------
    {
        int identical = 0;
        const char* names[] = {"fig1.csv", "fig2.csv", "fig3.csv", "fig4.csv", "fig5.csv"};
        for (const char* name : names)
            if (slurp(out_root / "run_a" / name) == slurp(out_root / "run_b" / name)) ++identical;
        // summary.json echoes the configured worker count; everything else
        // must match exactly.
        nlohmann::json sa = nlohmann::json::parse(slurp(out_root / "run_a" / "summary.json"));
        nlohmann::json sb = nlohmann::json::parse(slurp(out_root / "run_b" / "summary.json"));
        sa.at("config").erase("threads");
        sb.at("config").erase("threads");
        const bool summaries_equal = sa == sb;
        gate.verdict(11, "determinism across worker counts", identical == 5 && summaries_equal,
                     fmt("%d/5 CSVs byte-identical between 2 and 5 workers; summaries equal up to "
                         "the thread count: %s",
                         identical, summaries_equal ? "yes" : "NO"));
        fs::remove_all(out_root);
    }

    std::printf("RESULT: %d passed, %d failed, %.1f s total\n", gate.passed, gate.failed,
                elapsed_s(t_start));
    return gate.failed;
}
