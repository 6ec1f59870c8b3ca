#pragma once

#include <cstdint>
#include <vector>

#include "canoma/channel_model.hpp"
#include "canoma/optimizers.hpp"
#include "canoma/types.hpp"

namespace canoma {

enum class WeightsCase { equal, two_to_one };

Weights weights_for(WeightsCase c);

// Nine log-spaced receiver noise powers, 5e-12 W .. 5e-8 W: the named decades
// plus their geometric midpoints.
std::vector<double> default_noise_levels();

// "Predict a global match when alpha exceeds this": the decision rule whose
// accuracy is reported per noise level.
inline constexpr double alpha_rule_threshold = 0.7;

struct ExperimentConfig {
    int n_instances = 10000;
    std::uint64_t base_seed = 1;
    WeightsCase weights_case = WeightsCase::equal;
    std::vector<double> noise_levels_w = default_noise_levels();  // ascending watts
    TargetKind target_kind = TargetKind::static_alloc;
    ScenarioConfig scenario;
    GridSpec grid;
    double match_rel_tol = 1e-9;
    double log_base = 2.0;
    int threads = 0;  // 0: hardware concurrency
};

struct InstanceRecord {
    int instance_index = 0;
    double noise_w = 0.0;
    ScenarioInstance instance;
    double alpha = 0.0;
    OptimizationResult oracle;
    OptimizationResult method;
    MatchOutcome match{false, 0.0};
};

struct LevelStats {
    double noise_w = 0.0;
    int n = 0;
    int n_global = 0;       // method value matched the oracle within tolerance
    int n_subopt = 0;       // n - n_global
    int n_edge = 0;         // oracle optimum on some edge of the unit square
    int n_edge_global = 0;  // on-edge oracle optimum found by the method
    double pct_global = 0.0;
    double ci_low = 0.0, ci_high = 0.0;  // Wilson 95% interval for pct_global
    double pct_edge_conditional = 0.0;   // n_edge_global / n_edge (1 when n_edge = 0)
    double mean_degradation_pct = 0.0;   // mean rel_gap over all instances, percent
    double alpha_global_mean = 0.0, alpha_global_std = 0.0;  // NaN when the class is empty
    double alpha_subopt_mean = 0.0, alpha_subopt_std = 0.0;
    double alpha_rule_accuracy = 0.0;        // hit rate of "alpha > 0.7 => global"
    double majority_baseline_accuracy = 0.0; // max(pct_global, 1 - pct_global)
};

struct ExperimentSummary {
    ExperimentConfig config;
    std::vector<LevelStats> levels;       // one per noise level, ascending
    std::vector<InstanceRecord> records;  // level-major, instance-minor

    const InstanceRecord& record_at(std::size_t level, int index) const;
};

// One (instance, noise level) cell: the engine is seeded from
// (base_seed, instance_index) alone, so every noise level sees identical
// user positions and gains and the sweep varies only the normalized powers.
InstanceRecord run_instance(const ExperimentConfig& config, int instance_index, double noise_w);

// Full sweep. Instances are distributed over worker threads; records land in
// preassigned slots and are aggregated in index order afterwards, so the
// summary does not depend on scheduling or worker count. Any failing
// instance aborts the experiment, identified by (seed, index).
ExperimentSummary run_experiment(const ExperimentConfig& config);

struct TrendReport {
    double rank_correlation = 0.0;        // Spearman: noise level vs pct_global
    bool non_decreasing_within_ci = true; // no significant drop between adjacent levels
    double pct_first = 0.0, pct_last = 0.0;
    double delta_last_first = 0.0;
    double se_delta = 0.0;             // binomial SE of the last-minus-first difference
    bool significant_increase = false; // delta > 2 * se_delta
};

TrendReport trend_statistics(const ExperimentSummary& summary);

}  // namespace canoma
