#include "canoma/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "canoma/comparative_advantage.hpp"
#include "canoma/rng.hpp"

namespace canoma {

Weights weights_for(WeightsCase c) {
    Weights w;
    w.w = Eigen::VectorXd(2);
    switch (c) {
        case WeightsCase::equal: w.w << 1.0, 1.0; return w;
        case WeightsCase::two_to_one: w.w << 2.0, 1.0; return w;
    }
    throw std::invalid_argument("weights_for: unknown weights case");
}

std::vector<double> default_noise_levels() {
    const double decades[] = {5e-12, 5e-11, 5e-10, 5e-9, 5e-8};
    std::vector<double> levels;
    for (std::size_t k = 0; k < std::size(decades); ++k) {
        levels.push_back(decades[k]);
        if (k + 1 < std::size(decades)) levels.push_back(std::sqrt(decades[k] * decades[k + 1]));
    }
    return levels;
}

const InstanceRecord& ExperimentSummary::record_at(std::size_t level, int index) const {
    const std::size_t n = static_cast<std::size_t>(config.n_instances);
    if (level >= levels.size() || index < 0 || static_cast<std::size_t>(index) >= n)
        throw std::out_of_range("record_at: level or instance index out of range");
    return records[level * n + static_cast<std::size_t>(index)];
}

InstanceRecord run_instance(const ExperimentConfig& config, int instance_index, double noise_w) {
    if (config.scenario.n_users != 2)
        throw std::invalid_argument("run_instance: the experiment pipeline is two-user");
    if (!(noise_w > 0.0)) throw std::invalid_argument("run_instance: noise_w must be positive");

    ScenarioConfig scenario = config.scenario;
    scenario.radio.noise_power_w = noise_w;

    const std::uint64_t seed = mix_seed(config.base_seed, static_cast<std::uint64_t>(instance_index));
    std::mt19937_64 rng(seed);

    InstanceRecord rec;
    rec.instance_index = instance_index;
    rec.noise_w = noise_w;
    rec.instance = generate_instance(rng, scenario, seed);
    rec.alpha = normalized_advantage(rec.instance.gains);

    const Weights w = weights_for(config.weights_case);
    rec.oracle = grid_oracle_two_user(rec.instance, w, config.grid, config.target_kind, config.log_base);
    rec.method = edge_search_two_user(rec.instance, w, config.grid, config.target_kind, config.log_base);
    rec.match = compare_results(rec.method, rec.oracle, config.match_rel_tol);
    return rec;
}

namespace {

void validate_config(const ExperimentConfig& config) {
    if (config.n_instances < 1)
        throw std::invalid_argument("experiment: n_instances must be at least 1");
    if (config.noise_levels_w.empty())
        throw std::invalid_argument("experiment: at least one noise level is required");
    for (std::size_t i = 0; i < config.noise_levels_w.size(); ++i) {
        if (!(config.noise_levels_w[i] > 0.0))
            throw std::invalid_argument("experiment: noise levels must be positive");
        if (i > 0 && !(config.noise_levels_w[i] > config.noise_levels_w[i - 1]))
            throw std::invalid_argument("experiment: noise levels must be strictly ascending");
    }
    if (config.threads < 0)
        throw std::invalid_argument("experiment: threads must be non-negative");
    validate_grid(config.grid);
    if ((config.grid.points_edge - 1) % (config.grid.points_2d - 1) != 0)
        throw std::invalid_argument(
            "experiment: points_edge - 1 must be a multiple of points_2d - 1 so the "
            "edge grid refines the oracle boundary");
    validate_geometry(config.scenario.geometry);
    validate_radio(config.scenario.radio);
    if (config.scenario.n_users != 2)
        throw std::invalid_argument("experiment: the pipeline is two-user");
    weights_for(config.weights_case);  // rejects an invalid enum value
    if (!(config.match_rel_tol >= 0.0))
        throw std::invalid_argument("experiment: match_rel_tol must be non-negative");
}

// Wilson score interval, 95% two-sided.
void wilson_interval(int successes, int n, double* low, double* high) {
    const double z = 1.959963984540054;
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = phat + z2 / (2.0 * nn);
    const double spread = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
    *low = (center - spread) / denom;
    *high = (center + spread) / denom;
}

// Mean and sample standard deviation; (NaN, NaN) for an empty set, zero
// deviation for a single observation.
void mean_sample_std(const std::vector<double>& xs, double* mean, double* stddev) {
    if (xs.empty()) {
        *mean = std::numeric_limits<double>::quiet_NaN();
        *stddev = std::numeric_limits<double>::quiet_NaN();
        return;
    }
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double m = sum / static_cast<double>(xs.size());
    *mean = m;
    if (xs.size() == 1) {
        *stddev = 0.0;
        return;
    }
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    *stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

LevelStats aggregate_level(const ExperimentConfig& config,
                           const std::vector<InstanceRecord>& records, std::size_t level) {
    const std::size_t n = static_cast<std::size_t>(config.n_instances);
    LevelStats s;
    s.noise_w = config.noise_levels_w[level];
    s.n = config.n_instances;

    std::vector<double> alpha_global, alpha_subopt;
    double gap_sum = 0.0;
    int rule_hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const InstanceRecord& r = records[level * n + i];
        const bool global = r.match.is_global;
        if (global) ++s.n_global;
        if (r.oracle.on_edge) {
            ++s.n_edge;
            if (global) ++s.n_edge_global;
        }
        gap_sum += r.match.rel_gap;
        (global ? alpha_global : alpha_subopt).push_back(r.alpha);
        if ((r.alpha > alpha_rule_threshold) == global) ++rule_hits;
    }
    s.n_subopt = s.n - s.n_global;
    s.pct_global = static_cast<double>(s.n_global) / static_cast<double>(s.n);
    wilson_interval(s.n_global, s.n, &s.ci_low, &s.ci_high);
    s.pct_edge_conditional =
        s.n_edge > 0 ? static_cast<double>(s.n_edge_global) / static_cast<double>(s.n_edge) : 1.0;
    s.mean_degradation_pct = 100.0 * gap_sum / static_cast<double>(s.n);
    mean_sample_std(alpha_global, &s.alpha_global_mean, &s.alpha_global_std);
    mean_sample_std(alpha_subopt, &s.alpha_subopt_mean, &s.alpha_subopt_std);
    s.alpha_rule_accuracy = static_cast<double>(rule_hits) / static_cast<double>(s.n);
    s.majority_baseline_accuracy = std::max(s.pct_global, 1.0 - s.pct_global);
    return s;
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& config) {
    validate_config(config);

    const std::size_t n = static_cast<std::size_t>(config.n_instances);
    const std::size_t n_levels = config.noise_levels_w.size();
    const std::size_t total = n_levels * n;

    ExperimentSummary summary;
    summary.config = config;
    summary.records.resize(total);

    std::vector<std::pair<std::size_t, std::string>> failures;
    std::mutex failures_mutex;
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const std::size_t task = next.fetch_add(1, std::memory_order_relaxed);
            if (task >= total) return;
            const std::size_t level = task / n;
            const int index = static_cast<int>(task % n);
            try {
                summary.records[task] = run_instance(config, index, config.noise_levels_w[level]);
            } catch (const std::exception& ex) {
                const std::lock_guard<std::mutex> lock(failures_mutex);
                failures.emplace_back(task, ex.what());
            }
        }
    };

    std::size_t n_threads = config.threads > 0
                                ? static_cast<std::size_t>(config.threads)
                                : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, total);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    if (!failures.empty()) {
        std::sort(failures.begin(), failures.end());
        const std::size_t task = failures.front().first;
        const int index = static_cast<int>(task % n);
        std::ostringstream msg;
        msg << "experiment: instance " << index << " (seed "
            << mix_seed(config.base_seed, static_cast<std::uint64_t>(index)) << ") at noise "
            << config.noise_levels_w[task / n] << " W failed: " << failures.front().second;
        if (failures.size() > 1) msg << " (+" << failures.size() - 1 << " more)";
        throw std::runtime_error(msg.str());
    }

    summary.levels.reserve(n_levels);
    for (std::size_t level = 0; level < n_levels; ++level)
        summary.levels.push_back(aggregate_level(config, summary.records, level));
    return summary;
}

namespace {

// Ranks 1..n with ties sharing their average rank.
std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
        const double shared = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;  // a constant series carries no trend
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TrendReport trend_statistics(const ExperimentSummary& summary) {
    const std::size_t n_levels = summary.levels.size();
    if (n_levels < 3)
        throw std::invalid_argument("trend_statistics: needs at least three noise levels");

    std::vector<double> noise(n_levels), pct(n_levels);
    for (std::size_t i = 0; i < n_levels; ++i) {
        noise[i] = summary.levels[i].noise_w;
        pct[i] = summary.levels[i].pct_global;
    }

    TrendReport t;
    t.rank_correlation = pearson(average_ranks(noise), average_ranks(pct));
    for (std::size_t i = 0; i + 1 < n_levels; ++i)
        if (summary.levels[i + 1].ci_high < summary.levels[i].ci_low)
            t.non_decreasing_within_ci = false;

    t.pct_first = pct.front();
    t.pct_last = pct.back();
    t.delta_last_first = t.pct_last - t.pct_first;
    const double n = static_cast<double>(summary.levels.front().n);
    t.se_delta = std::sqrt(t.pct_first * (1.0 - t.pct_first) / n +
                           t.pct_last * (1.0 - t.pct_last) / n);
    t.significant_increase = t.delta_last_first > 2.0 * t.se_delta;
    return t;
}

}  // namespace canoma
