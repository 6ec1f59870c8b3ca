#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "canoma/comparative_advantage.hpp"
#include "canoma/core_model.hpp"
#include "canoma/montecarlo.hpp"
#include "canoma/reporting.hpp"
#include "canoma/rng.hpp"
#include "canoma/version.hpp"

namespace {

using namespace canoma;

// "a,b,c" -> doubles; rejects empty items and trailing garbage.
std::vector<double> parse_double_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string item =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw std::runtime_error(flag + ": cannot parse number '" + item + "'");
        }
        if (used != item.size())
            throw std::runtime_error(flag + ": cannot parse number '" + item + "'");
        out.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

WeightsCase parse_weights_name(const std::string& name) {
    if (name == "equal") return WeightsCase::equal;
    if (name == "two_to_one") return WeightsCase::two_to_one;
    throw std::runtime_error("--weights: expected 'equal' or 'two_to_one'");
}

TargetKind parse_target_name(const std::string& name) {
    if (name == "static") return TargetKind::static_alloc;
    if (name == "dynamic") return TargetKind::dynamic_alloc;
    throw std::runtime_error("--target: expected 'static' or 'dynamic'");
}

struct SimArgs {
    std::string config_path;
    int instances = 0;
    std::uint64_t seed = 0;
    std::string noise, weights, grid, target;
    std::string out_dir = "out";
    int threads = 0;
};

void add_sim_options(CLI::App* sub, SimArgs& a) {
    sub->add_option("config", a.config_path, "JSON config file (defaults apply when omitted)");
    sub->add_option("--instances", a.instances, "Monte Carlo instances per noise level");
    sub->add_option("--seed", a.seed, "base seed for per-instance engine seeding");
    sub->add_option("--noise", a.noise, "comma-separated noise levels in watts, ascending");
    sub->add_option("--weights", a.weights, "'equal' or 'two_to_one'");
    sub->add_option("--grid", a.grid, "'POINTS_2D,POINTS_EDGE' search grid sizes");
    sub->add_option("--target", a.target, "'static' or 'dynamic' completion-time target");
    sub->add_option("--out-dir", a.out_dir, "output directory for CSVs, summary, manifest");
    sub->add_option("--threads", a.threads, "worker threads (0 = hardware concurrency)");
}

ExperimentConfig config_from_sim_args(const CLI::App* sub, const SimArgs& a) {
    ExperimentConfig config =
        a.config_path.empty() ? ExperimentConfig{} : load_config_file(a.config_path);
    if (sub->count("--instances")) config.n_instances = a.instances;
    if (sub->count("--seed")) config.base_seed = a.seed;
    if (sub->count("--noise")) config.noise_levels_w = parse_double_list(a.noise, "--noise");
    if (sub->count("--weights")) config.weights_case = parse_weights_name(a.weights);
    if (sub->count("--grid")) {
        const std::vector<double> g = parse_double_list(a.grid, "--grid");
        if (g.size() != 2) throw std::runtime_error("--grid: expected 'POINTS_2D,POINTS_EDGE'");
        config.grid.points_2d = static_cast<int>(g[0]);
        config.grid.points_edge = static_cast<int>(g[1]);
    }
    if (sub->count("--target")) config.target_kind = parse_target_name(a.target);
    if (sub->count("--threads")) config.threads = a.threads;
    return config;
}

int run_simulate(const CLI::App* sub, const SimArgs& a) {
    const ExperimentConfig config = config_from_sim_args(sub, a);
    const ExperimentSummary summary = run_experiment(config);

    std::optional<TrendReport> trend;
    if (summary.levels.size() >= 3) trend = trend_statistics(summary);

    std::printf("%-14s %-11s %-11s %-11s %-11s %-12s %s\n", "noise_w", "pct_global", "ci95_low",
                "ci95_high", "edge_cond", "mean_deg_pct", "n_edge");
    for (const LevelStats& l : summary.levels)
        std::printf("%-14.6g %-11.5f %-11.5f %-11.5f %-11.5f %-12.6g %d\n", l.noise_w,
                    l.pct_global, l.ci_low, l.ci_high, l.pct_edge_conditional,
                    l.mean_degradation_pct, l.n_edge);
    if (trend)
        std::printf("trend: rank_correlation=%.4f delta_last_first=%.5f (2*se=%.5f) %s\n",
                    trend->rank_correlation, trend->delta_last_first, 2.0 * trend->se_delta,
                    trend->significant_increase ? "significant increase"
                                                : "not a significant increase");

    const auto written = write_run_outputs(summary, trend, a.out_dir);
    for (const auto& p : written) std::printf("wrote %s\n", p.string().c_str());
    return 0;
}

struct InstanceArgs {
    std::string config_path;
    std::uint64_t seed = 1;
    int index = 0;
    double noise = 0.0;
    std::string gains, weights, target;
    bool as_json = false;
};

const char* yes_no(bool b) { return b ? "yes" : "no"; }

int run_instance_cmd(const CLI::App* sub, const InstanceArgs& a) {
    ExperimentConfig config =
        a.config_path.empty() ? ExperimentConfig{} : load_config_file(a.config_path);
    if (sub->count("--seed")) config.base_seed = a.seed;
    if (sub->count("--weights")) config.weights_case = parse_weights_name(a.weights);
    if (sub->count("--target")) config.target_kind = parse_target_name(a.target);
    const double noise_w =
        sub->count("--noise") ? a.noise : config.scenario.radio.noise_power_w;

    const std::uint64_t engine_seed =
        mix_seed(config.base_seed, static_cast<std::uint64_t>(a.index));

    InstanceRecord rec;
    if (sub->count("--gains")) {
        // Fixture path: the 2x2 gain matrix is injected directly and only the
        // power normalization follows the scenario config.
        const std::vector<double> g = parse_double_list(a.gains, "--gains");
        if (g.size() != 4) throw std::runtime_error("--gains: expected 'g11,g12,g21,g22'");
        rec.instance_index = a.index;
        rec.noise_w = noise_w;
        rec.instance.gains.g = Eigen::MatrixXd(2, 2);
        rec.instance.gains.g << g[0], g[1], g[2], g[3];
        rec.instance.powers.p = Eigen::VectorXd::Constant(
            2, config.scenario.radio.tx_power_per_bs_w / noise_w);
        rec.instance.seed_record = engine_seed;
        rec.alpha = normalized_advantage(rec.instance.gains);
        const Weights w = weights_for(config.weights_case);
        rec.oracle = grid_oracle_two_user(rec.instance, w, config.grid, config.target_kind,
                                          config.log_base);
        rec.method = edge_search_two_user(rec.instance, w, config.grid, config.target_kind,
                                          config.log_base);
        rec.match = compare_results(rec.method, rec.oracle, config.match_rel_tol);
    } else {
        rec = run_instance(config, a.index, noise_w);
    }

    const Weights w = weights_for(config.weights_case);
    const EdgeSubspace edges = edge_subspace_two_user(rec.instance.gains);
    const OrderedTarget oracle_check =
        best_over_sic_orders(rec.oracle.f_opt, rec.instance.gains, rec.instance.powers, w,
                             config.target_kind, config.log_base);
    const OrderedTarget method_check =
        best_over_sic_orders(rec.method.f_opt, rec.instance.gains, rec.instance.powers, w,
                             config.target_kind, config.log_base);
    const bool oracle_exact = oracle_check.value == rec.oracle.value;
    const bool method_exact = method_check.value == rec.method.value;

    auto edge_name = [](const PinnedEdge& e) {
        return std::string(e.coord == 0 ? "f11" : "f12") + "=" + (e.value == 0.0 ? "0" : "1");
    };

    if (a.as_json) {
        nlohmann::ordered_json j;
        j["instance_index"] = rec.instance_index;
        j["base_seed"] = config.base_seed;
        j["engine_seed"] = engine_seed;
        j["noise_w"] = noise_w;
        auto& pos = j["positions"] = nlohmann::ordered_json::array();
        for (const auto& p : rec.instance.user_positions) pos.push_back({p.x(), p.y()});
        j["gains"] = {{rec.instance.gains.g(0, 0), rec.instance.gains.g(0, 1)},
                      {rec.instance.gains.g(1, 0), rec.instance.gains.g(1, 1)}};
        j["p"] = {rec.instance.powers.p(0), rec.instance.powers.p(1)};
        j["alpha"] = rec.alpha;
        j["edges"] = {{"bs1_favors_user1", edges.bs1_favors_user1},
                      {"pinned", {edge_name(edges.edges[0]), edge_name(edges.edges[1])}}};
        auto result_json = [](const OptimizationResult& r) {
            return nlohmann::ordered_json{{"f11", r.f_opt.f(0, 0)},
                                          {"f12", r.f_opt.f(0, 1)},
                                          {"value", r.value},
                                          {"order", order_label(r.order)},
                                          {"on_edge", r.on_edge},
                                          {"evaluations", r.evaluations}};
        };
        j["oracle"] = result_json(rec.oracle);
        j["method"] = result_json(rec.method);
        j["rel_gap"] = rec.match.rel_gap;
        j["is_global"] = rec.match.is_global;
        j["recheck"] = {{"oracle_exact", oracle_exact}, {"method_exact", method_exact}};
        std::printf("%s\n", j.dump(2).c_str());
        return oracle_exact && method_exact ? 0 : 1;
    }

    std::printf("instance %d (base seed %llu, engine seed %llu)\n", rec.instance_index,
                static_cast<unsigned long long>(config.base_seed),
                static_cast<unsigned long long>(engine_seed));
    std::printf("noise_w: %s\n", format_double(noise_w).c_str());
    if (rec.instance.user_positions.empty()) {
        std::printf("positions: (fixture, none)\n");
    } else {
        std::printf("positions:\n");
        for (std::size_t i = 0; i < rec.instance.user_positions.size(); ++i)
            std::printf("  user %zu: (%s, %s)\n", i + 1,
                        format_double(rec.instance.user_positions[i].x()).c_str(),
                        format_double(rec.instance.user_positions[i].y()).c_str());
    }
    std::printf("gains (user x bs):\n");
    for (int i = 0; i < 2; ++i)
        std::printf("  %s %s\n", format_double(rec.instance.gains.g(i, 0)).c_str(),
                    format_double(rec.instance.gains.g(i, 1)).c_str());
    std::printf("p_j: %s %s\n", format_double(rec.instance.powers.p(0)).c_str(),
                format_double(rec.instance.powers.p(1)).c_str());
    std::printf("alpha: %s\n", format_double(rec.alpha).c_str());
    std::printf("edges: %s, %s (bs1_favors_user1: %s)\n", edge_name(edges.edges[0]).c_str(),
                edge_name(edges.edges[1]).c_str(), yes_no(edges.bs1_favors_user1));
    auto print_result = [&](const char* name, const OptimizationResult& r) {
        std::printf("%s: f11=%s f12=%s value=%s order=%s on_edge=%s evaluations=%zu\n", name,
                    format_double(r.f_opt.f(0, 0)).c_str(), format_double(r.f_opt.f(0, 1)).c_str(),
                    format_double(r.value).c_str(), order_label(r.order).c_str(),
                    yes_no(r.on_edge), r.evaluations);
    };
    print_result("oracle", rec.oracle);
    print_result("method", rec.method);
    std::printf("rel_gap: %s  global: %s\n", format_double(rec.match.rel_gap).c_str(),
                yes_no(rec.match.is_global));
    std::printf("recheck: oracle value re-evaluates exactly: %s; method: %s\n",
                yes_no(oracle_exact), yes_no(method_exact));
    return oracle_exact && method_exact ? 0 : 1;
}

struct FiguresArgs {
    std::string summary_path;
    std::string out_dir = "out";
};

int run_figures(const FiguresArgs& a) {
    std::ifstream in(a.summary_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open summary file: " + a.summary_path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& ex) {
        throw std::runtime_error("malformed summary " + a.summary_path + ": " + ex.what());
    }
    const auto written = emit_figures(figure_data_from_json(j), a.out_dir);
    for (const auto& p : written) std::printf("wrote %s\n", p.string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-cell NOMA downlink power allocation: comparative-advantage edge search "
                 "against a brute-force grid oracle"};
    app.set_version_flag("--version", version_string);
    app.require_subcommand(1);

    SimArgs sim_args;
    CLI::App* simulate =
        app.add_subcommand("simulate", "run the Monte Carlo noise sweep and write figure data");
    add_sim_options(simulate, sim_args);
    CLI::App* sweep = app.add_subcommand("sweep", "alias of simulate");
    add_sim_options(sweep, sim_args);

    InstanceArgs inst_args;
    CLI::App* instance =
        app.add_subcommand("instance", "dump one instance: channel, edges, oracle vs method");
    instance->add_option("config", inst_args.config_path, "JSON config file");
    instance->add_option("--seed", inst_args.seed, "base seed");
    instance->add_option("--index", inst_args.index, "instance index");
    instance->add_option("--noise", inst_args.noise, "noise power in watts");
    instance->add_option("--gains", inst_args.gains, "fixture 2x2 gains 'g11,g12,g21,g22'");
    instance->add_option("--weights", inst_args.weights, "'equal' or 'two_to_one'");
    instance->add_option("--target", inst_args.target, "'static' or 'dynamic'");
    instance->add_flag("--json", inst_args.as_json, "emit the structured JSON block");

    FiguresArgs fig_args;
    CLI::App* figures =
        app.add_subcommand("figures", "rebuild fig1..fig5 CSVs from a saved summary.json");
    figures->add_option("--summary", fig_args.summary_path, "summary.json from a simulate run")
        ->required();
    figures->add_option("--out-dir", fig_args.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return run_simulate(simulate, sim_args);
        if (sweep->parsed()) return run_simulate(sweep, sim_args);
        if (instance->parsed()) return run_instance_cmd(instance, inst_args);
        if (figures->parsed()) return run_figures(fig_args);
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
    return 0;
}
