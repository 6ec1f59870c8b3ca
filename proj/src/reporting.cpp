#include "canoma/reporting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <system_error>

#include "canoma/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace canoma {

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ec2;
        fs::remove(tmp, ec2);
        throw std::runtime_error("cannot replace " + path.string() + ": " + ec.message());
    }
}

FigureData figure_data_from_summary(const ExperimentSummary& summary) {
    if (summary.levels.empty())
        throw std::invalid_argument("figure data: summary has no noise levels");

    FigureData data;
    data.levels = summary.levels;

    const double target = std::log(5e-11);
    std::size_t pick = 0;
    for (std::size_t i = 1; i < summary.levels.size(); ++i) {
        const double d_i = std::abs(std::log(summary.levels[i].noise_w) - target);
        const double d_best = std::abs(std::log(summary.levels[pick].noise_w) - target);
        if (d_i < d_best) pick = i;
    }
    data.fig1_noise_w = summary.levels[pick].noise_w;

    data.fig1_rows.reserve(static_cast<std::size_t>(summary.config.n_instances));
    for (int i = 0; i < summary.config.n_instances; ++i) {
        const InstanceRecord& r = summary.record_at(pick, i);
        Fig1Row row;
        row.instance_index = r.instance_index;
        row.f11_opt = r.oracle.f_opt.f(0, 0);
        row.f12_opt = r.oracle.f_opt.f(0, 1);
        row.on_edge = r.oracle.on_edge;
        row.is_global = r.match.is_global;
        row.alpha = r.alpha;
        data.fig1_rows.push_back(row);
    }
    return data;
}

namespace {

const char* bit(bool b) { return b ? "1" : "0"; }

std::string render_fig1(const FigureData& d) {
    std::string s = "instance_index,f11_opt,f12_opt,on_edge,is_global,alpha\n";
    s.reserve(s.size() + d.fig1_rows.size() * 96);
    for (const Fig1Row& r : d.fig1_rows) {
        s += std::to_string(r.instance_index);
        s += ',';
        s += format_double(r.f11_opt);
        s += ',';
        s += format_double(r.f12_opt);
        s += ',';
        s += bit(r.on_edge);
        s += ',';
        s += bit(r.is_global);
        s += ',';
        s += format_double(r.alpha);
        s += '\n';
    }
    return s;
}

std::string render_fig2(const FigureData& d) {
    std::string s = "noise_w,pct_global,ci_low,ci_high\n";
    for (const LevelStats& l : d.levels) {
        s += format_double(l.noise_w);
        s += ',';
        s += format_double(l.pct_global);
        s += ',';
        s += format_double(l.ci_low);
        s += ',';
        s += format_double(l.ci_high);
        s += '\n';
    }
    return s;
}

std::string render_fig3(const FigureData& d) {
    std::string s = "noise_w,pct_edge_conditional,n_edge_instances\n";
    for (const LevelStats& l : d.levels) {
        s += format_double(l.noise_w);
        s += ',';
        s += format_double(l.pct_edge_conditional);
        s += ',';
        s += std::to_string(l.n_edge);
        s += '\n';
    }
    return s;
}

std::string render_fig4(const FigureData& d) {
    std::string s = "noise_w,mean_degradation_pct\n";
    for (const LevelStats& l : d.levels) {
        s += format_double(l.noise_w);
        s += ',';
        s += format_double(l.mean_degradation_pct);
        s += '\n';
    }
    return s;
}

std::string render_fig5(const FigureData& d) {
    std::string s = "noise_w,alpha_global_mean,alpha_global_std,alpha_subopt_mean,alpha_subopt_std\n";
    for (const LevelStats& l : d.levels) {
        s += format_double(l.noise_w);
        s += ',';
        s += format_double(l.alpha_global_mean);
        s += ',';
        s += format_double(l.alpha_global_std);
        s += ',';
        s += format_double(l.alpha_subopt_mean);
        s += ',';
        s += format_double(l.alpha_subopt_std);
        s += '\n';
    }
    return s;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> render_figure_csvs(const FigureData& data) {
    return {{"fig1.csv", render_fig1(data)},
            {"fig2.csv", render_fig2(data)},
            {"fig3.csv", render_fig3(data)},
            {"fig4.csv", render_fig4(data)},
            {"fig5.csv", render_fig5(data)}};
}

std::vector<fs::path> emit_figures(const FigureData& data, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    std::vector<fs::path> written;
    for (const auto& [name, content] : render_figure_csvs(data)) {
        const fs::path p = out_dir / name;
        write_file_atomic(p, content);
        written.push_back(p);
    }
    return written;
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& config) {
    ordered_json j;
    j["instances"] = config.n_instances;
    j["seed"] = config.base_seed;
    j["weights"] = config.weights_case == WeightsCase::equal ? "equal" : "two_to_one";
    j["noise_levels_w"] = config.noise_levels_w;
    j["target"] = config.target_kind == TargetKind::static_alloc ? "static" : "dynamic";
    j["grid"] = {{"points_2d", config.grid.points_2d},
                 {"points_edge", config.grid.points_edge},
                 {"refine", config.grid.refine}};
    j["match_rel_tol"] = config.match_rel_tol;
    j["log_base"] = config.log_base;
    j["threads"] = config.threads;

    ordered_json geometry;
    geometry["area_width"] = config.scenario.geometry.area_width;
    geometry["area_height"] = config.scenario.geometry.area_height;
    auto& bs = geometry["bs_positions"] = ordered_json::array();
    for (const Eigen::Vector2d& p : config.scenario.geometry.bs_positions)
        bs.push_back({p.x(), p.y()});

    ordered_json path_loss;
    path_loss["exponent"] = config.scenario.path_loss.exponent;
    path_loss["reference_gain"] = config.scenario.path_loss.reference_gain;
    path_loss["fading"] = config.scenario.path_loss.fading == Fading::none ? "none" : "rayleigh";

    ordered_json radio;
    radio["tx_power_per_bs_w"] = config.scenario.radio.tx_power_per_bs_w;
    radio["noise_power_w"] = config.scenario.radio.noise_power_w;
    radio["bandwidth_hz"] = config.scenario.radio.bandwidth_hz;
    radio["carrier_hz"] = config.scenario.radio.carrier_hz;

    j["scenario"] = {{"n_users", config.scenario.n_users},
                     {"geometry", std::move(geometry)},
                     {"path_loss", std::move(path_loss)},
                     {"radio", std::move(radio)}};
    return j;
}

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
    throw std::runtime_error("config error at " + (path.empty() ? "/" : path) + ": " + what);
}

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) config_error(path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            config_error(path + "/" + it.key(), "unknown field");
    }
}

double read_number(const json& j, const std::string& path) {
    if (!j.is_number()) config_error(path, "expected a number");
    return j.get<double>();
}

int read_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) config_error(path, "expected an integer");
    return j.get<int>();
}

std::uint64_t read_u64(const json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    config_error(path, "expected a non-negative integer");
}

bool read_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) config_error(path, "expected a boolean");
    return j.get<bool>();
}

std::string read_string(const json& j, const std::string& path) {
    if (!j.is_string()) config_error(path, "expected a string");
    return j.get<std::string>();
}

Geometry parse_geometry(const json& j, const std::string& path) {
    Geometry g;
    require_object(j, path);
    reject_unknown(j, path, {"area_width", "area_height", "bs_positions"});
    if (j.contains("area_width")) g.area_width = read_number(j["area_width"], path + "/area_width");
    if (j.contains("area_height"))
        g.area_height = read_number(j["area_height"], path + "/area_height");
    if (j.contains("bs_positions")) {
        const json& arr = j["bs_positions"];
        if (!arr.is_array()) config_error(path + "/bs_positions", "expected an array of [x, y]");
        g.bs_positions.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = path + "/bs_positions/" + std::to_string(i);
            if (!arr[i].is_array() || arr[i].size() != 2) config_error(p, "expected [x, y]");
            g.bs_positions.emplace_back(read_number(arr[i][0], p + "/0"),
                                        read_number(arr[i][1], p + "/1"));
        }
    }
    return g;
}

RadioParams parse_radio(const json& j, const std::string& path) {
    RadioParams r;
    require_object(j, path);
    reject_unknown(j, path, {"tx_power_per_bs_w", "noise_power_w", "bandwidth_hz", "carrier_hz"});
    if (j.contains("tx_power_per_bs_w"))
        r.tx_power_per_bs_w = read_number(j["tx_power_per_bs_w"], path + "/tx_power_per_bs_w");
    if (j.contains("noise_power_w"))
        r.noise_power_w = read_number(j["noise_power_w"], path + "/noise_power_w");
    if (j.contains("bandwidth_hz"))
        r.bandwidth_hz = read_number(j["bandwidth_hz"], path + "/bandwidth_hz");
    if (j.contains("carrier_hz")) r.carrier_hz = read_number(j["carrier_hz"], path + "/carrier_hz");
    return r;
}

// Needs the radio block first: "free_space" (also the default) derives the
// 1 m gain from the configured carrier.
PathLossParams parse_path_loss(const json& j, const std::string& path, const RadioParams& radio) {
    PathLossParams p;
    p.reference_gain = free_space_reference_gain(radio.carrier_hz);
    require_object(j, path);
    reject_unknown(j, path, {"exponent", "reference_gain", "fading"});
    if (j.contains("exponent")) p.exponent = read_number(j["exponent"], path + "/exponent");
    if (j.contains("reference_gain")) {
        const json& rg = j["reference_gain"];
        if (rg.is_string()) {
            if (rg.get<std::string>() != "free_space")
                config_error(path + "/reference_gain", "expected a number or \"free_space\"");
        } else {
            p.reference_gain = read_number(rg, path + "/reference_gain");
        }
    }
    if (j.contains("fading")) {
        const std::string f = read_string(j["fading"], path + "/fading");
        if (f == "none")
            p.fading = Fading::none;
        else if (f == "rayleigh")
            p.fading = Fading::rayleigh;
        else
            config_error(path + "/fading", "expected \"none\" or \"rayleigh\"");
    }
    return p;
}

ScenarioConfig parse_scenario(const json& j, const std::string& path) {
    ScenarioConfig s;
    require_object(j, path);
    reject_unknown(j, path, {"n_users", "geometry", "path_loss", "radio"});
    if (j.contains("n_users")) s.n_users = read_int(j["n_users"], path + "/n_users");
    if (j.contains("geometry")) s.geometry = parse_geometry(j["geometry"], path + "/geometry");
    if (j.contains("radio")) s.radio = parse_radio(j["radio"], path + "/radio");
    // Default reference gain always tracks the configured carrier.
    s.path_loss = parse_path_loss(j.contains("path_loss") ? j["path_loss"] : json::object(),
                                  path + "/path_loss", s.radio);
    return s;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    require_object(j, "");
    reject_unknown(j, "",
                   {"instances", "seed", "weights", "noise_levels_w", "target", "grid",
                    "match_rel_tol", "log_base", "threads", "scenario"});
    if (j.contains("instances")) c.n_instances = read_int(j["instances"], "/instances");
    if (j.contains("seed")) c.base_seed = read_u64(j["seed"], "/seed");
    if (j.contains("weights")) {
        const std::string w = read_string(j["weights"], "/weights");
        if (w == "equal")
            c.weights_case = WeightsCase::equal;
        else if (w == "two_to_one")
            c.weights_case = WeightsCase::two_to_one;
        else
            config_error("/weights", "expected \"equal\" or \"two_to_one\"");
    }
    if (j.contains("noise_levels_w")) {
        const json& arr = j["noise_levels_w"];
        if (!arr.is_array() || arr.empty())
            config_error("/noise_levels_w", "expected a non-empty array of watts");
        c.noise_levels_w.clear();
        for (std::size_t i = 0; i < arr.size(); ++i)
            c.noise_levels_w.push_back(
                read_number(arr[i], "/noise_levels_w/" + std::to_string(i)));
    }
    if (j.contains("target")) {
        const std::string t = read_string(j["target"], "/target");
        if (t == "static")
            c.target_kind = TargetKind::static_alloc;
        else if (t == "dynamic")
            c.target_kind = TargetKind::dynamic_alloc;
        else
            config_error("/target", "expected \"static\" or \"dynamic\"");
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        require_object(g, "/grid");
        reject_unknown(g, "/grid", {"points_2d", "points_edge", "refine"});
        if (g.contains("points_2d")) c.grid.points_2d = read_int(g["points_2d"], "/grid/points_2d");
        if (g.contains("points_edge"))
            c.grid.points_edge = read_int(g["points_edge"], "/grid/points_edge");
        if (g.contains("refine")) c.grid.refine = read_bool(g["refine"], "/grid/refine");
    }
    if (j.contains("match_rel_tol"))
        c.match_rel_tol = read_number(j["match_rel_tol"], "/match_rel_tol");
    if (j.contains("log_base")) c.log_base = read_number(j["log_base"], "/log_base");
    if (j.contains("threads")) c.threads = read_int(j["threads"], "/threads");
    if (j.contains("scenario")) c.scenario = parse_scenario(j["scenario"], "/scenario");
    return c;
}

ExperimentConfig load_config_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& ex) {
        throw std::runtime_error("malformed config " + path.string() + ": " + ex.what());
    }
    return config_from_json(j);
}

nlohmann::ordered_json summary_to_json(const ExperimentSummary& summary,
                                       const std::optional<TrendReport>& trend) {
    ordered_json j;
    j["tool"] = "canoma";
    j["version"] = version_string;
    j["config"] = config_to_json(summary.config);

    auto& levels = j["levels"] = ordered_json::array();
    for (const LevelStats& l : summary.levels) {
        ordered_json lj;
        lj["noise_w"] = l.noise_w;
        lj["n"] = l.n;
        lj["n_global"] = l.n_global;
        lj["n_subopt"] = l.n_subopt;
        lj["n_edge"] = l.n_edge;
        lj["n_edge_global"] = l.n_edge_global;
        lj["pct_global"] = l.pct_global;
        lj["ci_low"] = l.ci_low;
        lj["ci_high"] = l.ci_high;
        lj["pct_edge_conditional"] = l.pct_edge_conditional;
        lj["mean_degradation_pct"] = l.mean_degradation_pct;
        lj["alpha_global_mean"] = l.alpha_global_mean;
        lj["alpha_global_std"] = l.alpha_global_std;
        lj["alpha_subopt_mean"] = l.alpha_subopt_mean;
        lj["alpha_subopt_std"] = l.alpha_subopt_std;
        lj["alpha_rule_accuracy"] = l.alpha_rule_accuracy;
        lj["majority_baseline_accuracy"] = l.majority_baseline_accuracy;
        levels.push_back(std::move(lj));
    }

    if (trend) {
        j["trend"] = {{"rank_correlation", trend->rank_correlation},
                      {"non_decreasing_within_ci", trend->non_decreasing_within_ci},
                      {"pct_first", trend->pct_first},
                      {"pct_last", trend->pct_last},
                      {"delta_last_first", trend->delta_last_first},
                      {"se_delta", trend->se_delta},
                      {"significant_increase", trend->significant_increase}};
    } else {
        j["trend"] = nullptr;
    }

    const FigureData data = figure_data_from_summary(summary);
    j["fig1_noise_w"] = data.fig1_noise_w;
    auto& rows = j["fig1_records"] = ordered_json::array();
    for (const Fig1Row& r : data.fig1_rows)
        rows.push_back({{"instance_index", r.instance_index},
                        {"f11_opt", r.f11_opt},
                        {"f12_opt", r.f12_opt},
                        {"on_edge", r.on_edge},
                        {"is_global", r.is_global},
                        {"alpha", r.alpha}});
    return j;
}

namespace {

// JSON serializes non-finite doubles as null; read them back as NaN.
double read_stat(const json& j, const std::string& path) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return read_number(j, path);
}

}  // namespace

FigureData figure_data_from_json(const json& j) {
    require_object(j, "");
    if (!j.contains("levels") || !j["levels"].is_array())
        config_error("/levels", "expected an array");
    if (!j.contains("fig1_records") || !j["fig1_records"].is_array())
        config_error("/fig1_records", "expected an array");

    FigureData data;
    data.fig1_noise_w = read_number(j.at("fig1_noise_w"), "/fig1_noise_w");

    const json& levels = j["levels"];
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const std::string p = "/levels/" + std::to_string(i);
        const json& lj = levels[i];
        require_object(lj, p);
        LevelStats l;
        l.noise_w = read_number(lj.at("noise_w"), p + "/noise_w");
        l.n = read_int(lj.at("n"), p + "/n");
        l.n_global = read_int(lj.at("n_global"), p + "/n_global");
        l.n_subopt = read_int(lj.at("n_subopt"), p + "/n_subopt");
        l.n_edge = read_int(lj.at("n_edge"), p + "/n_edge");
        l.n_edge_global = read_int(lj.at("n_edge_global"), p + "/n_edge_global");
        l.pct_global = read_number(lj.at("pct_global"), p + "/pct_global");
        l.ci_low = read_number(lj.at("ci_low"), p + "/ci_low");
        l.ci_high = read_number(lj.at("ci_high"), p + "/ci_high");
        l.pct_edge_conditional =
            read_number(lj.at("pct_edge_conditional"), p + "/pct_edge_conditional");
        l.mean_degradation_pct =
            read_number(lj.at("mean_degradation_pct"), p + "/mean_degradation_pct");
        l.alpha_global_mean = read_stat(lj.at("alpha_global_mean"), p + "/alpha_global_mean");
        l.alpha_global_std = read_stat(lj.at("alpha_global_std"), p + "/alpha_global_std");
        l.alpha_subopt_mean = read_stat(lj.at("alpha_subopt_mean"), p + "/alpha_subopt_mean");
        l.alpha_subopt_std = read_stat(lj.at("alpha_subopt_std"), p + "/alpha_subopt_std");
        if (lj.contains("alpha_rule_accuracy"))
            l.alpha_rule_accuracy = read_number(lj["alpha_rule_accuracy"], p + "/alpha_rule_accuracy");
        if (lj.contains("majority_baseline_accuracy"))
            l.majority_baseline_accuracy =
                read_number(lj["majority_baseline_accuracy"], p + "/majority_baseline_accuracy");
        data.levels.push_back(l);
    }

    const json& rows = j["fig1_records"];
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string p = "/fig1_records/" + std::to_string(i);
        const json& rj = rows[i];
        require_object(rj, p);
        Fig1Row r;
        r.instance_index = read_int(rj.at("instance_index"), p + "/instance_index");
        r.f11_opt = read_number(rj.at("f11_opt"), p + "/f11_opt");
        r.f12_opt = read_number(rj.at("f12_opt"), p + "/f12_opt");
        r.on_edge = read_bool(rj.at("on_edge"), p + "/on_edge");
        r.is_global = read_bool(rj.at("is_global"), p + "/is_global");
        r.alpha = read_number(rj.at("alpha"), p + "/alpha");
        data.fig1_rows.push_back(r);
    }
    return data;
}

std::vector<fs::path> write_run_outputs(const ExperimentSummary& summary,
                                        const std::optional<TrendReport>& trend,
                                        const fs::path& out_dir) {
    fs::create_directories(out_dir);

    std::vector<std::pair<std::string, std::string>> files =
        render_figure_csvs(figure_data_from_summary(summary));
    files.emplace_back("summary.json", summary_to_json(summary, trend).dump(2) + "\n");

    ordered_json outputs;
    std::vector<fs::path> written;
    for (const auto& [name, content] : files) {
        const fs::path p = out_dir / name;
        write_file_atomic(p, content);
        written.push_back(p);
        outputs[name] = {{"bytes", content.size()}, {"fnv1a64", fnv1a64_hex(content)}};
    }

    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);

    ordered_json manifest;
    manifest["tool"] = "canoma";
    manifest["version"] = version_string;
    manifest["created_utc"] = stamp;
    manifest["base_seed"] = summary.config.base_seed;
    manifest["config"] = config_to_json(summary.config);
    manifest["outputs"] = std::move(outputs);

    const fs::path manifest_path = out_dir / "manifest.json";
    write_file_atomic(manifest_path, manifest.dump(2) + "\n");
    written.insert(written.begin(), manifest_path);
    return written;
}

}  // namespace canoma
