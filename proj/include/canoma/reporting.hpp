#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "canoma/montecarlo.hpp"

namespace canoma {

// 17 significant digits: enough for strtod to reproduce the exact double.
std::string format_double(double x);

// FNV-1a, 64-bit; the manifest's per-file checksum.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

// Writes content to a sibling temp file and renames it over the target, so
// readers never observe a partial file. Binary mode; line endings are
// whatever the content carries (all writers here use LF).
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

struct Fig1Row {
    int instance_index = 0;
    double f11_opt = 0.0, f12_opt = 0.0;
    bool on_edge = false, is_global = false;
    double alpha = 0.0;
};

// Everything the five figure CSVs need, detached from the full record set so
// it can also be rebuilt from a saved summary.json.
struct FigureData {
    std::vector<LevelStats> levels;
    double fig1_noise_w = 0.0;  // level whose per-instance allocations fig1 scatters
    std::vector<Fig1Row> fig1_rows;
};

// Picks the level nearest 5e-11 W in log distance for fig1 (the exact value
// when present, as it is in the default sweep).
FigureData figure_data_from_summary(const ExperimentSummary& summary);

// {filename, CSV content} for fig1.csv .. fig5.csv, pinned header rows,
// floats formatted with format_double.
std::vector<std::pair<std::string, std::string>> render_figure_csvs(const FigureData& data);

// Writes the five CSVs into out_dir (created if missing); returns the paths.
std::vector<std::filesystem::path> emit_figures(const FigureData& data,
                                                const std::filesystem::path& out_dir);

// Config serialization. The echo resolves reference_gain to its numeric
// value, so an echoed config reloads to an identical experiment.
nlohmann::ordered_json config_to_json(const ExperimentConfig& config);

// Strict parse: unknown or ill-typed fields fail with the offending path,
// e.g. "config error at /scenario/radio/tx_power_per_bs_w: expected a
// number". Every field is optional and defaults to the standard scenario.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::filesystem::path& path);

// Full machine-readable results: config echo, per-level statistics, trend
// report (null when the sweep has too few levels for one), and the fig1
// scatter rows. Deterministic (no timestamp).
nlohmann::ordered_json summary_to_json(const ExperimentSummary& summary,
                                       const std::optional<TrendReport>& trend);

// Rebuilds figure data from a summary.json document (the `figures` command).
FigureData figure_data_from_json(const nlohmann::json& j);

// summary.json + the five CSVs + manifest.json (config echo, tool version,
// UTC timestamp, base seed, byte count and FNV-1a checksum per output file;
// the manifest is written last). Returns all written paths, manifest first.
std::vector<std::filesystem::path> write_run_outputs(const ExperimentSummary& summary,
                                                     const std::optional<TrendReport>& trend,
                                                     const std::filesystem::path& out_dir);

}  // namespace canoma
