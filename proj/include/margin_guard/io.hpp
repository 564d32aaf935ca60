#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "margin_guard/counterexamples.hpp"
#include "margin_guard/dynamics.hpp"
#include "margin_guard/geometry.hpp"
#include "margin_guard/partition.hpp"
#include "margin_guard/stability.hpp"
#include "margin_guard/stochastic.hpp"

namespace margin_guard::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Decimal with 17 significant digits; parses back to the same double.
std::string format_double(double v);

// --- Readers. All throw InputError naming the file and offending record. ---

/// Rows of numbers from CSV text. A first line with any non-numeric field is
/// treated as a header; blank lines and lines starting with '#' are skipped.
std::vector<std::vector<double>> parse_csv_rows(const std::string& text, const std::string& source);

/// A points or centers document: `{"points": [[...]], "centers": [[...]]}`
/// (either key optional) or a bare array of rows.
struct ConfigDocument {
  std::optional<PointConfig> points;
  std::optional<CenterSet> centers;
};

ConfigDocument parse_config_json(const json& doc, const std::string& source);

/// Files ending in .json are JSON; anything else is CSV (one row per point,
/// columns x1..xd).
ConfigDocument read_config_file(const std::filesystem::path& path);
PointConfig read_points_file(const std::filesystem::path& path);
CenterSet read_centers_file(const std::filesystem::path& path);

/// JSON `{"centers": [...], "snapshots": [[[...]], ...]}` or CSV with a
/// leading `t` column (rows grouped by t = 0, 1, ..., index order within a
/// snapshot). `centers` overrides any centers in the file and is required
/// for CSV.
Trajectory read_trajectory_file(const std::filesystem::path& path,
                                const std::optional<CenterSet>& centers);

// --- Writers. ---

json rows_to_json(const std::vector<std::vector<double>>& rows);
json partition_to_json(const Partition& p);  // sorted 1-based index lists
Partition partition_from_json(const json& j, std::size_t n);

std::string config_to_csv(const std::vector<std::vector<double>>& rows);

json config_document(const PointConfig& points, const CenterSet& centers);
json fixture_to_json(const CounterexampleFixture& f);
json stability_report_to_json(const StabilityReport& report);
json monte_carlo_to_json(const MonteCarloReport& report);
json sweep_to_json(const SweepResult& sweep, std::uint64_t seed);

/// Step sizes, cumulative budgets, per-horizon persistence certificates,
/// stepwise checks, distances from the initial partition, and the instability
/// time when `eta` is given.
json trajectory_report_to_json(const Trajectory& traj, std::optional<double> eta);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace margin_guard::io
