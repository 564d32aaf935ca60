#include "margin_guard/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "margin_guard/errors.hpp"

namespace margin_guard::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_number(const std::string& field, double& value) {
  if (field.empty()) return false;
  char* end = nullptr;
  value = std::strtod(field.c_str(), &end);
  return end == field.c_str() + field.size();
}

bool is_json_path(const std::filesystem::path& path) { return path.extension() == ".json"; }

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(source + ": invalid JSON: " + e.what());
  }
}

std::vector<std::vector<double>> rows_from_json(const json& j, const std::string& source,
                                                const std::string& what) {
  if (!j.is_array()) {
    throw InputError(source + ": '" + what + "' must be an array of coordinate rows");
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& row = j[i];
    if (!row.is_array()) {
      throw InputError(source + ": " + what + " record " + std::to_string(i + 1) +
                       " is not an array");
    }
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) {
        throw InputError(source + ": " + what + " record " + std::to_string(i + 1) +
                         " has a non-numeric coordinate");
      }
      r.push_back(v.get<double>());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

// Re-tags construction errors with the file name.
template <typename F>
auto with_source(const std::string& source, F&& make) {
  try {
    return make();
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
}

json indices_to_json(const std::vector<std::size_t>& idx) {
  json out = json::array();
  for (std::size_t i : idx) out.push_back(i + 1);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError(path.string() + ": cannot open file");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InputError(path.string() + ": cannot write file");
  }
  out << text;
}

std::vector<std::vector<double>> parse_csv_rows(const std::string& text, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(ss, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_fields(t);
    std::vector<double> row;
    bool numeric = true;
    for (const auto& f : fields) {
      double v = 0.0;
      if (!parse_number(f, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (first_content) {
        first_content = false;  // header
        continue;
      }
      throw InputError(source + ": line " + std::to_string(line_no) +
                       ": non-numeric field in record");
    }
    first_content = false;
    rows.push_back(std::move(row));
  }
  return rows;
}

ConfigDocument parse_config_json(const json& doc, const std::string& source) {
  ConfigDocument out;
  if (doc.is_array()) {
    auto rows = rows_from_json(doc, source, "points");
    out.points = with_source(source, [&] { return PointConfig::from_rows(rows); });
    return out;
  }
  if (!doc.is_object()) {
    throw InputError(source + ": expected a JSON object or array");
  }
  if (doc.contains("points")) {
    auto rows = rows_from_json(doc["points"], source, "points");
    out.points = with_source(source, [&] { return PointConfig::from_rows(rows); });
  }
  if (doc.contains("centers")) {
    auto rows = rows_from_json(doc["centers"], source, "centers");
    out.centers = with_source(source, [&] { return CenterSet::from_rows(rows); });
  }
  if (!out.points && !out.centers) {
    throw InputError(source + ": no 'points' or 'centers' field");
  }
  return out;
}

ConfigDocument read_config_file(const std::filesystem::path& path) {
  const std::string source = path.string();
  const std::string text = read_text_file(path);
  if (is_json_path(path)) {
    return parse_config_json(parse_json_text(text, source), source);
  }
  auto rows = parse_csv_rows(text, source);
  ConfigDocument out;
  out.points = with_source(source, [&] { return PointConfig::from_rows(rows); });
  return out;
}

PointConfig read_points_file(const std::filesystem::path& path) {
  auto doc = read_config_file(path);
  if (!doc.points) {
    throw InputError(path.string() + ": no points");
  }
  return *doc.points;
}

CenterSet read_centers_file(const std::filesystem::path& path) {
  const std::string source = path.string();
  if (is_json_path(path)) {
    const json doc = parse_json_text(read_text_file(path), source);
    if (doc.is_array()) {
      auto rows = rows_from_json(doc, source, "centers");
      return with_source(source, [&] { return CenterSet::from_rows(rows); });
    }
    auto parsed = parse_config_json(doc, source);
    if (!parsed.centers) {
      throw InputError(source + ": no 'centers' field");
    }
    return *parsed.centers;
  }
  auto rows = parse_csv_rows(read_text_file(path), source);
  return with_source(source, [&] { return CenterSet::from_rows(rows); });
}

Trajectory read_trajectory_file(const std::filesystem::path& path,
                                const std::optional<CenterSet>& centers) {
  const std::string source = path.string();
  const std::string text = read_text_file(path);
  std::vector<PointConfig> snapshots;
  std::optional<CenterSet> file_centers;

  if (is_json_path(path)) {
    const json doc = parse_json_text(text, source);
    if (!doc.is_object() || !doc.contains("snapshots") || !doc["snapshots"].is_array()) {
      throw InputError(source + ": trajectory needs a 'snapshots' array");
    }
    const auto& snaps = doc["snapshots"];
    for (std::size_t t = 0; t < snaps.size(); ++t) {
      auto rows = rows_from_json(snaps[t], source, "snapshot " + std::to_string(t));
      snapshots.push_back(with_source(source + ": snapshot " + std::to_string(t),
                                      [&] { return PointConfig::from_rows(rows); }));
    }
    if (doc.contains("centers")) {
      auto rows = rows_from_json(doc["centers"], source, "centers");
      file_centers = with_source(source, [&] { return CenterSet::from_rows(rows); });
    }
  } else {
    const auto rows = parse_csv_rows(text, source);
    std::vector<std::vector<double>> current;
    long expected_t = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() < 2) {
        throw InputError(source + ": record " + std::to_string(r + 1) +
                         ": need a t column and at least one coordinate");
      }
      const double tv = rows[r][0];
      const long t = static_cast<long>(tv);
      if (static_cast<double>(t) != tv || (t != expected_t && t != expected_t + 1) ||
          (t == expected_t + 1 && current.empty())) {
        throw InputError(source + ": record " + std::to_string(r + 1) +
                         ": t must start at 0 and increase by 1 between snapshots");
      }
      if (t == expected_t + 1) {
        snapshots.push_back(with_source(source + ": snapshot " + std::to_string(expected_t),
                                        [&] { return PointConfig::from_rows(current); }));
        current.clear();
        expected_t = t;
      }
      current.emplace_back(rows[r].begin() + 1, rows[r].end());
    }
    if (!current.empty()) {
      snapshots.push_back(with_source(source + ": snapshot " + std::to_string(expected_t),
                                      [&] { return PointConfig::from_rows(current); }));
    }
  }

  const auto& use = centers ? centers : file_centers;
  if (!use) {
    throw InputError(source + ": no centers given (use --centers or a 'centers' field)");
  }
  return with_source(source, [&] { return Trajectory(std::move(snapshots), *use); });
}

json rows_to_json(const std::vector<std::vector<double>>& rows) {
  json out = json::array();
  for (const auto& r : rows) out.push_back(r);
  return out;
}

json partition_to_json(const Partition& p) {
  json out = json::array();
  for (const auto& block : p.blocks()) out.push_back(indices_to_json(block));
  return out;
}

Partition partition_from_json(const json& j, std::size_t n) {
  if (!j.is_array()) {
    throw InputError("partition: expected an array of index lists");
  }
  std::vector<std::vector<std::size_t>> blocks;
  for (const auto& block : j) {
    if (!block.is_array()) {
      throw InputError("partition: block is not an array");
    }
    std::vector<std::size_t> b;
    for (const auto& v : block) {
      if (!v.is_number_unsigned() || v.get<std::size_t>() == 0) {
        throw InputError("partition: indices must be positive integers");
      }
      b.push_back(v.get<std::size_t>() - 1);
    }
    blocks.push_back(std::move(b));
  }
  return Partition(n, std::move(blocks));
}

std::string config_to_csv(const std::vector<std::vector<double>>& rows) {
  std::string out;
  const std::size_t d = rows.empty() ? 0 : rows.front().size();
  for (std::size_t t = 0; t < d; ++t) {
    out += (t ? ",x" : "x") + std::to_string(t + 1);
  }
  out += '\n';
  for (const auto& r : rows) {
    for (std::size_t t = 0; t < r.size(); ++t) {
      if (t) out += ',';
      out += format_double(r[t]);
    }
    out += '\n';
  }
  return out;
}

json config_document(const PointConfig& points, const CenterSet& centers) {
  return {{"schema_version", kSchemaVersion},
          {"points", rows_to_json(points.rows())},
          {"centers", rows_to_json(centers.rows())}};
}

json fixture_to_json(const CounterexampleFixture& f) {
  json out = config_document(f.config, f.centers);
  out["construction"] = f.construction;
  if (f.parameter_epsilon > 0.0) out["epsilon"] = f.parameter_epsilon;
  out["delta"] = f.delta;
  out["moved_count"] = f.moved_count;
  out["perturbed"] = rows_to_json(f.perturbed.rows());
  out["expected_before"] = partition_to_json(f.expected_before);
  out["expected_after"] = partition_to_json(f.expected_after);
  out["perturbation_size"] = f.perturbation_size;
  return out;
}

json stability_report_to_json(const StabilityReport& r) {
  json out;
  out["schema_version"] = kSchemaVersion;
  out["n"] = r.assignment.size();
  out["labels"] = indices_to_json(r.assignment.labels);
  out["margins"] = r.assignment.margins;
  out["min_margin"] = r.min_margin;
  out["margin_lower_bound_radius"] = r.margin_lower_bound_radius;
  out["per_point_switch_radius"] = r.per_point_switch_radius;
  out["per_point_competitor"] = indices_to_json(r.per_point_competitor);
  out["assignment_radius"] = r.assignment_radius;
  out["partition"] = partition_to_json(r.partition);
  out["fragile_indices"] = indices_to_json(r.fragile);
  out["fragile_margin_threshold"] = kDefaultFragileMarginThreshold;
  if (r.empirical_partition_radius_upper) {
    const auto& w = *r.empirical_partition_radius_upper;
    out["empirical_partition_radius_upper"] = {
        {"radius", w.radius},
        {"kind", kSearchBoundKind},
        {"moved_index", w.moved_index + 1},
        {"competitor", w.competitor + 1},
        {"new_label", w.new_label + 1},
        {"partition_after", partition_to_json(w.after)},
        {"witness", rows_to_json(w.perturbed.rows())}};
  } else {
    out["empirical_partition_radius_upper"] = nullptr;
  }
  return out;
}

json monte_carlo_to_json(const MonteCarloReport& r) {
  return {{"schema_version", kSchemaVersion},
          {"trials", r.trials},
          {"seed", r.seed},
          {"model", {{"kind", r.model}, {"scale", r.model_scale}}},
          {"per_index_switch_frequency", r.per_index_switch_frequency},
          {"per_index_bound", r.per_index_bound},
          {"mean_switched_count", r.mean_switched_count},
          {"switched_count_stderr", r.switched_count_stderr},
          {"mean_partition_distance", r.mean_partition_distance},
          {"partition_distance_stderr", r.partition_distance_stderr},
          {"max_partition_distance", r.max_partition_distance},
          {"aggregate_bounds",
           {{"expected_switch_bound", r.expected_switch_bound},
            {"expected_distance_bound", r.expected_distance_bound}}},
          {"self_checks",
           {{"necessity_violations", r.necessity_violations},
            {"distance_bound_violations", r.distance_bound_violations}}}};
}

json sweep_to_json(const SweepResult& s, std::uint64_t seed) {
  json rows = json::array();
  for (const auto& row : s.rows) {
    rows.push_back({{"epsilon", row.epsilon},
                    {"mean_S", row.mean_distance},
                    {"max_S", row.max_distance},
                    {"threshold_flag", row.below_threshold}});
  }
  return {{"schema_version", kSchemaVersion},
          {"min_margin", s.min_margin},
          {"threshold", s.threshold},
          {"trials", s.trials},
          {"seed", seed},
          {"noise", "bounded_disk"},
          {"rows", std::move(rows)}};
}

json trajectory_report_to_json(const Trajectory& traj, std::optional<double> eta) {
  json out;
  out["schema_version"] = kSchemaVersion;
  out["horizon"] = traj.horizon();
  out["centers_fixed"] = true;
  const auto parts = partitions(traj);
  json dist = json::array();
  for (const auto& p : parts) dist.push_back(partition_distance(parts.front(), p));
  out["distance_from_initial"] = std::move(dist);

  const auto certs = persistence_certificates(traj);
  out["initial_radius_lower_bound"] = certs.front().initial_radius_lower_bound;
  json budgets = json::array();
  json cert_json = json::array();
  for (const auto& c : certs) {
    budgets.push_back(c.cumulative_budget);
    cert_json.push_back({{"horizon", c.horizon},
                         {"cumulative_budget", c.cumulative_budget},
                         {"initial_radius_lower_bound", c.initial_radius_lower_bound},
                         {"certified", c.certified}});
  }
  out["cumulative_budgets"] = std::move(budgets);
  out["persistence"] = std::move(cert_json);

  if (traj.horizon() > 0) {
    out["step_sizes"] = step_sizes(traj);
    const auto steps = stepwise_stability_check(traj);
    out["stepwise_pass"] = std::vector<bool>(steps.begin(), steps.end());
  } else {
    out["step_sizes"] = json::array();
    out["stepwise_pass"] = json::array();
  }
  if (eta) {
    const auto tau = instability_time(traj, *eta);
    out["eta"] = *eta;
    if (tau) {
      out["instability_time"] = *tau;
    } else {
      out["instability_time"] = nullptr;
      out["instability_note"] = "not observed within horizon T=" + std::to_string(traj.horizon());
    }
  }
  return out;
}

}  // namespace margin_guard::io
