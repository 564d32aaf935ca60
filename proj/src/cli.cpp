#include "margin_guard/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "margin_guard/counterexamples.hpp"
#include "margin_guard/dynamics.hpp"
#include "margin_guard/errors.hpp"
#include "margin_guard/io.hpp"
#include "margin_guard/rng.hpp"
#include "margin_guard/stability.hpp"
#include "margin_guard/stochastic.hpp"

namespace margin_guard::cli {

namespace {

using io::json;

struct RunConfig {
  std::optional<std::string> points;
  std::optional<std::string> centers;
  std::optional<std::string> preset;
  std::optional<double> epsilon;
  std::optional<double> eta;
  std::optional<double> sigma;
  std::optional<double> rho;
  std::optional<std::size_t> m;
  std::optional<double> delta;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::vector<double> grid;
  std::optional<std::string> out;
  std::string format = "json";
  std::size_t n = 200;
  double sigma0 = 0.2;
  unsigned workers = 1;
  std::optional<std::string> trace;
};

void add_common_options(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--points", rc.points, "Points file (.json or CSV)");
  cmd->add_option("--centers", rc.centers, "Centers file (.json or CSV)");
  cmd->add_option("--preset", rc.preset,
                  "Built-in input: two_gaussians, single_point, many_point, near_boundary");
  cmd->add_option("--epsilon", rc.epsilon, "Perturbation budget epsilon");
  cmd->add_option("--eta", rc.eta, "Partition-distance threshold in (0, 1]");
  cmd->add_option("--sigma", rc.sigma, "Gaussian noise standard deviation");
  cmd->add_option("--rho", rc.rho, "Bounded-disk noise radius");
  cmd->add_option("--m", rc.m, "Number of moving points (many_point)");
  cmd->add_option("--delta", rc.delta, "Boundary offset delta (near_boundary)");
  cmd->add_option("--trials", rc.trials, "Monte Carlo trials");
  cmd->add_option("--seed", rc.seed, "Master RNG seed (overrides MARGIN_GUARD_SEED)");
  cmd->add_option("--grid", rc.grid, "Comma-separated epsilon grid")->delimiter(',');
  cmd->add_option("--out", rc.out, "Output path (default stdout)");
  cmd->add_option("--format", rc.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--n", rc.n, "Point count for two_gaussians")->capture_default_str();
  cmd->add_option("--sigma0", rc.sigma0, "Cluster spread for two_gaussians")->capture_default_str();
  cmd->add_option("--workers", rc.workers, "Monte Carlo worker threads")->capture_default_str();
  cmd->add_option("--trace", rc.trace, "Per-trial CSV trace path (montecarlo)");
}

std::uint64_t resolve_seed(const RunConfig& rc) {
  if (rc.seed) return *rc.seed;
  if (const char* env = std::getenv(kSeedEnvVar); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') {
      throw InputError(std::string(kSeedEnvVar) + " is not an unsigned integer");
    }
    return v;
  }
  return kDefaultSeed;
}

double positive(const std::optional<double>& v, double fallback, const char* flag) {
  const double x = v.value_or(fallback);
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw InputError(std::string(flag) + " must be a positive number");
  }
  return x;
}

PresetData make_preset(const RunConfig& rc) {
  const std::string& name = *rc.preset;
  if (name == "two_gaussians") {
    if (rc.n < 2) throw InputError("--n must be at least 2");
    if (!(rc.sigma0 >= 0.0)) throw InputError("--sigma0 must be nonnegative");
    return two_gaussians_preset(rc.n, rc.sigma0, resolve_seed(rc));
  }
  CounterexampleFixture f = [&] {
    if (name == "single_point") return single_point_instability(positive(rc.epsilon, 1.0, "--epsilon"));
    if (name == "many_point") {
      if (rc.m && *rc.m < 1) throw InputError("--m must be at least 1");
      return many_point_instability(positive(rc.epsilon, 1.0, "--epsilon"), rc.m.value_or(3));
    }
    if (name == "near_boundary") return near_boundary_instability(positive(rc.delta, 0.1, "--delta"));
    throw InputError("unknown preset '" + name +
                     "' (expected two_gaussians, single_point, many_point, near_boundary)");
  }();
  PresetData data{f.config, f.centers, std::nullopt};
  data.fixture = std::move(f);
  return data;
}

struct Inputs {
  PointConfig points;
  CenterSet centers;
};

Inputs load_inputs(const RunConfig& rc) {
  if (rc.preset && rc.points) {
    throw InputError("give either --preset or --points, not both");
  }
  if (rc.preset) {
    auto p = make_preset(rc);
    return {std::move(p.points), std::move(p.centers)};
  }
  if (!rc.points) {
    throw InputError("no input: give --points (and --centers) or --preset");
  }
  auto doc = io::read_config_file(*rc.points);
  if (!doc.points) throw InputError(*rc.points + ": no points");
  std::optional<CenterSet> centers = rc.centers ? io::read_centers_file(*rc.centers) : doc.centers;
  if (!centers) {
    throw InputError("no centers: give --centers or a 'centers' field in " + *rc.points);
  }
  if (centers->dim() != doc.points->dim()) {
    throw InputError("dimension mismatch: " + *rc.points + " has d=" +
                     std::to_string(doc.points->dim()) + " but " +
                     (rc.centers ? *rc.centers : *rc.points) + " centers have d=" +
                     std::to_string(centers->dim()));
  }
  return {std::move(*doc.points), std::move(*centers)};
}

void emit(const RunConfig& rc, const std::string& text, std::ostream& out) {
  if (rc.out) {
    io::write_text_file(*rc.out, text);
  } else {
    out << text;
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string csv_bool(bool b) { return b ? "1" : "0"; }

void cmd_analyze(const RunConfig& rc, std::ostream& out) {
  const Inputs in = load_inputs(rc);
  const auto report = analyze_stability(in.points, in.centers);
  if (rc.format == "csv") {
    std::string text = "index,label,margin,switch_radius,competitor\n";
    for (std::size_t i = 0; i < in.points.size(); ++i) {
      text += std::to_string(i + 1) + "," + std::to_string(report.assignment.labels[i] + 1) + "," +
              io::format_double(report.assignment.margins[i]) + "," +
              io::format_double(report.per_point_switch_radius[i]) + "," +
              std::to_string(report.per_point_competitor[i] + 1) + "\n";
    }
    emit(rc, text, out);
    return;
  }
  json j = io::stability_report_to_json(report);
  j["command"] = "analyze";
  j["k"] = in.centers.size();
  j["d"] = in.points.dim();
  if (rc.epsilon) {
    const double eps = *rc.epsilon;
    if (!(eps >= 0.0)) throw InputError("--epsilon must be nonnegative");
    json cands = json::array();
    for (std::size_t i : switch_candidates(report.assignment, eps)) cands.push_back(i + 1);
    j["certificate"] = {{"epsilon", eps},
                        {"certified", no_switch_certificate(report.assignment, eps)},
                        {"switch_candidates", std::move(cands)}};
  }
  emit(rc, dump(j), out);
}

void cmd_sweep(const RunConfig& rc, std::ostream& out) {
  if (rc.grid.size() < 2) {
    throw InputError("--grid needs at least 2 comma-separated values");
  }
  const std::size_t trials = rc.trials.value_or(100);
  if (trials == 0) throw InputError("--trials must be at least 1");
  const Inputs in = load_inputs(rc);
  const std::uint64_t seed = resolve_seed(rc);
  const auto sweep = stability_sweep(in.points, in.centers, rc.grid, trials, seed, rc.workers);
  if (rc.format == "csv") {
    std::string text = "epsilon,mean_S,max_S,threshold_flag\n";
    for (const auto& row : sweep.rows) {
      text += io::format_double(row.epsilon) + "," + io::format_double(row.mean_distance) + "," +
              io::format_double(row.max_distance) + "," + csv_bool(row.below_threshold) + "\n";
    }
    emit(rc, text, out);
    return;
  }
  json j = io::sweep_to_json(sweep, seed);
  j["command"] = "sweep";
  emit(rc, dump(j), out);
}

void cmd_preset(const RunConfig& rc, std::ostream& out) {
  if (!rc.preset) throw InputError("preset: --preset NAME is required");
  if (rc.points) throw InputError("preset: --points cannot be combined with --preset");
  const PresetData p = make_preset(rc);
  if (rc.format == "csv") {
    if (!rc.out) {
      throw InputError("preset: --format csv needs --out (centers go to <out>.centers.csv)");
    }
    std::filesystem::path points_path(*rc.out);
    std::filesystem::path centers_path = points_path;
    centers_path.replace_extension(".centers.csv");
    io::write_text_file(points_path, io::config_to_csv(p.points.rows()));
    io::write_text_file(centers_path, io::config_to_csv(p.centers.rows()));
    return;
  }
  json j = p.fixture ? io::fixture_to_json(*p.fixture) : io::config_document(p.points, p.centers);
  j["preset"] = *rc.preset;
  if (*rc.preset == "two_gaussians") {
    j["params"] = {{"n", rc.n}, {"sigma0", rc.sigma0}, {"seed", resolve_seed(rc)}};
  }
  emit(rc, dump(j), out);
}

void cmd_construct(const RunConfig& rc, std::ostream& out) {
  if (!rc.preset || *rc.preset == "two_gaussians") {
    throw InputError("construct: --preset must be single_point, many_point or near_boundary");
  }
  if (rc.format != "json") throw InputError("construct: only --format json is supported");
  const PresetData p = make_preset(rc);
  emit(rc, dump(io::fixture_to_json(*p.fixture)), out);
}

void cmd_trajectory(const RunConfig& rc, std::ostream& out) {
  if (!rc.points) throw InputError("trajectory: --points TRAJECTORY_FILE is required");
  if (rc.eta && !(*rc.eta > 0.0 && *rc.eta <= 1.0)) {
    throw InputError("--eta must lie in (0, 1]");
  }
  std::optional<CenterSet> centers;
  if (rc.centers) centers = io::read_centers_file(*rc.centers);
  const Trajectory traj = io::read_trajectory_file(*rc.points, centers);
  const json report = io::trajectory_report_to_json(traj, rc.eta);
  if (rc.format == "csv") {
    std::string text = "t,step_size,cumulative_budget,certified,stepwise_pass,distance_from_initial\n";
    for (std::size_t t = 0; t <= traj.horizon(); ++t) {
      const bool has_step = t < traj.horizon();
      text += std::to_string(t) + "," +
              (has_step ? io::format_double(report["step_sizes"][t].get<double>()) : "") + "," +
              io::format_double(report["cumulative_budgets"][t].get<double>()) + "," +
              csv_bool(report["persistence"][t]["certified"].get<bool>()) + "," +
              (has_step ? csv_bool(report["stepwise_pass"][t].get<bool>()) : "") + "," +
              io::format_double(report["distance_from_initial"][t].get<double>()) + "\n";
    }
    emit(rc, text, out);
    return;
  }
  json j = report;
  j["command"] = "trajectory";
  emit(rc, dump(j), out);
}

PerturbationModel model_from(const RunConfig& rc) {
  if (rc.rho && rc.sigma) throw InputError("give exactly one of --rho or --sigma");
  if (rc.rho) return PerturbationModel::bounded_ball(*rc.rho);
  if (rc.sigma) return PerturbationModel::gaussian(*rc.sigma);
  throw InputError("no noise model: give --rho (bounded disk) or --sigma (gaussian)");
}

void cmd_montecarlo(const RunConfig& rc, std::ostream& out) {
  const std::size_t trials = rc.trials.value_or(1000);
  if (trials == 0) throw InputError("--trials must be at least 1");
  const PerturbationModel model = model_from(rc);
  const Inputs in = load_inputs(rc);
  const std::uint64_t seed = resolve_seed(rc);
  const bool want_trace = rc.trace.has_value() || rc.format == "csv";
  const auto report = monte_carlo(in.points, in.centers, model, trials, seed,
                                  {rc.workers, want_trace});
  std::string trace_csv;
  if (want_trace) {
    trace_csv = "trial,N_sw,distance\n";
    for (const auto& t : report.trace) {
      trace_csv += std::to_string(t.trial) + "," + std::to_string(t.switched) + "," +
                   io::format_double(t.distance) + "\n";
    }
  }
  if (rc.trace) io::write_text_file(*rc.trace, trace_csv);
  if (rc.format == "csv") {
    emit(rc, trace_csv, out);
    return;
  }
  json j = io::monte_carlo_to_json(report);
  j["command"] = "montecarlo";
  emit(rc, dump(j), out);
}

}  // namespace

PresetData two_gaussians_preset(std::size_t n, double sigma0, std::uint64_t seed) {
  CenterSet centers(2, {-1.0, 0.0, 1.0, 0.0});
  std::vector<double> coords;
  coords.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_stream(seed, {0x7072657365ULL, i}));
    const std::size_t label = rng.uniform() < 0.5 ? 0 : 1;
    const auto c = centers.center(label);
    const double dx = rng.normal();
    const double dy = rng.normal();
    coords.push_back(c[0] + sigma0 * dx);
    coords.push_back(c[1] + sigma0 * dy);
  }
  return {PointConfig(2, std::move(coords)), std::move(centers), std::nullopt};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability analysis for nearest-center partitions under perturbation",
               "margin_guard"};
  app.require_subcommand(1);
  RunConfig rc;

  struct Command {
    const char* name;
    const char* help;
    void (*fn)(const RunConfig&, std::ostream&);
  };
  const Command commands[] = {
      {"analyze", "Margins, switch radii and a partition-radius witness", cmd_analyze},
      {"sweep", "S(epsilon) table under bounded noise", cmd_sweep},
      {"preset", "Emit a built-in configuration", cmd_preset},
      {"trajectory", "Persistence and instability-time report for a trajectory", cmd_trajectory},
      {"montecarlo", "Empirical switching versus analytic bounds", cmd_montecarlo},
      {"construct", "Emit an instability counterexample fixture", cmd_construct},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common_options(sub, rc);
    subs.emplace_back(sub, &c);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (const auto& [sub, cmd] : subs) {
      if (sub->parsed()) {
        cmd->fn(rc, out);
      }
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvariantViolation& e) {
    err << "internal invariant violated: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitOk;
}

}  // namespace margin_guard::cli
