// Copyright 2026 The Hotspot IPP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hotspot/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hotspot/baseline.hpp"
#include "hotspot/error.hpp"
#include "hotspot/metrics.hpp"
#include "hotspot/multirobot.hpp"
#include "hotspot/strategy.hpp"

namespace hotspot {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

Point2 to_point(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

const std::vector<Point2>& four_maxima_fleet_starts() {
  // Clustered near the bottom-left corner, next to the decoy peak.
  static const std::vector<Point2> starts{{-149.0, 16.0}, {-150.0, 15.0}, {-148.0, 15.0}, {-150.0, 17.0},
                                          {-148.0, 17.0}, {-151.0, 16.0}, {-147.0, 16.0}, {-149.0, 14.0}};
  return starts;
}

// ---------------------------------------------------------------------------
// Resolution: everything a run needs that is derived from the config.

struct Resolved {
  std::unique_ptr<SpatialField> field;
  FieldReference ref;
  double noise_std = 0.0;
  Hyperparameters true_hyper;
  Hyperparameters adaptive_base;
  Pose start;
  std::vector<Pose> fleet_starts;
  int fleet_epochs = 0;
  double lane_spacing = 0.0;
};

struct Cell {
  std::string group;
  std::string strategy;
  std::string partition;  // empty for single-robot cells
  std::uint64_t seed = 0;
};

struct CurveRow {
  double budget = 0.0;
  int measurements = 0;
  double terminal_regret = 0.0;
  double avg_cumulative_regret = 0.0;
  double rmse = 0.0;
  double distance = 0.0;
};

struct CellResult {
  std::vector<std::pair<std::string, double>> metrics;  // deterministic values, fixed order
  std::vector<CurveRow> curves;
  std::vector<MissionLog> logs;
  std::map<int, double> detection;
  Point2 reported;
  Hyperparameters final_hyper;
  double gp_seconds = 0.0;
  double planner_seconds = 0.0;
  double wall_seconds = 0.0;
  bool stopped_early = false;
};

Resolved resolve(const ExperimentConfig& c, bool estimate) {
  Resolved r;
  r.field = build_field(c.field);
  const Region& region = r.field->region();
  r.ref = make_reference(*r.field, c.eval_resolution);
  r.noise_std = c.noise_percent / 100.0 * r.ref.range;
  const double noise_var = c.given_noise_var.value_or(std::max(r.noise_std * r.noise_std, 1e-5));

  if (c.hyper_mode == "given") {
    r.true_hyper = c.given_hyper;
  } else if (estimate) {
    r.true_hyper = estimate_hyperparameters(*r.field, c.estimate_grid);
  } else {
    r.true_hyper.length_scales = {region.width() / 5.0, region.height() / 5.0};
  }
  r.true_hyper.noise_var = noise_var;

  const double l0 = c.adaptive_length_scale.value_or(region.diagonal());
  r.adaptive_base.signal_std = c.adaptive_signal_std;
  r.adaptive_base.length_scales = {l0, l0};
  r.adaptive_base.noise_var = noise_var;

  Point2 start = region.centroid();
  if (c.start) {
    start = *c.start;
  } else if (c.field.type == "synthetic" && c.field.bumps.empty()) {
    start = four_maxima_fleet_starts().front();
  }
  if (!region.contains(start)) throw Error(ErrorCode::kConfig, "start lies outside the field region");
  r.start.position = start;
  r.start.heading = c.start_heading.value_or(heading_towards_centroid(start, region));

  if (c.fleet) {
    const FleetSpec& f = *c.fleet;
    std::vector<Point2> starts = f.starts;
    if (starts.empty()) {
      if (c.field.type == "synthetic" && c.field.bumps.empty() &&
          f.robots <= static_cast<int>(four_maxima_fleet_starts().size())) {
        starts.assign(four_maxima_fleet_starts().begin(), four_maxima_fleet_starts().begin() + f.robots);
      } else {
        starts.assign(static_cast<std::size_t>(f.robots), start);
      }
    }
    for (const Point2& p : starts) {
      if (!region.contains(p)) throw Error(ErrorCode::kConfig, "fleet start lies outside the field region");
      r.fleet_starts.push_back({p, heading_towards_centroid(p, region)});
    }
    const double per_step = c.planner.step_length + c.eta;
    r.fleet_epochs = f.epochs > 0 ? f.epochs
                                  : static_cast<int>(std::floor(c.budget / (per_step * f.steps_per_epoch) + 1e-9));
    if (r.fleet_epochs < 1) throw Error(ErrorCode::kConfig, "budget too small for one fleet epoch");
  }

  const double mean_l = 0.5 * (r.true_hyper.length_scales[0] + r.true_hyper.length_scales[1]);
  r.lane_spacing = c.bst_lane_spacing.value_or(2.0 * mean_l);
  return r;
}

std::vector<Cell> enumerate_cells(const ExperimentConfig& c) {
  std::vector<Cell> cells;
  for (const std::string& s : c.strategies) {
    std::vector<std::string> partitions{""};
    if (c.fleet && s != "BST") partitions = c.fleet->partitions;
    for (const std::string& p : partitions) {
      const std::string group = p.empty() ? s : s + "/" + p;
      for (std::uint64_t seed : c.seeds) cells.push_back({group, s, p, seed});
    }
  }
  return cells;
}

MissionConfig mission_config(const ExperimentConfig& c, const Resolved& r, StrategyKind kind, std::uint64_t seed) {
  MissionConfig m;
  m.budget = c.budget;
  m.eta = c.eta;
  m.start = r.start;
  m.strategy = kind;
  m.initial_hyper = kind == StrategyKind::kTrueGP ? r.true_hyper : r.adaptive_base;
  m.planner = c.planner;
  m.seed = seed;
  m.eval_resolution = c.eval_resolution;
  m.checkpoint_interval = c.checkpoint_interval;
  m.final_restarts = c.final_restarts;
  m.step_restarts = c.step_restarts;
  return m;
}

BoustrophedonPlan random_plan(const Region& sub, double spacing, bool randomize, std::uint64_t seed) {
  BoustrophedonPlan plan{sub};
  plan.lane_spacing = std::min({spacing, sub.width(), sub.height()});
  if (randomize) {
    Rng rng(seed);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> corner(0, 3);
    plan.orientation = coin(rng) == 0 ? SweepOrientation::kHorizontal : SweepOrientation::kVertical;
    plan.start_corner = static_cast<Corner>(corner(rng));
  }
  return plan;
}

void add_single_metrics(const ExperimentConfig& c, const MissionLog& log, CellResult& out) {
  if (log.checkpoints.empty()) throw Error(ErrorCode::kInternal, "mission produced no checkpoints");
  const CheckpointRecord& last = log.checkpoints.back();
  out.metrics = {{"terminal_regret", last.terminal_regret},
                 {"avg_cumulative_regret", last.avg_cumulative_regret},
                 {"rmse", last.rmse},
                 {"distance", last.distance},
                 {"measurements", static_cast<double>(log.measurements())}};
  for (std::size_t w = 0; w < c.windows.size(); ++w) {
    double sum = 0.0;
    int n = 0;
    for (const CheckpointRecord& cp : log.checkpoints) {
      if (cp.budget >= c.windows[w].first && cp.budget <= c.windows[w].second) {
        sum += cp.terminal_regret;
        ++n;
      }
    }
    if (n > 0) out.metrics.emplace_back("terminal_regret_w" + std::to_string(w + 1), sum / n);
  }
  for (const CheckpointRecord& cp : log.checkpoints) {
    out.curves.push_back({cp.budget, cp.measurements, cp.terminal_regret, cp.avg_cumulative_regret, cp.rmse,
                          cp.distance});
  }
  out.reported = log.reported;
  out.final_hyper = log.final_hyper;
  out.gp_seconds = log.gp_seconds;
  out.planner_seconds = log.planner_seconds;
}

void add_fleet_metrics(const FleetResult& f, std::size_t hotspots, CellResult& out) {
  int measurements = 0;
  for (const MissionLog& l : f.robots) measurements += l.measurements();
  out.metrics = {{"terminal_regret", f.terminal_regret},
                 {"avg_cumulative_regret", f.avg_cumulative_regret},
                 {"rmse", f.rmse},
                 {"distance", f.distance},
                 {"measurements", static_cast<double>(measurements)}};
  for (std::size_t j = 1; j <= hotspots; ++j) {
    const auto it = f.detection_times.find(static_cast<int>(j));
    if (it != f.detection_times.end()) out.metrics.emplace_back("detect_" + std::to_string(j), it->second);
  }
  out.detection = f.detection_times;
  out.reported = f.reported;
  out.final_hyper = f.final_hyper;
  out.stopped_early = f.stopped_early;
  for (const MissionLog& l : f.robots) {
    out.gp_seconds += l.gp_seconds;
    out.planner_seconds += l.planner_seconds;
  }
}

// Every robot sweeps its own vertical strip; samples are pooled into one GP.
FleetResult run_fleet_bst(const ExperimentConfig& c, const Resolved& r, std::uint64_t seed) {
  const SpatialField& field = *r.field;
  const Region& region = field.region();
  const int k = c.fleet->robots;
  const std::vector<Region> strips = split_strips(region, k);
  FleetResult result;
  std::vector<MeasurementEvent> events;
  BstMissionOptions options;
  options.budget = c.budget;
  options.eta = c.eta;
  options.step_length = c.planner.step_length;
  options.hyper = r.true_hyper;
  options.eval_resolution = c.eval_resolution;
  options.checkpoint_interval = 0.0;
  options.final_restarts = 1;
  for (int i = 0; i < k; ++i) {
    const auto robot = static_cast<std::uint64_t>(i);
    Sensor sensor(r.noise_std, derive_seed(seed, robot, kSensorStream));
    const BoustrophedonPlan plan = random_plan(strips[static_cast<std::size_t>(i)], r.lane_spacing, c.bst_randomize,
                                               derive_seed(seed, robot, kBaselineStream));
    MissionLog log = run_bst_mission(field, sensor, plan, options);
    log.robot = i;
    for (const StepRecord& s : log.steps) {
      result.observations.push_back({s.pose.position, s.measurement, i, s.t});
      events.push_back({s.time, i, s.pose.position});
    }
    result.robots.push_back(std::move(log));
  }
  std::vector<Point2> xs;
  std::vector<double> ys;
  for (const Observation& o : result.observations) {
    xs.push_back(o.position);
    ys.push_back(o.value);
  }
  const EvaluationGrid grid(region, c.eval_resolution);
  GPModel combined(r.true_hyper, xs, ys);
  const FinalReport report = final_report(combined, grid, c.final_restarts, region.diagonal());
  result.final_hyper = report.hyper;
  result.reported = report.reported;
  result.detection_times = detection_times(events, field.maxima(), c.detection_radius);
  result.terminal_regret = terminal_regret(field, r.ref, report.reported);
  result.avg_cumulative_regret = xs.empty() ? 0.0 : avg_cumulative_regret(field, r.ref, xs);
  result.rmse = rmse(field, r.ref, combined, grid);
  result.distance = distance_error(report.reported, r.ref.max_location, region);
  result.robots.front().gp_seconds += report.gp_seconds;
  return result;
}

CellResult run_cell(const ExperimentConfig& c, const Resolved& r, const Cell& cell) {
  const auto t0 = std::chrono::steady_clock::now();
  CellResult out;
  const SpatialField& field = *r.field;
  if (!c.fleet) {
    Sensor sensor(r.noise_std, derive_seed(cell.seed, 0, kSensorStream));
    MissionLog log;
    if (cell.strategy == "BST") {
      BstMissionOptions options;
      options.budget = c.budget;
      options.eta = c.eta;
      options.step_length = c.planner.step_length;
      options.hyper = r.true_hyper;
      options.eval_resolution = c.eval_resolution;
      options.checkpoint_interval = c.checkpoint_interval;
      options.final_restarts = c.final_restarts;
      const BoustrophedonPlan plan =
          random_plan(field.region(), r.lane_spacing, c.bst_randomize, derive_seed(cell.seed, 0, kBaselineStream));
      log = run_bst_mission(field, sensor, plan, options);
    } else {
      log = run_mission(field, sensor, mission_config(c, r, parse_strategy(cell.strategy), cell.seed));
    }
    add_single_metrics(c, log, out);
    out.logs.push_back(std::move(log));
  } else {
    FleetResult f;
    if (cell.strategy == "BST") {
      f = run_fleet_bst(c, r, cell.seed);
    } else {
      FleetConfig fc;
      fc.mission = mission_config(c, r, parse_strategy(cell.strategy), cell.seed);
      fc.starts = r.fleet_starts;
      fc.epochs = r.fleet_epochs;
      fc.steps_per_epoch = c.fleet->steps_per_epoch;
      fc.mode = parse_partition_mode(cell.partition);
      fc.noise_std = r.noise_std;
      fc.detection_radius = c.detection_radius;
      fc.stop_when_all_detected = c.fleet->stop_when_all_detected;
      f = run_fleet(field, fc);
    }
    add_fleet_metrics(f, field.maxima().size(), out);
    out.logs = std::move(f.robots);
  }
  for (const MissionLog& l : out.logs) {
    if (!budget_respected(l)) throw Error(ErrorCode::kInternal, "budget violated in " + cell.group);
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

int worker_count(int requested, std::size_t jobs) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("HOTSPOT_IPP_THREADS")) n = std::atoi(env);
  }
  if (n <= 0) n = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  return std::max(1, std::min<int>(n, static_cast<int>(std::max<std::size_t>(jobs, 1))));
}

std::string file_stem_for(const Cell& cell) {
  std::string g = cell.group;
  std::replace(g.begin(), g.end(), '/', '_');
  return g + "_seed" + std::to_string(cell.seed);
}

std::string step_csv(const MissionLog& log) {
  std::ostringstream os;
  os << "t,x,y,heading,measurement,signal_std,length_scale_1,length_scale_2,noise_var,beta,time,gp_seconds\n";
  for (const StepRecord& s : log.steps) {
    os << s.t << ',' << fixed6(s.pose.position.x) << ',' << fixed6(s.pose.position.y) << ','
       << fixed6(s.pose.heading) << ',' << fixed6(s.measurement) << ',' << fixed6(s.hyper.signal_std) << ','
       << fixed6(s.hyper.length_scales[0]) << ',' << fixed6(s.hyper.length_scales[1]) << ','
       << fixed6(s.hyper.noise_var) << ',' << fixed6(s.beta) << ',' << fixed6(s.time) << ','
       << fixed6(s.gp_seconds) << '\n';
  }
  return os.str();
}

json hyper_json(const Hyperparameters& h) {
  return {{"signal_std", h.signal_std},
          {"length_scales", {h.length_scales[0], h.length_scales[1]}},
          {"noise_var", h.noise_var}};
}

json config_json(const ExperimentConfig& c, const Resolved& r) {
  json field = {{"type", c.field.type}};
  if (!c.field.preset.empty()) field["preset"] = c.field.preset;
  if (c.field.region) {
    field["region"] = {c.field.region->x_min(), c.field.region->x_max(), c.field.region->y_min(),
                       c.field.region->y_max()};
  }
  if (!c.field.bumps.empty()) {
    field["bumps"] = json::array();
    for (const Bump& b : c.field.bumps) {
      field["bumps"].push_back({{"center", {b.center.x, b.center.y}}, {"height", b.height}, {"width", b.width}});
    }
  }
  if (!c.field.path.empty()) field["path"] = c.field.path;
  json j = {{"schema_version", 1},
            {"name", c.name},
            {"field", field},
            {"strategies", c.strategies},
            {"budget", c.budget},
            {"eta", c.eta},
            {"noise_percent", c.noise_percent},
            {"noise_std", r.noise_std},
            {"seeds", c.seeds},
            {"start", {r.start.position.x, r.start.position.y}},
            {"start_heading", r.start.heading},
            {"hyperparameters", {{"mode", c.hyper_mode}, {"resolved", hyper_json(r.true_hyper)}}},
            {"adaptive_base", hyper_json(r.adaptive_base)},
            {"planner",
             {{"num_primitives", c.planner.num_primitives},
              {"heading_fan", c.planner.heading_fan},
              {"step_length", c.planner.step_length},
              {"iteration_cap", c.planner.iteration_cap},
              {"delta", c.planner.delta},
              {"grid_size", c.planner.grid_size},
              {"rollout_resamples", c.planner.rollout_resamples},
              {"step_restarts", c.step_restarts}}},
            {"bst", {{"lane_spacing", r.lane_spacing}, {"randomize", c.bst_randomize}}},
            {"detection_radius", c.detection_radius},
            {"eval_resolution", c.eval_resolution},
            {"checkpoint_interval", c.checkpoint_interval},
            {"final_restarts", c.final_restarts}};
  json windows = json::array();
  for (const auto& w : c.windows) windows.push_back({w.first, w.second});
  j["windows"] = windows;
  if (c.fleet) {
    json starts = json::array();
    for (const Pose& p : r.fleet_starts) starts.push_back({p.position.x, p.position.y});
    j["fleet"] = {{"robots", c.fleet->robots},
                  {"starts", starts},
                  {"epochs", r.fleet_epochs},
                  {"steps_per_epoch", c.fleet->steps_per_epoch},
                  {"partitions", c.fleet->partitions},
                  {"stop_when_all_detected", c.fleet->stop_when_all_detected}};
  }
  return j;
}

std::string describe(const ExperimentConfig& c, const Resolved& r, const std::vector<Cell>& cells,
                     const std::string& out_dir) {
  std::ostringstream os;
  const Region& region = r.field->region();
  os << "experiment: " << c.name << '\n';
  os << "field: " << c.field.type;
  if (!c.field.path.empty()) os << " (" << c.field.path << ")";
  if (!c.field.preset.empty()) os << " (" << c.field.preset << ")";
  os << " over [" << region.x_min() << ", " << region.x_max() << "] x [" << region.y_min() << ", "
     << region.y_max() << "]\n";
  os << "field range: " << fixed6(r.ref.range) << ", noise std: " << fixed6(r.noise_std) << '\n';
  os << "hyperparameters: " << c.hyper_mode;
  if (c.hyper_mode == "estimate") os << " (" << c.estimate_grid << "x" << c.estimate_grid << " NLML fit at run time)";
  os << '\n';
  os << "budget: " << c.budget << ", eta: " << c.eta << ", step: " << c.planner.step_length << '\n';
  if (c.fleet) {
    os << "fleet: " << c.fleet->robots << " robots, " << r.fleet_epochs << " epochs x " << c.fleet->steps_per_epoch
       << " steps\n";
  } else {
    os << "start: (" << r.start.position.x << ", " << r.start.position.y << ")\n";
  }
  os << "seeds:";
  for (std::uint64_t s : c.seeds) os << ' ' << s;
  os << '\n';
  std::vector<std::string> groups;
  for (const Cell& cell : cells) {
    if (std::find(groups.begin(), groups.end(), cell.group) == groups.end()) groups.push_back(cell.group);
  }
  os << "groups:";
  for (const std::string& g : groups) os << ' ' << g;
  os << '\n';
  os << "missions: " << cells.size() << '\n';
  os << "output: " << out_dir << '\n';
  return os.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

ExperimentConfig parse_experiment_config(const std::string& json_text, const std::string& base_dir) {
  const std::vector<std::string> problems = validate_config_text(json_text);
  if (!problems.empty()) {
    std::string msg = "config does not match the schema:";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw Error(ErrorCode::kConfig, msg);
  }
  const json j = json::parse(json_text);
  ExperimentConfig c;
  c.name = j.value("name", c.name);
  c.description = j.value("description", std::string());

  const json& f = j["field"];
  c.field.type = f["type"].get<std::string>();
  if (c.field.type == "dataset") {
    if (!f.contains("path")) throw Error(ErrorCode::kConfig, "/field: dataset fields need a 'path'");
    fs::path p = f["path"].get<std::string>();
    if (p.is_relative()) p = fs::path(base_dir) / p;
    c.field.path = p.lexically_normal().string();
  } else {
    if (f.contains("path")) throw Error(ErrorCode::kConfig, "/field: 'path' only applies to dataset fields");
    if (f.contains("bumps")) {
      if (!f.contains("region")) throw Error(ErrorCode::kConfig, "/field: custom bumps need a 'region'");
      for (const json& b : f["bumps"]) {
        c.field.bumps.push_back({to_point(b["center"]), b["height"].get<double>(), b["width"].get<double>()});
      }
    } else {
      c.field.preset = f.value("preset", std::string("four_maxima"));
    }
    if (f.contains("region")) {
      const json& r = f["region"];
      c.field.region = Region(r[0].get<double>(), r[1].get<double>(), r[2].get<double>(), r[3].get<double>());
    }
  }

  c.strategies = j["strategies"].get<std::vector<std::string>>();
  if (std::set<std::string>(c.strategies.begin(), c.strategies.end()).size() != c.strategies.size()) {
    throw Error(ErrorCode::kConfig, "/strategies: duplicate entries");
  }
  c.budget = j.value("budget", c.budget);
  c.eta = j.value("eta", c.eta);
  c.noise_percent = j.value("noise_percent", c.noise_percent);
  if (j.contains("seeds") && j.contains("num_seeds")) {
    throw Error(ErrorCode::kConfig, "give either 'seeds' or 'num_seeds', not both");
  }
  if (j.contains("seeds")) {
    c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  } else {
    const int n = j.value("num_seeds", 10);
    const std::uint64_t base = j.value("base_seed", std::uint64_t{1});
    for (int i = 0; i < n; ++i) c.seeds.push_back(base + static_cast<std::uint64_t>(i));
  }
  if (j.contains("start")) c.start = to_point(j["start"]);
  if (j.contains("start_heading")) c.start_heading = j["start_heading"].get<double>();

  if (j.contains("hyperparameters")) {
    const json& h = j["hyperparameters"];
    c.hyper_mode = h.value("mode", c.hyper_mode);
    if (h.contains("noise_var")) c.given_noise_var = h["noise_var"].get<double>();
    c.estimate_grid = h.value("estimate_grid", c.estimate_grid);
    if (c.hyper_mode == "given") {
      if (!h.contains("signal_std") || !h.contains("length_scales")) {
        throw Error(ErrorCode::kConfig, "/hyperparameters: 'given' mode needs signal_std and length_scales");
      }
      c.given_hyper.signal_std = h["signal_std"].get<double>();
      c.given_hyper.length_scales = {h["length_scales"][0].get<double>(), h["length_scales"][1].get<double>()};
    }
  }
  if (j.contains("adaptive_base")) {
    const json& a = j["adaptive_base"];
    c.adaptive_signal_std = a.value("signal_std", c.adaptive_signal_std);
    if (a.contains("length_scale")) c.adaptive_length_scale = a["length_scale"].get<double>();
  }
  if (j.contains("planner")) {
    const json& p = j["planner"];
    c.planner.num_primitives = p.value("num_primitives", c.planner.num_primitives);
    c.planner.heading_fan = p.value("heading_fan", c.planner.heading_fan);
    c.planner.step_length = p.value("step_length", c.planner.step_length);
    c.planner.iteration_cap = p.value("iteration_cap", c.planner.iteration_cap);
    c.planner.delta = p.value("delta", c.planner.delta);
    c.planner.grid_size = p.value("grid_size", c.planner.grid_size);
    c.planner.rollout_resamples = p.value("rollout_resamples", c.planner.rollout_resamples);
    c.step_restarts = p.value("step_restarts", c.step_restarts);
  }
  if (j.contains("fleet")) {
    const json& fl = j["fleet"];
    FleetSpec spec;
    spec.robots = fl["robots"].get<int>();
    if (fl.contains("starts")) {
      for (const json& s : fl["starts"]) spec.starts.push_back(to_point(s));
      if (static_cast<int>(spec.starts.size()) != spec.robots) {
        throw Error(ErrorCode::kConfig, "/fleet/starts: need exactly one start per robot");
      }
    }
    spec.epochs = fl.value("epochs", 0);
    spec.steps_per_epoch = fl.value("steps_per_epoch", spec.steps_per_epoch);
    if (fl.contains("partitions")) spec.partitions = fl["partitions"].get<std::vector<std::string>>();
    spec.stop_when_all_detected = fl.value("stop_when_all_detected", false);
    if (std::find(c.strategies.begin(), c.strategies.end(), "OptGP") != c.strategies.end()) {
      throw Error(ErrorCode::kConfig, "/strategies: OptGP is single-robot only");
    }
    c.fleet = spec;
  }
  if (j.contains("bst")) {
    const json& b = j["bst"];
    if (b.contains("lane_spacing")) c.bst_lane_spacing = b["lane_spacing"].get<double>();
    c.bst_randomize = b.value("randomize", c.bst_randomize);
  }
  c.detection_radius = j.value("detection_radius", c.detection_radius);
  c.eval_resolution = j.value("eval_resolution", c.eval_resolution);
  c.checkpoint_interval = j.value("checkpoint_interval", c.checkpoint_interval);
  c.final_restarts = j.value("final_restarts", c.final_restarts);
  if (j.contains("windows")) {
    for (const json& w : j["windows"]) {
      const double a = w[0].get<double>();
      const double b = w[1].get<double>();
      if (a > b) throw Error(ErrorCode::kConfig, "/windows: window start after its end");
      c.windows.emplace_back(a, b);
    }
  }
  fs::path out = j.value("output_dir", c.output_dir);
  if (out.is_relative()) out = fs::path(base_dir) / out;
  c.output_dir = out.lexically_normal().string();
  try {
    c.planner.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, std::string("/planner: ") + e.what());
  }
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  const fs::path p(path);
  std::string base = p.has_parent_path() ? p.parent_path().string() : std::string(".");
  return parse_experiment_config(read_text(p), base);
}

std::unique_ptr<SpatialField> build_field(const FieldSpec& spec) {
  if (spec.type == "dataset") {
    if (!fs::exists(spec.path)) throw Error(ErrorCode::kIo, "dataset not found: " + spec.path);
    return std::make_unique<GriddedField>(load_gridded_field(spec.path));
  }
  if (!spec.bumps.empty()) {
    if (!spec.region) throw Error(ErrorCode::kConfig, "custom bumps need a region");
    return std::make_unique<SyntheticField>(*spec.region, spec.bumps);
  }
  if (spec.preset.empty() || spec.preset == "four_maxima") {
    SyntheticField base = make_four_maxima_field();
    if (spec.region && !(*spec.region == base.region())) {
      throw Error(ErrorCode::kConfig, "the four_maxima preset has a fixed region");
    }
    return std::make_unique<SyntheticField>(std::move(base));
  }
  throw Error(ErrorCode::kConfig, "unknown field preset '" + spec.preset + "'");
}

Hyperparameters estimate_hyperparameters(const SpatialField& field, int grid_size, double noise_var) {
  if (grid_size < 3) throw Error(ErrorCode::kInvalidArgument, "estimate grid must be >= 3");
  const EvaluationGrid grid(field.region(), grid_size);
  std::vector<double> values;
  values.reserve(grid.size());
  for (const Point2& p : grid.points()) values.push_back(field.value(p));
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());

  Hyperparameters init;
  init.signal_std = std::max(std::sqrt(var), 1e-3);
  init.length_scales = {field.region().width() / 5.0, field.region().height() / 5.0};
  init.noise_var = noise_var;
  GPModel model(init, grid.points(), values);
  OptimizeOptions options;
  options.restarts = 5;
  options.domain_diameter = field.region().diagonal();
  return optimize_hyperparameters(model, init, true, options).hyper;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  ExperimentConfig c = config;
  if (options.num_seeds) {
    if (*options.num_seeds < 1) throw Error(ErrorCode::kConfig, "--seeds must be >= 1");
    const std::uint64_t base = c.seeds.empty() ? 1 : c.seeds.front();
    c.seeds.clear();
    for (int i = 0; i < *options.num_seeds; ++i) c.seeds.push_back(base + static_cast<std::uint64_t>(i));
  }
  if (options.output_dir) c.output_dir = *options.output_dir;

  const Resolved r = resolve(c, !options.dry_run);
  const std::vector<Cell> cells = enumerate_cells(c);
  ExperimentOutcome outcome;
  outcome.plan = describe(c, r, cells, c.output_dir);
  outcome.output_dir = c.output_dir;
  outcome.missions = static_cast<int>(cells.size());
  if (options.dry_run) return outcome;

  std::vector<CellResult> results(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        results[i] = run_cell(c, r, cells[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_workers = worker_count(options.threads, cells.size());
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Aggregation, in cell order.
  const fs::path out(c.output_dir);
  fs::create_directories(out / "missions");
  std::vector<std::string> groups;
  std::map<std::string, std::vector<std::string>> metric_order;
  std::map<std::string, std::map<std::string, std::vector<double>>> samples;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string& g = cells[i].group;
    if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
    for (const auto& [name, value] : results[i].metrics) {
      auto& order = metric_order[g];
      if (std::find(order.begin(), order.end(), name) == order.end()) order.push_back(name);
      samples[g][name].push_back(value);
    }
  }
  // Detection metrics can be missing for some seeds; keep them in hotspot order after the rest.
  for (auto& [g, order] : metric_order) {
    std::stable_partition(order.begin(), order.end(), [](const std::string& m) { return m.rfind("detect_", 0) != 0; });
  }

  std::ostringstream summary_csv;
  summary_csv << "group,metric,mean,std,count\n";
  json groups_json = json::object();
  for (const std::string& g : groups) {
    for (const std::string& m : metric_order[g]) {
      const std::vector<double>& v = samples[g][m];
      const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
      double ss = 0.0;
      for (double x : v) ss += (x - mean) * (x - mean);
      const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
      outcome.summary.push_back({g, m, mean, sd, static_cast<int>(v.size())});
      summary_csv << g << ',' << m << ',' << fixed6(mean) << ',' << fixed6(sd) << ',' << v.size() << '\n';
      groups_json[g][m] = {{"mean", mean}, {"std", sd}, {"count", v.size()}};
    }
  }
  write_text(out / "summary.csv", summary_csv.str());

  std::ostringstream curves;
  curves << "group,seed,budget,measurements,terminal_regret,avg_cumulative_regret,rmse,distance\n";
  json missions = json::array();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& cell = cells[i];
    const CellResult& res = results[i];
    for (const CurveRow& row : res.curves) {
      curves << cell.group << ',' << cell.seed << ',' << fixed6(row.budget) << ',' << row.measurements << ','
             << fixed6(row.terminal_regret) << ',' << fixed6(row.avg_cumulative_regret) << ',' << fixed6(row.rmse)
             << ',' << fixed6(row.distance) << '\n';
    }
    json metrics = json::object();
    for (const auto& [name, value] : res.metrics) metrics[name] = value;
    json m = {{"group", cell.group},
              {"strategy", cell.strategy},
              {"seed", cell.seed},
              {"metrics", metrics},
              {"reported", {res.reported.x, res.reported.y}},
              {"final_hyperparameters", hyper_json(res.final_hyper)},
              {"timings",
               {{"gp_seconds", res.gp_seconds}, {"planner_seconds", res.planner_seconds}, {"wall_seconds", res.wall_seconds}}}};
    if (!cell.partition.empty()) m["partition"] = cell.partition;
    if (c.fleet) {
      json det = json::object();
      for (const auto& [count, time] : res.detection) det[std::to_string(count)] = time;
      m["detection_times"] = det;
      m["stopped_early"] = res.stopped_early;
    }
    json logs = json::array();
    for (const MissionLog& log : res.logs) {
      std::string name = file_stem_for(cell);
      if (c.fleet) name += "_robot" + std::to_string(log.robot);
      name += ".csv";
      write_text(out / "missions" / name, step_csv(log));
      logs.push_back({{"robot", log.robot},
                      {"file", "missions/" + name},
                      {"measurements", log.measurements()},
                      {"truncated", log.truncated}});
    }
    m["logs"] = logs;
    missions.push_back(m);
    outcome.records.push_back({cell.group, cell.strategy, cell.partition, cell.seed, res.metrics, res.logs,
                               res.detection, res.stopped_early});
  }
  write_text(out / "curves.csv", curves.str());

  json summary = {{"version", HOTSPOT_VERSION},
                  {"config", config_json(c, r)},
                  {"groups", groups_json},
                  {"missions", missions}};
  write_text(out / "summary.json", summary.dump(2) + "\n");
  return outcome;
}

// ---------------------------------------------------------------------------

CompareOutcome compare_summaries(const std::vector<std::string>& paths) {
  if (paths.size() < 2) throw Error(ErrorCode::kInvalidArgument, "compare needs at least two summaries");
  struct Table {
    std::string label;
    std::vector<std::string> groups;
    std::vector<std::pair<std::string, std::string>> keys;
    std::map<std::pair<std::string, std::string>, std::pair<double, double>> values;
  };
  std::vector<Table> tables;
  for (const std::string& path : paths) {
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::kParse, path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "group,metric,mean,std,count") throw Error(ErrorCode::kParse, path + ": not a summary.csv header");
    Table t;
    fs::path p(path);
    t.label = p.has_parent_path() && p.parent_path().has_filename() ? p.parent_path().filename().string() : p.stem().string();
    int row = 1;
    while (std::getline(in, line)) {
      ++row;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const std::vector<std::string> f = split_csv_line(line);
      if (f.size() != 5) throw Error(ErrorCode::kParse, path + ": row " + std::to_string(row) + ": expected 5 columns");
      try {
        t.values[{f[0], f[1]}] = {std::stod(f[2]), std::stod(f[3])};
      } catch (const std::exception&) {
        throw Error(ErrorCode::kParse, path + ": row " + std::to_string(row) + ": bad number");
      }
      t.keys.emplace_back(f[0], f[1]);
      if (std::find(t.groups.begin(), t.groups.end(), f[0]) == t.groups.end()) t.groups.push_back(f[0]);
    }
    tables.push_back(std::move(t));
  }

  const bool by_group = std::all_of(tables.begin(), tables.end(), [](const Table& t) { return t.groups.size() == 1; });
  auto key_of = [&](const std::pair<std::string, std::string>& k) { return by_group ? k.second : k.first + "," + k.second; };
  std::vector<std::string> labels;
  for (const Table& t : tables) labels.push_back(by_group ? t.groups.front() : t.label);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (labels[i] == labels[j]) labels[i] += "#" + std::to_string(i + 1);
    }
  }

  std::vector<std::string> keys;
  for (const auto& k : tables.front().keys) keys.push_back(key_of(k));
  std::vector<std::string> mismatches;
  for (std::size_t i = 1; i < tables.size(); ++i) {
    std::set<std::string> mine;
    for (const auto& k : tables[i].keys) mine.insert(key_of(k));
    const std::set<std::string> first(keys.begin(), keys.end());
    for (const std::string& k : first) {
      if (!mine.count(k)) mismatches.push_back(paths[i] + " lacks '" + k + "'");
    }
    for (const std::string& k : mine) {
      if (!first.count(k)) mismatches.push_back(paths[i] + " has extra '" + k + "'");
    }
  }
  if (!mismatches.empty()) {
    std::string msg = "summaries do not share the same metrics:";
    for (const std::string& m : mismatches) msg += "\n  " + m;
    throw Error(ErrorCode::kStructure, msg);
  }

  auto lookup = [&](const Table& t, const std::string& key) {
    for (const auto& [k, v] : t.values) {
      if (key_of(k) == key) return v;
    }
    return std::pair<double, double>{0.0, 0.0};
  };

  CompareOutcome out;
  std::ostringstream csv;
  csv << (by_group ? "metric" : "group,metric");
  for (const std::string& l : labels) csv << ',' << l << "_mean," << l << "_std";
  csv << ",max_abs_diff\n";
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"metric"};
  for (const std::string& l : labels) header.push_back(l);
  header.push_back("max_abs_diff");
  rows.push_back(header);
  for (const std::string& key : keys) {
    std::vector<double> means;
    std::vector<std::string> cells{by_group ? key : key.substr(0, key.find(',')) + " " + key.substr(key.find(',') + 1)};
    csv << key;
    for (const Table& t : tables) {
      const auto [mean, sd] = lookup(t, key);
      means.push_back(mean);
      csv << ',' << fixed6(mean) << ',' << fixed6(sd);
      cells.push_back(fixed6(mean) + " +- " + fixed6(sd));
    }
    const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
    const double diff = *hi - *lo;
    out.max_abs_diff = std::max(out.max_abs_diff, diff);
    csv << ',' << fixed6(diff) << '\n';
    cells.push_back(fixed6(diff));
    rows.push_back(cells);
  }
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::ostringstream table;
  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    for (std::size_t i = 0; i < rows[ri].size(); ++i) {
      if (i > 0) table << "  ";
      if (i == 0) {
        table << std::left << std::setw(static_cast<int>(width[i])) << rows[ri][i];
      } else {
        table << std::right << std::setw(static_cast<int>(width[i])) << rows[ri][i];
      }
    }
    table << '\n';
    if (ri == 0) {
      std::size_t total = 0;
      for (std::size_t w : width) total += w;
      table << std::string(total + 2 * (width.size() - 1), '-') << '\n';
    }
  }
  out.csv = csv.str();
  out.table = table.str();
  return out;
}

}  // namespace hotspot
