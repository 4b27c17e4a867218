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

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hotspot/field.hpp"
#include "hotspot/gp.hpp"
#include "hotspot/planner.hpp"
#include "hotspot/strategy.hpp"

namespace hotspot {

struct FieldSpec {
  std::string type = "synthetic";  // "synthetic" or "dataset"
  std::string preset;              // "four_maxima" when bumps are not given
  std::optional<Region> region;
  std::vector<Bump> bumps;
  std::string path;  // dataset CSV, resolved against the config directory
};

struct FleetSpec {
  int robots = 1;
  std::vector<Point2> starts;
  int epochs = 0;  // 0: as many as the budget allows
  int steps_per_epoch = 10;
  std::vector<std::string> partitions{"Voronoi"};
  bool stop_when_all_detected = false;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::string description;
  FieldSpec field;
  std::vector<std::string> strategies;
  double budget = 350.0;
  double eta = 0.0;
  double noise_percent = 5.0;
  std::vector<std::uint64_t> seeds;
  std::optional<Point2> start;
  std::optional<double> start_heading;
  std::string hyper_mode = "estimate";  // "given" or "estimate"
  Hyperparameters given_hyper;
  std::optional<double> given_noise_var;
  int estimate_grid = 30;
  double adaptive_signal_std = 1.0;
  std::optional<double> adaptive_length_scale;  // default: region diagonal
  PlannerConfig planner;
  int step_restarts = 1;
  std::optional<FleetSpec> fleet;
  std::optional<double> bst_lane_spacing;  // default: twice the mean length scale
  bool bst_randomize = true;
  double detection_radius = 2.0;
  int eval_resolution = 130;
  double checkpoint_interval = 10.0;
  int final_restarts = 5;
  std::vector<std::pair<double, double>> windows;
  std::string output_dir = "results";
};

/// Text of the bundled JSON schema that every config is validated against.
const std::string& experiment_schema();

/// Schema diagnostics for a config document, empty when valid.
std::vector<std::string> validate_config_text(const std::string& json_text);

/// Parses and validates; throws kConfig listing every diagnostic. Relative
/// paths resolve against `base_dir`.
ExperimentConfig parse_experiment_config(const std::string& json_text, const std::string& base_dir);
ExperimentConfig load_experiment_config(const std::string& path);

/// Builds the ground-truth field a config describes.
std::unique_ptr<SpatialField> build_field(const FieldSpec& spec);

/// NLML fit on an n x n grid of noiseless field values with the noise
/// variance held at `noise_var`.
Hyperparameters estimate_hyperparameters(const SpatialField& field, int grid_size, double noise_var = 1e-5);

struct RunOptions {
  std::optional<int> num_seeds;  // replaces the seed list with base..base+N-1
  std::optional<std::string> output_dir;
  bool dry_run = false;
  int threads = 0;  // 0: HOTSPOT_IPP_THREADS, else hardware concurrency
};

struct SummaryRow {
  std::string group;
  std::string metric;
  double mean = 0.0;
  double std = 0.0;
  int count = 0;
};

/// Everything one (group, seed) cell produced. Fleets hold one log per robot.
struct MissionRecord {
  std::string group;
  std::string strategy;
  std::string partition;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<MissionLog> logs;
  std::map<int, double> detection_times;
  bool stopped_early = false;
};

struct ExperimentOutcome {
  std::string plan;  // human-readable resolved plan
  std::string output_dir;
  int missions = 0;
  std::vector<SummaryRow> summary;
  std::vector<MissionRecord> records;  // in cell order
};

/// Runs every (strategy x partition x seed) cell and writes summary.csv,
/// summary.json, curves.csv and per-mission step logs to the output
/// directory. Everything except wall-clock timings is a pure function of
/// the config and seeds.
ExperimentOutcome run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

struct CompareOutcome {
  std::string csv;
  std::string table;
  double max_abs_diff = 0.0;
};

/// Side-by-side view of two or more summary.csv files. When every input
/// holds a single group, columns are labelled by group and rows keyed by
/// metric; otherwise rows are keyed by (group, metric).
CompareOutcome compare_summaries(const std::vector<std::string>& paths);

}  // namespace hotspot
