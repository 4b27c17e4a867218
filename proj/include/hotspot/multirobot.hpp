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

#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "hotspot/field.hpp"
#include "hotspot/gp.hpp"
#include "hotspot/strategy.hpp"

namespace hotspot {

/// Discrete Voronoi partition of an evaluation grid.
struct VoronoiPartition {
  std::vector<Point2> generators;
  std::vector<int> assignment;  // per grid point, index into generators

  std::vector<int> cell_sizes() const;
};

/// Index of the nearest generator; ties go to the lowest index.
int nearest_generator(std::span<const Point2> generators, Point2 p);

VoronoiPartition compute_partition(std::span<const Point2> generators, const EvaluationGrid& grid);

/// Sum p w / sum w. Weights are floored at 1e-12.
Point2 weighted_centroid(std::span<const Point2> cell, std::span<const double> weights);

/// Same, with UCB weights mu + sqrt(beta_t) sigma from `gp`.
Point2 weighted_centroid(std::span<const Point2> cell, const GPModel& gp, int t, const PlannerConfig& config);

enum class PartitionMode { kNone, kVoronoi };

std::string_view to_string(PartitionMode mode);
PartitionMode parse_partition_mode(std::string_view name);

struct FleetConfig {
  /// Shared per-robot settings; `mission.start` is ignored in favor of `starts`.
  MissionConfig mission;
  std::vector<Pose> starts;  // one per robot
  int epochs = 35;
  int steps_per_epoch = 10;
  PartitionMode mode = PartitionMode::kVoronoi;
  double noise_std = 0.0;  // field units
  double detection_radius = 2.0;
  bool stop_when_all_detected = false;

  int robots() const { return static_cast<int>(starts.size()); }
  void validate() const;
};

/// A pooled sample with its provenance.
struct Observation {
  Point2 position;
  double value = 0.0;
  int robot = 0;
  int step = 0;
};

struct EpochSnapshot {
  int epoch = 0;
  std::vector<Point2> generators;
  std::vector<int> cell_sizes;
  std::vector<Point2> centroids;  // UCB-weighted, diagnostic only
  std::vector<bool> degenerate;   // cell empty or planner fell back to unconstrained
  int combined_size = 0;
};

struct FleetResult {
  std::vector<MissionLog> robots;
  std::vector<Observation> observations;  // pooled, in collection order
  std::vector<EpochSnapshot> epochs;
  Hyperparameters final_hyper;
  Point2 reported;
  std::map<int, double> detection_times;
  bool stopped_early = false;
  double terminal_regret = 0.0;
  double avg_cumulative_regret = 0.0;
  double rmse = 0.0;
  double distance = 0.0;
};

/// Epoch loop: replicate the combined GP, plan each robot inside its cell
/// against its own replica for m steps, then pool every sample. Robot i's
/// sensor is seeded with derive_seed(seed, i, kSensorStream).
FleetResult run_fleet(const SpatialField& field, const FleetConfig& config);

}  // namespace hotspot
