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
#include <string>
#include <string_view>
#include <vector>

#include "hotspot/field.hpp"
#include "hotspot/gp.hpp"
#include "hotspot/metrics.hpp"
#include "hotspot/planner.hpp"

namespace hotspot {

enum class StrategyKind { kTrueGP, kAdaptGP, kOptGP };

std::string_view to_string(StrategyKind kind);
StrategyKind parse_strategy(std::string_view name);

struct MissionConfig {
  double budget = 350.0;  // T, travel time units
  double eta = 0.0;       // time per measurement
  Pose start;
  StrategyKind strategy = StrategyKind::kTrueGP;
  /// TrueGP: the known values. AdaptGP: the schedule base (sigma_0, l_0).
  /// OptGP: the first optimizer start.
  Hyperparameters initial_hyper;
  PlannerConfig planner;
  std::uint64_t seed = 0;
  int eval_resolution = 130;
  double checkpoint_interval = 10.0;  // 0 disables checkpoints
  int final_restarts = 5;
  int step_restarts = 1;  // OptGP per-step optimizer starts

  void validate() const;
};

struct StepRecord {
  int t = 0;
  Pose pose;  // pose reached and measured at this step
  double measurement = 0.0;
  Hyperparameters hyper;  // hyperparameters the planner used
  double beta = 0.0;
  double time = 0.0;        // mission time when the measurement completed
  double gp_seconds = 0.0;  // cumulative GP maintenance wall time
};

/// Report that would be made if the mission ended at `budget`.
struct CheckpointRecord {
  double budget = 0.0;
  int measurements = 0;
  Point2 reported;
  double terminal_regret = 0.0;
  double avg_cumulative_regret = 0.0;
  double rmse = 0.0;
  double distance = 0.0;
};

struct MissionLog {
  std::string strategy;
  int robot = 0;
  double budget = 0.0;
  double eta = 0.0;
  double step_length = 1.0;
  Pose start;
  std::vector<StepRecord> steps;
  std::vector<CheckpointRecord> checkpoints;
  Point2 reported;
  Hyperparameters final_hyper;
  bool truncated = false;
  double gp_seconds = 0.0;
  double planner_seconds = 0.0;

  int measurements() const { return static_cast<int>(steps.size()); }
  double travel_length() const { return step_length * static_cast<double>(steps.size()); }
  std::vector<Point2> visited() const;
};

/// len(tau) + n eta <= T, evaluated exactly.
bool budget_respected(const MissionLog& log);

/// sigma_t = sigma_0 log t, l_t = l_0 / log t, with t < 2 treated as t = 2.
Hyperparameters update_adaptive_hyper(const Hyperparameters& base, int t);

/// Location of the largest posterior mean on the grid (first in scan order on ties).
Point2 report_maximum(const GPModel& gp, const EvaluationGrid& grid);

/// splitmix64 mix of (base, robot, stream); streams keep planner and sensor
/// randomness independent.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t robot, std::uint64_t stream);
inline constexpr std::uint64_t kPlannerStream = 1;
inline constexpr std::uint64_t kSensorStream = 2;
inline constexpr std::uint64_t kBaselineStream = 3;

/// One robot's mission state. run_mission drives a single agent against its
/// own GP; run_fleet drives several against per-epoch replicas.
class MissionAgent {
 public:
  MissionAgent(const MissionConfig& config, Sensor& sensor, int robot = 0);

  const Pose& pose() const { return pose_; }
  const Hyperparameters& hyper() const { return hyper_; }
  int steps() const { return steps_; }
  double elapsed() const;
  bool can_step() const;
  MissionLog& log() { return log_; }
  const MissionLog& log() const { return log_; }

  /// Plans against `model` (holding this agent's knowledge with hyper()),
  /// moves, measures and folds the sample and the next hyperparameters back
  /// into `model`. Returns false when the planner is stuck. When `cell`
  /// leaves no feasible move the step is planned unconstrained and
  /// `*unconstrained_fallback` is set.
  bool step(const SpatialField& field, GPModel& model, const CellPredicate& cell = {},
            bool* unconstrained_fallback = nullptr);

 private:
  MissionConfig config_;
  Sensor& sensor_;
  Rng rng_;
  Pose pose_;
  Hyperparameters hyper_;
  int steps_ = 0;
  MissionLog log_;
};

/// Final full hyperparameter optimization (noise held fixed) followed by
/// the posterior-mean argmax over the evaluation grid.
struct FinalReport {
  Hyperparameters hyper;
  Point2 reported;
  double gp_seconds = 0.0;
};
FinalReport final_report(GPModel& model, const EvaluationGrid& grid, int restarts, double domain_diameter);

/// Metrics of the report that would be made from `model` at this point.
CheckpointRecord evaluate_checkpoint(double budget, const SpatialField& field, const FieldReference& ref,
                                     const GPModel& model, const EvaluationGrid& grid, const MissionLog& log);

MissionLog run_mission(const SpatialField& field, Sensor& sensor, const MissionConfig& config);

/// Default start heading: towards the region centroid.
double heading_towards_centroid(Point2 start, const Region& region);

}  // namespace hotspot
