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

#include <span>
#include <vector>

#include "hotspot/field.hpp"
#include "hotspot/gp.hpp"
#include "hotspot/strategy.hpp"

namespace hotspot {

enum class SweepOrientation { kHorizontal, kVertical };
enum class Corner { kBottomLeft, kBottomRight, kTopLeft, kTopRight };

/// Lawnmower sweep over a rectangle. Horizontal lanes run along x and are
/// stacked in y; vertical lanes the other way round.
struct BoustrophedonPlan {
  Region sub_region;
  double lane_spacing = 1.0;
  SweepOrientation orientation = SweepOrientation::kHorizontal;
  Corner start_corner = Corner::kBottomLeft;

  void validate() const;
};

/// Lane endpoints in travel order. Lanes sit at both region edges and are
/// spread evenly, never further apart than lane_spacing.
std::vector<Point2> bst_waypoints(const BoustrophedonPlan& plan);

double polyline_length(std::span<const Point2> points);

/// Positions after every `step` of travel along the polyline, up to
/// max_samples. Past the end the path is retraced backwards (ping-pong).
std::vector<Point2> sample_along(std::span<const Point2> waypoints, double step, int max_samples);

/// k equal-width vertical strips, left to right.
std::vector<Region> split_strips(const Region& region, int k);

struct BstMissionOptions {
  double budget = 350.0;
  double eta = 0.0;
  double step_length = 1.0;
  Hyperparameters hyper;  // GP used for checkpoints and the final report
  int eval_resolution = 130;
  double checkpoint_interval = 10.0;
  int final_restarts = 5;
};

/// Follows the sweep at unit speed, measuring after every step_length of
/// travel, then reports through the same GP pipeline as the adaptive
/// strategies.
MissionLog run_bst_mission(const SpatialField& field, Sensor& sensor, const BoustrophedonPlan& plan,
                           const BstMissionOptions& options);

}  // namespace hotspot
