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
#include <vector>

#include "hotspot/field.hpp"
#include "hotspot/geometry.hpp"
#include "hotspot/gp.hpp"

namespace hotspot {

/// Normalization constants for the percent metrics.
struct FieldReference {
  double max_value = 0.0;
  Point2 max_location;
  double min_value = 0.0;
  double range = 0.0;
};

/// f(x*) and range from a grid scan; a SyntheticField contributes its exact
/// global maximum instead of the scanned one.
FieldReference make_reference(const SpatialField& field, int grid_resolution = 130);

/// 100 (f(x*) - f(x_hat)) / range
double terminal_regret(const SpatialField& field, const FieldReference& ref, Point2 reported);

/// 100 mean_t (f(x*) - f(x_t)) / range
double avg_cumulative_regret(const SpatialField& field, const FieldReference& ref,
                             std::span<const Point2> visited);

/// 100 sqrt(mean_grid (mu(x) - f(x))^2) / range
double rmse(const SpatialField& field, const FieldReference& ref, const GPModel& gp, const EvaluationGrid& grid);
double rmse(const SpatialField& field, const FieldReference& ref, std::span<const double> predicted_mean,
            const EvaluationGrid& grid);

/// 100 |x_hat - x*| / diagonal
double distance_error(Point2 reported, Point2 truth, const Region& region);

struct MeasurementEvent {
  double time = 0.0;
  int robot = 0;
  Point2 position;
};

/// For j = 1..maxima.size(): earliest time at which j distinct maxima have
/// each had a measurement within `radius`. Counts never reached are absent.
std::map<int, double> detection_times(std::span<const MeasurementEvent> events, std::span<const Point2> maxima,
                                      double radius);

struct MetricsReport {
  double pct_terminal_regret = 0.0;
  double pct_avg_cumulative_regret = 0.0;
  double pct_rmse = 0.0;
  double pct_distance = 0.0;
  std::map<int, double> detection_times;
  std::vector<double> gp_time_series;  // cumulative seconds per step
};

}  // namespace hotspot
