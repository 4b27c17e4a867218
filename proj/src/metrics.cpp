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

#include "hotspot/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hotspot/error.hpp"

namespace hotspot {

FieldReference make_reference(const SpatialField& field, int grid_resolution) {
  const FieldStats stats = field_stats(field, grid_resolution);
  FieldReference ref{stats.max_value, stats.max_location, stats.min_value, stats.range};
  if (const auto* synthetic = dynamic_cast<const SyntheticField*>(&field)) {
    ref.max_location = synthetic->global_maximum();
    ref.max_value = synthetic->value(ref.max_location);
    ref.range = ref.max_value - ref.min_value;
  }
  return ref;
}

namespace {

double checked_range(const FieldReference& ref) {
  if (!(ref.range > 0.0)) throw Error(ErrorCode::kInvalidArgument, "field range must be positive");
  return ref.range;
}

}  // namespace

double terminal_regret(const SpatialField& field, const FieldReference& ref, Point2 reported) {
  const double range = checked_range(ref);
  return 100.0 * std::max(0.0, ref.max_value - field.value(reported)) / range;
}

double avg_cumulative_regret(const SpatialField& field, const FieldReference& ref,
                             std::span<const Point2> visited) {
  if (visited.empty()) throw Error(ErrorCode::kInvalidArgument, "cumulative regret needs a nonempty trajectory");
  const double range = checked_range(ref);
  double total = 0.0;
  for (const Point2& p : visited) total += std::max(0.0, ref.max_value - field.value(p));
  return 100.0 * total / (static_cast<double>(visited.size()) * range);
}

double rmse(const SpatialField& field, const FieldReference& ref, std::span<const double> predicted_mean,
            const EvaluationGrid& grid) {
  if (predicted_mean.size() != grid.size()) throw Error(ErrorCode::kInvalidArgument, "prediction/grid size mismatch");
  const double range = checked_range(ref);
  double total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double e = predicted_mean[i] - field.value(grid[i]);
    total += e * e;
  }
  return 100.0 * std::sqrt(total / static_cast<double>(grid.size())) / range;
}

double rmse(const SpatialField& field, const FieldReference& ref, const GPModel& gp, const EvaluationGrid& grid) {
  const std::vector<double> mean = gp.predict_mean(grid.points());
  return rmse(field, ref, mean, grid);
}

double distance_error(Point2 reported, Point2 truth, const Region& region) {
  return 100.0 * distance(reported, truth) / region.diagonal();
}

std::map<int, double> detection_times(std::span<const MeasurementEvent> events, std::span<const Point2> maxima,
                                      double radius) {
  if (maxima.empty()) throw Error(ErrorCode::kInvalidArgument, "detection needs at least one maximum");
  // First detection time of each maximum, then sort: the j-th smallest is the
  // moment j distinct maxima have been seen.
  std::vector<double> first(maxima.size(), std::numeric_limits<double>::infinity());
  const double r2 = radius * radius;
  for (const MeasurementEvent& e : events) {
    for (std::size_t m = 0; m < maxima.size(); ++m) {
      if (squared_distance(e.position, maxima[m]) <= r2) first[m] = std::min(first[m], e.time);
    }
  }
  std::sort(first.begin(), first.end());
  std::map<int, double> out;
  for (std::size_t j = 0; j < first.size(); ++j) {
    if (std::isfinite(first[j])) out[static_cast<int>(j) + 1] = first[j];
  }
  return out;
}

}  // namespace hotspot
