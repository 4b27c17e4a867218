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

#include "hotspot/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "hotspot/error.hpp"

namespace hotspot {

void BoustrophedonPlan::validate() const {
  if (!(lane_spacing > 0.0) || !std::isfinite(lane_spacing)) {
    throw Error(ErrorCode::kInvalidArgument, "lane_spacing must be positive");
  }
  if (lane_spacing > std::min(sub_region.width(), sub_region.height())) {
    throw Error(ErrorCode::kInvalidArgument, "lane_spacing exceeds the sub-region extent");
  }
}

std::vector<Point2> bst_waypoints(const BoustrophedonPlan& plan) {
  plan.validate();
  const Region& r = plan.sub_region;
  const bool horizontal = plan.orientation == SweepOrientation::kHorizontal;
  const bool from_left = plan.start_corner == Corner::kBottomLeft || plan.start_corner == Corner::kTopLeft;
  const bool from_bottom = plan.start_corner == Corner::kBottomLeft || plan.start_corner == Corner::kBottomRight;

  // Stacking axis is y for horizontal lanes, x for vertical ones.
  const double lo = horizontal ? r.y_min() : r.x_min();
  const double hi = horizontal ? r.y_max() : r.x_max();
  const double a0 = horizontal ? r.x_min() : r.y_min();
  const double a1 = horizontal ? r.x_max() : r.y_max();
  const bool stack_forward = horizontal ? from_bottom : from_left;
  bool along_forward = horizontal ? from_left : from_bottom;

  const double extent = hi - lo;
  const int lanes = static_cast<int>(std::ceil(extent / plan.lane_spacing - 1e-12)) + 1;
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(2 * lanes));
  auto lane = [&](int i) {
    return i == lanes - 1 ? hi : lo + extent * static_cast<double>(i) / static_cast<double>(lanes - 1);
  };
  for (int i = 0; i < lanes; ++i) {
    const double c = stack_forward ? lane(i) : lane(lanes - 1 - i);
    const double s = along_forward ? a0 : a1;
    const double e = along_forward ? a1 : a0;
    if (horizontal) {
      out.push_back({s, c});
      out.push_back({e, c});
    } else {
      out.push_back({c, s});
      out.push_back({c, e});
    }
    along_forward = !along_forward;
  }
  return out;
}

double polyline_length(std::span<const Point2> points) {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) total += distance(points[i - 1], points[i]);
  return total;
}

std::vector<Point2> sample_along(std::span<const Point2> waypoints, double step, int max_samples) {
  if (waypoints.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two waypoints");
  if (!(step > 0.0)) throw Error(ErrorCode::kInvalidArgument, "step must be positive");
  std::vector<double> cumulative(waypoints.size(), 0.0);
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    cumulative[i] = cumulative[i - 1] + distance(waypoints[i - 1], waypoints[i]);
  }
  const double total = cumulative.back();
  if (!(total > 0.0)) throw Error(ErrorCode::kInvalidArgument, "polyline has zero length");

  auto at = [&](double s) {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
    std::size_t i = static_cast<std::size_t>(it - cumulative.begin());
    if (i >= waypoints.size()) return waypoints.back();
    if (i == 0) return waypoints.front();
    const double seg = cumulative[i] - cumulative[i - 1];
    const double f = seg > 0.0 ? (s - cumulative[i - 1]) / seg : 0.0;
    const Point2 a = waypoints[i - 1];
    const Point2 b = waypoints[i];
    return Point2{a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
  };

  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(std::max(max_samples, 0)));
  for (int k = 1; k <= max_samples; ++k) {
    double s = std::fmod(step * static_cast<double>(k), 2.0 * total);
    if (s > total) s = 2.0 * total - s;
    out.push_back(at(s));
  }
  return out;
}

std::vector<Region> split_strips(const Region& region, int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "strip count must be >= 1");
  std::vector<Region> out;
  out.reserve(static_cast<std::size_t>(k));
  const double w = region.width() / static_cast<double>(k);
  for (int i = 0; i < k; ++i) {
    const double x0 = region.x_min() + w * static_cast<double>(i);
    const double x1 = i == k - 1 ? region.x_max() : region.x_min() + w * static_cast<double>(i + 1);
    out.emplace_back(x0, x1, region.y_min(), region.y_max());
  }
  return out;
}

MissionLog run_bst_mission(const SpatialField& field, Sensor& sensor, const BoustrophedonPlan& plan,
                           const BstMissionOptions& options) {
  if (!(options.budget > 0.0) || !(options.eta >= 0.0) || !(options.step_length > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid sweep budget, eta or step length");
  }
  options.hyper.validate();
  const Region& region = field.region();
  const Region& sub = plan.sub_region;
  if (sub.x_min() < region.x_min() || sub.x_max() > region.x_max() || sub.y_min() < region.y_min() ||
      sub.y_max() > region.y_max()) {
    throw Error(ErrorCode::kOutOfBounds, "sweep sub-region leaves the field region");
  }
  const std::vector<Point2> waypoints = bst_waypoints(plan);

  int n = 0;
  while (true) {
    const double next = static_cast<double>(n + 1);
    if (options.step_length * next + next * options.eta > options.budget) break;
    ++n;
  }
  const std::vector<Point2> samples = sample_along(waypoints, options.step_length, n);

  const EvaluationGrid grid(region, options.eval_resolution);
  const FieldReference ref = make_reference(field, options.eval_resolution);

  MissionLog log;
  log.strategy = "BST";
  log.budget = options.budget;
  log.eta = options.eta;
  log.step_length = options.step_length;
  log.start.position = waypoints.front();
  log.start.heading = std::atan2(waypoints[1].y - waypoints[0].y, waypoints[1].x - waypoints[0].x);
  log.final_hyper = options.hyper;

  Point2 previous = waypoints.front();
  double next_checkpoint = options.checkpoint_interval;
  for (int i = 0; i < n; ++i) {
    Point2 p = samples[static_cast<std::size_t>(i)];
    p.x = std::clamp(p.x, region.x_min(), region.x_max());
    p.y = std::clamp(p.y, region.y_min(), region.y_max());
    StepRecord rec;
    rec.t = i + 1;
    rec.pose.position = p;
    rec.pose.heading = p == previous ? log.steps.empty() ? log.start.heading : log.steps.back().pose.heading
                                     : std::atan2(p.y - previous.y, p.x - previous.x);
    rec.measurement = sensor.measure(field, p);
    rec.hyper = options.hyper;
    const double m = static_cast<double>(i + 1);
    rec.time = options.step_length * m + m * options.eta;
    log.steps.push_back(rec);
    previous = p;

    // The sweep ignores the model while moving, so it is only built for checkpoints.
    if (options.checkpoint_interval > 0.0) {
      while (next_checkpoint < options.budget && rec.time >= next_checkpoint) {
        std::vector<double> ys;
        ys.reserve(log.steps.size());
        for (const StepRecord& s : log.steps) ys.push_back(s.measurement);
        const auto t0 = std::chrono::steady_clock::now();
        GPModel model(options.hyper, log.visited(), std::move(ys));
        log.gp_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        log.checkpoints.push_back(evaluate_checkpoint(next_checkpoint, field, ref, model, grid, log));
        next_checkpoint += options.checkpoint_interval;
      }
    }
    log.steps.back().gp_seconds = log.gp_seconds;
  }

  std::vector<double> ys;
  ys.reserve(log.steps.size());
  for (const StepRecord& s : log.steps) ys.push_back(s.measurement);
  GPModel model(options.hyper, log.visited(), std::move(ys));
  const FinalReport report = final_report(model, grid, options.final_restarts, region.diagonal());
  log.gp_seconds += report.gp_seconds;
  log.final_hyper = report.hyper;
  log.reported = report.reported;
  if (options.checkpoint_interval > 0.0 && !log.steps.empty()) {
    log.checkpoints.push_back(evaluate_checkpoint(options.budget, field, ref, model, grid, log));
  }
  if (!budget_respected(log)) throw Error(ErrorCode::kInternal, "sweep exceeded its budget");
  return log;
}

}  // namespace hotspot
