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

#include "hotspot/multirobot.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "hotspot/error.hpp"
#include "hotspot/metrics.hpp"

namespace hotspot {

std::vector<int> VoronoiPartition::cell_sizes() const {
  std::vector<int> sizes(generators.size(), 0);
  for (int a : assignment) ++sizes[static_cast<std::size_t>(a)];
  return sizes;
}

int nearest_generator(std::span<const Point2> generators, Point2 p) {
  int best = 0;
  double best_d = squared_distance(generators[0], p);
  for (std::size_t i = 1; i < generators.size(); ++i) {
    const double d = squared_distance(generators[i], p);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

VoronoiPartition compute_partition(std::span<const Point2> generators, const EvaluationGrid& grid) {
  if (generators.empty()) throw Error(ErrorCode::kInvalidArgument, "partition needs at least one generator");
  for (const Point2& g : generators) {
    if (!grid.region().contains(g)) throw Error(ErrorCode::kOutOfBounds, "generator outside region");
  }
  for (std::size_t i = 0; i < generators.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (generators[i] == generators[j]) {
        log_warning("duplicate Voronoi generator " + std::to_string(i) + " only receives tied points");
      }
    }
  }
  VoronoiPartition out;
  out.generators.assign(generators.begin(), generators.end());
  out.assignment.resize(grid.size());
  for (std::size_t q = 0; q < grid.size(); ++q) out.assignment[q] = nearest_generator(generators, grid[q]);
  return out;
}

Point2 weighted_centroid(std::span<const Point2> cell, std::span<const double> weights) {
  if (cell.empty()) throw Error(ErrorCode::kInvalidArgument, "weighted centroid of an empty cell");
  if (cell.size() != weights.size()) throw Error(ErrorCode::kInvalidArgument, "one weight per point required");
  double sx = 0.0;
  double sy = 0.0;
  double sw = 0.0;
  for (std::size_t i = 0; i < cell.size(); ++i) {
    const double w = std::max(weights[i], 1e-12);
    sx += w * cell[i].x;
    sy += w * cell[i].y;
    sw += w;
  }
  return {sx / sw, sy / sw};
}

Point2 weighted_centroid(std::span<const Point2> cell, const GPModel& gp, int t, const PlannerConfig& config) {
  const Prediction pred = gp.predict(cell);
  const double sqrt_beta = std::sqrt(beta(t, config));
  std::vector<double> w(cell.size());
  for (std::size_t i = 0; i < cell.size(); ++i) w[i] = pred.mean[i] + sqrt_beta * pred.std[i];
  return weighted_centroid(cell, w);
}

std::string_view to_string(PartitionMode mode) {
  return mode == PartitionMode::kVoronoi ? "Voronoi" : "None";
}

PartitionMode parse_partition_mode(std::string_view name) {
  if (name == "Voronoi") return PartitionMode::kVoronoi;
  if (name == "None") return PartitionMode::kNone;
  throw Error(ErrorCode::kInvalidArgument, "unknown partition mode '" + std::string(name) + "'");
}

void FleetConfig::validate() const {
  mission.validate();
  if (starts.empty()) throw Error(ErrorCode::kInvalidArgument, "fleet needs at least one robot");
  if (epochs < 1 || steps_per_epoch < 1) throw Error(ErrorCode::kInvalidArgument, "epochs and steps_per_epoch must be >= 1");
  if (mission.strategy == StrategyKind::kOptGP) {
    throw Error(ErrorCode::kInvalidArgument, "fleets support TrueGP and AdaptGP only");
  }
  if (!(noise_std >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "noise_std must be non-negative");
  if (!(detection_radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, "detection_radius must be positive");
  const double n = static_cast<double>(epochs) * static_cast<double>(steps_per_epoch);
  if (mission.planner.step_length * n + n * mission.eta > mission.budget) {
    throw Error(ErrorCode::kInvalidArgument, "epochs x steps_per_epoch exceeds the per-robot budget");
  }
}

FleetResult run_fleet(const SpatialField& field, const FleetConfig& config) {
  config.validate();
  const Region& region = field.region();
  for (const Pose& s : config.starts) {
    if (!region.contains(s.position)) throw Error(ErrorCode::kOutOfBounds, "start pose outside region");
  }
  const int k = config.robots();
  const EvaluationGrid grid(region, config.mission.eval_resolution);
  const FieldReference ref = make_reference(field, config.mission.eval_resolution);
  const std::vector<Point2> maxima = field.maxima();

  std::vector<std::unique_ptr<Sensor>> sensors;
  std::vector<std::unique_ptr<MissionAgent>> agents;
  for (int i = 0; i < k; ++i) {
    const auto robot = static_cast<std::uint64_t>(i);
    sensors.push_back(std::make_unique<Sensor>(config.noise_std, derive_seed(config.mission.seed, robot, kSensorStream)));
    MissionConfig mc = config.mission;
    mc.start = config.starts[static_cast<std::size_t>(i)];
    agents.push_back(std::make_unique<MissionAgent>(mc, *sensors.back(), i));
  }

  FleetResult result;
  GPModel combined(agents.front()->hyper());
  std::vector<MeasurementEvent> events;

  for (int epoch = 0; epoch < config.epochs && !result.stopped_early; ++epoch) {
    EpochSnapshot snap;
    snap.epoch = epoch + 1;
    snap.combined_size = static_cast<int>(combined.size());
    for (const auto& a : agents) snap.generators.push_back(a->pose().position);
    snap.degenerate.assign(static_cast<std::size_t>(k), false);

    const VoronoiPartition partition = compute_partition(snap.generators, grid);
    snap.cell_sizes = config.mode == PartitionMode::kVoronoi ? partition.cell_sizes()
                                                             : std::vector<int>(static_cast<std::size_t>(k),
                                                                                static_cast<int>(grid.size()));
    std::vector<std::vector<Point2>> cells(static_cast<std::size_t>(k));
    for (std::size_t q = 0; q < grid.size(); ++q) {
      if (config.mode == PartitionMode::kVoronoi) {
        cells[static_cast<std::size_t>(partition.assignment[q])].push_back(grid[q]);
      } else {
        for (auto& c : cells) c.push_back(grid[q]);
      }
    }

    std::vector<CellPredicate> predicates(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const int t = agents[idx]->steps() + 1;
      snap.centroids.push_back(cells[idx].empty()
                                   ? snap.generators[idx]
                                   : weighted_centroid(cells[idx], combined, t, config.mission.planner));
      if (config.mode != PartitionMode::kVoronoi) continue;
      if (cells[idx].empty()) {
        snap.degenerate[idx] = true;
        log_warning("robot " + std::to_string(i) + " has an empty cell in epoch " + std::to_string(epoch + 1) +
                    "; planning unconstrained");
        continue;
      }
      predicates[idx] = [gens = snap.generators, i](Point2 p) { return nearest_generator(gens, p) == i; };
    }

    // Replicas: within an epoch each robot only sees the snapshot plus its own samples.
    std::vector<GPModel> replicas(static_cast<std::size_t>(k), combined);
    std::vector<std::vector<Observation>> fresh(static_cast<std::size_t>(k));
    bool any_step = false;
    for (int s = 0; s < config.steps_per_epoch && !result.stopped_early; ++s) {
      for (int i = 0; i < k; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        MissionAgent& agent = *agents[idx];
        bool fallback = false;
        if (!agent.step(field, replicas[idx], predicates[idx], &fallback)) continue;
        any_step = true;
        if (fallback && !snap.degenerate[idx]) {
          snap.degenerate[idx] = true;
          log_warning("robot " + std::to_string(i) + " left its cell in epoch " + std::to_string(epoch + 1) +
                      "; no feasible move inside");
        }
        const StepRecord& rec = agent.log().steps.back();
        fresh[idx].push_back({rec.pose.position, rec.measurement, i, rec.t});
        events.push_back({rec.time, i, rec.pose.position});
      }
      if (config.stop_when_all_detected) {
        result.detection_times = detection_times(events, maxima, config.detection_radius);
        if (result.detection_times.size() == maxima.size()) result.stopped_early = true;
      }
    }

    for (const auto& f : fresh) result.observations.insert(result.observations.end(), f.begin(), f.end());
    std::vector<Point2> xs;
    std::vector<double> ys;
    xs.reserve(result.observations.size());
    ys.reserve(result.observations.size());
    for (const Observation& o : result.observations) {
      xs.push_back(o.position);
      ys.push_back(o.value);
    }
    combined = GPModel(agents.front()->hyper(), std::move(xs), std::move(ys));
    result.epochs.push_back(std::move(snap));
    if (!any_step) break;
  }

  result.detection_times = detection_times(events, maxima, config.detection_radius);
  const FinalReport report = final_report(combined, grid, config.mission.final_restarts, region.diagonal());
  result.final_hyper = report.hyper;
  result.reported = report.reported;
  result.terminal_regret = terminal_regret(field, ref, report.reported);
  std::vector<Point2> visited;
  for (const Observation& o : result.observations) visited.push_back(o.position);
  result.avg_cumulative_regret = visited.empty() ? 0.0 : avg_cumulative_regret(field, ref, visited);
  result.rmse = rmse(field, ref, combined, grid);
  result.distance = distance_error(report.reported, ref.max_location, region);

  for (auto& a : agents) {
    MissionLog log = std::move(a->log());
    if (!budget_respected(log)) throw Error(ErrorCode::kInternal, "robot exceeded its budget");
    log.reported = report.reported;
    log.final_hyper = report.hyper;
    result.robots.push_back(std::move(log));
  }
  result.robots.front().gp_seconds += report.gp_seconds;
  return result;
}

}  // namespace hotspot
