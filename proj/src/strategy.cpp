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

#include "hotspot/strategy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hotspot/error.hpp"

namespace hotspot {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kTrueGP:
      return "TrueGP";
    case StrategyKind::kAdaptGP:
      return "AdaptGP";
    case StrategyKind::kOptGP:
      return "OptGP";
  }
  return "?";
}

StrategyKind parse_strategy(std::string_view name) {
  if (name == "TrueGP") return StrategyKind::kTrueGP;
  if (name == "AdaptGP") return StrategyKind::kAdaptGP;
  if (name == "OptGP") return StrategyKind::kOptGP;
  throw Error(ErrorCode::kInvalidArgument, "unknown strategy '" + std::string(name) + "'");
}

void MissionConfig::validate() const {
  if (!(budget > 0.0)) throw Error(ErrorCode::kInvalidArgument, "budget must be positive");
  if (!(eta >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "eta must be non-negative");
  if (eval_resolution < 2) throw Error(ErrorCode::kInvalidArgument, "eval_resolution must be >= 2");
  if (!(checkpoint_interval >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "checkpoint_interval must be >= 0");
  initial_hyper.validate();
  planner.validate();
}

std::vector<Point2> MissionLog::visited() const {
  std::vector<Point2> out;
  out.reserve(steps.size());
  for (const StepRecord& s : steps) out.push_back(s.pose.position);
  return out;
}

bool budget_respected(const MissionLog& log) {
  const double n = static_cast<double>(log.steps.size());
  return log.step_length * n + n * log.eta <= log.budget;
}

Hyperparameters update_adaptive_hyper(const Hyperparameters& base, int t) {
  if (t < 1) throw Error(ErrorCode::kInvalidArgument, "adaptive schedule needs t >= 1");
  const double factor = std::log(static_cast<double>(std::max(t, 2)));
  Hyperparameters out = base;
  out.signal_std = base.signal_std * factor;
  out.length_scales = {base.length_scales[0] / factor, base.length_scales[1] / factor};
  return out;
}

Point2 report_maximum(const GPModel& gp, const EvaluationGrid& grid) {
  const std::vector<double> mean = gp.predict_mean(grid.points());
  const auto best = std::max_element(mean.begin(), mean.end());
  return grid[static_cast<std::size_t>(best - mean.begin())];
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t robot, std::uint64_t stream) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ robot) ^ (stream * 0x632be59bd9b4e019ULL));
}

double heading_towards_centroid(Point2 start, const Region& region) {
  const Point2 d = region.centroid() - start;
  if (d.x == 0.0 && d.y == 0.0) return 0.0;
  return std::atan2(d.y, d.x);
}

// ---------------------------------------------------------------------------

MissionAgent::MissionAgent(const MissionConfig& config, Sensor& sensor, int robot)
    : config_(config),
      sensor_(sensor),
      rng_(derive_seed(config.seed, static_cast<std::uint64_t>(robot), kPlannerStream)),
      pose_(config.start),
      hyper_(config.strategy == StrategyKind::kAdaptGP ? update_adaptive_hyper(config.initial_hyper, 1)
                                                       : config.initial_hyper) {
  config_.validate();
  log_.strategy = std::string(to_string(config_.strategy));
  log_.robot = robot;
  log_.budget = config_.budget;
  log_.eta = config_.eta;
  log_.step_length = config_.planner.step_length;
  log_.start = config_.start;
}

double MissionAgent::elapsed() const {
  const double n = static_cast<double>(steps_);
  return config_.planner.step_length * n + n * config_.eta;
}

bool MissionAgent::can_step() const {
  const double n = static_cast<double>(steps_ + 1);
  return !log_.truncated && config_.planner.step_length * n + n * config_.eta <= config_.budget;
}

bool MissionAgent::step(const SpatialField& field, GPModel& model, const CellPredicate& cell,
                        bool* unconstrained_fallback) {
  if (!can_step()) return false;
  const int t = steps_ + 1;
  const double remaining = config_.budget - elapsed();
  const Region& region = field.region();

  const auto plan_start = Clock::now();
  // Facing a boundary (or cell edge) with every primitive infeasible, the
  // robot turns around; only when that fails too does a cell constraint get
  // dropped, and without a cell the mission ends.
  Pose reversed = pose_;
  reversed.heading = wrap_angle(pose_.heading + std::numbers::pi);
  auto attempt = [&](const Pose& root, const CellPredicate& constraint, Pose& out) {
    try {
      out = plan_next(model, root, remaining, t, config_.planner, region, rng_, constraint);
      return true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kPlannerStuck) throw;
      return false;
    }
  };
  Pose next;
  bool planned = attempt(pose_, cell, next) || attempt(reversed, cell, next);
  if (!planned && cell) {
    if (unconstrained_fallback != nullptr) *unconstrained_fallback = true;
    planned = attempt(pose_, {}, next) || attempt(reversed, {}, next);
  }
  if (!planned) {
    log_.planner_seconds += seconds_since(plan_start);
    log_.truncated = true;
    log_warning("mission truncated: no feasible motion primitive at step " + std::to_string(t));
    return false;
  }
  log_.planner_seconds += seconds_since(plan_start);

  const Hyperparameters planned_with = hyper_;
  pose_ = next;
  const double y = sensor_.measure(field, pose_.position);
  ++steps_;

  const auto gp_start = Clock::now();
  switch (config_.strategy) {
    case StrategyKind::kTrueGP:
      model.add_observation(pose_.position, y);
      break;
    case StrategyKind::kAdaptGP:
      hyper_ = update_adaptive_hyper(config_.initial_hyper, steps_);
      model.add_observation(pose_.position, y, hyper_);
      break;
    case StrategyKind::kOptGP: {
      model.add_observation(pose_.position, y);
      if (model.size() >= 2) {
        OptimizeOptions options;
        options.restarts = config_.step_restarts;
        options.domain_diameter = region.diagonal();
        const OptimizeResult r = optimize_hyperparameters(model, hyper_, true, options);
        if (r.status == OptimizeStatus::kImproved) {
          hyper_ = r.hyper;
          model.set_hyperparameters(hyper_);
        }
      }
      break;
    }
  }
  log_.gp_seconds += seconds_since(gp_start);

  StepRecord rec;
  rec.t = t;
  rec.pose = pose_;
  rec.measurement = y;
  rec.hyper = planned_with;
  rec.beta = beta(t, config_.planner);
  rec.time = elapsed();
  rec.gp_seconds = log_.gp_seconds;
  log_.steps.push_back(rec);
  return true;
}

FinalReport final_report(GPModel& model, const EvaluationGrid& grid, int restarts, double domain_diameter) {
  FinalReport out;
  const auto start = Clock::now();
  if (model.size() >= 2) {
    OptimizeOptions options;
    options.restarts = restarts;
    options.domain_diameter = domain_diameter;
    const OptimizeResult r = optimize_hyperparameters(model, model.hyperparameters(), true, options);
    if (r.status == OptimizeStatus::kImproved) model.set_hyperparameters(r.hyper);
  }
  out.gp_seconds = seconds_since(start);
  out.hyper = model.hyperparameters();
  out.reported = report_maximum(model, grid);
  return out;
}

CheckpointRecord evaluate_checkpoint(double budget, const SpatialField& field, const FieldReference& ref,
                                     const GPModel& model, const EvaluationGrid& grid, const MissionLog& log) {
  CheckpointRecord c;
  c.budget = budget;
  c.measurements = log.measurements();
  const std::vector<double> mean = model.predict_mean(grid.points());
  const auto best = std::max_element(mean.begin(), mean.end());
  c.reported = grid[static_cast<std::size_t>(best - mean.begin())];
  c.terminal_regret = terminal_regret(field, ref, c.reported);
  const std::vector<Point2> visited = log.visited();
  c.avg_cumulative_regret = visited.empty() ? 0.0 : avg_cumulative_regret(field, ref, visited);
  c.rmse = rmse(field, ref, mean, grid);
  c.distance = distance_error(c.reported, ref.max_location, field.region());
  return c;
}

MissionLog run_mission(const SpatialField& field, Sensor& sensor, const MissionConfig& config) {
  config.validate();
  if (!field.region().contains(config.start.position)) {
    throw Error(ErrorCode::kOutOfBounds, "start pose outside region");
  }
  const EvaluationGrid grid(field.region(), config.eval_resolution);
  const FieldReference ref = make_reference(field, config.eval_resolution);

  MissionAgent agent(config, sensor, 0);
  GPModel model(agent.hyper());
  double next_checkpoint = config.checkpoint_interval;
  while (agent.can_step()) {
    if (!agent.step(field, model)) break;
    if (config.checkpoint_interval > 0.0) {
      while (next_checkpoint < config.budget && agent.elapsed() >= next_checkpoint) {
        agent.log().checkpoints.push_back(evaluate_checkpoint(next_checkpoint, field, ref, model, grid, agent.log()));
        next_checkpoint += config.checkpoint_interval;
      }
    }
  }

  MissionLog log = std::move(agent.log());
  const FinalReport report = final_report(model, grid, config.final_restarts, field.region().diagonal());
  log.gp_seconds += report.gp_seconds;
  log.final_hyper = report.hyper;
  log.reported = report.reported;
  if (config.checkpoint_interval > 0.0 && !log.steps.empty()) {
    log.checkpoints.push_back(evaluate_checkpoint(config.budget, field, ref, model, grid, log));
  }
  if (!budget_respected(log)) {
    throw Error(ErrorCode::kInternal, "mission exceeded its budget");
  }
  return log;
}

}  // namespace hotspot
