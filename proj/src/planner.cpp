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

#include "hotspot/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hotspot/error.hpp"

namespace hotspot {

double wrap_angle(double radians) {
  double a = std::remainder(radians, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

void PlannerConfig::validate() const {
  if (num_primitives < 1) throw Error(ErrorCode::kInvalidArgument, "num_primitives must be >= 1");
  if (!(heading_fan >= 0.0) || heading_fan > std::numbers::pi) {
    throw Error(ErrorCode::kInvalidArgument, "heading_fan must lie in [0, pi]");
  }
  if (!(step_length > 0.0)) throw Error(ErrorCode::kInvalidArgument, "step_length must be positive");
  if (iteration_cap < 1) throw Error(ErrorCode::kInvalidArgument, "iteration_cap must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0, 1)");
  if (grid_size < 1) throw Error(ErrorCode::kInvalidArgument, "grid_size must be >= 1");
  if (rollout_resamples < 1) throw Error(ErrorCode::kInvalidArgument, "rollout_resamples must be >= 1");
}

std::vector<double> primitive_offsets(const PlannerConfig& config) {
  std::vector<double> offsets(static_cast<std::size_t>(config.num_primitives), 0.0);
  if (config.num_primitives == 1) return offsets;
  const double spacing = 2.0 * config.heading_fan / (config.num_primitives - 1);
  for (int i = 0; i < config.num_primitives; ++i) offsets[static_cast<std::size_t>(i)] = -config.heading_fan + i * spacing;
  return offsets;
}

namespace {

Pose advance(const Pose& pose, double offset, double step) {
  const double heading = wrap_angle(pose.heading + offset);
  return {{pose.position.x + step * std::cos(heading), pose.position.y + step * std::sin(heading)}, heading};
}

bool feasible(Point2 p, const Region& region, const CellPredicate& cell) {
  return region.contains(p) && (!cell || cell(p));
}

}  // namespace

std::vector<Successor> motion_primitives(const Pose& pose, const Region& region, const PlannerConfig& config,
                                         const CellPredicate& cell) {
  std::vector<Successor> out;
  const std::vector<double> offsets = primitive_offsets(config);
  for (int i = 0; i < config.num_primitives; ++i) {
    const Pose next = advance(pose, offsets[static_cast<std::size_t>(i)], config.step_length);
    if (feasible(next.position, region, cell)) out.push_back({i, next});
  }
  return out;
}

double beta(int t, const PlannerConfig& config) {
  if (t < 1) throw Error(ErrorCode::kInvalidArgument, "beta needs t >= 1");
  const double d = static_cast<double>(config.grid_size);
  return 2.0 * std::sqrt(static_cast<double>(t)) *
         std::log(d * std::numbers::pi * std::numbers::pi / (6.0 * config.delta));
}

MctsNode* uct_select(MctsNode& node) {
  MctsNode* best = nullptr;
  double best_score = -std::numeric_limits<double>::infinity();
  const double log_parent = std::log(static_cast<double>(node.visits));
  for (const auto& child : node.children) {
    const double n = static_cast<double>(child->visits);
    const double score = child->q_sum / n + 2.0 * std::sqrt(log_parent / n);
    // children are kept sorted by primitive index, so strict > keeps the lowest on ties
    if (best == nullptr || score > best_score) {
      best = child.get();
      best_score = score;
    }
  }
  return best;
}

MctsPlanner::MctsPlanner(const GPModel& gp, const Region& region, const PlannerConfig& config, const Pose& root,
                         double remaining_budget, int t, Rng& rng, CellPredicate cell)
    : gp_(gp), region_(region), config_(config), rng_(rng), cell_(std::move(cell)) {
  config_.validate();
  if (remaining_budget < config_.step_length) {
    throw Error(ErrorCode::kInvalidArgument, "remaining budget is shorter than one step");
  }
  max_depth_ = static_cast<int>(std::floor(remaining_budget / config_.step_length + 1e-9));
  sqrt_beta_ = std::sqrt(beta(t, config_));
  root_ = make_node(root, 0, -1, nullptr);
  if (root_->terminal) {
    std::ostringstream os;
    os << "no feasible motion primitive from (" << root.position.x << ", " << root.position.y << ")";
    throw Error(ErrorCode::kPlannerStuck, os.str());
  }
}

std::unique_ptr<MctsNode> MctsPlanner::make_node(const Pose& pose, int depth, int primitive,
                                                 MctsNode* parent) const {
  auto node = std::make_unique<MctsNode>();
  node->pose = pose;
  node->depth = depth;
  node->primitive = primitive;
  node->parent = parent;
  if (depth < max_depth_) node->unexpanded = motion_primitives(pose, region_, config_, cell_);
  node->terminal = node->unexpanded.empty();
  return node;
}

double MctsPlanner::simulate(const MctsNode& node) {
  rollout_buffer_.clear();
  rollout_buffer_.push_back(node.pose.position);
  const std::vector<double> offsets = primitive_offsets(config_);
  std::uniform_int_distribution<int> pick(0, config_.num_primitives - 1);
  Pose pose = node.pose;
  const int depth = std::max(0, max_depth_ - node.depth);
  for (int step = 0; step < depth; ++step) {
    bool moved = false;
    for (int attempt = 0; attempt < config_.rollout_resamples; ++attempt) {
      const Pose next = advance(pose, offsets[static_cast<std::size_t>(pick(rng_))], config_.step_length);
      if (feasible(next.position, region_, cell_)) {
        pose = next;
        moved = true;
        break;
      }
    }
    if (!moved) break;
    rollout_buffer_.push_back(pose.position);
  }
  return gp_.mean_ucb(rollout_buffer_, sqrt_beta_);
}

void MctsPlanner::iterate() {
  MctsNode* v = root_.get();
  while (!v->terminal && v->fully_expanded()) v = uct_select(*v);

  MctsNode* leaf = v;
  if (!v->terminal) {
    std::uniform_int_distribution<std::size_t> pick(0, v->unexpanded.size() - 1);
    const std::size_t k = pick(rng_);
    const Successor succ = v->unexpanded[k];
    v->unexpanded.erase(v->unexpanded.begin() + static_cast<std::ptrdiff_t>(k));
    auto child = make_node(succ.pose, v->depth + 1, succ.primitive, v);
    leaf = child.get();
    const auto pos = std::lower_bound(v->children.begin(), v->children.end(), succ.primitive,
                                      [](const auto& c, int p) { return c->primitive < p; });
    v->children.insert(pos, std::move(child));
  }

  const double reward = simulate(*leaf);
  ++leaf->simulations;
  for (MctsNode* n = leaf; n != nullptr; n = n->parent) {
    n->q_sum += reward;
    ++n->visits;
  }
  ++iterations_;
}

void MctsPlanner::run() {
  for (int i = 0; i < config_.iteration_cap; ++i) iterate();
}

const MctsNode& MctsPlanner::best_child() const {
  const MctsNode* best = nullptr;
  double best_value = -std::numeric_limits<double>::infinity();
  for (const auto& child : root_->children) {
    if (child->visits == 0) continue;
    const double value = child->q_sum / child->visits;
    if (best == nullptr || value > best_value) {
      best = child.get();
      best_value = value;
    }
  }
  if (best == nullptr) throw Error(ErrorCode::kInternal, "planner has no visited root child");
  return *best;
}

namespace {

bool consistent(const MctsNode& node) {
  int total = node.simulations;
  for (const auto& child : node.children) {
    if (!consistent(*child)) return false;
    total += child->visits;
  }
  return total == node.visits;
}

}  // namespace

bool MctsPlanner::visit_counts_consistent() const { return consistent(*root_); }

Pose plan_next(const GPModel& gp, const Pose& root, double remaining_budget, int t, const PlannerConfig& config,
               const Region& region, Rng& rng, const CellPredicate& cell) {
  MctsPlanner planner(gp, region, config, root, remaining_budget, t, rng, cell);
  planner.run();
  return planner.best_child().pose;
}

}  // namespace hotspot
