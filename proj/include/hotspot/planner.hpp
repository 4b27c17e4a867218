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

#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

#include "hotspot/geometry.hpp"
#include "hotspot/gp.hpp"

namespace hotspot {

using Rng = std::mt19937_64;

struct Pose {
  Point2 position;
  double heading = 0.0;  // radians, wrapped to (-pi, pi]

  friend bool operator==(const Pose&, const Pose&) = default;
};

double wrap_angle(double radians);

struct PlannerConfig {
  int num_primitives = 5;
  double heading_fan = std::numbers::pi / 4.0;  // offsets span [-fan, +fan]
  double step_length = 1.0;
  int iteration_cap = 50;
  double delta = 0.1;
  int grid_size = 16900;
  int rollout_resamples = 5;

  void validate() const;
};

/// Extra feasibility test on positions, e.g. membership in a Voronoi cell.
/// An empty function accepts everything.
using CellPredicate = std::function<bool(Point2)>;

struct Successor {
  int primitive = 0;
  Pose pose;
};

/// Heading offsets relative to the current heading, evenly spaced over
/// [-heading_fan, heading_fan].
std::vector<double> primitive_offsets(const PlannerConfig& config);

/// Feasible successors in primitive order; moves leaving the region (or the
/// cell, when given) are dropped.
std::vector<Successor> motion_primitives(const Pose& pose, const Region& region, const PlannerConfig& config,
                                         const CellPredicate& cell = {});

/// beta_t = 2 sqrt(t) log(|D| pi^2 / (6 delta)); rewards use sqrt(beta_t).
double beta(int t, const PlannerConfig& config);

struct MctsNode {
  Pose pose;
  int depth = 0;
  int primitive = -1;  // index of the move that reached this node
  double q_sum = 0.0;
  int visits = 0;
  int simulations = 0;  // rollouts started from this node itself
  MctsNode* parent = nullptr;
  std::vector<std::unique_ptr<MctsNode>> children;  // expanded children
  std::vector<Successor> unexpanded;
  bool terminal = false;

  bool fully_expanded() const { return unexpanded.empty(); }
};

/// UCT choice Q/n + 2 sqrt(log(n_parent) / n_child); ties go to the lowest
/// primitive index. Requires every child to have been visited.
MctsNode* uct_select(MctsNode& node);

/// One planning episode: builds the tree from a root pose against a fitted
/// GP and returns the best first move.
class MctsPlanner {
 public:
  MctsPlanner(const GPModel& gp, const Region& region, const PlannerConfig& config, const Pose& root,
              double remaining_budget, int t, Rng& rng, CellPredicate cell = {});

  void iterate();
  void run();

  const MctsNode& root() const { return *root_; }
  int iterations() const { return iterations_; }
  int max_depth() const { return max_depth_; }
  double sqrt_beta() const { return sqrt_beta_; }

  /// Root child with the highest mean value Q/n.
  const MctsNode& best_child() const;

  /// parent visits == sum(child visits) + own simulations, on every node.
  bool visit_counts_consistent() const;

 private:
  std::unique_ptr<MctsNode> make_node(const Pose& pose, int depth, int primitive, MctsNode* parent) const;
  double simulate(const MctsNode& node);

  const GPModel& gp_;
  Region region_;
  PlannerConfig config_;
  Rng& rng_;
  CellPredicate cell_;
  int max_depth_;
  double sqrt_beta_;
  int iterations_ = 0;
  std::unique_ptr<MctsNode> root_;
  std::vector<Point2> rollout_buffer_;
};

/// Builds a tree for config.iteration_cap iterations and returns the chosen
/// successor pose. Throws kPlannerStuck when the root has no feasible move.
Pose plan_next(const GPModel& gp, const Pose& root, double remaining_budget, int t, const PlannerConfig& config,
               const Region& region, Rng& rng, const CellPredicate& cell = {});

}  // namespace hotspot
