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

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "hotspot/error.hpp"
#include "hotspot/planner.hpp"

using namespace hotspot;

namespace {

constexpr double kPi = std::numbers::pi;

std::unique_ptr<MctsNode> leaf(int primitive, double q, int n) {
  auto node = std::make_unique<MctsNode>();
  node->primitive = primitive;
  node->q_sum = q;
  node->visits = n;
  return node;
}

// Dense samples of a single peak, so the posterior mean dominates the bonus.
GPModel peaked_model(Point2 peak) {
  Hyperparameters h;
  h.length_scales = {1.0, 1.0};
  h.noise_var = 1e-4;
  std::vector<Point2> x;
  std::vector<double> y;
  for (double px = -5; px <= 5; px += 0.5) {
    for (double py = -5; py <= 5; py += 0.5) {
      x.push_back({px, py});
      y.push_back(10.0 * std::exp(-0.5 * squared_distance({px, py}, peak)));
    }
  }
  return GPModel(h, x, y);
}

}  // namespace

TEST_CASE("wrap_angle") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - 2 * kPi));
}

TEST_CASE("primitive offsets") {
  const PlannerConfig c;
  const std::vector<double> o = primitive_offsets(c);
  REQUIRE(o.size() == 5);
  const double expect[] = {-kPi / 4, -kPi / 8, 0.0, kPi / 8, kPi / 4};
  for (int i = 0; i < 5; ++i) CHECK(o[i] == doctest::Approx(expect[i]));
  PlannerConfig one;
  one.num_primitives = 1;
  CHECK(primitive_offsets(one) == std::vector<double>{0.0});
}

TEST_CASE("motion primitives") {
  const Region r(0, 10, 0, 10);
  const PlannerConfig c;
  SUBCASE("centre keeps all five") {
    const Pose p{{5, 5}, 0.0};
    const auto s = motion_primitives(p, r, c);
    REQUIRE(s.size() == 5);
    for (int i = 0; i < 5; ++i) {
      CHECK(s[i].primitive == i);
      CHECK(distance(s[i].pose.position, p.position) == doctest::Approx(1.0));
    }
    CHECK(s[2].pose.position.x == doctest::Approx(6.0));
    CHECK(s[2].pose.position.y == doctest::Approx(5.0));
    CHECK(s[0].pose.heading == doctest::Approx(-kPi / 4));
  }
  SUBCASE("corner drops moves that leave the region") {
    const Pose p{{10, 10}, kPi / 4};
    CHECK(motion_primitives(p, r, c).empty());
    const Pose q{{0.5, 0.5}, -3 * kPi / 4};
    const auto s = motion_primitives(q, r, c);
    for (const Successor& x : s) CHECK(r.contains(x.pose.position));
    CHECK(s.size() < 5);
  }
  SUBCASE("cell predicate") {
    const Pose p{{5, 5}, kPi / 2};
    const auto s = motion_primitives(p, r, c, [](Point2 q) { return q.x >= 5.0; });
    REQUIRE(s.size() == 3);
    CHECK(s[0].primitive == 0);
    CHECK(s[2].primitive == 2);
  }
}

TEST_CASE("beta") {
  const PlannerConfig c;
  const double b1 = 2.0 * std::log(16900.0 * kPi * kPi / 0.6);
  CHECK(beta(1, c) == doctest::Approx(b1));
  CHECK(beta(1, c) == doctest::Approx(25.07).epsilon(1e-3));
  CHECK(beta(4, c) / beta(1, c) == doctest::Approx(2.0));
  for (int t = 1; t < 400; ++t) REQUIRE(beta(t + 1, c) > beta(t, c));
  CHECK_THROWS_AS(beta(0, c), Error);
}

TEST_CASE("uct selection") {
  SUBCASE("exploration wins over a better mean") {
    MctsNode parent;
    parent.visits = 6;
    parent.children.push_back(leaf(0, 10.0, 5));
    parent.children.push_back(leaf(1, 3.0, 1));
    const double s0 = 10.0 / 5 + 2 * std::sqrt(std::log(6.0) / 5);
    const double s1 = 3.0 / 1 + 2 * std::sqrt(std::log(6.0) / 1);
    REQUIRE(s1 > s0);
    CHECK(uct_select(parent) == parent.children[1].get());
  }
  SUBCASE("identical children resolve to the first") {
    MctsNode parent;
    parent.visits = 9;
    for (int i = 0; i < 3; ++i) parent.children.push_back(leaf(i, 1.5, 3));
    CHECK(uct_select(parent) == parent.children[0].get());
  }
  SUBCASE("single child") {
    MctsNode parent;
    parent.visits = 1;
    parent.children.push_back(leaf(3, -2.0, 1));
    CHECK(uct_select(parent) == parent.children[0].get());
  }
}

TEST_CASE("tree construction") {
  const Region r(-10, 10, -10, 10);
  const GPModel gp(Hyperparameters{});
  PlannerConfig c;
  Rng rng(3);

  SUBCASE("every root move is tried before any is revisited") {
    MctsPlanner p(gp, r, c, Pose{{0, 0}, 0.0}, 20.0, 1, rng);
    for (int i = 0; i < 5; ++i) p.iterate();
    REQUIRE(p.root().children.size() == 5);
    for (const auto& ch : p.root().children) {
      CHECK(ch->visits == 1);
      CHECK(ch->children.empty());
    }
    CHECK(p.root().visits == 5);
    CHECK(p.visit_counts_consistent());
  }
  SUBCASE("depth is bounded by the remaining budget") {
    MctsPlanner p(gp, r, c, Pose{{0, 0}, 0.0}, 7.5, 1, rng);
    CHECK(p.max_depth() == 7);
    CHECK(p.sqrt_beta() == doctest::Approx(std::sqrt(beta(1, c))));
    for (int i = 0; i < 400; ++i) p.iterate();
    CHECK(p.iterations() == 400);
    CHECK(p.visit_counts_consistent());
  }
  SUBCASE("flat posterior gives equal child values") {
    MctsPlanner p(gp, r, c, Pose{{0, 0}, 0.0}, 10.0, 1, rng);
    p.run();
    const double v0 = p.root().children[0]->q_sum / p.root().children[0]->visits;
    for (const auto& ch : p.root().children) CHECK(ch->q_sum / ch->visits == doctest::Approx(v0).epsilon(1e-12));
  }
  SUBCASE("stuck root") {
    CHECK_THROWS_AS(MctsPlanner(gp, r, c, Pose{{10, 10}, kPi / 4}, 10.0, 1, rng), Error);
    CHECK_THROWS_AS(MctsPlanner(gp, r, c, Pose{{0, 0}, 0.0}, 0.5, 1, rng), Error);
  }
}

TEST_CASE("planner heads for a peak straight ahead") {
  const GPModel gp = peaked_model({3.0, 0.0});
  const Region r(-10, 10, -10, 10);
  const PlannerConfig c;
  Rng rng(11);
  const Pose next = plan_next(gp, Pose{{0, 0}, 0.0}, 2.0, 1, c, r, rng);
  CHECK(next.position.x == doctest::Approx(1.0));
  CHECK(next.position.y == doctest::Approx(0.0));
  CHECK(next.heading == doctest::Approx(0.0));
}

TEST_CASE("planner output is a feasible primitive and deterministic") {
  const GPModel gp = peaked_model({-2.0, 3.0});
  const Region r(-10, 10, -10, 10);
  const PlannerConfig c;
  for (int trial = 0; trial < 10; ++trial) {
    const Pose root{{0.3 * trial - 1.0, 0.2 * trial}, 0.4 * trial};
    Rng a(trial);
    Rng b(trial);
    const Pose pa = plan_next(gp, root, 30.0, trial + 1, c, r, a);
    const Pose pb = plan_next(gp, root, 30.0, trial + 1, c, r, b);
    CHECK(pa == pb);
    bool found = false;
    for (const Successor& s : motion_primitives(root, r, c)) found = found || s.pose == pa;
    CHECK(found);
  }
}
