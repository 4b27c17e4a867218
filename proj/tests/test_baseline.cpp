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

#include <doctest.h>

#include "hotspot/baseline.hpp"
#include "hotspot/error.hpp"

using namespace hotspot;

namespace {

double oracle_length(const std::vector<Point2>& p) {
  double total = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) total += std::sqrt(squared_distance(p[i], p[i + 1]));
  return total;
}

}  // namespace

TEST_CASE("unit square sweep") {
  BoustrophedonPlan plan{Region(0, 1, 0, 1)};
  plan.lane_spacing = 0.5;
  const std::vector<Point2> w = bst_waypoints(plan);
  REQUIRE(w.size() == 6);
  const std::vector<Point2> expect{{0, 0}, {1, 0}, {1, 0.5}, {0, 0.5}, {0, 1}, {1, 1}};
  CHECK(w == expect);
  // three unit lanes plus two half-unit connectors
  CHECK(oracle_length(w) == doctest::Approx(4.0));
  CHECK(polyline_length(w) == doctest::Approx(oracle_length(w)));
}

TEST_CASE("spacing equal to the height gives the two edge lanes") {
  BoustrophedonPlan plan{Region(0, 4, 0, 1)};
  plan.lane_spacing = 1.0;
  const std::vector<Point2> w = bst_waypoints(plan);
  REQUIRE(w.size() == 4);
  CHECK(w[0].y == 0.0);
  CHECK(w[3].y == 1.0);
}

TEST_CASE("sweep geometry for every orientation and corner") {
  const Region r(-3, 7, 2, 9);
  for (SweepOrientation o : {SweepOrientation::kHorizontal, SweepOrientation::kVertical}) {
    for (Corner c : {Corner::kBottomLeft, Corner::kBottomRight, Corner::kTopLeft, Corner::kTopRight}) {
      BoustrophedonPlan plan{r, 1.3, o, c};
      const std::vector<Point2> w = bst_waypoints(plan);
      REQUIRE(w.size() % 2 == 0);
      const Point2 corner{c == Corner::kBottomLeft || c == Corner::kTopLeft ? r.x_min() : r.x_max(),
                          c == Corner::kBottomLeft || c == Corner::kBottomRight ? r.y_min() : r.y_max()};
      CHECK(w.front() == corner);
      for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        CHECK(r.contains(w[i]));
        CHECK((w[i].x == w[i + 1].x || w[i].y == w[i + 1].y));
        // connectors never exceed the spacing
        if (i % 2 == 1) CHECK(distance(w[i], w[i + 1]) <= 1.3 + 1e-12);
      }
      for (const Point2& p : sample_along(w, 0.7, 400)) CHECK(r.contains(p));
    }
  }
}

TEST_CASE("invalid sweeps") {
  BoustrophedonPlan plan{Region(0, 1, 0, 1)};
  plan.lane_spacing = 0.0;
  CHECK_THROWS_AS(bst_waypoints(plan), Error);
  plan.lane_spacing = 1.5;
  CHECK_THROWS_AS(bst_waypoints(plan), Error);
  const std::vector<Point2> one{{0, 0}};
  CHECK_THROWS_AS(sample_along(one, 1.0, 3), Error);
}

TEST_CASE("sampling along a path") {
  SUBCASE("ping-pong past the end") {
    const std::vector<Point2> w{{0, 0}, {2, 0}};
    const std::vector<Point2> s = sample_along(w, 1.0, 6);
    const double xs[] = {1, 2, 1, 0, 1, 2};
    REQUIRE(s.size() == 6);
    for (int i = 0; i < 6; ++i) {
      CHECK(s[i].x == doctest::Approx(xs[i]));
      CHECK(s[i].y == 0.0);
    }
  }
  SUBCASE("corners are cut at the right arc length") {
    const std::vector<Point2> w{{0, 0}, {1, 0}, {1, 1}};
    const std::vector<Point2> s = sample_along(w, 0.75, 2);
    CHECK(s[0].x == doctest::Approx(0.75));
    CHECK(s[1].x == doctest::Approx(1.0));
    CHECK(s[1].y == doctest::Approx(0.5));
  }
}

TEST_CASE("strips") {
  const std::vector<Region> s = split_strips(Region(0, 9, -1, 1), 3);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == Region(0, 3, -1, 1));
  CHECK(s[2].x_max() == 9.0);
  double w = 0;
  for (const Region& r : s) w += r.width();
  CHECK(w == doctest::Approx(9.0));
  CHECK_THROWS_AS(split_strips(Region(0, 1, 0, 1), 0), Error);
}

TEST_CASE("sweep missions") {
  const SyntheticField f(Region(0, 20, 0, 20), {{{10, 10}, 1.0, 3.0}});
  BstMissionOptions opt;
  opt.hyper.signal_std = 0.5;
  opt.hyper.length_scales = {3, 3};
  opt.hyper.noise_var = 1e-5;
  opt.eval_resolution = 21;
  opt.final_restarts = 1;
  BoustrophedonPlan plan{f.region()};
  plan.lane_spacing = 2.0;

  SUBCASE("short budget stays on the first lane") {
    opt.budget = 5.0;
    Sensor s(0.0, 1);
    const MissionLog log = run_bst_mission(f, s, plan, opt);
    REQUIRE(log.measurements() == 5);
    for (int i = 0; i < 5; ++i) {
      CHECK(log.steps[i].pose.position.x == doctest::Approx(i + 1.0));
      CHECK(log.steps[i].pose.position.y == 0.0);
      CHECK(log.steps[i].measurement == f.value(log.steps[i].pose.position));
    }
    CHECK(log.strategy == "BST");
  }
  SUBCASE("measurement count is the budget quotient") {
    for (double eta : {0.0, 0.3, 1.0}) {
      opt.budget = 37.0;
      opt.eta = eta;
      Sensor s(0.0, 1);
      const MissionLog log = run_bst_mission(f, s, plan, opt);
      CHECK(log.measurements() == static_cast<int>(std::floor(37.0 / (1.0 + eta) + 1e-12)));
      CHECK(budget_respected(log));
    }
  }
  SUBCASE("checkpoints") {
    opt.budget = 30.0;
    Sensor s(0.01, 2);
    const MissionLog log = run_bst_mission(f, s, plan, opt);
    REQUIRE(log.checkpoints.size() == 3);
    CHECK(log.checkpoints[1].measurements == 20);
    CHECK(log.checkpoints.back().reported == log.reported);
  }
  SUBCASE("sub-region must lie inside the field") {
    BoustrophedonPlan bad{Region(-1, 5, 0, 5)};
    Sensor s(0.0, 1);
    CHECK_THROWS_AS(run_bst_mission(f, s, bad, opt), Error);
  }
}
