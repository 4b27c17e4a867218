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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <doctest.h>

#include "hotspot/error.hpp"
#include "hotspot/metrics.hpp"

using namespace hotspot;

namespace {

class PlaneField final : public SpatialField {
 public:
  PlaneField(double a, double b) : a_(a), b_(b) {}
  double value(Point2 p) const override { return a_ * (p.x + p.y) / 8.0 + b_; }
  const Region& region() const override { return region_; }
  std::vector<Point2> maxima() const override { return {{4, 4}}; }

 private:
  double a_;
  double b_;
  Region region_{0, 4, 0, 4};
};

FieldReference unit_reference() { return {1.0, {4, 4}, 0.0, 1.0}; }

// Replays every prefix of the event list and counts covered maxima directly.
std::map<int, double> replay_oracle(const std::vector<MeasurementEvent>& events, const std::vector<Point2>& maxima,
                                    double radius) {
  std::vector<MeasurementEvent> sorted = events;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.time < b.time; });
  std::map<int, double> out;
  std::set<std::size_t> seen;
  for (const MeasurementEvent& e : sorted) {
    for (std::size_t m = 0; m < maxima.size(); ++m) {
      if (distance(e.position, maxima[m]) <= radius) seen.insert(m);
    }
    for (int j = 1; j <= static_cast<int>(seen.size()); ++j) out.emplace(j, e.time);
  }
  return out;
}

}  // namespace

TEST_CASE("terminal regret") {
  const PlaneField f(1.0, 0.0);
  const FieldReference ref = unit_reference();
  CHECK(terminal_regret(f, ref, {4, 4}) == 0.0);
  // f = 0.88 at x + y = 7.04
  CHECK(terminal_regret(f, ref, {3.52, 3.52}) == doctest::Approx(12.0));
  FieldReference flat = ref;
  flat.range = 0.0;
  CHECK_THROWS_AS(terminal_regret(f, flat, {0, 0}), Error);
}

TEST_CASE("average cumulative regret") {
  const PlaneField f(1.0, 0.0);
  const FieldReference ref = unit_reference();
  const std::vector<Point2> parked{{4, 4}, {4, 4}};
  CHECK(avg_cumulative_regret(f, ref, parked) == 0.0);
  const std::vector<Point2> two{{4, 4}, {2, 2}};
  CHECK(avg_cumulative_regret(f, ref, two) == doctest::Approx(25.0));
  CHECK_THROWS_AS(avg_cumulative_regret(f, ref, std::vector<Point2>{}), Error);
}

TEST_CASE("rmse") {
  const PlaneField f(1.0, 0.0);
  const FieldReference ref = unit_reference();
  const EvaluationGrid grid(f.region(), 5);
  std::vector<double> exact;
  std::vector<double> offset;
  for (const Point2& p : grid.points()) {
    exact.push_back(f.value(p));
    offset.push_back(f.value(p) + 0.1);
  }
  CHECK(rmse(f, ref, exact, grid) == 0.0);
  CHECK(rmse(f, ref, offset, grid) == doctest::Approx(10.0));
  CHECK_THROWS_AS(rmse(f, ref, std::vector<double>{1.0}, grid), Error);
}

TEST_CASE("distance error") {
  const Region r(0, 3, 0, 4);
  CHECK(distance_error({1, 1}, {1, 1}, r) == 0.0);
  CHECK(distance_error({0, 0}, {3, 4}, r) == doctest::Approx(100.0));
}

TEST_CASE("percent metrics are invariant under affine rescaling of the field") {
  const std::vector<Point2> path{{0, 0}, {1, 2}, {3, 1}};
  const FieldReference r1 = make_reference(PlaneField(1.0, 0.0), 9);
  const PlaneField f1(1.0, 0.0);
  const PlaneField f2(7.5, -3.0);
  const FieldReference r2 = make_reference(f2, 9);
  CHECK(r2.range == doctest::Approx(7.5 * r1.range));
  CHECK(terminal_regret(f2, r2, {1, 3}) == doctest::Approx(terminal_regret(f1, r1, {1, 3})));
  CHECK(avg_cumulative_regret(f2, r2, path) == doctest::Approx(avg_cumulative_regret(f1, r1, path)));
}

TEST_CASE("reference uses the exact synthetic maximum") {
  const SyntheticField f = make_four_maxima_field();
  const FieldReference ref = make_reference(f, 130);
  CHECK(ref.max_location == f.global_maximum());
  CHECK(ref.max_value == doctest::Approx(1.0));
  CHECK(ref.range == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("detection times") {
  const std::vector<Point2> maxima{{0, 0}, {10, 0}, {10, 10}, {0, 10}};
  SUBCASE("start on a maximum") {
    const std::vector<MeasurementEvent> e{{0.0, 0, {0.5, 0.5}}, {1.0, 0, {1.5, 0.5}}};
    const auto d = detection_times(e, maxima, 2.0);
    REQUIRE(d.size() == 1);
    CHECK(d.at(1) == 0.0);
  }
  SUBCASE("visiting all four in turn") {
    std::vector<MeasurementEvent> e;
    double t = 0;
    for (const Point2& m : maxima) {
      for (int k = 0; k < 5; ++k) e.push_back({t += 1.0, 0, {m.x + 3.0 - k, m.y}});
    }
    const auto d = detection_times(e, maxima, 1.5);
    REQUIRE(d.size() == 4);
    for (int j = 1; j < 4; ++j) CHECK(d.at(j + 1) > d.at(j));
  }
  SUBCASE("random fleets against a replay") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-2.0, 12.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<MeasurementEvent> e;
      for (int i = 0; i < 60; ++i) e.push_back({static_cast<double>(i / 3), i % 3, {u(rng), u(rng)}});
      const auto d = detection_times(e, maxima, 2.0);
      REQUIRE(d == replay_oracle(e, maxima, 2.0));
      double prev = -1;
      for (const auto& [j, time] : d) {
        REQUIRE(time >= prev);
        prev = time;
      }
    }
  }
  CHECK_THROWS_AS(detection_times(std::vector<MeasurementEvent>{}, std::vector<Point2>{}, 1.0), Error);
}
