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

#include <cmath>
#include <cstddef>
#include <vector>

namespace hotspot {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

inline double squared_distance(Point2 a, Point2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Axis-aligned rectangle housing the environment. Bounds are inclusive.
class Region {
 public:
  Region(double x_min, double x_max, double y_min, double y_max);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double y_min() const { return y_min_; }
  double y_max() const { return y_max_; }
  double width() const { return x_max_ - x_min_; }
  double height() const { return y_max_ - y_min_; }
  double diagonal() const { return std::hypot(width(), height()); }
  Point2 centroid() const { return {0.5 * (x_min_ + x_max_), 0.5 * (y_min_ + y_max_)}; }

  bool contains(Point2 p) const {
    return p.x >= x_min_ && p.x <= x_max_ && p.y >= y_min_ && p.y <= y_max_;
  }

  friend bool operator==(const Region&, const Region&) = default;

 private:
  double x_min_;
  double x_max_;
  double y_min_;
  double y_max_;
};

/// Regular lattice over a region, endpoints included. Index order is
/// row-major with x varying fastest: index = iy * nx + ix.
class EvaluationGrid {
 public:
  EvaluationGrid(const Region& region, int nx, int ny);
  EvaluationGrid(const Region& region, int resolution)
      : EvaluationGrid(region, resolution, resolution) {}

  const Region& region() const { return region_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<Point2>& points() const { return points_; }
  const Point2& operator[](std::size_t i) const { return points_[i]; }

 private:
  Region region_;
  int nx_;
  int ny_;
  std::vector<Point2> points_;
};

}  // namespace hotspot
