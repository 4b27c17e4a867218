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

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "hotspot/geometry.hpp"

namespace hotspot {

/// Ground-truth scalar field over a rectangular region. Implementations are
/// immutable after construction and safe for concurrent reads.
class SpatialField {
 public:
  virtual ~SpatialField() = default;

  virtual double value(Point2 p) const = 0;
  virtual const Region& region() const = 0;

  /// Known hotspot locations; the first entry is the global maximum.
  virtual std::vector<Point2> maxima() const = 0;
};

struct Bump {
  Point2 center;
  double height = 0.0;
  double width = 1.0;
};

/// Union of Gaussian bumps, f = 1 - prod_i (1 - g_i) with
/// g_i = h_i exp(-|x - c_i|^2 / (2 w_i^2)). Values stay in [0, 1] and the
/// unique height-1 bump pins the global maximum exactly at its centre.
class SyntheticField final : public SpatialField {
 public:
  SyntheticField(const Region& region, std::vector<Bump> bumps);

  double value(Point2 p) const override;
  const Region& region() const override { return region_; }
  std::vector<Point2> maxima() const override { return maxima_; }

  const std::vector<Bump>& bumps() const { return bumps_; }
  Point2 global_maximum() const { return maxima_.front(); }

 private:
  Region region_;
  std::vector<Bump> bumps_;
  std::vector<Point2> maxima_;
};

SyntheticField make_four_maxima_field();

/// Gridded data queried through a Gaussian radial-basis interpolant (plus a
/// constant term) that passes through every node and reproduces constant
/// fields. The basis is separable on the tensor grid, so the interpolation
/// system factors into one small solve per axis.
class GriddedField final : public SpatialField {
 public:
  /// values(iy, ix) is the sample at (lon[ix], lat[iy]).
  GriddedField(std::vector<double> lon_axis, std::vector<double> lat_axis,
               Eigen::MatrixXd values);

  double value(Point2 p) const override;
  const Region& region() const override { return region_; }
  std::vector<Point2> maxima() const override;

  const std::vector<double>& lon_axis() const { return lon_; }
  const std::vector<double>& lat_axis() const { return lat_; }
  const Eigen::MatrixXd& grid() const { return values_; }

 private:
  std::vector<double> lon_;
  std::vector<double> lat_;
  Eigen::MatrixXd values_;
  Eigen::MatrixXd coefficients_;
  double lon_shape_;
  double lat_shape_;
  Region region_;
};

/// Reads a `lon,lat,value` CSV covering a complete rectangular grid.
GriddedField load_gridded_field(const std::filesystem::path& path);

/// Noisy point sensor. Holds its own RNG; one sensor per robot.
class Sensor {
 public:
  Sensor(double noise_std, std::uint64_t seed);

  double noise_std() const { return noise_std_; }
  double measure(const SpatialField& field, Point2 p);

 private:
  double noise_std_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

double measure(const SpatialField& field, Sensor& sensor, Point2 p);

struct FieldStats {
  double max_value = 0.0;
  Point2 max_location;
  double min_value = 0.0;
  double range = 0.0;
};

/// Brute-force scan over a resolution x resolution grid; ties keep the
/// first point in row-major order.
FieldStats field_stats(const SpatialField& field, int grid_resolution);

}  // namespace hotspot
