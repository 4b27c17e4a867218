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

#include "hotspot/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include <Eigen/LU>

#include "hotspot/error.hpp"

namespace hotspot {
namespace {

double bump_value(const Bump& b, Point2 p) {
  return b.height * std::exp(-squared_distance(p, b.center) / (2.0 * b.width * b.width));
}

// Gradient ascent with backtracking, used once per bump to locate the
// actual local maximum of the union field near each nominal centre.
Point2 climb(const SyntheticField& field, Point2 start) {
  constexpr double kH = 1e-6;
  Point2 p = start;
  double step = 0.5;
  double current = field.value(p);
  for (int it = 0; it < 10000 && step > 1e-12; ++it) {
    const double gx = (field.value({p.x + kH, p.y}) - field.value({p.x - kH, p.y})) / (2 * kH);
    const double gy = (field.value({p.x, p.y + kH}) - field.value({p.x, p.y - kH})) / (2 * kH);
    const double norm = std::hypot(gx, gy);
    if (norm < 1e-13) break;
    const Point2 candidate{p.x + step * gx / norm, p.y + step * gy / norm};
    const double v = field.value(candidate);
    if (v > current && field.region().contains(candidate)) {
      p = candidate;
      current = v;
      step *= 1.2;
    } else {
      step *= 0.5;
    }
  }
  return p;
}

}  // namespace

SyntheticField::SyntheticField(const Region& region, std::vector<Bump> bumps)
    : region_(region), bumps_(std::move(bumps)) {
  if (bumps_.empty()) throw Error(ErrorCode::kInvalidArgument, "synthetic field needs at least one bump");
  int global = -1;
  for (std::size_t i = 0; i < bumps_.size(); ++i) {
    const Bump& b = bumps_[i];
    if (!(b.width > 0.0) || !(b.height > 0.0) || b.height > 1.0) {
      throw Error(ErrorCode::kInvalidArgument, "bump heights must lie in (0, 1] and widths be positive");
    }
    if (!region_.contains(b.center)) {
      throw Error(ErrorCode::kInvalidArgument, "bump centre outside region");
    }
    if (b.height == 1.0) {
      if (global >= 0) throw Error(ErrorCode::kInvalidArgument, "exactly one bump may have height 1");
      global = static_cast<int>(i);
    }
  }
  if (global < 0) throw Error(ErrorCode::kInvalidArgument, "exactly one bump must have height 1");

  maxima_.push_back(bumps_[global].center);
  for (std::size_t i = 0; i < bumps_.size(); ++i) {
    if (static_cast<int>(i) != global) maxima_.push_back(climb(*this, bumps_[i].center));
  }
}

double SyntheticField::value(Point2 p) const {
  double complement = 1.0;
  for (const Bump& b : bumps_) complement *= 1.0 - bump_value(b, p);
  return 1.0 - complement;
}

SyntheticField make_four_maxima_field() {
  return SyntheticField(Region(-155.5, -129.5, 9.0, 35.0),
                        {
                            {{-135.6, 29.0}, 1.00, 5.00},
                            {{-148.0, 15.0}, 0.84, 4.40},
                            {{-140.0, 22.0}, 0.72, 3.75},
                            {{-133.0, 13.0}, 0.78, 3.75},
                        });
}

// ---------------------------------------------------------------------------

namespace {

double mean_spacing(const std::vector<double>& axis) {
  return (axis.back() - axis.front()) / static_cast<double>(axis.size() - 1);
}

// Cardinal operator of the 1-D Gaussian RBF interpolant augmented with a
// constant term: rows map [phi(x); 1] to node weights. The augmentation makes
// the interpolant reproduce constants exactly.
Eigen::MatrixXd axis_operator(const std::vector<double>& axis, double shape) {
  const auto n = static_cast<Eigen::Index>(axis.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = (axis[i] - axis[j]) / shape;
      a(i, j) = std::exp(-d * d);
    }
    a(i, n) = 1.0;
    a(n, i) = 1.0;
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw Error(ErrorCode::kNumerical, "RBF interpolation system is singular");
  return lu.inverse().topRows(n);
}

// Basis weights beyond this many shape lengths are below 1e-21.
constexpr double kWindow = 7.0;

std::pair<std::size_t, std::size_t> window(const std::vector<double>& axis, double c, double reach) {
  const auto lo = std::lower_bound(axis.begin(), axis.end(), c - reach);
  const auto hi = std::upper_bound(axis.begin(), axis.end(), c + reach);
  return {static_cast<std::size_t>(lo - axis.begin()), static_cast<std::size_t>(hi - axis.begin())};
}

}  // namespace

GriddedField::GriddedField(std::vector<double> lon_axis, std::vector<double> lat_axis,
                           Eigen::MatrixXd values)
    : lon_(std::move(lon_axis)),
      lat_(std::move(lat_axis)),
      values_(std::move(values)),
      lon_shape_(0.0),
      lat_shape_(0.0),
      region_(0.0, 1.0, 0.0, 1.0) {
  if (lon_.size() < 2 || lat_.size() < 2) {
    throw Error(ErrorCode::kStructure, "gridded field needs at least 2 nodes per axis");
  }
  for (const auto* axis : {&lon_, &lat_}) {
    for (std::size_t i = 1; i < axis->size(); ++i) {
      if (!((*axis)[i] > (*axis)[i - 1])) {
        throw Error(ErrorCode::kStructure, "grid axes must be strictly increasing");
      }
    }
  }
  if (values_.rows() != static_cast<Eigen::Index>(lat_.size()) ||
      values_.cols() != static_cast<Eigen::Index>(lon_.size())) {
    throw Error(ErrorCode::kStructure, "grid dimensions do not match axis lengths");
  }
  region_ = Region(lon_.front(), lon_.back(), lat_.front(), lat_.back());
  lon_shape_ = mean_spacing(lon_);
  lat_shape_ = mean_spacing(lat_);

  // f(x, y) = [phi(y); 1]^T P_lat^T V P_lon [phi(x); 1]
  const Eigen::MatrixXd p_lat = axis_operator(lat_, lat_shape_);
  const Eigen::MatrixXd p_lon = axis_operator(lon_, lon_shape_);
  coefficients_ = p_lat.transpose() * values_ * p_lon;
}

double GriddedField::value(Point2 p) const {
  const auto [ix0, ix1] = window(lon_, p.x, kWindow * lon_shape_);
  const auto [iy0, iy1] = window(lat_, p.y, kWindow * lat_shape_);
  const auto cx = static_cast<Eigen::Index>(lon_.size());  // constant column
  const auto cy = static_cast<Eigen::Index>(lat_.size());  // constant row
  thread_local std::vector<double> wx;
  wx.resize(ix1 - ix0);
  for (std::size_t i = ix0; i < ix1; ++i) {
    const double d = (p.x - lon_[i]) / lon_shape_;
    wx[i - ix0] = std::exp(-d * d);
  }
  auto row_sum = [&](Eigen::Index j) {
    double row = coefficients_(j, cx);
    for (std::size_t i = ix0; i < ix1; ++i) row += coefficients_(j, static_cast<Eigen::Index>(i)) * wx[i - ix0];
    return row;
  };
  double total = row_sum(cy);
  for (std::size_t j = iy0; j < iy1; ++j) {
    const double d = (p.y - lat_[j]) / lat_shape_;
    total += std::exp(-d * d) * row_sum(static_cast<Eigen::Index>(j));
  }
  return total;
}

std::vector<Point2> GriddedField::maxima() const {
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < values_.rows(); ++j) {
    for (Eigen::Index i = 0; i < values_.cols(); ++i) {
      if (values_(j, i) > best) {
        best = values_(j, i);
        row = j;
        col = i;
      }
    }
  }
  return {{lon_[col], lat_[row]}};
}

GriddedField load_gridded_field(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open dataset file: " + path.string());

  std::string line;
  std::size_t row = 1;
  if (!std::getline(in, line)) throw Error(ErrorCode::kParse, "row 1: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (line != "lon,lat,value") {
    throw Error(ErrorCode::kParse, "row 1: expected header 'lon,lat,value', got '" + line + "'");
  }

  std::map<std::pair<double, double>, double> samples;
  std::vector<double> lons;
  std::vector<double> lats;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    double parsed[3];
    int count = 0;
    while (std::getline(ss, cell, ',')) {
      if (count == 3) {
        count = 4;
        break;
      }
      std::size_t used = 0;
      try {
        parsed[count] = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cell.size() || !std::isfinite(parsed[count])) {
        throw Error(ErrorCode::kParse, "row " + std::to_string(row) + ": invalid number '" + cell + "'");
      }
      ++count;
    }
    if (count != 3) {
      throw Error(ErrorCode::kParse, "row " + std::to_string(row) + ": expected 3 columns");
    }
    if (!samples.emplace(std::make_pair(parsed[0], parsed[1]), parsed[2]).second) {
      throw Error(ErrorCode::kParse, "row " + std::to_string(row) + ": duplicate grid node");
    }
    lons.push_back(parsed[0]);
    lats.push_back(parsed[1]);
  }
  if (samples.empty()) throw Error(ErrorCode::kStructure, "dataset has no rows");

  auto unique_sorted = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  unique_sorted(lons);
  unique_sorted(lats);

  Eigen::MatrixXd grid(static_cast<Eigen::Index>(lats.size()), static_cast<Eigen::Index>(lons.size()));
  std::string missing;
  std::size_t missing_count = 0;
  for (std::size_t j = 0; j < lats.size(); ++j) {
    for (std::size_t i = 0; i < lons.size(); ++i) {
      const auto it = samples.find({lons[i], lats[j]});
      if (it == samples.end()) {
        if (++missing_count <= 20) {
          std::ostringstream os;
          os << " (" << lons[i] << ", " << lats[j] << ")";
          missing += os.str();
        }
        continue;
      }
      grid(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = it->second;
    }
  }
  if (missing_count > 0) {
    throw Error(ErrorCode::kStructure, "incomplete grid, " + std::to_string(missing_count) +
                                           " missing node(s):" + missing + (missing_count > 20 ? " ..." : ""));
  }
  return GriddedField(std::move(lons), std::move(lats), std::move(grid));
}

// ---------------------------------------------------------------------------

Sensor::Sensor(double noise_std, std::uint64_t seed) : noise_std_(noise_std), rng_(seed) {
  if (!(noise_std >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "noise std must be non-negative");
}

double Sensor::measure(const SpatialField& field, Point2 p) {
  if (!field.region().contains(p)) {
    std::ostringstream os;
    os << "measurement location (" << p.x << ", " << p.y << ") outside region";
    throw Error(ErrorCode::kOutOfBounds, os.str());
  }
  const double truth = field.value(p);
  // Draw even when noise is zero so the RNG stream does not depend on it.
  const double eps = normal_(rng_);
  return truth + noise_std_ * eps;
}

double measure(const SpatialField& field, Sensor& sensor, Point2 p) { return sensor.measure(field, p); }

FieldStats field_stats(const SpatialField& field, int grid_resolution) {
  if (grid_resolution < 2) throw Error(ErrorCode::kInvalidArgument, "grid_resolution must be >= 2");
  const EvaluationGrid grid(field.region(), grid_resolution);
  FieldStats s;
  s.max_value = -std::numeric_limits<double>::infinity();
  s.min_value = std::numeric_limits<double>::infinity();
  for (const Point2& p : grid.points()) {
    const double v = field.value(p);
    if (v > s.max_value) {
      s.max_value = v;
      s.max_location = p;
    }
    s.min_value = std::min(s.min_value, v);
  }
  s.range = s.max_value - s.min_value;
  return s;
}

}  // namespace hotspot
