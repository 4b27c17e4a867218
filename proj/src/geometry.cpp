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

#include "hotspot/geometry.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

#include "hotspot/error.hpp"

namespace hotspot {

void log_warning(const std::string& message) {
  static const bool enabled = std::getenv("HOTSPOT_IPP_LOG") != nullptr;
  if (enabled) std::cerr << "[hotspot] warning: " << message << '\n';
}

Region::Region(double x_min, double x_max, double y_min, double y_max)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max) {
  if (!(x_min < x_max) || !(y_min < y_max)) {
    throw Error(ErrorCode::kInvalidArgument, "region bounds must satisfy min < max");
  }
}

EvaluationGrid::EvaluationGrid(const Region& region, int nx, int ny)
    : region_(region), nx_(nx), ny_(ny) {
  if (nx < 2 || ny < 2) {
    throw Error(ErrorCode::kInvalidArgument, "evaluation grid needs at least 2 points per axis");
  }
  points_.reserve(static_cast<std::size_t>(nx) * ny);
  const double dx = region.width() / (nx - 1);
  const double dy = region.height() / (ny - 1);
  for (int iy = 0; iy < ny; ++iy) {
    // Pin the last node to the bound so it never lands outside by rounding.
    const double y = iy == ny - 1 ? region.y_max() : region.y_min() + iy * dy;
    for (int ix = 0; ix < nx; ++ix) {
      const double x = ix == nx - 1 ? region.x_max() : region.x_min() + ix * dx;
      points_.push_back({x, y});
    }
  }
}

}  // namespace hotspot
