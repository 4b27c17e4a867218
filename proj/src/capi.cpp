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

#include "hotspot/hotspot.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "hotspot/error.hpp"
#include "hotspot/experiment.hpp"
#include "hotspot/field.hpp"
#include "hotspot/gp.hpp"
#include "hotspot/planner.hpp"

struct hs_field {
  std::unique_ptr<hotspot::SpatialField> impl;
};

struct hs_sensor {
  hotspot::Sensor impl;
};

struct hs_gp {
  hotspot::GPModel impl;
};

namespace {

thread_local std::string g_last_error;

hs_status fail(hs_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
hs_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const hotspot::Error& e) {
    return fail(static_cast<hs_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(HS_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(HS_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(HS_INTERNAL_ERROR, "unknown error");
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

hotspot::Hyperparameters from_c(const hs_hyper& h) {
  hotspot::Hyperparameters out;
  out.signal_std = h.signal_std;
  out.length_scales = {h.length_scale_1, h.length_scale_2};
  out.noise_var = h.noise_var;
  return out;
}

hs_hyper to_c(const hotspot::Hyperparameters& h) {
  return {h.signal_std, h.length_scales[0], h.length_scales[1], h.noise_var};
}

#define HS_REQUIRE(cond, what) \
  if (!(cond)) return fail(HS_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* hs_version(void) { return HOTSPOT_VERSION; }

const char* hs_last_error(void) { return g_last_error.c_str(); }

const char* hs_status_name(hs_status status) {
  switch (status) {
    case HS_OK:
      return "ok";
    case HS_INVALID_ARGUMENT:
      return "invalid argument";
    case HS_OUT_OF_BOUNDS:
      return "out of bounds";
    case HS_PARSE_ERROR:
      return "parse error";
    case HS_STRUCTURE_ERROR:
      return "structure error";
    case HS_NUMERICAL_ERROR:
      return "numerical error";
    case HS_PLANNER_STUCK:
      return "planner stuck";
    case HS_CONFIG_ERROR:
      return "config error";
    case HS_IO_ERROR:
      return "i/o error";
    case HS_INTERNAL_ERROR:
      return "internal error";
  }
  return "unknown status";
}

void hs_string_free(char* text) { std::free(text); }

hs_status hs_field_four_maxima(hs_field** out) {
  return guarded([&] {
    HS_REQUIRE(out != nullptr, "out is null");
    *out = new hs_field{std::make_unique<hotspot::SyntheticField>(hotspot::make_four_maxima_field())};
    return HS_OK;
  });
}

hs_status hs_field_load_csv(const char* path, hs_field** out) {
  return guarded([&] {
    HS_REQUIRE(path != nullptr && out != nullptr, "path and out must be non-null");
    if (!std::filesystem::exists(path)) return fail(HS_IO_ERROR, std::string("file not found: ") + path);
    *out = new hs_field{std::make_unique<hotspot::GriddedField>(hotspot::load_gridded_field(path))};
    return HS_OK;
  });
}

hs_status hs_field_value(const hs_field* field, double x, double y, double* out) {
  return guarded([&] {
    HS_REQUIRE(field != nullptr && out != nullptr, "field and out must be non-null");
    if (!field->impl->region().contains({x, y})) {
      throw hotspot::Error(hotspot::ErrorCode::kOutOfBounds, "query point outside the field region");
    }
    *out = field->impl->value({x, y});
    return HS_OK;
  });
}

hs_status hs_field_region(const hs_field* field, double region[4]) {
  return guarded([&] {
    HS_REQUIRE(field != nullptr && region != nullptr, "field and region must be non-null");
    const hotspot::Region& r = field->impl->region();
    region[0] = r.x_min();
    region[1] = r.x_max();
    region[2] = r.y_min();
    region[3] = r.y_max();
    return HS_OK;
  });
}

hs_status hs_field_stats_compute(const hs_field* field, int grid_resolution, hs_field_stats* out) {
  return guarded([&] {
    HS_REQUIRE(field != nullptr && out != nullptr, "field and out must be non-null");
    const hotspot::FieldStats s = hotspot::field_stats(*field->impl, grid_resolution);
    *out = {s.max_value, s.max_location.x, s.max_location.y, s.min_value, s.range};
    return HS_OK;
  });
}

void hs_field_destroy(hs_field* field) { delete field; }

hs_status hs_sensor_create(double noise_std, uint64_t seed, hs_sensor** out) {
  return guarded([&] {
    HS_REQUIRE(out != nullptr, "out is null");
    *out = new hs_sensor{hotspot::Sensor(noise_std, seed)};
    return HS_OK;
  });
}

hs_status hs_sensor_measure(hs_sensor* sensor, const hs_field* field, double x, double y, double* out) {
  return guarded([&] {
    HS_REQUIRE(sensor != nullptr && field != nullptr && out != nullptr, "sensor, field and out must be non-null");
    *out = sensor->impl.measure(*field->impl, {x, y});
    return HS_OK;
  });
}

void hs_sensor_destroy(hs_sensor* sensor) { delete sensor; }

hs_status hs_gp_create(const hs_hyper* hyper, hs_gp** out) {
  return guarded([&] {
    HS_REQUIRE(hyper != nullptr && out != nullptr, "hyper and out must be non-null");
    *out = new hs_gp{hotspot::GPModel(from_c(*hyper))};
    return HS_OK;
  });
}

hs_status hs_gp_add_observation(hs_gp* gp, double x, double y, double value) {
  return guarded([&] {
    HS_REQUIRE(gp != nullptr, "gp is null");
    gp->impl.add_observation({x, y}, value);
    return HS_OK;
  });
}

hs_status hs_gp_size(const hs_gp* gp, size_t* out) {
  return guarded([&] {
    HS_REQUIRE(gp != nullptr && out != nullptr, "gp and out must be non-null");
    *out = gp->impl.size();
    return HS_OK;
  });
}

hs_status hs_gp_predict(const hs_gp* gp, const double* xy, size_t n, double* mean, double* std) {
  return guarded([&] {
    HS_REQUIRE(gp != nullptr && mean != nullptr, "gp and mean must be non-null");
    HS_REQUIRE(n == 0 || xy != nullptr, "xy is null");
    std::vector<hotspot::Point2> q(n);
    for (size_t i = 0; i < n; ++i) q[i] = {xy[2 * i], xy[2 * i + 1]};
    const hotspot::Prediction p = gp->impl.predict(q);
    for (size_t i = 0; i < n; ++i) {
      mean[i] = p.mean[i];
      if (std != nullptr) std[i] = p.std[i];
    }
    return HS_OK;
  });
}

hs_status hs_gp_nlml(const hs_gp* gp, double* out) {
  return guarded([&] {
    HS_REQUIRE(gp != nullptr && out != nullptr, "gp and out must be non-null");
    *out = gp->impl.nlml();
    return HS_OK;
  });
}

hs_status hs_gp_get_hyper(const hs_gp* gp, hs_hyper* out) {
  return guarded([&] {
    HS_REQUIRE(gp != nullptr && out != nullptr, "gp and out must be non-null");
    *out = to_c(gp->impl.hyperparameters());
    return HS_OK;
  });
}

hs_status hs_gp_optimize(hs_gp* gp, int restarts, hs_hyper* out) {
  return guarded([&] {
    HS_REQUIRE(gp != nullptr, "gp is null");
    HS_REQUIRE(restarts >= 1, "restarts must be >= 1");
    hotspot::OptimizeOptions options;
    options.restarts = restarts;
    const hotspot::OptimizeResult r =
        hotspot::optimize_hyperparameters(gp->impl, gp->impl.hyperparameters(), true, options);
    if (r.status == hotspot::OptimizeStatus::kFailed) return fail(HS_NUMERICAL_ERROR, "every optimizer start failed");
    gp->impl.set_hyperparameters(r.hyper);
    if (out != nullptr) *out = to_c(r.hyper);
    return HS_OK;
  });
}

void hs_gp_destroy(hs_gp* gp) { delete gp; }

hs_status hs_beta(int t, double* out) {
  return guarded([&] {
    HS_REQUIRE(out != nullptr, "out is null");
    *out = hotspot::beta(t, hotspot::PlannerConfig{});
    return HS_OK;
  });
}

hs_status hs_experiment_run(const char* config_path, int num_seeds, const char* out_dir, int dry_run,
                            char** report) {
  return guarded([&] {
    HS_REQUIRE(config_path != nullptr, "config_path is null");
    if (!std::filesystem::exists(config_path)) return fail(HS_IO_ERROR, std::string("config not found: ") + config_path);
    const hotspot::ExperimentConfig config = hotspot::load_experiment_config(config_path);
    hotspot::RunOptions options;
    if (num_seeds > 0) options.num_seeds = num_seeds;
    if (out_dir != nullptr) options.output_dir = std::string(out_dir);
    options.dry_run = dry_run != 0;
    const hotspot::ExperimentOutcome outcome = hotspot::run_experiment(config, options);
    if (report != nullptr) *report = duplicate(outcome.plan);
    return HS_OK;
  });
}

hs_status hs_experiment_validate(const char* config_path, char** diagnostics) {
  return guarded([&] {
    HS_REQUIRE(config_path != nullptr && diagnostics != nullptr, "config_path and diagnostics must be non-null");
    std::ifstream in(config_path, std::ios::binary);
    if (!in) return fail(HS_IO_ERROR, std::string("cannot read ") + config_path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::string joined;
    for (const std::string& d : hotspot::validate_config_text(text)) joined += d + "\n";
    *diagnostics = duplicate(joined);
    return joined.empty() ? HS_OK : fail(HS_CONFIG_ERROR, joined);
  });
}

hs_status hs_compare(const char* const* paths, size_t n, const char* csv_out, char** table) {
  return guarded([&] {
    HS_REQUIRE(paths != nullptr || n == 0, "paths is null");
    std::vector<std::string> list;
    for (size_t i = 0; i < n; ++i) {
      HS_REQUIRE(paths[i] != nullptr, "null path in list");
      list.emplace_back(paths[i]);
    }
    const hotspot::CompareOutcome c = hotspot::compare_summaries(list);
    if (csv_out != nullptr) {
      std::ofstream out(csv_out, std::ios::binary);
      if (!out) return fail(HS_IO_ERROR, std::string("cannot write ") + csv_out);
      out << c.csv;
    }
    if (table != nullptr) *table = duplicate(c.table);
    return HS_OK;
  });
}

}  // extern "C"
