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

/* C interface to the hotspot library. All objects are opaque handles; every
 * call returns an hs_status and hs_last_error() describes the most recent
 * failure on the calling thread. Strings returned by the library are freed
 * with hs_string_free. */

#ifndef HOTSPOT_HOTSPOT_H
#define HOTSPOT_HOTSPOT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(HOTSPOT_BUILDING_LIBRARY)
#define HOTSPOT_API __declspec(dllexport)
#else
#define HOTSPOT_API __declspec(dllimport)
#endif
#else
#define HOTSPOT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hs_status {
  HS_OK = 0,
  HS_INVALID_ARGUMENT = 1,
  HS_OUT_OF_BOUNDS = 2,
  HS_PARSE_ERROR = 3,
  HS_STRUCTURE_ERROR = 4,
  HS_NUMERICAL_ERROR = 5,
  HS_PLANNER_STUCK = 6,
  HS_CONFIG_ERROR = 7,
  HS_IO_ERROR = 8,
  HS_INTERNAL_ERROR = 9
} hs_status;

typedef struct hs_field hs_field;
typedef struct hs_sensor hs_sensor;
typedef struct hs_gp hs_gp;

typedef struct hs_hyper {
  double signal_std;
  double length_scale_1;
  double length_scale_2;
  double noise_var;
} hs_hyper;

typedef struct hs_field_stats {
  double max_value;
  double max_x;
  double max_y;
  double min_value;
  double range;
} hs_field_stats;

HOTSPOT_API const char* hs_version(void);
HOTSPOT_API const char* hs_last_error(void);
HOTSPOT_API const char* hs_status_name(hs_status status);
HOTSPOT_API void hs_string_free(char* text);

/* Fields */
HOTSPOT_API hs_status hs_field_four_maxima(hs_field** out);
HOTSPOT_API hs_status hs_field_load_csv(const char* path, hs_field** out);
/* Noise-free value; HS_OUT_OF_BOUNDS outside the region. */
HOTSPOT_API hs_status hs_field_value(const hs_field* field, double x, double y, double* out);
/* region = {x_min, x_max, y_min, y_max} */
HOTSPOT_API hs_status hs_field_region(const hs_field* field, double region[4]);
HOTSPOT_API hs_status hs_field_stats_compute(const hs_field* field, int grid_resolution, hs_field_stats* out);
HOTSPOT_API void hs_field_destroy(hs_field* field);

/* Sensors */
HOTSPOT_API hs_status hs_sensor_create(double noise_std, uint64_t seed, hs_sensor** out);
HOTSPOT_API hs_status hs_sensor_measure(hs_sensor* sensor, const hs_field* field, double x, double y, double* out);
HOTSPOT_API void hs_sensor_destroy(hs_sensor* sensor);

/* Gaussian process */
HOTSPOT_API hs_status hs_gp_create(const hs_hyper* hyper, hs_gp** out);
HOTSPOT_API hs_status hs_gp_add_observation(hs_gp* gp, double x, double y, double value);
HOTSPOT_API hs_status hs_gp_size(const hs_gp* gp, size_t* out);
/* xy holds n interleaved (x, y) pairs; mean and std receive n values each
 * (std may be NULL). */
HOTSPOT_API hs_status hs_gp_predict(const hs_gp* gp, const double* xy, size_t n, double* mean, double* std);
HOTSPOT_API hs_status hs_gp_nlml(const hs_gp* gp, double* out);
HOTSPOT_API hs_status hs_gp_get_hyper(const hs_gp* gp, hs_hyper* out);
/* Fits signal_std and length scales (noise held fixed) and installs them. */
HOTSPOT_API hs_status hs_gp_optimize(hs_gp* gp, int restarts, hs_hyper* out);
HOTSPOT_API void hs_gp_destroy(hs_gp* gp);

/* Planner schedule: beta_t with the default planner constants. */
HOTSPOT_API hs_status hs_beta(int t, double* out);

/* Experiments. num_seeds <= 0 keeps the config's seeds; out_dir may be NULL.
 * On success *report receives the resolved plan text (free with
 * hs_string_free). */
HOTSPOT_API hs_status hs_experiment_run(const char* config_path, int num_seeds, const char* out_dir, int dry_run,
                                        char** report);
/* Validates a config file; *diagnostics receives one problem per line
 * (empty when valid). */
HOTSPOT_API hs_status hs_experiment_validate(const char* config_path, char** diagnostics);
/* Compares n summary.csv files. Writes the merged CSV to csv_out when it is
 * not NULL and returns the aligned text table in *table. */
HOTSPOT_API hs_status hs_compare(const char* const* paths, size_t n, const char* csv_out, char** table);

#ifdef __cplusplus
}
#endif

#endif /* HOTSPOT_HOTSPOT_H */
