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

// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hotspot/hotspot.h"

namespace {

int report_failure(hs_status status) {
  std::fprintf(stderr, "error (%s): %s\n", hs_status_name(status), hs_last_error());
  return status == HS_CONFIG_ERROR || status == HS_INVALID_ARGUMENT ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budgeted hotspot search with GP-UCB tree search planners"};
  app.set_version_flag("--version", std::string("hotspot-ipp ") + hs_version());
  app.require_subcommand(1);

  std::string config_path;
  int seeds = 0;
  std::string out_dir;
  bool dry_run = false;
  CLI::App* run = app.add_subcommand("run", "Run every mission an experiment config describes");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--seeds", seeds, "Use N seeds starting at the config's first seed")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "Output directory (overrides the config)");
  run->add_flag("--dry-run", dry_run, "Print the resolved plan and exit");

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "Check a config against the schema");
  validate->add_option("config", validate_path, "Experiment config (JSON)")->required();

  std::vector<std::string> summaries;
  std::string compare_out;
  CLI::App* compare = app.add_subcommand("compare", "Side-by-side view of summary.csv files");
  compare->add_option("summaries", summaries, "Two or more summary.csv files")->required();
  compare->add_option("--out", compare_out, "Also write the merged CSV here");

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    char* plan = nullptr;
    const hs_status s = hs_experiment_run(config_path.c_str(), seeds, out_dir.empty() ? nullptr : out_dir.c_str(),
                                          dry_run ? 1 : 0, &plan);
    if (s != HS_OK) return report_failure(s);
    std::fputs(plan, stdout);
    if (dry_run) std::puts("dry run: nothing executed");
    hs_string_free(plan);
    return 0;
  }
  if (*validate) {
    char* diagnostics = nullptr;
    const hs_status s = hs_experiment_validate(validate_path.c_str(), &diagnostics);
    if (diagnostics != nullptr) {
      std::fputs(diagnostics, stderr);
      hs_string_free(diagnostics);
    }
    if (s != HS_OK) {
      std::fprintf(stderr, "%s: invalid\n", validate_path.c_str());
      return 2;
    }
    std::printf("%s: ok\n", validate_path.c_str());
    return 0;
  }
  if (*compare) {
    std::vector<const char*> paths;
    for (const std::string& p : summaries) paths.push_back(p.c_str());
    char* table = nullptr;
    const hs_status s =
        hs_compare(paths.data(), paths.size(), compare_out.empty() ? nullptr : compare_out.c_str(), &table);
    if (s != HS_OK) return report_failure(s);
    std::fputs(table, stdout);
    hs_string_free(table);
    return 0;
  }
  return 0;
}
