// Copyright 2026 The dlmlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs the bundled configs and prints one line per acceptance criterion.
// Usage: acceptance [config_dir [scratch_dir]]

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dlmlab/experiment.h"

namespace fs = std::filesystem;

namespace {

struct Criterion {
  int id;
  const char* config;
};

constexpr Criterion kCriteria[] = {
    {1, "rate_separation_uniform"}, {2, "rate_separation_absorbing"},
    {3, "marginal_expansion"},      {4, "threshold_recovery"},
    {5, "scale_vs_tv"},             {6, "parameterization"},
    {7, "prediction1_synthetic"},   {8, "prediction2_samplers"},
    {9, "probe_agreement"},
};

}  // namespace

int main(int argc, char** argv) {
  const fs::path configs = argc > 1 ? fs::path(argv[1]) : fs::path(DLMLAB_CONFIG_DIR);
  const fs::path scratch =
      argc > 2 ? fs::path(argv[2]) : fs::path(DLMLAB_ACCEPTANCE_OUT);
  fs::remove_all(scratch);
  bool all = true;
  std::vector<std::string> drift;

  for (const Criterion& c : kCriteria) {
    const fs::path cfg = configs / (std::string(c.config) + ".toml");
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream log;
    const int code = dlmlab::RunExperimentFile(cfg, scratch / "a" / c.config, log);
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start).count();
    const bool pass = code == 0;
    all = all && pass;
    std::printf("Criterion %d: %s (%s, %.1fs)\n", c.id, pass ? "PASS" : "FAIL",
                c.config, secs);
    if (!pass) std::cout << log.str();

    std::ostringstream again;
    dlmlab::RunExperimentFile(cfg, scratch / "b" / c.config, again);
    if (!fs::exists(scratch / "a" / c.config) ||
        dlmlab::HashDirectory(scratch / "a" / c.config) !=
            dlmlab::HashDirectory(scratch / "b" / c.config)) {
      drift.push_back(c.config);
    }
  }

  std::printf("Criterion 10: %s (%zu configs rerun", drift.empty() ? "PASS" : "FAIL",
              std::size(kCriteria));
  for (const std::string& d : drift) std::printf(", differs: %s", d.c_str());
  std::printf(")\n");
  all = all && drift.empty();
  return all ? 0 : 1;
}
