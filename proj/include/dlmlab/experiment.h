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

// Experiment configs (TOML or JSON), orchestration of the library's
// pipelines into report directories, and report aggregation.

#ifndef DLMLAB_EXPERIMENT_H_
#define DLMLAB_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dlmlab/learner.h"
#include "dlmlab/probes.h"
#include "dlmlab/samplers.h"
#include "dlmlab/schedule.h"
#include "dlmlab/types.h"
#include "json.hpp"

namespace dlmlab {

enum class ExperimentKind {
  kRateSeparation,
  kMarginalExpansion,
  kParameterization,
  kThreshold,
  kScaleVsTv,
  kPrediction1,
  kPrediction2,
  kProbeAgreement,
};

std::string_view ExperimentKindName(ExperimentKind kind);
ExperimentKind ParseExperimentKind(std::string_view name);

// Raised for configs that fail to parse or validate; the message names the
// offending field.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Reads a .toml or .json file into JSON.
nlohmann::json LoadConfigDocument(const std::filesystem::path& path);

struct ExperimentConfig {
  std::string name;
  ExperimentKind kind = ExperimentKind::kRateSeparation;
  std::vector<std::uint64_t> seeds;
  std::vector<Mechanism> mechanisms;
  std::filesystem::path output_dir;
  // Instances as given; explicit distributions for the theory kinds and
  // exactly one walk language for the training kinds.
  std::vector<nlohmann::json> instances;
  ScheduleKind schedule_kind = ScheduleKind::kCosine;
  int steps = 100;
  LearnerConfig learner;
  SamplerConfig sampler;
  int sampler_samples = 2000;
  DirectProbeConfig direct;
  BankParams bank;
  int corpus_size = 100000;
  int n_neg = 128;
  double q = 0.9;
  // Kind-specific section (rate, expansion, threshold, ...), as given.
  nlohmann::json params = nlohmann::json::object();
  // The whole document after defaults, recorded in the manifest.
  nlohmann::json resolved;

  // Validates everything a run will touch. Throws ConfigError.
  static ExperimentConfig FromJson(const nlohmann::json& doc);
  static ExperimentConfig FromFile(const std::filesystem::path& path);

  NoiseSchedule Schedule() const;
};

struct Check {
  std::string name;
  bool pass = false;
  nlohmann::json detail;
};

struct ExperimentResult {
  std::string name;
  ExperimentKind kind = ExperimentKind::kRateSeparation;
  std::vector<Check> checks;
  // Output files relative to the run directory.
  std::vector<std::string> files;
  std::vector<std::string> errors;

  bool Pass() const;
};

// Runs the pipeline into `out_dir` (created if needed) and writes
// manifest.json last. Exceptions inside a pipeline are recorded as errors.
ExperimentResult RunExperiment(const ExperimentConfig& config,
                               const std::filesystem::path& out_dir);

// Loads, validates and runs a config file; prints diagnostics to `log`.
// Returns 0 when every check passed, 1 on failed checks or pipeline
// errors, 2 on an invalid config (in which case nothing is written).
int RunExperimentFile(const std::filesystem::path& config_path,
                      const std::filesystem::path& out_override,
                      std::ostream& log);

// Consolidates a run directory: {name, kind, checks, failures, files}.
// Throws InvalidArgument when there is no manifest.
nlohmann::json ReportDirectory(const std::filesystem::path& dir);
std::string ReportText(const nlohmann::json& report);

// FNV-1a over sorted relative paths and file contents.
std::uint64_t HashDirectory(const std::filesystem::path& dir);

}  // namespace dlmlab

#endif  // DLMLAB_EXPERIMENT_H_
