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

// Ancestral sampling plus the two-phase projection samplers (threshold and
// hard-max), and sequence-level evaluation against the support.

#ifndef DLMLAB_SAMPLERS_H_
#define DLMLAB_SAMPLERS_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "dlmlab/distribution.h"
#include "dlmlab/exact_reverse.h"
#include "dlmlab/learner.h"
#include "dlmlab/parameterization.h"
#include "dlmlab/schedule.h"
#include "dlmlab/types.h"
#include "dlmlab/walk_language.h"
#include "json.hpp"

namespace dlmlab {

enum class SamplerMode { kAncestral, kThreshold, kHardmax };

std::string_view SamplerModeName(SamplerMode mode);
SamplerMode ParseSamplerMode(std::string_view name);

struct SamplerConfig {
  SamplerMode mode = SamplerMode::kAncestral;
  double phase2_sigma = 0.1;
  double threshold = 0.05;
  // 0 means H * K.
  int max_phase2_steps = 0;

  void Validate() const;
  nlohmann::json ToJson() const;
  static SamplerConfig FromJson(const nlohmann::json& doc);
};

// Source of per-position reverse kernels and clean-token posteriors.
class ReverseModel {
 public:
  virtual ~ReverseModel() = default;
  virtual int vocab_size() const = 0;
  virtual int length() const = 0;
  virtual Mechanism mechanism() const = 0;
  virtual const NoiseSchedule& schedule() const = 0;
  virtual std::vector<TokenVector> Kernel(const TokenSeq& x_t, int t) const = 0;
  virtual PosteriorTable Posterior(const TokenSeq& x_t, int t) const = 0;
};

class ExactReverseModel : public ReverseModel {
 public:
  ExactReverseModel(const ExplicitDistribution& dist, NoiseSchedule schedule,
                    Mechanism mechanism);
  int vocab_size() const override { return dist_.vocab_size(); }
  int length() const override { return dist_.length(); }
  Mechanism mechanism() const override { return mechanism_; }
  const NoiseSchedule& schedule() const override { return schedule_; }
  std::vector<TokenVector> Kernel(const TokenSeq& x_t, int t) const override;
  PosteriorTable Posterior(const TokenSeq& x_t, int t) const override;

 private:
  ExplicitDistribution dist_;
  NoiseSchedule schedule_;
  Mechanism mechanism_;
};

// d3pm kernels under uniform, subs under absorbing. Holds a reference to
// the denoiser.
class LearnedReverseModel : public ReverseModel {
 public:
  LearnedReverseModel(const TabularDenoiser& model, NoiseSchedule schedule);
  int vocab_size() const override { return model_.vocab_size(); }
  int length() const override { return model_.length(); }
  Mechanism mechanism() const override { return model_.mechanism(); }
  const NoiseSchedule& schedule() const override { return schedule_; }
  std::vector<TokenVector> Kernel(const TokenSeq& x_t, int t) const override;
  PosteriorTable Posterior(const TokenSeq& x_t, int t) const override;

 private:
  const TabularDenoiser& model_;
  NoiseSchedule schedule_;
};

struct AppliedEdit {
  TokenSeq before;
  int h = 0;
  Token y = 0;
  double scaled_score = 0.0;
};

struct SampleResult {
  TokenSeq seq;
  // State at the phase boundary (equal to seq for ancestral runs before
  // the final fill).
  TokenSeq phase1;
  std::vector<AppliedEdit> edits;
  bool truncated = false;
  // Masks left at the end and filled by posterior argmax.
  int filled = 0;
};

// Phase-2 scaled score sigma_t * kernel / beta_t for every candidate edit:
// all (h, y != x^h) under uniform, masked h and clean y under absorbing.
// Rows are indexed by token; non-candidates are 0.
std::vector<TokenVector> ScaledScores(const ReverseModel& model,
                                      const TokenSeq& x, int t);

// Dispatches on config.mode. The phase-1 chain uses DeriveSeed(seed,
// "phase1") and phase 2 DeriveSeed(seed, "phase2"), so paired runs with
// different modes share their phase-1 draws.
SampleResult Sample(const ReverseModel& model, const SamplerConfig& config,
                    std::uint64_t seed);
SampleResult AncestralSample(const ReverseModel& model,
                             const SamplerConfig& config, std::uint64_t seed);
SampleResult ThresholdSample(const ReverseModel& model,
                             const SamplerConfig& config, std::uint64_t seed);
SampleResult HardmaxSample(const ReverseModel& model,
                           const SamplerConfig& config, std::uint64_t seed);

struct SampleEvaluation {
  std::size_t count = 0;
  double frac_in_support = 0.0;
  double mean_distance = 0.0;
  std::vector<int> distances;

  nlohmann::json ToJson() const;
};

SampleEvaluation EvaluateSamples(const std::vector<TokenSeq>& samples,
                                 const ExplicitDistribution& dist);
SampleEvaluation EvaluateSamples(const std::vector<TokenSeq>& samples,
                                 const WalkLanguage& lang);

struct Comparison {
  double win = 0.0;
  double draw = 0.0;
  double loss = 0.0;

  nlohmann::json ToJson() const;
};

// Paired by index; a wins when its distance is smaller.
Comparison CompareSamplers(const SampleEvaluation& a,
                           const SampleEvaluation& b);

}  // namespace dlmlab

#endif  // DLMLAB_SAMPLERS_H_
