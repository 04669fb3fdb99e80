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

// Count-based clean-token denoiser keyed on a position's corrupted
// neighborhood, trained from a stream of corrupted samples.

#ifndef DLMLAB_LEARNER_H_
#define DLMLAB_LEARNER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <vector>

#include "dlmlab/distribution.h"
#include "dlmlab/exact_reverse.h"
#include "dlmlab/schedule.h"
#include "dlmlab/types.h"
#include "dlmlab/walk_language.h"
#include "json.hpp"

namespace dlmlab {

struct LearnerConfig {
  // Checkpoints, in training samples; strictly increasing and positive.
  // Training runs to the last entry.
  std::vector<std::int64_t> checkpoint_grid;
  double lambda = 0.1;
  int noise_buckets = 4;

  nlohmann::json ToJson() const;
  static LearnerConfig FromJson(const nlohmann::json& doc);
  void Validate() const;
};

// Context: (left, right, own corrupted token, noise bucket). Neighbors
// outside the sequence read as a boundary marker. Predictions back off
// to (left, right, bucket), then (left, right), then uniform.
class TabularDenoiser {
 public:
  TabularDenoiser(int vocab_size, int length, Mechanism mechanism,
                  double lambda = 0.1, int noise_buckets = 4);

  int vocab_size() const { return vocab_size_; }
  int length() const { return length_; }
  Mechanism mechanism() const { return mechanism_; }
  double lambda() const { return lambda_; }
  int noise_buckets() const { return buckets_; }
  std::int64_t tokens_seen() const { return tokens_seen_; }

  int Bucket(double sigma) const;

  // Adds one corrupted example. Absorbing records masked positions only;
  // uniform records every position.
  void Observe(const TokenSeq& x0, const TokenSeq& x_t, double sigma);

  // Smoothed posterior over clean tokens (index 0 stays 0) for the
  // window (left, own, right). kMask as `own` under uniform means the
  // own token is unknown and starts at the first backoff level.
  // Use kBoundary for a missing neighbor.
  TokenVector WindowPosterior(Token left, Token own, Token right,
                              double sigma) const;

  TokenVector Posterior(const TokenSeq& x_t, int h, double sigma) const;
  // Full table; unmasked absorbing positions are point masses.
  PosteriorTable PosteriorTableFor(const TokenSeq& x_t, double sigma) const;

  // Raw count at the finest level, for tests and diagnostics.
  std::uint32_t Count(Token left, Token own, Token right, int bucket,
                      Token clean) const;

  void Save(const std::filesystem::path& path) const;
  static TabularDenoiser Load(const std::filesystem::path& path);

  Token boundary() const { return vocab_size_ + 1; }

 private:
  std::size_t Key(Token left, Token right) const;
  void Smooth(const std::uint32_t* counts, std::uint64_t total,
              TokenVector& out) const;

  int vocab_size_;
  int length_;
  Mechanism mechanism_;
  double lambda_;
  int buckets_;
  std::int64_t tokens_seen_ = 0;
  // Count blocks of K entries, with parallel totals.
  std::vector<std::uint32_t> fine_;    // (left, right, own, bucket)
  std::vector<std::uint64_t> fine_total_;
  std::vector<std::uint32_t> mid_;     // (left, right, bucket)
  std::vector<std::uint64_t> mid_total_;
  std::vector<std::uint32_t> coarse_;  // (left, right)
  std::vector<std::uint64_t> coarse_total_;
};

struct Checkpoint {
  std::int64_t samples = 0;
  std::int64_t tokens_seen = 0;
  TabularDenoiser model;
};

using SequenceSource = std::function<TokenSeq(std::mt19937_64&)>;

// For each sample: draw x_0, draw t uniformly from [1..T], corrupt to
// sigma_t and record. Snapshots at each grid point. `on_checkpoint`, when
// set, receives each snapshot and the returned list is left empty.
std::vector<Checkpoint> TrainStream(
    const SequenceSource& source, int vocab_size, int length,
    Mechanism mechanism, const NoiseSchedule& schedule,
    const LearnerConfig& config, std::uint64_t seed,
    const std::function<void(const Checkpoint&)>& on_checkpoint = {});

SequenceSource SourceFor(const WalkLanguage& lang);
SequenceSource SourceFor(const ExplicitDistribution& dist);

// Writes ckpt_<samples>.bin per checkpoint and manifest.json with
// {seed, config, tokens_seen}.
void SaveCheckpoints(const std::filesystem::path& dir,
                     const std::vector<Checkpoint>& checkpoints,
                     const LearnerConfig& config, std::uint64_t seed);
std::vector<Checkpoint> LoadCheckpoints(const std::filesystem::path& dir);

}  // namespace dlmlab

#endif  // DLMLAB_LEARNER_H_
