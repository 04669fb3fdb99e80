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

#include "dlmlab/samplers.h"

#include <algorithm>
#include <random>
#include <string>

#include "dlmlab/seeding.h"
#include "dlmlab/support.h"

namespace dlmlab {
namespace {

Token Draw(const TokenVector& row, std::mt19937_64& rng) {
  double total = 0.0;
  for (double v : row) total += v;
  const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  double acc = 0.0;
  Token last = kMask;
  for (std::size_t v = 0; v < row.size(); ++v) {
    if (row[v] <= 0.0) continue;
    acc += row[v];
    last = static_cast<Token>(v);
    if (u < acc) return last;
  }
  return last;
}

Token ArgmaxClean(const TokenVector& row) {
  Token best = 1;
  for (std::size_t v = 2; v < row.size(); ++v) {
    if (row[v] > row[best]) best = static_cast<Token>(v);
  }
  return best;
}

int PhaseBoundary(const ReverseModel& model, const SamplerConfig& config) {
  if (config.mode == SamplerMode::kAncestral) return 0;
  return std::max(1, TimeIndexForSigma(model.schedule(), config.phase2_sigma));
}

// Runs the reverse chain from T down to stop and returns x_stop.
TokenSeq RunPhaseOne(const ReverseModel& model, int stop, std::uint64_t seed) {
  std::mt19937_64 rng(DeriveSeed(seed, "phase1"));
  const int k = model.vocab_size();
  TokenSeq x(model.length(), kMask);
  if (model.mechanism() == Mechanism::kUniform) {
    std::uniform_int_distribution<int> pick(1, k);
    for (Token& v : x) v = pick(rng);
  }
  for (int t = model.schedule().steps(); t > stop; --t) {
    const std::vector<TokenVector> kernel = model.Kernel(x, t);
    TokenSeq next(x.size());
    for (std::size_t h = 0; h < x.size(); ++h) next[h] = Draw(kernel[h], rng);
    x = std::move(next);
  }
  return x;
}

int FillMasks(const ReverseModel& model, TokenSeq& x, int t) {
  if (!HasMask(x)) return 0;
  const PosteriorTable post = model.Posterior(x, std::max(t, 1));
  int filled = 0;
  for (std::size_t h = 0; h < x.size(); ++h) {
    if (x[h] != kMask) continue;
    x[h] = ArgmaxClean(post[h]);
    ++filled;
  }
  return filled;
}

SampleResult TwoPhase(const ReverseModel& model, const SamplerConfig& config,
                      std::uint64_t seed) {
  config.Validate();
  const int t = PhaseBoundary(model, config);
  SampleResult result;
  TokenSeq x = RunPhaseOne(model, t, seed);
  result.phase1 = x;
  if (config.mode != SamplerMode::kAncestral) {
    const int max_steps = config.max_phase2_steps > 0
                              ? config.max_phase2_steps
                              : model.length() * model.vocab_size();
    std::mt19937_64 rng(DeriveSeed(seed, "phase2"));
    while (true) {
      const std::vector<TokenVector> scores = ScaledScores(model, x, t);
      std::vector<std::pair<int, Token>> candidates;
      std::size_t best = 0;
      for (std::size_t h = 0; h < scores.size(); ++h) {
        for (std::size_t y = 0; y < scores[h].size(); ++y) {
          if (!(scores[h][y] > config.threshold)) continue;
          candidates.emplace_back(static_cast<int>(h), static_cast<Token>(y));
          const auto& [bh, by] = candidates[best];
          if (scores[h][y] > scores[bh][by]) best = candidates.size() - 1;
        }
      }
      if (candidates.empty()) break;
      if (static_cast<int>(result.edits.size()) >= max_steps) {
        result.truncated = true;
        break;
      }
      std::size_t pick = best;
      if (config.mode == SamplerMode::kThreshold) {
        pick = std::uniform_int_distribution<std::size_t>(
            0, candidates.size() - 1)(rng);
      }
      const auto [h, y] = candidates[pick];
      result.edits.push_back({x, h, y, scores[h][y]});
      x[h] = y;
    }
  }
  result.filled = FillMasks(model, x, t);
  result.seq = std::move(x);
  return result;
}

void RequireMode(const SamplerConfig& config, SamplerMode mode) {
  if (config.mode != mode) {
    throw InvalidArgument("sampler mode is " +
                          std::string(SamplerModeName(config.mode)) +
                          ", expected " + std::string(SamplerModeName(mode)));
  }
}

SampleEvaluation Summarize(std::vector<int> distances) {
  if (distances.empty()) throw InvalidArgument("no samples to evaluate");
  SampleEvaluation e;
  e.count = distances.size();
  double in = 0.0;
  double sum = 0.0;
  for (int d : distances) {
    in += d == 0;
    sum += d;
  }
  e.frac_in_support = in / e.count;
  e.mean_distance = sum / e.count;
  e.distances = std::move(distances);
  return e;
}

}  // namespace

std::string_view SamplerModeName(SamplerMode mode) {
  switch (mode) {
    case SamplerMode::kAncestral:
      return "ancestral";
    case SamplerMode::kThreshold:
      return "threshold";
    case SamplerMode::kHardmax:
      return "hardmax";
  }
  return "?";
}

SamplerMode ParseSamplerMode(std::string_view name) {
  if (name == "ancestral") return SamplerMode::kAncestral;
  if (name == "threshold") return SamplerMode::kThreshold;
  if (name == "hardmax") return SamplerMode::kHardmax;
  throw InvalidArgument("unknown sampler mode '" + std::string(name) + "'");
}

void SamplerConfig::Validate() const {
  if (!(threshold > 0.0)) throw InvalidArgument("sampler.threshold must be > 0");
  if (!(phase2_sigma > 0.0 && phase2_sigma < 1.0)) {
    throw InvalidArgument("sampler.phase2_sigma must lie in (0, 1)");
  }
  if (max_phase2_steps < 0) {
    throw InvalidArgument("sampler.max_phase2_steps must be >= 0");
  }
}

nlohmann::json SamplerConfig::ToJson() const {
  return {{"mode", SamplerModeName(mode)},
          {"phase2_sigma", phase2_sigma},
          {"threshold", threshold},
          {"max_phase2_steps", max_phase2_steps}};
}

SamplerConfig SamplerConfig::FromJson(const nlohmann::json& doc) {
  SamplerConfig c;
  if (doc.contains("mode")) c.mode = ParseSamplerMode(doc["mode"].get<std::string>());
  c.phase2_sigma = doc.value("phase2_sigma", c.phase2_sigma);
  c.threshold = doc.value("threshold", c.threshold);
  c.max_phase2_steps = doc.value("max_phase2_steps", c.max_phase2_steps);
  c.Validate();
  return c;
}

ExactReverseModel::ExactReverseModel(const ExplicitDistribution& dist,
                                     NoiseSchedule schedule,
                                     Mechanism mechanism)
    : dist_(dist), schedule_(std::move(schedule)), mechanism_(mechanism) {}

std::vector<TokenVector> ExactReverseModel::Kernel(const TokenSeq& x_t,
                                                   int t) const {
  return KernelFromPosterior(Posterior(x_t, t), x_t, t, schedule_, mechanism_,
                             Parameterization::kBayes);
}

PosteriorTable ExactReverseModel::Posterior(const TokenSeq& x_t, int t) const {
  return PosteriorExact(dist_, schedule_, t, x_t, mechanism_);
}

LearnedReverseModel::LearnedReverseModel(const TabularDenoiser& model,
                                         NoiseSchedule schedule)
    : model_(model), schedule_(std::move(schedule)) {}

std::vector<TokenVector> LearnedReverseModel::Kernel(const TokenSeq& x_t,
                                                     int t) const {
  const Parameterization p = model_.mechanism() == Mechanism::kUniform
                                 ? Parameterization::kD3pm
                                 : Parameterization::kSubs;
  return KernelFromPosterior(Posterior(x_t, t), x_t, t, schedule_,
                             model_.mechanism(), p);
}

PosteriorTable LearnedReverseModel::Posterior(const TokenSeq& x_t,
                                              int t) const {
  return model_.PosteriorTableFor(x_t, schedule_.sigma(t));
}

std::vector<TokenVector> ScaledScores(const ReverseModel& model,
                                      const TokenSeq& x, int t) {
  const std::vector<TokenVector> kernel = model.Kernel(x, t);
  const double factor = model.schedule().sigma(t) / model.schedule().beta(t);
  const bool absorbing = model.mechanism() == Mechanism::kAbsorbing;
  std::vector<TokenVector> out(x.size(), TokenVector(kernel[0].size(), 0.0));
  for (std::size_t h = 0; h < x.size(); ++h) {
    if (absorbing && x[h] != kMask) continue;
    for (std::size_t y = 1; y < kernel[h].size(); ++y) {
      if (static_cast<Token>(y) == x[h]) continue;
      out[h][y] = factor * kernel[h][y];
    }
  }
  return out;
}

SampleResult Sample(const ReverseModel& model, const SamplerConfig& config,
                    std::uint64_t seed) {
  return TwoPhase(model, config, seed);
}

SampleResult AncestralSample(const ReverseModel& model,
                             const SamplerConfig& config, std::uint64_t seed) {
  RequireMode(config, SamplerMode::kAncestral);
  return TwoPhase(model, config, seed);
}

SampleResult ThresholdSample(const ReverseModel& model,
                             const SamplerConfig& config, std::uint64_t seed) {
  RequireMode(config, SamplerMode::kThreshold);
  return TwoPhase(model, config, seed);
}

SampleResult HardmaxSample(const ReverseModel& model,
                           const SamplerConfig& config, std::uint64_t seed) {
  RequireMode(config, SamplerMode::kHardmax);
  return TwoPhase(model, config, seed);
}

nlohmann::json SampleEvaluation::ToJson() const {
  return {{"count", count},
          {"frac_in_support", frac_in_support},
          {"mean_distance", mean_distance}};
}

SampleEvaluation EvaluateSamples(const std::vector<TokenSeq>& samples,
                                 const ExplicitDistribution& dist) {
  std::vector<int> d;
  d.reserve(samples.size());
  for (const TokenSeq& s : samples) d.push_back(DistanceToSupport(s, dist));
  return Summarize(std::move(d));
}

SampleEvaluation EvaluateSamples(const std::vector<TokenSeq>& samples,
                                 const WalkLanguage& lang) {
  std::vector<int> d;
  d.reserve(samples.size());
  for (const TokenSeq& s : samples) d.push_back(DistanceToSupport(s, lang));
  return Summarize(std::move(d));
}

nlohmann::json Comparison::ToJson() const {
  return {{"win", win}, {"draw", draw}, {"loss", loss}};
}

Comparison CompareSamplers(const SampleEvaluation& a,
                           const SampleEvaluation& b) {
  if (a.distances.size() != b.distances.size() || a.distances.empty()) {
    throw InvalidArgument("paired comparison needs equal, nonempty lists");
  }
  Comparison c;
  for (std::size_t i = 0; i < a.distances.size(); ++i) {
    if (a.distances[i] < b.distances[i]) {
      c.win += 1;
    } else if (a.distances[i] > b.distances[i]) {
      c.loss += 1;
    } else {
      c.draw += 1;
    }
  }
  const double n = static_cast<double>(a.distances.size());
  c.win /= n;
  c.draw /= n;
  c.loss /= n;
  return c;
}

}  // namespace dlmlab
