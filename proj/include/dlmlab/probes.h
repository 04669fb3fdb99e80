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

// Direct (oracle) and indirect (context-bank) probes of whether a denoiser
// ranks valid centers above invalid ones and orders valid centers by
// frequency, plus transition-time extraction from probe curves.

#ifndef DLMLAB_PROBES_H_
#define DLMLAB_PROBES_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dlmlab/learner.h"
#include "dlmlab/types.h"
#include "dlmlab/walk_language.h"
#include "json.hpp"

namespace dlmlab {

// Scores of clean tokens (index 0 unused) for position h of x_t.
using SequenceScorer = std::function<TokenVector(const TokenSeq& x_t, int h)>;
// Scores of center tokens given the two neighbors of a 3-token window.
using WindowScorer = std::function<TokenVector(Token left, Token right)>;

SequenceScorer ModelSequenceScorer(const TabularDenoiser& model, double sigma);
// Reads only the neighbors of h; zero scores when none connects them.
SequenceScorer OracleSequenceScorer(const WalkLanguage& lang);
// Absorbing: the center is masked. Uniform: the mean posterior over all K
// possible corrupted centers.
WindowScorer ModelWindowScorer(const TabularDenoiser& model, double sigma);
WindowScorer OracleWindowScorer(const WalkLanguage& lang);

// psi(a, b): 1 if a > b, 1/2 if equal, 0 otherwise.
double TieAware(double a, double b);

struct DirectProbeConfig {
  double sigma = 0.0;  // 0 means 1/H
  int n_samples = 1000;
  int uniform_corruptions = 10;

  nlohmann::json ToJson() const;
  static DirectProbeConfig FromJson(const nlohmann::json& doc);
};

struct DirectProbeResult {
  double support = 0.0;
  double pairwise = 0.0;
  double top1 = 0.0;

  nlohmann::json ToJson() const;
};

// Validation strings are drawn from DeriveSeed(seed, "validation"); each
// gets one interior position corrupted (masked under absorbing, replaced
// uniformly `uniform_corruptions` times under uniform, averaging the
// per-corruption values). Valid replacements a satisfy the walk rule with
// both neighbors.
DirectProbeResult DirectProbes(const SequenceScorer& scorer,
                               const WalkLanguage& lang, Mechanism mechanism,
                               const DirectProbeConfig& config,
                               std::uint64_t seed);

struct BankParams {
  std::uint64_t min_count = 8;
  std::size_t max_contexts = 8192;
  std::size_t candidate_cap = 32;

  nlohmann::json ToJson() const;
};

struct BankContext {
  Token left = 0;
  Token right = 0;
  std::uint64_t total = 0;
  // Center counts indexed by token.
  std::vector<std::uint64_t> counts;
  // At most candidate_cap tokens, by count descending then id.
  std::vector<Token> candidates;
};

struct ContextBank {
  int vocab_size = 0;
  BankParams params;
  // Sorted by total descending, then (left, right).
  std::vector<BankContext> contexts;
  // g(a): center counts summed over retained contexts.
  std::vector<std::uint64_t> global;
  bool empty = true;

  nlohmann::json ToJson() const;
  static ContextBank FromJson(const nlohmann::json& doc);
};

// Scans every (h-1, h, h+1) triple of the corpus in order.
ContextBank BuildContextBank(const std::vector<TokenSeq>& corpus,
                             int vocab_size, const BankParams& params = {});

enum class NegativeStrategy { kFreqMatched, kUniform, kFrequent };

std::string_view NegativeStrategyName(NegativeStrategy s);
NegativeStrategy ParseNegativeStrategy(std::string_view name);

// Negatives for one context, drawn from tokens outside `candidates`:
// freq_matched takes, round-robin over candidates, the nearest unused token
// in log(1 + g) (ties to the smaller id); uniform samples without
// replacement; frequent takes the highest g. Returned sorted by id.
std::vector<Token> SelectNegatives(const std::vector<Token>& candidates,
                                   const std::vector<std::uint64_t>& global,
                                   NegativeStrategy strategy, int n_neg,
                                   std::mt19937_64& rng);

struct IndirectSupportResult {
  double accuracy = 0.0;
  std::size_t contexts_used = 0;
  // Contexts with fewer than n_neg eligible negatives.
  std::size_t short_contexts = 0;

  nlohmann::json ToJson() const;
};

// Mean over contexts of the mean tie-aware candidate-over-negative
// indicator. Negatives use DeriveSeed(seed, "probe-negatives", context).
IndirectSupportResult IndirectSupportProbe(const WindowScorer& scorer,
                                           const ContextBank& bank,
                                           NegativeStrategy strategy,
                                           int n_neg, std::uint64_t seed);

struct FrequencyProbeResult {
  double pairwise = 0.0;
  double top1 = 0.0;
  std::size_t pairwise_contexts = 0;
  std::size_t top1_contexts = 0;

  nlohmann::json ToJson() const;
};

// Pairs (a, b) of candidates with n_c(a) > n_c(b); top-1 against the
// empirical mode (count ties to the smaller id).
FrequencyProbeResult IndirectFrequencyProbes(const WindowScorer& scorer,
                                             const ContextBank& bank);

struct SyntheticOracleResult {
  double support_direct = 0.0;
  double pairwise_direct = 0.0;
  std::size_t contexts_used = 0;

  nlohmann::json ToJson() const;
};

// The indirect formulas with candidates {a : q_c(a) > 0}, ranking target
// q_c, and frequency-matched negatives outside that set.
SyntheticOracleResult SyntheticOracleProbes(const WindowScorer& scorer,
                                            const WalkLanguage& lang,
                                            const ContextBank& bank,
                                            int n_neg, std::uint64_t seed);

struct ProbeCurve {
  std::string metric_name;
  std::vector<std::int64_t> checkpoints;
  std::vector<double> values;
};

// min{t : M_t >= M_0 + q (max M - M_0)}; the first checkpoint when the
// curve never rises. Throws InvalidArgument for an empty curve.
std::int64_t TransitionTime(const ProbeCurve& curve, double q = 0.9);

// Columns: tokens_seen, then one per curve. Curves must share checkpoints.
void WriteProbeCurvesCsv(std::ostream& out,
                         const std::vector<ProbeCurve>& curves);

}  // namespace dlmlab

#endif  // DLMLAB_PROBES_H_
