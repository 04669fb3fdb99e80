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

// The oscillating clamped random-walk language. The first token is uniform
// on [1..K]; each successor steps down, stays, or steps up with
// token-dependent probabilities, and proposals that would leave [1..K]
// are clamped back onto the boundary token.

#ifndef DLMLAB_WALK_LANGUAGE_H_
#define DLMLAB_WALK_LANGUAGE_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include "dlmlab/distribution.h"
#include "dlmlab/types.h"
#include "json.hpp"

namespace dlmlab {

// Unnormalized weights:
//   up   = amp_up   * exp(scale * sin(freq_up   * (v-1) + phase_up))
//   stay = amp_stay * exp(scale * sin(freq_stay * (v-1) + phase_stay))
//   down = amp_down * exp(scale * cos(freq_down * (v-1) + phase_down))
struct WalkParams {
  double amp_up = 0.45;
  double amp_stay = 0.2;
  double amp_down = 0.35;
  double phase_up = 1.37;
  double phase_stay = 0.11;
  double phase_down = -0.29;
  double freq_up = 0.61;
  double freq_stay = 0.37;
  double freq_down = 0.53;
  double exponent_scale = 1.0;

  nlohmann::json ToJson() const;
  static WalkParams FromJson(const nlohmann::json& doc);
};

struct StepProbs {
  double down = 0.0;
  double stay = 0.0;
  double up = 0.0;
};

class WalkLanguage {
 public:
  // Throws InvalidArgument unless K >= 2 and H >= 2.
  WalkLanguage(int vocab_size, int length, WalkParams params = {});

  int vocab_size() const { return vocab_size_; }
  int length() const { return length_; }
  const WalkParams& params() const { return params_; }

  // Step probabilities out of `from` after clamping: at v=1 the down mass
  // merges into stay, at v=K the up mass merges into stay.
  StepProbs TransitionProbs(Token from) const;

  // P(to | from) from the clamped transition matrix.
  double Transition(Token from, Token to) const;

  // True iff `to` is reachable from `from` in one clamped step.
  bool Allowed(Token from, Token to) const;

  bool Contains(const TokenSeq& seq) const;

  // (1/K) * prod_h P(x_{h+1} | x_h); zero off the support.
  double Probability(const TokenSeq& seq) const;

  TokenSeq Sample(std::mt19937_64& rng) const;
  TokenSeq Sample(std::uint64_t seed) const;

  // Exact conditional of an interior token given both neighbors,
  // q(a) = P(a|left) P(right|a) / sum_b P(b|left) P(right|b).
  // Returns nullopt when no center connects the two neighbors.
  std::optional<TokenVector> CenterConditional(Token left, Token right) const;

  // |support| upper bound K * 3^(H-1) used for enumeration budgets.
  std::uint64_t EnumerationSize() const;

  // Lists the support with probabilities. Throws CapacityError when
  // EnumerationSize() exceeds `limit`.
  ExplicitDistribution Enumerate(std::uint64_t limit = 1'000'000) const;

  nlohmann::json ToJson() const;
  static WalkLanguage FromJson(const nlohmann::json& doc);

 private:
  void CheckToken(Token v) const;

  int vocab_size_;
  int length_;
  WalkParams params_;
  // transition_[(from-1)*K + (to-1)]
  std::vector<double> transition_;
};

// Corpus files hold one sequence per line as space-separated integers.
void WriteCorpus(std::ostream& out, const std::vector<TokenSeq>& corpus);
std::vector<TokenSeq> ReadCorpus(std::istream& in);

std::vector<TokenSeq> SampleCorpus(const WalkLanguage& lang, int count,
                                   std::uint64_t seed);

}  // namespace dlmlab

#endif  // DLMLAB_WALK_LANGUAGE_H_
