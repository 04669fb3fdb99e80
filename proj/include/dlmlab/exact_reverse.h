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

// Exact reverse quantities of the forward chain on an enumerable support:
// one-token reverse kernels, their proposal-rate normalization, concrete
// scores and clean-token posteriors.

#ifndef DLMLAB_EXACT_REVERSE_H_
#define DLMLAB_EXACT_REVERSE_H_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dlmlab/distribution.h"
#include "dlmlab/schedule.h"
#include "dlmlab/support.h"
#include "dlmlab/types.h"

namespace dlmlab {

// Row h holds q(x_0^h = v | x_t) at index v (index 0 unused).
using PosteriorTable = std::vector<TokenVector>;

enum class NormalizerKind { kPerBetaOverK, kPerBeta };

struct ScoreEntry {
  int h = 0;
  Token y = 0;
  double score = 0.0;
  int delta_d = 0;
};

// Normalized one-token reverse scores at a fixed state and step.
struct ScoreTable {
  TokenSeq state;
  double sigma = 0.0;
  int t = 0;
  NormalizerKind normalizer = NormalizerKind::kPerBetaOverK;
  std::vector<ScoreEntry> entries;

  const ScoreEntry* Find(int h, Token y) const;
};

// Columns: h,y,score,delta_d.
void WriteScoreTableCsv(std::ostream& out, const ScoreTable& table);

// beta/K for uniform, beta for absorbing.
double ProposalRate(Mechanism mechanism, double beta, int vocab_size);
NormalizerKind NormalizerFor(Mechanism mechanism);

// Exact q^h_{t-1|t}(. | x_t) indexed by token (index 0 = mask). The sum
// over y^{-h} is grouped by the number d of positions where y^{-h} differs
// from x_t^{-h}, since the forward factor depends on d alone.
//
// Throws InvalidArgument if q_t(x_t) = 0 and CapacityError if the number
// of y^{-h} completions exceeds `limit`.
TokenVector ReverseTokenKernelExact(const ExplicitDistribution& dist,
                                    const NoiseSchedule& schedule, int t,
                                    const TokenSeq& x_t, int h,
                                    Mechanism mechanism,
                                    std::uint64_t limit = kDefaultEnumerationLimit);

// Kernel entry divided by the mechanism's proposal rate. Requires
// y != x_t^h; under absorbing x_t^h must be masked and y clean.
double NormalizedScore(const ExplicitDistribution& dist,
                       const NoiseSchedule& schedule, int t,
                       const TokenSeq& x_t, int h, Token y,
                       Mechanism mechanism);

// q_t(x^{h->y}) / q_t(x). Equals 1 for the identity edit.
double ConcreteScore(const ExplicitDistribution& dist,
                     const NoiseSchedule& schedule, int t, const TokenSeq& x,
                     int h, Token y, Mechanism mechanism);

PosteriorTable PosteriorExact(const ExplicitDistribution& dist,
                              const NoiseSchedule& schedule, int t,
                              const TokenSeq& x_t, Mechanism mechanism);

// Normalized scores of every admissible one-token edit of x_t (all
// (h, y != x_t^h) under uniform; masked h and clean y under absorbing),
// with delta_d filled from the support geometry.
ScoreTable ExactScoreTable(const ExplicitDistribution& dist,
                           const NoiseSchedule& schedule, int t,
                           const TokenSeq& x_t, Mechanism mechanism);

// Every state with q_t > 0 (all of [K]^H for uniform; consistent masked
// states for absorbing). Used to drive exhaustive checks.
std::vector<TokenSeq> EnumerateStates(const ExplicitDistribution& dist,
                                      Mechanism mechanism,
                                      std::uint64_t limit =
                                          kDefaultEnumerationLimit);

}  // namespace dlmlab

#endif  // DLMLAB_EXACT_REVERSE_H_
