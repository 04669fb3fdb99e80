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

// Reverse kernels built from a clean-token posterior, and the training
// losses that compare a posterior model against the forward chain.

#ifndef DLMLAB_PARAMETERIZATION_H_
#define DLMLAB_PARAMETERIZATION_H_

#include <functional>
#include <string_view>
#include <vector>

#include "dlmlab/distribution.h"
#include "dlmlab/exact_reverse.h"
#include "dlmlab/schedule.h"
#include "dlmlab/types.h"

namespace dlmlab {

enum class Parameterization { kBayes, kD3pm, kSubs };

std::string_view ParameterizationName(Parameterization p);
Parameterization ParseParameterization(std::string_view name);

using PosteriorFn =
    std::function<PosteriorTable(const TokenSeq& x_t, int t)>;
// Per-position reverse vectors (index 0 = mask) for a step t -> t-1.
using KernelFn =
    std::function<std::vector<TokenVector>(const TokenSeq& x_t, int t)>;

struct LossValue {
  double value = 0.0;
  bool infinite = false;
};

struct MaskedExample {
  TokenSeq x0;
  TokenSeq x_t;
  int t = 1;
};

// Throws InvalidArgument unless every row is a distribution over [1..K]
// (within 1e-10).
void CheckPosteriorTable(const PosteriorTable& posterior, int vocab_size);

// bayes: sum_v q(y | x_t^h, x_0^h = v) post(v)
// d3pm:  proportional to sum_v q_{t-1|0}(y | v) q(x_t^h | y) post(v)
// subs:  absorbing only; (s_{t-1}/s_t) on the mask plus
//        ((s_t - s_{t-1})/s_t) post on clean tokens.
// Unmasked absorbing positions copy their token under every choice.
std::vector<TokenVector> KernelFromPosterior(const PosteriorTable& posterior,
                                             const TokenSeq& x_t, int t,
                                             const NoiseSchedule& schedule,
                                             Mechanism mechanism,
                                             Parameterization param);

// (s_t - s_{t-1}) / s_t.
double MaskedCeWeight(const NoiseSchedule& schedule, int t);

// Mean over the batch of w_t * sum over masked h of -log post_h(x_0^h).
LossValue WeightedMaskedCe(const PosteriorFn& model,
                           const std::vector<MaskedExample>& batch,
                           const NoiseSchedule& schedule);

// Exact expectation of the weighted masked CE under absorbing corruption,
// summed over steps 1..max_step (all steps when max_step <= 0).
LossValue ExactMaskedCe(const PosteriorFn& model,
                        const ExplicitDistribution& dist,
                        const NoiseSchedule& schedule, int max_step = 0);

// ((1 - sigma)/sigma) * row; throws for sigma in {0, 1}.
TokenVector InducedScore(const TokenVector& posterior_row, double sigma);
// Rows for masked positions of x_t; zero vectors elsewhere.
std::vector<TokenVector> InducedScore(const PosteriorTable& posterior,
                                      const TokenSeq& x_t, double sigma);

// Denoising score-entropy loss of the induced score, exact by enumeration,
// with discrete forward rate (s_t - s_{t-1})/(1 - s_t). Only steps with
// s_t < 1 contribute; max_step <= 0 selects all of them.
LossValue ExactScoreEntropy(const PosteriorFn& model,
                            const ExplicitDistribution& dist,
                            const NoiseSchedule& schedule, int max_step = 0);

// Last step with sigma_t < 1.
int LastFiniteRateStep(const NoiseSchedule& schedule);

// E_{x_0, x_t} sum_h KL(q(. | x_t^h, x_0^h) || model_h(. | x_t)).
LossValue DenoisingKlTerm(const KernelFn& model,
                          const ExplicitDistribution& dist,
                          const NoiseSchedule& schedule, int t,
                          Mechanism mechanism);

PosteriorFn ExactPosteriorModel(const ExplicitDistribution& dist,
                                const NoiseSchedule& schedule,
                                Mechanism mechanism);
KernelFn ExactKernelModel(const ExplicitDistribution& dist,
                          const NoiseSchedule& schedule, Mechanism mechanism);

}  // namespace dlmlab

#endif  // DLMLAB_PARAMETERIZATION_H_
