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

#ifndef DLMLAB_CORRUPTION_H_
#define DLMLAB_CORRUPTION_H_

#include <cstdint>
#include <random>

#include "dlmlab/distribution.h"
#include "dlmlab/schedule.h"
#include "dlmlab/types.h"

namespace dlmlab {

struct ForwardKernelSpec {
  Mechanism mechanism = Mechanism::kUniform;
  double beta = 0.0;
};

// One-step forward probability q(to | from):
//   uniform:   (1-beta) 1{to=from} + beta/K
//   absorbing: (1-beta) 1{to=from} + beta 1{to=m}
// Under absorbing the mask is a legal `from` and is absorbing.
double ForwardTokenProb(const ForwardKernelSpec& spec, Token from, Token to,
                        int vocab_size);

// The t-step marginal q_{t|0} has the same form with beta replaced by the
// cumulative level sigma.
inline double LevelTokenProb(Mechanism mechanism, double sigma, Token clean,
                             Token noisy, int vocab_size) {
  return ForwardTokenProb({mechanism, sigma}, clean, noisy, vocab_size);
}

// Replaces each position independently with probability sigma (uniform: by
// a uniform draw from [1..K]; absorbing: by the mask).
TokenSeq CorruptToLevel(const TokenSeq& seq, double sigma, Mechanism mechanism,
                        int vocab_size, std::mt19937_64& rng);
TokenSeq CorruptToLevel(const TokenSeq& seq, double sigma, Mechanism mechanism,
                        int vocab_size, std::uint64_t seed);

// q_sigma(x) = sum_{x0 in D} p(x0) prod_i q_{sigma}(x^i | x0^i), evaluated
// in log space below sigma = 1e-3.
double MarginalAtLevel(const ExplicitDistribution& dist, double sigma,
                       const TokenSeq& x, Mechanism mechanism);
// log q_sigma(x); -infinity off the support of q_sigma.
double LogMarginalAtLevel(const ExplicitDistribution& dist, double sigma,
                          const TokenSeq& x, Mechanism mechanism);

// q_t(x) for t in [1..T].
double MarginalExact(const ExplicitDistribution& dist,
                     const NoiseSchedule& schedule, int t, const TokenSeq& x,
                     Mechanism mechanism);

// Leading small-noise monomial p(proj_D(x)) (sigma/K)^d(x,D) (uniform) or
// p(proj_D(x)) sigma^d(x,D) (absorbing; zero when the unmasked part of x
// disagrees with every support point).
double MarginalLeadingTerm(const ExplicitDistribution& dist, const TokenSeq& x,
                           double sigma, Mechanism mechanism);

// True iff the unmasked tokens of x agree with some support point.
bool ConsistentWithSupport(const ExplicitDistribution& dist, const TokenSeq& x);

}  // namespace dlmlab

#endif  // DLMLAB_CORRUPTION_H_
