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

#include "dlmlab/corruption.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dlmlab/support.h"

namespace dlmlab {
namespace {

constexpr double kLogSpaceBelow = 1e-3;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void CheckState(const ExplicitDistribution& dist, const TokenSeq& x,
                Mechanism mechanism) {
  if (static_cast<int>(x.size()) != dist.length()) {
    throw InvalidArgument("state length differs from H");
  }
  CheckTokens(x, dist.vocab_size(), mechanism == Mechanism::kAbsorbing);
}

double LogSumExp(const std::vector<double>& terms) {
  double top = kNegInf;
  for (double v : terms) top = std::max(top, v);
  if (top == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double v : terms) acc += std::exp(v - top);
  return top + std::log(acc);
}

}  // namespace

double ForwardTokenProb(const ForwardKernelSpec& spec, Token from, Token to,
                        int vocab_size) {
  if (!(spec.beta >= 0.0 && spec.beta <= 1.0)) {
    throw InvalidArgument("beta outside [0,1]");
  }
  const double stay = to == from ? 1.0 - spec.beta : 0.0;
  if (spec.mechanism == Mechanism::kUniform) {
    if (from == kMask || to == kMask) {
      throw InvalidArgument("mask token under uniform corruption");
    }
    return stay + spec.beta / vocab_size;
  }
  if (from == kMask) return to == kMask ? 1.0 : 0.0;
  return stay + (to == kMask ? spec.beta : 0.0);
}

TokenSeq CorruptToLevel(const TokenSeq& seq, double sigma, Mechanism mechanism,
                        int vocab_size, std::mt19937_64& rng) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) {
    throw InvalidArgument("sigma outside [0,1]");
  }
  std::bernoulli_distribution hit(sigma);
  std::uniform_int_distribution<Token> draw(1, vocab_size);
  TokenSeq out = seq;
  for (Token& token : out) {
    if (!hit(rng)) continue;
    token = mechanism == Mechanism::kUniform ? draw(rng) : kMask;
  }
  return out;
}

TokenSeq CorruptToLevel(const TokenSeq& seq, double sigma, Mechanism mechanism,
                        int vocab_size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return CorruptToLevel(seq, sigma, mechanism, vocab_size, rng);
}

double LogMarginalAtLevel(const ExplicitDistribution& dist, double sigma,
                          const TokenSeq& x, Mechanism mechanism) {
  CheckState(dist, x, mechanism);
  const int k = dist.vocab_size();
  std::vector<double> terms;
  terms.reserve(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const TokenSeq& x0 = dist.support()[i];
    double log_term = std::log(dist.probabilities()[i]);
    for (std::size_t h = 0; h < x.size() && log_term > kNegInf; ++h) {
      const double f = LevelTokenProb(mechanism, sigma, x0[h], x[h], k);
      log_term = f > 0.0 ? log_term + std::log(f) : kNegInf;
    }
    terms.push_back(log_term);
  }
  return LogSumExp(terms);
}

double MarginalAtLevel(const ExplicitDistribution& dist, double sigma,
                       const TokenSeq& x, Mechanism mechanism) {
  if (sigma <= kLogSpaceBelow) {
    return std::exp(LogMarginalAtLevel(dist, sigma, x, mechanism));
  }
  CheckState(dist, x, mechanism);
  const int k = dist.vocab_size();
  double total = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const TokenSeq& x0 = dist.support()[i];
    double term = dist.probabilities()[i];
    for (std::size_t h = 0; h < x.size() && term > 0.0; ++h) {
      term *= LevelTokenProb(mechanism, sigma, x0[h], x[h], k);
    }
    total += term;
  }
  return total;
}

double MarginalExact(const ExplicitDistribution& dist,
                     const NoiseSchedule& schedule, int t, const TokenSeq& x,
                     Mechanism mechanism) {
  if (t < 1 || t > schedule.steps()) {
    throw InvalidArgument("step " + std::to_string(t) + " outside [1..T]");
  }
  return MarginalAtLevel(dist, schedule.sigma(t), x, mechanism);
}

bool ConsistentWithSupport(const ExplicitDistribution& dist,
                           const TokenSeq& x) {
  for (const TokenSeq& z : dist.support()) {
    bool ok = true;
    for (std::size_t h = 0; h < x.size() && ok; ++h) {
      ok = x[h] == kMask || x[h] == z[h];
    }
    if (ok) return true;
  }
  return false;
}

double MarginalLeadingTerm(const ExplicitDistribution& dist, const TokenSeq& x,
                           double sigma, Mechanism mechanism) {
  CheckState(dist, x, mechanism);
  if (mechanism == Mechanism::kAbsorbing && !ConsistentWithSupport(dist, x)) {
    return 0.0;
  }
  const ProjectionResult proj = Projection(x, dist);
  const double base =
      mechanism == Mechanism::kUniform ? sigma / dist.vocab_size() : sigma;
  return proj.mass * std::pow(base, proj.distance);
}

}  // namespace dlmlab
