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

#include "dlmlab/parameterization.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dlmlab/corruption.h"

namespace dlmlab {
namespace {

constexpr double kRowTolerance = 1e-10;

void CheckStep(const NoiseSchedule& schedule, int t) {
  if (t < 1 || t > schedule.steps()) {
    throw InvalidArgument("step " + std::to_string(t) + " outside [1..T]");
  }
}

int ResolveMaxStep(int max_step, int cap) {
  return max_step <= 0 ? cap : std::min(max_step, cap);
}

// Visits every masking of each support point with its probability at
// level sigma.
template <typename Visit>
void ForEachMasking(const ExplicitDistribution& dist, double sigma,
                    Visit&& visit) {
  const int len = dist.length();
  if (len >= 31) throw CapacityError("too many mask patterns");
  for (std::size_t s = 0; s < dist.size(); ++s) {
    const TokenSeq& x0 = dist.support()[s];
    for (std::uint32_t pattern = 0; pattern < (1U << len); ++pattern) {
      TokenSeq x_t = x0;
      double w = dist.probabilities()[s];
      for (int i = 0; i < len; ++i) {
        if (pattern >> i & 1U) {
          x_t[i] = kMask;
          w *= sigma;
        } else {
          w *= 1.0 - sigma;
        }
      }
      if (w > 0.0) visit(x0, x_t, w);
    }
  }
}

}  // namespace

std::string_view ParameterizationName(Parameterization p) {
  switch (p) {
    case Parameterization::kBayes:
      return "bayes";
    case Parameterization::kD3pm:
      return "d3pm";
    case Parameterization::kSubs:
      return "subs";
  }
  return "bayes";
}

Parameterization ParseParameterization(std::string_view name) {
  if (name == "bayes") return Parameterization::kBayes;
  if (name == "d3pm") return Parameterization::kD3pm;
  if (name == "subs") return Parameterization::kSubs;
  throw InvalidArgument("unknown parameterization '" + std::string(name) + "'");
}

void CheckPosteriorTable(const PosteriorTable& posterior, int vocab_size) {
  for (std::size_t h = 0; h < posterior.size(); ++h) {
    const TokenVector& row = posterior[h];
    if (static_cast<int>(row.size()) != vocab_size + 1) {
      throw InvalidArgument("posterior row has wrong width");
    }
    double total = 0.0;
    for (Token v = 1; v <= vocab_size; ++v) {
      if (!(row[v] >= 0.0)) throw InvalidArgument("negative posterior entry");
      total += row[v];
    }
    if (row[kMask] != 0.0 || std::abs(total - 1.0) > kRowTolerance) {
      throw InvalidArgument("posterior row " + std::to_string(h) +
                            " is not a distribution over clean tokens");
    }
  }
}

std::vector<TokenVector> KernelFromPosterior(const PosteriorTable& posterior,
                                             const TokenSeq& x_t, int t,
                                             const NoiseSchedule& schedule,
                                             Mechanism mechanism,
                                             Parameterization param) {
  CheckStep(schedule, t);
  if (param == Parameterization::kSubs && mechanism != Mechanism::kAbsorbing) {
    throw InvalidArgument("subs parameterization requires absorbing masks");
  }
  if (posterior.size() != x_t.size() || posterior.empty()) {
    throw InvalidArgument("posterior and state lengths differ");
  }
  const int k = static_cast<int>(posterior[0].size()) - 1;
  CheckPosteriorTable(posterior, k);
  CheckTokens(x_t, k, mechanism == Mechanism::kAbsorbing);
  const double sigma = schedule.sigma(t);
  const double prev = schedule.sigma(t - 1);
  const ForwardKernelSpec step{mechanism, schedule.beta(t)};
  const Token first = mechanism == Mechanism::kAbsorbing ? kMask : 1;

  std::vector<TokenVector> out(x_t.size(), TokenVector(k + 1, 0.0));
  for (std::size_t h = 0; h < x_t.size(); ++h) {
    const Token a = x_t[h];
    const TokenVector& post = posterior[h];
    TokenVector& row = out[h];
    if (mechanism == Mechanism::kAbsorbing && a != kMask) {
      row[a] = 1.0;
      continue;
    }
    if (param == Parameterization::kSubs) {
      row[kMask] = prev / sigma;
      for (Token v = 1; v <= k; ++v) row[v] = (sigma - prev) / sigma * post[v];
      continue;
    }
    double total = 0.0;
    for (Token y = first; y <= k; ++y) {
      const double fwd = ForwardTokenProb(step, y, a, k);
      if (fwd == 0.0) continue;
      double acc = 0.0;
      for (Token v = 1; v <= k; ++v) {
        if (post[v] == 0.0) continue;
        const double lead = LevelTokenProb(mechanism, prev, v, y, k) * fwd;
        if (param == Parameterization::kD3pm) {
          acc += lead * post[v];
        } else {
          const double den = LevelTokenProb(mechanism, sigma, v, a, k);
          if (den > 0.0) acc += lead / den * post[v];
        }
      }
      row[y] = acc;
      total += acc;
    }
    if (param == Parameterization::kD3pm) {
      if (!(total > 0.0)) throw InvalidArgument("d3pm kernel has zero mass");
      for (double& v : row) v /= total;
    }
  }
  return out;
}

double MaskedCeWeight(const NoiseSchedule& schedule, int t) {
  CheckStep(schedule, t);
  return (schedule.sigma(t) - schedule.sigma(t - 1)) / schedule.sigma(t);
}

LossValue WeightedMaskedCe(const PosteriorFn& model,
                           const std::vector<MaskedExample>& batch,
                           const NoiseSchedule& schedule) {
  if (batch.empty()) throw InvalidArgument("empty batch");
  LossValue loss;
  for (const MaskedExample& ex : batch) {
    if (ex.x0.size() != ex.x_t.size()) {
      throw InvalidArgument("example lengths differ");
    }
    const double w = MaskedCeWeight(schedule, ex.t);
    const PosteriorTable post = model(ex.x_t, ex.t);
    for (std::size_t h = 0; h < ex.x_t.size(); ++h) {
      if (ex.x_t[h] != kMask) {
        if (ex.x_t[h] != ex.x0[h]) {
          throw InvalidArgument("batch is not absorbing corruption");
        }
        continue;
      }
      const double mass = post.at(h).at(ex.x0[h]);
      if (mass <= 0.0) {
        loss.infinite = true;
        continue;
      }
      loss.value -= w * std::log(mass);
    }
  }
  loss.value /= static_cast<double>(batch.size());
  if (loss.infinite) loss.value = std::numeric_limits<double>::infinity();
  return loss;
}

LossValue ExactMaskedCe(const PosteriorFn& model,
                        const ExplicitDistribution& dist,
                        const NoiseSchedule& schedule, int max_step) {
  LossValue loss;
  const int last = ResolveMaxStep(max_step, schedule.steps());
  for (int t = 1; t <= last; ++t) {
    const double w = MaskedCeWeight(schedule, t);
    ForEachMasking(dist, schedule.sigma(t),
                   [&](const TokenSeq& x0, const TokenSeq& x_t, double q) {
                     if (!HasMask(x_t)) return;
                     const PosteriorTable post = model(x_t, t);
                     for (std::size_t h = 0; h < x_t.size(); ++h) {
                       if (x_t[h] != kMask) continue;
                       const double mass = post[h][x0[h]];
                       if (mass <= 0.0) {
                         loss.infinite = true;
                       } else {
                         loss.value -= q * w * std::log(mass);
                       }
                     }
                   });
  }
  if (loss.infinite) loss.value = std::numeric_limits<double>::infinity();
  return loss;
}

TokenVector InducedScore(const TokenVector& posterior_row, double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw InvalidArgument("induced score needs sigma in (0,1)");
  }
  const double c = (1.0 - sigma) / sigma;
  TokenVector out(posterior_row.size(), 0.0);
  for (std::size_t v = 1; v < out.size(); ++v) out[v] = c * posterior_row[v];
  return out;
}

std::vector<TokenVector> InducedScore(const PosteriorTable& posterior,
                                      const TokenSeq& x_t, double sigma) {
  if (posterior.size() != x_t.size()) {
    throw InvalidArgument("posterior and state lengths differ");
  }
  std::vector<TokenVector> out;
  out.reserve(x_t.size());
  for (std::size_t h = 0; h < x_t.size(); ++h) {
    out.push_back(x_t[h] == kMask
                      ? InducedScore(posterior[h], sigma)
                      : TokenVector(posterior[h].size(), 0.0));
  }
  return out;
}

int LastFiniteRateStep(const NoiseSchedule& schedule) {
  int last = 0;
  for (int t = 1; t <= schedule.steps(); ++t) {
    if (schedule.sigma(t) < 1.0) last = t;
  }
  return last;
}

LossValue ExactScoreEntropy(const PosteriorFn& model,
                            const ExplicitDistribution& dist,
                            const NoiseSchedule& schedule, int max_step) {
  LossValue loss;
  const int k = dist.vocab_size();
  const int last = ResolveMaxStep(max_step, LastFiniteRateStep(schedule));
  for (int t = 1; t <= last; ++t) {
    const double sigma = schedule.sigma(t);
    const double rate = (sigma - schedule.sigma(t - 1)) / (1.0 - sigma);
    const double c = (1.0 - sigma) / sigma;
    ForEachMasking(dist, sigma, [&](const TokenSeq& x0, const TokenSeq& x_t,
                                    double q) {
      if (!HasMask(x_t)) return;
      const std::vector<TokenVector> score =
          InducedScore(model(x_t, t), x_t, sigma);
      for (std::size_t h = 0; h < x_t.size(); ++h) {
        if (x_t[h] != kMask) continue;
        for (Token j = 1; j <= k; ++j) {
          const double s = score[h][j];
          const double target = j == x0[h] ? c : 0.0;
          double term = s;
          if (target > 0.0) {
            if (s <= 0.0) {
              loss.infinite = true;
              continue;
            }
            term += -target * std::log(s) + target * std::log(target) - target;
          }
          loss.value += q * rate * term;
        }
      }
    });
  }
  if (loss.infinite) loss.value = std::numeric_limits<double>::infinity();
  return loss;
}

LossValue DenoisingKlTerm(const KernelFn& model,
                          const ExplicitDistribution& dist,
                          const NoiseSchedule& schedule, int t,
                          Mechanism mechanism) {
  CheckStep(schedule, t);
  const int k = dist.vocab_size();
  const double sigma = schedule.sigma(t);
  const double prev = schedule.sigma(t - 1);
  const ForwardKernelSpec step{mechanism, schedule.beta(t)};
  const Token first = mechanism == Mechanism::kAbsorbing ? kMask : 1;
  LossValue loss;
  const std::vector<TokenSeq> states = EnumerateStates(dist, mechanism);
  for (const TokenSeq& x_t : states) {
    std::vector<TokenVector> kernel;
    for (std::size_t s = 0; s < dist.size(); ++s) {
      const TokenSeq& x0 = dist.support()[s];
      double q = dist.probabilities()[s];
      for (std::size_t i = 0; i < x_t.size() && q > 0.0; ++i) {
        q *= LevelTokenProb(mechanism, sigma, x0[i], x_t[i], k);
      }
      if (q <= 0.0) continue;
      if (kernel.empty()) kernel = model(x_t, t);
      for (std::size_t h = 0; h < x_t.size(); ++h) {
        const double den = LevelTokenProb(mechanism, sigma, x0[h], x_t[h], k);
        for (Token y = first; y <= k; ++y) {
          const double target = LevelTokenProb(mechanism, prev, x0[h], y, k) *
                                ForwardTokenProb(step, y, x_t[h], k) / den;
          if (target <= 0.0) continue;
          const double m = kernel[h][y];
          if (m <= 0.0) {
            loss.infinite = true;
            continue;
          }
          loss.value += q * target * std::log(target / m);
        }
      }
    }
  }
  if (loss.infinite) loss.value = std::numeric_limits<double>::infinity();
  return loss;
}

PosteriorFn ExactPosteriorModel(const ExplicitDistribution& dist,
                                const NoiseSchedule& schedule,
                                Mechanism mechanism) {
  return [dist, schedule, mechanism](const TokenSeq& x_t, int t) {
    return PosteriorExact(dist, schedule, t, x_t, mechanism);
  };
}

KernelFn ExactKernelModel(const ExplicitDistribution& dist,
                          const NoiseSchedule& schedule, Mechanism mechanism) {
  return [dist, schedule, mechanism](const TokenSeq& x_t, int t) {
    std::vector<TokenVector> out;
    for (int h = 0; h < static_cast<int>(x_t.size()); ++h) {
      out.push_back(
          ReverseTokenKernelExact(dist, schedule, t, x_t, h, mechanism));
    }
    return out;
  };
}

}  // namespace dlmlab
