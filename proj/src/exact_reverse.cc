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

#include "dlmlab/exact_reverse.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <string>

#include "dlmlab/corruption.h"

namespace dlmlab {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void CheckStep(const NoiseSchedule& schedule, int t) {
  if (t < 1 || t > schedule.steps()) {
    throw InvalidArgument("step " + std::to_string(t) + " outside [1.." +
                          std::to_string(schedule.steps()) + "]");
  }
}

void CheckStateAndPosition(const ExplicitDistribution& dist,
                           const TokenSeq& x_t, int h, Mechanism mechanism) {
  if (static_cast<int>(x_t.size()) != dist.length()) {
    throw InvalidArgument("state length differs from H");
  }
  CheckTokens(x_t, dist.vocab_size(), mechanism == Mechanism::kAbsorbing);
  if (h < 0 || h >= dist.length()) {
    throw InvalidArgument("position " + std::to_string(h) + " out of range");
  }
}

// Values y^i may take at t-1 given x_t^i with nonzero forward probability.
std::vector<Token> Predecessors(Token x, Mechanism mechanism, int k) {
  std::vector<Token> out;
  if (mechanism == Mechanism::kAbsorbing && x != kMask) return {x};
  if (mechanism == Mechanism::kAbsorbing) out.push_back(kMask);
  for (Token v = 1; v <= k; ++v) out.push_back(v);
  return out;
}

}  // namespace

const ScoreEntry* ScoreTable::Find(int h, Token y) const {
  for (const ScoreEntry& e : entries) {
    if (e.h == h && e.y == y) return &e;
  }
  return nullptr;
}

void WriteScoreTableCsv(std::ostream& out, const ScoreTable& table) {
  out << "h,y,score,delta_d\n";
  const auto old_precision = out.precision(17);
  for (const ScoreEntry& e : table.entries) {
    out << e.h << ',' << e.y << ',' << e.score << ',' << e.delta_d << '\n';
  }
  out.precision(old_precision);
}

double ProposalRate(Mechanism mechanism, double beta, int vocab_size) {
  return mechanism == Mechanism::kUniform ? beta / vocab_size : beta;
}

NormalizerKind NormalizerFor(Mechanism mechanism) {
  return mechanism == Mechanism::kUniform ? NormalizerKind::kPerBetaOverK
                                          : NormalizerKind::kPerBeta;
}

TokenVector ReverseTokenKernelExact(const ExplicitDistribution& dist,
                                    const NoiseSchedule& schedule, int t,
                                    const TokenSeq& x_t, int h,
                                    Mechanism mechanism, std::uint64_t limit) {
  CheckStep(schedule, t);
  CheckStateAndPosition(dist, x_t, h, mechanism);
  const int k = dist.vocab_size();
  const int len = dist.length();
  const double beta = schedule.beta(t);
  const double prev_sigma = schedule.sigma(t - 1);
  const ForwardKernelSpec step{mechanism, beta};

  std::vector<std::vector<Token>> domain(len);
  std::uint64_t completions = 1;
  for (int i = 0; i < len; ++i) {
    if (i == h) continue;
    domain[i] = Predecessors(x_t[i], mechanism, k);
    completions = completions > limit ? completions
                                      : completions * domain[i].size();
  }
  if (completions > limit) {
    throw CapacityError("reverse kernel needs more than " +
                        std::to_string(limit) + " completions");
  }

  // Forward factor of y^{-h} is base * ratio^d.
  double base = 1.0;
  for (int i = 0; i < len; ++i) {
    if (i != h) base *= ForwardTokenProb(step, x_t[i], x_t[i], k);
  }
  const double ratio =
      mechanism == Mechanism::kUniform
          ? (beta / k) / ForwardTokenProb(step, 1, 1, k)
          : beta;

  const std::vector<Token> centre = Predecessors(x_t[h], mechanism, k);
  // grouped[d][a] = sum of q_{t-1}(y) over y^{-h} at distance d, y^h = a.
  std::vector<TokenVector> grouped(len, TokenVector(k + 1, 0.0));
  std::vector<std::size_t> cursor(len, 0);
  TokenSeq y = x_t;
  for (int i = 0; i < len; ++i) {
    if (i != h) y[i] = domain[i][0];
  }
  while (true) {
    int d = 0;
    for (int i = 0; i < len; ++i) d += (i != h && y[i] != x_t[i]) ? 1 : 0;
    for (std::size_t s = 0; s < dist.size(); ++s) {
      const TokenSeq& x0 = dist.support()[s];
      double rest = dist.probabilities()[s];
      for (int i = 0; i < len && rest > 0.0; ++i) {
        if (i != h) rest *= LevelTokenProb(mechanism, prev_sigma, x0[i], y[i], k);
      }
      if (rest == 0.0) continue;
      for (Token a : centre) {
        grouped[d][a] += rest * LevelTokenProb(mechanism, prev_sigma, x0[h], a, k);
      }
    }
    int i = len - 1;
    for (; i >= 0; --i) {
      if (i == h) continue;
      if (++cursor[i] < domain[i].size()) {
        y[i] = domain[i][cursor[i]];
        break;
      }
      cursor[i] = 0;
      y[i] = domain[i][0];
    }
    if (i < 0) break;
  }

  TokenVector kernel(k + 1, 0.0);
  double total = 0.0;
  for (Token a : centre) {
    double acc = 0.0;
    double factor = base;
    for (int d = 0; d < len; ++d) {
      acc += factor * grouped[d][a];
      factor *= ratio;
    }
    kernel[a] = acc * ForwardTokenProb(step, a, x_t[h], k);
    total += kernel[a];
  }
  if (!(total > 0.0)) {
    throw InvalidArgument("state " + FormatSeq(x_t) +
                          " has zero probability at step " + std::to_string(t));
  }
  for (double& v : kernel) v /= total;
  return kernel;
}

double NormalizedScore(const ExplicitDistribution& dist,
                       const NoiseSchedule& schedule, int t,
                       const TokenSeq& x_t, int h, Token y,
                       Mechanism mechanism) {
  CheckStateAndPosition(dist, x_t, h, mechanism);
  if (y == x_t[h]) throw InvalidArgument("score of the identity edit");
  if (y < 1 || y > dist.vocab_size()) {
    throw InvalidArgument("score target must be a clean token");
  }
  if (mechanism == Mechanism::kAbsorbing && x_t[h] != kMask) {
    throw InvalidArgument("absorbing scores are defined on masked positions");
  }
  const TokenVector kernel =
      ReverseTokenKernelExact(dist, schedule, t, x_t, h, mechanism);
  return kernel[y] /
         ProposalRate(mechanism, schedule.beta(t), dist.vocab_size());
}

double ConcreteScore(const ExplicitDistribution& dist,
                     const NoiseSchedule& schedule, int t, const TokenSeq& x,
                     int h, Token y, Mechanism mechanism) {
  CheckStep(schedule, t);
  CheckStateAndPosition(dist, x, h, mechanism);
  const bool mask_ok = mechanism == Mechanism::kAbsorbing;
  if (y > dist.vocab_size() || y < (mask_ok ? 0 : 1)) {
    throw InvalidArgument("edit target out of range");
  }
  if (y == x[h]) return 1.0;
  const double sigma = schedule.sigma(t);
  const double log_den = LogMarginalAtLevel(dist, sigma, x, mechanism);
  if (log_den == kNegInf) {
    throw InvalidArgument("state " + FormatSeq(x) + " has zero probability");
  }
  const double log_num =
      LogMarginalAtLevel(dist, sigma, ApplyEdit(x, h, y), mechanism);
  return log_num == kNegInf ? 0.0 : std::exp(log_num - log_den);
}

PosteriorTable PosteriorExact(const ExplicitDistribution& dist,
                              const NoiseSchedule& schedule, int t,
                              const TokenSeq& x_t, Mechanism mechanism) {
  CheckStep(schedule, t);
  CheckStateAndPosition(dist, x_t, 0, mechanism);
  const int k = dist.vocab_size();
  const double sigma = schedule.sigma(t);
  std::vector<double> log_w(dist.size(), kNegInf);
  double top = kNegInf;
  for (std::size_t s = 0; s < dist.size(); ++s) {
    const TokenSeq& x0 = dist.support()[s];
    double lw = std::log(dist.probabilities()[s]);
    for (std::size_t i = 0; i < x_t.size() && lw > kNegInf; ++i) {
      const double f = LevelTokenProb(mechanism, sigma, x0[i], x_t[i], k);
      lw = f > 0.0 ? lw + std::log(f) : kNegInf;
    }
    log_w[s] = lw;
    top = std::max(top, lw);
  }
  if (top == kNegInf) {
    throw InvalidArgument("state " + FormatSeq(x_t) + " has zero probability");
  }
  PosteriorTable rows(x_t.size(), TokenVector(k + 1, 0.0));
  double total = 0.0;
  for (std::size_t s = 0; s < dist.size(); ++s) {
    if (log_w[s] == kNegInf) continue;
    const double w = std::exp(log_w[s] - top);
    total += w;
    for (std::size_t i = 0; i < x_t.size(); ++i) {
      rows[i][dist.support()[s][i]] += w;
    }
  }
  for (TokenVector& row : rows) {
    for (double& v : row) v /= total;
  }
  return rows;
}

ScoreTable ExactScoreTable(const ExplicitDistribution& dist,
                           const NoiseSchedule& schedule, int t,
                           const TokenSeq& x_t, Mechanism mechanism) {
  CheckStep(schedule, t);
  ScoreTable table;
  table.state = x_t;
  table.sigma = schedule.sigma(t);
  table.t = t;
  table.normalizer = NormalizerFor(mechanism);
  const int k = dist.vocab_size();
  const double rate = ProposalRate(mechanism, schedule.beta(t), k);
  for (int h = 0; h < dist.length(); ++h) {
    if (mechanism == Mechanism::kAbsorbing && x_t[h] != kMask) continue;
    const TokenVector kernel =
        ReverseTokenKernelExact(dist, schedule, t, x_t, h, mechanism);
    for (Token y = 1; y <= k; ++y) {
      if (y == x_t[h]) continue;
      table.entries.push_back(
          {h, y, kernel[y] / rate, ClassifyEdit(x_t, h, y, dist).delta_d});
    }
  }
  return table;
}

std::vector<TokenSeq> EnumerateStates(const ExplicitDistribution& dist,
                                      Mechanism mechanism,
                                      std::uint64_t limit) {
  const int k = dist.vocab_size();
  const int len = dist.length();
  std::vector<TokenSeq> out;
  if (mechanism == Mechanism::kUniform) {
    if (CheckedPow(k, len) > limit) {
      throw CapacityError("state space K^H exceeds limit");
    }
    TokenSeq x(len, 1);
    while (true) {
      out.push_back(x);
      int i = len - 1;
      for (; i >= 0; --i) {
        if (++x[i] <= k) break;
        x[i] = 1;
      }
      if (i < 0) break;
    }
    return out;
  }
  if (CheckedPow(2, len) * dist.size() > limit) {
    throw CapacityError("masked state space exceeds limit");
  }
  std::set<TokenSeq> seen;
  for (const TokenSeq& x0 : dist.support()) {
    for (std::uint64_t pattern = 0; pattern < (1ULL << len); ++pattern) {
      TokenSeq x = x0;
      for (int i = 0; i < len; ++i) {
        if (pattern >> i & 1ULL) x[i] = kMask;
      }
      seen.insert(std::move(x));
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace dlmlab
