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
#include "dlmlab/support.h"

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.h"

namespace dlmlab {
namespace {

oracle::Data ToOracle(const ExplicitDistribution& d) {
  return {d.vocab_size(), d.length(), d.support(), d.probabilities()};
}

TEST(ForwardTest, TokenProbabilities) {
  EXPECT_DOUBLE_EQ(ForwardTokenProb({Mechanism::kUniform, 0.1}, 2, 2, 4), 0.925);
  EXPECT_DOUBLE_EQ(ForwardTokenProb({Mechanism::kAbsorbing, 0.1}, 2, kMask, 4),
                   0.1);
  EXPECT_THROW(ForwardTokenProb({Mechanism::kUniform, 0.1}, 2, kMask, 4),
               InvalidArgument);
  for (Mechanism m : {Mechanism::kUniform, Mechanism::kAbsorbing}) {
    for (Token from = 1; from <= 4; ++from) {
      double row = m == Mechanism::kAbsorbing
                       ? ForwardTokenProb({m, 0.3}, from, kMask, 4)
                       : 0.0;
      for (Token to = 1; to <= 4; ++to) row += ForwardTokenProb({m, 0.3}, from, to, 4);
      EXPECT_NEAR(row, 1.0, 1e-15);
    }
  }
}

TEST(ForwardTest, CorruptToLevel) {
  const TokenSeq seq{1, 2, 3, 4};
  EXPECT_EQ(CorruptToLevel(seq, 0.0, Mechanism::kUniform, 4, 1ULL), seq);
  EXPECT_EQ(CorruptToLevel(seq, 1.0, Mechanism::kAbsorbing, 4, 1ULL),
            TokenSeq(4, kMask));
  const TokenSeq clean(100000, 1);
  const TokenSeq noisy = CorruptToLevel(clean, 0.5, Mechanism::kUniform, 2, 5ULL);
  EXPECT_EQ(noisy, CorruptToLevel(clean, 0.5, Mechanism::kUniform, 2, 5ULL));
  int changed = 0;
  for (Token v : noisy) changed += v != 1;
  // Half the positions are redrawn and half of those land on token 2.
  EXPECT_NEAR(changed / 1e5, 0.25, 0.01);
  const TokenSeq masked =
      CorruptToLevel(clean, 0.5, Mechanism::kAbsorbing, 2, 5ULL);
  EXPECT_NEAR(CountMasks(masked) / 1e5, 0.5, 0.01);
}

TEST(MarginalTest, SingleTokenClosedForm) {
  const ExplicitDistribution dist(2, 1, {{1}}, {1.0});
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 5);
  EXPECT_NEAR(MarginalExact(dist, s, 1, {1}, Mechanism::kUniform), 0.9, 1e-15);
  EXPECT_NEAR(MarginalExact(dist, s, 1, {2}, Mechanism::kUniform), 0.1, 1e-15);
  EXPECT_THROW(MarginalExact(dist, s, 0, {1}, Mechanism::kUniform),
               InvalidArgument);
  EXPECT_THROW(MarginalExact(dist, s, 6, {1}, Mechanism::kUniform),
               InvalidArgument);
}

TEST(MarginalTest, AgreesWithMatrixPowers) {
  const ExplicitDistribution dist(3, 3, {{1, 2, 3}, {2, 2, 2}, {3, 1, 1}},
                                  {0.5, 0.3, 0.2});
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kCosine, 6);
  for (Mechanism m : {Mechanism::kUniform, Mechanism::kAbsorbing}) {
    const bool abs = m == Mechanism::kAbsorbing;
    for (int t = 1; t <= 5; ++t) {
      const auto cum = oracle::Cumulative(abs, s.betas(), t, 3);
      double total = 0.0;
      for (const auto& x : oracle::AllSeqs(3, abs ? 0 : 1, 3)) {
        const double q = MarginalExact(dist, s, t, x, m);
        EXPECT_NEAR(q, oracle::Marginal(ToOracle(dist), cum, x), 1e-12);
        total += q;
      }
      EXPECT_NEAR(total, 1.0, 1e-10);
    }
  }
  EXPECT_EQ(MarginalExact(dist, s, 2, {1, 1, kMask}, Mechanism::kAbsorbing), 0.0);
}

TEST(MarginalTest, ChapmanKolmogorov) {
  const ExplicitDistribution dist(2, 3, {{1, 1, 2}, {2, 1, 1}}, {0.6, 0.4});
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 7);
  for (Mechanism m : {Mechanism::kUniform, Mechanism::kAbsorbing}) {
    const bool abs = m == Mechanism::kAbsorbing;
    const auto states = oracle::AllSeqs(3, abs ? 0 : 1, 2);
    for (int t = 2; t <= 7; ++t) {
      for (const auto& y : states) {
        double acc = 0.0;
        for (const auto& x : states) {
          double f = MarginalExact(dist, s, t - 1, x, m);
          for (int i = 0; i < 3; ++i) {
            f *= ForwardTokenProb({m, s.beta(t)}, x[i], y[i], 2);
          }
          acc += f;
        }
        EXPECT_NEAR(acc, MarginalExact(dist, s, t, y, m), 1e-10);
      }
    }
  }
}

TEST(MarginalTest, LeadingTerm) {
  const ExplicitDistribution dist(2, 2, {{1, 1}, {2, 2}}, {0.75, 0.25});
  EXPECT_NEAR(MarginalLeadingTerm(dist, {1, 2}, 0.01, Mechanism::kUniform),
              0.005, 1e-15);
  EXPECT_NEAR(MarginalLeadingTerm(dist, {1, 1}, 0.01, Mechanism::kUniform),
              0.75, 1e-15);
  EXPECT_EQ(MarginalLeadingTerm(dist, {1, 2}, 0.01, Mechanism::kAbsorbing), 0.0);
  EXPECT_NEAR(MarginalLeadingTerm(dist, {kMask, 2}, 0.01, Mechanism::kAbsorbing),
              0.25 * 0.01, 1e-15);
}

TEST(MarginalTest, LeadingTermErrorOrder) {
  const ExplicitDistribution dist(3, 3, {{1, 2, 3}, {2, 2, 2}}, {0.7, 0.3});
  for (Mechanism m : {Mechanism::kUniform, Mechanism::kAbsorbing}) {
    const bool abs = m == Mechanism::kAbsorbing;
    for (const auto& x : oracle::AllSeqs(3, abs ? 0 : 1, 3)) {
      if (abs && !ConsistentWithSupport(dist, x)) continue;
      const int d = Projection(x, dist).distance;
      double worst = 0.0;
      double last_ratio = 0.0;
      for (double sigma : {0.2, 0.1, 0.05, 0.02, 0.01}) {
        const double exact = MarginalAtLevel(dist, sigma, x, m);
        const double lead = MarginalLeadingTerm(dist, x, sigma, m);
        const double unit = abs ? sigma : sigma / 3.0;
        worst = std::max(worst, std::abs(exact - lead) / std::pow(unit, d + 1));
        last_ratio = exact / lead;
      }
      EXPECT_LT(worst, 50.0) << FormatSeq(x);
      EXPECT_NEAR(last_ratio, 1.0, 0.1) << FormatSeq(x);
    }
  }
}

TEST(MarginalTest, LogSpaceAgreesAtTinyNoise) {
  const ExplicitDistribution dist(2, 2, {{1, 1}, {2, 2}}, {0.75, 0.25});
  const double q = MarginalAtLevel(dist, 1e-6, {1, 2}, Mechanism::kUniform);
  EXPECT_NEAR(q / (1e-6 / 2), 1.0, 1e-5);
}

}  // namespace
}  // namespace dlmlab
