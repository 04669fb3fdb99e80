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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dlmlab/corruption.h"
#include "oracles.h"

namespace dlmlab {
namespace {

ExplicitDistribution TwoPoint() {
  return ExplicitDistribution(2, 2, {{1, 1}, {2, 2}}, {0.75, 0.25});
}

ExplicitDistribution ThreeByThree() {
  return ExplicitDistribution(3, 3, {{1, 2, 3}, {2, 2, 2}, {3, 1, 1}},
                              {0.5, 0.3, 0.2});
}

TEST(ReverseKernelTest, SingleTokenClosedForm) {
  const ExplicitDistribution dist(2, 1, {{1}}, {1.0});
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 400);
  const int t = 40;
  const TokenVector k =
      ReverseTokenKernelExact(dist, s, t, {2}, 0, Mechanism::kUniform);
  const double expected =
      (1.0 - s.sigma(t - 1) / 2) * (s.beta(t) / 2) / (s.sigma(t) / 2);
  EXPECT_NEAR(k[1], expected, 1e-13);
  EXPECT_NEAR(k[1] + k[2], 1.0, 1e-12);
  const double score =
      NormalizedScore(dist, s, t, {2}, 0, 1, Mechanism::kUniform);
  EXPECT_NEAR(score * s.sigma(t) / 2.0, 1.0, 0.06);
}

TEST(ReverseKernelTest, AbsorbingSingleToken) {
  const ExplicitDistribution dist(2, 1, {{1}}, {1.0});
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 20);
  for (int t = 1; t <= 20; ++t) {
    const TokenVector k =
        ReverseTokenKernelExact(dist, s, t, {kMask}, 0, Mechanism::kAbsorbing);
    EXPECT_EQ(k[2], 0.0);
    EXPECT_NEAR(k[1], 1.0 - s.sigma(t - 1) / s.sigma(t), 1e-14);
  }
}

TEST(ReverseKernelTest, MatchesNaiveJointSum) {
  const auto dist = ThreeByThree();
  const oracle::Data data{3, 3, dist.support(), dist.probabilities()};
  for (ScheduleKind kind : {ScheduleKind::kLinearCumulative, ScheduleKind::kCosine}) {
    const NoiseSchedule s = MakeSchedule(kind, 5);
    for (Mechanism m : {Mechanism::kUniform, Mechanism::kAbsorbing}) {
      const bool abs = m == Mechanism::kAbsorbing;
      for (int t = 1; t <= 5; ++t) {
        for (const TokenSeq& x : EnumerateStates(dist, m)) {
        if (MarginalExact(dist, s, t, x, m) == 0.0) continue;
          for (int h = 0; h < 3; ++h) {
            const TokenVector got = ReverseTokenKernelExact(dist, s, t, x, h, m);
            const auto want = oracle::ReverseKernel(data, abs, s.betas(), t, x, h);
            double total = 0.0;
            for (std::size_t v = 0; v < got.size(); ++v) {
              ASSERT_NEAR(got[v], want[v], 1e-10) << FormatSeq(x) << " t=" << t;
              total += got[v];
            }
            ASSERT_NEAR(total, 1.0, 1e-10);
          }
        }
      }
    }
  }
}

TEST(ReverseKernelTest, Errors) {
  const auto dist = TwoPoint();
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 10);
  EXPECT_THROW(
      ReverseTokenKernelExact(dist, s, 3, {1, 2}, 0, Mechanism::kAbsorbing),
      InvalidArgument);
  EXPECT_THROW(
      ReverseTokenKernelExact(dist, s, 3, {1, 2}, 0, Mechanism::kUniform, 1),
      CapacityError);
  EXPECT_THROW(NormalizedScore(dist, s, 3, {1, 2}, 0, 1, Mechanism::kUniform),
               InvalidArgument);
  EXPECT_THROW(
      NormalizedScore(dist, s, 3, {1, kMask}, 0, 2, Mechanism::kAbsorbing),
      InvalidArgument);
}

TEST(ReverseKernelTest, AbsorbingNonImprovingMassIsZero) {
  const ExplicitDistribution dist(3, 3, {{1, 2, 3}, {1, 1, 1}, {2, 2, 2}},
                                  {0.4, 0.4, 0.2});
  for (int steps : {8, 50, 400}) {
    const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, steps);
    for (int t : {1, steps / 2, steps}) {
      for (const TokenSeq& x : EnumerateStates(dist, Mechanism::kAbsorbing)) {
        if (MarginalExact(dist, s, t, x, Mechanism::kAbsorbing) == 0.0) continue;
        const ScoreTable table = ExactScoreTable(dist, s, t, x, Mechanism::kAbsorbing);
        for (const ScoreEntry& e : table.entries) {
          ASSERT_LE(e.delta_d, 0);
          if (e.delta_d == 0) ASSERT_LE(e.score * s.beta(t), 1e-12);
        }
      }
    }
  }
}

TEST(ConcreteScoreTest, ClosedFormAndIdentity) {
  const ExplicitDistribution dist(2, 1, {{1}}, {1.0});
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 5);
  EXPECT_NEAR(ConcreteScore(dist, s, 1, {2}, 0, 1, Mechanism::kUniform), 9.0,
              1e-13);
  EXPECT_EQ(ConcreteScore(dist, s, 1, {2}, 0, 2, Mechanism::kUniform), 1.0);
  const auto two = TwoPoint();
  EXPECT_THROW(ConcreteScore(two, s, 1, {1, 2}, 0, 2, Mechanism::kAbsorbing),
               InvalidArgument);
}

TEST(ConcreteScoreTest, NormalizedScoreConvergesAtFineSteps) {
  const auto dist = TwoPoint();
  for (double sigma : {0.2, 0.1}) {
    const int steps = static_cast<int>(std::ceil(64.0 / (sigma * sigma)));
    const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, steps);
    const int t = TimeIndexForSigma(s, sigma);
    for (const TokenSeq& x : EnumerateStates(dist, Mechanism::kUniform)) {
      for (int h = 0; h < 2; ++h) {
        const Token y = x[h] == 1 ? 2 : 1;
        const double ns = NormalizedScore(dist, s, t, x, h, y, Mechanism::kUniform);
        const double cs = ConcreteScore(dist, s, t, x, h, y, Mechanism::kUniform);
        EXPECT_LT(std::abs(ns - cs) / cs, 0.05) << FormatSeq(x);
      }
    }
  }
}

TEST(PosteriorTest, Cases) {
  const auto dist = TwoPoint();
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 10);
  const PosteriorTable masked =
      PosteriorExact(dist, s, 4, {kMask, 1}, Mechanism::kAbsorbing);
  EXPECT_NEAR(masked[0][1], 1.0, 1e-15);
  EXPECT_EQ(masked[0][2], 0.0);
  const PosteriorTable clean =
      PosteriorExact(dist, s, 4, {2, 2}, Mechanism::kAbsorbing);
  EXPECT_NEAR(clean[0][2], 1.0, 1e-15);
  EXPECT_NEAR(clean[1][2], 1.0, 1e-15);

  const NoiseSchedule fine = MakeSchedule(ScheduleKind::kLinearCumulative, 1000);
  const PosteriorTable far =
      PosteriorExact(dist, fine, 999, {1, 2}, Mechanism::kUniform);
  EXPECT_NEAR(far[0][1], 0.75, 1e-3);
  EXPECT_NEAR(far[1][2], 0.25, 1e-3);
}

TEST(PosteriorTest, MatchesOracle) {
  const auto dist = ThreeByThree();
  const oracle::Data data{3, 3, dist.support(), dist.probabilities()};
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kCosine, 6);
  for (Mechanism m : {Mechanism::kUniform, Mechanism::kAbsorbing}) {
    for (int t = 1; t <= 6; ++t) {
      const auto cum =
          oracle::Cumulative(m == Mechanism::kAbsorbing, s.betas(), t, 3);
      for (const TokenSeq& x : EnumerateStates(dist, m)) {
        if (MarginalExact(dist, s, t, x, m) == 0.0) continue;
        const PosteriorTable got = PosteriorExact(dist, s, t, x, m);
        const auto want = oracle::Posterior(data, cum, x);
        for (int h = 0; h < 3; ++h) {
          for (Token v = 0; v <= 3; ++v) ASSERT_NEAR(got[h][v], want[h][v], 1e-12);
        }
      }
    }
  }
}

TEST(ScoreTableTest, CsvAndClasses) {
  const auto dist = TwoPoint();
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 100);
  const ScoreTable table = ExactScoreTable(dist, s, 10, {1, 2}, Mechanism::kUniform);
  EXPECT_EQ(table.normalizer, NormalizerKind::kPerBetaOverK);
  ASSERT_EQ(table.entries.size(), 2u);
  ASSERT_NE(table.Find(1, 1), nullptr);
  EXPECT_EQ(table.Find(1, 1)->delta_d, -1);
  for (const ScoreEntry& e : table.entries) {
    EXPECT_TRUE(std::isfinite(e.score));
    EXPECT_GE(e.score, 0.0);
  }
  std::ostringstream out;
  WriteScoreTableCsv(out, table);
  EXPECT_EQ(out.str().substr(0, 18), "h,y,score,delta_d\n");
}

TEST(EnumerateStatesTest, Counts) {
  const auto dist = TwoPoint();
  EXPECT_EQ(EnumerateStates(dist, Mechanism::kUniform).size(), 4u);
  // 2 points x 4 patterns, with the all-mask state shared.
  EXPECT_EQ(EnumerateStates(dist, Mechanism::kAbsorbing).size(), 7u);
}

}  // namespace
}  // namespace dlmlab
