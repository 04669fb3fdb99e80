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

#include "dlmlab/theory_lab.h"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace dlmlab {
namespace {

ExplicitDistribution TwoPoint(int k, double p) {
  return ExplicitDistribution(k, 2, {{1, 1}, {2, 2}}, {p, 1.0 - p});
}

TEST(FitLineTest, RecoversExactLine) {
  const LineFit f = FitLine({0.0, 1.0, 2.0}, {1.0, 3.0, 5.0});
  EXPECT_NEAR(f.slope, 2.0, 1e-15);
  EXPECT_NEAR(f.intercept, 1.0, 1e-15);
  EXPECT_THROW(FitLine({1.0}, {1.0}), InvalidArgument);
}

TEST(RateSeparationTest, SingleTokenTowardSupport) {
  const ExplicitDistribution dist(2, 1, {{1}}, {1.0});
  const RateSeparationReport r = VerifyRateSeparation(dist, Mechanism::kUniform);
  const EditFit* toward = nullptr;
  for (const EditFit& e : r.edits) {
    if (e.state == TokenSeq{2}) toward = &e;
  }
  ASSERT_NE(toward, nullptr);
  EXPECT_EQ(toward->delta_d, -1);
  EXPECT_NEAR(toward->fitted_exponent, -1.0, 0.05);
  EXPECT_NEAR(toward->fitted_coefficient, 2.0, 0.05);
  EXPECT_DOUBLE_EQ(toward->coefficient_target, 2.0);
}

TEST(RateSeparationTest, UniformTwoTokenInstance) {
  const RateSeparationReport r =
      VerifyRateSeparation(TwoPoint(2, 0.75), Mechanism::kUniform);
  const std::vector<int> counts = r.ClassCounts();
  EXPECT_GT(counts[0], 0);
  EXPECT_EQ(counts[1], 0);
  EXPECT_GT(counts[2], 0);
  EXPECT_LE(r.MaxExponentError(), 0.1);
  EXPECT_LE(r.MaxCoefficientError(), 0.1);
  EXPECT_TRUE(r.Pass());
}

TEST(RateSeparationTest, UniformEmbeddingCoversAllClasses) {
  const RateSeparationReport r =
      VerifyRateSeparation(TwoPoint(3, 0.75), Mechanism::kUniform);
  for (int c : r.ClassCounts()) EXPECT_GT(c, 0);
  EXPECT_TRUE(r.Pass()) << r.SummaryJson().dump();
  for (const EditFit& e : r.edits) {
    if (e.delta_d != 0) continue;
    EXPECT_NEAR(e.fitted_exponent, 0.0, 0.1);
  }
}

TEST(RateSeparationTest, AbsorbingZerosAndSlopes) {
  const RateSeparationReport r =
      VerifyRateSeparation(TwoPoint(2, 0.75), Mechanism::kAbsorbing);
  EXPECT_TRUE(r.Pass()) << r.SummaryJson().dump();
  EXPECT_EQ(r.ClassCounts()[2], 0);
  EXPECT_GT(r.ClassCounts()[1], 0);
  EXPECT_LE(r.MaxZeroMass(), 1e-12);
  for (const EditFit& e : r.edits) {
    if (e.delta_d == 0) {
      EXPECT_TRUE(e.zero);
      EXPECT_TRUE(std::isinf(e.fitted_exponent));
    } else {
      EXPECT_NEAR(e.fitted_exponent, -1.0, 0.1);
    }
  }
  std::ostringstream csv;
  WriteRateSeparationCsv(csv, r);
  EXPECT_NE(csv.str().find(",inf,inf,"), std::string::npos);
}

TEST(RateSeparationTest, RejectsBadGrids) {
  RateSeparationConfig short_grid;
  short_grid.sigma_grid = {0.1, 0.05};
  EXPECT_THROW(VerifyRateSeparation(TwoPoint(2, 0.75), Mechanism::kUniform,
                                    short_grid),
               InvalidArgument);
  RateSeparationConfig coarse;
  coarse.sigma_grid = {0.2, 0.1, 0.05};
  coarse.steps = {100, 100, 100};
  EXPECT_THROW(
      VerifyRateSeparation(TwoPoint(2, 0.75), Mechanism::kUniform, coarse),
      InvalidArgument);
}

TEST(ThresholdTest, ExactScoresClassifyPerfectly) {
  const auto dist = TwoPoint(2, 0.75);
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 40000);
  const int t = TimeIndexForSigma(s, 0.01);
  for (const TokenSeq& x : EnumerateStates(dist, Mechanism::kUniform)) {
    const ScoreTable table = ExactScoreTable(dist, s, t, x, Mechanism::kUniform);
    EXPECT_EQ(ThresholdRecovery(table, 0.01, dist).accuracy, 1.0);
  }
  ScoreTable empty;
  empty.state = {1, 1};
  const ThresholdResult r = ThresholdRecovery(empty, 0.01, dist);
  EXPECT_TRUE(r.edits.empty());
}

TEST(ThresholdTest, DistortedScoresOnBothInstances) {
  const std::vector<double> grid{0.01, 0.005, 0.002, 0.001};
  for (const auto& dist : {TwoPoint(2, 0.75), TwoPoint(3, 0.6)}) {
    for (double exponent : {0.0, 0.3}) {
      const DistortionProfile p =
          ThresholdSweep(dist, Mechanism::kUniform, grid, exponent, 17);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_EQ(p.accuracy[i], 1.0) << grid[i];
        if (exponent > 0) {
          EXPECT_NEAR(p.distortion[i] / std::pow(grid[i], -0.3), 1.0, 0.01);
        }
      }
      EXPECT_EQ(p.sigma_star, 0.01);
    }
  }
}

TEST(DistortionTest, Definition) {
  const auto dist = TwoPoint(3, 0.75);
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 400);
  const ScoreTable a = ExactScoreTable(dist, s, 40, {1, 3}, Mechanism::kUniform);
  EXPECT_EQ(DistortionFactor(a, a), 1.0);
  ScoreTable b = a;
  b.entries[1].score *= 3.0;
  EXPECT_NEAR(DistortionFactor(a, b), 3.0, 1e-12);
  EXPECT_NEAR(DistortionFactor(b, a), 3.0, 1e-12);
  ScoreTable scaled = a;
  for (ScoreEntry& e : scaled.entries) e.score *= 0.25;
  EXPECT_NEAR(DistortionFactor(a, scaled), 4.0, 1e-12);
  ScoreTable zero = a;
  zero.entries[0].score = 0.0;
  EXPECT_THROW(DistortionFactor(a, zero), InvalidArgument);
  const ScoreTable other =
      ExactScoreTable(dist, s, 40, {1, 1}, Mechanism::kUniform);
  EXPECT_THROW(DistortionFactor(a, other), InvalidArgument);
}

TEST(ScaleVsTvTest, ReferencePoint) {
  const ScaleVsTvResult r = ScaleVsTvExample(1e-4, 0.25);
  EXPECT_NEAR(r.distortion, 10.0, 1e-12);
  EXPECT_NEAR(r.tv, 0.44991, 1e-4);
  // Independent evaluation of the same two-point laws.
  const double q1 = 0.5 - 1e-4;
  const double p1 = 0.1 * q1;
  EXPECT_NEAR(r.tv, q1 - p1, 1e-15);
  EXPECT_GE(r.kl_pq, 2 * r.tv * r.tv);
  EXPECT_GE(r.kl_qp, 2 * r.tv * r.tv);
  EXPECT_GE(std::min(r.kl_pq, r.kl_qp), 0.40);
}

TEST(ScaleVsTvTest, Trends) {
  double last_tv = 0.0;
  for (double sigma : {1e-3, 1e-4, 1e-5, 1e-8}) {
    const ScaleVsTvResult r = ScaleVsTvExample(sigma, 0.25);
    EXPECT_GT(r.tv, last_tv);
    EXPECT_LT(r.tv, 0.5);
    EXPECT_NEAR(r.distortion * std::pow(sigma, 0.25), 1.0, 1e-9);
    last_tv = r.tv;
  }
  EXPECT_LT(ScaleVsTvExample(0.01, 1e-6).distortion, 1.1);
  EXPECT_THROW(ScaleVsTvExample(0.3, 0.25), InvalidArgument);
  EXPECT_THROW(ScaleVsTvExample(0.1, 0.5), InvalidArgument);
}

TEST(MarginalExpansionTest, NoGrowthOnTwoInstances) {
  const ExplicitDistribution a(2, 2, {{1, 1}, {2, 2}}, {0.75, 0.25});
  const ExplicitDistribution b(3, 3, {{1, 2, 3}, {2, 2, 2}}, {0.7, 0.3});
  for (const auto* dist : {&a, &b}) {
    for (Mechanism m : {Mechanism::kUniform, Mechanism::kAbsorbing}) {
      const MarginalExpansionReport r = CheckMarginalExpansion(*dist, m);
      EXPECT_TRUE(r.Pass()) << r.SummaryJson().dump();
      EXPECT_FALSE(r.states.empty());
    }
  }
  EXPECT_THROW(CheckMarginalExpansion(a, Mechanism::kUniform, {0.1, 0.2}),
               InvalidArgument);
}

// Dropping one order from the leading term must be caught as growth.
TEST(MarginalExpansionTest, DetectsWrongOrder) {
  MarginalExpansionReport r;
  r.states.push_back({{1, 1}, 0, {1.0, 2.0, 4.0}});
  EXPECT_FALSE(r.Pass());
}

TEST(ParameterizationCheckTest, AllThreeParts) {
  const ParameterizationReport r = CheckParameterizations(5);
  EXPECT_EQ(r.absorbing_trials, 1000);
  EXPECT_LE(r.absorbing_max_gap, 1e-12);
  EXPECT_GT(r.uniform_max_gap, 1e-6);
  EXPECT_LE(r.entropy_gap_spread, 1e-8);
  EXPECT_EQ(r.entropy_gaps.size(), 3u);
  EXPECT_TRUE(r.Pass());
}

}  // namespace
}  // namespace dlmlab
