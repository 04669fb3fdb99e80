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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dlmlab/corruption.h"
#include "oracles.h"

namespace dlmlab {
namespace {

ExplicitDistribution ThreeByThree() {
  return ExplicitDistribution(3, 3, {{1, 2, 3}, {2, 2, 2}, {3, 1, 1}},
                              {0.5, 0.3, 0.2});
}

PosteriorTable RandomPosterior(int len, int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  PosteriorTable out(len, TokenVector(k + 1, 0.0));
  for (auto& row : out) {
    double total = 0.0;
    for (int v = 1; v <= k; ++v) total += row[v] = u(rng);
    for (int v = 1; v <= k; ++v) row[v] /= total;
  }
  return out;
}

TEST(KernelFromPosteriorTest, BayesWithExactPosteriorIsExactKernel) {
  const auto dist = ThreeByThree();
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kCosine, 6);
  for (Mechanism m : {Mechanism::kUniform, Mechanism::kAbsorbing}) {
    for (int t = 1; t <= 6; ++t) {
      for (const TokenSeq& x : EnumerateStates(dist, m)) {
        if (MarginalExact(dist, s, t, x, m) == 0.0) continue;
        const auto bayes = KernelFromPosterior(PosteriorExact(dist, s, t, x, m),
                                               x, t, s, m, Parameterization::kBayes);
        for (int h = 0; h < 3; ++h) {
          const TokenVector exact = ReverseTokenKernelExact(dist, s, t, x, h, m);
          for (Token y = 0; y <= 3; ++y) {
            ASSERT_NEAR(bayes[h][y], exact[y], 1e-10) << FormatSeq(x);
          }
        }
      }
    }
  }
}

TEST(KernelFromPosteriorTest, AbsorbingChoicesCoincide) {
  std::mt19937_64 rng(11);
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 12);
  const TokenSeq x{kMask, 2, kMask, kMask};
  for (int trial = 0; trial < 20; ++trial) {
    const PosteriorTable post = RandomPosterior(4, 3, rng);
    for (int t = 1; t <= 12; ++t) {
      const auto a = KernelFromPosterior(post, x, t, s, Mechanism::kAbsorbing,
                                         Parameterization::kBayes);
      const auto b = KernelFromPosterior(post, x, t, s, Mechanism::kAbsorbing,
                                         Parameterization::kD3pm);
      const auto c = KernelFromPosterior(post, x, t, s, Mechanism::kAbsorbing,
                                         Parameterization::kSubs);
      for (int h = 0; h < 4; ++h) {
        double total = 0.0;
        for (Token y = 0; y <= 3; ++y) {
          ASSERT_NEAR(a[h][y], b[h][y], 1e-12);
          ASSERT_NEAR(a[h][y], c[h][y], 1e-12);
          total += c[h][y];
        }
        ASSERT_NEAR(total, 1.0, 1e-12);
      }
      EXPECT_EQ(c[1][2], 1.0);
    }
  }
}

TEST(KernelFromPosteriorTest, UniformBayesAndD3pmCanDiffer) {
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 4);
  double gap = 0.0;
  for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const PosteriorTable post{{0.0, p, 1.0 - p}, {0.0, 1.0 - p, p}};
    for (const auto& x : oracle::AllSeqs(2, 1, 2)) {
      for (int t = 2; t <= 4; ++t) {
        const auto a = KernelFromPosterior(post, x, t, s, Mechanism::kUniform,
                                           Parameterization::kBayes);
        const auto b = KernelFromPosterior(post, x, t, s, Mechanism::kUniform,
                                           Parameterization::kD3pm);
        for (int h = 0; h < 2; ++h) {
          for (Token y = 1; y <= 2; ++y) gap = std::max(gap, std::abs(a[h][y] - b[h][y]));
        }
      }
    }
  }
  EXPECT_GT(gap, 1e-6);
}

TEST(KernelFromPosteriorTest, SubsStayMassAndErrors) {
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 10);
  const PosteriorTable post{{0.0, 0.5, 0.5}};
  const auto k = KernelFromPosterior(post, {kMask}, 2, s, Mechanism::kAbsorbing,
                                     Parameterization::kSubs);
  EXPECT_NEAR(k[0][kMask], 0.5, 1e-15);
  EXPECT_THROW(KernelFromPosterior(post, {1}, 2, s, Mechanism::kUniform,
                                   Parameterization::kSubs),
               InvalidArgument);
  const PosteriorTable bad{{0.0, 0.5, 0.6}};
  EXPECT_THROW(KernelFromPosterior(bad, {kMask}, 2, s, Mechanism::kAbsorbing,
                                   Parameterization::kBayes),
               InvalidArgument);
}

TEST(MaskedCeTest, PlugInValues) {
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 10);
  const ExplicitDistribution det(4, 2, {{3, 1}}, {1.0});
  const PosteriorFn oracle_model = ExactPosteriorModel(det, s, Mechanism::kAbsorbing);
  const std::vector<MaskedExample> batch{{{3, 1}, {kMask, 1}, 3},
                                         {{3, 1}, {kMask, kMask}, 7}};
  EXPECT_NEAR(WeightedMaskedCe(oracle_model, batch, s).value, 0.0, 1e-15);

  const PosteriorFn flat = [](const TokenSeq& x, int) {
    return PosteriorTable(x.size(), TokenVector{0.0, 0.25, 0.25, 0.25, 0.25});
  };
  const std::vector<MaskedExample> one{{{3, 1}, {kMask, 1}, 3}};
  EXPECT_NEAR(WeightedMaskedCe(flat, one, s).value,
              MaskedCeWeight(s, 3) * std::log(4.0), 1e-14);
  EXPECT_NEAR(MaskedCeWeight(s, 3), (0.3 - 0.2) / 0.3, 1e-15);

  double last = std::numeric_limits<double>::infinity();
  for (double mass : {0.1, 0.3, 0.6, 0.9}) {
    const PosteriorFn m = [mass](const TokenSeq& x, int) {
      const double rest = (1.0 - mass) / 3.0;
      return PosteriorTable(x.size(), TokenVector{0.0, rest, rest, mass, rest});
    };
    const double v = WeightedMaskedCe(m, one, s).value;
    EXPECT_LT(v, last);
    last = v;
  }

  const PosteriorFn wrong = [](const TokenSeq& x, int) {
    return PosteriorTable(x.size(), TokenVector{0.0, 1.0, 0.0, 0.0, 0.0});
  };
  const LossValue inf = WeightedMaskedCe(wrong, one, s);
  EXPECT_TRUE(inf.infinite);
  EXPECT_TRUE(std::isinf(inf.value));
}

TEST(InducedScoreTest, Values) {
  const TokenVector row{0.0, 0.2, 0.8};
  EXPECT_EQ(InducedScore(row, 0.5), row);
  const TokenVector s = InducedScore(row, 0.2);
  EXPECT_NEAR(s[1] + s[2], 4.0, 1e-15);
  EXPECT_THROW(InducedScore(row, 0.0), InvalidArgument);
  EXPECT_THROW(InducedScore(row, 1.0), InvalidArgument);
}

TEST(InducedScoreTest, TruePosteriorGivesConcreteScore) {
  const auto dist = ThreeByThree();
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 8);
  for (int t = 1; t < 8; ++t) {
    for (const TokenSeq& x : EnumerateStates(dist, Mechanism::kAbsorbing)) {
      const auto score = InducedScore(
          PosteriorExact(dist, s, t, x, Mechanism::kAbsorbing), x, s.sigma(t));
      for (int h = 0; h < 3; ++h) {
        if (x[h] != kMask) continue;
        for (Token j = 1; j <= 3; ++j) {
          ASSERT_NEAR(score[h][j],
                      ConcreteScore(dist, s, t, x, h, j, Mechanism::kAbsorbing),
                      1e-8);
        }
      }
    }
  }
}

TEST(ScoreEntropyTest, GapToMaskedCeDoesNotDependOnModel) {
  const auto dist = ThreeByThree();
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 6);
  const int last = LastFiniteRateStep(s);
  EXPECT_EQ(last, 5);
  const PosteriorFn exact = ExactPosteriorModel(dist, s, Mechanism::kAbsorbing);
  const PosteriorFn smooth = [&](const TokenSeq& x, int t) {
    PosteriorTable p = exact(x, t);
    for (auto& row : p) {
      for (int v = 1; v <= 3; ++v) row[v] = 0.7 * row[v] + 0.1;
    }
    return p;
  };
  const double gap_a = ExactScoreEntropy(exact, dist, s).value -
                       ExactMaskedCe(exact, dist, s, last).value;
  const double gap_b = ExactScoreEntropy(smooth, dist, s).value -
                       ExactMaskedCe(smooth, dist, s, last).value;
  EXPECT_NEAR(gap_a, gap_b, 1e-8);
  EXPECT_GT(ExactMaskedCe(smooth, dist, s, last).value,
            ExactMaskedCe(exact, dist, s, last).value);
}

TEST(DenoisingKlTest, ExactKernelIsMinimal) {
  const auto dist = ThreeByThree();
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 5);
  for (Mechanism m : {Mechanism::kUniform, Mechanism::kAbsorbing}) {
    const KernelFn exact = ExactKernelModel(dist, s, m);
    for (int t = 1; t <= 5; ++t) {
      const LossValue base = DenoisingKlTerm(exact, dist, s, t, m);
      ASSERT_FALSE(base.infinite);
      ASSERT_GE(base.value, -1e-12);
      const KernelFn nudged = [&](const TokenSeq& x, int step) {
        auto k = exact(x, step);
        for (auto& row : k) {
          double total = 0.0;
          for (double& v : row) total += v = 0.9 * v + (v > 0.0 ? 0.1 / 3 : 0.0);
          for (double& v : row) v /= total;
        }
        return k;
      };
      EXPECT_GT(DenoisingKlTerm(nudged, dist, s, t, m).value, base.value);
    }
  }
}

TEST(DenoisingKlTest, DeterministicDataHasZeroTerm) {
  const ExplicitDistribution one(2, 2, {{1, 2}}, {1.0});
  const NoiseSchedule s = MakeSchedule(ScheduleKind::kCosine, 4);
  for (Mechanism m : {Mechanism::kUniform, Mechanism::kAbsorbing}) {
    const KernelFn exact = ExactKernelModel(one, s, m);
    for (int t = 1; t <= 4; ++t) {
      EXPECT_NEAR(DenoisingKlTerm(exact, one, s, t, m).value, 0.0, 1e-12);
    }
  }
  const KernelFn blind = [](const TokenSeq& x, int) {
    return std::vector<TokenVector>(x.size(), TokenVector{0.0, 0.0, 1.0});
  };
  EXPECT_TRUE(DenoisingKlTerm(blind, one, s, 1, Mechanism::kUniform).infinite);
}

}  // namespace
}  // namespace dlmlab
