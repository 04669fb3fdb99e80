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

#include "dlmlab/walk_language.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dlmlab/support.h"
#include "oracles.h"

namespace dlmlab {
namespace {

TEST(WalkLanguageTest, StepProbsAtLowBoundary) {
  const WalkLanguage lang(64, 4);
  const StepProbs p = lang.TransitionProbs(1);
  EXPECT_EQ(p.down, 0.0);
  // Independent evaluation of the weight formulas at v = 1.
  const double u = 0.45 * std::exp(std::sin(1.37));
  const double s = 0.2 * std::exp(std::sin(0.11));
  const double d = 0.35 * std::exp(std::cos(-0.29));
  EXPECT_NEAR(p.up, u / (u + s + d), 1e-12);
  EXPECT_NEAR(p.up, 0.513, 1e-3);
  EXPECT_NEAR(p.stay, 0.487, 1e-3);
  EXPECT_EQ(lang.Transition(1, 3), 0.0);
}

TEST(WalkLanguageTest, RowsAreStochasticAndPositive) {
  const WalkLanguage lang(12, 3);
  for (Token v = 1; v <= 12; ++v) {
    const StepProbs p = lang.TransitionProbs(v);
    EXPECT_NEAR(p.down + p.stay + p.up, 1.0, 1e-12);
    EXPECT_GT(p.stay, 0.0);
    if (v > 1) EXPECT_GT(p.down, 0.0);
    if (v < 12) EXPECT_GT(p.up, 0.0);
  }
  EXPECT_THROW(lang.TransitionProbs(13), InvalidArgument);
  EXPECT_THROW(WalkLanguage(1, 3), InvalidArgument);
}

TEST(WalkLanguageTest, SamplesStayInSupportAndMatchRates) {
  const WalkLanguage lang(8, 6);
  std::mt19937_64 rng(7);
  std::vector<int> first(9, 0);
  std::vector<int> from4(3, 0);
  int from4_total = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const TokenSeq s = lang.Sample(rng);
    ASSERT_TRUE(IsInSupport(s, lang));
    ++first[s[0]];
    for (int h = 1; h < 6; ++h) {
      if (s[h - 1] != 4) continue;
      ++from4[s[h] - 3];
      ++from4_total;
    }
  }
  double chi2 = 0.0;
  for (Token v = 1; v <= 8; ++v) {
    const double e = draws / 8.0;
    chi2 += (first[v] - e) * (first[v] - e) / e;
  }
  EXPECT_LT(chi2, 24.3);  // 7 dof, p = 0.001
  const StepProbs p = lang.TransitionProbs(4);
  EXPECT_NEAR(static_cast<double>(from4[0]) / from4_total, p.down, 0.01);
  EXPECT_NEAR(static_cast<double>(from4[1]) / from4_total, p.stay, 0.01);
  EXPECT_NEAR(static_cast<double>(from4[2]) / from4_total, p.up, 0.01);
  EXPECT_EQ(lang.Sample(99), lang.Sample(99));
}

TEST(WalkLanguageTest, CenterConditional) {
  const WalkLanguage lang(6, 3);
  const auto bridge = lang.CenterConditional(1, 3);
  ASSERT_TRUE(bridge.has_value());
  EXPECT_NEAR((*bridge)[2], 1.0, 1e-15);
  EXPECT_FALSE(lang.CenterConditional(1, 4).has_value());
  const auto same = lang.CenterConditional(4, 4);
  ASSERT_TRUE(same.has_value());
  double total = 0.0;
  for (Token a = 1; a <= 6; ++a) {
    if (a < 3 || a > 5) EXPECT_EQ((*same)[a], 0.0);
    total += (*same)[a];
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  // Against the definition.
  double den = 0.0;
  for (Token b = 1; b <= 6; ++b) den += lang.Transition(4, b) * lang.Transition(b, 4);
  EXPECT_NEAR((*same)[3], lang.Transition(4, 3) * lang.Transition(3, 4) / den,
              1e-14);
}

TEST(WalkLanguageTest, EnumerationMatchesPairRule) {
  const WalkLanguage lang(5, 4);
  const ExplicitDistribution dist = lang.Enumerate();
  const auto brute = oracle::WalkStrings(5, 4);
  EXPECT_EQ(dist.size(), brute.size());
  double total = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    total += dist.probabilities()[i];
    EXPECT_NEAR(dist.probabilities()[i], lang.Probability(dist.support()[i]),
                1e-14);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  for (const auto& s : oracle::AllSeqs(4, 1, 5)) {
    const bool in = std::find(brute.begin(), brute.end(), s) != brute.end();
    EXPECT_EQ(lang.Contains(s), in);
  }
  EXPECT_THROW(WalkLanguage(10, 12).Enumerate(1000), CapacityError);
}

TEST(WalkLanguageTest, CorpusRoundTrip) {
  const WalkLanguage lang(5, 4);
  const auto corpus = SampleCorpus(lang, 20, 3);
  std::stringstream buf;
  WriteCorpus(buf, corpus);
  EXPECT_EQ(ReadCorpus(buf), corpus);
  const WalkLanguage back = WalkLanguage::FromJson(lang.ToJson());
  EXPECT_EQ(back.vocab_size(), 5);
  EXPECT_EQ(back.Transition(2, 3), lang.Transition(2, 3));
}

}  // namespace
}  // namespace dlmlab
