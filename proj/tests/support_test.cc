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

#include "dlmlab/support.h"

#include <gtest/gtest.h>

#include "oracles.h"

namespace dlmlab {
namespace {

ExplicitDistribution TwoPoint() {
  return ExplicitDistribution(2, 2, {{1, 1}, {2, 2}}, {0.75, 0.25});
}

TEST(SupportTest, WalkMembership) {
  const WalkLanguage lang(6, 4);
  EXPECT_TRUE(IsInSupport({3, 4, 4, 5}, lang));
  const WalkLanguage three(6, 3);
  EXPECT_FALSE(IsInSupport({1, 3, 3}, three));
  EXPECT_THROW(IsInSupport({1, kMask, 3}, three), InvalidArgument);
}

TEST(SupportTest, WalkDistances) {
  const WalkLanguage pair(4, 2);
  EXPECT_EQ(DistanceToSupport({1, 3}, pair), 1);
  EXPECT_EQ(DistanceToSupport({2, 3}, pair), 0);
  const WalkLanguage three(4, 3);
  EXPECT_EQ(DistanceToSupport({kMask, 2, kMask}, three), 2);
}

TEST(SupportTest, DpMatchesBruteForce) {
  for (int k : {2, 3, 5}) {
    for (int len : {2, 3, 4}) {
      const WalkLanguage lang(k, len);
      const auto support = oracle::WalkStrings(k, len);
      const ExplicitDistribution dist = lang.Enumerate();
      for (const auto& x : oracle::AllSeqs(len, 0, k)) {
        const int brute = oracle::BruteDistance(support, x);
        ASSERT_EQ(DistanceToSupport(x, lang), brute) << FormatSeq(x);
        const ProjectionResult walk = Projection(x, lang);
        const ProjectionResult expl = Projection(x, dist);
        ASSERT_EQ(walk.distance, brute);
        ASSERT_EQ(walk.witness_count, expl.witness_count);
        ASSERT_NEAR(walk.mass, expl.mass, 1e-12);
        ASSERT_GT(walk.mass, 0.0);
      }
    }
  }
}

TEST(SupportTest, ExplicitProjection) {
  const auto dist = TwoPoint();
  const ProjectionResult a = Projection({1, 2}, dist);
  EXPECT_EQ(a.distance, 1);
  EXPECT_DOUBLE_EQ(a.mass, 1.0);
  EXPECT_EQ(a.witness_count, 2u);
  const ProjectionResult b = Projection({1, 1}, dist);
  EXPECT_EQ(b.distance, 0);
  EXPECT_DOUBLE_EQ(b.mass, 0.75);
  EXPECT_EQ(b.witness_count, 1u);
  const ProjectionResult c = Projection({2, 1}, dist);
  EXPECT_EQ(c.distance, 1);
  EXPECT_DOUBLE_EQ(c.mass, 1.0);
}

TEST(SupportTest, ProjectionCap) {
  const WalkLanguage lang(10, 14);
  EXPECT_THROW(Projection(TokenSeq(14, 1), lang), CapacityError);
  EXPECT_NO_THROW(DistanceToSupport(TokenSeq(14, 1), lang));
}

TEST(SupportTest, ClassifyEdits) {
  const auto dist = TwoPoint();
  EXPECT_EQ(ClassifyEdit({1, 2}, 1, 1, dist).delta_d, -1);
  EXPECT_EQ(ClassifyEdit({1, 1}, 1, 2, dist).delta_d, 1);
  EXPECT_THROW(ClassifyEdit({1, 1}, 1, 1, dist), InvalidArgument);
  const WalkLanguage lang(3, 2);
  EXPECT_EQ(ClassifyEdit({kMask, 2}, 0, 1, lang).delta_d, -1);
}

TEST(SupportTest, EditsMoveDistanceByAtMostOne) {
  const WalkLanguage lang(4, 3);
  for (const auto& x : oracle::AllSeqs(3, 0, 4)) {
    for (int h = 0; h < 3; ++h) {
      for (Token y = 1; y <= 4; ++y) {
        if (y == x[h]) continue;
        const int dd = ClassifyEdit(x, h, y, lang).delta_d;
        ASSERT_LE(std::abs(dd), 1);
        if (x[h] == kMask) ASSERT_LE(dd, 0);
      }
    }
  }
}

}  // namespace
}  // namespace dlmlab
