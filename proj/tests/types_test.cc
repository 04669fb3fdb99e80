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

#include "dlmlab/distribution.h"
#include "dlmlab/types.h"

#include <gtest/gtest.h>

namespace dlmlab {
namespace {

TEST(TypesTest, ParseAndFormatRoundTrip) {
  const TokenSeq seq = ParseSeq("1 m 3");
  EXPECT_EQ(seq, (TokenSeq{1, kMask, 3}));
  EXPECT_EQ(FormatSeq(seq), "1 m 3");
  EXPECT_EQ(CountMasks(seq), 1);
  EXPECT_TRUE(HasMask(seq));
}

TEST(TypesTest, CheckTokensRejectsMaskUnlessAllowed) {
  EXPECT_THROW(CheckTokens({1, kMask}, 2, false), InvalidArgument);
  EXPECT_NO_THROW(CheckTokens({1, kMask}, 2, true));
  EXPECT_THROW(CheckTokens({3}, 2, true), InvalidArgument);
}

TEST(TypesTest, MechanismNames) {
  EXPECT_EQ(ParseMechanism(MechanismName(Mechanism::kUniform)),
            Mechanism::kUniform);
  EXPECT_EQ(ParseMechanism("absorbing"), Mechanism::kAbsorbing);
  EXPECT_THROW(ParseMechanism("gaussian"), InvalidArgument);
}

TEST(TypesTest, CheckedPowSaturates) {
  EXPECT_EQ(CheckedPow(3, 4), 81u);
  EXPECT_EQ(CheckedPow(10, 40), UINT64_MAX);
}

TEST(DistributionTest, ValidatesAndRoundTrips) {
  const ExplicitDistribution dist(2, 2, {{1, 1}, {2, 2}}, {0.75, 0.25});
  EXPECT_DOUBLE_EQ(dist.Probability({1, 1}), 0.75);
  EXPECT_DOUBLE_EQ(dist.Probability({1, 2}), 0.0);
  const ExplicitDistribution back = ExplicitDistribution::FromJson(dist.ToJson());
  EXPECT_EQ(back.support(), dist.support());
  EXPECT_EQ(back.probabilities(), dist.probabilities());
  EXPECT_EQ(dist.ToJson()["prob"].size(), 2u);
}

TEST(DistributionTest, RejectsBadInput) {
  EXPECT_THROW(ExplicitDistribution(2, 2, {{1, 1}, {1, 1}}, {0.5, 0.5}),
               InvalidArgument);
  EXPECT_THROW(ExplicitDistribution(2, 2, {{1, 1}}, {0.9}), InvalidArgument);
  EXPECT_THROW(ExplicitDistribution(2, 2, {{1, kMask}}, {1.0}),
               InvalidArgument);
  EXPECT_THROW(ExplicitDistribution(2, 2, {{1, 1}, {2, 2}}, {1.0, 0.0}),
               InvalidArgument);
}

}  // namespace
}  // namespace dlmlab
