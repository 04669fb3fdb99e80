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

#ifndef DLMLAB_DISTRIBUTION_H_
#define DLMLAB_DISTRIBUTION_H_

#include <vector>

#include "dlmlab/types.h"
#include "json.hpp"

namespace dlmlab {

// A data distribution given by an enumerated support. Immutable once built.
class ExplicitDistribution {
 public:
  static constexpr double kNormTolerance = 1e-12;

  // Throws InvalidArgument unless the support is nonempty, distinct, mask
  // free, of length H over [1..K], and the probabilities are strictly
  // positive and sum to one within kNormTolerance.
  ExplicitDistribution(int vocab_size, int length,
                       std::vector<TokenSeq> support,
                       std::vector<double> probabilities);

  int vocab_size() const { return vocab_size_; }
  int length() const { return length_; }
  const std::vector<TokenSeq>& support() const { return support_; }
  const std::vector<double>& probabilities() const { return probabilities_; }
  std::size_t size() const { return support_.size(); }

  // Probability of `seq`; zero off the support.
  double Probability(const TokenSeq& seq) const;

  nlohmann::json ToJson() const;
  static ExplicitDistribution FromJson(const nlohmann::json& doc);

 private:
  int vocab_size_;
  int length_;
  std::vector<TokenSeq> support_;
  std::vector<double> probabilities_;
};

}  // namespace dlmlab

#endif  // DLMLAB_DISTRIBUTION_H_
