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

#include <cmath>
#include <set>
#include <string>

namespace dlmlab {

ExplicitDistribution::ExplicitDistribution(int vocab_size, int length,
                                           std::vector<TokenSeq> support,
                                           std::vector<double> probabilities)
    : vocab_size_(vocab_size),
      length_(length),
      support_(std::move(support)),
      probabilities_(std::move(probabilities)) {
  if (vocab_size_ < 1) throw InvalidArgument("K must be positive");
  if (length_ < 1) throw InvalidArgument("H must be positive");
  if (support_.empty()) throw InvalidArgument("empty support");
  if (support_.size() != probabilities_.size()) {
    throw InvalidArgument("support and probability lengths differ");
  }
  std::set<TokenSeq> seen;
  double total = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    const TokenSeq& seq = support_[i];
    if (static_cast<int>(seq.size()) != length_) {
      throw InvalidArgument("support entry " + FormatSeq(seq) +
                            " has wrong length");
    }
    CheckTokens(seq, vocab_size_, /*allow_mask=*/false);
    if (!seen.insert(seq).second) {
      throw InvalidArgument("duplicate support entry " + FormatSeq(seq));
    }
    if (!(probabilities_[i] > 0.0) || !std::isfinite(probabilities_[i])) {
      throw InvalidArgument("probabilities must be strictly positive");
    }
    total += probabilities_[i];
  }
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw InvalidArgument("probabilities sum to " + std::to_string(total));
  }
}

double ExplicitDistribution::Probability(const TokenSeq& seq) const {
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (support_[i] == seq) return probabilities_[i];
  }
  return 0.0;
}

nlohmann::json ExplicitDistribution::ToJson() const {
  return nlohmann::json{{"K", vocab_size_},
                        {"H", length_},
                        {"support", support_},
                        {"prob", probabilities_}};
}

ExplicitDistribution ExplicitDistribution::FromJson(const nlohmann::json& doc) {
  try {
    return ExplicitDistribution(doc.at("K").get<int>(), doc.at("H").get<int>(),
                                doc.at("support").get<std::vector<TokenSeq>>(),
                                doc.at("prob").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("distribution json: ") + e.what());
  }
}

}  // namespace dlmlab
