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

#include "dlmlab/types.h"

#include <algorithm>
#include <limits>
#include <sstream>

namespace dlmlab {

std::string_view MechanismName(Mechanism mechanism) {
  return mechanism == Mechanism::kUniform ? "uniform" : "absorbing";
}

Mechanism ParseMechanism(std::string_view name) {
  if (name == "uniform") return Mechanism::kUniform;
  if (name == "absorbing" || name == "mask" || name == "masking") {
    return Mechanism::kAbsorbing;
  }
  throw InvalidArgument("unknown mechanism: " + std::string(name));
}

bool HasMask(const TokenSeq& seq) {
  return std::find(seq.begin(), seq.end(), kMask) != seq.end();
}

int CountMasks(const TokenSeq& seq) {
  return static_cast<int>(std::count(seq.begin(), seq.end(), kMask));
}

void CheckTokens(const TokenSeq& seq, int vocab_size, bool allow_mask) {
  for (Token token : seq) {
    if (token == kMask) {
      if (!allow_mask) {
        throw InvalidArgument("mask token not allowed in " + FormatSeq(seq));
      }
      continue;
    }
    if (token < 1 || token > vocab_size) {
      throw InvalidArgument("token " + std::to_string(token) +
                            " outside [1.." + std::to_string(vocab_size) +
                            "]");
    }
  }
}

std::string FormatSeq(const TokenSeq& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i > 0) out += ' ';
    out += seq[i] == kMask ? std::string("m") : std::to_string(seq[i]);
  }
  return out;
}

TokenSeq ParseSeq(std::string_view text) {
  TokenSeq seq;
  std::istringstream in{std::string(text)};
  std::string field;
  while (in >> field) {
    if (field == "m" || field == "M") {
      seq.push_back(kMask);
      continue;
    }
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(field, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("bad token '" + field + "'");
    }
    if (used != field.size()) throw InvalidArgument("bad token '" + field + "'");
    seq.push_back(value);
  }
  return seq;
}

std::uint64_t CheckedPow(std::uint64_t base, int exponent) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && result > kMax / base) return kMax;
    result *= base;
  }
  return result;
}

}  // namespace dlmlab
