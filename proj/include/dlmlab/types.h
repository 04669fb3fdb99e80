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

#ifndef DLMLAB_TYPES_H_
#define DLMLAB_TYPES_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dlmlab {

// Clean tokens are 1..K. The mask sentinel sits outside the vocabulary.
using Token = int;
inline constexpr Token kMask = 0;

using TokenSeq = std::vector<Token>;

// Per-token probability vector indexed by token id; index 0 is the mask.
using TokenVector = std::vector<double>;

enum class Mechanism { kUniform, kAbsorbing };

std::string_view MechanismName(Mechanism mechanism);
Mechanism ParseMechanism(std::string_view name);

// Error taxonomy shared by every module.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Raised when an exact enumeration would exceed its configured budget.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool IsMasked(Token token) { return token == kMask; }

bool HasMask(const TokenSeq& seq);
int CountMasks(const TokenSeq& seq);

// Validates that every token is in [1..K], or additionally the mask when
// `allow_mask` is set. Throws InvalidArgument otherwise.
void CheckTokens(const TokenSeq& seq, int vocab_size, bool allow_mask);

std::string FormatSeq(const TokenSeq& seq);
TokenSeq ParseSeq(std::string_view text);

// Saturating integer power used for enumeration budgets.
std::uint64_t CheckedPow(std::uint64_t base, int exponent);

}  // namespace dlmlab

#endif  // DLMLAB_TYPES_H_
