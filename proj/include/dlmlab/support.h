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

// Hamming geometry of a sequence relative to the data support D.
//
// A masked position mismatches every clean token, so for absorbing states
// d(x, D) counts masks plus any disagreement on the unmasked part.
// Positions are 0-based throughout the library.

#ifndef DLMLAB_SUPPORT_H_
#define DLMLAB_SUPPORT_H_

#include <cstdint>

#include "dlmlab/distribution.h"
#include "dlmlab/types.h"
#include "dlmlab/walk_language.h"

namespace dlmlab {

struct ProjectionResult {
  int distance = 0;
  // p_data mass of all support points at exactly `distance`.
  double mass = 0.0;
  std::uint64_t witness_count = 0;
};

// Change in distance to D caused by a single-token edit; in {-1, 0, +1}.
struct EditClass {
  int delta_d = 0;
};

inline constexpr std::uint64_t kDefaultEnumerationLimit = 1'000'000;

bool IsInSupport(const TokenSeq& seq, const ExplicitDistribution& dist);
bool IsInSupport(const TokenSeq& seq, const WalkLanguage& lang);

int DistanceToSupport(const TokenSeq& seq, const ExplicitDistribution& dist);
// Dynamic program over (position, token).
int DistanceToSupport(const TokenSeq& seq, const WalkLanguage& lang);

ProjectionResult Projection(const TokenSeq& seq,
                            const ExplicitDistribution& dist);
// Throws CapacityError when K * 3^(H-1) exceeds `limit`.
ProjectionResult Projection(const TokenSeq& seq, const WalkLanguage& lang,
                            std::uint64_t limit = kDefaultEnumerationLimit);

// Replaces position `h` with clean token `y`. `y` must differ from the
// current token; a masked position may only be filled, never re-masked.
EditClass ClassifyEdit(const TokenSeq& seq, int h, Token y,
                       const ExplicitDistribution& dist);
EditClass ClassifyEdit(const TokenSeq& seq, int h, Token y,
                       const WalkLanguage& lang);

TokenSeq ApplyEdit(TokenSeq seq, int h, Token y);

}  // namespace dlmlab

#endif  // DLMLAB_SUPPORT_H_
