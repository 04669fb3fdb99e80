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

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

namespace dlmlab {
namespace {

int Hamming(const TokenSeq& a, const TokenSeq& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i] ? 1 : 0;
  return d;
}

void CheckLength(const TokenSeq& seq, int length) {
  if (static_cast<int>(seq.size()) != length) {
    throw InvalidArgument("sequence " + FormatSeq(seq) + " has length " +
                          std::to_string(seq.size()) + ", expected " +
                          std::to_string(length));
  }
}

struct Cell {
  int cost = std::numeric_limits<int>::max();
  double mass = 0.0;
  std::uint64_t count = 0;
};

// Forward DP over the walk's allowed transitions. Cell (h, v) holds the
// minimal mismatch count of a support prefix ending in v, together with
// the probability mass and number of prefixes attaining it.
std::vector<Cell> WalkDp(const TokenSeq& seq, const WalkLanguage& lang) {
  const int k = lang.vocab_size();
  std::vector<Cell> prev(k + 1), next(k + 1);
  for (Token v = 1; v <= k; ++v) {
    prev[v] = {seq[0] != v ? 1 : 0, 1.0 / k, 1};
  }
  for (std::size_t h = 1; h < seq.size(); ++h) {
    for (Token v = 1; v <= k; ++v) {
      Cell best;
      for (Token u = std::max(1, v - 1); u <= std::min(k, v + 1); ++u) {
        const Cell& c = prev[u];
        const double w = c.mass * lang.Transition(u, v);
        if (c.cost < best.cost) {
          best = {c.cost, w, c.count};
        } else if (c.cost == best.cost) {
          best.mass += w;
          best.count += c.count;
        }
      }
      best.cost += seq[h] != v ? 1 : 0;
      next[v] = best;
    }
    std::swap(prev, next);
  }
  return prev;
}

ProjectionResult Collapse(const std::vector<Cell>& last) {
  ProjectionResult out;
  out.distance = std::numeric_limits<int>::max();
  for (std::size_t v = 1; v < last.size(); ++v) {
    if (last[v].cost < out.distance) {
      out = {last[v].cost, last[v].mass, last[v].count};
    } else if (last[v].cost == out.distance) {
      out.mass += last[v].mass;
      out.witness_count += last[v].count;
    }
  }
  return out;
}

void CheckEdit(const TokenSeq& seq, int h, Token y, int vocab_size) {
  if (h < 0 || h >= static_cast<int>(seq.size())) {
    throw InvalidArgument("edit position " + std::to_string(h) +
                          " out of range");
  }
  if (y == seq[h]) throw InvalidArgument("edit must change the token");
  if (y < 1 || y > vocab_size) {
    throw InvalidArgument("edit target must be a clean token");
  }
}

}  // namespace

bool IsInSupport(const TokenSeq& seq, const ExplicitDistribution& dist) {
  if (HasMask(seq)) throw InvalidArgument("membership of a masked sequence");
  return dist.Probability(seq) > 0.0;
}

bool IsInSupport(const TokenSeq& seq, const WalkLanguage& lang) {
  if (HasMask(seq)) throw InvalidArgument("membership of a masked sequence");
  return lang.Contains(seq);
}

int DistanceToSupport(const TokenSeq& seq, const ExplicitDistribution& dist) {
  CheckLength(seq, dist.length());
  if (dist.size() == 0) throw InvalidState("empty support");
  int best = std::numeric_limits<int>::max();
  for (const TokenSeq& z : dist.support()) best = std::min(best, Hamming(seq, z));
  return best;
}

int DistanceToSupport(const TokenSeq& seq, const WalkLanguage& lang) {
  CheckLength(seq, lang.length());
  CheckTokens(seq, lang.vocab_size(), /*allow_mask=*/true);
  const std::vector<Cell> last = WalkDp(seq, lang);
  int best = std::numeric_limits<int>::max();
  for (std::size_t v = 1; v < last.size(); ++v) best = std::min(best, last[v].cost);
  return best;
}

ProjectionResult Projection(const TokenSeq& seq,
                            const ExplicitDistribution& dist) {
  CheckLength(seq, dist.length());
  if (dist.size() == 0) throw InvalidState("empty support");
  ProjectionResult out;
  out.distance = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const int d = Hamming(seq, dist.support()[i]);
    if (d < out.distance) {
      out = {d, dist.probabilities()[i], 1};
    } else if (d == out.distance) {
      out.mass += dist.probabilities()[i];
      ++out.witness_count;
    }
  }
  out.mass = std::min(out.mass, 1.0);
  return out;
}

ProjectionResult Projection(const TokenSeq& seq, const WalkLanguage& lang,
                            std::uint64_t limit) {
  CheckLength(seq, lang.length());
  CheckTokens(seq, lang.vocab_size(), /*allow_mask=*/true);
  if (lang.EnumerationSize() > limit) {
    throw CapacityError("projection over " +
                        std::to_string(lang.EnumerationSize()) +
                        " walk strings exceeds limit " + std::to_string(limit));
  }
  ProjectionResult out = Collapse(WalkDp(seq, lang));
  out.mass = std::min(out.mass, 1.0);
  return out;
}

TokenSeq ApplyEdit(TokenSeq seq, int h, Token y) {
  seq.at(h) = y;
  return seq;
}

EditClass ClassifyEdit(const TokenSeq& seq, int h, Token y,
                       const ExplicitDistribution& dist) {
  CheckEdit(seq, h, y, dist.vocab_size());
  return {DistanceToSupport(ApplyEdit(seq, h, y), dist) -
          DistanceToSupport(seq, dist)};
}

EditClass ClassifyEdit(const TokenSeq& seq, int h, Token y,
                       const WalkLanguage& lang) {
  CheckEdit(seq, h, y, lang.vocab_size());
  return {DistanceToSupport(ApplyEdit(seq, h, y), lang) -
          DistanceToSupport(seq, lang)};
}

}  // namespace dlmlab
