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

#include "dlmlab/seeding.h"

#include <array>
#include <random>

namespace dlmlab {

std::uint64_t Fnv1a(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t DeriveSeed(std::uint64_t master, std::string_view stream,
                         std::uint64_t index) {
  const std::uint64_t tag = Fnv1a(stream);
  std::seed_seq seq{static_cast<std::uint32_t>(master),
                    static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(tag),
                    static_cast<std::uint32_t>(tag >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace dlmlab
