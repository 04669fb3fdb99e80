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

#ifndef DLMLAB_SEEDING_H_
#define DLMLAB_SEEDING_H_

#include <cstdint>
#include <string_view>

namespace dlmlab {

// 64-bit FNV-1a.
std::uint64_t Fnv1a(std::string_view bytes,
                    std::uint64_t basis = 0xcbf29ce484222325ULL);

// Independent seed for a named stream ("train", "corrupt", "sample",
// "probe-negatives", ...) of a master seed, optionally indexed.
std::uint64_t DeriveSeed(std::uint64_t master, std::string_view stream,
                         std::uint64_t index = 0);

}  // namespace dlmlab

#endif  // DLMLAB_SEEDING_H_
