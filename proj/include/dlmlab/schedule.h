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

#ifndef DLMLAB_SCHEDULE_H_
#define DLMLAB_SCHEDULE_H_

#include <string_view>
#include <vector>

#include "dlmlab/types.h"
#include "json.hpp"

namespace dlmlab {

enum class ScheduleKind { kLinearCumulative, kCosine, kCustom };

std::string_view ScheduleKindName(ScheduleKind kind);
ScheduleKind ParseScheduleKind(std::string_view name);

// Per-step noise rates beta_t and cumulative levels
// sigma_t = 1 - prod_{s<=t} (1 - beta_s), for t = 1..T.
//
// Steps are 1-based. sigma(0) is the clean level 0 so that reverse steps
// at t = 1 can be written uniformly.
class NoiseSchedule {
 public:
  static constexpr double kConsistencyTolerance = 1e-12;

  // Builds from per-step rates; sigma is derived. Throws InvalidArgument
  // when a rate is outside (0, 1] or the derived levels do not increase.
  static NoiseSchedule FromBetas(std::vector<double> beta,
                                 ScheduleKind kind = ScheduleKind::kCustom);

  // Builds from both lists and validates their consistency.
  NoiseSchedule(ScheduleKind kind, std::vector<double> beta,
                std::vector<double> sigma);

  ScheduleKind kind() const { return kind_; }
  int steps() const { return static_cast<int>(beta_.size()); }

  double beta(int t) const;
  double sigma(int t) const;

  const std::vector<double>& betas() const { return beta_; }
  const std::vector<double>& sigmas() const { return sigma_; }

  nlohmann::json ToJson() const;
  static NoiseSchedule FromJson(const nlohmann::json& doc);

 private:
  ScheduleKind kind_;
  std::vector<double> beta_;
  std::vector<double> sigma_;
};

// linear_cumulative: sigma_t = t/T, beta_t = 1/(T-t+1).
// cosine: sigma_t = 1 - cos^2(pi t / 2T), beta_t from the product identity.
NoiseSchedule MakeSchedule(ScheduleKind kind, int steps);

// argmin_s |sigma_s - sigma|, ties toward the smaller index. `sigma` must
// lie strictly inside (0, 1).
int TimeIndexForSigma(const NoiseSchedule& schedule, double sigma);

// Fine-discretization rule for small-noise checks: a (sigma, T) pair is
// accepted when T >= c / sigma^2.
struct DiscretizationRule {
  double c = 4.0;

  int MinSteps(double sigma) const;
  bool Accepts(double sigma, int steps) const;
};

}  // namespace dlmlab

#endif  // DLMLAB_SCHEDULE_H_
