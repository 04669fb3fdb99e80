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

#include "dlmlab/schedule.h"

#include <cmath>
#include <numbers>
#include <string>

namespace dlmlab {
namespace {

// Survival products in extended precision keep long schedules consistent
// to well below the 1e-12 tolerance.
std::vector<double> CumulativeLevels(const std::vector<double>& beta) {
  std::vector<double> sigma(beta.size());
  long double survive = 1.0L;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    survive *= 1.0L - static_cast<long double>(beta[i]);
    sigma[i] = static_cast<double>(1.0L - survive);
  }
  return sigma;
}

void CheckMonotone(const std::vector<double>& sigma) {
  double prev = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (!(sigma[i] > prev) || sigma[i] > 1.0) {
      throw InvalidArgument("noise levels must increase strictly within (0,1]"
                            " (step " + std::to_string(i + 1) + ")");
    }
    prev = sigma[i];
  }
}

}  // namespace

std::string_view ScheduleKindName(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kLinearCumulative:
      return "linear_cumulative";
    case ScheduleKind::kCosine:
      return "cosine";
    case ScheduleKind::kCustom:
      return "custom";
  }
  return "custom";
}

ScheduleKind ParseScheduleKind(std::string_view name) {
  if (name == "linear_cumulative" || name == "linear") {
    return ScheduleKind::kLinearCumulative;
  }
  if (name == "cosine") return ScheduleKind::kCosine;
  if (name == "custom") return ScheduleKind::kCustom;
  throw InvalidArgument("unknown schedule kind: " + std::string(name));
}

NoiseSchedule NoiseSchedule::FromBetas(std::vector<double> beta,
                                       ScheduleKind kind) {
  std::vector<double> sigma = CumulativeLevels(beta);
  return NoiseSchedule(kind, std::move(beta), std::move(sigma));
}

NoiseSchedule::NoiseSchedule(ScheduleKind kind, std::vector<double> beta,
                             std::vector<double> sigma)
    : kind_(kind), beta_(std::move(beta)), sigma_(std::move(sigma)) {
  if (beta_.empty()) throw InvalidArgument("schedule needs T >= 1");
  if (beta_.size() != sigma_.size()) {
    throw InvalidArgument("beta and sigma lengths differ");
  }
  for (double b : beta_) {
    if (!(b > 0.0 && b <= 1.0)) throw InvalidArgument("beta outside (0,1]");
  }
  CheckMonotone(sigma_);
  const std::vector<double> derived = CumulativeLevels(beta_);
  for (std::size_t i = 0; i < sigma_.size(); ++i) {
    if (std::abs(derived[i] - sigma_[i]) >= kConsistencyTolerance) {
      throw InvalidArgument("sigma inconsistent with beta at step " +
                            std::to_string(i + 1));
    }
  }
}

double NoiseSchedule::beta(int t) const {
  if (t < 1 || t > steps()) {
    throw InvalidArgument("step " + std::to_string(t) + " outside [1.." +
                          std::to_string(steps()) + "]");
  }
  return beta_[t - 1];
}

double NoiseSchedule::sigma(int t) const {
  if (t == 0) return 0.0;
  if (t < 0 || t > steps()) {
    throw InvalidArgument("step " + std::to_string(t) + " outside [0.." +
                          std::to_string(steps()) + "]");
  }
  return sigma_[t - 1];
}

nlohmann::json NoiseSchedule::ToJson() const {
  return nlohmann::json{{"kind", ScheduleKindName(kind_)},
                        {"T", steps()},
                        {"beta", beta_},
                        {"sigma", sigma_}};
}

NoiseSchedule NoiseSchedule::FromJson(const nlohmann::json& doc) {
  try {
    NoiseSchedule schedule(ParseScheduleKind(doc.at("kind").get<std::string>()),
                           doc.at("beta").get<std::vector<double>>(),
                           doc.at("sigma").get<std::vector<double>>());
    if (doc.contains("T") && doc.at("T").get<int>() != schedule.steps()) {
      throw InvalidArgument("schedule T does not match list lengths");
    }
    return schedule;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("schedule json: ") + e.what());
  }
}

NoiseSchedule MakeSchedule(ScheduleKind kind, int steps) {
  if (steps < 1) throw InvalidArgument("T must be positive");
  std::vector<double> beta(steps);
  std::vector<double> sigma(steps);
  switch (kind) {
    case ScheduleKind::kLinearCumulative:
      for (int t = 1; t <= steps; ++t) {
        beta[t - 1] = 1.0 / static_cast<double>(steps - t + 1);
        sigma[t - 1] = static_cast<double>(t) / steps;
      }
      return NoiseSchedule(kind, std::move(beta), std::move(sigma));
    case ScheduleKind::kCosine: {
      const double half_pi = std::numbers::pi / 2.0;
      double prev_keep = 1.0;
      for (int t = 1; t <= steps; ++t) {
        const double c = std::cos(half_pi * t / steps);
        const double keep = t == steps ? 0.0 : c * c;
        beta[t - 1] = 1.0 - keep / prev_keep;
        prev_keep = keep;
      }
      // Derive sigma from beta so the product identity holds by
      // construction rather than by cancellation.
      return NoiseSchedule::FromBetas(std::move(beta), kind);
    }
    case ScheduleKind::kCustom:
      break;
  }
  throw InvalidArgument("custom schedules are built from explicit betas");
}

int TimeIndexForSigma(const NoiseSchedule& schedule, double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw InvalidArgument("sigma must lie in (0,1)");
  }
  constexpr double kTieTolerance = 1e-12;
  int best = 1;
  double best_gap = std::abs(schedule.sigma(1) - sigma);
  for (int t = 2; t <= schedule.steps(); ++t) {
    const double gap = std::abs(schedule.sigma(t) - sigma);
    if (gap < best_gap - kTieTolerance) {
      best = t;
      best_gap = gap;
    }
  }
  return best;
}

int DiscretizationRule::MinSteps(double sigma) const {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw InvalidArgument("sigma must lie in (0,1)");
  }
  return static_cast<int>(std::ceil(c / (sigma * sigma) - 1e-9));
}

bool DiscretizationRule::Accepts(double sigma, int steps) const {
  return static_cast<double>(steps) * sigma * sigma >= c * (1.0 - 1e-12);
}

}  // namespace dlmlab
