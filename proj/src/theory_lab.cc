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

#include "dlmlab/theory_lab.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <tuple>

#include "dlmlab/corruption.h"
#include "dlmlab/seeding.h"
#include "dlmlab/support.h"

namespace dlmlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<TokenSeq> FitStates(const ExplicitDistribution& dist,
                                Mechanism mechanism) {
  std::vector<TokenSeq> states = EnumerateStates(dist, mechanism);
  if (mechanism == Mechanism::kAbsorbing) {
    std::erase_if(states, [](const TokenSeq& x) { return !HasMask(x); });
  }
  return states;
}

void CheckSigma(double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw InvalidArgument("sigma " + std::to_string(sigma) +
                          " outside (0, 1)");
  }
}

double ProjectionRatio(const ExplicitDistribution& dist, const TokenSeq& x,
                       int h, Token y) {
  return Projection(ApplyEdit(x, h, y), dist).mass / Projection(x, dist).mass;
}

nlohmann::json FiniteOrString(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

double EditFit::ExponentError() const {
  if (std::isinf(target_exponent)) return zero ? 0.0 : kInf;
  if (zero) return kInf;
  return std::abs(fitted_exponent - target_exponent);
}

double EditFit::CoefficientError() const {
  if (std::isinf(target_exponent)) return zero ? 0.0 : kInf;
  if (zero) return kInf;
  return std::abs(fitted_coefficient / coefficient_target - 1.0);
}

double RateSeparationReport::MaxExponentError() const {
  double worst = 0.0;
  for (const EditFit& e : edits) worst = std::max(worst, e.ExponentError());
  return worst;
}

double RateSeparationReport::MaxCoefficientError() const {
  double worst = 0.0;
  for (const EditFit& e : edits) worst = std::max(worst, e.CoefficientError());
  return worst;
}

double RateSeparationReport::MaxZeroMass() const {
  double worst = 0.0;
  if (mechanism != Mechanism::kAbsorbing) return worst;
  for (const EditFit& e : edits) {
    if (e.delta_d != 0) continue;
    for (std::size_t i = 0; i < e.scores.size(); ++i) {
      worst = std::max(worst, e.scores[i] * rates[i]);
    }
  }
  return worst;
}

std::vector<int> RateSeparationReport::ClassCounts() const {
  std::vector<int> counts(3, 0);
  for (const EditFit& e : edits) ++counts[e.delta_d + 1];
  return counts;
}

bool RateSeparationReport::Pass() const {
  for (const EditFit& e : edits) {
    if (std::isinf(e.target_exponent)) continue;
    if (e.ExponentError() > config.slope_tolerance) return false;
    if (e.CoefficientError() > config.coefficient_tolerance) return false;
  }
  return MaxZeroMass() <= config.zero_tolerance &&
         std::all_of(edits.begin(), edits.end(), [](const EditFit& e) {
           return !std::isinf(e.target_exponent) || e.zero;
         });
}

nlohmann::json RateSeparationReport::SummaryJson() const {
  const std::vector<int> counts = ClassCounts();
  nlohmann::json doc;
  doc["mechanism"] = std::string(MechanismName(mechanism));
  doc["K"] = vocab_size;
  doc["sigma_grid"] = sigma_grid;
  doc["realized_sigma"] = realized_sigma;
  doc["T"] = steps;
  doc["edits"] = edits.size();
  doc["edits_by_delta_d"] = {{"-1", counts[0]}, {"0", counts[1]}, {"+1", counts[2]}};
  doc["max_exponent_error"] = FiniteOrString(MaxExponentError());
  doc["max_coefficient_error"] = FiniteOrString(MaxCoefficientError());
  doc["max_zero_mass"] = MaxZeroMass();
  doc["tolerances"] = {{"slope", config.slope_tolerance},
                       {"coefficient", config.coefficient_tolerance},
                       {"zero_mass", config.zero_tolerance},
                       {"discretization_c", config.rule.c}};
  doc["pass"] = Pass();
  return doc;
}

void WriteRateSeparationCsv(std::ostream& out,
                            const RateSeparationReport& report) {
  out << "state,h,y,delta_d,fitted_exponent,target_exponent,"
         "fitted_coefficient,coefficient_target";
  const auto old_precision = out.precision(10);
  for (double s : report.sigma_grid) out << ",score_sigma_" << s;
  out << '\n';
  out.precision(17);
  for (const EditFit& e : report.edits) {
    out << FormatSeq(e.state) << ',' << e.h << ',' << e.y << ',' << e.delta_d
        << ',';
    if (e.zero) {
      out << "inf";
    } else {
      out << e.fitted_exponent;
    }
    out << ',';
    if (std::isinf(e.target_exponent)) {
      out << "inf";
    } else {
      out << e.target_exponent;
    }
    out << ',' << e.fitted_coefficient << ',' << e.coefficient_target;
    for (double s : e.scores) out << ',' << s;
    out << '\n';
  }
  out.precision(old_precision);
}

LineFit FitLine(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("line fit needs two or more paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("line fit on constant abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

RateSeparationReport VerifyRateSeparation(const ExplicitDistribution& dist,
                                          Mechanism mechanism,
                                          const RateSeparationConfig& config) {
  const std::vector<double>& grid = config.sigma_grid;
  if (grid.size() < 3) {
    throw InvalidArgument("sigma grid needs at least three points");
  }
  if (!config.steps.empty() && config.steps.size() != grid.size()) {
    throw InvalidArgument("steps list must match the sigma grid");
  }
  RateSeparationReport report;
  report.mechanism = mechanism;
  report.vocab_size = dist.vocab_size();
  report.sigma_grid = grid;
  report.config = config;
  std::vector<NoiseSchedule> schedules;
  std::vector<int> index;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CheckSigma(grid[i]);
    const int steps =
        config.steps.empty() ? config.rule.MinSteps(grid[i]) : config.steps[i];
    if (!config.rule.Accepts(grid[i], steps)) {
      throw InvalidArgument("T=" + std::to_string(steps) +
                            " too coarse for sigma=" + std::to_string(grid[i]));
    }
    schedules.push_back(MakeSchedule(ScheduleKind::kLinearCumulative, steps));
    index.push_back(TimeIndexForSigma(schedules.back(), grid[i]));
    report.steps.push_back(steps);
    report.realized_sigma.push_back(schedules.back().sigma(index.back()));
    report.rates.push_back(ProposalRate(mechanism,
                                        schedules.back().beta(index.back()),
                                        dist.vocab_size()));
  }
  const std::size_t smallest = static_cast<std::size_t>(
      std::min_element(report.realized_sigma.begin(),
                       report.realized_sigma.end()) -
      report.realized_sigma.begin());
  std::vector<double> log_sigma;
  for (double s : report.realized_sigma) log_sigma.push_back(std::log(s));

  for (const TokenSeq& x : FitStates(dist, mechanism)) {
    std::vector<ScoreTable> tables;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      tables.push_back(
          ExactScoreTable(dist, schedules[i], index[i], x, mechanism));
    }
    for (std::size_t e = 0; e < tables[0].entries.size(); ++e) {
      const ScoreEntry& first = tables[0].entries[e];
      EditFit fit;
      fit.state = x;
      fit.h = first.h;
      fit.y = first.y;
      fit.delta_d = first.delta_d;
      for (const ScoreTable& t : tables) fit.scores.push_back(t.entries[e].score);
      fit.zero = std::all_of(fit.scores.begin(), fit.scores.end(),
                             [](double s) { return s == 0.0; });
      const double ratio = ProjectionRatio(dist, x, fit.h, fit.y);
      const bool vanishing =
          mechanism == Mechanism::kAbsorbing && fit.delta_d == 0;
      fit.target_exponent = vanishing ? kInf : fit.delta_d;
      fit.coefficient_target =
          mechanism == Mechanism::kUniform
              ? ratio * std::pow(dist.vocab_size(), -fit.delta_d)
              : ratio;
      if (fit.zero) {
        fit.fitted_exponent = kInf;
      } else if (std::all_of(fit.scores.begin(), fit.scores.end(),
                             [](double s) { return s > 0.0; })) {
        std::vector<double> log_score;
        for (double s : fit.scores) log_score.push_back(std::log(s));
        fit.fitted_exponent = FitLine(log_sigma, log_score).slope;
        fit.fitted_coefficient =
            fit.scores[smallest] /
            std::pow(report.realized_sigma[smallest], fit.delta_d);
      } else {
        fit.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
      }
      report.edits.push_back(std::move(fit));
    }
  }
  return report;
}

ThresholdResult ThresholdRecovery(const ScoreTable& scores, double sigma,
                                  const ExplicitDistribution& dist) {
  CheckSigma(sigma);
  ThresholdResult result;
  result.sigma = sigma;
  result.threshold = 1.0 / std::sqrt(sigma);
  int correct = 0;
  for (const ScoreEntry& e : scores.entries) {
    EditClassification c;
    c.h = e.h;
    c.y = e.y;
    c.score = e.score;
    c.predicted_improving = e.score > result.threshold;
    c.improving = ClassifyEdit(scores.state, e.h, e.y, dist).delta_d == -1;
    correct += c.predicted_improving == c.improving ? 1 : 0;
    result.edits.push_back(c);
  }
  if (!result.edits.empty()) {
    result.accuracy = static_cast<double>(correct) / result.edits.size();
  }
  return result;
}

double DistortionFactor(const ScoreTable& true_scores,
                        const ScoreTable& model_scores) {
  if (true_scores.state != model_scores.state ||
      true_scores.entries.size() != model_scores.entries.size()) {
    throw InvalidArgument("score tables describe different edits");
  }
  double worst = 1.0;
  for (std::size_t i = 0; i < true_scores.entries.size(); ++i) {
    const ScoreEntry& p = true_scores.entries[i];
    const ScoreEntry& q = model_scores.entries[i];
    if (p.h != q.h || p.y != q.y) {
      throw InvalidArgument("score tables describe different edits");
    }
    if (p.score == 0.0 && q.score == 0.0) continue;
    if (!(p.score > 0.0 && q.score > 0.0)) {
      throw InvalidArgument("distortion undefined for a zero score");
    }
    worst = std::max({worst, p.score / q.score, q.score / p.score});
  }
  return worst;
}

ScoreTable PerturbScores(const ScoreTable& scores, double sigma,
                         double exponent, std::uint64_t seed) {
  CheckSigma(sigma);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution up(0.5);
  const double factor = std::pow(sigma, -exponent);
  ScoreTable out = scores;
  for (ScoreEntry& e : out.entries) {
    e.score *= up(rng) ? factor : 1.0 / factor;
  }
  return out;
}

nlohmann::json DistortionProfile::ToJson() const {
  return {{"sigma_grid", sigma_grid}, {"distortion", distortion},
          {"threshold", threshold},   {"accuracy", accuracy},
          {"edits", edit_count},      {"sigma_star", sigma_star}};
}

DistortionProfile ThresholdSweep(const ExplicitDistribution& dist,
                                 Mechanism mechanism,
                                 const std::vector<double>& sigma_grid,
                                 double distortion_exponent,
                                 std::uint64_t seed,
                                 const DiscretizationRule& rule) {
  DistortionProfile profile;
  profile.sigma_grid = sigma_grid;
  const std::vector<TokenSeq> states = FitStates(dist, mechanism);
  for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
    const double sigma = sigma_grid[i];
    CheckSigma(sigma);
    const NoiseSchedule schedule =
        MakeSchedule(ScheduleKind::kLinearCumulative, rule.MinSteps(sigma));
    const int t = TimeIndexForSigma(schedule, sigma);
    double worst = 1.0;
    int correct = 0;
    int total = 0;
    for (std::size_t s = 0; s < states.size(); ++s) {
      const ScoreTable exact =
          ExactScoreTable(dist, schedule, t, states[s], mechanism);
      ScoreTable used = exact;
      if (distortion_exponent != 0.0) {
        used = PerturbScores(exact, sigma, distortion_exponent,
                             DeriveSeed(seed, "distortion",
                                        i * states.size() + s));
        worst = std::max(worst, DistortionFactor(exact, used));
      }
      const ThresholdResult r = ThresholdRecovery(used, sigma, dist);
      for (const EditClassification& c : r.edits) {
        correct += c.predicted_improving == c.improving ? 1 : 0;
        ++total;
      }
    }
    profile.distortion.push_back(worst);
    profile.threshold.push_back(1.0 / std::sqrt(sigma));
    profile.accuracy.push_back(total == 0 ? 1.0
                                          : static_cast<double>(correct) / total);
    profile.edit_count.push_back(total);
  }
  for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < sigma_grid.size() && ok; ++j) {
      if (sigma_grid[j] <= sigma_grid[i]) ok = profile.accuracy[j] == 1.0;
    }
    if (ok) profile.sigma_star = std::max(profile.sigma_star, sigma_grid[i]);
  }
  return profile;
}

nlohmann::json ScaleVsTvResult::ToJson() const {
  return {{"sigma", sigma}, {"alpha", alpha}, {"distortion", distortion},
          {"tv", tv},       {"kl_pq", kl_pq}, {"kl_qp", kl_qp}};
}

ScaleVsTvResult ScaleVsTvExample(double sigma, double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw InvalidArgument("alpha must lie in (0, 1/2)");
  }
  if (!(sigma > 0.0 && sigma < 0.25)) {
    throw InvalidArgument("sigma must lie in (0, 1/4)");
  }
  const double q[2] = {0.5 - sigma, 0.5 + sigma};
  const double low = std::pow(sigma, alpha) * (0.5 - sigma);
  const double p[2] = {low, 1.0 - low};
  ScaleVsTvResult r;
  r.sigma = sigma;
  r.alpha = alpha;
  r.distortion = 1.0;
  for (int i = 0; i < 2; ++i) {
    r.distortion = std::max({r.distortion, p[i] / q[i], q[i] / p[i]});
    r.tv += 0.5 * std::abs(p[i] - q[i]);
    r.kl_pq += p[i] * std::log(p[i] / q[i]);
    r.kl_qp += q[i] * std::log(q[i] / p[i]);
  }
  return r;
}

double MarginalExpansionReport::MaxGrowth() const {
  double worst = 0.0;
  for (const ExpansionCheck& c : states) {
    const auto& e = c.normalized_error;
    const std::size_t n = e.size();
    if (e[n - 1] == 0.0) continue;
    worst = std::max(worst, e[n - 2] > 0.0 ? e[n - 1] / e[n - 2] : kInf);
  }
  return worst;
}

double MarginalExpansionReport::MaxNormalizedError() const {
  double worst = 0.0;
  for (const ExpansionCheck& c : states) {
    for (double v : c.normalized_error) worst = std::max(worst, v);
  }
  return worst;
}

bool MarginalExpansionReport::Pass() const {
  return !states.empty() && MaxGrowth() <= growth_tolerance &&
         std::isfinite(MaxNormalizedError());
}

nlohmann::json MarginalExpansionReport::SummaryJson() const {
  return {{"mechanism", MechanismName(mechanism)},
          {"sigma_grid", sigma_grid},
          {"states", states.size()},
          {"max_growth", FiniteOrString(MaxGrowth())},
          {"growth_tolerance", growth_tolerance},
          {"max_normalized_error", FiniteOrString(MaxNormalizedError())},
          {"pass", Pass()}};
}

MarginalExpansionReport CheckMarginalExpansion(
    const ExplicitDistribution& dist, Mechanism mechanism,
    const std::vector<double>& sigma_grid) {
  if (sigma_grid.size() < 2) {
    throw InvalidArgument("expansion check needs at least two sigmas");
  }
  for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
    CheckSigma(sigma_grid[i]);
    if (i > 0 && !(sigma_grid[i] < sigma_grid[i - 1])) {
      throw InvalidArgument("sigma grid must be decreasing");
    }
  }
  MarginalExpansionReport report;
  report.mechanism = mechanism;
  report.sigma_grid = sigma_grid;
  const bool absorbing = mechanism == Mechanism::kAbsorbing;
  for (const TokenSeq& x : EnumerateStates(dist, mechanism)) {
    ExpansionCheck c{x, Projection(x, dist).distance, {}};
    for (double sigma : sigma_grid) {
      const double unit = absorbing ? sigma : sigma / dist.vocab_size();
      const double exact = MarginalAtLevel(dist, sigma, x, mechanism);
      const double lead = MarginalLeadingTerm(dist, x, sigma, mechanism);
      // Below this the leading term is exact up to rounding.
      const double err =
          std::abs(exact - lead) <= 1e-12 * exact ? 0.0 : std::abs(exact - lead);
      c.normalized_error.push_back(err / std::pow(unit, c.distance + 1));
    }
    report.states.push_back(std::move(c));
  }
  return report;
}

bool ParameterizationReport::Pass(double absorbing_tol, double uniform_min,
                                  double spread_tol) const {
  return absorbing_max_gap <= absorbing_tol && uniform_max_gap > uniform_min &&
         entropy_gap_spread <= spread_tol;
}

nlohmann::json ParameterizationReport::SummaryJson() const {
  return {{"absorbing_max_gap", absorbing_max_gap},
          {"absorbing_trials", absorbing_trials},
          {"uniform_max_gap", uniform_max_gap},
          {"uniform_witness", uniform_witness.ToJson()},
          {"uniform_witness_state", FormatSeq(uniform_witness_state)},
          {"uniform_witness_t", uniform_witness_t},
          {"entropy_gaps", entropy_gaps},
          {"entropy_gap_spread", entropy_gap_spread},
          {"pass", Pass()}};
}

ParameterizationReport CheckParameterizations(std::uint64_t seed,
                                              int posteriors, int states) {
  ParameterizationReport report;
  std::mt19937_64 rng(DeriveSeed(seed, "parameterization"));
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  auto random_row = [&](int k) {
    TokenVector row(k + 1, 0.0);
    double total = 0.0;
    for (int v = 1; v <= k; ++v) total += row[v] = unit(rng);
    for (int v = 1; v <= k; ++v) row[v] /= total;
    return row;
  };

  {
    const int k = 3;
    const int len = 4;
    const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 12);
    std::uniform_int_distribution<int> tok(0, k);
    for (int i = 0; i < states; ++i) {
      TokenSeq x(len);
      for (Token& v : x) v = tok(rng);
      for (int j = 0; j < posteriors; ++j) {
        PosteriorTable post;
        for (int h = 0; h < len; ++h) post.push_back(random_row(k));
        for (int t = 1; t <= s.steps(); ++t) {
          const auto a = KernelFromPosterior(post, x, t, s, Mechanism::kAbsorbing,
                                             Parameterization::kBayes);
          const auto b = KernelFromPosterior(post, x, t, s, Mechanism::kAbsorbing,
                                             Parameterization::kD3pm);
          const auto c = KernelFromPosterior(post, x, t, s, Mechanism::kAbsorbing,
                                             Parameterization::kSubs);
          for (int h = 0; h < len; ++h) {
            for (int y = 0; y <= k; ++y) {
              report.absorbing_max_gap =
                  std::max({report.absorbing_max_gap, std::abs(a[h][y] - b[h][y]),
                            std::abs(a[h][y] - c[h][y])});
            }
          }
        }
        ++report.absorbing_trials;
      }
    }
  }

  {
    const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 4);
    const std::vector<TokenSeq> all{{1, 1}, {1, 2}, {2, 1}, {2, 2}};
    for (unsigned mask = 1; mask < 16; ++mask) {
      std::vector<TokenSeq> support;
      for (int i = 0; i < 4; ++i) {
        if (mask & (1u << i)) support.push_back(all[i]);
      }
      for (double lead : {0.5, 0.75, 0.9}) {
        std::vector<double> p(support.size(),
                              (1.0 - lead) / std::max<std::size_t>(1, support.size() - 1));
        p[0] = support.size() == 1 ? 1.0 : lead;
        const ExplicitDistribution dist(2, 2, support, p);
        for (const TokenSeq& x : all) {
          for (int t = 2; t <= s.steps(); ++t) {
            const PosteriorTable post =
                PosteriorExact(dist, s, t, x, Mechanism::kUniform);
            const auto a = KernelFromPosterior(post, x, t, s, Mechanism::kUniform,
                                               Parameterization::kBayes);
            const auto b = KernelFromPosterior(post, x, t, s, Mechanism::kUniform,
                                               Parameterization::kD3pm);
            for (int h = 0; h < 2; ++h) {
              for (int y = 1; y <= 2; ++y) {
                const double gap = std::abs(a[h][y] - b[h][y]);
                if (gap > report.uniform_max_gap) {
                  report.uniform_max_gap = gap;
                  report.uniform_witness = dist;
                  report.uniform_witness_state = x;
                  report.uniform_witness_t = t;
                }
              }
            }
          }
        }
      }
    }
  }

  {
    const ExplicitDistribution dist(3, 3, {{1, 2, 3}, {2, 2, 2}, {3, 1, 1}},
                                    {0.5, 0.3, 0.2});
    const NoiseSchedule s = MakeSchedule(ScheduleKind::kLinearCumulative, 6);
    const int last = LastFiniteRateStep(s);
    const PosteriorFn exact = ExactPosteriorModel(dist, s, Mechanism::kAbsorbing);
    const PosteriorFn smooth = [&](const TokenSeq& x, int t) {
      PosteriorTable p = exact(x, t);
      for (auto& row : p) {
        for (int v = 1; v <= 3; ++v) row[v] = 0.7 * row[v] + 0.1;
      }
      return p;
    };
    const std::uint64_t base = DeriveSeed(seed, "random-posterior");
    const PosteriorFn noisy = [base](const TokenSeq& x, int t) {
      std::uint64_t key = base + static_cast<std::uint64_t>(t);
      for (Token v : x) key = key * 31 + static_cast<std::uint64_t>(v);
      std::mt19937_64 local(key);
      std::uniform_real_distribution<double> u(0.05, 1.0);
      PosteriorTable p(x.size(), TokenVector(4, 0.0));
      for (auto& row : p) {
        double total = 0.0;
        for (int v = 1; v <= 3; ++v) total += row[v] = u(local);
        for (int v = 1; v <= 3; ++v) row[v] /= total;
      }
      return p;
    };
    for (const PosteriorFn* m : {&exact, &smooth, &noisy}) {
      report.entropy_gaps.push_back(ExactScoreEntropy(*m, dist, s).value -
                                    ExactMaskedCe(*m, dist, s, last).value);
    }
    const auto [lo, hi] = std::minmax_element(report.entropy_gaps.begin(),
                                              report.entropy_gaps.end());
    report.entropy_gap_spread = *hi - *lo;
  }
  return report;
}

}  // namespace dlmlab
