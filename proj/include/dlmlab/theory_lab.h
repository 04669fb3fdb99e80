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

// Numerical checks of the small-noise score expansion: log-log exponent
// fits, threshold recovery of support-improving edits, score distortion,
// and the scale-versus-total-variation counterexample.

#ifndef DLMLAB_THEORY_LAB_H_
#define DLMLAB_THEORY_LAB_H_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dlmlab/distribution.h"
#include "dlmlab/exact_reverse.h"
#include "dlmlab/parameterization.h"
#include "dlmlab/schedule.h"
#include "dlmlab/types.h"
#include "json.hpp"

namespace dlmlab {

struct RateSeparationConfig {
  std::vector<double> sigma_grid{0.2, 0.1, 0.05, 0.02, 0.01};
  DiscretizationRule rule;
  // Optional explicit step counts, one per grid point; each pair must pass
  // `rule`. Empty means rule.MinSteps(sigma).
  std::vector<int> steps;
  double slope_tolerance = 0.1;
  double coefficient_tolerance = 0.1;
  double zero_tolerance = 1e-12;
};

struct EditFit {
  TokenSeq state;
  int h = 0;
  Token y = 0;
  int delta_d = 0;
  // Normalized scores at the realized levels sigma_t, one per grid point.
  std::vector<double> scores;
  // Score identically zero along the grid; the exponent is then +inf.
  bool zero = false;
  double fitted_exponent = 0.0;
  double target_exponent = 0.0;
  // score / sigma^{delta_d} at the smallest sigma.
  double fitted_coefficient = 0.0;
  double coefficient_target = 0.0;

  double ExponentError() const;
  double CoefficientError() const;
};

struct RateSeparationReport {
  Mechanism mechanism = Mechanism::kUniform;
  int vocab_size = 0;
  std::vector<double> sigma_grid;
  std::vector<double> realized_sigma;
  std::vector<int> steps;
  // Proposal rate at each grid point, to turn scores back into masses.
  std::vector<double> rates;
  std::vector<EditFit> edits;
  RateSeparationConfig config;

  double MaxExponentError() const;
  double MaxCoefficientError() const;
  // Largest reverse-kernel mass over absorbing edits with delta_d = 0,
  // which the expansion predicts to vanish exactly.
  double MaxZeroMass() const;
  // Number of edits per delta_d in {-1, 0, +1}.
  std::vector<int> ClassCounts() const;
  bool Pass() const;

  nlohmann::json SummaryJson() const;
};

// Columns: state,h,y,delta_d,fitted_exponent,target_exponent,
// fitted_coefficient,coefficient_target,then one score column per sigma.
void WriteRateSeparationCsv(std::ostream& out,
                            const RateSeparationReport& report);

// Fits every admissible single-token edit of every state with positive
// probability (clean states for uniform, masked-consistent states with at
// least one mask for absorbing). Throws InvalidArgument for a grid shorter
// than three points or a (sigma, T) pair the rule rejects.
RateSeparationReport VerifyRateSeparation(const ExplicitDistribution& dist,
                                          Mechanism mechanism,
                                          const RateSeparationConfig& config =
                                              {});

// Ordinary least-squares slope and intercept of y on x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit FitLine(const std::vector<double>& x, const std::vector<double>& y);

struct EditClassification {
  int h = 0;
  Token y = 0;
  double score = 0.0;
  bool predicted_improving = false;
  bool improving = false;
};

struct ThresholdResult {
  double sigma = 0.0;
  double threshold = 0.0;
  std::vector<EditClassification> edits;
  // Fraction correct; 1 for an empty edit set.
  double accuracy = 1.0;
};

// Flags an edit improving iff its score exceeds sigma^{-1/2}; ground truth
// is delta_d = -1.
ThresholdResult ThresholdRecovery(const ScoreTable& scores, double sigma,
                                  const ExplicitDistribution& dist);

// max over entries of max(p/q, q/p). Entries zero in both tables are
// skipped; a zero in only one, or mismatched entries, is InvalidArgument.
double DistortionFactor(const ScoreTable& true_scores,
                        const ScoreTable& model_scores);

// Multiplies every entry by sigma^{+-exponent} with a seeded random sign,
// so the distortion against the input is exactly sigma^{-exponent}.
ScoreTable PerturbScores(const ScoreTable& scores, double sigma,
                         double exponent, std::uint64_t seed);

struct DistortionProfile {
  std::vector<double> sigma_grid;
  std::vector<double> distortion;
  std::vector<double> threshold;
  std::vector<double> accuracy;
  std::vector<int> edit_count;
  // Largest grid sigma such that every grid sigma at or below it has
  // accuracy 1; 0 if none.
  double sigma_star = 0.0;

  nlohmann::json ToJson() const;
};

// Threshold recovery over all states of `dist` at each sigma, using exact
// scores at T = rule.MinSteps(sigma), optionally perturbed by
// PerturbScores (exponent 0 disables the perturbation).
DistortionProfile ThresholdSweep(const ExplicitDistribution& dist,
                                 Mechanism mechanism,
                                 const std::vector<double>& sigma_grid,
                                 double distortion_exponent,
                                 std::uint64_t seed,
                                 const DiscretizationRule& rule = {});

struct ScaleVsTvResult {
  double sigma = 0.0;
  double alpha = 0.0;
  double distortion = 0.0;
  double tv = 0.0;
  double kl_pq = 0.0;
  double kl_qp = 0.0;

  nlohmann::json ToJson() const;
};

// q = (1/2 - s, 1/2 + s), p = (s^a (1/2 - s), 1 - s^a (1/2 - s)). The two
// are within a factor s^{-a} of each other yet far apart in total
// variation. Requires a in (0, 1/2) and s in (0, 1/4).
ScaleVsTvResult ScaleVsTvExample(double sigma, double alpha);

struct ExpansionCheck {
  TokenSeq state;
  int distance = 0;
  // |q_sigma(x) - leading| / unit^{d+1} per grid point, unit = sigma/K
  // (uniform) or sigma (absorbing).
  std::vector<double> normalized_error;
};

struct MarginalExpansionReport {
  Mechanism mechanism = Mechanism::kUniform;
  std::vector<double> sigma_grid;
  std::vector<ExpansionCheck> states;
  // Allowed ratio of the normalized error at the smallest sigma to the
  // one before it. A missing order would show as a factor of about
  // sigma_{n-1}/sigma_n.
  double growth_tolerance = 1.25;

  double MaxGrowth() const;
  double MaxNormalizedError() const;
  bool Pass() const;
  nlohmann::json SummaryJson() const;
};

// Checks every enumerated state (clean strings for uniform, support-
// consistent masked strings for absorbing). The grid must be decreasing.
MarginalExpansionReport CheckMarginalExpansion(
    const ExplicitDistribution& dist, Mechanism mechanism,
    const std::vector<double>& sigma_grid = {0.2, 0.1, 0.05, 0.02, 0.01});

struct ParameterizationReport {
  // Largest |Bayes - D3PM| and |Bayes - SUBS| under absorbing over random
  // posteriors and states.
  double absorbing_max_gap = 0.0;
  int absorbing_trials = 0;
  // Largest |Bayes - D3PM| under uniform found by search, with its witness.
  double uniform_max_gap = 0.0;
  ExplicitDistribution uniform_witness{2, 2, {{1, 1}}, {1.0}};
  TokenSeq uniform_witness_state;
  int uniform_witness_t = 0;
  // Spread over posterior models of score entropy minus weighted masked CE.
  double entropy_gap_spread = 0.0;
  std::vector<double> entropy_gaps;

  bool Pass(double absorbing_tol = 1e-12, double uniform_min = 1e-6,
            double spread_tol = 1e-8) const;
  nlohmann::json SummaryJson() const;
};

// Absorbing: `posteriors` random posteriors on each of `states` random
// masked states of a K=3, H=4 chain. Uniform: exact posteriors on a grid
// of K=2, H=2 distributions. Entropy gap: exact, smoothed and random
// posteriors on a K=3, H=3 instance.
ParameterizationReport CheckParameterizations(std::uint64_t seed,
                                              int posteriors = 100,
                                              int states = 10);

}  // namespace dlmlab

#endif  // DLMLAB_THEORY_LAB_H_
