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

#include "dlmlab/experiment.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dlmlab/corruption.h"
#include "dlmlab/distribution.h"
#include "dlmlab/seeding.h"
#include "dlmlab/support.h"
#include "dlmlab/theory_lab.h"
#include "dlmlab/walk_language.h"
#include "toml.hpp"

namespace dlmlab {
namespace {

constexpr const char* kVersion = "1.0.0";

using nlohmann::json;

[[noreturn]] void Fail(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

const json& Section(const json& doc, const char* key) {
  static const json kEmpty = json::object();
  if (!doc.contains(key)) return kEmpty;
  if (!doc[key].is_object()) Fail(key, "must be a table");
  return doc[key];
}

template <typename T>
T Read(const json& section, const std::string& prefix, const char* key,
       T fallback) {
  if (!section.contains(key)) return fallback;
  try {
    return section.at(key).get<T>();
  } catch (const json::exception&) {
    Fail(prefix + key, "has the wrong type");
  }
}

std::vector<double> ReadGrid(const json& section, const std::string& prefix,
                             const char* key, std::vector<double> fallback) {
  std::vector<double> grid = Read(section, prefix, key, fallback);
  for (double s : grid) {
    if (!(s > 0.0 && s < 1.0)) Fail(prefix + key, "entries must lie in (0, 1)");
  }
  return grid;
}

std::vector<std::int64_t> GeometricGrid(std::int64_t start, double factor,
                                        std::int64_t stop) {
  std::vector<std::int64_t> out;
  for (double v = static_cast<double>(start); v <= static_cast<double>(stop);
       v *= factor) {
    const auto n = static_cast<std::int64_t>(std::llround(v));
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  return out;
}

bool IsWalk(const json& inst) { return inst.value("type", "") == "walk"; }

ExplicitDistribution ExplicitAt(const ExperimentConfig& c, std::size_t i) {
  return ExplicitDistribution::FromJson(c.instances.at(i));
}

WalkLanguage WalkOf(const ExperimentConfig& c) {
  return WalkLanguage::FromJson(c.instances.at(0));
}

std::string Hex(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string Num(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

std::string Label(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

class Writer {
 public:
  Writer(std::filesystem::path dir, ExperimentResult& result)
      : dir_(std::move(dir)), result_(result) {}

  std::ofstream Open(const std::string& rel) {
    result_.files.push_back(rel);
    std::ofstream out(dir_ / rel, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + (dir_ / rel).string());
    return out;
  }

  void Json(const std::string& rel, const json& doc) {
    Open(rel) << doc.dump(2) << '\n';
  }

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  ExperimentResult& result_;
};

void AddCheck(ExperimentResult& r, std::string name, bool pass, json detail) {
  r.checks.push_back({std::move(name), pass, std::move(detail)});
}

std::string Tag(std::size_t i, Mechanism m) {
  return "i" + std::to_string(i) + "_" + std::string(MechanismName(m));
}

void RunRateSeparation(const ExperimentConfig& c, Writer& w,
                       ExperimentResult& r) {
  const std::string p = "rate.";
  RateSeparationConfig rc;
  rc.sigma_grid = ReadGrid(c.params, p, "sigma_grid", rc.sigma_grid);
  rc.rule.c = Read(c.params, p, "c", rc.rule.c);
  rc.slope_tolerance = Read(c.params, p, "slope_tolerance", rc.slope_tolerance);
  rc.coefficient_tolerance =
      Read(c.params, p, "coefficient_tolerance", rc.coefficient_tolerance);
  rc.zero_tolerance = Read(c.params, p, "zero_tolerance", rc.zero_tolerance);
  json summary = json::array();
  for (std::size_t i = 0; i < c.instances.size(); ++i) {
    const ExplicitDistribution dist = ExplicitAt(c, i);
    for (Mechanism m : c.mechanisms) {
      const RateSeparationReport rep = VerifyRateSeparation(dist, m, rc);
      auto out = w.Open("rates_" + Tag(i, m) + ".csv");
      WriteRateSeparationCsv(out, rep);
      json s = rep.SummaryJson();
      s["instance"] = i;
      summary.push_back(s);
      AddCheck(r, "rate_separation/" + Tag(i, m), rep.Pass(), s);
    }
  }
  w.Json("rate_summary.json", summary);
}

void RunMarginalExpansion(const ExperimentConfig& c, Writer& w,
                          ExperimentResult& r) {
  const std::string p = "expansion.";
  const std::vector<double> grid =
      ReadGrid(c.params, p, "sigma_grid", {0.2, 0.1, 0.05, 0.02, 0.01});
  const double growth = Read(c.params, p, "growth_tolerance", 1.25);
  json summary = json::array();
  for (std::size_t i = 0; i < c.instances.size(); ++i) {
    const ExplicitDistribution dist = ExplicitAt(c, i);
    for (Mechanism m : c.mechanisms) {
      MarginalExpansionReport rep = CheckMarginalExpansion(dist, m, grid);
      rep.growth_tolerance = growth;
      auto out = w.Open("expansion_" + Tag(i, m) + ".csv");
      out << "state,distance";
      for (double s : grid) out << ",err_" << Label(s);
      out << '\n';
      for (const ExpansionCheck& e : rep.states) {
        out << FormatSeq(e.state) << ',' << e.distance;
        for (double v : e.normalized_error) out << ',' << Num(v);
        out << '\n';
      }
      json s = rep.SummaryJson();
      s["instance"] = i;
      summary.push_back(s);
      AddCheck(r, "marginal_expansion/" + Tag(i, m), rep.Pass(), s);
    }
  }
  w.Json("expansion_summary.json", summary);
}

void RunParameterization(const ExperimentConfig& c, Writer& w,
                         ExperimentResult& r) {
  const std::string p = "parameterization.";
  const ParameterizationReport rep = CheckParameterizations(
      c.seeds.front(), Read(c.params, p, "posteriors", 100),
      Read(c.params, p, "states", 10));
  const json s = rep.SummaryJson();
  w.Json("parameterization.json", s);
  AddCheck(r, "absorbing_choices_coincide", rep.absorbing_max_gap <= 1e-12,
           {{"max_gap", rep.absorbing_max_gap}});
  AddCheck(r, "uniform_bayes_d3pm_differ", rep.uniform_max_gap > 1e-6,
           {{"max_gap", rep.uniform_max_gap}});
  AddCheck(r, "entropy_gap_posterior_free", rep.entropy_gap_spread <= 1e-8,
           {{"spread", rep.entropy_gap_spread}});
}

void RunThreshold(const ExperimentConfig& c, Writer& w, ExperimentResult& r) {
  const std::string p = "threshold.";
  const std::vector<double> grid =
      ReadGrid(c.params, p, "sigma_grid", {0.01, 0.005, 0.002, 0.001});
  const auto exponents =
      Read(c.params, p, "exponents", std::vector<double>{0.0, 0.3});
  const double max_sigma = Read(c.params, p, "max_sigma", 0.01);
  DiscretizationRule rule;
  rule.c = Read(c.params, p, "c", rule.c);
  json summary = json::array();
  for (std::size_t i = 0; i < c.instances.size(); ++i) {
    const ExplicitDistribution dist = ExplicitAt(c, i);
    for (Mechanism m : c.mechanisms) {
      for (std::size_t e = 0; e < exponents.size(); ++e) {
        const DistortionProfile prof = ThresholdSweep(
            dist, m, grid, exponents[e], c.seeds.front(), rule);
        bool pass = true;
        for (std::size_t k = 0; k < grid.size(); ++k) {
          if (grid[k] <= max_sigma && prof.accuracy[k] != 1.0) pass = false;
        }
        json s = prof.ToJson();
        s["instance"] = i;
        s["mechanism"] = MechanismName(m);
        s["exponent"] = exponents[e];
        summary.push_back(s);
        AddCheck(r, "threshold/" + Tag(i, m) + "_e" + std::to_string(e), pass,
                 s);
      }
    }
  }
  w.Json("threshold_summary.json", summary);
}

void RunScaleVsTv(const ExperimentConfig& c, Writer& w, ExperimentResult& r) {
  const std::string p = "scale_vs_tv.";
  const double sigma = Read(c.params, p, "sigma", 1e-4);
  const double alpha = Read(c.params, p, "alpha", 0.25);
  const auto sweep =
      Read(c.params, p, "sweep", std::vector<double>{1e-3, 1e-4, 1e-5});
  const double tv_target = Read(c.params, p, "tv_target", 0.44991);
  const double tv_tol = Read(c.params, p, "tv_tolerance", 1e-4);
  const double kl_min = Read(c.params, p, "kl_min", 0.40);
  const ScaleVsTvResult main = ScaleVsTvExample(sigma, alpha);
  json sweep_out = json::array();
  bool rising = true;
  double last_tv = 0.0;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const ScaleVsTvResult s = ScaleVsTvExample(sweep[i], alpha);
    sweep_out.push_back(s.ToJson());
    if ((i > 0 && !(s.tv > last_tv)) || !(s.tv < 0.5)) rising = false;
    last_tv = s.tv;
  }
  w.Json("scale_vs_tv.json", {{"example", main.ToJson()}, {"sweep", sweep_out}});
  const double want = std::pow(sigma, -alpha);
  AddCheck(r, "distortion_equals_scale",
           std::abs(main.distortion - want) <= 1e-12 * want,
           {{"distortion", main.distortion}, {"expected", want}});
  AddCheck(r, "tv_value", std::abs(main.tv - tv_target) <= tv_tol,
           {{"tv", main.tv}, {"target", tv_target}, {"tolerance", tv_tol}});
  AddCheck(r, "kl_lower_bound", main.kl_pq >= kl_min && main.kl_qp >= kl_min,
           {{"kl_pq", main.kl_pq}, {"kl_qp", main.kl_qp}, {"min", kl_min}});
  AddCheck(r, "tv_rises_toward_half", rising, {{"sweep", sweep_out}});
}

ProbeCurve Curve(const char* name) { return ProbeCurve{name, {}, {}}; }

void Push(ProbeCurve& c, std::int64_t t, double v) {
  c.checkpoints.push_back(t);
  c.values.push_back(v);
}

void RunPrediction1(const ExperimentConfig& c, Writer& w,
                    ExperimentResult& r) {
  const WalkLanguage lang = WalkOf(c);
  const NoiseSchedule schedule = c.Schedule();
  DirectProbeConfig direct = c.direct;
  if (direct.sigma == 0.0) direct.sigma = 1.0 / lang.length();
  const int min_ordered = Read(
      c.params, "prediction1.", "min_ordered",
      static_cast<int>(std::ceil(0.8 * static_cast<double>(c.seeds.size()))));
  json summary = json::array();
  for (Mechanism m : c.mechanisms) {
    int ordered = 0;
    json rows = json::array();
    for (std::uint64_t seed : c.seeds) {
      ProbeCurve support = Curve("support"), pairwise = Curve("pairwise"),
                 top1 = Curve("top1");
      TrainStream(SourceFor(lang), lang.vocab_size(), lang.length(), m,
                  schedule, c.learner, seed, [&](const Checkpoint& ck) {
                    const DirectProbeResult v = DirectProbes(
                        ModelSequenceScorer(ck.model, direct.sigma), lang, m,
                        direct, seed);
                    Push(support, ck.tokens_seen, v.support);
                    Push(pairwise, ck.tokens_seen, v.pairwise);
                    Push(top1, ck.tokens_seen, v.top1);
                  });
      auto out = w.Open("curves_" + std::string(MechanismName(m)) + "_seed" +
                        std::to_string(seed) + ".csv");
      out.precision(17);
      WriteProbeCurvesCsv(out, {support, pairwise, top1});
      const std::int64_t ts = TransitionTime(support, c.q);
      const std::int64_t tp = TransitionTime(pairwise, c.q);
      const std::int64_t tt = TransitionTime(top1, c.q);
      ordered += ts <= tp;
      rows.push_back({{"seed", seed},
                      {"tau_support", ts},
                      {"tau_pairwise", tp},
                      {"tau_top1", tt},
                      {"support_first", ts <= tp}});
    }
    const json s = {{"mechanism", MechanismName(m)},
                    {"q", c.q},
                    {"seeds", rows},
                    {"ordered", ordered},
                    {"min_ordered", min_ordered}};
    summary.push_back(s);
    AddCheck(r, "support_before_frequency/" + std::string(MechanismName(m)),
             ordered >= min_ordered, s);
  }
  w.Json("transitions.json", summary);
}

void RunPrediction2(const ExperimentConfig& c, Writer& w,
                    ExperimentResult& r) {
  const WalkLanguage lang = WalkOf(c);
  const NoiseSchedule schedule = c.Schedule();
  const std::uint64_t seed = c.seeds.front();
  const std::string p = "prediction2.";
  const double min_gap = Read(c.params, p, "min_gap", 0.05);
  const double absorbing_band = Read(c.params, p, "absorbing_band", 0.03);
  json summary = json::object();
  std::map<Mechanism, double> gain;
  for (Mechanism m : c.mechanisms) {
    const std::vector<Checkpoint> ck =
        TrainStream(SourceFor(lang), lang.vocab_size(), lang.length(), m,
                    schedule, c.learner, seed);
    const LearnedReverseModel model(ck.back().model, schedule);
    std::map<SamplerMode, SampleEvaluation> evals;
    json per_mode = json::object();
    for (SamplerMode mode : {SamplerMode::kAncestral, SamplerMode::kThreshold,
                             SamplerMode::kHardmax}) {
      SamplerConfig sc = c.sampler;
      sc.mode = mode;
      std::vector<TokenSeq> samples;
      int truncated = 0;
      std::size_t edits = 0;
      for (int i = 0; i < c.sampler_samples; ++i) {
        const SampleResult s = Sample(model, sc, DeriveSeed(seed, "sample", i));
        truncated += s.truncated;
        edits += s.edits.size();
        samples.push_back(s.seq);
      }
      const SampleEvaluation e = EvaluateSamples(samples, lang);
      auto out = w.Open("samples_" + std::string(MechanismName(m)) + "_" +
                        std::string(SamplerModeName(mode)) + ".csv");
      out << "index,sequence,in_support,distance\n";
      for (std::size_t i = 0; i < samples.size(); ++i) {
        out << i << ',' << FormatSeq(samples[i]) << ','
            << (e.distances[i] == 0) << ',' << e.distances[i] << '\n';
      }
      json ej = e.ToJson();
      ej["truncated"] = truncated;
      ej["mean_phase2_edits"] = static_cast<double>(edits) / samples.size();
      per_mode[std::string(SamplerModeName(mode))] = ej;
      evals.emplace(mode, e);
    }
    const auto& anc = evals.at(SamplerMode::kAncestral);
    const auto& thr = evals.at(SamplerMode::kThreshold);
    gain[m] = thr.frac_in_support - anc.frac_in_support;
    summary[std::string(MechanismName(m))] = {
        {"tokens_seen", ck.back().tokens_seen},
        {"modes", per_mode},
        {"threshold_vs_ancestral", CompareSamplers(thr, anc).ToJson()},
        {"hardmax_vs_ancestral",
         CompareSamplers(evals.at(SamplerMode::kHardmax), anc).ToJson()},
        {"threshold_gain", gain[m]}};
  }
  summary["sampler"] = c.sampler.ToJson();
  w.Json("sampler_summary.json", summary);
  if (gain.count(Mechanism::kUniform) && gain.count(Mechanism::kAbsorbing)) {
    const double gu = gain[Mechanism::kUniform];
    const double ga = gain[Mechanism::kAbsorbing];
    AddCheck(r, "uniform_gain_exceeds_absorbing", gu - ga >= min_gap,
             {{"uniform_gain", gu}, {"absorbing_gain", ga}, {"min_gap", min_gap}});
    AddCheck(r, "absorbing_gain_near_zero", std::abs(ga) <= absorbing_band,
             {{"absorbing_gain", ga}, {"band", absorbing_band}});
  }
}

void RunProbeAgreement(const ExperimentConfig& c, Writer& w,
                       ExperimentResult& r) {
  const WalkLanguage lang = WalkOf(c);
  const NoiseSchedule schedule = c.Schedule();
  const std::uint64_t seed = c.seeds.front();
  const std::string p = "agreement.";
  const double max_mad = Read(c.params, p, "max_mean_abs_diff", 0.05);
  const double support_tol = Read(c.params, p, "support_tolerance", 0.02);
  const double sigma = c.direct.sigma == 0.0 ? 1.0 / lang.length() : c.direct.sigma;
  const ContextBank bank = BuildContextBank(
      SampleCorpus(lang, c.corpus_size, DeriveSeed(seed, "corpus")),
      lang.vocab_size(), c.bank);
  w.Json("bank.json", bank.ToJson());
  if (bank.empty) {
    AddCheck(r, "bank_nonempty", false, {{"corpus_size", c.corpus_size}});
    return;
  }
  const NegativeStrategy strategies[] = {NegativeStrategy::kFreqMatched,
                                         NegativeStrategy::kUniform,
                                         NegativeStrategy::kFrequent};
  json summary = json::array();
  for (Mechanism m : c.mechanisms) {
    ProbeCurve ind_pair = Curve("indirect_pairwise"),
               ind_top1 = Curve("indirect_top1"),
               dir_pair = Curve("direct_pairwise"),
               dir_sup = Curve("direct_support");
    std::vector<ProbeCurve> ind_sup;
    for (NegativeStrategy s : strategies) {
      ind_sup.push_back(ProbeCurve{
          "indirect_support_" + std::string(NegativeStrategyName(s)), {}, {}});
    }
    TrainStream(SourceFor(lang), lang.vocab_size(), lang.length(), m, schedule,
                c.learner, seed, [&](const Checkpoint& ck) {
                  const WindowScorer scorer = ModelWindowScorer(ck.model, sigma);
                  const FrequencyProbeResult f =
                      IndirectFrequencyProbes(scorer, bank);
                  const SyntheticOracleResult o =
                      SyntheticOracleProbes(scorer, lang, bank, c.n_neg, seed);
                  Push(ind_pair, ck.tokens_seen, f.pairwise);
                  Push(ind_top1, ck.tokens_seen, f.top1);
                  Push(dir_pair, ck.tokens_seen, o.pairwise_direct);
                  Push(dir_sup, ck.tokens_seen, o.support_direct);
                  for (std::size_t k = 0; k < ind_sup.size(); ++k) {
                    Push(ind_sup[k], ck.tokens_seen,
                         IndirectSupportProbe(scorer, bank, strategies[k],
                                              c.n_neg, seed)
                             .accuracy);
                  }
                });
    std::vector<ProbeCurve> all{ind_pair, dir_pair, ind_top1, dir_sup};
    all.insert(all.end(), ind_sup.begin(), ind_sup.end());
    auto out = w.Open("agreement_" + std::string(MechanismName(m)) + ".csv");
    out.precision(17);
    WriteProbeCurvesCsv(out, all);

    double mad = 0.0;
    double sup_gap = 0.0;
    for (std::size_t i = 0; i < ind_pair.values.size(); ++i) {
      mad += std::abs(ind_pair.values[i] - dir_pair.values[i]);
      sup_gap = std::max(sup_gap, std::abs(ind_sup[0].values[i] - dir_sup.values[i]));
    }
    mad /= static_cast<double>(ind_pair.values.size());
    std::vector<std::int64_t> taus;
    for (const ProbeCurve& curve : ind_sup) taus.push_back(TransitionTime(curve, c.q));
    const auto& grid = ind_pair.checkpoints;
    auto index = [&](std::int64_t t) {
      return std::find(grid.begin(), grid.end(), t) - grid.begin();
    };
    const auto [lo, hi] = std::minmax_element(taus.begin(), taus.end());
    const bool close = index(*hi) - index(*lo) <= 1;
    const std::string mech(MechanismName(m));
    const json s = {{"mechanism", mech},
                    {"mean_abs_diff_pairwise", mad},
                    {"max_support_gap", sup_gap},
                    {"negative_strategy_transitions", taus},
                    {"contexts", bank.contexts.size()}};
    summary.push_back(s);
    AddCheck(r, "pairwise_agreement/" + mech, mad <= max_mad,
             {{"mean_abs_diff", mad}, {"max", max_mad}});
    AddCheck(r, "support_agreement/" + mech, sup_gap <= support_tol,
             {{"max_gap", sup_gap}, {"tolerance", support_tol}});
    AddCheck(r, "negative_strategies_agree/" + mech, close,
             {{"transitions", taus}});
  }
  w.Json("agreement_summary.json", summary);
}

json Constants(const ExperimentConfig& c) {
  json walks = json::array();
  for (const json& inst : c.instances) {
    if (IsWalk(inst)) walks.push_back(WalkOf(c).params().ToJson());
  }
  return {{"walk_params", walks},
          {"params", c.params},
          {"norm_tolerance", ExplicitDistribution::kNormTolerance}};
}

}  // namespace

std::string_view ExperimentKindName(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kRateSeparation:
      return "rate_separation";
    case ExperimentKind::kMarginalExpansion:
      return "marginal_expansion";
    case ExperimentKind::kParameterization:
      return "parameterization";
    case ExperimentKind::kThreshold:
      return "threshold";
    case ExperimentKind::kScaleVsTv:
      return "scale_vs_tv";
    case ExperimentKind::kPrediction1:
      return "prediction1";
    case ExperimentKind::kPrediction2:
      return "prediction2";
    case ExperimentKind::kProbeAgreement:
      return "probe_agreement";
  }
  return "?";
}

ExperimentKind ParseExperimentKind(std::string_view name) {
  for (ExperimentKind k :
       {ExperimentKind::kRateSeparation, ExperimentKind::kMarginalExpansion,
        ExperimentKind::kParameterization, ExperimentKind::kThreshold,
        ExperimentKind::kScaleVsTv, ExperimentKind::kPrediction1,
        ExperimentKind::kPrediction2, ExperimentKind::kProbeAgreement}) {
    if (ExperimentKindName(k) == name) return k;
  }
  throw ConfigError("kind: unknown experiment kind '" + std::string(name) + "'");
}

json LoadConfigDocument(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("config: no such file " + path.string());
  }
  const std::string ext = path.extension().string();
  if (ext == ".json") {
    try {
      return json::parse(ReadFile(path));
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  if (ext != ".toml") throw ConfigError("config: expected a .toml or .json file");
  try {
    const toml::table table = toml::parse_file(path.string());
    std::ostringstream out;
    out << toml::json_formatter{table};
    return json::parse(out.str());
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config: " << e.description() << " at line "
        << e.source().begin.line;
    throw ConfigError(msg.str());
  }
}

ExperimentConfig ExperimentConfig::FromJson(const json& doc) {
  if (!doc.is_object()) Fail("config", "must be a table");
  ExperimentConfig c;
  c.name = Read<std::string>(doc, "", "name", "");
  if (c.name.empty()) Fail("name", "is required");
  if (!doc.contains("kind")) Fail("kind", "is required");
  c.kind = ParseExperimentKind(Read<std::string>(doc, "", "kind", ""));
  c.seeds = Read(doc, "", "seeds", std::vector<std::uint64_t>{});
  if (c.seeds.empty()) Fail("seeds", "must be a nonempty list");
  c.output_dir = Read<std::string>(doc, "", "output_dir", "");
  if (c.output_dir.empty()) Fail("output_dir", "is required");
  for (const std::string& m : Read(doc, "", "mechanisms",
                                   std::vector<std::string>{"uniform", "absorbing"})) {
    try {
      c.mechanisms.push_back(ParseMechanism(m));
    } catch (const InvalidArgument&) {
      Fail("mechanisms", "unknown mechanism '" + m + "'");
    }
  }
  if (c.mechanisms.empty()) Fail("mechanisms", "must be nonempty");

  if (doc.contains("instances")) {
    if (!doc["instances"].is_array()) Fail("instances", "must be a list");
    for (const json& i : doc["instances"]) c.instances.push_back(i);
  }
  for (std::size_t i = 0; i < c.instances.size(); ++i) {
    const std::string field = "instances[" + std::to_string(i) + "]";
    try {
      if (IsWalk(c.instances[i])) {
        WalkLanguage::FromJson(c.instances[i]);
      } else if (c.instances[i].value("type", "") == "explicit") {
        ExplicitDistribution::FromJson(c.instances[i]);
      } else {
        Fail(field + ".type", "must be 'explicit' or 'walk'");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      Fail(field, e.what());
    }
  }

  const json& sched = Section(doc, "schedule");
  try {
    c.schedule_kind = ParseScheduleKind(Read<std::string>(sched, "schedule.", "kind", "cosine"));
  } catch (const InvalidArgument&) {
    Fail("schedule.kind", "unknown schedule kind");
  }
  if (c.schedule_kind == ScheduleKind::kCustom) Fail("schedule.kind", "custom is not supported in configs");
  c.steps = Read(sched, "schedule.", "T", c.steps);
  if (c.steps < 1) Fail("schedule.T", "must be >= 1");

  const json& learner = Section(doc, "learner");
  c.learner.lambda = Read(learner, "learner.", "lambda", c.learner.lambda);
  c.learner.noise_buckets = Read(learner, "learner.", "noise_buckets", c.learner.noise_buckets);
  if (learner.contains("checkpoint_grid")) {
    c.learner.checkpoint_grid = Read(learner, "learner.", "checkpoint_grid",
                                     std::vector<std::int64_t>{});
  } else if (learner.contains("grid_start")) {
    const auto start = Read<std::int64_t>(learner, "learner.", "grid_start", 0);
    const double factor = Read(learner, "learner.", "grid_factor", 2.0);
    const auto stop = Read<std::int64_t>(learner, "learner.", "grid_stop", 0);
    if (start < 1) Fail("learner.grid_start", "must be >= 1");
    if (!(factor > 1.0)) Fail("learner.grid_factor", "must be > 1");
    if (stop < start) Fail("learner.grid_stop", "must be >= grid_start");
    c.learner.checkpoint_grid = GeometricGrid(start, factor, stop);
  }

  const json& sampler = Section(doc, "sampler");
  c.sampler.phase2_sigma = Read(sampler, "sampler.", "phase2_sigma", c.sampler.phase2_sigma);
  c.sampler.threshold = Read(sampler, "sampler.", "threshold", c.sampler.threshold);
  c.sampler.max_phase2_steps = Read(sampler, "sampler.", "max_phase2_steps", c.sampler.max_phase2_steps);
  c.sampler_samples = Read(sampler, "sampler.", "n_samples", c.sampler_samples);
  if (c.sampler_samples < 1) Fail("sampler.n_samples", "must be >= 1");

  const json& probes = Section(doc, "probes");
  c.direct.sigma = Read(probes, "probes.", "sigma", c.direct.sigma);
  c.direct.n_samples = Read(probes, "probes.", "n_samples", c.direct.n_samples);
  c.direct.uniform_corruptions =
      Read(probes, "probes.", "uniform_corruptions", c.direct.uniform_corruptions);
  c.q = Read(probes, "probes.", "q", c.q);
  c.corpus_size = Read(probes, "probes.", "corpus_size", c.corpus_size);
  c.n_neg = Read(probes, "probes.", "n_neg", c.n_neg);
  c.bank.min_count = Read(probes, "probes.", "min_count", c.bank.min_count);
  c.bank.max_contexts = Read(probes, "probes.", "max_contexts", c.bank.max_contexts);
  c.bank.candidate_cap = Read(probes, "probes.", "candidate_cap", c.bank.candidate_cap);
  if (c.direct.sigma < 0.0 || c.direct.sigma >= 1.0) Fail("probes.sigma", "must lie in [0, 1)");
  if (c.direct.n_samples < 1) Fail("probes.n_samples", "must be >= 1");
  if (c.direct.uniform_corruptions < 1) Fail("probes.uniform_corruptions", "must be >= 1");
  if (!(c.q > 0.0 && c.q <= 1.0)) Fail("probes.q", "must lie in (0, 1]");
  if (c.corpus_size < 1) Fail("probes.corpus_size", "must be >= 1");
  if (c.n_neg < 1) Fail("probes.n_neg", "must be >= 1");
  if (c.bank.candidate_cap < 1) Fail("probes.candidate_cap", "must be >= 1");

  const char* section = nullptr;
  switch (c.kind) {
    case ExperimentKind::kRateSeparation: section = "rate"; break;
    case ExperimentKind::kMarginalExpansion: section = "expansion"; break;
    case ExperimentKind::kParameterization: section = "parameterization"; break;
    case ExperimentKind::kThreshold: section = "threshold"; break;
    case ExperimentKind::kScaleVsTv: section = "scale_vs_tv"; break;
    case ExperimentKind::kPrediction1: section = "prediction1"; break;
    case ExperimentKind::kPrediction2: section = "prediction2"; break;
    case ExperimentKind::kProbeAgreement: section = "agreement"; break;
  }
  c.params = Section(doc, section);

  const bool theory = c.kind == ExperimentKind::kRateSeparation ||
                      c.kind == ExperimentKind::kMarginalExpansion ||
                      c.kind == ExperimentKind::kThreshold;
  const bool training = c.kind == ExperimentKind::kPrediction1 ||
                        c.kind == ExperimentKind::kPrediction2 ||
                        c.kind == ExperimentKind::kProbeAgreement;
  if (theory) {
    if (c.instances.empty()) Fail("instances", "at least one explicit instance is required");
    for (std::size_t i = 0; i < c.instances.size(); ++i) {
      if (IsWalk(c.instances[i])) {
        Fail("instances[" + std::to_string(i) + "].type", "must be 'explicit' for this kind");
      }
    }
  }
  if (training) {
    if (c.instances.size() != 1 || !IsWalk(c.instances[0])) {
      Fail("instances", "exactly one walk instance is required for this kind");
    }
    if (WalkOf(c).length() < 3) Fail("instances[0].H", "must be >= 3 for probes");
    try {
      c.learner.Validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
    try {
      c.sampler.Validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  if (c.kind == ExperimentKind::kRateSeparation) {
    if (ReadGrid(c.params, "rate.", "sigma_grid", {0.2, 0.1, 0.05, 0.02, 0.01}).size() < 3) {
      Fail("rate.sigma_grid", "needs at least three points");
    }
  }
  if (c.kind == ExperimentKind::kMarginalExpansion) {
    ReadGrid(c.params, "expansion.", "sigma_grid", {0.2});
  }
  if (c.kind == ExperimentKind::kThreshold) {
    ReadGrid(c.params, "threshold.", "sigma_grid", {0.01});
  }
  if (c.kind == ExperimentKind::kScaleVsTv) {
    const double a = Read(c.params, "scale_vs_tv.", "alpha", 0.25);
    const double s = Read(c.params, "scale_vs_tv.", "sigma", 1e-4);
    if (!(a > 0.0 && a < 0.5)) Fail("scale_vs_tv.alpha", "must lie in (0, 1/2)");
    if (!(s > 0.0 && s < 0.25)) Fail("scale_vs_tv.sigma", "must lie in (0, 1/4)");
  }

  c.resolved = doc;
  c.resolved["learner"]["checkpoint_grid"] = c.learner.checkpoint_grid;
  c.resolved["mechanisms"] = json::array();
  for (Mechanism m : c.mechanisms) c.resolved["mechanisms"].push_back(MechanismName(m));
  return c;
}

ExperimentConfig ExperimentConfig::FromFile(const std::filesystem::path& path) {
  return FromJson(LoadConfigDocument(path));
}

NoiseSchedule ExperimentConfig::Schedule() const {
  return MakeSchedule(schedule_kind, steps);
}

bool ExperimentResult::Pass() const {
  if (!errors.empty()) return false;
  for (const Check& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

ExperimentResult RunExperiment(const ExperimentConfig& config,
                               const std::filesystem::path& out_dir) {
  ExperimentResult result;
  result.name = config.name;
  result.kind = config.kind;
  std::filesystem::create_directories(out_dir);
  Writer w(out_dir, result);
  try {
    switch (config.kind) {
      case ExperimentKind::kRateSeparation:
        RunRateSeparation(config, w, result);
        break;
      case ExperimentKind::kMarginalExpansion:
        RunMarginalExpansion(config, w, result);
        break;
      case ExperimentKind::kParameterization:
        RunParameterization(config, w, result);
        break;
      case ExperimentKind::kThreshold:
        RunThreshold(config, w, result);
        break;
      case ExperimentKind::kScaleVsTv:
        RunScaleVsTv(config, w, result);
        break;
      case ExperimentKind::kPrediction1:
        RunPrediction1(config, w, result);
        break;
      case ExperimentKind::kPrediction2:
        RunPrediction2(config, w, result);
        break;
      case ExperimentKind::kProbeAgreement:
        RunProbeAgreement(config, w, result);
        break;
    }
  } catch (const std::exception& e) {
    result.errors.push_back(e.what());
  }

  json files = json::array();
  for (const std::string& f : result.files) {
    files.push_back({{"path", f}, {"fnv1a", Hex(Fnv1a(ReadFile(out_dir / f)))}});
  }
  json checks = json::array();
  for (const Check& c : result.checks) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  const json manifest = {{"name", config.name},
                         {"kind", ExperimentKindName(config.kind)},
                         {"version", kVersion},
                         {"seeds", config.seeds},
                         {"config", config.resolved},
                         {"constants", Constants(config)},
                         {"files", files},
                         {"checks", checks},
                         {"errors", result.errors},
                         {"status", result.Pass() ? "pass" : "fail"}};
  std::ofstream(out_dir / "manifest.json", std::ios::binary)
      << manifest.dump(2) << '\n';
  return result;
}

int RunExperimentFile(const std::filesystem::path& config_path,
                      const std::filesystem::path& out_override,
                      std::ostream& log) {
  ExperimentConfig config;
  try {
    config = ExperimentConfig::FromFile(config_path);
  } catch (const InvalidArgument& e) {
    log << "invalid config " << config_path.string() << ": " << e.what() << '\n';
    return 2;
  }
  const std::filesystem::path out =
      out_override.empty() ? config.output_dir : out_override;
  const ExperimentResult r = RunExperiment(config, out);
  for (const Check& c : r.checks) {
    log << (c.pass ? "PASS " : "FAIL ") << c.name << '\n';
  }
  for (const std::string& e : r.errors) log << "ERROR " << e << '\n';
  log << config.name << ": " << (r.Pass() ? "pass" : "fail") << " ("
      << out.string() << ")\n";
  return r.Pass() ? 0 : 1;
}

json ReportDirectory(const std::filesystem::path& dir) {
  const std::filesystem::path path = dir / "manifest.json";
  if (!std::filesystem::exists(path)) {
    throw InvalidArgument("no manifest.json in " + dir.string());
  }
  const json manifest = json::parse(ReadFile(path));
  json failures = json::array();
  json checks = json::array();
  for (const json& c : manifest.at("checks")) {
    checks.push_back({{"name", c.at("name")}, {"pass", c.at("pass")}});
    if (!c.at("pass").get<bool>()) failures.push_back(c.at("name"));
  }
  for (const json& e : manifest.at("errors")) {
    failures.push_back("error: " + e.get<std::string>());
  }
  for (const json& f : manifest.at("files")) {
    const auto file = dir / f.at("path").get<std::string>();
    if (!std::filesystem::exists(file)) {
      failures.push_back("missing file: " + f.at("path").get<std::string>());
    } else if (Hex(Fnv1a(ReadFile(file))) != f.at("fnv1a").get<std::string>()) {
      failures.push_back("modified file: " + f.at("path").get<std::string>());
    }
  }
  return {{"name", manifest.at("name")},
          {"kind", manifest.at("kind")},
          {"checks", checks},
          {"failures", failures},
          {"files", manifest.at("files").size()}};
}

std::string ReportText(const json& report) {
  std::ostringstream out;
  out << report.at("name").get<std::string>() << " ["
      << report.at("kind").get<std::string>() << "]\n";
  for (const json& c : report.at("checks")) {
    out << "  " << (c.at("pass").get<bool>() ? "pass " : "FAIL ")
        << c.at("name").get<std::string>() << '\n';
  }
  const auto& failures = report.at("failures");
  out << failures.size() << " failure(s)\n";
  for (const json& f : failures) out << "  " << f.get<std::string>() << '\n';
  return out.str();
}

std::uint64_t HashDirectory(const std::filesystem::path& dir) {
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      names.push_back(std::filesystem::relative(entry.path(), dir).generic_string());
    }
  }
  std::sort(names.begin(), names.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const std::string& n : names) {
    h = Fnv1a(n, h);
    h = Fnv1a(ReadFile(dir / n), h);
  }
  return h;
}

}  // namespace dlmlab
