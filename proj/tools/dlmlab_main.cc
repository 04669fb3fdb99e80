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

// Command-line front end. Every subcommand takes --seed and --out; --out
// is a file or directory depending on the command, "-" meaning stdout.

#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "dlmlab/exact_reverse.h"
#include "dlmlab/experiment.h"
#include "dlmlab/learner.h"
#include "dlmlab/probes.h"
#include "dlmlab/samplers.h"
#include "dlmlab/seeding.h"
#include "dlmlab/support.h"
#include "dlmlab/theory_lab.h"
#include "dlmlab/walk_language.h"

namespace dlmlab {
namespace {

struct Common {
  std::uint64_t seed = 0;
  std::string out = "-";
};

struct LangFlags {
  int K = 16;
  int H = 16;
  std::string walk_json;

  WalkLanguage Build() const {
    WalkParams params;
    if (!walk_json.empty()) {
      params = WalkParams::FromJson(nlohmann::json::parse(walk_json));
    }
    return WalkLanguage(K, H, params);
  }
};

struct ScheduleFlags {
  std::string kind = "cosine";
  int T = 100;

  NoiseSchedule Build() const { return MakeSchedule(ParseScheduleKind(kind), T); }
};

void AddCommon(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "master seed");
  app->add_option("--out", c.out, "output path, - for stdout");
}

void AddLang(CLI::App* app, LangFlags& l) {
  app->add_option("--K", l.K, "vocabulary size");
  app->add_option("--H", l.H, "sequence length");
  app->add_option("--walk", l.walk_json, "walk parameters as JSON");
}

void AddSchedule(CLI::App* app, ScheduleFlags& s) {
  app->add_option("--schedule", s.kind, "linear_cumulative or cosine");
  app->add_option("--T", s.T, "number of steps");
}

// Writes through `fn` to the --out file or stdout.
template <typename Fn>
void Emit(const std::string& out, Fn fn) {
  if (out == "-") {
    std::cout.precision(17);
    fn(std::cout);
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw InvalidArgument("cannot write " + out);
  file.precision(17);
  fn(file);
}

int RunConfigOfKind(const std::string& path, const Common& c,
                    ExperimentKind want) {
  const ExperimentConfig config = ExperimentConfig::FromFile(path);
  if (config.kind != want) {
    std::cerr << "config kind is " << ExperimentKindName(config.kind)
              << ", expected " << ExperimentKindName(want) << '\n';
    return 2;
  }
  return RunExperimentFile(path, c.out == "-" ? "" : c.out, std::cout);
}

}  // namespace
}  // namespace dlmlab

int main(int argc, char** argv) {
  using namespace dlmlab;
  CLI::App app{"dlmlab: support-first discrete diffusion laboratory"};
  app.require_subcommand(1);
  int status = 0;

  Common schedule_common;
  ScheduleFlags schedule_flags;
  auto* schedule = app.add_subcommand("schedule", "print t,beta,sigma");
  AddCommon(schedule, schedule_common);
  AddSchedule(schedule, schedule_flags);
  schedule->callback([&] {
    const NoiseSchedule s = schedule_flags.Build();
    Emit(schedule_common.out, [&](std::ostream& out) {
      out << "t,beta,sigma\n";
      for (int t = 1; t <= s.steps(); ++t) {
        out << t << ',' << s.beta(t) << ',' << s.sigma(t) << '\n';
      }
    });
  });

  auto* lang = app.add_subcommand("lang", "walk language tools");
  lang->require_subcommand(1);
  Common lang_common;
  LangFlags lang_flags;
  int lang_count = 1000;
  auto* lang_sample = lang->add_subcommand("sample", "sample a corpus");
  AddCommon(lang_sample, lang_common);
  AddLang(lang_sample, lang_flags);
  lang_sample->add_option("--count", lang_count, "number of sequences");
  lang_sample->callback([&] {
    const auto corpus =
        SampleCorpus(lang_flags.Build(), lang_count, lang_common.seed);
    Emit(lang_common.out, [&](std::ostream& out) { WriteCorpus(out, corpus); });
  });

  Common kernel_common;
  ScheduleFlags kernel_schedule;
  std::string kernel_dist, kernel_mech = "uniform", kernel_state;
  int kernel_t = 1;
  auto* kernel = app.add_subcommand("kernel", "exact one-token scores of a state");
  AddCommon(kernel, kernel_common);
  AddSchedule(kernel, kernel_schedule);
  kernel->add_option("--dist", kernel_dist, "explicit distribution JSON file")->required();
  kernel->add_option("--mechanism", kernel_mech, "uniform or absorbing");
  kernel->add_option("--t", kernel_t, "step index");
  kernel->add_option("--state", kernel_state, "space-separated tokens, 0 = mask")->required();
  kernel->callback([&] {
    std::ifstream in(kernel_dist);
    const auto dist = ExplicitDistribution::FromJson(nlohmann::json::parse(in));
    const ScoreTable table =
        ExactScoreTable(dist, kernel_schedule.Build(), kernel_t,
                        ParseSeq(kernel_state), ParseMechanism(kernel_mech));
    Emit(kernel_common.out, [&](std::ostream& out) { WriteScoreTableCsv(out, table); });
  });

  auto* verify = app.add_subcommand("verify", "exact-oracle checks");
  verify->require_subcommand(1);
  Common rates_common, threshold_common, b1_common;
  std::string rates_config, threshold_config;
  auto* rates = verify->add_subcommand("rates", "rate separation from a config");
  AddCommon(rates, rates_common);
  rates->add_option("config", rates_config, "config file")->required();
  rates->callback([&] {
    status = RunConfigOfKind(rates_config, rates_common,
                             ExperimentKind::kRateSeparation);
  });
  auto* threshold = verify->add_subcommand("threshold", "threshold recovery from a config");
  AddCommon(threshold, threshold_common);
  threshold->add_option("config", threshold_config, "config file")->required();
  threshold->callback([&] {
    status = RunConfigOfKind(threshold_config, threshold_common,
                             ExperimentKind::kThreshold);
  });
  double b1_sigma = 1e-4, b1_alpha = 0.25;
  auto* b1 = verify->add_subcommand("example-b1", "score scale versus TV example");
  AddCommon(b1, b1_common);
  b1->add_option("--sigma", b1_sigma, "noise level");
  b1->add_option("--alpha", b1_alpha, "exponent in (0, 1/2)");
  b1->callback([&] {
    const ScaleVsTvResult r = ScaleVsTvExample(b1_sigma, b1_alpha);
    Emit(b1_common.out, [&](std::ostream& out) { out << r.ToJson().dump(2) << '\n'; });
  });

  Common train_common;
  LangFlags train_lang;
  ScheduleFlags train_schedule;
  std::string train_mech = "uniform";
  LearnerConfig train_config;
  auto* train = app.add_subcommand("train", "train the tabular denoiser on the walk language");
  AddCommon(train, train_common);
  AddLang(train, train_lang);
  AddSchedule(train, train_schedule);
  train->add_option("--mechanism", train_mech, "uniform or absorbing");
  train->add_option("--lambda", train_config.lambda, "additive smoothing");
  train->add_option("--noise-buckets", train_config.noise_buckets, "sigma buckets");
  train->add_option("--grid", train_config.checkpoint_grid, "checkpoints in samples")->required();
  train->callback([&] {
    if (train_common.out == "-") throw InvalidArgument("train needs --out DIR");
    const WalkLanguage l = train_lang.Build();
    const auto cks = TrainStream(SourceFor(l), l.vocab_size(), l.length(),
                                 ParseMechanism(train_mech), train_schedule.Build(),
                                 train_config, train_common.seed);
    SaveCheckpoints(train_common.out, cks, train_config, train_common.seed);
  });

  Common sample_common;
  LangFlags sample_lang;
  ScheduleFlags sample_schedule;
  std::string sample_ckpt, sample_mode = "threshold";
  SamplerConfig sample_config;
  int sample_n = 2000;
  auto* sample = app.add_subcommand("sample", "sample from the last checkpoint");
  AddCommon(sample, sample_common);
  AddLang(sample, sample_lang);
  AddSchedule(sample, sample_schedule);
  sample->add_option("--checkpoints", sample_ckpt, "directory written by train")->required();
  sample->add_option("--mode", sample_mode, "ancestral, threshold or hardmax");
  sample->add_option("--phase2-sigma", sample_config.phase2_sigma, "phase switch level");
  sample->add_option("--threshold", sample_config.threshold, "scaled score threshold");
  sample->add_option("--max-phase2-steps", sample_config.max_phase2_steps, "0 means H*K");
  sample->add_option("--n", sample_n, "number of samples");
  sample->callback([&] {
    const auto cks = LoadCheckpoints(sample_ckpt);
    const WalkLanguage l = sample_lang.Build();
    sample_config.mode = ParseSamplerMode(sample_mode);
    const LearnedReverseModel model(cks.back().model, sample_schedule.Build());
    Emit(sample_common.out, [&](std::ostream& out) {
      out << "index,sequence,in_support,distance\n";
      for (int i = 0; i < sample_n; ++i) {
        const SampleResult r =
            Sample(model, sample_config, DeriveSeed(sample_common.seed, "sample", i));
        const int d = DistanceToSupport(r.seq, l);
        out << i << ',' << FormatSeq(r.seq) << ',' << (d == 0) << ',' << d << '\n';
      }
    });
  });

  auto* probe = app.add_subcommand("probe", "probe checkpoints");
  probe->require_subcommand(1);
  Common direct_common, indirect_common;
  LangFlags direct_lang;
  std::string direct_ckpt;
  DirectProbeConfig direct_config;
  auto* direct = probe->add_subcommand("direct", "support and frequency probes on the language");
  AddCommon(direct, direct_common);
  AddLang(direct, direct_lang);
  direct->add_option("--checkpoints", direct_ckpt, "directory written by train")->required();
  direct->add_option("--sigma", direct_config.sigma, "probe level, 0 means 1/H");
  direct->add_option("--n", direct_config.n_samples, "validation sequences");
  direct->add_option("--corruptions", direct_config.uniform_corruptions, "uniform corruptions per sequence");
  direct->callback([&] {
    const WalkLanguage l = direct_lang.Build();
    if (direct_config.sigma == 0.0) direct_config.sigma = 1.0 / l.length();
    ProbeCurve s{"support", {}, {}}, p{"pairwise", {}, {}}, t{"top1", {}, {}};
    for (const Checkpoint& ck : LoadCheckpoints(direct_ckpt)) {
      const DirectProbeResult r =
          DirectProbes(ModelSequenceScorer(ck.model, direct_config.sigma), l,
                       ck.model.mechanism(), direct_config, direct_common.seed);
      for (auto [curve, v] : {std::pair{&s, r.support}, {&p, r.pairwise}, {&t, r.top1}}) {
        curve->checkpoints.push_back(ck.tokens_seen);
        curve->values.push_back(v);
      }
    }
    Emit(direct_common.out, [&](std::ostream& out) { WriteProbeCurvesCsv(out, {s, p, t}); });
  });

  std::string indirect_ckpt, indirect_corpus, indirect_strategy = "freq_matched";
  BankParams bank_params;
  double indirect_sigma = 0.0;
  int n_neg = 128;
  auto* indirect = probe->add_subcommand("indirect", "context-bank probes from a corpus");
  AddCommon(indirect, indirect_common);
  indirect->add_option("--checkpoints", indirect_ckpt, "directory written by train")->required();
  indirect->add_option("--corpus", indirect_corpus, "corpus file, one sequence per line")->required();
  indirect->add_option("--sigma", indirect_sigma, "probe level, 0 means 1/H");
  indirect->add_option("--strategy", indirect_strategy, "freq_matched, uniform or frequent");
  indirect->add_option("--n-neg", n_neg, "negatives per context");
  indirect->add_option("--min-count", bank_params.min_count, "minimum context count");
  indirect->add_option("--max-contexts", bank_params.max_contexts, "context cap");
  indirect->add_option("--candidate-cap", bank_params.candidate_cap, "candidates per context");
  indirect->callback([&] {
    std::ifstream in(indirect_corpus);
    if (!in) throw InvalidArgument("cannot read " + indirect_corpus);
    const auto cks = LoadCheckpoints(indirect_ckpt);
    const int k = cks.front().model.vocab_size();
    const double sigma = indirect_sigma == 0.0 ? 1.0 / cks.front().model.length()
                                               : indirect_sigma;
    const ContextBank bank = BuildContextBank(ReadCorpus(in), k, bank_params);
    const NegativeStrategy strategy = ParseNegativeStrategy(indirect_strategy);
    ProbeCurve s{"support", {}, {}}, p{"pairwise", {}, {}}, t{"top1", {}, {}};
    for (const Checkpoint& ck : cks) {
      const WindowScorer scorer = ModelWindowScorer(ck.model, sigma);
      const FrequencyProbeResult f = IndirectFrequencyProbes(scorer, bank);
      const double sup =
          IndirectSupportProbe(scorer, bank, strategy, n_neg, indirect_common.seed).accuracy;
      for (auto [curve, v] : {std::pair{&s, sup}, {&p, f.pairwise}, {&t, f.top1}}) {
        curve->checkpoints.push_back(ck.tokens_seen);
        curve->values.push_back(v);
      }
    }
    Emit(indirect_common.out, [&](std::ostream& out) { WriteProbeCurvesCsv(out, {s, p, t}); });
  });

  Common report_common;
  std::string report_dir;
  bool report_json = false;
  auto* report = app.add_subcommand("report", "summarize an artifact directory");
  AddCommon(report, report_common);
  report->add_option("dir", report_dir, "artifact directory")->required();
  report->add_flag("--json", report_json, "print the consolidated JSON");
  report->callback([&] {
    const nlohmann::json r = ReportDirectory(report_dir);
    Emit(report_common.out, [&](std::ostream& out) {
      out << (report_json ? r.dump(2) + "\n" : ReportText(r));
    });
    status = r.at("failures").empty() ? 0 : 1;
  });

  Common run_common;
  std::string run_config;
  auto* run = app.add_subcommand("run", "run an experiment config");
  AddCommon(run, run_common);
  run->add_option("config", run_config, "TOML or JSON config")->required();
  run->callback([&] {
    status = RunExperimentFile(run_config, run_common.out == "-" ? "" : run_common.out,
                               std::cout);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return status;
}
