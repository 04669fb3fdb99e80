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

#include "dlmlab/probes.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>

#include "dlmlab/seeding.h"

namespace dlmlab {
namespace {

// argmax over `tokens` of scores, ties to the smaller id.
Token ArgmaxOver(const std::vector<Token>& tokens, const TokenVector& scores) {
  Token best = tokens.front();
  for (Token a : tokens) {
    if (scores[a] > scores[best] || (scores[a] == scores[best] && a < best)) {
      best = a;
    }
  }
  return best;
}

double PairScore(const std::vector<Token>& pos, const std::vector<Token>& neg,
                 const TokenVector& scores) {
  double sum = 0.0;
  for (Token a : pos) {
    for (Token b : neg) sum += TieAware(scores[a], scores[b]);
  }
  return sum / (pos.size() * neg.size());
}

// Tie-aware fraction of pairs with target(a) > target(b) that the scores
// order the same way; nullopt when there is no such pair.
template <typename Target>
std::optional<double> RankAgreement(const std::vector<Token>& tokens,
                                    const Target& target,
                                    const TokenVector& scores) {
  double sum = 0.0;
  int n = 0;
  for (Token a : tokens) {
    for (Token b : tokens) {
      if (!(target[a] > target[b])) continue;
      sum += TieAware(scores[a], scores[b]);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

struct DirectValues {
  std::optional<double> support;
  std::optional<double> pairwise;
  std::optional<double> top1;
};

DirectValues ScoreOne(const TokenVector& scores, const WalkLanguage& lang,
                      Token left, Token right) {
  std::vector<Token> valid, invalid;
  for (Token a = 1; a <= lang.vocab_size(); ++a) {
    (lang.Allowed(left, a) && lang.Allowed(a, right) ? valid : invalid)
        .push_back(a);
  }
  DirectValues out;
  if (valid.empty()) return out;
  if (!invalid.empty()) out.support = PairScore(valid, invalid, scores);
  const TokenVector q = *lang.CenterConditional(left, right);
  out.top1 = ArgmaxOver(valid, scores) == ArgmaxOver(valid, q) ? 1.0 : 0.0;
  if (valid.size() >= 2) out.pairwise = RankAgreement(valid, q, scores);
  return out;
}

struct Mean {
  double sum = 0.0;
  std::size_t n = 0;
  void Add(std::optional<double> v) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  double Value() const { return n ? sum / n : 0.0; }
};

}  // namespace

SequenceScorer ModelSequenceScorer(const TabularDenoiser& model,
                                   double sigma) {
  return [&model, sigma](const TokenSeq& x_t, int h) {
    return model.Posterior(x_t, h, sigma);
  };
}

SequenceScorer OracleSequenceScorer(const WalkLanguage& lang) {
  return [lang](const TokenSeq& x_t, int h) {
    if (h <= 0 || h + 1 >= static_cast<int>(x_t.size())) {
      throw InvalidArgument("oracle scorer needs an interior position");
    }
    return lang.CenterConditional(x_t[h - 1], x_t[h + 1])
        .value_or(TokenVector(lang.vocab_size() + 1, 0.0));
  };
}

WindowScorer ModelWindowScorer(const TabularDenoiser& model, double sigma) {
  return [&model, sigma](Token left, Token right) {
    if (model.mechanism() == Mechanism::kAbsorbing) {
      return model.WindowPosterior(left, kMask, right, sigma);
    }
    const int k = model.vocab_size();
    TokenVector mean(k + 1, 0.0);
    for (Token own = 1; own <= k; ++own) {
      const TokenVector p = model.WindowPosterior(left, own, right, sigma);
      for (int a = 1; a <= k; ++a) mean[a] += p[a] / k;
    }
    return mean;
  };
}

WindowScorer OracleWindowScorer(const WalkLanguage& lang) {
  return [lang](Token left, Token right) {
    return lang.CenterConditional(left, right)
        .value_or(TokenVector(lang.vocab_size() + 1, 0.0));
  };
}

double TieAware(double a, double b) {
  if (a > b) return 1.0;
  return a == b ? 0.5 : 0.0;
}

nlohmann::json DirectProbeConfig::ToJson() const {
  return {{"sigma", sigma},
          {"n_samples", n_samples},
          {"uniform_corruptions", uniform_corruptions}};
}

DirectProbeConfig DirectProbeConfig::FromJson(const nlohmann::json& doc) {
  DirectProbeConfig c;
  c.sigma = doc.value("sigma", c.sigma);
  c.n_samples = doc.value("n_samples", c.n_samples);
  c.uniform_corruptions = doc.value("uniform_corruptions", c.uniform_corruptions);
  if (c.n_samples < 1 || c.uniform_corruptions < 1 || c.sigma < 0.0 ||
      c.sigma > 1.0) {
    throw InvalidArgument("invalid direct probe config");
  }
  return c;
}

nlohmann::json DirectProbeResult::ToJson() const {
  return {{"support", support}, {"pairwise", pairwise}, {"top1", top1}};
}

DirectProbeResult DirectProbes(const SequenceScorer& scorer,
                               const WalkLanguage& lang, Mechanism mechanism,
                               const DirectProbeConfig& config,
                               std::uint64_t seed) {
  const int len = lang.length();
  const int k = lang.vocab_size();
  if (len < 3) throw InvalidArgument("direct probes need H >= 3");
  std::mt19937_64 rng(DeriveSeed(seed, "validation"));
  std::uniform_int_distribution<int> position(1, len - 2);
  std::uniform_int_distribution<int> token(1, k);
  const int reps =
      mechanism == Mechanism::kUniform ? config.uniform_corruptions : 1;
  Mean support, pairwise, top1;
  for (int i = 0; i < config.n_samples; ++i) {
    const TokenSeq x = lang.Sample(rng);
    const int h = position(rng);
    Mean s, p, t;
    for (int r = 0; r < reps; ++r) {
      TokenSeq x_t = x;
      x_t[h] = mechanism == Mechanism::kAbsorbing ? kMask : token(rng);
      const DirectValues v = ScoreOne(scorer(x_t, h), lang, x[h - 1], x[h + 1]);
      s.Add(v.support);
      p.Add(v.pairwise);
      t.Add(v.top1);
    }
    if (s.n) support.Add(s.Value());
    if (p.n) pairwise.Add(p.Value());
    if (t.n) top1.Add(t.Value());
  }
  return {support.Value(), pairwise.Value(), top1.Value()};
}

nlohmann::json BankParams::ToJson() const {
  return {{"min_count", min_count},
          {"max_contexts", max_contexts},
          {"candidate_cap", candidate_cap}};
}

nlohmann::json ContextBank::ToJson() const {
  nlohmann::json ctx = nlohmann::json::array();
  for (const BankContext& c : contexts) {
    ctx.push_back({{"left", c.left},
                   {"right", c.right},
                   {"total", c.total},
                   {"counts", c.counts},
                   {"candidates", c.candidates}});
  }
  return {{"vocab_size", vocab_size}, {"params", params.ToJson()},
          {"empty", empty},           {"global", global},
          {"contexts", ctx}};
}

ContextBank ContextBank::FromJson(const nlohmann::json& doc) {
  ContextBank bank;
  bank.vocab_size = doc.at("vocab_size").get<int>();
  const auto& p = doc.at("params");
  bank.params.min_count = p.at("min_count").get<std::uint64_t>();
  bank.params.max_contexts = p.at("max_contexts").get<std::size_t>();
  bank.params.candidate_cap = p.at("candidate_cap").get<std::size_t>();
  bank.empty = doc.at("empty").get<bool>();
  bank.global = doc.at("global").get<std::vector<std::uint64_t>>();
  for (const auto& c : doc.at("contexts")) {
    bank.contexts.push_back({c.at("left").get<Token>(),
                             c.at("right").get<Token>(),
                             c.at("total").get<std::uint64_t>(),
                             c.at("counts").get<std::vector<std::uint64_t>>(),
                             c.at("candidates").get<std::vector<Token>>()});
  }
  return bank;
}

ContextBank BuildContextBank(const std::vector<TokenSeq>& corpus,
                             int vocab_size, const BankParams& params) {
  ContextBank bank;
  bank.vocab_size = vocab_size;
  bank.params = params;
  bank.global.assign(vocab_size + 1, 0);
  std::map<std::pair<Token, Token>, std::vector<std::uint64_t>> counts;
  for (const TokenSeq& seq : corpus) {
    CheckTokens(seq, vocab_size, false);
    for (std::size_t h = 1; h + 1 < seq.size(); ++h) {
      auto& row = counts[{seq[h - 1], seq[h + 1]}];
      if (row.empty()) row.assign(vocab_size + 1, 0);
      ++row[seq[h]];
    }
  }
  for (auto& [key, row] : counts) {
    BankContext c{key.first, key.second, 0, std::move(row), {}};
    for (std::uint64_t n : c.counts) c.total += n;
    if (c.total < params.min_count) continue;
    for (Token a = 1; a <= vocab_size; ++a) {
      if (c.counts[a] > 0) c.candidates.push_back(a);
    }
    std::stable_sort(c.candidates.begin(), c.candidates.end(),
                     [&c](Token a, Token b) { return c.counts[a] > c.counts[b]; });
    if (c.candidates.size() > params.candidate_cap) {
      c.candidates.resize(params.candidate_cap);
    }
    bank.contexts.push_back(std::move(c));
  }
  // The map already orders by (left, right), so a stable sort on totals
  // breaks ties by key.
  std::stable_sort(bank.contexts.begin(), bank.contexts.end(),
                   [](const BankContext& a, const BankContext& b) {
                     return a.total > b.total;
                   });
  if (bank.contexts.size() > params.max_contexts) {
    bank.contexts.resize(params.max_contexts);
  }
  for (const BankContext& c : bank.contexts) {
    for (int a = 1; a <= vocab_size; ++a) bank.global[a] += c.counts[a];
  }
  bank.empty = bank.contexts.empty();
  return bank;
}

std::string_view NegativeStrategyName(NegativeStrategy s) {
  switch (s) {
    case NegativeStrategy::kFreqMatched:
      return "freq_matched";
    case NegativeStrategy::kUniform:
      return "uniform";
    case NegativeStrategy::kFrequent:
      return "frequent";
  }
  return "?";
}

NegativeStrategy ParseNegativeStrategy(std::string_view name) {
  if (name == "freq_matched") return NegativeStrategy::kFreqMatched;
  if (name == "uniform") return NegativeStrategy::kUniform;
  if (name == "frequent") return NegativeStrategy::kFrequent;
  throw InvalidArgument("unknown negative strategy '" + std::string(name) +
                        "'");
}

std::vector<Token> SelectNegatives(const std::vector<Token>& candidates,
                                   const std::vector<std::uint64_t>& global,
                                   NegativeStrategy strategy, int n_neg,
                                   std::mt19937_64& rng) {
  const int k = static_cast<int>(global.size()) - 1;
  std::vector<bool> excluded(k + 1, false);
  for (Token a : candidates) excluded[a] = true;
  std::vector<Token> eligible;
  for (Token b = 1; b <= k; ++b) {
    if (!excluded[b]) eligible.push_back(b);
  }
  const std::size_t want = std::min<std::size_t>(n_neg, eligible.size());
  std::vector<Token> out;
  switch (strategy) {
    case NegativeStrategy::kUniform: {
      std::shuffle(eligible.begin(), eligible.end(), rng);
      out.assign(eligible.begin(), eligible.begin() + want);
      break;
    }
    case NegativeStrategy::kFrequent: {
      std::stable_sort(eligible.begin(), eligible.end(), [&](Token a, Token b) {
        return global[a] > global[b];
      });
      out.assign(eligible.begin(), eligible.begin() + want);
      break;
    }
    case NegativeStrategy::kFreqMatched: {
      auto level = [&](Token a) { return std::log1p(double(global[a])); };
      std::vector<bool> used(k + 1, false);
      for (std::size_t i = 0; out.size() < want; ++i) {
        const double target = level(candidates[i % candidates.size()]);
        Token best = kMask;
        double best_gap = 0.0;
        for (Token b : eligible) {
          if (used[b]) continue;
          const double gap = std::abs(level(b) - target);
          if (best == kMask || gap < best_gap) {
            best = b;
            best_gap = gap;
          }
        }
        used[best] = true;
        out.push_back(best);
      }
      break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

nlohmann::json IndirectSupportResult::ToJson() const {
  return {{"accuracy", accuracy},
          {"contexts_used", contexts_used},
          {"short_contexts", short_contexts}};
}

IndirectSupportResult IndirectSupportProbe(const WindowScorer& scorer,
                                           const ContextBank& bank,
                                           NegativeStrategy strategy,
                                           int n_neg, std::uint64_t seed) {
  IndirectSupportResult result;
  Mean acc;
  for (std::size_t i = 0; i < bank.contexts.size(); ++i) {
    const BankContext& c = bank.contexts[i];
    std::mt19937_64 rng(DeriveSeed(seed, "probe-negatives", i));
    const std::vector<Token> neg =
        SelectNegatives(c.candidates, bank.global, strategy, n_neg, rng);
    if (static_cast<int>(neg.size()) < n_neg) ++result.short_contexts;
    if (neg.empty()) continue;
    acc.Add(PairScore(c.candidates, neg, scorer(c.left, c.right)));
  }
  result.accuracy = acc.Value();
  result.contexts_used = acc.n;
  return result;
}

nlohmann::json FrequencyProbeResult::ToJson() const {
  return {{"pairwise", pairwise},
          {"top1", top1},
          {"pairwise_contexts", pairwise_contexts},
          {"top1_contexts", top1_contexts}};
}

FrequencyProbeResult IndirectFrequencyProbes(const WindowScorer& scorer,
                                             const ContextBank& bank) {
  Mean pairwise, top1;
  for (const BankContext& c : bank.contexts) {
    const TokenVector scores = scorer(c.left, c.right);
    pairwise.Add(RankAgreement(c.candidates, c.counts, scores));
    // Candidates are count-sorted with ties by id, so the mode is first.
    top1.Add(ArgmaxOver(c.candidates, scores) == c.candidates.front() ? 1.0
                                                                       : 0.0);
  }
  return {pairwise.Value(), top1.Value(), pairwise.n, top1.n};
}

nlohmann::json SyntheticOracleResult::ToJson() const {
  return {{"support_direct", support_direct},
          {"pairwise_direct", pairwise_direct},
          {"contexts_used", contexts_used}};
}

SyntheticOracleResult SyntheticOracleProbes(const WindowScorer& scorer,
                                            const WalkLanguage& lang,
                                            const ContextBank& bank,
                                            int n_neg, std::uint64_t seed) {
  Mean support, pairwise;
  std::size_t used = 0;
  for (std::size_t i = 0; i < bank.contexts.size(); ++i) {
    const BankContext& c = bank.contexts[i];
    const auto q = lang.CenterConditional(c.left, c.right);
    if (!q) continue;
    ++used;
    std::vector<Token> cands;
    for (Token a = 1; a <= lang.vocab_size(); ++a) {
      if ((*q)[a] > 0.0) cands.push_back(a);
    }
    const TokenVector scores = scorer(c.left, c.right);
    std::mt19937_64 rng(DeriveSeed(seed, "probe-negatives", i));
    const std::vector<Token> neg = SelectNegatives(
        cands, bank.global, NegativeStrategy::kFreqMatched, n_neg, rng);
    if (!neg.empty()) support.Add(PairScore(cands, neg, scores));
    pairwise.Add(RankAgreement(cands, *q, scores));
  }
  return {support.Value(), pairwise.Value(), used};
}

std::int64_t TransitionTime(const ProbeCurve& curve, double q) {
  if (curve.values.empty() || curve.values.size() != curve.checkpoints.size()) {
    throw InvalidArgument("probe curve is empty or ragged");
  }
  const double start = curve.values.front();
  const double peak = *std::max_element(curve.values.begin(), curve.values.end());
  if (peak == start) return curve.checkpoints.front();
  const double level = start + q * (peak - start);
  for (std::size_t i = 0; i < curve.values.size(); ++i) {
    if (curve.values[i] >= level) return curve.checkpoints[i];
  }
  return curve.checkpoints.back();
}

void WriteProbeCurvesCsv(std::ostream& out,
                         const std::vector<ProbeCurve>& curves) {
  if (curves.empty()) throw InvalidArgument("no curves to write");
  out << "tokens_seen";
  for (const ProbeCurve& c : curves) {
    if (c.checkpoints != curves.front().checkpoints ||
        c.values.size() != c.checkpoints.size()) {
      throw InvalidArgument("curves do not share checkpoints");
    }
    out << ',' << c.metric_name;
  }
  out << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < curves.front().checkpoints.size(); ++i) {
    out << curves.front().checkpoints[i];
    for (const ProbeCurve& c : curves) out << ',' << c.values[i];
    out << '\n';
  }
}

}  // namespace dlmlab
