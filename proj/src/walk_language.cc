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

#include "dlmlab/walk_language.h"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace dlmlab {

nlohmann::json WalkParams::ToJson() const {
  return nlohmann::json{{"amp_up", amp_up},         {"amp_stay", amp_stay},
                        {"amp_down", amp_down},     {"phase_up", phase_up},
                        {"phase_stay", phase_stay}, {"phase_down", phase_down},
                        {"freq_up", freq_up},       {"freq_stay", freq_stay},
                        {"freq_down", freq_down},
                        {"exponent_scale", exponent_scale}};
}

WalkParams WalkParams::FromJson(const nlohmann::json& doc) {
  WalkParams p;
  auto read = [&](const char* key, double& field) {
    if (doc.contains(key)) field = doc.at(key).get<double>();
  };
  read("amp_up", p.amp_up);
  read("amp_stay", p.amp_stay);
  read("amp_down", p.amp_down);
  read("phase_up", p.phase_up);
  read("phase_stay", p.phase_stay);
  read("phase_down", p.phase_down);
  read("freq_up", p.freq_up);
  read("freq_stay", p.freq_stay);
  read("freq_down", p.freq_down);
  read("exponent_scale", p.exponent_scale);
  return p;
}

WalkLanguage::WalkLanguage(int vocab_size, int length, WalkParams params)
    : vocab_size_(vocab_size), length_(length), params_(params) {
  if (vocab_size_ < 2) throw InvalidArgument("walk language needs K >= 2");
  if (length_ < 2) throw InvalidArgument("walk language needs H >= 2");
  const int k = vocab_size_;
  transition_.assign(static_cast<std::size_t>(k) * k, 0.0);
  for (Token v = 1; v <= k; ++v) {
    const double x = v - 1;
    const double s = params_.exponent_scale;
    const double up =
        params_.amp_up * std::exp(s * std::sin(params_.freq_up * x + params_.phase_up));
    const double stay = params_.amp_stay *
                        std::exp(s * std::sin(params_.freq_stay * x + params_.phase_stay));
    const double down = params_.amp_down *
                        std::exp(s * std::cos(params_.freq_down * x + params_.phase_down));
    if (!(up > 0.0 && stay > 0.0 && down > 0.0)) {
      throw InvalidArgument("walk weights must be strictly positive");
    }
    const double total = up + stay + down;
    const Token lower = v == 1 ? 1 : v - 1;
    const Token upper = v == k ? k : v + 1;
    double* row = &transition_[static_cast<std::size_t>(v - 1) * k];
    row[lower - 1] += down / total;
    row[v - 1] += stay / total;
    row[upper - 1] += up / total;
  }
}

void WalkLanguage::CheckToken(Token v) const {
  if (v < 1 || v > vocab_size_) {
    throw InvalidArgument("token " + std::to_string(v) + " outside [1.." +
                          std::to_string(vocab_size_) + "]");
  }
}

StepProbs WalkLanguage::TransitionProbs(Token from) const {
  CheckToken(from);
  StepProbs p;
  p.stay = Transition(from, from);
  if (from > 1) p.down = Transition(from, from - 1);
  if (from < vocab_size_) p.up = Transition(from, from + 1);
  return p;
}

double WalkLanguage::Transition(Token from, Token to) const {
  CheckToken(from);
  CheckToken(to);
  return transition_[static_cast<std::size_t>(from - 1) * vocab_size_ +
                     (to - 1)];
}

bool WalkLanguage::Allowed(Token from, Token to) const {
  return std::abs(from - to) <= 1;
}

bool WalkLanguage::Contains(const TokenSeq& seq) const {
  if (static_cast<int>(seq.size()) != length_) {
    throw InvalidArgument("sequence length differs from H");
  }
  CheckTokens(seq, vocab_size_, /*allow_mask=*/false);
  for (std::size_t h = 1; h < seq.size(); ++h) {
    if (!Allowed(seq[h - 1], seq[h])) return false;
  }
  return true;
}

double WalkLanguage::Probability(const TokenSeq& seq) const {
  if (!Contains(seq)) return 0.0;
  double p = 1.0 / vocab_size_;
  for (std::size_t h = 1; h < seq.size(); ++h) p *= Transition(seq[h - 1], seq[h]);
  return p;
}

TokenSeq WalkLanguage::Sample(std::mt19937_64& rng) const {
  std::uniform_int_distribution<Token> first(1, vocab_size_);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  TokenSeq seq(length_);
  seq[0] = first(rng);
  for (int h = 1; h < length_; ++h) {
    const Token v = seq[h - 1];
    const StepProbs p = TransitionProbs(v);
    const double u = unit(rng);
    if (u < p.down) {
      seq[h] = v - 1;
    } else if (u < p.down + p.stay) {
      seq[h] = v;
    } else if (p.up > 0.0) {
      seq[h] = v + 1;
    } else {
      seq[h] = v;
    }
  }
  return seq;
}

TokenSeq WalkLanguage::Sample(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  return Sample(rng);
}

std::optional<TokenVector> WalkLanguage::CenterConditional(Token left,
                                                           Token right) const {
  CheckToken(left);
  CheckToken(right);
  TokenVector q(vocab_size_ + 1, 0.0);
  double total = 0.0;
  for (Token a = std::max(1, left - 1); a <= std::min(vocab_size_, left + 1);
       ++a) {
    const double w = Transition(left, a) * Transition(a, right);
    q[a] = w;
    total += w;
  }
  if (total <= 0.0) return std::nullopt;
  for (double& v : q) v /= total;
  return q;
}

std::uint64_t WalkLanguage::EnumerationSize() const {
  const std::uint64_t paths = CheckedPow(3, length_ - 1);
  const auto k = static_cast<std::uint64_t>(vocab_size_);
  if (paths > UINT64_MAX / k) return UINT64_MAX;
  return k * paths;
}

ExplicitDistribution WalkLanguage::Enumerate(std::uint64_t limit) const {
  if (EnumerationSize() > limit) {
    throw CapacityError("walk support enumeration " +
                        std::to_string(EnumerationSize()) + " exceeds limit " +
                        std::to_string(limit));
  }
  std::vector<TokenSeq> support;
  std::vector<double> probs;
  TokenSeq seq(length_);
  // Depth-first over allowed successors keeps the order lexicographic.
  auto extend = [&](auto&& self, int h, double p) -> void {
    if (h == length_) {
      support.push_back(seq);
      probs.push_back(p);
      return;
    }
    const Token v = seq[h - 1];
    for (Token to = std::max(1, v - 1); to <= std::min(vocab_size_, v + 1);
         ++to) {
      seq[h] = to;
      self(self, h + 1, p * Transition(v, to));
    }
  };
  for (Token first = 1; first <= vocab_size_; ++first) {
    seq[0] = first;
    extend(extend, 1, 1.0 / vocab_size_);
  }
  // Renormalize away the last few ulps of rounding so the result passes
  // the distribution's 1e-12 check for any enumerable size.
  long double total = 0.0L;
  for (double p : probs) total += p;
  for (double& p : probs) p = static_cast<double>(p / total);
  return ExplicitDistribution(vocab_size_, length_, std::move(support),
                              std::move(probs));
}

nlohmann::json WalkLanguage::ToJson() const {
  return nlohmann::json{
      {"K", vocab_size_}, {"H", length_}, {"walk", params_.ToJson()}};
}

WalkLanguage WalkLanguage::FromJson(const nlohmann::json& doc) {
  WalkParams params;
  if (doc.contains("walk")) params = WalkParams::FromJson(doc.at("walk"));
  return WalkLanguage(doc.at("K").get<int>(), doc.at("H").get<int>(), params);
}

void WriteCorpus(std::ostream& out, const std::vector<TokenSeq>& corpus) {
  for (const TokenSeq& seq : corpus) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (i > 0) out << ' ';
      out << seq[i];
    }
    out << '\n';
  }
}

std::vector<TokenSeq> ReadCorpus(std::istream& in) {
  std::vector<TokenSeq> corpus;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    corpus.push_back(ParseSeq(line));
  }
  return corpus;
}

std::vector<TokenSeq> SampleCorpus(const WalkLanguage& lang, int count,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<TokenSeq> corpus;
  corpus.reserve(count);
  for (int i = 0; i < count; ++i) corpus.push_back(lang.Sample(rng));
  return corpus;
}

}  // namespace dlmlab
