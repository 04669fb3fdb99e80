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

#include "dlmlab/learner.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "dlmlab/corruption.h"
#include "dlmlab/seeding.h"

namespace dlmlab {
namespace {

constexpr char kMagic[8] = {'D', 'L', 'M', 'T', 'A', 'B', '0', '1'};

template <typename T>
void WritePod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T ReadPod(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw InvalidArgument("truncated checkpoint file");
  return v;
}

void WriteBlock(std::ofstream& out, const std::vector<std::uint32_t>& v) {
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(std::uint32_t)));
}

void ReadBlock(std::ifstream& in, std::vector<std::uint32_t>& v) {
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(v.size() * sizeof(std::uint32_t)));
  if (!in) throw InvalidArgument("truncated checkpoint file");
}

void Totals(const std::vector<std::uint32_t>& counts, int k,
            std::vector<std::uint64_t>& totals) {
  for (std::size_t b = 0; b < totals.size(); ++b) {
    std::uint64_t sum = 0;
    for (int v = 0; v < k; ++v) sum += counts[b * k + v];
    totals[b] = sum;
  }
}

}  // namespace

nlohmann::json LearnerConfig::ToJson() const {
  return {{"checkpoint_grid", checkpoint_grid},
          {"lambda", lambda},
          {"noise_buckets", noise_buckets}};
}

LearnerConfig LearnerConfig::FromJson(const nlohmann::json& doc) {
  LearnerConfig c;
  c.checkpoint_grid =
      doc.at("checkpoint_grid").get<std::vector<std::int64_t>>();
  c.lambda = doc.value("lambda", c.lambda);
  c.noise_buckets = doc.value("noise_buckets", c.noise_buckets);
  c.Validate();
  return c;
}

void LearnerConfig::Validate() const {
  if (checkpoint_grid.empty()) {
    throw InvalidArgument("learner.checkpoint_grid is empty");
  }
  for (std::size_t i = 0; i < checkpoint_grid.size(); ++i) {
    if (checkpoint_grid[i] <= 0 ||
        (i > 0 && checkpoint_grid[i] <= checkpoint_grid[i - 1])) {
      throw InvalidArgument(
          "learner.checkpoint_grid must be positive and strictly increasing");
    }
  }
  if (!(lambda > 0.0)) throw InvalidArgument("learner.lambda must be > 0");
  if (noise_buckets < 1) {
    throw InvalidArgument("learner.noise_buckets must be >= 1");
  }
}

TabularDenoiser::TabularDenoiser(int vocab_size, int length,
                                 Mechanism mechanism, double lambda,
                                 int noise_buckets)
    : vocab_size_(vocab_size),
      length_(length),
      mechanism_(mechanism),
      lambda_(lambda),
      buckets_(noise_buckets) {
  if (vocab_size < 2 || length < 1) {
    throw InvalidArgument("denoiser needs K >= 2 and H >= 1");
  }
  if (!(lambda > 0.0)) throw InvalidArgument("smoothing lambda must be > 0");
  if (noise_buckets < 1) throw InvalidArgument("need at least one bucket");
  const std::size_t k = vocab_size;
  const std::size_t sides = (k + 2) * (k + 2);
  fine_total_.assign(sides * (k + 1) * buckets_, 0);
  mid_total_.assign(sides * buckets_, 0);
  coarse_total_.assign(sides, 0);
  fine_.assign(fine_total_.size() * k, 0);
  mid_.assign(mid_total_.size() * k, 0);
  coarse_.assign(coarse_total_.size() * k, 0);
}

int TabularDenoiser::Bucket(double sigma) const {
  if (!(sigma >= 0.0 && sigma <= 1.0)) {
    throw InvalidArgument("sigma outside [0,1]");
  }
  return std::min(buckets_ - 1, static_cast<int>(sigma * buckets_));
}

std::size_t TabularDenoiser::Key(Token left, Token right) const {
  return static_cast<std::size_t>(left) * (vocab_size_ + 2) + right;
}

void TabularDenoiser::Observe(const TokenSeq& x0, const TokenSeq& x_t,
                              double sigma) {
  if (static_cast<int>(x0.size()) != length_ ||
      static_cast<int>(x_t.size()) != length_) {
    throw InvalidArgument("example length differs from H");
  }
  const int bucket = Bucket(sigma);
  const std::size_t k = vocab_size_;
  for (int h = 0; h < length_; ++h) {
    if (mechanism_ == Mechanism::kAbsorbing && x_t[h] != kMask) continue;
    const Token left = h > 0 ? x_t[h - 1] : boundary();
    const Token right = h + 1 < length_ ? x_t[h + 1] : boundary();
    const std::size_t lr = Key(left, right);
    const std::size_t clean = x0[h] - 1;
    const std::size_t fine = (lr * (k + 1) + x_t[h]) * buckets_ + bucket;
    const std::size_t mid = lr * buckets_ + bucket;
    ++fine_[fine * k + clean];
    ++fine_total_[fine];
    ++mid_[mid * k + clean];
    ++mid_total_[mid];
    ++coarse_[lr * k + clean];
    ++coarse_total_[lr];
  }
  tokens_seen_ += length_;
}

void TabularDenoiser::Smooth(const std::uint32_t* counts, std::uint64_t total,
                             TokenVector& out) const {
  const double den = static_cast<double>(total) + lambda_ * vocab_size_;
  for (int v = 0; v < vocab_size_; ++v) out[v + 1] = (counts[v] + lambda_) / den;
}

TokenVector TabularDenoiser::WindowPosterior(Token left, Token own,
                                             Token right, double sigma) const {
  const Token edge = boundary();
  if (left < 0 || left > edge || right < 0 || right > edge || own < 0 ||
      own > vocab_size_) {
    throw InvalidArgument("window token out of range");
  }
  const std::size_t k = vocab_size_;
  const int bucket = Bucket(sigma);
  const std::size_t lr = Key(left, right);
  TokenVector out(k + 1, 0.0);
  const bool own_known =
      mechanism_ == Mechanism::kAbsorbing || own != kMask;
  if (own_known) {
    const std::size_t fine = (lr * (k + 1) + own) * buckets_ + bucket;
    if (fine_total_[fine] > 0) {
      Smooth(&fine_[fine * k], fine_total_[fine], out);
      return out;
    }
  }
  const std::size_t mid = lr * buckets_ + bucket;
  if (mid_total_[mid] > 0) {
    Smooth(&mid_[mid * k], mid_total_[mid], out);
  } else if (coarse_total_[lr] > 0) {
    Smooth(&coarse_[lr * k], coarse_total_[lr], out);
  } else {
    for (std::size_t v = 1; v <= k; ++v) out[v] = 1.0 / k;
  }
  return out;
}

TokenVector TabularDenoiser::Posterior(const TokenSeq& x_t, int h,
                                       double sigma) const {
  if (static_cast<int>(x_t.size()) != length_ || h < 0 || h >= length_) {
    throw InvalidArgument("position out of range");
  }
  const Token left = h > 0 ? x_t[h - 1] : boundary();
  const Token right = h + 1 < length_ ? x_t[h + 1] : boundary();
  return WindowPosterior(left, x_t[h], right, sigma);
}

PosteriorTable TabularDenoiser::PosteriorTableFor(const TokenSeq& x_t,
                                                  double sigma) const {
  PosteriorTable table;
  table.reserve(x_t.size());
  for (int h = 0; h < length_; ++h) {
    if (mechanism_ == Mechanism::kAbsorbing && x_t.at(h) != kMask) {
      TokenVector point(vocab_size_ + 1, 0.0);
      point[x_t[h]] = 1.0;
      table.push_back(std::move(point));
    } else {
      table.push_back(Posterior(x_t, h, sigma));
    }
  }
  return table;
}

std::uint32_t TabularDenoiser::Count(Token left, Token own, Token right,
                                     int bucket, Token clean) const {
  const std::size_t k = vocab_size_;
  const std::size_t fine =
      (Key(left, right) * (k + 1) + own) * buckets_ + bucket;
  return fine_.at(fine * k + clean - 1);
}

void TabularDenoiser::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  WritePod(out, static_cast<std::int32_t>(vocab_size_));
  WritePod(out, static_cast<std::int32_t>(length_));
  WritePod(out, static_cast<std::int32_t>(mechanism_));
  WritePod(out, static_cast<std::int32_t>(buckets_));
  WritePod(out, lambda_);
  WritePod(out, static_cast<std::int64_t>(tokens_seen_));
  WriteBlock(out, fine_);
  WriteBlock(out, mid_);
  WriteBlock(out, coarse_);
}

TabularDenoiser TabularDenoiser::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw InvalidArgument(path.string() + " is not a denoiser snapshot");
  }
  const int k = ReadPod<std::int32_t>(in);
  const int len = ReadPod<std::int32_t>(in);
  const auto mech = static_cast<Mechanism>(ReadPod<std::int32_t>(in));
  const int buckets = ReadPod<std::int32_t>(in);
  const double lambda = ReadPod<double>(in);
  TabularDenoiser model(k, len, mech, lambda, buckets);
  model.tokens_seen_ = ReadPod<std::int64_t>(in);
  ReadBlock(in, model.fine_);
  ReadBlock(in, model.mid_);
  ReadBlock(in, model.coarse_);
  Totals(model.fine_, k, model.fine_total_);
  Totals(model.mid_, k, model.mid_total_);
  Totals(model.coarse_, k, model.coarse_total_);
  return model;
}

std::vector<Checkpoint> TrainStream(
    const SequenceSource& source, int vocab_size, int length,
    Mechanism mechanism, const NoiseSchedule& schedule,
    const LearnerConfig& config, std::uint64_t seed,
    const std::function<void(const Checkpoint&)>& on_checkpoint) {
  config.Validate();
  TabularDenoiser model(vocab_size, length, mechanism, config.lambda,
                        config.noise_buckets);
  std::mt19937_64 train_rng(DeriveSeed(seed, "train"));
  std::mt19937_64 corrupt_rng(DeriveSeed(seed, "corrupt"));
  std::uniform_int_distribution<int> step(1, schedule.steps());
  std::vector<Checkpoint> out;
  std::size_t next = 0;
  for (std::int64_t n = 1; next < config.checkpoint_grid.size(); ++n) {
    const TokenSeq x0 = source(train_rng);
    const double sigma = schedule.sigma(step(train_rng));
    const TokenSeq x_t =
        CorruptToLevel(x0, sigma, mechanism, vocab_size, corrupt_rng);
    model.Observe(x0, x_t, sigma);
    if (n != config.checkpoint_grid[next]) continue;
    ++next;
    Checkpoint ckpt{n, model.tokens_seen(), model};
    if (on_checkpoint) {
      on_checkpoint(ckpt);
    } else {
      out.push_back(std::move(ckpt));
    }
  }
  return out;
}

SequenceSource SourceFor(const WalkLanguage& lang) {
  return [lang](std::mt19937_64& rng) { return lang.Sample(rng); };
}

SequenceSource SourceFor(const ExplicitDistribution& dist) {
  return [dist](std::mt19937_64& rng) {
    std::discrete_distribution<std::size_t> pick(dist.probabilities().begin(),
                                                 dist.probabilities().end());
    return dist.support()[pick(rng)];
  };
}

void SaveCheckpoints(const std::filesystem::path& dir,
                     const std::vector<Checkpoint>& checkpoints,
                     const LearnerConfig& config, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["seed"] = seed;
  manifest["config"] = config.ToJson();
  manifest["tokens_seen"] = nlohmann::json::array();
  manifest["samples"] = nlohmann::json::array();
  manifest["files"] = nlohmann::json::array();
  for (const Checkpoint& c : checkpoints) {
    const std::string name = "ckpt_" + std::to_string(c.samples) + ".bin";
    c.model.Save(dir / name);
    manifest["tokens_seen"].push_back(c.tokens_seen);
    manifest["samples"].push_back(c.samples);
    manifest["files"].push_back(name);
  }
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';
}

std::vector<Checkpoint> LoadCheckpoints(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw InvalidArgument("no checkpoint manifest in " + dir.string());
  const nlohmann::json manifest = nlohmann::json::parse(in);
  std::vector<Checkpoint> out;
  const auto& files = manifest.at("files");
  for (std::size_t i = 0; i < files.size(); ++i) {
    TabularDenoiser model =
        TabularDenoiser::Load(dir / files[i].get<std::string>());
    out.push_back({manifest.at("samples")[i].get<std::int64_t>(),
                   manifest.at("tokens_seen")[i].get<std::int64_t>(),
                   std::move(model)});
  }
  return out;
}

}  // namespace dlmlab
