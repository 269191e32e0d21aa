// Copyright 2026 The massrank Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "massrank/marginal.h"

#include <cmath>
#include <numeric>
#include <string>

#include "massrank/errors.h"
#include "massrank/numeric.h"

namespace massrank {
namespace {

void CheckSamples(std::span<const TokenLogProbs> samples) {
  if (samples.empty()) throw EmptySampleError("no Monte-Carlo samples");
  const size_t l = samples.front().size();
  if (l == 0) throw EmptySequenceError("Monte-Carlo sample is empty");
  for (size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].size() != l) {
      throw AlignmentError("sample " + std::to_string(i) + " has " +
                           std::to_string(samples[i].size()) +
                           " tokens, expected " + std::to_string(l));
    }
  }
}

}  // namespace

std::string_view MarginalMethodName(MarginalMethod method) {
  switch (method) {
    case MarginalMethod::kNullImage: return "null-image";
    case MarginalMethod::kMcAvgLog: return "mc-avg-log";
    case MarginalMethod::kMcLogMeanExp: return "mc-log-mean-exp";
  }
  return "unknown";
}

MarginalMethod ParseMarginalMethod(std::string_view name) {
  if (name == "null-image") return MarginalMethod::kNullImage;
  if (name == "mc-avg-log") return MarginalMethod::kMcAvgLog;
  if (name == "mc-log-mean-exp") return MarginalMethod::kMcLogMeanExp;
  throw UsageError("unknown marginal method '" + std::string(name) + "'");
}

MarginalEstimate NullMarginal(const ConditionalTable& table, const ItemId& text) {
  const TableEntry* entry = table.Find(std::string(kNullImage), text);
  if (entry == nullptr) {
    throw MissingEntryError("missing null-image entry for text '" + text + "'");
  }
  return {entry->logp, MarginalMethod::kNullImage, 1, 0};
}

MarginalEstimate McMarginalAvgLog(std::span<const TokenLogProbs> samples) {
  CheckSamples(samples);
  const size_t l = samples.front().size();
  std::vector<double> column(samples.size());
  std::vector<double> out(l);
  for (size_t t = 0; t < l; ++t) {
    for (size_t i = 0; i < samples.size(); ++i) column[i] = samples[i][t];
    out[t] = CompensatedSum(column) / static_cast<double>(samples.size());
  }
  return {TokenLogProbs(std::move(out)), MarginalMethod::kMcAvgLog,
          samples.size(), 0};
}

MarginalEstimate McMarginalLogMeanExp(
    std::span<const TokenLogProbs> samples,
    std::optional<std::span<const double>> weights) {
  CheckSamples(samples);
  std::vector<double> w;
  if (weights) {
    if (weights->size() != samples.size()) {
      throw WeightError("got " + std::to_string(weights->size()) +
                        " weights for " + std::to_string(samples.size()) +
                        " samples");
    }
    for (double v : *weights) {
      if (!std::isfinite(v) || !(v > 0.0)) {
        throw WeightError("weights must be positive and finite");
      }
    }
    const double total = CompensatedSum(*weights);
    if (std::fabs(total - 1.0) > 1e-9) {
      throw WeightError("weights sum to " + std::to_string(total) + ", not 1");
    }
    w.assign(weights->begin(), weights->end());
  } else {
    w.assign(samples.size(), 1.0 / static_cast<double>(samples.size()));
  }
  const size_t l = samples.front().size();
  std::vector<double> column(samples.size());
  std::vector<double> out(l);
  for (size_t t = 0; t < l; ++t) {
    for (size_t i = 0; i < samples.size(); ++i) column[i] = samples[i][t];
    out[t] = WeightedLogSumExp(column, w);
  }
  return {TokenLogProbs(std::move(out)), MarginalMethod::kMcLogMeanExp,
          samples.size(), 0};
}

std::vector<ItemId> SampleImages(std::span<const ItemId> pool, uint64_t n,
                                 CounterRng& rng) {
  if (pool.empty()) throw EmptySampleError("image pool is empty");
  if (n == 0) throw EmptySampleError("sample count must be positive");
  std::vector<ItemId> out;
  out.reserve(n);
  if (n <= pool.size()) {
    // Partial Fisher-Yates over an index permutation.
    std::vector<size_t> idx(pool.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    for (uint64_t i = 0; i < n; ++i) {
      const uint64_t j = i + rng.Below(pool.size() - i);
      std::swap(idx[i], idx[j]);
      out.push_back(pool[idx[i]]);
    }
  } else {
    for (uint64_t i = 0; i < n; ++i) out.push_back(pool[rng.Below(pool.size())]);
  }
  return out;
}

MarginalEstimate EstimateMarginal(const ConditionalTable& table,
                                  const ItemId& text,
                                  const MarginalConfig& config) {
  if (config.method == MarginalMethod::kNullImage) {
    return NullMarginal(table, text);
  }
  if (config.mc_samples == 0) {
    throw UsageError("Monte-Carlo marginal requires a positive sample count");
  }
  const std::vector<ItemId> pool = table.ImagesFor(text);
  if (pool.empty()) {
    throw MissingEntryError("no image entries to sample for text '" + text + "'");
  }
  CounterRng rng = CounterRng(config.seed).Split(text);
  const std::vector<ItemId> drawn = SampleImages(pool, config.mc_samples, rng);
  std::vector<TokenLogProbs> samples;
  samples.reserve(drawn.size());
  for (const auto& image : drawn) samples.push_back(table.At(image, text).logp);
  MarginalEstimate est = config.method == MarginalMethod::kMcAvgLog
                             ? McMarginalAvgLog(samples)
                             : McMarginalLogMeanExp(samples);
  est.seed = config.seed;
  return est;
}

}  // namespace massrank
