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

#ifndef MASSRANK_MARGINAL_H_
#define MASSRANK_MARGINAL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "massrank/rng.h"
#include "massrank/table.h"
#include "massrank/types.h"

namespace massrank {

// Estimators of the image-free next-token log-probability log p(x_t | x_<t).
//
//   kNullImage     the conditional under the reserved black "null" image.
//   kMcAvgLog      (1/N) sum_i log p(x_t | x_<t, c_i)  over sampled images.
//                  This is an expectation of logs, a lower bound (Jensen)
//                  on the next estimator.
//   kMcLogMeanExp  log sum_i w_i p(x_t | x_<t, c_i), the log of the mixture
//                  probability; uniform w_i unless weights are supplied.
enum class MarginalMethod { kNullImage, kMcAvgLog, kMcLogMeanExp };

std::string_view MarginalMethodName(MarginalMethod method);
// Throws UsageError for unknown names.
MarginalMethod ParseMarginalMethod(std::string_view name);

struct MarginalEstimate {
  TokenLogProbs logp;
  MarginalMethod method = MarginalMethod::kNullImage;
  uint64_t n_samples = 1;
  uint64_t seed = 0;
};

// The stored (null, text) conditional, verbatim.
MarginalEstimate NullMarginal(const ConditionalTable& table, const ItemId& text);

MarginalEstimate McMarginalAvgLog(std::span<const TokenLogProbs> samples);

// `weights`, when given, must be positive, one per sample, summing to 1
// within 1e-9.
MarginalEstimate McMarginalLogMeanExp(
    std::span<const TokenLogProbs> samples,
    std::optional<std::span<const double>> weights = std::nullopt);

// Draws `n` ids from `pool`: without replacement when n <= pool size, with
// replacement otherwise.
std::vector<ItemId> SampleImages(std::span<const ItemId> pool, uint64_t n,
                                 CounterRng& rng);

struct MarginalConfig {
  MarginalMethod method = MarginalMethod::kNullImage;
  uint64_t mc_samples = 0;  // required (> 0) for the MC methods
  uint64_t seed = 0;
};

// Estimates the marginal for `text` from `table`. MC methods sample from the
// non-null images holding an entry for `text`, using a stream split from
// `config.seed` by the text id, so the result does not depend on the order in
// which texts are processed.
MarginalEstimate EstimateMarginal(const ConditionalTable& table,
                                  const ItemId& text,
                                  const MarginalConfig& config);

}  // namespace massrank

#endif  // MASSRANK_MARGINAL_H_
