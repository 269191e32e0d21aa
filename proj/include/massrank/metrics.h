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

#ifndef MASSRANK_METRICS_H_
#define MASSRANK_METRICS_H_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "massrank/dataset.h"
#include "massrank/retrieval.h"

namespace massrank {

// Recall@K: fraction of queries whose top-k contains any gold candidate.
double RecallAtK(const ScoreMatrix& scores, const RetrievalDataset& ds, size_t k,
                 std::optional<FirstStage> first_stage = std::nullopt,
                 size_t jobs = 1);

// How a candidate labelled kBoth is counted in Bias@K.
enum class MixedPolicy {
  kBoth,     // increments both N_m and N_f
  kNeither,  // increments neither
};

std::string_view MixedPolicyName(MixedPolicy policy);
MixedPolicy ParseMixedPolicy(std::string_view name);

// Bias@K = mean over queries of f = (N_m - N_f) / (N_m + N_f) among the top-k
// retrieved candidates, with f = 0 when no gendered candidate is retrieved.
// With `absolute`, |f| is averaged instead. Unknown labels count as neutral.
double BiasAtK(const ScoreMatrix& scores, const RetrievalDataset& ds, size_t k,
               bool absolute, MixedPolicy mixed = MixedPolicy::kBoth,
               std::optional<FirstStage> first_stage = std::nullopt,
               size_t jobs = 1);

// Selects Winoground samples by their tag set.
class TagFilter {
 public:
  static TagFilter All() { return TagFilter(Kind::kAll, {}); }
  // Samples with an empty tag set.
  static TagFilter NoTag() { return TagFilter(Kind::kNoTag, {}); }
  // Complement of NoTag.
  static TagFilter Rest() { return TagFilter(Kind::kRest, {}); }
  // Samples carrying at least one of `tags`.
  static TagFilter AnyOf(std::set<std::string> tags) {
    return TagFilter(Kind::kAnyOf, std::move(tags));
  }

  bool Accepts(const std::set<std::string>& tags) const;

 private:
  enum class Kind { kAll, kNoTag, kRest, kAnyOf };
  TagFilter(Kind kind, std::set<std::string> tags)
      : kind_(kind), tags_(std::move(tags)) {}

  Kind kind_;
  std::set<std::string> tags_;
};

struct WinogroundScores {
  double text = 0.0;
  double image = 0.0;
  double group = 0.0;
  size_t n = 0;  // samples passing the filter; all scores are 0 when n == 0
};

// Text correct iff s(i0,c0) > s(i0,c1) and s(i1,c1) > s(i1,c0); image correct
// iff s(i0,c0) > s(i1,c0) and s(i1,c1) > s(i0,c1); group iff both. Ties fail.
WinogroundScores WinogroundEval(const PairScores& scores,
                                std::span<const WinogroundSample> samples,
                                const TagFilter& filter = TagFilter::All());

// Fraction of foils with s(image, true) > s(image, foil); ties are wrong.
// Throws EmptyDatasetError when no foil passes the category filter.
double PairwiseRankingAccuracy(const PairScores& scores,
                               std::span<const FoilSample> foils,
                               const std::optional<std::string>& category = std::nullopt);

struct ColorBiasStats {
  double biased_sample_ratio = 0.0;  // samples with score_true < score_adv
  double biased_type_ratio = 0.0;    // types whose mean difference is < 0
  std::map<std::string, double> per_type_mean;
};

ColorBiasStats ComputeColorBiasStats(std::span<const ColorSample> samples);

// Resolves color manifest rows against pair scores.
std::vector<ColorSample> ResolveColorSamples(const PairScores& scores,
                                             std::span<const ColorItem> items);

struct ParetoPoint {
  std::string label;
  double recall = 0.0;  // [0, 1]
  double bias = 0.0;    // [-1, 1], signed
  friend bool operator==(const ParetoPoint&, const ParetoPoint&) = default;
};

// True when `p` dominates `q`: recall no lower and |bias| no higher, with at
// least one strict.
bool Dominates(const ParetoPoint& p, const ParetoPoint& q);

// Non-dominated points sorted by recall descending (ties: |bias| ascending,
// then label). Points sharing a label keep their first occurrence.
std::vector<ParetoPoint> ParetoFrontier(std::span<const ParetoPoint> points);

}  // namespace massrank

#endif  // MASSRANK_METRICS_H_
