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

#include "massrank/metrics.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "massrank/errors.h"
#include "massrank/parallel.h"

namespace massrank {
namespace {

// Checks that `scores` covers exactly the dataset's queries and candidates,
// then ranks every dataset query.
std::vector<Ranking> RankDataset(const ScoreMatrix& scores,
                                 const RetrievalDataset& ds, size_t k,
                                 std::optional<FirstStage> first_stage,
                                 size_t jobs) {
  if (k == 0) throw InvalidInputError("k must be positive");
  if (ds.queries.empty()) throw EmptyDatasetError("retrieval dataset has no queries");
  ds.Validate();
  auto check_cover = [&](const ScoreMatrix& m, const char* stage) {
    for (const auto& c : ds.candidates) {
      if (!m.FindCandidate(c.id)) {
        throw MissingEntryError(std::string(stage) + " scores lack candidate '" +
                                c.id + "'");
      }
    }
    if (m.candidates().size() != ds.candidates.size()) {
      throw MissingEntryError(std::string(stage) +
                              " scores rank candidates outside the dataset");
    }
    for (const auto& q : ds.queries) m.QueryIndex(q.id);
  };
  check_cover(scores, "second-stage");
  if (first_stage) check_cover(*first_stage->scores, "first-stage");

  std::vector<Ranking> out(ds.queries.size());
  ParallelFor(out.size(), jobs, [&](size_t i) {
    const ItemId& q = ds.queries[i].id;
    out[i] = first_stage ? TwoStageRerank(*first_stage->scores, scores, q,
                                          first_stage->shortlist, k)
                         : Rank(scores, q, k);
  });
  return out;
}

}  // namespace

double RecallAtK(const ScoreMatrix& scores, const RetrievalDataset& ds, size_t k,
                 std::optional<FirstStage> first_stage, size_t jobs) {
  const std::vector<Ranking> rankings = RankDataset(scores, ds, k, first_stage, jobs);
  size_t hits = 0;
  for (size_t i = 0; i < rankings.size(); ++i) {
    const auto& gold = ds.queries[i].gold;
    for (const auto& cand : rankings[i].ordered) {
      if (std::find(gold.begin(), gold.end(), cand.id) != gold.end()) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(rankings.size());
}

std::string_view MixedPolicyName(MixedPolicy policy) {
  return policy == MixedPolicy::kBoth ? "both" : "neither";
}

MixedPolicy ParseMixedPolicy(std::string_view name) {
  if (name == "both") return MixedPolicy::kBoth;
  if (name == "neither") return MixedPolicy::kNeither;
  throw UsageError("unknown mixed policy '" + std::string(name) + "'");
}

double BiasAtK(const ScoreMatrix& scores, const RetrievalDataset& ds, size_t k,
               bool absolute, MixedPolicy mixed,
               std::optional<FirstStage> first_stage, size_t jobs) {
  const std::vector<Ranking> rankings = RankDataset(scores, ds, k, first_stage, jobs);
  std::unordered_map<ItemId, Gender> gender;
  for (const auto& c : ds.candidates) gender.emplace(c.id, c.gender);
  double total = 0.0;
  for (const auto& ranking : rankings) {
    int masculine = 0;
    int feminine = 0;
    for (const auto& cand : ranking.ordered) {
      switch (gender.at(cand.id)) {
        case Gender::kMasculine: ++masculine; break;
        case Gender::kFeminine: ++feminine; break;
        case Gender::kBoth:
          if (mixed == MixedPolicy::kBoth) {
            ++masculine;
            ++feminine;
          }
          break;
        case Gender::kNeutral:
        case Gender::kUnknown: break;
      }
    }
    double f = 0.0;
    if (masculine + feminine > 0) {
      f = static_cast<double>(masculine - feminine) /
          static_cast<double>(masculine + feminine);
    }
    total += absolute ? std::fabs(f) : f;
  }
  return total / static_cast<double>(rankings.size());
}

bool TagFilter::Accepts(const std::set<std::string>& tags) const {
  switch (kind_) {
    case Kind::kAll: return true;
    case Kind::kNoTag: return tags.empty();
    case Kind::kRest: return !tags.empty();
    case Kind::kAnyOf:
      for (const auto& t : tags) {
        if (tags_.count(t)) return true;
      }
      return false;
  }
  return false;
}

WinogroundScores WinogroundEval(const PairScores& scores,
                                std::span<const WinogroundSample> samples,
                                const TagFilter& filter) {
  size_t n = 0, text_ok = 0, image_ok = 0, group_ok = 0;
  for (const auto& s : samples) {
    if (!filter.Accepts(s.tags)) continue;
    const double s00 = scores.At(s.i0, s.c0);
    const double s01 = scores.At(s.i0, s.c1);
    const double s10 = scores.At(s.i1, s.c0);
    const double s11 = scores.At(s.i1, s.c1);
    const bool text = s00 > s01 && s11 > s10;
    const bool image = s00 > s10 && s11 > s01;
    ++n;
    text_ok += text;
    image_ok += image;
    group_ok += text && image;
  }
  if (n == 0) return {};
  const double dn = static_cast<double>(n);
  return {static_cast<double>(text_ok) / dn, static_cast<double>(image_ok) / dn,
          static_cast<double>(group_ok) / dn, n};
}

double PairwiseRankingAccuracy(const PairScores& scores,
                               std::span<const FoilSample> foils,
                               const std::optional<std::string>& category) {
  size_t n = 0, correct = 0;
  for (const auto& f : foils) {
    if (category && f.category != *category) continue;
    ++n;
    correct += scores.At(f.image, f.caption_true) > scores.At(f.image, f.caption_foil);
  }
  if (n == 0) throw EmptyDatasetError("no foil samples to evaluate");
  return static_cast<double>(correct) / static_cast<double>(n);
}

ColorBiasStats ComputeColorBiasStats(std::span<const ColorSample> samples) {
  if (samples.empty()) throw EmptyDatasetError("no color samples");
  ColorBiasStats stats;
  std::map<std::string, std::pair<double, size_t>> by_type;
  size_t biased = 0;
  for (const auto& s : samples) {
    if (!std::isfinite(s.score_true) || !std::isfinite(s.score_adv)) {
      throw InvalidInputError("color sample '" + s.image + "' has a non-finite score");
    }
    const double diff = s.score_true - s.score_adv;
    biased += diff < 0.0;
    auto& acc = by_type[s.fruit_type];
    acc.first += diff;
    ++acc.second;
  }
  size_t biased_types = 0;
  for (const auto& [type, acc] : by_type) {
    const double mean = acc.first / static_cast<double>(acc.second);
    stats.per_type_mean.emplace(type, mean);
    biased_types += mean < 0.0;
  }
  stats.biased_sample_ratio =
      static_cast<double>(biased) / static_cast<double>(samples.size());
  stats.biased_type_ratio =
      static_cast<double>(biased_types) / static_cast<double>(by_type.size());
  return stats;
}

std::vector<ColorSample> ResolveColorSamples(const PairScores& scores,
                                             std::span<const ColorItem> items) {
  std::vector<ColorSample> out;
  out.reserve(items.size());
  for (const auto& item : items) {
    out.push_back({item.image, item.fruit_type, scores.At(item.image, item.caption_true),
                   scores.At(item.image, item.caption_adv)});
  }
  return out;
}

bool Dominates(const ParetoPoint& p, const ParetoPoint& q) {
  const double pb = std::fabs(p.bias);
  const double qb = std::fabs(q.bias);
  return p.recall >= q.recall && pb <= qb && (p.recall > q.recall || pb < qb);
}

std::vector<ParetoPoint> ParetoFrontier(std::span<const ParetoPoint> points) {
  if (points.empty()) throw EmptyDatasetError("no Pareto points");
  std::vector<ParetoPoint> unique;
  std::unordered_set<std::string> labels;
  for (const auto& p : points) {
    if (!(p.recall >= 0.0 && p.recall <= 1.0) || !(p.bias >= -1.0 && p.bias <= 1.0)) {
      throw InvalidInputError("Pareto point '" + p.label + "' is out of range");
    }
    if (labels.insert(p.label).second) unique.push_back(p);
  }
  std::vector<ParetoPoint> frontier;
  for (const auto& q : unique) {
    bool dominated = false;
    for (const auto& p : unique) {
      if (Dominates(p, q)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) frontier.push_back(q);
  }
  std::sort(frontier.begin(), frontier.end(),
            [](const ParetoPoint& a, const ParetoPoint& b) {
              if (a.recall != b.recall) return a.recall > b.recall;
              if (std::fabs(a.bias) != std::fabs(b.bias)) {
                return std::fabs(a.bias) < std::fabs(b.bias);
              }
              return a.label < b.label;
            });
  return frontier;
}

}  // namespace massrank
