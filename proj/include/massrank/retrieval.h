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

#ifndef MASSRANK_RETRIEVAL_H_
#define MASSRANK_RETRIEVAL_H_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "massrank/dataset.h"
#include "massrank/types.h"

namespace massrank {

// Sparse similarity values keyed by (image, text). Values are finite.
class PairScores {
 public:
  using Key = std::pair<ItemId, ItemId>;

  // Throws InvalidInputError for non-finite values, DuplicateKeyError for
  // repeated pairs.
  void Set(const ItemId& image, const ItemId& text, double score);
  const double* Find(const ItemId& image, const ItemId& text) const;
  // Throws MissingEntryError naming the pair.
  double At(const ItemId& image, const ItemId& text) const;

  const std::map<Key, double>& entries() const { return scores_; }
  size_t size() const { return scores_.size(); }

  friend bool operator==(const PairScores&, const PairScores&) = default;

 private:
  std::map<Key, double> scores_;
};

// Dense query x candidate matrix, row-major.
class ScoreMatrix {
 public:
  // Throws DuplicateKeyError on repeated ids, AlignmentError on a size
  // mismatch, InvalidInputError on non-finite values.
  ScoreMatrix(std::vector<ItemId> queries, std::vector<ItemId> candidates,
              std::vector<double> values);

  // Orients pair scores: text queries over image candidates for
  // text-to-image, the reverse for image-to-text. Every cell must be present.
  static ScoreMatrix FromPairs(const PairScores& scores, Direction direction,
                               std::vector<ItemId> queries,
                               std::vector<ItemId> candidates);

  const std::vector<ItemId>& queries() const { return queries_; }
  const std::vector<ItemId>& candidates() const { return candidates_; }
  // Throws MissingEntryError for unknown ids.
  size_t QueryIndex(const ItemId& query) const;
  size_t CandidateIndex(const ItemId& candidate) const;
  std::optional<size_t> FindCandidate(const ItemId& candidate) const;
  std::span<const double> Row(size_t query_index) const;
  double At(const ItemId& query, const ItemId& candidate) const;

  // Applies `fn` to every cell; used to check order-invariance.
  ScoreMatrix Transform(const std::function<double(double)>& fn) const;

 private:
  std::vector<ItemId> queries_;
  std::vector<ItemId> candidates_;
  std::vector<double> values_;
  std::unordered_map<ItemId, size_t> query_index_;
  std::unordered_map<ItemId, size_t> candidate_index_;
};

struct RankedCandidate {
  ItemId id;
  double score = 0.0;
  friend bool operator==(const RankedCandidate&, const RankedCandidate&) = default;
};

// Sorted by score descending, ties broken by ascending candidate id.
struct Ranking {
  ItemId query;
  std::vector<RankedCandidate> ordered;
  friend bool operator==(const Ranking&, const Ranking&) = default;
};

// Default shortlist for two-stage retrieval.
inline constexpr size_t kDefaultShortlist = 20;

// Top-k candidates for `query`; all of them when k exceeds the pool.
Ranking Rank(const ScoreMatrix& scores, const ItemId& query, size_t k);

// Top-`shortlist` by `first`, re-ordered by `second`, truncated to k.
// Candidates outside the shortlist never appear.
Ranking TwoStageRerank(const ScoreMatrix& first, const ScoreMatrix& second,
                       const ItemId& query, size_t shortlist, size_t k);

struct FirstStage {
  const ScoreMatrix* scores = nullptr;
  size_t shortlist = kDefaultShortlist;
};

// Rankings for every query of `scores` in query order, computed on up to
// `jobs` threads.
std::vector<Ranking> RankAll(const ScoreMatrix& scores, size_t k, size_t jobs,
                             std::optional<FirstStage> first_stage = std::nullopt);

}  // namespace massrank

#endif  // MASSRANK_RETRIEVAL_H_
