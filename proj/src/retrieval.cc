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

#include "massrank/retrieval.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "massrank/errors.h"
#include "massrank/parallel.h"

namespace massrank {
namespace {

std::string PairName(const ItemId& a, const ItemId& b) {
  return "('" + a + "', '" + b + "')";
}

void IndexIds(const std::vector<ItemId>& ids, const char* what,
              std::unordered_map<ItemId, size_t>& index) {
  index.reserve(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) {
    CheckItemId(ids[i], what);
    if (!index.emplace(ids[i], i).second) {
      throw DuplicateKeyError(std::string("duplicate ") + what + " id '" + ids[i] + "'");
    }
  }
}

// True when (score_a, id_a) ranks strictly before (score_b, id_b).
bool RanksBefore(double score_a, const ItemId& id_a, double score_b,
                 const ItemId& id_b) {
  if (score_a != score_b) return score_a > score_b;
  return id_a < id_b;
}

Ranking TopK(const ItemId& query, std::vector<RankedCandidate> pool, size_t k) {
  if (k == 0) throw InvalidInputError("k must be positive");
  const size_t keep = std::min(k, pool.size());
  auto before = [](const RankedCandidate& a, const RankedCandidate& b) {
    return RanksBefore(a.score, a.id, b.score, b.id);
  };
  std::partial_sort(pool.begin(), pool.begin() + keep, pool.end(), before);
  pool.resize(keep);
  return {query, std::move(pool)};
}

}  // namespace

void PairScores::Set(const ItemId& image, const ItemId& text, double score) {
  CheckItemId(image, "image");
  CheckItemId(text, "text");
  if (!std::isfinite(score)) {
    throw InvalidInputError("score for " + PairName(image, text) + " is not finite");
  }
  if (!scores_.emplace(Key{image, text}, score).second) {
    throw DuplicateKeyError("duplicate score for " + PairName(image, text));
  }
}

const double* PairScores::Find(const ItemId& image, const ItemId& text) const {
  auto it = scores_.find(Key{image, text});
  return it == scores_.end() ? nullptr : &it->second;
}

double PairScores::At(const ItemId& image, const ItemId& text) const {
  const double* v = Find(image, text);
  if (v == nullptr) {
    throw MissingEntryError("no score for (image, text) " + PairName(image, text));
  }
  return *v;
}

ScoreMatrix::ScoreMatrix(std::vector<ItemId> queries,
                         std::vector<ItemId> candidates,
                         std::vector<double> values)
    : queries_(std::move(queries)),
      candidates_(std::move(candidates)),
      values_(std::move(values)) {
  if (values_.size() != queries_.size() * candidates_.size()) {
    throw AlignmentError("score matrix has " + std::to_string(values_.size()) +
                         " cells for " + std::to_string(queries_.size()) + " x " +
                         std::to_string(candidates_.size()));
  }
  IndexIds(queries_, "query", query_index_);
  IndexIds(candidates_, "candidate", candidate_index_);
  for (size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidInputError(
          "score for " +
          PairName(queries_[i / candidates_.size()], candidates_[i % candidates_.size()]) +
          " is not finite");
    }
  }
}

ScoreMatrix ScoreMatrix::FromPairs(const PairScores& scores, Direction direction,
                                   std::vector<ItemId> queries,
                                   std::vector<ItemId> candidates) {
  std::vector<double> values;
  values.reserve(queries.size() * candidates.size());
  for (const auto& q : queries) {
    for (const auto& c : candidates) {
      values.push_back(direction == Direction::kTextToImage ? scores.At(c, q)
                                                            : scores.At(q, c));
    }
  }
  return ScoreMatrix(std::move(queries), std::move(candidates), std::move(values));
}

size_t ScoreMatrix::QueryIndex(const ItemId& query) const {
  auto it = query_index_.find(query);
  if (it == query_index_.end()) {
    throw MissingEntryError("unknown query '" + query + "'");
  }
  return it->second;
}

size_t ScoreMatrix::CandidateIndex(const ItemId& candidate) const {
  auto found = FindCandidate(candidate);
  if (!found) throw MissingEntryError("unknown candidate '" + candidate + "'");
  return *found;
}

std::optional<size_t> ScoreMatrix::FindCandidate(const ItemId& candidate) const {
  auto it = candidate_index_.find(candidate);
  if (it == candidate_index_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> ScoreMatrix::Row(size_t query_index) const {
  return std::span<const double>(values_).subspan(
      query_index * candidates_.size(), candidates_.size());
}

double ScoreMatrix::At(const ItemId& query, const ItemId& candidate) const {
  const size_t qi = QueryIndex(query);
  auto ci = FindCandidate(candidate);
  if (!ci) {
    throw MissingEntryError("no score for (query, candidate) " +
                            PairName(query, candidate));
  }
  return values_[qi * candidates_.size() + *ci];
}

ScoreMatrix ScoreMatrix::Transform(const std::function<double(double)>& fn) const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), fn);
  return ScoreMatrix(queries_, candidates_, std::move(out));
}

Ranking Rank(const ScoreMatrix& scores, const ItemId& query, size_t k) {
  const auto row = scores.Row(scores.QueryIndex(query));
  std::vector<RankedCandidate> pool;
  pool.reserve(row.size());
  for (size_t c = 0; c < row.size(); ++c) {
    pool.push_back({scores.candidates()[c], row[c]});
  }
  return TopK(query, std::move(pool), k);
}

Ranking TwoStageRerank(const ScoreMatrix& first, const ScoreMatrix& second,
                       const ItemId& query, size_t shortlist, size_t k) {
  if (k == 0) throw InvalidInputError("k must be positive");
  if (shortlist < k) {
    throw InvalidInputError("shortlist " + std::to_string(shortlist) +
                            " is smaller than k " + std::to_string(k));
  }
  const Ranking short_ranking = Rank(first, query, shortlist);
  const size_t qi = second.QueryIndex(query);
  const auto row = second.Row(qi);
  std::vector<RankedCandidate> pool;
  pool.reserve(short_ranking.ordered.size());
  for (const auto& cand : short_ranking.ordered) {
    auto ci = second.FindCandidate(cand.id);
    if (!ci) {
      throw MissingEntryError("second-stage score missing for (query, candidate) " +
                              PairName(query, cand.id));
    }
    pool.push_back({cand.id, row[*ci]});
  }
  return TopK(query, std::move(pool), k);
}

std::vector<Ranking> RankAll(const ScoreMatrix& scores, size_t k, size_t jobs,
                             std::optional<FirstStage> first_stage) {
  std::vector<Ranking> out(scores.queries().size());
  ParallelFor(out.size(), jobs, [&](size_t i) {
    const ItemId& q = scores.queries()[i];
    out[i] = first_stage ? TwoStageRerank(*first_stage->scores, scores, q,
                                          first_stage->shortlist, k)
                         : Rank(scores, q, k);
  });
  return out;
}

}  // namespace massrank
