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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "massrank/errors.h"
#include "random_data.h"

namespace massrank {
namespace {

std::vector<ItemId> Ids(const Ranking& r) {
  std::vector<ItemId> out;
  for (const auto& c : r.ordered) out.push_back(c.id);
  return out;
}

ScoreMatrix Row(std::vector<ItemId> cands, std::vector<double> values) {
  return ScoreMatrix({"q"}, std::move(cands), std::move(values));
}

TEST(RankTest, OrderTiesAndClamping) {
  EXPECT_EQ(Ids(Rank(Row({"a", "b"}, {0.9, 0.1}), "q", 1)), (std::vector<ItemId>{"a"}));
  EXPECT_EQ(Ids(Rank(Row({"b", "a"}, {0.5, 0.5}), "q", 2)),
            (std::vector<ItemId>{"a", "b"}));
  EXPECT_EQ(Rank(Row({"a", "b", "c"}, {1, 2, 3}), "q", 10).ordered.size(), 3u);
  EXPECT_THROW(Rank(Row({"a"}, {1}), "zz", 1), MissingEntryError);
}

TEST(TwoStageRerankTest, DirectEvaluation) {
  const auto first = Row({"a", "b", "c"}, {3, 2, 1});
  const auto second = Row({"a", "b", "c"}, {1, 3, 2});
  EXPECT_EQ(Ids(TwoStageRerank(first, second, "q", 2, 2)), (std::vector<ItemId>{"b", "a"}));
}

TEST(TwoStageRerankTest, FullShortlistEqualsSecondStage) {
  const auto first = Row({"a", "b", "c", "d"}, {4, 3, 2, 1});
  const auto second = Row({"a", "b", "c", "d"}, {0.1, 0.7, 0.7, 0.2});
  EXPECT_EQ(TwoStageRerank(first, second, "q", 4, 3), Rank(second, "q", 3));
}

TEST(TwoStageRerankTest, ShortlistCeiling) {
  std::vector<ItemId> cands;
  std::vector<double> f, s;
  for (int j = 0; j < 25; ++j) {
    cands.push_back("c" + std::to_string(100 + j));
    f.push_back(100.0 - j);
    s.push_back(j == 20 ? 1e6 : 0.0);  // "c120" is 21st by the first stage
  }
  const auto first = Row(cands, f), second = Row(cands, s);
  const auto out = TwoStageRerank(first, second, "q", kDefaultShortlist, 5);
  for (const auto& c : out.ordered) EXPECT_NE(c.id, "c120");
  EXPECT_THROW(TwoStageRerank(first, second, "q", 3, 5), InvalidInputError);
}

TEST(ScoreMatrixTest, Validation) {
  EXPECT_THROW(ScoreMatrix({"q"}, {"a", "a"}, {1, 2}), DuplicateKeyError);
  EXPECT_THROW(ScoreMatrix({"q"}, {"a", "b"}, {1}), AlignmentError);
  EXPECT_THROW(ScoreMatrix({"q"}, {"a"}, {NAN}), InvalidInputError);
}

TEST(ScoreMatrixTest, FromPairsOrientation) {
  PairScores p;
  p.Set("i1", "t1", 0.1);
  p.Set("i2", "t1", 0.2);
  p.Set("i1", "t2", 0.3);
  p.Set("i2", "t2", 0.4);
  const auto t2i = ScoreMatrix::FromPairs(p, Direction::kTextToImage, {"t1", "t2"},
                                          {"i1", "i2"});
  EXPECT_EQ(t2i.At("t2", "i1"), 0.3);
  const auto i2t = ScoreMatrix::FromPairs(p, Direction::kImageToText, {"i1", "i2"},
                                          {"t1", "t2"});
  EXPECT_EQ(i2t.At("i2", "t1"), 0.2);
  EXPECT_THROW(ScoreMatrix::FromPairs(p, Direction::kTextToImage, {"t3"}, {"i1"}),
               MissingEntryError);
  EXPECT_THROW(p.Set("i1", "t1", 0.5), DuplicateKeyError);
  EXPECT_THROW(p.Set("i9", "t1", INFINITY), InvalidInputError);
}

TEST(RankAllTest, MatchesNaiveAndIgnoresJobCount) {
  CounterRng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rc = testing::RandomRetrievalCase(rng);
    const auto first = rc.FirstMatrix(), second = rc.SecondMatrix();
    const size_t k = 1 + rng.Below(5);
    const size_t shortlist = k + rng.Below(4);
    const auto one = RankAll(second, k, 1, FirstStage{&first, shortlist});
    const auto many = RankAll(second, k, 8, FirstStage{&first, shortlist});
    EXPECT_EQ(one, many);
    for (size_t i = 0; i < one.size(); ++i) {
      EXPECT_EQ(Ids(one[i]),
                testing::NaiveTopK(rc.second, &rc.first, shortlist, one[i].query, k));
    }
    const auto plain = RankAll(second, k, 3);
    for (size_t i = 0; i < plain.size(); ++i) {
      EXPECT_EQ(Ids(plain[i]), testing::NaiveTopK(rc.second, nullptr, 0, plain[i].query, k));
    }
  }
}

TEST(RankAllTest, InvariantUnderIncreasingTransforms) {
  CounterRng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rc = testing::RandomRetrievalCase(rng);
    const auto m = rc.SecondMatrix();
    const size_t k = m.candidates().size();
    const auto base = RankAll(m, k, 1);
    const auto affine = RankAll(m.Transform([](double x) { return 2 * x + 1; }), k, 1);
    const auto squashed = RankAll(m.Transform([](double x) { return std::tanh(x); }), k, 1);
    for (size_t i = 0; i < base.size(); ++i) {
      EXPECT_EQ(Ids(base[i]), Ids(affine[i]));
      EXPECT_EQ(Ids(base[i]), Ids(squashed[i]));
    }
  }
}

}  // namespace
}  // namespace massrank
