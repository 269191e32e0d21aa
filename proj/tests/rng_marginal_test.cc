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

#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "massrank/errors.h"
#include "massrank/marginal.h"
#include "massrank/rng.h"
#include "massrank/table.h"

namespace massrank {
namespace {

TokenLogProbs Lp(std::vector<double> v) { return TokenLogProbs(std::move(v)); }

TEST(CounterRngTest, DeterministicAndSplittable) {
  CounterRng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
  CounterRng s1 = CounterRng(42).Split("t1");
  CounterRng s2 = CounterRng(42).Split("t2");
  CounterRng s1again = CounterRng(42).Split("t1");
  EXPECT_NE(s1(), s2());
  s1again();
  EXPECT_EQ(s1(), s1again());
}

TEST(CounterRngTest, SplitIgnoresParentDraws) {
  CounterRng parent(5);
  const uint64_t first = parent.Split(3)();
  parent();
  parent();
  EXPECT_EQ(parent.Split(3)(), first);
}

TEST(CounterRngTest, BelowAndUniformRanges) {
  CounterRng rng(1);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const uint64_t v = rng.Below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(SampleImagesTest, WithoutReplacementWhenPoolSuffices) {
  const std::vector<ItemId> pool = {"a", "b", "c", "d", "e"};
  for (uint64_t seed = 0; seed < 50; ++seed) {
    CounterRng rng(seed);
    const auto s = SampleImages(pool, 5, rng);
    EXPECT_EQ(std::set<ItemId>(s.begin(), s.end()).size(), 5u);
  }
}

TEST(SampleImagesTest, WithReplacementBeyondPool) {
  const std::vector<ItemId> pool = {"a", "b"};
  CounterRng rng(9);
  const auto s = SampleImages(pool, 100, rng);
  EXPECT_EQ(s.size(), 100u);
  for (const auto& id : s) EXPECT_TRUE(id == "a" || id == "b");
}

TEST(SampleImagesTest, RejectsEmpty) {
  CounterRng rng(0);
  EXPECT_THROW(SampleImages({}, 3, rng), EmptySampleError);
  const std::vector<ItemId> pool = {"a"};
  EXPECT_THROW(SampleImages(pool, 0, rng), EmptySampleError);
}

TEST(NullMarginalTest, ReturnsStoredRow) {
  ConditionalTable table;
  table.Add({"null", "t1", {"a", "b"}, Lp({-1.5, -0.5})});
  table.Add({"img", "t1", {"a", "b"}, Lp({-1.0, -0.1})});
  EXPECT_EQ(NullMarginal(table, "t1").logp, Lp({-1.5, -0.5}));
  EXPECT_THROW(NullMarginal(table, "t2"), MissingEntryError);
}

TEST(McMarginalTest, AvgLogExamples) {
  const std::vector<TokenLogProbs> two = {Lp({-1.0}), Lp({-3.0})};
  EXPECT_EQ(McMarginalAvgLog(two).logp, Lp({-2.0}));
  const std::vector<TokenLogProbs> same(4, Lp({-0.7, -1.1}));
  const auto est = McMarginalAvgLog(same);
  EXPECT_NEAR(est.logp[0], -0.7, 1e-15);
  EXPECT_NEAR(est.logp[1], -1.1, 1e-15);
  EXPECT_EQ(est.n_samples, 4u);
}

TEST(McMarginalTest, LogMeanExpExamples) {
  const std::vector<TokenLogProbs> two = {Lp({std::log(0.2)}), Lp({std::log(0.4)})};
  EXPECT_NEAR(McMarginalLogMeanExp(two).logp[0], std::log(0.3), 1e-15);
  const std::vector<TokenLogProbs> one = {Lp({-0.3, -2.0})};
  EXPECT_EQ(McMarginalLogMeanExp(one).logp, Lp({-0.3, -2.0}));
}

TEST(McMarginalTest, Weights) {
  const std::vector<TokenLogProbs> two = {Lp({std::log(0.2)}), Lp({std::log(0.4)})};
  const std::vector<double> w = {0.25, 0.75};
  EXPECT_NEAR(McMarginalLogMeanExp(two, std::span<const double>(w)).logp[0],
              std::log(0.35), 1e-15);
  const std::vector<double> bad_sum = {0.5, 0.6};
  EXPECT_THROW(McMarginalLogMeanExp(two, std::span<const double>(bad_sum)), WeightError);
  const std::vector<double> negative = {1.5, -0.5};
  EXPECT_THROW(McMarginalLogMeanExp(two, std::span<const double>(negative)), WeightError);
  const std::vector<double> short_w = {1.0};
  EXPECT_THROW(McMarginalLogMeanExp(two, std::span<const double>(short_w)), WeightError);
}

TEST(McMarginalTest, RejectsEmptyAndRagged) {
  EXPECT_THROW(McMarginalAvgLog({}), EmptySampleError);
  const std::vector<TokenLogProbs> ragged = {Lp({-1.0}), Lp({-1.0, -2.0})};
  EXPECT_THROW(McMarginalAvgLog(ragged), AlignmentError);
  EXPECT_THROW(McMarginalLogMeanExp(ragged), AlignmentError);
}

TEST(McMarginalTest, JensenHoldsPositionwise) {
  CounterRng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TokenLogProbs> s;
    const size_t n = 1 + rng.Below(8), l = 1 + rng.Below(5);
    for (size_t i = 0; i < n; ++i) {
      std::vector<double> v(l);
      for (auto& x : v) x = -10.0 * rng.Uniform();
      s.push_back(Lp(v));
    }
    const auto lo = McMarginalAvgLog(s).logp;
    const auto hi = McMarginalLogMeanExp(s).logp;
    for (size_t t = 0; t < l; ++t) EXPECT_LE(lo[t], hi[t] + 1e-12);
  }
}

ConditionalTable SmallTable() {
  ConditionalTable table;
  const std::vector<std::string> tokens = {"x", "y"};
  for (int i = 0; i < 6; ++i) {
    for (const char* text : {"t1", "t2"}) {
      table.Add({"img" + std::to_string(i), text, tokens,
                 Lp({-0.1 * (i + 1), -0.2 * (i + 1)})});
    }
  }
  table.Add({"null", "t1", tokens, Lp({-0.5, -0.5})});
  return table;
}

TEST(EstimateMarginalTest, NullImageAndMissingNull) {
  const ConditionalTable table = SmallTable();
  EXPECT_EQ(EstimateMarginal(table, "t1", {}).logp, Lp({-0.5, -0.5}));
  try {
    EstimateMarginal(table, "t2", {});
    FAIL();
  } catch (const MissingEntryError& e) {
    EXPECT_NE(std::string(e.what()).find("t2"), std::string::npos);
  }
}

TEST(EstimateMarginalTest, McIsSeededPerText) {
  const ConditionalTable table = SmallTable();
  const MarginalConfig cfg{MarginalMethod::kMcLogMeanExp, 3, 17};
  const auto a = EstimateMarginal(table, "t1", cfg);
  const auto b = EstimateMarginal(table, "t1", cfg);
  EXPECT_EQ(a.logp, b.logp);
  EXPECT_EQ(a.seed, 17u);
  EXPECT_EQ(a.n_samples, 3u);
  // All images in the pool: without replacement the estimate is the full mean.
  const auto full = EstimateMarginal(table, "t2", {MarginalMethod::kMcAvgLog, 6, 1});
  EXPECT_NEAR(full.logp[0], -0.35, 1e-15);
  EXPECT_THROW(EstimateMarginal(table, "t1", {MarginalMethod::kMcAvgLog, 0, 1}), UsageError);
  EXPECT_THROW(EstimateMarginal(table, "t9", {MarginalMethod::kMcAvgLog, 2, 1}),
               MissingEntryError);
}

TEST(MarginalMethodTest, NamesRoundTrip) {
  for (auto m : {MarginalMethod::kNullImage, MarginalMethod::kMcAvgLog,
                 MarginalMethod::kMcLogMeanExp}) {
    EXPECT_EQ(ParseMarginalMethod(MarginalMethodName(m)), m);
  }
  EXPECT_THROW(ParseMarginalMethod("exact"), UsageError);
}

}  // namespace
}  // namespace massrank
