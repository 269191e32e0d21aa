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

#include "massrank/similarity.h"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "massrank/errors.h"

namespace massrank {
namespace {

EmbeddingVector Vec(std::vector<double> v) { return EmbeddingVector(std::move(v)); }
TokenLogProbs Lp(std::vector<double> v) { return TokenLogProbs(std::move(v)); }

TEST(ItcScoreTest, CosineExamples) {
  EXPECT_DOUBLE_EQ(ItcScore(Vec({1, 0}), Vec({1, 0})).value, 1.0);
  EXPECT_DOUBLE_EQ(ItcScore(Vec({1, 0}), Vec({0, 1})).value, 0.0);
  EXPECT_NEAR(ItcScore(Vec({3, 4}), Vec({6, 8})).value, 1.0, 1e-15);
  EXPECT_NEAR(ItcScore(Vec({1, 2}), Vec({-1, -2})).value, -1.0, 1e-15);
  EXPECT_EQ(ItcScore(Vec({1, 0}), Vec({1, 0})).scale, ScoreScale::kCosine);
}

TEST(ItcScoreTest, RejectsBadVectors) {
  EXPECT_THROW(ItcScore(Vec({1, 0}), Vec({1, 0, 0})), DimensionError);
  EXPECT_THROW(Vec({0, 0}), DegenerateVectorError);
  EXPECT_THROW(Vec({}), InvalidInputError);
  EXPECT_THROW(Vec({NAN, 1}), InvalidInputError);
}

TEST(ItmScoreTest, LogitExamples) {
  EXPECT_EQ(ItmScore(ItmLogit{0.0}).value, 0.5);
  EXPECT_NEAR(ItmScore(ItmLogit{1000.0}).value, 1.0, 1e-12);
  EXPECT_THROW(ItmScore(ItmLogit{INFINITY}), InvalidInputError);
}

TEST(ItmScoreVqaTest, YesNoExamples) {
  EXPECT_EQ(ItmScoreVqa({-0.7, -0.7}).value, 0.5);
  EXPECT_NEAR(ItmScoreVqa({std::log(0.9), std::log(0.1)}).value, 0.9, 1e-12);
  EXPECT_NEAR(ItmScoreVqa({-1000.0, 0.0}).value, 0.0, 1e-12);
  EXPECT_THROW(ItmScoreVqa({0.5, -1.0}), InvalidInputError);
}

TEST(TlScoreTest, ProbMeanAndLogprobMean) {
  const auto lp = Lp({std::log(0.5), std::log(0.25)});
  EXPECT_NEAR(TlScore(lp, TlMode::kProbMean).value, 0.375, 1e-15);
  EXPECT_NEAR(TlScore(lp, TlMode::kLogprobMean).value, -1.0397, 1e-4);
  EXPECT_EQ(TlScore(Lp({0.0, 0.0}), TlMode::kProbMean).value, 1.0);
  EXPECT_EQ(TlScore(Lp({0.0, 0.0}), TlMode::kLogprobMean).value, 0.0);
  EXPECT_THROW(TlScore(Lp({}), TlMode::kProbMean), EmptySequenceError);
}

TEST(TlScoreTest, ModeNamesRoundTrip) {
  for (TlMode m : {TlMode::kProbMean, TlMode::kLogprobMean}) {
    EXPECT_EQ(ParseTlMode(TlModeName(m)), m);
  }
  EXPECT_THROW(ParseTlMode("mean"), UsageError);
}

TEST(MassScoreTest, Examples) {
  EXPECT_EQ(MassScore(Lp({-1.3, -0.2}), Lp({-1.3, -0.2})).value, 0.0);
  EXPECT_DOUBLE_EQ(MassScore(Lp({-1.0, -2.0}), Lp({-2.0, -3.0})).value, 1.0);
  EXPECT_THROW(MassScore(Lp({-1.0}), Lp({-1.0, -2.0})), AlignmentError);
  EXPECT_THROW(MassScore(Lp({}), Lp({})), EmptySequenceError);
}

TEST(DecomposeLoglikTest, Examples) {
  const auto same = DecomposeLoglik(Lp({-1.5, -0.5}), Lp({-1.5, -0.5}));
  EXPECT_EQ(same.association, 0.0);
  EXPECT_EQ(same.linguistic, -2.0);
  const auto d = DecomposeLoglik(Lp({-1.0}), Lp({-3.0}));
  EXPECT_EQ(d.linguistic, -3.0);
  EXPECT_EQ(d.association, 2.0);
}

TEST(DecomposeLoglikTest, SumsToConditionalLoglik) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-8.0, 0.0);
  for (int trial = 0; trial < 500; ++trial) {
    const size_t l = 1 + trial % 9;
    std::vector<double> c(l), m(l);
    double total = 0;
    for (size_t t = 0; t < l; ++t) {
      c[t] = u(gen);
      m[t] = u(gen);
      total += c[t];
    }
    const auto d = DecomposeLoglik(Lp(c), Lp(m));
    EXPECT_NEAR(d.linguistic + d.association, total, 1e-12);
    EXPECT_NEAR(d.association / static_cast<double>(l), MassScore(Lp(c), Lp(m)).value, 1e-12);
  }
}

TEST(MassScoreTest, InvariantToSharedShiftOfMarginalAndConditional) {
  const auto a = MassScore(Lp({-1.0, -2.0, -0.5}), Lp({-2.0, -2.5, -1.0})).value;
  const auto b = MassScore(Lp({-2.0, -3.0, -1.5}), Lp({-3.0, -3.5, -2.0})).value;
  EXPECT_NEAR(a, b, 1e-15);
}

TEST(TokenLogProbsTest, Validation) {
  EXPECT_NO_THROW(Lp({0.0, 5e-7}));
  EXPECT_THROW(Lp({-1.0, 0.5}), InvalidInputError);
  EXPECT_THROW(Lp({-INFINITY}), InvalidInputError);
  try {
    Lp({-1.0, -1.0, 0.2});
    FAIL();
  } catch (const InvalidInputError& e) {
    EXPECT_NE(std::string(e.what()).find("logp[2]"), std::string::npos);
  }
}

}  // namespace
}  // namespace massrank
