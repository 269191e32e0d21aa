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

#include "massrank/numeric.h"

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

namespace massrank {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(CompensatedSumTest, RecoversCancelledTerms) {
  const std::vector<double> v = {1.0, 1e100, 1.0, -1e100};
  EXPECT_EQ(CompensatedSum(v), 2.0);
}

TEST(CompensatedSumTest, ManySmallTerms) {
  std::vector<double> v(10000, 0.1);
  EXPECT_NEAR(CompensatedSum(v), 1000.0, 1e-12);
}

TEST(LogSumExpTest, MatchesDirectEvaluation) {
  const std::vector<double> v = {std::log(0.2), std::log(0.3), std::log(0.5)};
  EXPECT_NEAR(LogSumExp(v), 0.0, 1e-15);
}

TEST(LogSumExpTest, StableForLargeMagnitudes) {
  const std::vector<double> v = {-1000.0, -1000.0};
  EXPECT_NEAR(LogSumExp(v), -1000.0 + std::log(2.0), 1e-12);
  const std::vector<double> w = {800.0, 800.0};
  EXPECT_NEAR(LogSumExp(w), 800.0 + std::log(2.0), 1e-12);
}

TEST(LogSumExpTest, EmptyAndAllNegInf) {
  EXPECT_EQ(LogSumExp(std::vector<double>{}), -kInf);
  EXPECT_EQ(LogSumExp(std::vector<double>{-kInf, -kInf}), -kInf);
}

TEST(WeightedLogSumExpTest, MixtureOfProbabilities) {
  const std::vector<double> lv = {std::log(0.2), std::log(0.4)};
  const std::vector<double> w = {0.25, 0.75};
  EXPECT_NEAR(WeightedLogSumExp(lv, w), std::log(0.35), 1e-15);
}

TEST(SigmoidTest, SymmetryAndSaturation) {
  EXPECT_EQ(Sigmoid(0.0), 0.5);
  EXPECT_NEAR(Sigmoid(1000.0), 1.0, 1e-12);
  EXPECT_NEAR(Sigmoid(-1000.0), 0.0, 1e-12);
  for (double z : {-5.0, -0.3, 0.7, 12.0}) {
    EXPECT_NEAR(Sigmoid(z) + Sigmoid(-z), 1.0, 1e-15);
  }
}

}  // namespace
}  // namespace massrank
