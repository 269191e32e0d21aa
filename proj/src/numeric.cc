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

#include <algorithm>
#include <cmath>
#include <limits>

namespace massrank {

double CompensatedSum(std::span<const double> values) {
  double sum = 0.0;
  double compensation = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      compensation += (sum - t) + v;
    } else {
      compensation += (v - t) + sum;
    }
    sum = t;
  }
  return sum + compensation;
}

double LogSumExp(std::span<const double> log_values) {
  const double kNegInf = -std::numeric_limits<double>::infinity();
  if (log_values.empty()) return kNegInf;
  const double peak = *std::max_element(log_values.begin(), log_values.end());
  if (peak == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double v : log_values) acc += std::exp(v - peak);
  return peak + std::log(acc);
}

double WeightedLogSumExp(std::span<const double> log_values,
                         std::span<const double> weights) {
  const double kNegInf = -std::numeric_limits<double>::infinity();
  if (log_values.empty()) return kNegInf;
  const double peak = *std::max_element(log_values.begin(), log_values.end());
  if (peak == kNegInf) return kNegInf;
  double acc = 0.0;
  for (size_t i = 0; i < log_values.size(); ++i) {
    acc += weights[i] * std::exp(log_values[i] - peak);
  }
  return peak + std::log(acc);
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace massrank
