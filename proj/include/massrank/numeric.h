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

#ifndef MASSRANK_NUMERIC_H_
#define MASSRANK_NUMERIC_H_

#include <span>

namespace massrank {

// Neumaier-compensated sum; keeps relative error near one ulp for the
// sequence lengths seen in token tables (up to ~1e4 terms).
double CompensatedSum(std::span<const double> values);

// log(sum_i exp(x_i)). Returns -inf for an empty span or all -inf inputs.
double LogSumExp(std::span<const double> log_values);

// log(sum_i w_i * exp(x_i)) for positive weights w.
double WeightedLogSumExp(std::span<const double> log_values,
                         std::span<const double> weights);

// Numerically stable logistic function 1 / (1 + exp(-z)).
double Sigmoid(double z);

}  // namespace massrank

#endif  // MASSRANK_NUMERIC_H_
