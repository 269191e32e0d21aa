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

#include "massrank/types.h"

#include <cmath>

#include "massrank/errors.h"

namespace massrank {

void CheckItemId(std::string_view id, std::string_view what) {
  if (id.empty()) {
    throw InvalidInputError(std::string(what) + " id must be non-empty");
  }
}

TokenLogProbs::TokenLogProbs(std::vector<double> logp) : logp_(std::move(logp)) {
  for (size_t t = 0; t < logp_.size(); ++t) {
    const double v = logp_[t];
    if (!std::isfinite(v)) {
      throw InvalidInputError("logp[" + std::to_string(t) + "] is not finite");
    }
    if (v > kPositiveSlack) {
      throw InvalidInputError("logp[" + std::to_string(t) +
                              "] is positive (" + std::to_string(v) + ")");
    }
  }
}

EmbeddingVector::EmbeddingVector(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw InvalidInputError("embedding has dimension 0");
  double sq = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidInputError("embedding entry is not finite");
    sq += v * v;
  }
  if (!(sq > 0.0)) throw DegenerateVectorError("embedding has zero norm");
}

std::string_view ScoreScaleName(ScoreScale scale) {
  switch (scale) {
    case ScoreScale::kCosine: return "cosine";
    case ScoreScale::kProbability: return "probability";
    case ScoreScale::kProbMean: return "prob-mean";
    case ScoreScale::kLogprobMean: return "logprob-mean";
    case ScoreScale::kLogratioMean: return "logratio-mean";
  }
  return "unknown";
}

}  // namespace massrank
