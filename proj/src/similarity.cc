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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "massrank/errors.h"
#include "massrank/numeric.h"

namespace massrank {
namespace {

void CheckAligned(const TokenLogProbs& cond, const TokenLogProbs& marginal) {
  if (cond.size() != marginal.size()) {
    throw AlignmentError("conditional has " + std::to_string(cond.size()) +
                         " tokens but marginal has " +
                         std::to_string(marginal.size()));
  }
  if (cond.empty()) throw EmptySequenceError("token sequence is empty");
}

std::vector<double> PerTokenPmi(const TokenLogProbs& cond,
                                const TokenLogProbs& marginal) {
  std::vector<double> pmi(cond.size());
  for (size_t t = 0; t < cond.size(); ++t) pmi[t] = cond[t] - marginal[t];
  return pmi;
}

}  // namespace

std::string_view TlModeName(TlMode mode) {
  return mode == TlMode::kProbMean ? "prob-mean" : "logprob-mean";
}

TlMode ParseTlMode(std::string_view name) {
  if (name == "prob-mean") return TlMode::kProbMean;
  if (name == "logprob-mean") return TlMode::kLogprobMean;
  throw UsageError("unknown tl mode '" + std::string(name) + "'");
}

ScoreValue ItcScore(const EmbeddingVector& image_emb,
                    const EmbeddingVector& text_emb) {
  if (image_emb.dim() != text_emb.dim()) {
    throw DimensionError("image embedding dim " +
                         std::to_string(image_emb.dim()) +
                         " != text embedding dim " +
                         std::to_string(text_emb.dim()));
  }
  const auto u = image_emb.values();
  const auto v = text_emb.values();
  std::vector<double> dot(u.size()), uu(u.size()), vv(u.size());
  for (size_t i = 0; i < u.size(); ++i) {
    dot[i] = u[i] * v[i];
    uu[i] = u[i] * u[i];
    vv[i] = v[i] * v[i];
  }
  const double nu = std::sqrt(CompensatedSum(uu));
  const double nv = std::sqrt(CompensatedSum(vv));
  if (!(nu > 0.0) || !(nv > 0.0)) {
    throw DegenerateVectorError("cosine of a zero-norm vector");
  }
  const double cosine = CompensatedSum(dot) / (nu * nv);
  return {std::clamp(cosine, -1.0, 1.0), ScoreScale::kCosine};
}

ScoreValue ItmScore(ItmLogit logit) {
  if (!std::isfinite(logit.value)) {
    throw InvalidInputError("ITM logit is not finite");
  }
  return {Sigmoid(logit.value), ScoreScale::kProbability};
}

ScoreValue ItmScoreVqa(const VqaYesNoLogProbs& lp) {
  if (!std::isfinite(lp.logp_yes) || !std::isfinite(lp.logp_no)) {
    throw InvalidInputError("yes/no log-probabilities must be finite");
  }
  if (lp.logp_yes > TokenLogProbs::kPositiveSlack ||
      lp.logp_no > TokenLogProbs::kPositiveSlack) {
    throw InvalidInputError("yes/no log-probabilities must be <= 0");
  }
  // p_yes / (p_yes + p_no) == sigmoid(logp_yes - logp_no).
  return {Sigmoid(lp.logp_yes - lp.logp_no), ScoreScale::kProbability};
}

ScoreValue TlScore(const TokenLogProbs& cond, TlMode mode) {
  if (cond.empty()) throw EmptySequenceError("token sequence is empty");
  const double l = static_cast<double>(cond.size());
  if (mode == TlMode::kLogprobMean) {
    return {CompensatedSum(cond.values()) / l, ScoreScale::kLogprobMean};
  }
  std::vector<double> probs(cond.size());
  for (size_t t = 0; t < cond.size(); ++t) {
    probs[t] = std::min(1.0, std::exp(cond[t]));
  }
  return {CompensatedSum(probs) / l, ScoreScale::kProbMean};
}

ScoreValue MassScore(const TokenLogProbs& cond, const TokenLogProbs& marginal) {
  CheckAligned(cond, marginal);
  const std::vector<double> pmi = PerTokenPmi(cond, marginal);
  return {CompensatedSum(pmi) / static_cast<double>(pmi.size()),
          ScoreScale::kLogratioMean};
}

LoglikDecomposition DecomposeLoglik(const TokenLogProbs& cond,
                                    const TokenLogProbs& marginal) {
  CheckAligned(cond, marginal);
  return {CompensatedSum(marginal.values()),
          CompensatedSum(PerTokenPmi(cond, marginal))};
}

}  // namespace massrank
