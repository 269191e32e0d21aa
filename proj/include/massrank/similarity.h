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

#ifndef MASSRANK_SIMILARITY_H_
#define MASSRANK_SIMILARITY_H_

#include <string_view>

#include "massrank/types.h"

namespace massrank {

// How token-level probabilities are pooled into a sequence score.
//   kProbMean:    (1/l) sum_t p(x_t | x_<t, c)
//   kLogprobMean: (1/l) sum_t log p(x_t | x_<t, c)
// There is deliberately no default; callers pick one.
enum class TlMode { kProbMean, kLogprobMean };

std::string_view TlModeName(TlMode mode);
// Throws UsageError for unknown names.
TlMode ParseTlMode(std::string_view name);

// Cosine similarity of dual-encoder embeddings, in [-1, 1].
ScoreValue ItcScore(const EmbeddingVector& image_emb,
                    const EmbeddingVector& text_emb);

// Probability that the pair matches, from a binary head's logit.
ScoreValue ItmScore(ItmLogit logit);

// Yes-vs-no probability from a generative head answering "does the image
// match the text?". Depends only on logp_yes - logp_no.
ScoreValue ItmScoreVqa(const VqaYesNoLogProbs& lp);

// Token-likelihood score of a caption under an image.
ScoreValue TlScore(const TokenLogProbs& cond, TlMode mode);

// Mean per-token pointwise mutual information:
//   (1/l) sum_t [log p(x_t | x_<t, c) - log p(x_t | x_<t)].
ScoreValue MassScore(const TokenLogProbs& cond, const TokenLogProbs& marginal);

// Splits log p(x | c) into the image-independent part (sum of marginal
// log-probs) and the image association part (sum of per-token PMI).
struct LoglikDecomposition {
  double linguistic = 0.0;
  double association = 0.0;
};

LoglikDecomposition DecomposeLoglik(const TokenLogProbs& cond,
                                    const TokenLogProbs& marginal);

}  // namespace massrank

#endif  // MASSRANK_SIMILARITY_H_
