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

#ifndef MASSRANK_TYPES_H_
#define MASSRANK_TYPES_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace massrank {

// Opaque identifier of an image or caption.
using ItemId = std::string;

// Reserved image id standing for the black-filled null image.
inline constexpr std::string_view kNullImage = "null";

inline bool IsNullImage(std::string_view id) { return id == kNullImage; }

// Throws InvalidInputError when `id` is empty.
void CheckItemId(std::string_view id, std::string_view what);

// A caption as the model tokenized it.
using TokenSequence = std::vector<std::string>;

// Per-token log p(x_t | x_<t, context). Entries are finite and at most
// kPositiveSlack above zero, which tolerates adapter rounding.
class TokenLogProbs {
 public:
  static constexpr double kPositiveSlack = 1e-6;

  TokenLogProbs() = default;
  // Throws InvalidInputError naming the first offending position.
  explicit TokenLogProbs(std::vector<double> logp);

  std::span<const double> values() const& { return logp_; }
  std::span<const double> values() const&& = delete;
  size_t size() const { return logp_.size(); }
  bool empty() const { return logp_.empty(); }
  double operator[](size_t i) const { return logp_[i]; }

  friend bool operator==(const TokenLogProbs&, const TokenLogProbs&) = default;

 private:
  std::vector<double> logp_;
};

// Embedding from one of the dual encoders; finite with a positive norm.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  // Throws InvalidInputError on empty or non-finite input and
  // DegenerateVectorError on a zero vector.
  explicit EmbeddingVector(std::vector<double> values);

  std::span<const double> values() const& { return values_; }
  std::span<const double> values() const&& = delete;
  size_t dim() const { return values_.size(); }

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

 private:
  std::vector<double> values_;
};

// Pre-sigmoid output of a binary matching head.
struct ItmLogit {
  double value = 0.0;
  friend bool operator==(const ItmLogit&, const ItmLogit&) = default;
};

// Yes/no answer log-probabilities from a generative matching head.
struct VqaYesNoLogProbs {
  double logp_yes = 0.0;
  double logp_no = 0.0;
  friend bool operator==(const VqaYesNoLogProbs&, const VqaYesNoLogProbs&) = default;
};

enum class ScoreScale {
  kCosine,
  kProbability,
  kProbMean,
  kLogprobMean,
  kLogratioMean,
};

std::string_view ScoreScaleName(ScoreScale scale);

struct ScoreValue {
  double value = 0.0;
  ScoreScale scale = ScoreScale::kCosine;
};

}  // namespace massrank

#endif  // MASSRANK_TYPES_H_
