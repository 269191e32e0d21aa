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

#ifndef MASSRANK_TOY_MODEL_H_
#define MASSRANK_TOY_MODEL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "massrank/dataset.h"
#include "massrank/rng.h"
#include "massrank/table.h"
#include "massrank/types.h"

namespace massrank {

// A tiny autoregressive conditional language model whose every quantity can
// be enumerated exactly.
//
// The state is the full prefix (no Markov truncation). A prefix is a sequence
// of non-end tokens of length < max_len; the end token terminates a caption.
// Each image holds one probability row over the vocabulary per prefix; rows
// may be omitted only for prefixes the image cannot reach.
//
// An optional designated null image sits outside the prior mixture. It is
// scored like any other image and exported under the reserved "null" id.
class ToyModel {
 public:
  static constexpr size_t kMaxVocab = 32;
  static constexpr size_t kMaxImages = 16;
  static constexpr size_t kMaxLen = 8;
  static constexpr std::string_view kEndToken = "</s>";

  // `vocab` must contain kEndToken. `prior` covers the non-null images and
  // defaults to uniform when empty. Throws ModelDomainError on invalid shapes.
  ToyModel(std::vector<std::string> vocab, std::vector<ItemId> images,
           std::vector<double> prior, size_t max_len,
           std::optional<ItemId> null_image = std::nullopt);

  // Row for `image` at `prefix` (tokens, no end token). Rows must sum to 1
  // within 1e-12 with non-negative entries.
  void SetRow(const ItemId& image, const TokenSequence& prefix,
              std::vector<double> row);
  bool HasRow(const ItemId& image, const TokenSequence& prefix) const;
  std::span<const double> Row(const ItemId& image,
                              const TokenSequence& prefix) const;

  // Checks that every prefix reachable with positive probability has a row.
  void Validate() const;

  const std::vector<std::string>& vocab() const { return vocab_; }
  const std::vector<ItemId>& images() const { return images_; }
  const std::vector<double>& prior() const { return prior_; }
  const std::optional<ItemId>& null_image() const { return null_image_; }
  size_t max_len() const { return max_len_; }
  size_t num_prefixes() const { return prefix_offset_.back(); }

  // Per-token log p(x_t | x_<t, image).
  TokenLogProbs ExactConditional(const ItemId& image,
                                 const TokenSequence& text) const;
  // Per-token log sum_c p(c | x_<t) p(x_t | x_<t, c) over the prior images,
  // with p(c | x_<t) proportional to prior(c) p(x_<t | c).
  TokenLogProbs ExactMarginal(const TokenSequence& text) const;
  // Mean per-token PMI between `image` and `text`.
  double ExactPmi(const ItemId& image, const TokenSequence& text) const;

  // Mixture rows at every prefix; used to build a designated null image that
  // reproduces the exact marginal.
  ToyModel WithMarginalNullImage(const ItemId& null_id = "null-img") const;

  // Canonical JSON; FromJson validates.
  std::string ToJson() const;
  static ToyModel FromJson(std::string_view json);

  // Every caption of the model: sequences ending in the end token with length
  // <= max_len, plus length-max_len sequences without it. Enumeration order is
  // deterministic; only practical for tiny models.
  std::vector<TokenSequence> EnumerateCaptions() const;

  friend bool operator==(const ToyModel&, const ToyModel&) = default;

 private:
  size_t ImageIndex(const ItemId& image) const;
  int TokenIndex(std::string_view token) const;
  // Index of the prefix; throws ModelDomainError on end tokens or overlength.
  size_t PrefixIndex(const TokenSequence& prefix) const;
  size_t ChildPrefix(size_t parent, size_t depth, int token) const;
  TokenSequence PrefixTokens(size_t index) const;
  // Per-token conditional log-probs by image index; -inf for zero
  // probabilities, throws when a needed row is missing.
  std::vector<double> RawConditional(size_t image, const TokenSequence& text) const;

  std::vector<std::string> vocab_;
  int end_index_ = -1;
  std::vector<ItemId> images_;        // prior images, then the null image
  std::vector<double> prior_;         // over prior images only
  std::optional<ItemId> null_image_;
  size_t max_len_ = 1;
  std::vector<size_t> prefix_offset_; // first index of prefixes of each depth
  // rows_[image][prefix * |V| + w]; has_row_[image][prefix].
  std::vector<std::vector<double>> rows_;
  std::vector<std::vector<char>> has_row_;
};

struct RandomModelSpec {
  size_t n_images = 2;
  size_t vocab_size = 4;  // including the end token
  size_t max_len = 3;
  uint64_t seed = 0;
  bool random_prior = false;
  // Rows are Dirichlet(1) draws raised to this power and renormalized; larger
  // values make rows peakier (and images more distinguishable).
  double sharpness = 1.0;
};

// Dense random model, every probability strictly positive.
ToyModel RandomToyModel(const RandomModelSpec& spec);

// Random model whose image-dependence is confined to the last position:
// rows at prefixes shorter than max_len - 1 are shared by all images. Under a
// uniform prior the posterior p(c | x_<t) stays uniform along every caption,
// so the uniform mixture of conditionals is the exact marginal.
ToyModel SymmetricPrefixToyModel(const RandomModelSpec& spec);

struct ExportOptions {
  // Prepended to every image and caption id (not to "null").
  std::string id_prefix;
  // Caption ids; defaults to "t<index>".
  std::vector<ItemId> caption_ids;
};

// Exact conditionals for every (image, caption), a "null" row per caption
// (the designated null image when present, else the exact marginal),
// embeddings and matching-head logits:
//   image embedding  = the image's row at the empty prefix;
//   text embedding   = mean of the one-hot vectors of the caption's tokens;
//   ITM logit        = log p(x | c) - log p(x), the sequence log-likelihood
//                      ratio against the exact marginal.
ConditionalTable ExportTables(const ToyModel& model,
                              const std::vector<TokenSequence>& captions,
                              const ExportOptions& options = {});

struct BiasedFamilySpec {
  double prior_strength = 0.9;
  size_t n_instances = 1;
  uint64_t seed = 0;
};

// Below this prior strength the favored caption is not a majority under the
// image that carries the prior, and construction is refused.
inline constexpr double kMinPriorStrength = 0.5;

// One model of the family: images "iA", "iB"; caption A ("a </s>") carries
// the language prior, caption B ("b </s>") is the better match for iB.
// Token likelihood prefers A under iB while exact PMI prefers B.
struct BiasedInstance {
  ToyModel model;
  TokenSequence caption_a;
  TokenSequence caption_b;
  FoilSample foil;  // image iB, true caption B, foil caption A
};

// Throws ConstructionError when prior_strength is outside
// [kMinPriorStrength, 1) or when an instance fails its exact verification.
std::vector<BiasedInstance> MakeBiasedFamily(const BiasedFamilySpec& spec);

}  // namespace massrank

#endif  // MASSRANK_TOY_MODEL_H_
