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

#ifndef MASSRANK_TABLE_H_
#define MASSRANK_TABLE_H_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "massrank/types.h"

namespace massrank {

struct TableEntry {
  ItemId image;
  ItemId text;
  TokenSequence tokens;
  TokenLogProbs logp;
  friend bool operator==(const TableEntry&, const TableEntry&) = default;
};

using ItmOutput = std::variant<ItmLogit, VqaYesNoLogProbs>;

// All model outputs needed for scoring: per-token conditionals keyed by
// (image or "null", text), plus optional embedding and matching-head side
// tables. Iteration order is canonical (sorted by key).
//
// Invariants enforced on insertion:
//   - every entry for a text id carries the same tokens;
//   - logp length equals token count, l >= 1;
//   - "null" never appears as a text id;
//   - embedding dimension is uniform within each modality.
class ConditionalTable {
 public:
  using Key = std::pair<ItemId, ItemId>;

  void Add(TableEntry entry);
  void AddImageEmbedding(const ItemId& id, EmbeddingVector vec);
  void AddTextEmbedding(const ItemId& id, EmbeddingVector vec);
  void AddItm(const ItemId& image, const ItemId& text, ItmOutput output);

  const TableEntry* Find(const ItemId& image, const ItemId& text) const;
  // Throws MissingEntryError naming the pair.
  const TableEntry& At(const ItemId& image, const ItemId& text) const;

  // Sorted non-null image ids that have at least one entry.
  std::vector<ItemId> Images() const;
  // Sorted text ids.
  std::vector<ItemId> Texts() const;
  // Sorted non-null images with an entry for `text`.
  std::vector<ItemId> ImagesFor(const ItemId& text) const;
  // Throws MissingEntryError for an unknown text.
  const TokenSequence& TokensFor(const ItemId& text) const;

  const std::map<Key, TableEntry>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }

  const std::map<ItemId, EmbeddingVector>& image_embeddings() const {
    return image_emb_;
  }
  const std::map<ItemId, EmbeddingVector>& text_embeddings() const {
    return text_emb_;
  }
  const std::map<Key, ItmOutput>& itm() const { return itm_; }

  const EmbeddingVector& ImageEmbedding(const ItemId& id) const;
  const EmbeddingVector& TextEmbedding(const ItemId& id) const;
  const ItmOutput& Itm(const ItemId& image, const ItemId& text) const;

  friend bool operator==(const ConditionalTable&, const ConditionalTable&) = default;

 private:
  std::map<Key, TableEntry> entries_;
  std::map<ItemId, TokenSequence> tokens_by_text_;
  std::map<ItemId, std::vector<ItemId>> images_by_text_;
  std::map<ItemId, EmbeddingVector> image_emb_;
  std::map<ItemId, EmbeddingVector> text_emb_;
  std::map<Key, ItmOutput> itm_;
};

}  // namespace massrank

#endif  // MASSRANK_TABLE_H_
