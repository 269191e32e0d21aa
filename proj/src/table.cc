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

#include "massrank/table.h"

#include <algorithm>
#include <set>

#include "massrank/errors.h"

namespace massrank {
namespace {

std::string PairName(const ItemId& image, const ItemId& text) {
  return "(image '" + image + "', text '" + text + "')";
}

void AddEmbedding(std::map<ItemId, EmbeddingVector>& store, const ItemId& id,
                  EmbeddingVector vec, const char* modality) {
  CheckItemId(id, modality);
  if (!store.empty() && store.begin()->second.dim() != vec.dim()) {
    throw DimensionError(std::string(modality) + " embedding '" + id +
                         "' has dim " + std::to_string(vec.dim()) +
                         ", expected " +
                         std::to_string(store.begin()->second.dim()));
  }
  if (!store.emplace(id, std::move(vec)).second) {
    throw DuplicateKeyError(std::string("duplicate ") + modality +
                            " embedding '" + id + "'");
  }
}

}  // namespace

void ConditionalTable::Add(TableEntry entry) {
  CheckItemId(entry.image, "image");
  CheckItemId(entry.text, "text");
  if (IsNullImage(entry.text)) {
    throw ReservedIdError("reserved id 'null' used as a text id");
  }
  if (entry.tokens.empty()) {
    throw EmptySequenceError("entry " + PairName(entry.image, entry.text) +
                             " has no tokens");
  }
  for (const auto& tok : entry.tokens) {
    if (tok.empty()) {
      throw InvalidInputError("entry " + PairName(entry.image, entry.text) +
                              " has an empty token string");
    }
  }
  if (entry.logp.size() != entry.tokens.size()) {
    throw AlignmentError("entry " + PairName(entry.image, entry.text) + " has " +
                         std::to_string(entry.tokens.size()) + " tokens but " +
                         std::to_string(entry.logp.size()) + " logp values");
  }
  auto known = tokens_by_text_.find(entry.text);
  if (known != tokens_by_text_.end() && known->second != entry.tokens) {
    throw AlignmentError("entry " + PairName(entry.image, entry.text) +
                         " tokens differ from earlier entries for this text");
  }
  Key key{entry.image, entry.text};
  if (entries_.count(key)) {
    throw DuplicateKeyError("duplicate entry " + PairName(key.first, key.second));
  }
  if (known == tokens_by_text_.end()) tokens_by_text_.emplace(entry.text, entry.tokens);
  if (!IsNullImage(entry.image)) {
    auto& images = images_by_text_[entry.text];
    images.insert(std::upper_bound(images.begin(), images.end(), entry.image),
                  entry.image);
  }
  entries_.emplace(std::move(key), std::move(entry));
}

void ConditionalTable::AddImageEmbedding(const ItemId& id, EmbeddingVector vec) {
  AddEmbedding(image_emb_, id, std::move(vec), "image");
}

void ConditionalTable::AddTextEmbedding(const ItemId& id, EmbeddingVector vec) {
  if (IsNullImage(id)) {
    throw ReservedIdError("reserved id 'null' used as a text embedding id");
  }
  AddEmbedding(text_emb_, id, std::move(vec), "text");
}

void ConditionalTable::AddItm(const ItemId& image, const ItemId& text,
                              ItmOutput output) {
  CheckItemId(image, "image");
  CheckItemId(text, "text");
  if (IsNullImage(image) || IsNullImage(text)) {
    throw ReservedIdError("reserved id 'null' used in a matching-head row " +
                          PairName(image, text));
  }
  if (!itm_.empty() && itm_.begin()->second.index() != output.index()) {
    throw InvalidInputError("matching-head rows mix logit and yes/no forms at " +
                            PairName(image, text));
  }
  if (!itm_.emplace(Key{image, text}, output).second) {
    throw DuplicateKeyError("duplicate matching-head row " + PairName(image, text));
  }
}

const TableEntry* ConditionalTable::Find(const ItemId& image,
                                         const ItemId& text) const {
  auto it = entries_.find(Key{image, text});
  return it == entries_.end() ? nullptr : &it->second;
}

const TableEntry& ConditionalTable::At(const ItemId& image,
                                       const ItemId& text) const {
  const TableEntry* e = Find(image, text);
  if (e == nullptr) {
    throw MissingEntryError("no table entry for " + PairName(image, text));
  }
  return *e;
}

std::vector<ItemId> ConditionalTable::Images() const {
  std::set<ItemId> images;
  for (const auto& [key, entry] : entries_) {
    if (!IsNullImage(key.first)) images.insert(key.first);
  }
  return {images.begin(), images.end()};
}

std::vector<ItemId> ConditionalTable::Texts() const {
  std::vector<ItemId> texts;
  texts.reserve(tokens_by_text_.size());
  for (const auto& [text, tokens] : tokens_by_text_) texts.push_back(text);
  return texts;
}

std::vector<ItemId> ConditionalTable::ImagesFor(const ItemId& text) const {
  auto it = images_by_text_.find(text);
  return it == images_by_text_.end() ? std::vector<ItemId>{} : it->second;
}

const TokenSequence& ConditionalTable::TokensFor(const ItemId& text) const {
  auto it = tokens_by_text_.find(text);
  if (it == tokens_by_text_.end()) {
    throw MissingEntryError("no table entries for text '" + text + "'");
  }
  return it->second;
}

const EmbeddingVector& ConditionalTable::ImageEmbedding(const ItemId& id) const {
  auto it = image_emb_.find(id);
  if (it == image_emb_.end()) {
    throw MissingEntryError("no image embedding for '" + id + "'");
  }
  return it->second;
}

const EmbeddingVector& ConditionalTable::TextEmbedding(const ItemId& id) const {
  auto it = text_emb_.find(id);
  if (it == text_emb_.end()) {
    throw MissingEntryError("no text embedding for '" + id + "'");
  }
  return it->second;
}

const ItmOutput& ConditionalTable::Itm(const ItemId& image,
                                       const ItemId& text) const {
  auto it = itm_.find(Key{image, text});
  if (it == itm_.end()) {
    throw MissingEntryError("no matching-head row for " + PairName(image, text));
  }
  return it->second;
}

}  // namespace massrank
