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

#include "massrank/dataset.h"

#include <algorithm>
#include <unordered_set>

#include "massrank/errors.h"

namespace massrank {

std::string_view GenderName(Gender g) {
  switch (g) {
    case Gender::kMasculine: return "masculine";
    case Gender::kFeminine: return "feminine";
    case Gender::kNeutral: return "neutral";
    case Gender::kUnknown: return "unknown";
    case Gender::kBoth: return "both";
  }
  return "unknown";
}

Gender ParseGender(std::string_view name) {
  if (name == "masculine") return Gender::kMasculine;
  if (name == "feminine") return Gender::kFeminine;
  if (name == "neutral") return Gender::kNeutral;
  if (name == "unknown") return Gender::kUnknown;
  if (name == "both") return Gender::kBoth;
  throw ParseError("unknown gender label '" + std::string(name) + "'");
}

std::string_view DirectionName(Direction d) {
  return d == Direction::kTextToImage ? "text-to-image" : "image-to-text";
}

Direction ParseDirection(std::string_view name) {
  if (name == "text-to-image") return Direction::kTextToImage;
  if (name == "image-to-text") return Direction::kImageToText;
  throw ParseError("unknown retrieval direction '" + std::string(name) + "'");
}

void RetrievalDataset::Validate() const {
  std::unordered_set<std::string> candidate_ids;
  for (const auto& c : candidates) {
    CheckItemId(c.id, "candidate");
    if (!candidate_ids.insert(c.id).second) {
      throw DuplicateKeyError("duplicate candidate id '" + c.id + "'");
    }
  }
  std::unordered_set<std::string> query_ids;
  for (const auto& q : queries) {
    CheckItemId(q.id, "query");
    if (!query_ids.insert(q.id).second) {
      throw DuplicateKeyError("duplicate query id '" + q.id + "'");
    }
    if (q.gold.empty()) {
      throw InvalidInputError("query '" + q.id + "' has an empty gold set");
    }
    for (const auto& g : q.gold) {
      if (!candidate_ids.count(g)) {
        throw MissingEntryError("gold id '" + g + "' of query '" + q.id +
                                "' is not a candidate");
      }
    }
  }
}

}  // namespace massrank
