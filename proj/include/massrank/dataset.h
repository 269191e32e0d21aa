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

#ifndef MASSRANK_DATASET_H_
#define MASSRANK_DATASET_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "massrank/types.h"

namespace massrank {

// Gender annotation derived from caption words. kBoth marks captions naming
// both genders; kUnknown counts as neutral.
enum class Gender { kMasculine, kFeminine, kNeutral, kUnknown, kBoth };

std::string_view GenderName(Gender g);
// Accepts masculine/feminine/neutral/unknown/both; throws ParseError.
Gender ParseGender(std::string_view name);

enum class Direction { kTextToImage, kImageToText };

std::string_view DirectionName(Direction d);
Direction ParseDirection(std::string_view name);

struct RetrievalQuery {
  ItemId id;
  std::vector<ItemId> gold;
  Gender gender = Gender::kUnknown;
};

struct RetrievalCandidate {
  ItemId id;
  Gender gender = Gender::kUnknown;
};

struct RetrievalDataset {
  Direction direction = Direction::kTextToImage;
  std::vector<RetrievalQuery> queries;
  std::vector<RetrievalCandidate> candidates;

  // Throws InvalidInputError / DuplicateKeyError / MissingEntryError when ids
  // repeat, gold sets are empty, or gold ids are not candidates.
  void Validate() const;
};

// Two images, two captions; the gold pairing is (i0, c0) and (i1, c1).
struct WinogroundSample {
  ItemId id;
  ItemId i0, i1;
  ItemId c0, c1;
  std::set<std::string> tags;
};

struct FoilSample {
  ItemId image;
  ItemId caption_true;
  ItemId caption_foil;
  std::string category;
};

// Manifest row for the grayscale-fruit experiment: the true caption names the
// displayed color (gray), the adversarial one the fruit's typical color.
struct ColorItem {
  ItemId image;
  std::string fruit_type;
  ItemId caption_true;
  ItemId caption_adv;
};

struct ColorSample {
  ItemId image;
  std::string fruit_type;
  double score_true = 0.0;
  double score_adv = 0.0;
};

}  // namespace massrank

#endif  // MASSRANK_DATASET_H_
