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

#ifndef MASSRANK_GENDER_LEXICON_H_
#define MASSRANK_GENDER_LEXICON_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "massrank/dataset.h"

namespace massrank {

enum class CaptionGender { kMasculine, kFeminine, kBoth, kNeutral };

std::string_view CaptionGenderName(CaptionGender g);
// Maps a caption class onto the manifest label (kBoth -> Gender::kBoth).
Gender ToGender(CaptionGender g);

// Word lists of the gender-retrieval protocol. Words are lowercase; every
// gendered word maps to a neutral replacement that contains no gendered word.
class GenderLexicon {
 public:
  // Parses `word<TAB>m|f<TAB>replacement` lines; '#' starts a comment.
  // Throws LexiconError naming the line on malformed or duplicate entries.
  static GenderLexicon Parse(std::string_view text);
  static GenderLexicon Load(const std::string& path);

  const std::set<std::string>& masculine() const { return masculine_; }
  const std::set<std::string>& feminine() const { return feminine_; }
  const std::map<std::string, std::string>& neutral_map() const {
    return neutral_map_;
  }

 private:
  std::set<std::string> masculine_;
  std::set<std::string> feminine_;
  std::map<std::string, std::string> neutral_map_;
};

// A caption split into alternating word and non-word segments; the
// concatenation of all segments reproduces the input.
struct TextSegment {
  std::string text;
  bool is_word = false;
};

// Word segmentation close to Unicode default word boundaries: letters, digits
// and non-ASCII letters form words; an apostrophe (' or U+2019) between two
// word characters stays inside the word; common Unicode punctuation and
// spaces separate words.
std::vector<TextSegment> SegmentWords(std::string_view text);

// ASCII lowercase; non-ASCII bytes are left as is.
std::string LowercaseAscii(std::string_view text);

CaptionGender ClassifyCaption(std::string_view caption, const GenderLexicon& lex);

// Replaces every whole-word gendered occurrence by its neutral form. A
// capitalized source word yields a capitalized replacement. Idempotent.
std::string NeutralizeCaption(std::string_view caption, const GenderLexicon& lex);

}  // namespace massrank

#endif  // MASSRANK_GENDER_LEXICON_H_
