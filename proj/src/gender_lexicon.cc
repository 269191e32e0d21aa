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

#include "massrank/gender_lexicon.h"

#include <cctype>
#include <fstream>
#include <sstream>

#include "massrank/errors.h"

namespace massrank {
namespace {

// Byte length of the UTF-8 sequence starting with `lead` (1 for invalid).
size_t Utf8Length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) return 2;
  if ((lead & 0xF0) == 0xE0) return 3;
  if ((lead & 0xF8) == 0xF0) return 4;
  return 1;
}

bool IsApostrophe(std::string_view ch) { return ch == "'" || ch == "\u2019"; }

bool IsWordChar(std::string_view ch) {
  const unsigned char c = static_cast<unsigned char>(ch[0]);
  if (c < 0x80) return std::isalnum(c) != 0 || c == '_';
  // Non-ASCII: treat as a letter unless it is common punctuation or space.
  static const char* const kSeparators[] = {
      "\u00a0", "\u00ab", "\u00bb", "\u2013", "\u2014", "\u2018", "\u2019",
      "\u201c", "\u201d", "\u2026", "\u3000", "\u3001", "\u3002", "\u00bf",
      "\u00a1"};
  for (const char* sep : kSeparators) {
    if (ch == sep) return false;
  }
  return true;
}

std::vector<std::string_view> SplitCodepoints(std::string_view text) {
  std::vector<std::string_view> out;
  for (size_t i = 0; i < text.size();) {
    const size_t n = std::min(Utf8Length(static_cast<unsigned char>(text[i])),
                              text.size() - i);
    out.push_back(text.substr(i, n));
    i += n;
  }
  return out;
}

std::string Trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::string_view CaptionGenderName(CaptionGender g) {
  switch (g) {
    case CaptionGender::kMasculine: return "masculine";
    case CaptionGender::kFeminine: return "feminine";
    case CaptionGender::kBoth: return "both";
    case CaptionGender::kNeutral: return "neutral";
  }
  return "neutral";
}

Gender ToGender(CaptionGender g) {
  switch (g) {
    case CaptionGender::kMasculine: return Gender::kMasculine;
    case CaptionGender::kFeminine: return Gender::kFeminine;
    case CaptionGender::kBoth: return Gender::kBoth;
    case CaptionGender::kNeutral: return Gender::kNeutral;
  }
  return Gender::kNeutral;
}

std::string LowercaseAscii(std::string_view text) {
  std::string out(text);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<TextSegment> SegmentWords(std::string_view text) {
  const std::vector<std::string_view> cps = SplitCodepoints(text);
  std::vector<TextSegment> out;
  auto append = [&](std::string_view cp, bool word) {
    if (out.empty() || out.back().is_word != word) out.push_back({"", word});
    out.back().text.append(cp);
  };
  for (size_t i = 0; i < cps.size(); ++i) {
    bool word = IsWordChar(cps[i]);
    if (!word && IsApostrophe(cps[i]) && i > 0 && i + 1 < cps.size() &&
        IsWordChar(cps[i - 1]) && IsWordChar(cps[i + 1])) {
      word = true;
    }
    append(cps[i], word);
  }
  return out;
}

namespace {

// Lowercase form with typographic apostrophes folded to ASCII.
std::string LookupKey(std::string_view word) {
  std::string key = LowercaseAscii(word);
  for (size_t pos = key.find("\u2019"); pos != std::string::npos;
       pos = key.find("\u2019", pos + 1)) {
    key.replace(pos, 3, "'");
  }
  return key;
}

}  // namespace

GenderLexicon GenderLexicon::Parse(std::string_view text) {
  GenderLexicon lex;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw LexiconError("lexicon line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (Trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream fs(line);
    while (std::getline(fs, field, '\t')) fields.push_back(Trim(field));
    if (fields.size() != 3) fail("expected 3 tab-separated fields");
    const std::string word = LookupKey(fields[0]);
    const std::string& cls = fields[1];
    const std::string& replacement = fields[2];
    if (word.empty() || replacement.empty()) fail("empty word or replacement");
    const auto segs = SegmentWords(word);
    if (segs.size() != 1 || !segs[0].is_word) fail("'" + word + "' is not a single word");
    if (cls != "m" && cls != "f") fail("class must be 'm' or 'f'");
    if (lex.neutral_map_.count(word)) fail("duplicate word '" + word + "'");
    (cls == "m" ? lex.masculine_ : lex.feminine_).insert(word);
    lex.neutral_map_.emplace(word, replacement);
  }
  for (const auto& [word, replacement] : lex.neutral_map_) {
    for (const auto& seg : SegmentWords(replacement)) {
      if (!seg.is_word) continue;
      const std::string w = LookupKey(seg.text);
      if (lex.masculine_.count(w) || lex.feminine_.count(w)) {
        throw LexiconError("replacement '" + replacement + "' for '" + word +
                           "' contains the gendered word '" + w + "'");
      }
    }
  }
  return lex;
}

GenderLexicon GenderLexicon::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open lexicon '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

CaptionGender ClassifyCaption(std::string_view caption, const GenderLexicon& lex) {
  bool masculine = false;
  bool feminine = false;
  for (const auto& seg : SegmentWords(caption)) {
    if (!seg.is_word) continue;
    const std::string w = LookupKey(seg.text);
    masculine = masculine || lex.masculine().count(w) > 0;
    feminine = feminine || lex.feminine().count(w) > 0;
  }
  if (masculine && feminine) return CaptionGender::kBoth;
  if (masculine) return CaptionGender::kMasculine;
  if (feminine) return CaptionGender::kFeminine;
  return CaptionGender::kNeutral;
}

std::string NeutralizeCaption(std::string_view caption, const GenderLexicon& lex) {
  std::string out;
  out.reserve(caption.size());
  for (const auto& seg : SegmentWords(caption)) {
    if (!seg.is_word) {
      out += seg.text;
      continue;
    }
    auto it = lex.neutral_map().find(LookupKey(seg.text));
    if (it == lex.neutral_map().end()) {
      out += seg.text;
      continue;
    }
    std::string replacement = it->second;
    if (std::isupper(static_cast<unsigned char>(seg.text[0])) &&
        !replacement.empty() && replacement[0] >= 'a' && replacement[0] <= 'z') {
      replacement[0] = static_cast<char>(replacement[0] - 'a' + 'A');
    }
    out += replacement;
  }
  return out;
}

}  // namespace massrank
