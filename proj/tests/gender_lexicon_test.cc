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

#include <string>

#include <gtest/gtest.h>

#include "massrank/errors.h"

namespace massrank {
namespace {

GenderLexicon Default() {
  return GenderLexicon::Load(std::string(MASSRANK_SOURCE_DIR) + "/data/gender_lexicon.tsv");
}

TEST(GenderLexiconTest, ClassifiesCaptions) {
  const GenderLexicon lex = Default();
  EXPECT_EQ(ClassifyCaption("a man riding a horse", lex), CaptionGender::kMasculine);
  EXPECT_EQ(ClassifyCaption("two people walking on a beach", lex), CaptionGender::kNeutral);
  EXPECT_EQ(ClassifyCaption("a woman and a man shaking hands", lex), CaptionGender::kBoth);
  EXPECT_EQ(ClassifyCaption("A WOMAN holding an umbrella.", lex), CaptionGender::kFeminine);
}

TEST(GenderLexiconTest, WholeWordsOnly) {
  const GenderLexicon lex = Default();
  EXPECT_EQ(ClassifyCaption("a mannequin in a shop window", lex), CaptionGender::kNeutral);
  EXPECT_EQ(ClassifyCaption("the human race", lex), CaptionGender::kNeutral);
  EXPECT_EQ(ClassifyCaption("a man's hat", lex), CaptionGender::kMasculine);
  EXPECT_EQ(ClassifyCaption("a woman\u2019s hat", lex), CaptionGender::kFeminine);
  EXPECT_EQ(ClassifyCaption("the boys' bikes", lex), CaptionGender::kMasculine);
  EXPECT_EQ(ClassifyCaption("a man, standing", lex), CaptionGender::kMasculine);
}

TEST(GenderLexiconTest, Neutralizes) {
  const GenderLexicon lex = Default();
  EXPECT_EQ(NeutralizeCaption("A man riding a horse", lex), "A person riding a horse");
  EXPECT_EQ(NeutralizeCaption("two people walking", lex), "two people walking");
  EXPECT_EQ(NeutralizeCaption("Man and woman.", lex), "Person and person.");
  EXPECT_EQ(NeutralizeCaption("the man's dog", lex), "the person's dog");
  const std::string once = NeutralizeCaption("she gave her son a ball", lex);
  EXPECT_EQ(ClassifyCaption(once, lex), CaptionGender::kNeutral);
  EXPECT_EQ(NeutralizeCaption(once, lex), once);
}

TEST(GenderLexiconTest, SegmentationRoundTrips) {
  for (const std::string s : {"a man's hat", "don\xE2\x80\x99t stop", "  lead  ", "",
                              "caf\xC3\xA9 au lait", "x\xE2\x80\x94y"}) {
    std::string joined;
    for (const auto& seg : SegmentWords(s)) joined += seg.text;
    EXPECT_EQ(joined, s);
  }
  const auto segs = SegmentWords("don\xE2\x80\x99t-stop");
  ASSERT_EQ(segs.size(), 3u);
  EXPECT_EQ(segs[0].text, "don\xE2\x80\x99t");
  EXPECT_TRUE(segs[0].is_word);
  EXPECT_FALSE(segs[1].is_word);
}

TEST(GenderLexiconTest, ParseErrors) {
  EXPECT_THROW(GenderLexicon::Parse("man\tm\n"), LexiconError);
  EXPECT_THROW(GenderLexicon::Parse("man\tx\tperson\n"), LexiconError);
  EXPECT_THROW(GenderLexicon::Parse("man\tm\tperson\nman\tm\tperson\n"), LexiconError);
  EXPECT_THROW(GenderLexicon::Parse("man\tm\twoman\nwoman\tf\tperson\n"), LexiconError);
  EXPECT_THROW(GenderLexicon::Load("/nonexistent/lexicon.tsv"), IoError);
  const auto lex = GenderLexicon::Parse("# comment\n\nKing\tm\tmonarch\n");
  EXPECT_EQ(lex.masculine().count("king"), 1u);
  EXPECT_EQ(ToGender(CaptionGender::kBoth), Gender::kBoth);
}

}  // namespace
}  // namespace massrank
