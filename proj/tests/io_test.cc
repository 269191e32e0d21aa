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

#include "massrank/io.h"

#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "malformed_corpus.h"
#include "massrank/errors.h"
#include "massrank/results.h"

namespace massrank {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("massrank_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string File(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

const char kValidTable[] =
    R"({"image":"i1","text":"t1","tokens":["a","dog"],"logp":[-1.0,-2.0]}
{"image":"i2","text":"t1","tokens":["a","dog"],"logp":[-1.5,-2.5]}
{"image":"i1","text":"t2","tokens":["a","cat"],"logp":[-1.0,-0.5]}
{"image":"i2","text":"t2","tokens":["a","cat"],"logp":[-0.2,-0.1]}
{"image":"null","text":"t1","tokens":["a","dog"],"logp":[-1.2,-2.2]}
{"image":"null","text":"t2","tokens":["a","cat"],"logp":[-1.1,-1.3]}
)";

TEST(ParseTableTest, ValidTwoByTwo) {
  const ConditionalTable t = ParseTable(kValidTable, "valid");
  EXPECT_EQ(t.entries().size(), 6u);
  EXPECT_EQ(t.Images(), (std::vector<ItemId>{"i1", "i2"}));
  EXPECT_EQ(t.ImagesFor("t2"), (std::vector<ItemId>{"i1", "i2"}));
  EXPECT_EQ(t.TokensFor("t1"), (TokenSequence{"a", "dog"}));
}

TEST(ParseTableTest, ErrorsCarryLineNumbers) {
  const std::string bad = std::string(kValidTable) +
      R"({"image":"i3","text":"t1","tokens":["a","dog"],"logp":[0.5,-2.0]})" + "\n";
  try {
    ParseTable(bad, "tbl");
    FAIL();
  } catch (const InvalidInputError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("tbl:7: ", 0), 0u) << e.what();
  }
  const std::string dup = std::string(kValidTable) +
      R"({"image":"i1","text":"t1","tokens":["a","dog"],"logp":[-1.0,-2.0]})" + "\n";
  EXPECT_THROW(ParseTable(dup, "tbl"), DuplicateKeyError);
}

TEST(LoadTableTest, MalformedCorpusRaisesDocumentedClasses) {
  const auto corpus = testing::LoadMalformedCorpus(std::string(MASSRANK_FIXTURES) + "/malformed");
  ASSERT_EQ(corpus.size(), 20u);
  for (const auto& c : corpus) {
    const auto outcome = testing::TryLoadTable(c.path);
    EXPECT_EQ(outcome.kind, c.expected_kind) << c.path << ": " << outcome.message;
  }
}

TEST(SaveTableTest, RoundTripWithSiblingsIsByteStable) {
  TempDir dir;
  ConditionalTable t = ParseTable(kValidTable, "valid");
  t.AddImageEmbedding("i1", EmbeddingVector({0.1, 0.2}));
  t.AddTextEmbedding("t1", EmbeddingVector({1.0 / 3.0, 0.0}));
  t.AddItm("i1", "t1", ItmLogit{0.25});
  const std::string path = dir.File("tbl.jsonl");
  SaveTable(t, path);
  EXPECT_TRUE(fs::exists(dir.File("tbl.image_emb.jsonl")));
  EXPECT_TRUE(fs::exists(dir.File("tbl.itm.jsonl.digest")));
  const ConditionalTable back = LoadTable(path);
  EXPECT_TRUE(back == t);
  const std::string first = ReadFile(path);
  SaveTable(back, path);
  EXPECT_EQ(ReadFile(path), first);
  EXPECT_EQ(ReadFile(path + ".digest"),
            "sha256:" + Sha256Hex(first) + "  tbl.jsonl\n");
}

TEST(SaveTableTest, RemovesStaleSiblings) {
  TempDir dir;
  ConditionalTable t = ParseTable(kValidTable, "valid");
  t.AddItm("i1", "t1", ItmLogit{0.25});
  const std::string path = dir.File("tbl.jsonl");
  SaveTable(t, path);
  SaveTable(ParseTable(kValidTable, "valid"), path);
  EXPECT_FALSE(fs::exists(dir.File("tbl.itm.jsonl")));
  EXPECT_TRUE(LoadTable(path).itm().empty());
}

TEST(FormatTest, NumbersRoundTrip) {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 123456789.123456789}) {
    EXPECT_EQ(std::stod(FormatDouble(v)), v);
  }
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(ScoreFileTest, RoundTrip) {
  TempDir dir;
  Json prov;
  prov["similarity"] = "mass";
  const std::string text = SerializeScores(prov, {{{"i1", "t1"}, 0.5}, {{"i2", "t1"}, -0.25}});
  WriteFileAtomic(dir.File("s.jsonl"), text);
  const ScoreFile sf = LoadScores(dir.File("s.jsonl"));
  EXPECT_EQ(sf.provenance["similarity"], "mass");
  EXPECT_EQ(sf.scores.At("i2", "t1"), -0.25);
  WriteFileAtomic(dir.File("bad.jsonl"), R"({"image":"i","text":"t","score":"x"})");
  EXPECT_THROW(LoadScores(dir.File("bad.jsonl")), ParseError);
}

TEST(ManifestTest, RetrievalManifest) {
  const auto ds = ParseRetrievalManifest(R"({"direction":"text-to-image",
      "queries":[{"id":"t1","gold":["i1"],"gender":"masculine"}],
      "candidates":[{"id":"i1","gender":"both"},{"id":"i2"}]})");
  EXPECT_EQ(ds.queries[0].gender, Gender::kMasculine);
  EXPECT_EQ(ds.candidates[0].gender, Gender::kBoth);
  EXPECT_EQ(ds.candidates[1].gender, Gender::kUnknown);
  EXPECT_THROW(ParseRetrievalManifest(R"({"direction":"sideways","queries":[],"candidates":[]})"),
               Error);
  EXPECT_THROW(ParseRetrievalManifest(R"({"direction":"text-to-image",
      "queries":[{"id":"t1","gold":["i9"]}],"candidates":[{"id":"i1"}]})"),
               MissingEntryError);
  EXPECT_THROW(ParseRetrievalManifest("[1,2"), ParseError);
}

TEST(ManifestTest, FoilAndWinogroundValidation) {
  TempDir dir;
  WriteFileAtomic(dir.File("f.jsonl"),
                  R"({"image":"i","caption_true":"a","caption_foil":"a"})" "\n");
  EXPECT_THROW(LoadFoilManifest(dir.File("f.jsonl")), InvalidInputError);
  WriteFileAtomic(dir.File("w.jsonl"),
                  R"({"id":"w","i0":"x","i1":"x","c0":"a","c1":"b"})" "\n");
  EXPECT_THROW(LoadWinogroundManifest(dir.File("w.jsonl")), InvalidInputError);
  EXPECT_THROW(LoadFoilManifest(dir.File("missing.jsonl")), IoError);
}

TEST(ResultsDocTest, RoundTrip) {
  ResultsDoc doc;
  doc.metrics["recall@1"] = 0.5;
  doc.provenance["label"] = "x";
  const ResultsDoc back = ResultsDoc::Parse(doc.Serialize(), "doc");
  EXPECT_EQ(back.Metric("recall@1"), 0.5);
  EXPECT_FALSE(back.Metric("bias@1").has_value());
  EXPECT_EQ(back.Serialize(), doc.Serialize());
}

}  // namespace
}  // namespace massrank
