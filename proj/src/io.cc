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

#include <openssl/evp.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "massrank/errors.h"

namespace massrank {
namespace {

using RawJson = nlohmann::json;

const RawJson& Field(const RawJson& obj, const char* name) {
  if (!obj.is_object()) throw ParseError("record is not a JSON object");
  auto it = obj.find(name);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + name + "'");
  return *it;
}

std::string StringField(const RawJson& obj, const char* name) {
  const RawJson& v = Field(obj, name);
  if (!v.is_string()) throw ParseError(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

double NumberField(const RawJson& obj, const char* name) {
  const RawJson& v = Field(obj, name);
  if (!v.is_number()) throw ParseError(std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

std::vector<std::string> StringArray(const RawJson& obj, const char* name) {
  const RawJson& v = Field(obj, name);
  if (!v.is_array()) throw ParseError(std::string("field '") + name + "' must be an array");
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_string()) {
      throw ParseError(std::string("field '") + name + "' must hold strings");
    }
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<double> NumberArray(const RawJson& obj, const char* name) {
  const RawJson& v = Field(obj, name);
  if (!v.is_array()) throw ParseError(std::string("field '") + name + "' must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) {
      throw ParseError(std::string("field '") + name + "' must hold numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

std::string OptionalString(const RawJson& obj, const char* name, std::string fallback) {
  if (!obj.is_object()) throw ParseError("record is not a JSON object");
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return fallback;
  if (!it->is_string()) throw ParseError(std::string("field '") + name + "' must be a string");
  return it->get<std::string>();
}

void DumpInto(const Json& v, int indent, int depth, std::string& out) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case Json::value_t::null: out += "null"; break;
    case Json::value_t::boolean: out += v.get<bool>() ? "true" : "false"; break;
    case Json::value_t::number_integer: out += std::to_string(v.get<int64_t>()); break;
    case Json::value_t::number_unsigned: out += std::to_string(v.get<uint64_t>()); break;
    case Json::value_t::number_float: out += FormatDouble(v.get<double>()); break;
    case Json::value_t::string: out += v.dump(); break;
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        break;
      }
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        DumpInto(e, indent, depth + 1, out);
      }
      newline(depth);
      out += ']';
      break;
    }
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        break;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        DumpInto(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      break;
    }
    default: throw InvalidInputError("cannot serialize JSON value");
  }
}

std::string StemOf(const std::string& path) {
  const std::string ext = ".jsonl";
  if (path.size() > ext.size() &&
      path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
    return path.substr(0, path.size() - ext.size());
  }
  return path;
}

Json VecJson(std::span<const double> v) {
  Json arr = Json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

void WriteOrRemove(const std::string& path, const std::string& content) {
  if (content.empty()) {
    std::error_code ec;
    std::filesystem::remove(path, ec);
    std::filesystem::remove(path + ".digest", ec);
    return;
  }
  WriteFileAtomic(path, content);
  WriteDigestSidecar(path, content);
}

std::vector<std::string> SplitLines(std::string_view content) {
  std::vector<std::string> lines;
  size_t start = 0;
  while (start <= content.size()) {
    size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    lines.emplace_back(content.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

void ForEachJsonLineIn(std::string_view content, const std::string& name,
                       const std::function<void(size_t, const RawJson&)>& fn) {
  const std::vector<std::string> lines = SplitLines(content);
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = name + ":" + std::to_string(i + 1) + ": ";
    try {
      fn(i + 1, RawJson::parse(line));
    } catch (const RawJson::parse_error& e) {
      throw ParseError(where + "invalid JSON (" + e.what() + ")");
    } catch (const RawJson::exception& e) {
      throw ParseError(where + e.what());
    } catch (const Error& e) {
      e.RethrowWithPrefix(where);
    }
  }
}

}  // namespace

std::string FormatDouble(double value) {
  if (!std::isfinite(value)) throw InvalidInputError("cannot serialize a non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string DumpJson(const Json& value, int indent) {
  std::string out;
  DumpInto(value, indent, 0, out);
  return out;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFileAtomic(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename onto '" + path + "'");
  }
}

std::string Sha256Hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 failed");
  }
  static const char* kHex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 15];
  }
  return out;
}

std::string FileDigest(const std::string& path) {
  return "sha256:" + Sha256Hex(ReadFile(path));
}

void WriteDigestSidecar(const std::string& path, std::string_view content) {
  const std::string name = std::filesystem::path(path).filename().string();
  WriteFileAtomic(path + ".digest", "sha256:" + Sha256Hex(content) + "  " + name + "\n");
}

void ForEachJsonLine(const std::string& path,
                     const std::function<void(size_t, const RawJson&)>& fn) {
  ForEachJsonLineIn(ReadFile(path), path, fn);
}

TableSiblings SiblingPaths(const std::string& table_path) {
  const std::string stem = StemOf(table_path);
  return {stem + ".image_emb.jsonl", stem + ".text_emb.jsonl", stem + ".itm.jsonl"};
}

ConditionalTable ParseTable(std::string_view content, const std::string& name) {
  ConditionalTable table;
  ForEachJsonLineIn(content, name, [&](size_t, const RawJson& rec) {
    TableEntry entry;
    entry.image = StringField(rec, "image");
    entry.text = StringField(rec, "text");
    entry.tokens = StringArray(rec, "tokens");
    entry.logp = TokenLogProbs(NumberArray(rec, "logp"));
    table.Add(std::move(entry));
  });
  return table;
}

ConditionalTable LoadTable(const std::string& path) {
  ConditionalTable table = ParseTable(ReadFile(path), path);
  const TableSiblings sib = SiblingPaths(path);
  if (std::filesystem::exists(sib.image_emb)) {
    ForEachJsonLine(sib.image_emb, [&](size_t, const RawJson& rec) {
      table.AddImageEmbedding(StringField(rec, "id"),
                              EmbeddingVector(NumberArray(rec, "vec")));
    });
  }
  if (std::filesystem::exists(sib.text_emb)) {
    ForEachJsonLine(sib.text_emb, [&](size_t, const RawJson& rec) {
      table.AddTextEmbedding(StringField(rec, "id"),
                             EmbeddingVector(NumberArray(rec, "vec")));
    });
  }
  if (std::filesystem::exists(sib.itm)) {
    ForEachJsonLine(sib.itm, [&](size_t, const RawJson& rec) {
      const std::string image = StringField(rec, "image");
      const std::string text = StringField(rec, "text");
      const bool has_logit = rec.contains("logit");
      const bool has_vqa = rec.contains("lp_yes") || rec.contains("lp_no");
      if (has_logit == has_vqa) {
        throw ParseError("matching-head row needs either 'logit' or 'lp_yes'/'lp_no'");
      }
      if (has_logit) {
        const double z = NumberField(rec, "logit");
        if (!std::isfinite(z)) throw InvalidInputError("logit is not finite");
        table.AddItm(image, text, ItmLogit{z});
      } else {
        VqaYesNoLogProbs lp{NumberField(rec, "lp_yes"), NumberField(rec, "lp_no")};
        if (!std::isfinite(lp.logp_yes) || !std::isfinite(lp.logp_no) ||
            lp.logp_yes > TokenLogProbs::kPositiveSlack ||
            lp.logp_no > TokenLogProbs::kPositiveSlack) {
          throw InvalidInputError("yes/no log-probabilities must be finite and <= 0");
        }
        table.AddItm(image, text, lp);
      }
    });
  }
  return table;
}

std::string TableRecordLine(const TableEntry& entry) {
  Json rec;
  rec["image"] = entry.image;
  rec["text"] = entry.text;
  rec["tokens"] = entry.tokens;
  rec["logp"] = VecJson(entry.logp.values());
  return DumpJson(rec);
}

std::string SerializeTable(const ConditionalTable& table) {
  std::string out;
  for (const auto& [key, entry] : table.entries()) {
    out += TableRecordLine(entry);
    out += '\n';
  }
  return out;
}

void SaveTable(const ConditionalTable& table, const std::string& path) {
  const std::string main = SerializeTable(table);
  std::string image_emb, text_emb, itm;
  for (const auto& [id, vec] : table.image_embeddings()) {
    Json rec;
    rec["id"] = id;
    rec["vec"] = VecJson(vec.values());
    image_emb += DumpJson(rec) + "\n";
  }
  for (const auto& [id, vec] : table.text_embeddings()) {
    Json rec;
    rec["id"] = id;
    rec["vec"] = VecJson(vec.values());
    text_emb += DumpJson(rec) + "\n";
  }
  for (const auto& [key, out] : table.itm()) {
    Json rec;
    rec["image"] = key.first;
    rec["text"] = key.second;
    if (const auto* logit = std::get_if<ItmLogit>(&out)) {
      rec["logit"] = logit->value;
    } else {
      const auto& lp = std::get<VqaYesNoLogProbs>(out);
      rec["lp_yes"] = lp.logp_yes;
      rec["lp_no"] = lp.logp_no;
    }
    itm += DumpJson(rec) + "\n";
  }
  const TableSiblings sib = SiblingPaths(path);
  WriteOrRemove(sib.image_emb, image_emb);
  WriteOrRemove(sib.text_emb, text_emb);
  WriteOrRemove(sib.itm, itm);
  WriteFileAtomic(path, main);
  WriteDigestSidecar(path, main);
}

std::vector<std::pair<ItemId, ItemId>> LoadPairs(const std::string& path) {
  std::vector<std::pair<ItemId, ItemId>> pairs;
  ForEachJsonLine(path, [&](size_t, const RawJson& rec) {
    std::string image = StringField(rec, "image");
    std::string text = StringField(rec, "text");
    CheckItemId(image, "image");
    CheckItemId(text, "text");
    if (IsNullImage(text)) throw ReservedIdError("reserved id 'null' used as a text id");
    pairs.emplace_back(std::move(image), std::move(text));
  });
  return pairs;
}

ScoreFile LoadScores(const std::string& path) {
  ScoreFile file;
  bool first = true;
  ForEachJsonLine(path, [&](size_t, const RawJson& rec) {
    if (first && rec.is_object() && rec.contains("provenance")) {
      file.provenance = Json::parse(rec.at("provenance").dump());
      first = false;
      return;
    }
    first = false;
    file.scores.Set(StringField(rec, "image"), StringField(rec, "text"),
                    NumberField(rec, "score"));
  });
  return file;
}

std::string SerializeScores(
    const Json& provenance,
    const std::vector<std::pair<std::pair<ItemId, ItemId>, double>>& rows) {
  std::string out;
  Json header;
  header["provenance"] = provenance;
  out += DumpJson(header) + "\n";
  for (const auto& [pair, score] : rows) {
    Json rec;
    rec["image"] = pair.first;
    rec["text"] = pair.second;
    rec["score"] = score;
    out += DumpJson(rec) + "\n";
  }
  return out;
}

RetrievalDataset ParseRetrievalManifest(std::string_view content) {
  RawJson doc;
  try {
    doc = RawJson::parse(content);
    RetrievalDataset ds;
    ds.direction = ParseDirection(StringField(doc, "direction"));
    const RawJson& queries = Field(doc, "queries");
    const RawJson& candidates = Field(doc, "candidates");
    if (!queries.is_array() || !candidates.is_array()) {
      throw ParseError("'queries' and 'candidates' must be arrays");
    }
    for (const auto& q : queries) {
      ds.queries.push_back({StringField(q, "id"), StringArray(q, "gold"),
                            ParseGender(OptionalString(q, "gender", "unknown"))});
    }
    for (const auto& c : candidates) {
      ds.candidates.push_back(
          {StringField(c, "id"), ParseGender(OptionalString(c, "gender", "unknown"))});
    }
    ds.Validate();
    return ds;
  } catch (const RawJson::exception& e) {
    throw ParseError(std::string("retrieval manifest: ") + e.what());
  }
}

RetrievalDataset LoadRetrievalManifest(const std::string& path) {
  const std::string content = ReadFile(path);
  try {
    return ParseRetrievalManifest(content);
  } catch (const Error& e) {
    e.RethrowWithPrefix(path + ": ");
  }
  return {};
}

std::vector<WinogroundSample> LoadWinogroundManifest(const std::string& path) {
  std::vector<WinogroundSample> out;
  ForEachJsonLine(path, [&](size_t, const RawJson& rec) {
    WinogroundSample s;
    s.id = StringField(rec, "id");
    s.i0 = StringField(rec, "i0");
    s.i1 = StringField(rec, "i1");
    s.c0 = StringField(rec, "c0");
    s.c1 = StringField(rec, "c1");
    if (rec.contains("tags")) {
      for (auto& t : StringArray(rec, "tags")) s.tags.insert(std::move(t));
    }
    if (s.i0 == s.i1 || s.c0 == s.c1) {
      throw InvalidInputError("sample '" + s.id + "' repeats an image or caption");
    }
    out.push_back(std::move(s));
  });
  return out;
}

std::vector<FoilSample> LoadFoilManifest(const std::string& path) {
  std::vector<FoilSample> out;
  ForEachJsonLine(path, [&](size_t, const RawJson& rec) {
    FoilSample f{StringField(rec, "image"), StringField(rec, "caption_true"),
                 StringField(rec, "caption_foil"),
                 OptionalString(rec, "category", "")};
    if (f.caption_true == f.caption_foil) {
      throw InvalidInputError("foil caption equals the true caption");
    }
    out.push_back(std::move(f));
  });
  return out;
}

std::vector<ColorItem> LoadColorManifest(const std::string& path) {
  std::vector<ColorItem> out;
  ForEachJsonLine(path, [&](size_t, const RawJson& rec) {
    out.push_back({StringField(rec, "image"), StringField(rec, "fruit_type"),
                   StringField(rec, "caption_true"), StringField(rec, "caption_adv")});
  });
  return out;
}

std::string SerializeFoilManifest(const std::vector<FoilSample>& foils) {
  std::string out;
  for (const auto& f : foils) {
    Json rec;
    rec["image"] = f.image;
    rec["caption_true"] = f.caption_true;
    rec["caption_foil"] = f.caption_foil;
    rec["category"] = f.category;
    out += DumpJson(rec) + "\n";
  }
  return out;
}

}  // namespace massrank
