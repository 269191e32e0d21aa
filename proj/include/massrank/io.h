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

#ifndef MASSRANK_IO_H_
#define MASSRANK_IO_H_

#include <functional>
#include "json.hpp"
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "massrank/dataset.h"
#include "massrank/retrieval.h"
#include "massrank/table.h"

namespace massrank {

using Json = nlohmann::ordered_json;

// Shortest decimal with 17 significant digits ("%.17g"); round-trips every
// finite double.
std::string FormatDouble(double value);

// Deterministic serialization: keys in insertion order, numbers through
// FormatDouble. indent < 0 gives a single line.
std::string DumpJson(const Json& value, int indent = -1);

// Whole-file helpers. ReadFile throws IoError.
std::string ReadFile(const std::string& path);
// Writes to a temporary sibling and renames over `path` on success.
void WriteFileAtomic(const std::string& path, std::string_view content);

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view bytes);
std::string FileDigest(const std::string& path);  // "sha256:<hex>"
// Writes "<digest>  <basename>\n" to `path`.digest.
void WriteDigestSidecar(const std::string& path, std::string_view content);

// Calls fn(line_number, object) for every non-blank line of a JSON-lines
// file; ParseError and validation errors carry "path:line: " prefixes.
void ForEachJsonLine(const std::string& path,
                     const std::function<void(size_t, const nlohmann::json&)>& fn);

// ---- Conditional tables ----------------------------------------------------
//
//   <stem>.jsonl             {"image","text","tokens":[...],"logp":[...]}
//   <stem>.image_emb.jsonl   {"id","vec":[...]}            (optional)
//   <stem>.text_emb.jsonl    {"id","vec":[...]}            (optional)
//   <stem>.itm.jsonl         {"image","text","logit"} or
//                            {"image","text","lp_yes","lp_no"} (optional)

struct TableSiblings {
  std::string image_emb;
  std::string text_emb;
  std::string itm;
};

TableSiblings SiblingPaths(const std::string& table_path);

// Loads and validates a table and whichever siblings exist.
ConditionalTable LoadTable(const std::string& path);
// Parses table records from memory (no siblings); `name` labels errors.
ConditionalTable ParseTable(std::string_view content, const std::string& name);
// Canonical text of the main table file.
std::string SerializeTable(const ConditionalTable& table);
// Writes the table, non-empty siblings and digest sidecars.
void SaveTable(const ConditionalTable& table, const std::string& path);

std::string TableRecordLine(const TableEntry& entry);

// ---- Pair lists and score files -------------------------------------------

// {"image","text"} per line.
std::vector<std::pair<ItemId, ItemId>> LoadPairs(const std::string& path);

struct ScoreFile {
  Json provenance = Json::object();
  PairScores scores;
};

// Optional first line {"provenance":{...}}, then {"image","text","score"}.
ScoreFile LoadScores(const std::string& path);
std::string SerializeScores(const Json& provenance,
                            const std::vector<std::pair<std::pair<ItemId, ItemId>,
                                                        double>>& rows);

// ---- Manifests -------------------------------------------------------------

// {"direction", "queries":[{"id","gold":[...],"gender"}],
//  "candidates":[{"id","gender"}]}; gender defaults to "unknown".
RetrievalDataset LoadRetrievalManifest(const std::string& path);
RetrievalDataset ParseRetrievalManifest(std::string_view content);
// {"id","i0","i1","c0","c1","tags":[...]} per line.
std::vector<WinogroundSample> LoadWinogroundManifest(const std::string& path);
// {"image","caption_true","caption_foil","category"} per line.
std::vector<FoilSample> LoadFoilManifest(const std::string& path);
// {"image","fruit_type","caption_true","caption_adv"} per line.
std::vector<ColorItem> LoadColorManifest(const std::string& path);

std::string SerializeFoilManifest(const std::vector<FoilSample>& foils);

}  // namespace massrank

#endif  // MASSRANK_IO_H_
