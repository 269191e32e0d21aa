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

#include "massrank/results.h"

#include "massrank/errors.h"

namespace massrank {

std::string ResultsDoc::Serialize() const {
  Json doc;
  doc["metrics"] = metrics;
  doc["provenance"] = provenance;
  return DumpJson(doc, 2) + "\n";
}

ResultsDoc ResultsDoc::Parse(std::string_view content, const std::string& name) {
  Json doc;
  try {
    doc = Json::parse(content);
  } catch (const Json::exception& e) {
    throw ParseError(name + ": invalid results document (" + e.what() + ")");
  }
  if (!doc.is_object() || !doc.contains("metrics") || !doc["metrics"].is_object()) {
    throw ParseError(name + ": results document lacks a 'metrics' object");
  }
  ResultsDoc out;
  out.metrics = doc["metrics"];
  if (doc.contains("provenance")) out.provenance = doc["provenance"];
  return out;
}

ResultsDoc ResultsDoc::Load(const std::string& path) {
  return Parse(ReadFile(path), path);
}

std::optional<double> ResultsDoc::Metric(const std::string& name) const {
  auto it = metrics.find(name);
  if (it == metrics.end() || !it->is_number()) return std::nullopt;
  return it->get<double>();
}

}  // namespace massrank
