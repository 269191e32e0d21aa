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

#ifndef MASSRANK_RESULTS_H_
#define MASSRANK_RESULTS_H_

#include <optional>
#include <string>

#include "massrank/io.h"

namespace massrank {

// Metric values plus the provenance needed to reproduce them: similarity
// function and its knobs, seeds, shortlist, k values and content digests of
// every input file.
struct ResultsDoc {
  Json metrics = Json::object();
  Json provenance = Json::object();

  std::string Serialize() const;
  static ResultsDoc Parse(std::string_view content, const std::string& name);
  static ResultsDoc Load(const std::string& path);

  // Numeric metric by name, if present.
  std::optional<double> Metric(const std::string& name) const;
};

}  // namespace massrank

#endif  // MASSRANK_RESULTS_H_
