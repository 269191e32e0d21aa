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

// Reference adapter speaking the line protocol on stdin/stdout.
//
// Tokens are the whitespace-split caption; per-token log-probs are a fixed
// function of the token and whether the image is "null". Flags inject
// failures for testing clients.

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

double TokenLogprob(const std::string& token, bool null_image, size_t position) {
  size_t h = 1469598103934665603ull;
  for (unsigned char c : token) h = (h ^ c) * 1099511628211ull;
  const double base = -0.5 - static_cast<double>(h % 1000) / 250.0;
  return null_image ? base - 0.25 - 0.05 * static_cast<double>(position) : base;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"echo adapter"};
  std::string fail;
  std::string name = "echo";
  app.add_option("--fail", fail, "positive-logp | misalign | hang | garbage | error");
  app.add_option("--name", name, "Identity name");
  CLI11_PARSE(app, argc, argv);

  std::string line;
  while (std::getline(std::cin, line)) {
    Json req;
    try {
      req = Json::parse(line);
    } catch (const Json::exception&) {
      std::cout << R"({"error":"request is not JSON"})" << std::endl;
      continue;
    }
    const std::string op = req.value("op", "");
    if (op == "identity") {
      Json id;
      id["identity"] = {{"name", name}, {"version", 1}};
      std::cout << id.dump() << std::endl;
      continue;
    }
    if (op != "token_logprobs" || !req.contains("items") || !req["items"].is_array()) {
      std::cout << R"({"error":"unsupported request"})" << std::endl;
      continue;
    }
    if (fail == "hang") {
      std::this_thread::sleep_for(std::chrono::hours(1));
    }
    if (fail == "garbage") {
      std::cout << "not json at all" << std::endl;
      continue;
    }
    if (fail == "error") {
      std::cout << R"({"error":"injected failure"})" << std::endl;
      continue;
    }
    Json out;
    out["items"] = Json::array();
    for (const auto& item : req["items"]) {
      const bool null_image = item.value("image", "") == "null";
      std::istringstream words(item.value("text", ""));
      Json tokens = Json::array();
      Json logp = Json::array();
      std::string w;
      while (words >> w) {
        logp.push_back(TokenLogprob(w, null_image, tokens.size()));
        tokens.push_back(w);
      }
      if (fail == "positive-logp" && !logp.empty()) logp[0] = 0.5;
      if (fail == "misalign") logp.push_back(-1.0);
      out["items"].push_back({{"tokens", tokens}, {"logp", logp}});
    }
    std::cout << out.dump() << std::endl;
  }
  return 0;
}
