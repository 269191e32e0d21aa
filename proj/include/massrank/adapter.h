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

#ifndef MASSRANK_ADAPTER_H_
#define MASSRANK_ADAPTER_H_

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "massrank/io.h"
#include "massrank/types.h"

namespace massrank {

// Wire protocol (one JSON object per line, same over both transports):
//   {"op":"identity"}                              -> {"identity":{...}}
//   {"op":"token_logprobs","items":[{"image","text"}...]}
//                                                  -> {"items":[{"tokens","logp"}...]}
// Any request may instead be answered with {"error": "..."}. The image is a
// file path or the reserved "null", which adapters render as a black image at
// their native input resolution.

struct AdapterItem {
  std::string image;  // path or "null"
  std::string text;
};

struct AdapterResponse {
  TokenSequence tokens;
  TokenLogProbs logp;
  friend bool operator==(const AdapterResponse&, const AdapterResponse&) = default;
};

class AdapterTransport {
 public:
  virtual ~AdapterTransport() = default;
  // Sends one request line, returns one response line. Throws
  // AdapterTimeoutError for timeouts and connection failures (retryable) and
  // AdapterProtocolError for everything else.
  virtual std::string RoundTrip(const std::string& request,
                                std::chrono::milliseconds timeout) = 0;
  virtual std::string Describe() const = 0;
};

// "stdio:<shell command>" spawns a child speaking the protocol on
// stdin/stdout; "http://host:port[/path]" POSTs each request line.
// Throws UsageError for other forms.
std::unique_ptr<AdapterTransport> MakeTransport(std::string_view spec);

struct AdapterOptions {
  size_t batch_size = 16;
  size_t max_in_flight = 4;
  int max_retries = 3;
  std::chrono::milliseconds timeout{30000};
  std::chrono::milliseconds initial_backoff{100};
};

// Client with retries (exponential backoff on AdapterTimeoutError), bounded
// pipelining, and a response cache keyed on (adapter identity digest, image
// content digest or "null", text).
class AdapterClient {
 public:
  AdapterClient(std::unique_ptr<AdapterTransport> transport, AdapterOptions options);

  // Identity object reported by the adapter; fetched once.
  const Json& Identity();
  // "sha256:<hex>" of the canonical identity JSON.
  const std::string& IdentityDigest();

  // Responses align 1:1 with `items`. Throws AdapterProtocolError on
  // malformed, misaligned or invalid responses.
  std::vector<AdapterResponse> TokenLogprobs(const std::vector<AdapterItem>& items);

  // Number of requests that reached the transport (including retries).
  size_t transport_calls() const { return transport_calls_.load(); }

 private:
  std::string CallWithRetry(const std::string& request);
  std::string CacheKey(const AdapterItem& item);

  std::unique_ptr<AdapterTransport> transport_;
  AdapterOptions options_;
  std::optional<Json> identity_;
  std::string identity_digest_;
  std::mutex cache_mu_;
  std::map<std::string, AdapterResponse> cache_;
  std::map<std::string, std::string> image_digests_;
  std::atomic<size_t> transport_calls_{0};
};

// Validates a token_logprobs response against `expected` request items.
std::vector<AdapterResponse> ParseTokenLogprobsResponse(std::string_view line,
                                                        size_t expected);

}  // namespace massrank

#endif  // MASSRANK_ADAPTER_H_
