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

#include "massrank/adapter.h"

#include <atomic>
#include <filesystem>
#include <string>
#include <thread>

#include <gtest/gtest.h>

#include "httplib.h"
#include "massrank/errors.h"
#include "massrank/io.h"

namespace massrank {
namespace {

namespace fs = std::filesystem;

std::string Echo(const std::string& flags = "") {
  return std::string("stdio:") + MASSRANK_ECHO_ADAPTER + (flags.empty() ? "" : " " + flags);
}

AdapterOptions Fast() {
  AdapterOptions o;
  o.timeout = std::chrono::milliseconds(2000);
  o.initial_backoff = std::chrono::milliseconds(1);
  return o;
}

std::string ImageFile(const std::string& name, const std::string& bytes) {
  const fs::path p = fs::temp_directory_path() / ("massrank_adapter_" + name);
  WriteFileAtomic(p.string(), bytes);
  return p.string();
}

TEST(EchoAdapterTest, MatchesFixtureRows) {
  AdapterClient client(MakeTransport(Echo()), Fast());
  const std::string img = ImageFile("real.png", "pixels");
  const auto out = client.TokenLogprobs({{"null", "a dog runs"}, {img, "a dog runs"}});
  ASSERT_EQ(out.size(), 2u);
  const ConditionalTable fixture =
      LoadTable(std::string(MASSRANK_FIXTURES) + "/echo_rows.jsonl");
  EXPECT_EQ(out[0].tokens, fixture.At("null", "a dog runs").tokens);
  EXPECT_EQ(out[0].logp, fixture.At("null", "a dog runs").logp);
  EXPECT_EQ(out[1].logp, fixture.At("real", "a dog runs").logp);
  EXPECT_EQ(client.IdentityDigest().rfind("sha256:", 0), 0u);
}

TEST(EchoAdapterTest, CacheServesRepeats) {
  AdapterClient client(MakeTransport(Echo()), Fast());
  const auto first = client.TokenLogprobs({{"null", "two cats"}, {"null", "one cat"}});
  const size_t calls = client.transport_calls();
  const auto again = client.TokenLogprobs({{"null", "one cat"}, {"null", "two cats"}});
  EXPECT_EQ(client.transport_calls(), calls);
  EXPECT_EQ(again[0], first[1]);
  EXPECT_EQ(again[1], first[0]);
}

TEST(EchoAdapterTest, CacheKeysOnImageContent) {
  AdapterClient client(MakeTransport(Echo()), Fast());
  const std::string a = ImageFile("a.png", "AAA");
  const std::string b = ImageFile("b.png", "AAA");
  client.TokenLogprobs({{a, "x y"}});
  const size_t calls = client.transport_calls();
  client.TokenLogprobs({{b, "x y"}});
  EXPECT_EQ(client.transport_calls(), calls);
  ImageFile("b.png", "BBB");
  AdapterClient fresh(MakeTransport(Echo()), Fast());
  fresh.TokenLogprobs({{b, "x y"}});
  EXPECT_GT(fresh.transport_calls(), 0u);
}

TEST(EchoAdapterTest, BatchingPreservesOrder) {
  AdapterOptions o = Fast();
  o.batch_size = 3;
  o.max_in_flight = 4;
  AdapterClient client(MakeTransport(Echo()), o);
  std::vector<AdapterItem> items;
  for (int i = 0; i < 20; ++i) items.push_back({"null", "w" + std::to_string(i) + " end"});
  const auto out = client.TokenLogprobs(items);
  ASSERT_EQ(out.size(), 20u);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(out[i].tokens[0], "w" + std::to_string(i));
}

TEST(EchoAdapterTest, ProtocolViolations) {
  {
    AdapterClient c(MakeTransport(Echo("--fail positive-logp")), Fast());
    try {
      c.TokenLogprobs({{"null", "a b"}});
      FAIL();
    } catch (const AdapterProtocolError& e) {
      EXPECT_NE(std::string(e.what()).find("items[0].logp[0]"), std::string::npos) << e.what();
    }
  }
  {
    AdapterClient c(MakeTransport(Echo("--fail misalign")), Fast());
    EXPECT_THROW(c.TokenLogprobs({{"null", "a b"}}), AdapterProtocolError);
  }
  {
    AdapterClient c(MakeTransport(Echo("--fail garbage")), Fast());
    EXPECT_THROW(c.TokenLogprobs({{"null", "a b"}}), AdapterProtocolError);
  }
  {
    AdapterClient c(MakeTransport(Echo("--fail error")), Fast());
    EXPECT_THROW(c.TokenLogprobs({{"null", "a b"}}), AdapterProtocolError);
  }
}

TEST(EchoAdapterTest, HangTimesOutAfterRetries) {
  AdapterOptions o = Fast();
  o.timeout = std::chrono::milliseconds(200);
  o.max_retries = 1;
  AdapterClient c(MakeTransport(Echo("--fail hang")), o);
  EXPECT_THROW(c.TokenLogprobs({{"null", "a b"}}), AdapterTimeoutError);
  // One identity handshake plus the original attempt and one retry.
  EXPECT_EQ(c.transport_calls(), 3u);
}

TEST(ParseResponseTest, CountMismatch) {
  EXPECT_THROW(ParseTokenLogprobsResponse(R"({"items":[]})", 1), AdapterProtocolError);
  EXPECT_THROW(ParseTokenLogprobsResponse(R"({"items":[{"tokens":["a"],"logp":[-1]}]})", 2),
               AdapterProtocolError);
  const auto ok =
      ParseTokenLogprobsResponse(R"({"items":[{"tokens":["a","b"],"logp":[-1,-0.5]}]})", 1);
  EXPECT_EQ(ok[0].tokens, (TokenSequence{"a", "b"}));
}

TEST(TransportTest, RejectsUnknownSchemes) {
  EXPECT_THROW(MakeTransport("grpc://x"), UsageError);
  EXPECT_THROW(MakeTransport("stdio:"), UsageError);
}

class HttpAdapter {
 public:
  HttpAdapter() {
    server_.Post("/v1", [this](const httplib::Request& req, httplib::Response& res) {
      ++requests_;
      const auto doc = nlohmann::json::parse(req.body);
      nlohmann::json out;
      if (doc["op"] == "identity") {
        out["identity"] = {{"name", "http-test"}};
      } else {
        out["items"] = nlohmann::json::array();
        for (const auto& item : doc["items"]) {
          const double lp = item["image"] == "null" ? -2.0 : -1.0;
          out["items"].push_back({{"tokens", {item["text"]}}, {"logp", {lp}}});
        }
      }
      res.set_content(out.dump() + "\n", "application/x-ndjson");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~HttpAdapter() {
    server_.stop();
    thread_.join();
  }
  std::string Spec() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
  int requests() const { return requests_.load(); }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> requests_{0};
};

TEST(HttpTransportTest, RoundTripAndCache) {
  HttpAdapter server;
  AdapterClient client(MakeTransport(server.Spec()), Fast());
  const auto out = client.TokenLogprobs({{"null", "hello"}});
  EXPECT_EQ(out[0].logp[0], -2.0);
  const int before = server.requests();
  client.TokenLogprobs({{"null", "hello"}});
  EXPECT_EQ(server.requests(), before);
  EXPECT_FALSE(client.Identity().empty());
}

TEST(HttpTransportTest, UnreachableIsTimeout) {
  AdapterOptions o = Fast();
  o.max_retries = 0;
  o.timeout = std::chrono::milliseconds(300);
  AdapterClient client(MakeTransport("http://127.0.0.1:1/v1"), o);
  EXPECT_THROW(client.TokenLogprobs({{"null", "x"}}), AdapterTimeoutError);
}

}  // namespace
}  // namespace massrank
