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

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstring>
#include <filesystem>
#include <httplib.h>
#include <thread>

#include "massrank/errors.h"
#include "massrank/parallel.h"

namespace massrank {
namespace {

using RawJson = nlohmann::json;

std::string Truncated(std::string_view raw) {
  constexpr size_t kMax = 200;
  if (raw.size() <= kMax) return std::string(raw);
  return std::string(raw.substr(0, kMax)) + "...";
}

class StdioTransport : public AdapterTransport {
 public:
  explicit StdioTransport(std::string command) : command_(std::move(command)) {
    std::signal(SIGPIPE, SIG_IGN);
  }
  ~StdioTransport() override { Stop(); }

  std::string RoundTrip(const std::string& request,
                        std::chrono::milliseconds timeout) override {
    std::lock_guard<std::mutex> lock(mu_);
    if (pid_ <= 0) Start();
    const std::string line = request + "\n";
    size_t written = 0;
    while (written < line.size()) {
      const ssize_t n = ::write(to_child_, line.data() + written, line.size() - written);
      if (n < 0) {
        if (errno == EINTR) continue;
        Stop();
        throw AdapterTimeoutError("adapter process '" + command_ +
                                  "' is not accepting input");
      }
      written += static_cast<size_t>(n);
    }
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
      const size_t nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        std::string out = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return out;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) {
        // The stream is now out of sync; restart the child on the next call.
        Stop();
        throw AdapterTimeoutError("adapter '" + command_ + "' timed out after " +
                                  std::to_string(timeout.count()) + " ms");
      }
      pollfd pfd{from_child_, POLLIN, 0};
      const int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
      if (rc < 0 && errno == EINTR) continue;
      if (rc <= 0) continue;
      char chunk[4096];
      const ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) {
        Stop();
        throw AdapterProtocolError("adapter '" + command_ +
                                   "' closed its output; partial message: '" +
                                   Truncated(buffer_) + "'");
      }
      buffer_.append(chunk, static_cast<size_t>(n));
    }
  }

  std::string Describe() const override { return "stdio:" + command_; }

 private:
  void Start() {
    int in_pipe[2], out_pipe[2];
    if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0) {
      throw AdapterTimeoutError("cannot create pipes for the adapter");
    }
    const std::string exec_line = "exec " + command_;
    const pid_t pid = ::fork();
    if (pid < 0) throw AdapterTimeoutError("cannot fork the adapter process");
    if (pid == 0) {
      ::setpgid(0, 0);
      ::dup2(in_pipe[0], STDIN_FILENO);
      ::dup2(out_pipe[1], STDOUT_FILENO);
      ::close(in_pipe[0]);
      ::close(in_pipe[1]);
      ::close(out_pipe[0]);
      ::close(out_pipe[1]);
      ::execl("/bin/sh", "sh", "-c", exec_line.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::setpgid(pid, pid);
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    ::fcntl(in_pipe[1], F_SETFD, FD_CLOEXEC);
    ::fcntl(out_pipe[0], F_SETFD, FD_CLOEXEC);
    pid_ = pid;
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    buffer_.clear();
  }

  void Stop() {
    if (pid_ <= 0) return;
    ::close(to_child_);
    ::close(from_child_);
    int status = 0;
    bool exited = false;
    for (int i = 0; i < 50 && !exited; ++i) {
      exited = ::waitpid(pid_, &status, WNOHANG) == pid_;
      if (!exited) std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    // Descendants of the shell share its process group.
    ::kill(-pid_, SIGKILL);
    if (!exited) ::waitpid(pid_, &status, 0);
    pid_ = -1;
  }

  std::string command_;
  std::mutex mu_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

class HttpTransport : public AdapterTransport {
 public:
  HttpTransport(std::string base, std::string path)
      : base_(std::move(base)), path_(std::move(path)) {}

  std::string RoundTrip(const std::string& request,
                        std::chrono::milliseconds timeout) override {
    httplib::Client client(base_);
    const auto secs = timeout.count() / 1000;
    const auto usecs = (timeout.count() % 1000) * 1000;
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    auto res = client.Post(path_, request + "\n", "application/x-ndjson");
    if (!res) {
      throw AdapterTimeoutError("adapter " + Describe() + " unreachable: " +
                                httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw AdapterProtocolError("adapter " + Describe() + " answered HTTP " +
                                 std::to_string(res->status) + ": '" +
                                 Truncated(res->body) + "'");
    }
    std::string body = res->body;
    while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.pop_back();
    if (body.find('\n') != std::string::npos) {
      throw AdapterProtocolError("adapter answered more than one line: '" +
                                 Truncated(body) + "'");
    }
    return body;
  }

  std::string Describe() const override { return base_ + path_; }

 private:
  std::string base_;
  std::string path_;
};

RawJson ParseObject(std::string_view line) {
  RawJson doc;
  try {
    doc = RawJson::parse(line);
  } catch (const RawJson::exception&) {
    throw AdapterProtocolError("response is not JSON: '" + Truncated(line) + "'");
  }
  if (!doc.is_object()) {
    throw AdapterProtocolError("response is not an object: '" + Truncated(line) + "'");
  }
  if (doc.contains("error")) {
    throw AdapterProtocolError("adapter reported an error: " + doc["error"].dump());
  }
  return doc;
}

}  // namespace

std::unique_ptr<AdapterTransport> MakeTransport(std::string_view spec) {
  if (spec.rfind("stdio:", 0) == 0) {
    const std::string command(spec.substr(6));
    if (command.empty()) throw UsageError("stdio adapter needs a command");
    return std::make_unique<StdioTransport>(command);
  }
  if (spec.rfind("http://", 0) == 0) {
    const size_t slash = spec.find('/', 7);
    const std::string base(spec.substr(0, slash));
    const std::string path = slash == std::string_view::npos
                                 ? "/"
                                 : std::string(spec.substr(slash));
    return std::make_unique<HttpTransport>(base, path);
  }
  throw UsageError("adapter must be 'stdio:<command>' or 'http://host:port/path', got '" +
                   std::string(spec) + "'");
}

std::vector<AdapterResponse> ParseTokenLogprobsResponse(std::string_view line,
                                                        size_t expected) {
  const RawJson doc = ParseObject(line);
  auto items = doc.find("items");
  if (items == doc.end() || !items->is_array()) {
    throw AdapterProtocolError("response lacks an 'items' array: '" + Truncated(line) + "'");
  }
  if (items->size() != expected) {
    throw AdapterProtocolError("response has " + std::to_string(items->size()) +
                               " items for " + std::to_string(expected) +
                               " requests: '" + Truncated(line) + "'");
  }
  std::vector<AdapterResponse> out;
  out.reserve(expected);
  for (size_t i = 0; i < items->size(); ++i) {
    const RawJson& item = (*items)[i];
    const std::string where = "items[" + std::to_string(i) + "]";
    if (!item.is_object() || !item.contains("tokens") || !item.contains("logp") ||
        !item["tokens"].is_array() || !item["logp"].is_array()) {
      throw AdapterProtocolError(where + " needs 'tokens' and 'logp' arrays");
    }
    AdapterResponse r;
    for (const auto& t : item["tokens"]) {
      if (!t.is_string() || t.get<std::string>().empty()) {
        throw AdapterProtocolError(where + ".tokens holds a non-string or empty token");
      }
      r.tokens.push_back(t.get<std::string>());
    }
    std::vector<double> logp;
    for (size_t t = 0; t < item["logp"].size(); ++t) {
      const RawJson& v = item["logp"][t];
      const std::string field = where + ".logp[" + std::to_string(t) + "]";
      if (!v.is_number()) throw AdapterProtocolError(field + " is not a number");
      const double x = v.get<double>();
      if (!std::isfinite(x)) throw AdapterProtocolError(field + " is not finite");
      if (x > TokenLogProbs::kPositiveSlack) {
        throw AdapterProtocolError(field + " is positive (" + FormatDouble(x) + ")");
      }
      logp.push_back(x);
    }
    if (r.tokens.empty()) throw AdapterProtocolError(where + ".tokens is empty");
    if (logp.size() != r.tokens.size()) {
      throw AdapterProtocolError(where + " has " + std::to_string(r.tokens.size()) +
                                 " tokens but " + std::to_string(logp.size()) +
                                 " logp values");
    }
    r.logp = TokenLogProbs(std::move(logp));
    out.push_back(std::move(r));
  }
  return out;
}

AdapterClient::AdapterClient(std::unique_ptr<AdapterTransport> transport,
                             AdapterOptions options)
    : transport_(std::move(transport)), options_(options) {
  if (options_.batch_size == 0) options_.batch_size = 1;
  if (options_.max_in_flight == 0) options_.max_in_flight = 1;
}

std::string AdapterClient::CallWithRetry(const std::string& request) {
  std::chrono::milliseconds backoff = options_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    ++transport_calls_;
    try {
      return transport_->RoundTrip(request, options_.timeout);
    } catch (const AdapterTimeoutError&) {
      if (attempt >= options_.max_retries) throw;
    }
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

const Json& AdapterClient::Identity() {
  if (!identity_) {
    const std::string line = CallWithRetry(R"({"op":"identity"})");
    const RawJson doc = ParseObject(line);
    auto id = doc.find("identity");
    if (id == doc.end() || !id->is_object()) {
      throw AdapterProtocolError("identity response lacks an 'identity' object: '" +
                                 Truncated(line) + "'");
    }
    // Canonical form: keys sorted (nlohmann::json default ordering).
    identity_ = Json::parse(id->dump());
    identity_digest_ = "sha256:" + Sha256Hex(id->dump());
  }
  return *identity_;
}

const std::string& AdapterClient::IdentityDigest() {
  Identity();
  return identity_digest_;
}

std::string AdapterClient::CacheKey(const AdapterItem& item) {
  std::string image_digest;
  if (IsNullImage(item.image)) {
    image_digest = std::string(kNullImage);
  } else {
    std::lock_guard<std::mutex> lock(cache_mu_);
    auto it = image_digests_.find(item.image);
    if (it == image_digests_.end()) {
      it = image_digests_.emplace(item.image, FileDigest(item.image)).first;
    }
    image_digest = it->second;
  }
  return IdentityDigest() + '\x1f' + image_digest + '\x1f' + item.text;
}

std::vector<AdapterResponse> AdapterClient::TokenLogprobs(
    const std::vector<AdapterItem>& items) {
  if (items.empty()) throw InvalidInputError("adapter batch is empty");
  std::vector<std::string> keys;
  keys.reserve(items.size());
  for (const auto& item : items) {
    if (item.image.empty()) throw InvalidInputError("adapter item has an empty image");
    keys.push_back(CacheKey(item));
  }
  std::vector<std::optional<AdapterResponse>> out(items.size());
  std::vector<size_t> missing;
  {
    std::lock_guard<std::mutex> lock(cache_mu_);
    for (size_t i = 0; i < items.size(); ++i) {
      auto it = cache_.find(keys[i]);
      if (it != cache_.end()) {
        out[i] = it->second;
      } else {
        missing.push_back(i);
      }
    }
  }
  const size_t n_batches = (missing.size() + options_.batch_size - 1) / options_.batch_size;
  ParallelFor(n_batches, options_.max_in_flight, [&](size_t b) {
    const size_t begin = b * options_.batch_size;
    const size_t end = std::min(missing.size(), begin + options_.batch_size);
    Json request;
    request["op"] = "token_logprobs";
    request["items"] = Json::array();
    for (size_t j = begin; j < end; ++j) {
      Json item;
      item["image"] = items[missing[j]].image;
      item["text"] = items[missing[j]].text;
      request["items"].push_back(std::move(item));
    }
    const std::string line = CallWithRetry(DumpJson(request));
    std::vector<AdapterResponse> responses = ParseTokenLogprobsResponse(line, end - begin);
    for (size_t j = begin; j < end; ++j) out[missing[j]] = std::move(responses[j - begin]);
  });
  std::vector<AdapterResponse> result;
  result.reserve(items.size());
  std::lock_guard<std::mutex> lock(cache_mu_);
  for (size_t i = 0; i < items.size(); ++i) {
    cache_.emplace(keys[i], *out[i]);
    result.push_back(std::move(*out[i]));
  }
  return result;
}

}  // namespace massrank
