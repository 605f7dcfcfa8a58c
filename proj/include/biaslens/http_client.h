//
// Copyright 2026 The BiasLens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef BIASLENS_HTTP_CLIENT_H_
#define BIASLENS_HTTP_CLIENT_H_

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>

#include "absl/status/statusor.h"
#include "json.hpp"

namespace biaslens {

struct HttpClientOptions {
  // Full URL, e.g. "http://localhost:8080/score".
  std::string endpoint;
  std::chrono::milliseconds timeout{10000};
  int max_retries = 3;
  int max_concurrency = 4;
  // Sent as "Authorization: Bearer <token>" when non-empty.
  std::string bearer_token;
  std::chrono::milliseconds initial_backoff{200};
};

// Counting semaphore bounding in-flight requests.
class RequestGate {
 public:
  explicit RequestGate(int capacity) : available_(capacity) {}
  void Acquire();
  void Release();

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int available_;
};

// POSTs JSON bodies to one endpoint with retry, exponential backoff and a
// per-client concurrency bound. Safe to call from multiple threads.
//
// Transport failures (connection errors, timeouts, 5xx and 429 after the
// final retry) surface as Unavailable. Responses that are not valid JSON, or
// other 4xx statuses, surface as DataLoss (protocol error) without retrying.
class JsonHttpClient {
 public:
  static absl::StatusOr<std::unique_ptr<JsonHttpClient>> Create(
      HttpClientOptions options);

  absl::StatusOr<nlohmann::json> Post(const nlohmann::json& body);

  const std::string& endpoint() const { return options_.endpoint; }

 private:
  JsonHttpClient(HttpClientOptions options, std::string origin,
                 std::string path)
      : options_(std::move(options)),
        origin_(std::move(origin)),
        path_(std::move(path)),
        gate_(options_.max_concurrency) {}

  HttpClientOptions options_;
  std::string origin_;
  std::string path_;
  RequestGate gate_;
};

}  // namespace biaslens

#endif  // BIASLENS_HTTP_CLIENT_H_
