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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "biaslens/http_client.h"

#include <algorithm>
#include <thread>

#include "absl/status/status.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "httplib.h"

namespace biaslens {

void RequestGate::Acquire() {
  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait(lock, [this] { return available_ > 0; });
  --available_;
}

void RequestGate::Release() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    ++available_;
  }
  cv_.notify_one();
}

absl::StatusOr<std::unique_ptr<JsonHttpClient>> JsonHttpClient::Create(
    HttpClientOptions options) {
  if (options.max_concurrency < 1) {
    return absl::InvalidArgumentError("max_concurrency must be >= 1");
  }
  if (options.timeout.count() <= 0) {
    return absl::InvalidArgumentError("timeout must be positive");
  }
  if (options.max_retries < 0) {
    return absl::InvalidArgumentError("max_retries must be >= 0");
  }
  const std::string& url = options.endpoint;
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos ||
      !(absl::StartsWith(url, "http://") || absl::StartsWith(url, "https://"))) {
    return absl::InvalidArgumentError(
        absl::StrCat("endpoint must be an http(s) URL: \"", url, "\""));
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  std::string origin = url.substr(0, path_start);
  std::string path =
      path_start == std::string::npos ? "/" : url.substr(path_start);
  if (origin.size() <= scheme_end + 3) {
    return absl::InvalidArgumentError(
        absl::StrCat("endpoint has no host: \"", url, "\""));
  }
  return std::unique_ptr<JsonHttpClient>(new JsonHttpClient(
      std::move(options), std::move(origin), std::move(path)));
}

absl::StatusOr<nlohmann::json> JsonHttpClient::Post(
    const nlohmann::json& body) {
  const std::string payload = body.dump();
  std::chrono::milliseconds backoff = options_.initial_backoff;
  std::string last_error;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    gate_.Acquire();
    httplib::Result result = [&] {
      httplib::Client client(origin_);
      const auto seconds =
          std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
      const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
          options_.timeout - seconds);
      client.set_connection_timeout(seconds.count(), micros.count());
      client.set_read_timeout(seconds.count(), micros.count());
      client.set_write_timeout(seconds.count(), micros.count());
      httplib::Headers headers;
      if (!options_.bearer_token.empty()) {
        headers.emplace("Authorization",
                        absl::StrCat("Bearer ", options_.bearer_token));
      }
      return client.Post(path_, headers, payload, "application/json");
    }();
    gate_.Release();

    if (!result) {
      last_error = httplib::to_string(result.error());
      continue;
    }
    const int status = result->status;
    if (status == 429 || status >= 500) {
      last_error = absl::StrCat("HTTP ", status);
      if (status == 429 && result->has_header("Retry-After")) {
        int seconds = 0;
        if (absl::SimpleAtoi(result->get_header_value("Retry-After"),
                             &seconds) &&
            seconds > 0) {
          backoff = std::max<std::chrono::milliseconds>(
              backoff, std::chrono::seconds(std::min(seconds, 60)));
        }
      }
      continue;
    }
    if (status < 200 || status >= 300) {
      return absl::DataLossError(absl::StrCat(
          options_.endpoint, ": HTTP ", status, ": ", result->body));
    }
    nlohmann::json parsed =
        nlohmann::json::parse(result->body, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded()) {
      return absl::DataLossError(
          absl::StrCat(options_.endpoint, ": response is not valid JSON"));
    }
    return parsed;
  }
  return absl::UnavailableError(absl::StrCat(options_.endpoint, ": ",
                                             last_error, " after ",
                                             options_.max_retries + 1,
                                             " attempts"));
}

}  // namespace biaslens
