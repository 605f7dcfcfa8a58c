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

#include "biaslens/scorers.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "biaslens/hashing.h"
#include "string_util.h"
#include "json.hpp"

namespace biaslens {

std::string_view ScoreKindName(ScoreKind kind) {
  return kind == ScoreKind::kToxicity ? "toxicity" : "sentiment";
}

std::optional<ScoreKind> ParseScoreKind(std::string_view token) {
  const std::string lower = absl::AsciiStrToLower(Sv(token));
  if (lower == "toxicity") return ScoreKind::kToxicity;
  if (lower == "sentiment") return ScoreKind::kSentiment;
  return std::nullopt;
}

double KindMin(ScoreKind kind) {
  return kind == ScoreKind::kToxicity ? 0.0 : -1.0;
}

double KindMax(ScoreKind) { return 1.0; }

bool InKindRange(ScoreKind kind, double value) {
  return std::isfinite(value) && value >= KindMin(kind) &&
         value <= KindMax(kind);
}

absl::StatusOr<ScoreValue> ScoreText(TextScorer& scorer,
                                     std::string_view text) {
  if (text.empty()) {
    return absl::InvalidArgumentError("cannot score empty text");
  }
  absl::StatusOr<double> raw = scorer.ScoreRaw(text);
  if (!raw.ok()) return raw.status();
  if (!InKindRange(scorer.kind(), *raw)) {
    return absl::DataLossError(absl::StrCat(
        scorer.Identity(), ": ", Sv(ScoreKindName(scorer.kind())), " score ", *raw,
        " outside [", KindMin(scorer.kind()), ", ", KindMax(scorer.kind()),
        "]"));
  }
  return ScoreValue{*raw, scorer.kind()};
}

std::vector<absl::StatusOr<ScoreValue>> ScoreBatch(
    TextScorer& scorer, const std::vector<std::string>& texts,
    int max_concurrency) {
  std::vector<absl::StatusOr<ScoreValue>> results(
      texts.size(), absl::UnknownError("not scored"));
  const std::size_t workers = std::min<std::size_t>(
      std::max(1, max_concurrency), std::max<std::size_t>(1, texts.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < texts.size(); ++i) {
      results[i] = ScoreText(scorer, texts[i]);
    }
    return results;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < texts.size(); i = next++) {
          results[i] = ScoreText(scorer, texts[i]);
        }
      });
    }
  }
  return results;
}

std::vector<std::string> AlphanumericTokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (absl::ascii_isalnum(static_cast<unsigned char>(c))) {
      current.push_back(absl::ascii_tolower(static_cast<unsigned char>(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

absl::StatusOr<std::unique_ptr<MockScorer>> MockScorer::Create(
    std::map<std::string, double> valences, ScoreKind kind) {
  for (const auto& [token, valence] : valences) {
    if (!InKindRange(kind, valence)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "valence for \"", token, "\" (", valence, ") outside the ",
          Sv(ScoreKindName(kind)), " range"));
    }
  }
  return std::unique_ptr<MockScorer>(new MockScorer(std::move(valences), kind));
}

std::string MockScorer::Identity() const {
  nlohmann::json table(valences_);
  return absl::StrCat("mock:", Sv(ScoreKindName(kind_)), ":",
                      Sha256Hex(table.dump()).substr(0, 16));
}

absl::StatusOr<double> MockScorer::ScoreRaw(std::string_view text) {
  double sum = 0.0;
  int hits = 0;
  for (const std::string& token : AlphanumericTokens(text)) {
    const auto it = valences_.find(token);
    if (it == valences_.end()) continue;
    sum += it->second;
    ++hits;
  }
  if (hits == 0) return 0.0;
  return std::clamp(sum / hits, KindMin(kind_), KindMax(kind_));
}

absl::StatusOr<std::map<std::string, double>> ParseValenceTable(
    std::string_view json_text) {
  nlohmann::json parsed =
      nlohmann::json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    return absl::InvalidArgumentError(
        "valence table must be a JSON object of token -> number");
  }
  std::map<std::string, double> table;
  for (const auto& [token, value] : parsed.items()) {
    if (!value.is_number()) {
      return absl::InvalidArgumentError(
          absl::StrCat("valence for \"", token, "\" is not a number"));
    }
    table[absl::AsciiStrToLower(token)] = value.get<double>();
  }
  return table;
}

absl::StatusOr<std::unique_ptr<HttpScorer>> HttpScorer::Create(
    HttpClientOptions options, ScoreKind kind) {
  absl::StatusOr<std::unique_ptr<JsonHttpClient>> client =
      JsonHttpClient::Create(std::move(options));
  if (!client.ok()) return client.status();
  return std::unique_ptr<HttpScorer>(new HttpScorer(std::move(*client), kind));
}

absl::StatusOr<double> HttpScorer::ScoreRaw(std::string_view text) {
  absl::StatusOr<nlohmann::json> response =
      client_->Post({{"text", std::string(text)}});
  if (!response.ok()) return response.status();
  if (!response->is_object() || !response->contains("score") ||
      !(*response)["score"].is_number()) {
    return absl::DataLossError(absl::StrCat(
        client_->endpoint(), ": response lacks a numeric \"score\" field"));
  }
  return (*response)["score"].get<double>();
}

std::string ScoreCache::Key(std::string_view identity, ScoreKind kind,
                            std::string_view text) {
  // Length-prefixed fields so no two (identity, kind, text) triples collide.
  return Sha256Hex(absl::StrCat(identity.size(), ":", Sv(identity), "|",
                                Sv(ScoreKindName(kind)), "|", text.size(), ":",
                                Sv(text)));
}

std::filesystem::path ScoreCache::PathFor(const std::string& key) const {
  return root_ / key.substr(0, 2) / key.substr(2, 2) / (key + ".json");
}

std::optional<double> ScoreCache::Lookup(const std::string& key) const {
  std::ifstream in(PathFor(key), std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json entry =
      nlohmann::json::parse(buffer.str(), nullptr, /*allow_exceptions=*/false);
  if (entry.is_discarded() || !entry.is_object() || !entry.contains("score") ||
      !entry["score"].is_number()) {
    return std::nullopt;
  }
  return entry["score"].get<double>();
}

absl::Status ScoreCache::Store(const std::string& key, double value) const {
  const std::filesystem::path target = PathFor(key);
  std::error_code ec;
  std::filesystem::create_directories(target.parent_path(), ec);
  if (ec) {
    return absl::InternalError(absl::StrCat(
        "cannot create cache directory ", target.parent_path().string(), ": ",
        ec.message()));
  }
  thread_local std::mt19937_64 suffix_rng{std::random_device{}()};
  std::filesystem::path temp = target;
  temp += absl::StrCat(".tmp", suffix_rng());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out << nlohmann::json{{"score", value}}.dump() << "\n";
    if (!out) {
      return absl::InternalError(
          absl::StrCat("cannot write cache entry ", temp.string()));
    }
  }
  std::filesystem::rename(temp, target, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    return absl::InternalError(
        absl::StrCat("cannot publish cache entry ", target.string()));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> CachingScorer::ScoreRaw(std::string_view text) {
  const std::string key = ScoreCache::Key(Identity(), kind(), text);
  if (std::optional<double> hit = cache_.Lookup(key)) return *hit;
  absl::StatusOr<double> value = inner_->ScoreRaw(text);
  if (!value.ok()) return value.status();
  // Only in-range values are cached; ScoreText reports the rest.
  if (InKindRange(kind(), *value)) {
    absl::Status stored = cache_.Store(key, *value);
    if (!stored.ok()) return stored;
  }
  return value;
}

absl::StatusOr<std::shared_ptr<TextScorer>> MakeScorer(
    const ScorerConfig& config) {
  HttpClientOptions options;
  options.endpoint = config.endpoint;
  options.timeout = config.timeout;
  options.max_retries = config.max_retries;
  options.max_concurrency = config.max_concurrency;
  options.bearer_token = config.bearer_token;
  absl::StatusOr<std::unique_ptr<HttpScorer>> http =
      HttpScorer::Create(std::move(options), config.kind);
  if (!http.ok()) return http.status();
  std::shared_ptr<TextScorer> scorer = std::move(*http);
  if (!config.cache_dir.empty()) {
    scorer = std::make_shared<CachingScorer>(std::move(scorer),
                                             ScoreCache(config.cache_dir));
  }
  return scorer;
}

std::filesystem::path ResolveCacheDir(const std::filesystem::path& configured,
                                      const char* env_value) {
  if (env_value != nullptr && *env_value != '\0') return env_value;
  return configured;
}

absl::StatusOr<std::vector<Candidate>> MockMaskedLm::Predict(
    std::string_view masked_query, int k) {
  const auto it = table_.find(std::string(masked_query));
  const std::vector<std::string>& tokens =
      it != table_.end() ? it->second : fallback_;
  std::vector<Candidate> out;
  const std::size_t n = std::min<std::size_t>(tokens.size(), std::max(k, 0));
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({tokens[i], 1.0 / static_cast<double>(i + 2)});
  }
  return out;
}

absl::StatusOr<std::unique_ptr<MockMaskedLm>> ParseMockMaskedLm(
    std::string_view json_text) {
  nlohmann::json parsed =
      nlohmann::json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    return absl::InvalidArgumentError(
        "mock MLM table must be a JSON object of query -> [tokens]");
  }
  std::map<std::string, std::vector<std::string>> table;
  std::vector<std::string> fallback;
  for (const auto& [query, tokens] : parsed.items()) {
    if (!tokens.is_array()) {
      return absl::InvalidArgumentError(
          absl::StrCat("entry \"", query, "\" must be an array of strings"));
    }
    std::vector<std::string> list;
    for (const nlohmann::json& token : tokens) {
      if (!token.is_string()) {
        return absl::InvalidArgumentError(
            absl::StrCat("entry \"", query, "\" must be an array of strings"));
      }
      list.push_back(token.get<std::string>());
    }
    if (query == "*") {
      fallback = std::move(list);
    } else {
      table[query] = std::move(list);
    }
  }
  return std::make_unique<MockMaskedLm>(std::move(table), std::move(fallback));
}

absl::StatusOr<std::unique_ptr<HttpMaskedLm>> HttpMaskedLm::Create(
    HttpClientOptions options, std::string mask_token) {
  if (mask_token.empty()) {
    return absl::InvalidArgumentError("mask token must be non-empty");
  }
  absl::StatusOr<std::unique_ptr<JsonHttpClient>> client =
      JsonHttpClient::Create(std::move(options));
  if (!client.ok()) return client.status();
  return std::unique_ptr<HttpMaskedLm>(
      new HttpMaskedLm(std::move(*client), std::move(mask_token)));
}

absl::StatusOr<std::vector<Candidate>> HttpMaskedLm::Predict(
    std::string_view masked_query, int k) {
  absl::StatusOr<nlohmann::json> response =
      client_->Post({{"query", std::string(masked_query)}, {"k", k}});
  if (!response.ok()) return response.status();
  if (!response->is_object() || !response->contains("completions") ||
      !(*response)["completions"].is_array()) {
    return absl::DataLossError(absl::StrCat(
        client_->endpoint(), ": response lacks a \"completions\" array"));
  }
  std::vector<Candidate> out;
  for (const nlohmann::json& entry : (*response)["completions"]) {
    if (!entry.is_object() || !entry.contains("token") ||
        !entry["token"].is_string() || !entry.contains("probability") ||
        !entry["probability"].is_number()) {
      return absl::DataLossError(absl::StrCat(
          client_->endpoint(),
          ": completion entries need string \"token\" and numeric "
          "\"probability\""));
    }
    out.push_back(
        {entry["token"].get<std::string>(), entry["probability"].get<double>()});
  }
  return out;
}

bool IsWordToken(std::string_view token) {
  if (token.empty() ||
      !absl::ascii_isalpha(static_cast<unsigned char>(token[0]))) {
    return false;
  }
  return std::all_of(token.begin() + 1, token.end(), [](char c) {
    return absl::ascii_isalpha(static_cast<unsigned char>(c)) || c == '\'' ||
           c == '-';
  });
}

absl::StatusOr<std::vector<RankedCompletion>> FillBlank(
    MaskedLm& backend, const ProbeQuery& query, int k,
    std::string_view blank_marker) {
  if (k < 1) return absl::InvalidArgumentError("k must be >= 1");
  const std::string& text = query.query_text;
  const std::size_t pos = text.find(blank_marker);
  if (blank_marker.empty() || pos == std::string::npos ||
      text.find(blank_marker, pos + blank_marker.size()) != std::string::npos) {
    return absl::InvalidArgumentError(absl::StrCat(
        "query must contain exactly one \"", Sv(blank_marker), "\": \"", text,
        "\""));
  }
  const std::string masked =
      absl::StrCat(text.substr(0, pos), Sv(backend.mask_token()),
                   text.substr(pos + blank_marker.size()));
  absl::StatusOr<std::vector<Candidate>> candidates =
      backend.Predict(masked, k * kCandidateOverfetch);
  if (!candidates.ok()) return candidates.status();
  if (candidates->empty()) {
    return absl::FailedPreconditionError(absl::StrCat(
        backend.Identity(), ": no candidates for \"", masked, "\""));
  }
  std::vector<Candidate> words;
  for (Candidate& candidate : *candidates) {
    if (!std::isfinite(candidate.probability) || candidate.probability < 0.0 ||
        candidate.probability > 1.0) {
      return absl::DataLossError(absl::StrCat(
          backend.Identity(), ": probability ", candidate.probability,
          " for \"", candidate.token, "\" outside [0, 1]"));
    }
    if (IsWordToken(candidate.token)) words.push_back(std::move(candidate));
  }
  std::stable_sort(words.begin(), words.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.probability > b.probability;
                   });
  if (words.size() > static_cast<std::size_t>(k)) words.resize(k);
  std::vector<RankedCompletion> out;
  out.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    out.push_back({std::move(words[i].token), words[i].probability,
                   static_cast<int>(i + 1)});
  }
  return out;
}

}  // namespace biaslens
