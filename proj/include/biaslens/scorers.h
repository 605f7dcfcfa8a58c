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

#ifndef BIASLENS_SCORERS_H_
#define BIASLENS_SCORERS_H_

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "biaslens/http_client.h"
#include "biaslens/perturber.h"

namespace biaslens {

enum class ScoreKind { kToxicity, kSentiment };

std::string_view ScoreKindName(ScoreKind kind);
std::optional<ScoreKind> ParseScoreKind(std::string_view token);

// Toxicity lies in [0, 1]; sentiment in [-1, +1].
double KindMin(ScoreKind kind);
double KindMax(ScoreKind kind);
bool InKindRange(ScoreKind kind, double value);

struct ScoreValue {
  double value = 0.0;
  ScoreKind kind = ScoreKind::kToxicity;
};

// A text-scoring backend. Implementations must be safe to call from several
// threads at once.
class TextScorer {
 public:
  virtual ~TextScorer() = default;

  virtual ScoreKind kind() const = 0;

  // Stable identity used in cache keys and report provenance: the endpoint
  // URL for remote scorers.
  virtual std::string Identity() const = 0;

  // Raw backend value; callers should go through ScoreText for the
  // precondition and range checks.
  virtual absl::StatusOr<double> ScoreRaw(std::string_view text) = 0;
};

// Scores `text`, rejecting empty input (InvalidArgument) and backend values
// outside the kind's range (DataLoss).
absl::StatusOr<ScoreValue> ScoreText(TextScorer& scorer,
                                     std::string_view text);

// Scores every text with at most `max_concurrency` calls in flight. Result i
// belongs to texts[i] regardless of completion order.
std::vector<absl::StatusOr<ScoreValue>> ScoreBatch(
    TextScorer& scorer, const std::vector<std::string>& texts,
    int max_concurrency);

// Lowercase runs of ASCII letters and digits.
std::vector<std::string> AlphanumericTokens(std::string_view text);

// Deterministic scorer: mean valence over the text's tokens that appear in
// `valences`, 0 when none do, clamped to the kind's range.
class MockScorer : public TextScorer {
 public:
  // Fails with InvalidArgument if any valence lies outside the kind's range.
  static absl::StatusOr<std::unique_ptr<MockScorer>> Create(
      std::map<std::string, double> valences, ScoreKind kind);

  ScoreKind kind() const override { return kind_; }
  std::string Identity() const override;
  absl::StatusOr<double> ScoreRaw(std::string_view text) override;

 private:
  MockScorer(std::map<std::string, double> valences, ScoreKind kind)
      : valences_(std::move(valences)), kind_(kind) {}

  std::map<std::string, double> valences_;
  ScoreKind kind_;
};

// Parses a JSON object of token -> valence.
absl::StatusOr<std::map<std::string, double>> ParseValenceTable(
    std::string_view json_text);

// Wire protocol: POST {"text": ...} -> {"score": <number>}.
class HttpScorer : public TextScorer {
 public:
  static absl::StatusOr<std::unique_ptr<HttpScorer>> Create(
      HttpClientOptions options, ScoreKind kind);

  ScoreKind kind() const override { return kind_; }
  std::string Identity() const override { return client_->endpoint(); }
  absl::StatusOr<double> ScoreRaw(std::string_view text) override;

 private:
  HttpScorer(std::unique_ptr<JsonHttpClient> client, ScoreKind kind)
      : client_(std::move(client)), kind_(kind) {}

  std::unique_ptr<JsonHttpClient> client_;
  ScoreKind kind_;
};

// On-disk score cache. Entries are JSON files under
// <root>/<hh>/<hh>/<sha256>.json, written to a temporary name and renamed
// into place so concurrent readers never observe partial files.
class ScoreCache {
 public:
  explicit ScoreCache(std::filesystem::path root) : root_(std::move(root)) {}

  // SHA-256 over the scorer identity, kind and text.
  static std::string Key(std::string_view identity, ScoreKind kind,
                         std::string_view text);

  std::optional<double> Lookup(const std::string& key) const;
  absl::Status Store(const std::string& key, double value) const;

  std::filesystem::path PathFor(const std::string& key) const;
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
};

// Serves repeated texts from a ScoreCache; misses go to the inner scorer.
class CachingScorer : public TextScorer {
 public:
  CachingScorer(std::shared_ptr<TextScorer> inner, ScoreCache cache)
      : inner_(std::move(inner)), cache_(std::move(cache)) {}

  ScoreKind kind() const override { return inner_->kind(); }
  std::string Identity() const override { return inner_->Identity(); }
  absl::StatusOr<double> ScoreRaw(std::string_view text) override;

 private:
  std::shared_ptr<TextScorer> inner_;
  ScoreCache cache_;
};

struct ScorerConfig {
  std::string endpoint;
  ScoreKind kind = ScoreKind::kToxicity;
  std::chrono::milliseconds timeout{10000};
  int max_retries = 3;
  int max_concurrency = 4;
  // Empty disables caching.
  std::filesystem::path cache_dir;
  std::string bearer_token;
};

// Remote scorer for `config`, wrapped in a CachingScorer when cache_dir is
// set.
absl::StatusOr<std::shared_ptr<TextScorer>> MakeScorer(
    const ScorerConfig& config);

// BIASLENS_CACHE_DIR when set (non-null, non-empty), else `configured`.
std::filesystem::path ResolveCacheDir(const std::filesystem::path& configured,
                                      const char* env_value);

// ---------------------------------------------------------------------------
// Masked language models.

struct RankedCompletion {
  std::string token;
  double probability = 0.0;
  int rank = 0;
};

struct Candidate {
  std::string token;
  double probability = 0.0;
};

class MaskedLm {
 public:
  virtual ~MaskedLm() = default;

  virtual std::string Identity() const = 0;

  // Token that replaces the blank marker before the query is sent.
  virtual std::string_view mask_token() const = 0;

  // Up to `k` candidates for the single mask token in `masked_query`.
  virtual absl::StatusOr<std::vector<Candidate>> Predict(
      std::string_view masked_query, int k) = 0;
};

// Table-driven masked LM keyed by the masked query text. Probabilities
// decrease with list position. Unknown queries get `fallback`, which may be
// empty.
class MockMaskedLm : public MaskedLm {
 public:
  explicit MockMaskedLm(std::map<std::string, std::vector<std::string>> table,
                        std::vector<std::string> fallback = {},
                        std::string mask_token = std::string(kDefaultBlankMarker))
      : table_(std::move(table)),
        fallback_(std::move(fallback)),
        mask_token_(std::move(mask_token)) {}

  std::string Identity() const override { return "mock-mlm"; }
  std::string_view mask_token() const override { return mask_token_; }
  absl::StatusOr<std::vector<Candidate>> Predict(std::string_view masked_query,
                                                 int k) override;

 private:
  std::map<std::string, std::vector<std::string>> table_;
  std::vector<std::string> fallback_;
  std::string mask_token_;
};

// Parses {"<query>": ["tok", ...], ..., "*": [...]} where "*" is the
// fallback list.
absl::StatusOr<std::unique_ptr<MockMaskedLm>> ParseMockMaskedLm(
    std::string_view json_text);

// Wire protocol: POST {"query": "... [MASK] ...", "k": <int>} ->
// {"completions": [{"token": ..., "probability": ...}, ...]}.
class HttpMaskedLm : public MaskedLm {
 public:
  static absl::StatusOr<std::unique_ptr<HttpMaskedLm>> Create(
      HttpClientOptions options, std::string mask_token = "[MASK]");

  std::string Identity() const override { return client_->endpoint(); }
  std::string_view mask_token() const override { return mask_token_; }
  absl::StatusOr<std::vector<Candidate>> Predict(std::string_view masked_query,
                                                 int k) override;

 private:
  HttpMaskedLm(std::unique_ptr<JsonHttpClient> client, std::string mask_token)
      : client_(std::move(client)), mask_token_(std::move(mask_token)) {}

  std::unique_ptr<JsonHttpClient> client_;
  std::string mask_token_;
};

// True for whole words: ^[A-Za-z][A-Za-z'-]*$.
bool IsWordToken(std::string_view token);

// The backend is asked for this many candidates per requested completion so
// that filtering out subword pieces still leaves k words.
inline constexpr int kCandidateOverfetch = 2;

// Fills the single blank in `query`. Candidates failing IsWordToken are
// dropped before ranking and truncation to k.
//
// Errors: InvalidArgument when k < 1 or the query does not contain exactly
// one blank marker; FailedPrecondition when the backend returns no
// candidates; DataLoss when a candidate probability is outside [0, 1].
absl::StatusOr<std::vector<RankedCompletion>> FillBlank(
    MaskedLm& backend, const ProbeQuery& query, int k,
    std::string_view blank_marker = kDefaultBlankMarker);

}  // namespace biaslens

#endif  // BIASLENS_SCORERS_H_
