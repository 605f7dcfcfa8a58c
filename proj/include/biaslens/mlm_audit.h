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

#ifndef BIASLENS_MLM_AUDIT_H_
#define BIASLENS_MLM_AUDIT_H_

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "biaslens/lexicon.h"
#include "biaslens/perturber.h"
#include "biaslens/scorers.h"

namespace biaslens {

// Completions are scored inside this fixed, neutral sentence so that only
// the predicted word, not the probing phrase, drives the sentiment.
std::string CarrierSentence(std::string_view word);

struct ProbeRecord {
  ProbeQuery query;
  RankedCompletion completion;
  std::string carrier_sentence;
  ScoreValue valency;
  bool is_negative = false;
  bool excluded_by_baseline = false;
};

struct CategoryNegativeRate {
  Category category = Category::kUnspecified;
  // Negative non-excluded completions over all non-excluded completions.
  double negative_fraction = 0.0;
  std::size_t n_completions = 0;
};

struct ProbeOptions {
  std::vector<std::string> subjects = DefaultSubjects();
  int k = 10;
  // A completion is negative when its carrier valency is below this.
  double negative_threshold = 0.0;
  // Phrases probed; std::nullopt probes every status.
  std::optional<PhraseStatus> status = PhraseStatus::kRecommended;
  // Count each distinct word once per category instead of per occurrence.
  bool unique_words = false;
  std::string blank_marker = std::string(kDefaultBlankMarker);
  int max_concurrency = 1;
  // Baseline exclusion set; computed from the bare subjects when absent.
  std::optional<std::set<std::string>> exclusion;
};

struct SkippedQuery {
  std::string query_text;
  std::string reason;
};

struct ProbeResult {
  // Sorted by (category, phrase, subject, rank).
  std::vector<ProbeRecord> records;
  // Sorted by category name; categories with no counted completion omitted.
  std::vector<CategoryNegativeRate> rates;
  std::set<std::string> exclusion;
  std::vector<SkippedQuery> skipped;
  std::size_t queries = 0;
};

// Words predicted for queries built from the bare subjects ("A person is
// <BLANK>.", "My child is <BLANK>.", ...) whose carrier valency is negative.
// Words are lowercased.
absl::StatusOr<std::set<std::string>> BaselineExclusionSet(
    MaskedLm& backend, const std::vector<std::string>& subjects, int k,
    TextScorer& sentiment, double negative_threshold = 0.0,
    std::string_view blank_marker = kDefaultBlankMarker,
    int max_concurrency = 1);

// Probes `backend` with every (phrase, subject variant) query and rates the
// share of negative completions per category. Failed queries are recorded in
// `skipped`; the call fails only when no query succeeds.
absl::StatusOr<ProbeResult> RunProbe(MaskedLm& backend, const Lexicon& lexicon,
                                     TextScorer& sentiment,
                                     const ProbeOptions& options);

// Per-category rates from `records`, honouring exclusion flags.
std::vector<CategoryNegativeRate> NegativeRates(
    const std::vector<ProbeRecord>& records, bool unique_words);

struct NegativeWord {
  std::string word;
  std::size_t count = 0;
  // count / all negative non-excluded completions.
  double frequency = 0.0;
  double valency = 0.0;
};

// Negative, non-excluded completion words by descending frequency, ties by
// word.
std::vector<NegativeWord> NegativeWordTable(
    const std::vector<ProbeRecord>& records);

}  // namespace biaslens

#endif  // BIASLENS_MLM_AUDIT_H_
