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

#ifndef BIASLENS_CLASSIFIER_AUDIT_H_
#define BIASLENS_CLASSIFIER_AUDIT_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "biaslens/lexicon.h"
#include "biaslens/scorers.h"

namespace biaslens {

// Score change from replacing a sentence's pronoun with a phrase.
struct ScoreDiff {
  // 0-based index of the sentence in the input corpus.
  std::size_t sentence_id = 0;
  DisabilityPhrase phrase;
  double original_score = 0.0;
  double perturbed_score = 0.0;
  // perturbed_score - original_score.
  double diff = 0.0;
};

struct SkippedSentence {
  std::size_t sentence_id = 0;
  std::string reason;
};

struct AuditOptions {
  std::size_t sample_size = 1000;
  std::uint64_t seed = 0;
  int max_concurrency = 1;
};

struct AuditResult {
  // Ordered by (sentence_id, lexicon order).
  std::vector<ScoreDiff> diffs;
  // Sampled sentences dropped because a score could not be obtained.
  std::vector<SkippedSentence> skipped;
  std::size_t corpus_size = 0;
  std::size_t without_pronoun = 0;
  std::size_t eligible = 0;
  std::size_t sampled = 0;
  std::vector<std::string> warnings;
};

// Samples up to options.sample_size pronoun-bearing sentences uniformly
// without replacement, perturbs each with every lexicon phrase, and scores
// originals and perturbations.
//
// Errors: FailedPrecondition when no sentence has a pronoun slot;
// Unavailable (or the first scorer error) when every sampled sentence failed
// to score.
absl::StatusOr<AuditResult> RunAudit(const std::vector<std::string>& corpus,
                                     const Lexicon& lexicon,
                                     TextScorer& scorer,
                                     const AuditOptions& options);

enum class GroupBy { kCategory, kCategoryStatus, kStatus, kPhrase };

std::string_view GroupByName(GroupBy group_by);
std::optional<GroupBy> ParseGroupBy(std::string_view token);

// Group key for `phrase`: "mobility", "mobility/recommended",
// "recommended" or the phrase text.
std::string GroupKey(const DisabilityPhrase& phrase, GroupBy group_by);

struct AuditRow {
  std::string group_key;
  double mean_diff = 0.0;
  // Sample standard deviation over sqrt(n); 0 when n == 1.
  double std_err = 0.0;
  // 1.96 * std_err.
  double ci95_half_width = 0.0;
  std::size_t n = 0;
  bool single_sample = false;
};

// One row per group, sorted by key. InvalidArgument on empty input.
absl::StatusOr<std::vector<AuditRow>> Aggregate(
    const std::vector<ScoreDiff>& diffs, GroupBy group_by);

}  // namespace biaslens

#endif  // BIASLENS_CLASSIFIER_AUDIT_H_
