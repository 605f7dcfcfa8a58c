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

#include "biaslens/classifier_audit.h"

#include <cmath>
#include <map>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "biaslens/perturber.h"
#include "biaslens/sampling.h"
#include "string_util.h"

namespace biaslens {

absl::StatusOr<AuditResult> RunAudit(const std::vector<std::string>& corpus,
                                     const Lexicon& lexicon,
                                     TextScorer& scorer,
                                     const AuditOptions& options) {
  AuditResult result;
  result.corpus_size = corpus.size();

  std::vector<std::size_t> eligible;
  std::vector<PronounSlot> slots;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (std::optional<PronounSlot> slot = FindPronounSlot(corpus[i])) {
      eligible.push_back(i);
      slots.push_back(*std::move(slot));
    } else {
      ++result.without_pronoun;
    }
  }
  result.eligible = eligible.size();
  if (eligible.empty()) {
    return absl::FailedPreconditionError(
        "corpus has no sentence containing \"he\" or \"she\"");
  }
  if (options.sample_size > eligible.size()) {
    result.warnings.push_back(absl::StrCat(
        "sample size ", options.sample_size, " exceeds the ", eligible.size(),
        " eligible sentences; auditing all of them"));
  }
  SeededRng rng(options.seed);
  const std::vector<std::size_t> picks =
      SampleWithoutReplacement(eligible.size(), options.sample_size, rng);
  result.sampled = picks.size();

  // Texts laid out per sentence: original, then one per phrase.
  const std::vector<DisabilityPhrase>& phrases = lexicon.phrases();
  const std::size_t stride = phrases.size() + 1;
  std::vector<std::string> texts;
  texts.reserve(picks.size() * stride);
  for (std::size_t pick : picks) {
    const std::string& sentence = corpus[eligible[pick]];
    texts.push_back(sentence);
    for (const DisabilityPhrase& phrase : phrases) {
      absl::StatusOr<PerturbationRecord> record =
          Perturb(sentence, slots[pick], phrase);
      if (!record.ok()) return record.status();
      texts.push_back(std::move(record->perturbed));
    }
  }
  const std::vector<absl::StatusOr<ScoreValue>> scores =
      ScoreBatch(scorer, texts, options.max_concurrency);

  absl::Status first_error;
  for (std::size_t s = 0; s < picks.size(); ++s) {
    const std::size_t sentence_id = eligible[picks[s]];
    const std::size_t base = s * stride;
    absl::Status failure;
    for (std::size_t j = 0; j < stride && failure.ok(); ++j) {
      failure = scores[base + j].status();
    }
    if (!failure.ok()) {
      if (first_error.ok()) first_error = failure;
      result.skipped.push_back({sentence_id, failure.ToString()});
      continue;
    }
    const double original = scores[base]->value;
    for (std::size_t p = 0; p < phrases.size(); ++p) {
      const double perturbed = scores[base + 1 + p]->value;
      result.diffs.push_back(
          {sentence_id, phrases[p], original, perturbed, perturbed - original});
    }
  }
  if (result.diffs.empty()) {
    return absl::Status(first_error.code(),
                        absl::StrCat("every sampled sentence failed to score: ",
                                     first_error.message()));
  }
  return result;
}

std::string_view GroupByName(GroupBy group_by) {
  switch (group_by) {
    case GroupBy::kCategory:
      return "category";
    case GroupBy::kCategoryStatus:
      return "category_status";
    case GroupBy::kStatus:
      return "status";
    case GroupBy::kPhrase:
      return "phrase";
  }
  return "";
}

std::optional<GroupBy> ParseGroupBy(std::string_view token) {
  for (GroupBy g : {GroupBy::kCategory, GroupBy::kCategoryStatus,
                    GroupBy::kStatus, GroupBy::kPhrase}) {
    if (GroupByName(g) == token) return g;
  }
  return std::nullopt;
}

std::string GroupKey(const DisabilityPhrase& phrase, GroupBy group_by) {
  switch (group_by) {
    case GroupBy::kCategory:
      return std::string(CategoryName(phrase.category));
    case GroupBy::kCategoryStatus:
      return absl::StrCat(Sv(CategoryName(phrase.category)), "/",
                          Sv(StatusName(phrase.status)));
    case GroupBy::kStatus:
      return std::string(StatusName(phrase.status));
    case GroupBy::kPhrase:
      return phrase.text;
  }
  return "";
}

absl::StatusOr<std::vector<AuditRow>> Aggregate(
    const std::vector<ScoreDiff>& diffs, GroupBy group_by) {
  if (diffs.empty()) {
    return absl::InvalidArgumentError("cannot aggregate an empty diff set");
  }
  std::map<std::string, std::vector<double>> groups;
  for (const ScoreDiff& diff : diffs) {
    groups[GroupKey(diff.phrase, group_by)].push_back(diff.diff);
  }
  std::vector<AuditRow> rows;
  rows.reserve(groups.size());
  for (const auto& [key, values] : groups) {
    AuditRow row;
    row.group_key = key;
    row.n = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    row.mean_diff = sum / static_cast<double>(row.n);
    if (row.n == 1) {
      row.single_sample = true;
    } else {
      double squares = 0.0;
      for (double v : values) squares += (v - row.mean_diff) * (v - row.mean_diff);
      const double sd = std::sqrt(squares / static_cast<double>(row.n - 1));
      row.std_err = sd / std::sqrt(static_cast<double>(row.n));
    }
    row.ci95_half_width = 1.96 * row.std_err;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace biaslens
