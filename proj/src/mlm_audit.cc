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

#include "biaslens/mlm_audit.h"
#include "string_util.h"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>
#include <tuple>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"

namespace biaslens {
namespace {

using Completions = absl::StatusOr<std::vector<RankedCompletion>>;

std::vector<Completions> FillAll(MaskedLm& backend,
                                 const std::vector<ProbeQuery>& queries, int k,
                                 std::string_view blank_marker,
                                 int max_concurrency) {
  std::vector<Completions> out(queries.size(),
                               absl::UnknownError("not queried"));
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < queries.size(); i = next++) {
      out[i] = FillBlank(backend, queries[i], k, blank_marker);
    }
  };
  const std::size_t workers = std::min<std::size_t>(
      std::max(1, max_concurrency), std::max<std::size_t>(1, queries.size()));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return out;
}

// Carrier valency for every distinct word, scored once each.
std::map<std::string, absl::StatusOr<ScoreValue>> ScoreWords(
    const std::vector<Completions>& completions, TextScorer& sentiment,
    int max_concurrency) {
  std::set<std::string> words;
  for (const Completions& list : completions) {
    if (!list.ok()) continue;
    for (const RankedCompletion& c : *list) words.insert(c.token);
  }
  std::vector<std::string> ordered(words.begin(), words.end());
  std::vector<std::string> carriers;
  carriers.reserve(ordered.size());
  for (const std::string& word : ordered) {
    carriers.push_back(CarrierSentence(word));
  }
  std::vector<absl::StatusOr<ScoreValue>> scores =
      ScoreBatch(sentiment, carriers, max_concurrency);
  std::map<std::string, absl::StatusOr<ScoreValue>> out;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    out.emplace(ordered[i], std::move(scores[i]));
  }
  return out;
}

}  // namespace

std::string CarrierSentence(std::string_view word) {
  return absl::StrCat("A person is ", Sv(word), ".");
}

absl::StatusOr<std::set<std::string>> BaselineExclusionSet(
    MaskedLm& backend, const std::vector<std::string>& subjects, int k,
    TextScorer& sentiment, double negative_threshold,
    std::string_view blank_marker, int max_concurrency) {
  if (subjects.empty()) {
    return absl::InvalidArgumentError("subject list must be non-empty");
  }
  std::vector<ProbeQuery> queries;
  for (const std::string& subject : subjects) {
    absl::StatusOr<ProbeQuery> query = MakeProbeQuery(subject, blank_marker);
    if (!query.ok()) return query.status();
    query->subject_variant = subject;
    queries.push_back(*std::move(query));
  }
  const std::vector<Completions> completions =
      FillAll(backend, queries, k, blank_marker, max_concurrency);
  for (const Completions& list : completions) {
    if (!list.ok()) return list.status();
  }
  const auto valencies = ScoreWords(completions, sentiment, max_concurrency);
  std::set<std::string> excluded;
  for (const auto& [word, valency] : valencies) {
    if (!valency.ok()) return valency.status();
    if (valency->value < negative_threshold) {
      excluded.insert(absl::AsciiStrToLower(word));
    }
  }
  return excluded;
}

absl::StatusOr<ProbeResult> RunProbe(MaskedLm& backend, const Lexicon& lexicon,
                                     TextScorer& sentiment,
                                     const ProbeOptions& options) {
  if (options.k < 1) return absl::InvalidArgumentError("k must be >= 1");
  if (options.subjects.empty()) {
    return absl::InvalidArgumentError("subject list must be non-empty");
  }
  ProbeResult result;
  if (options.exclusion) {
    for (const std::string& word : *options.exclusion) {
      result.exclusion.insert(absl::AsciiStrToLower(word));
    }
  } else {
    absl::StatusOr<std::set<std::string>> baseline = BaselineExclusionSet(
        backend, options.subjects, options.k, sentiment,
        options.negative_threshold, options.blank_marker,
        options.max_concurrency);
    if (!baseline.ok()) return baseline.status();
    result.exclusion = *std::move(baseline);
  }

  std::vector<ProbeQuery> queries;
  for (const DisabilityPhrase& phrase :
       PhrasesBy(lexicon, std::nullopt, options.status)) {
    std::set<std::string> seen;
    for (const std::string& subject : options.subjects) {
      absl::StatusOr<std::vector<std::string>> variants =
          SubjectVariants(phrase, {subject});
      if (!variants.ok()) return variants.status();
      const std::string& variant = variants->front();
      if (!seen.insert(variant).second) continue;
      absl::StatusOr<ProbeQuery> query =
          MakeProbeQuery(variant, options.blank_marker);
      if (!query.ok()) return query.status();
      query->subject_variant = subject;
      query->category = phrase.category;
      query->phrase = phrase.text;
      queries.push_back(*std::move(query));
    }
  }
  result.queries = queries.size();
  if (queries.empty()) {
    return absl::FailedPreconditionError("no phrases selected for probing");
  }

  const std::vector<Completions> completions = FillAll(
      backend, queries, options.k, options.blank_marker,
      options.max_concurrency);
  const auto valencies =
      ScoreWords(completions, sentiment, options.max_concurrency);

  absl::Status first_error;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    absl::Status failure = completions[q].status();
    if (failure.ok()) {
      for (const RankedCompletion& c : *completions[q]) {
        failure = valencies.at(c.token).status();
        if (!failure.ok()) break;
      }
    }
    if (!failure.ok()) {
      if (first_error.ok()) first_error = failure;
      result.skipped.push_back({queries[q].query_text, failure.ToString()});
      continue;
    }
    for (const RankedCompletion& c : *completions[q]) {
      ProbeRecord record;
      record.query = queries[q];
      record.completion = c;
      record.carrier_sentence = CarrierSentence(c.token);
      record.valency = *valencies.at(c.token);
      record.is_negative = record.valency.value < options.negative_threshold;
      record.excluded_by_baseline =
          result.exclusion.count(absl::AsciiStrToLower(c.token)) > 0;
      result.records.push_back(std::move(record));
    }
  }
  if (result.skipped.size() == queries.size()) {
    return absl::Status(first_error.code(),
                        absl::StrCat("every probe query failed: ",
                                     first_error.message()));
  }

  std::stable_sort(
      result.records.begin(), result.records.end(),
      [](const ProbeRecord& a, const ProbeRecord& b) {
        return std::make_tuple(CategoryName(*a.query.category),
                               std::string_view(a.query.phrase),
                               std::string_view(a.query.subject_variant),
                               a.completion.rank) <
               std::make_tuple(CategoryName(*b.query.category),
                               std::string_view(b.query.phrase),
                               std::string_view(b.query.subject_variant),
                               b.completion.rank);
      });
  result.rates = NegativeRates(result.records, options.unique_words);
  return result;
}

std::vector<CategoryNegativeRate> NegativeRates(
    const std::vector<ProbeRecord>& records, bool unique_words) {
  struct Tally {
    std::size_t total = 0;
    std::size_t negative = 0;
    std::set<std::string> words;
    std::set<std::string> negative_words;
  };
  std::map<std::string_view, std::pair<Category, Tally>> tallies;
  for (const ProbeRecord& record : records) {
    if (record.excluded_by_baseline || !record.query.category) continue;
    auto& [category, tally] = tallies[CategoryName(*record.query.category)];
    category = *record.query.category;
    ++tally.total;
    tally.words.insert(record.completion.token);
    if (record.is_negative) {
      ++tally.negative;
      tally.negative_words.insert(record.completion.token);
    }
  }
  std::vector<CategoryNegativeRate> rates;
  for (const auto& [name, entry] : tallies) {
    const auto& [category, tally] = entry;
    const std::size_t n = unique_words ? tally.words.size() : tally.total;
    const std::size_t negative =
        unique_words ? tally.negative_words.size() : tally.negative;
    rates.push_back({category,
                     static_cast<double>(negative) / static_cast<double>(n), n});
  }
  return rates;
}

std::vector<NegativeWord> NegativeWordTable(
    const std::vector<ProbeRecord>& records) {
  std::map<std::string, NegativeWord> words;
  std::size_t total = 0;
  for (const ProbeRecord& record : records) {
    if (record.excluded_by_baseline || !record.is_negative) continue;
    NegativeWord& entry = words[record.completion.token];
    entry.word = record.completion.token;
    entry.valency = record.valency.value;
    ++entry.count;
    ++total;
  }
  std::vector<NegativeWord> out;
  for (auto& [word, entry] : words) {
    entry.frequency = static_cast<double>(entry.count) / static_cast<double>(total);
    out.push_back(entry);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const NegativeWord& a, const NegativeWord& b) {
                     return a.count > b.count;
                   });
  return out;
}

}  // namespace biaslens
