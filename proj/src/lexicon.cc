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

#include "biaslens/lexicon.h"

#include <fstream>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "biaslens/csv.h"
#include "biaslens/hashing.h"
#include "string_util.h"

namespace biaslens {
namespace {

constexpr std::array<std::string_view, 13> kCategoryNames = {
    "hearing",         "sight",         "unspecified", "mobility",
    "cerebral_palsy",  "mental_health", "epilepsy",    "physical",
    "chronic_illness", "short_stature", "cognitive",   "downs_syndrome",
    "without",
};

}  // namespace

std::string_view CategoryName(Category category) {
  return kCategoryNames[static_cast<std::size_t>(category)];
}

std::string_view StatusName(PhraseStatus status) {
  return status == PhraseStatus::kRecommended ? "recommended"
                                              : "non_recommended";
}

std::optional<Category> ParseCategory(std::string_view token) {
  const std::string lower =
      absl::AsciiStrToLower(absl::StripAsciiWhitespace(Sv(token)));
  for (Category category : kAllCategories) {
    if (CategoryName(category) == lower) return category;
  }
  return std::nullopt;
}

std::optional<PhraseStatus> ParseStatus(std::string_view token) {
  const std::string lower =
      absl::AsciiStrToLower(absl::StripAsciiWhitespace(Sv(token)));
  for (PhraseStatus status : kAllStatuses) {
    if (StatusName(status) == lower) return status;
  }
  return std::nullopt;
}

absl::StatusOr<Lexicon> Lexicon::Create(
    std::vector<DisabilityPhrase> phrases) {
  if (phrases.empty()) return absl::InvalidArgumentError("empty lexicon");
  std::set<std::string> seen;
  for (const DisabilityPhrase& phrase : phrases) {
    if (phrase.text.empty()) {
      return absl::InvalidArgumentError("phrase text must be non-empty");
    }
    if (!seen.insert(absl::AsciiStrToLower(phrase.text)).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate phrase: \"", phrase.text, "\""));
    }
  }
  return Lexicon(std::move(phrases));
}

std::string Lexicon::ToCsv() const {
  std::string out = "phrase,category,status\n";
  for (const DisabilityPhrase& phrase : phrases_) {
    absl::StrAppend(&out,
                    CsvJoin({phrase.text, std::string(CategoryName(phrase.category)),
                             std::string(StatusName(phrase.status))}),
                    "\n");
  }
  return out;
}

std::string Lexicon::Hash() const { return Sha256Hex(ToCsv()); }

absl::StatusOr<Lexicon> LoadLexicon(std::istream& in) {
  CsvReader reader(in);
  absl::StatusOr<std::optional<CsvRecord>> header = reader.Next();
  if (!header.ok()) return header.status();
  if (!header->has_value()) return absl::InvalidArgumentError("empty lexicon");
  const std::vector<std::string>& columns = (*header)->fields;
  if (columns.size() != 3 ||
      absl::AsciiStrToLower(absl::StripAsciiWhitespace(columns[0])) !=
          "phrase" ||
      absl::AsciiStrToLower(absl::StripAsciiWhitespace(columns[1])) !=
          "category" ||
      absl::AsciiStrToLower(absl::StripAsciiWhitespace(columns[2])) !=
          "status") {
    return absl::InvalidArgumentError(
        "line 1: expected header `phrase,category,status`");
  }

  std::vector<DisabilityPhrase> phrases;
  for (;;) {
    absl::StatusOr<std::optional<CsvRecord>> row = reader.Next();
    if (!row.ok()) return row.status();
    if (!row->has_value()) break;
    const CsvRecord& record = **row;
    // Tolerate blank lines, e.g. a trailing newline pair.
    if (record.fields.size() == 1 && record.fields[0].empty()) continue;
    if (record.fields.size() != 3) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", record.line, ": expected 3 fields, found ",
                       record.fields.size()));
    }
    std::optional<Category> category = ParseCategory(record.fields[1]);
    if (!category) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", record.line, ": unknown category \"", record.fields[1],
          "\""));
    }
    std::optional<PhraseStatus> status = ParseStatus(record.fields[2]);
    if (!status) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", record.line, ": unknown status \"", record.fields[2], "\""));
    }
    std::string text(absl::StripAsciiWhitespace(record.fields[0]));
    if (text.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", record.line, ": empty phrase"));
    }
    phrases.push_back({std::move(text), *category, *status});
  }
  return Lexicon::Create(std::move(phrases));
}

absl::StatusOr<Lexicon> LoadLexiconFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return LoadLexicon(in);
}

std::vector<DisabilityPhrase> PhrasesBy(const Lexicon& lexicon,
                                        std::optional<Category> category,
                                        std::optional<PhraseStatus> status) {
  std::vector<DisabilityPhrase> out;
  for (const DisabilityPhrase& phrase : lexicon.phrases()) {
    if (category && phrase.category != *category) continue;
    if (status && phrase.status != *status) continue;
    out.push_back(phrase);
  }
  return out;
}

}  // namespace biaslens
