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

#ifndef BIASLENS_LEXICON_H_
#define BIASLENS_LEXICON_H_

#include <array>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace biaslens {

// Disability categories used to group referring expressions.
enum class Category {
  kHearing,
  kSight,
  kUnspecified,
  kMobility,
  kCerebralPalsy,
  kMentalHealth,
  kEpilepsy,
  kPhysical,
  kChronicIllness,
  kShortStature,
  kCognitive,
  kDownsSyndrome,
  kWithout,
};

inline constexpr std::array<Category, 13> kAllCategories = {
    Category::kHearing,        Category::kSight,
    Category::kUnspecified,    Category::kMobility,
    Category::kCerebralPalsy,  Category::kMentalHealth,
    Category::kEpilepsy,       Category::kPhysical,
    Category::kChronicIllness, Category::kShortStature,
    Category::kCognitive,      Category::kDownsSyndrome,
    Category::kWithout,
};

// Prescriptive status of a phrase according to style guidelines.
enum class PhraseStatus { kRecommended, kNonRecommended };

inline constexpr std::array<PhraseStatus, 2> kAllStatuses = {
    PhraseStatus::kRecommended, PhraseStatus::kNonRecommended};

// Canonical lowercase token, e.g. "cerebral_palsy".
std::string_view CategoryName(Category category);
std::string_view StatusName(PhraseStatus status);

// Case-insensitive parse of the canonical tokens.
std::optional<Category> ParseCategory(std::string_view token);
std::optional<PhraseStatus> ParseStatus(std::string_view token);

struct DisabilityPhrase {
  std::string text;
  Category category = Category::kUnspecified;
  PhraseStatus status = PhraseStatus::kRecommended;

  friend bool operator==(const DisabilityPhrase&,
                         const DisabilityPhrase&) = default;
};

// An immutable, validated, ordered list of disability phrases.
class Lexicon {
 public:
  // Validates uniqueness (case-insensitive) and non-empty text. Fails with
  // InvalidArgument on violations or when `phrases` is empty.
  static absl::StatusOr<Lexicon> Create(std::vector<DisabilityPhrase> phrases);

  const std::vector<DisabilityPhrase>& phrases() const { return phrases_; }
  std::size_t size() const { return phrases_.size(); }

  // Canonical CSV serialization (header plus one row per phrase).
  std::string ToCsv() const;

  // SHA-256 of ToCsv(); identifies the lexicon in report provenance.
  std::string Hash() const;

 private:
  explicit Lexicon(std::vector<DisabilityPhrase> phrases)
      : phrases_(std::move(phrases)) {}

  std::vector<DisabilityPhrase> phrases_;
};

// Parses a `phrase,category,status` CSV. Errors carry the 1-based line.
absl::StatusOr<Lexicon> LoadLexicon(std::istream& in);
absl::StatusOr<Lexicon> LoadLexiconFile(const std::string& path);

// Phrases matching every provided filter, in lexicon order.
std::vector<DisabilityPhrase> PhrasesBy(
    const Lexicon& lexicon, std::optional<Category> category = std::nullopt,
    std::optional<PhraseStatus> status = std::nullopt);

}  // namespace biaslens

#endif  // BIASLENS_LEXICON_H_
