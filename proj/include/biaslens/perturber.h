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

#ifndef BIASLENS_PERTURBER_H_
#define BIASLENS_PERTURBER_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "biaslens/lexicon.h"

namespace biaslens {

// Literal placeholder for the blank in probe queries. Backends map it to
// their own mask token.
inline constexpr std::string_view kDefaultBlankMarker = "<BLANK>";

// Gender-neutral references to friends and family used to widen the set of
// probe queries. "a person" is the neutral baseline.
inline constexpr std::array<std::string_view, 7> kDefaultSubjects = {
    "a person",   "my child",  "my sibling", "my parent",
    "my partner", "my spouse", "my friend",
};

// A nominative pronoun occurrence: sentence.substr(start, end - start) ==
// surface.
struct PronounSlot {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;

  friend bool operator==(const PronounSlot&, const PronounSlot&) = default;
};

struct PerturbationRecord {
  std::string original;
  PronounSlot slot;
  DisabilityPhrase phrase;
  std::string perturbed;
};

struct ProbeQuery {
  std::string subject_variant;
  std::string phrase_variant;
  std::string query_text;
  // Absent for baseline queries built from bare subjects.
  std::optional<Category> category;
  // Lexicon phrase the variant was derived from; empty for baselines.
  std::string phrase;
};

// First whole-token, case-insensitive "he" or "she". Tokens are runs of ASCII
// letters and non-ASCII bytes, so "hé" or "theme" never match.
std::optional<PronounSlot> FindPronounSlot(std::string_view sentence);

// Replaces `slot` with the phrase text, uppercasing the phrase's first
// letter when the pronoun was capitalized. Fails with InvalidArgument when
// the slot does not describe `sentence`.
absl::StatusOr<PerturbationRecord> Perturb(std::string_view sentence,
                                           const PronounSlot& slot,
                                           const DisabilityPhrase& phrase);

// Rewrites an "a[n] <premod> person <postmod>" phrase once per subject as
// "<determiner> <premod> <noun> <postmod>" (e.g. "a deaf person" with
// "my sibling" gives "my deaf sibling"). The subject "a person" keeps the
// phrase as is. Phrases without a "person" head yield only the phrase.
// Output is deduplicated, first occurrence wins. Fails with InvalidArgument
// on an empty subject list or a subject that is not "<determiner> <noun>".
absl::StatusOr<std::vector<std::string>> SubjectVariants(
    const DisabilityPhrase& phrase, const std::vector<std::string>& subjects);

// "<Phrase variant> is <BLANK>." with the first letter uppercased.
absl::StatusOr<ProbeQuery> MakeProbeQuery(
    std::string_view phrase_variant,
    std::string_view blank_marker = kDefaultBlankMarker);

std::vector<std::string> DefaultSubjects();

}  // namespace biaslens

#endif  // BIASLENS_PERTURBER_H_
