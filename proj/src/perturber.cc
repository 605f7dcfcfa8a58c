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

#include "biaslens/perturber.h"
#include "string_util.h"

#include <algorithm>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"

namespace biaslens {
namespace {

bool IsWordByte(char c) {
  return absl::ascii_isalpha(static_cast<unsigned char>(c)) ||
         static_cast<unsigned char>(c) >= 0x80;
}

std::string CapitalizeFirst(std::string_view text) {
  std::string out(text);
  if (!out.empty()) out[0] = absl::ascii_toupper(static_cast<unsigned char>(out[0]));
  return out;
}

}  // namespace

std::optional<PronounSlot> FindPronounSlot(std::string_view sentence) {
  std::size_t i = 0;
  while (i < sentence.size()) {
    if (!IsWordByte(sentence[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < sentence.size() && IsWordByte(sentence[j])) ++j;
    const std::string_view word = sentence.substr(i, j - i);
    if (absl::EqualsIgnoreCase(Sv(word), "he") ||
        absl::EqualsIgnoreCase(Sv(word), "she")) {
      return PronounSlot{i, j, std::string(word)};
    }
    i = j;
  }
  return std::nullopt;
}

absl::StatusOr<PerturbationRecord> Perturb(std::string_view sentence,
                                           const PronounSlot& slot,
                                           const DisabilityPhrase& phrase) {
  if (slot.start >= slot.end || slot.end > sentence.size() ||
      sentence.substr(slot.start, slot.end - slot.start) != slot.surface) {
    return absl::InvalidArgumentError(absl::StrCat(
        "pronoun slot [", slot.start, ", ", slot.end, ") \"", slot.surface,
        "\" does not match sentence \"", Sv(sentence), "\""));
  }
  const bool capitalize =
      absl::ascii_isupper(static_cast<unsigned char>(slot.surface[0]));
  const std::string replacement =
      capitalize ? CapitalizeFirst(phrase.text) : phrase.text;
  std::string perturbed = absl::StrCat(Sv(sentence.substr(0, slot.start)),
                                       replacement,
                                       Sv(sentence.substr(slot.end)));
  return PerturbationRecord{std::string(sentence), slot, phrase,
                            std::move(perturbed)};
}

absl::StatusOr<std::vector<std::string>> SubjectVariants(
    const DisabilityPhrase& phrase, const std::vector<std::string>& subjects) {
  if (subjects.empty()) {
    return absl::InvalidArgumentError("subject list must be non-empty");
  }
  const std::vector<std::string> words = absl::StrSplit(phrase.text, ' ');
  std::size_t head = 0;
  if (words.size() >= 2 && (words[0] == "a" || words[0] == "an")) {
    const auto it = std::find(words.begin() + 1, words.end(), "person");
    if (it != words.end()) head = static_cast<std::size_t>(it - words.begin());
  }

  std::vector<std::string> out;
  const auto add = [&out](std::string variant) {
    if (std::find(out.begin(), out.end(), variant) == out.end()) {
      out.push_back(std::move(variant));
    }
  };
  for (const std::string& subject : subjects) {
    const std::size_t space = subject.rfind(' ');
    if (space == std::string::npos || space == 0 ||
        space + 1 == subject.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "subject \"", subject, "\" is not of the form <determiner> <noun>"));
    }
    if (head == 0 || subject == "a person") {
      add(phrase.text);
      continue;
    }
    std::vector<std::string> rewritten = {subject.substr(0, space)};
    rewritten.insert(rewritten.end(), words.begin() + 1, words.begin() + head);
    rewritten.push_back(subject.substr(space + 1));
    rewritten.insert(rewritten.end(), words.begin() + head + 1, words.end());
    add(absl::StrJoin(rewritten, " "));
  }
  return out;
}

absl::StatusOr<ProbeQuery> MakeProbeQuery(std::string_view phrase_variant,
                                          std::string_view blank_marker) {
  if (phrase_variant.empty()) {
    return absl::InvalidArgumentError("phrase variant must be non-empty");
  }
  if (blank_marker.empty()) {
    return absl::InvalidArgumentError("blank marker must be non-empty");
  }
  ProbeQuery query;
  query.phrase_variant = std::string(phrase_variant);
  query.query_text =
      absl::StrCat(CapitalizeFirst(phrase_variant), " is ", Sv(blank_marker), ".");
  return query;
}

std::vector<std::string> DefaultSubjects() {
  return {kDefaultSubjects.begin(), kDefaultSubjects.end()};
}

}  // namespace biaslens
