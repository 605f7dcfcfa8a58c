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

#ifndef BIASLENS_CORPUS_ODDS_H_
#define BIASLENS_CORPUS_ODDS_H_

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "absl/status/statusor.h"

namespace biaslens {

struct LabeledComment {
  std::string id;
  std::string text;
  bool toxic = false;
  bool has_mention = false;
};

// Column names for a labeled comment CSV. The defaults match the public
// Jigsaw unintended-bias training file.
struct IngestSchema {
  std::string id_col = "id";
  std::string text_col = "comment_text";
  std::string toxicity_col = "target";
  std::string mention_col = "psychiatric_or_mental_illness";
  // Fractional labels at or above this are positive.
  double threshold = 0.5;
};

struct IngestResult {
  std::vector<LabeledComment> comments;
  std::size_t dropped_empty_text = 0;
  // Rows whose mention column is blank (not annotated for identities).
  std::size_t dropped_unlabeled = 0;
};

// Reads labeled comments. When the id column is absent the 1-based data row
// number is used as the id.
//
// Errors: FailedPrecondition when a mapped column is missing or a label is
// not numeric; InvalidArgument for malformed CSV.
absl::StatusOr<IngestResult> Ingest(std::istream& in,
                                    const IngestSchema& schema);

// Cells of the 4-way balanced sample.
enum class Cell {
  kToxicMention,
  kNonToxicMention,
  kToxicBackground,
  kNonToxicBackground,
};

inline constexpr std::array<Cell, 4> kAllCells = {
    Cell::kToxicMention, Cell::kNonToxicMention, Cell::kToxicBackground,
    Cell::kNonToxicBackground};

std::string_view CellName(Cell cell);

struct BalancedSample {
  // Indexed by Cell; all four have `cell_size` entries.
  std::array<std::vector<LabeledComment>, 4> cells;
  std::array<std::size_t, 4> source_sizes{};
  std::size_t cell_size = 0;
  std::uint64_t seed = 0;

  const std::vector<LabeledComment>& cell(Cell c) const {
    return cells[static_cast<std::size_t>(c)];
  }
  std::size_t total() const { return 4 * cell_size; }
};

// Balances toxic x mention cells to N = number of non-toxic mention
// comments. Every non-toxic mention comment is kept. The toxic mention cell
// keeps all of its comments and is topped up to N by seeded draws with
// replacement (or down-sampled if it is larger than N). Background cells are
// down-sampled to N without replacement.
//
// Errors: FailedPrecondition naming the empty or deficient cell.
absl::StatusOr<BalancedSample> Balance(
    const std::vector<LabeledComment>& comments, std::uint64_t seed);

// Lowercased tokens: maximal runs of letters (including non-ASCII bytes),
// digits, apostrophes and hyphens, with leading and trailing apostrophes and
// hyphens stripped.
std::vector<std::string> Tokenize(std::string_view text);

// Every token plus every adjacent pair joined by one space.
std::vector<std::string> ExtractTerms(const std::vector<std::string>& tokens);

// Unigram and bigram counts for one group of comments.
struct TermTable {
  std::unordered_map<std::string, std::int64_t> counts;
  // Number of unigram tokens.
  std::int64_t total_tokens = 0;

  void AddText(std::string_view text);
  void Merge(const TermTable& other);
  std::int64_t Count(const std::string& term) const;
};

// Counts terms over `comments`, sharding across up to `workers` threads.
TermTable CountTerms(const std::vector<const LabeledComment*>& comments,
                     int workers = 1);

struct OddsResult {
  std::string term;
  std::int64_t count_in = 0;
  std::int64_t count_out = 0;
  std::int64_t n_in = 0;
  std::int64_t n_out = 0;
  double alpha_w = 0.0;
  double delta = 0.0;
  double variance = 0.0;
  double z = 0.0;
};

// Log-odds ratio with an informative Dirichlet prior whose per-term mass is
// alpha0 times the pooled term frequency. For each term w:
//
//   delta = log((y_in + a_w) / (n_in + alpha0 - y_in - a_w))
//         - log((y_out + a_w) / (n_out + alpha0 - y_out - a_w))
//   variance = 1 / (y_in + a_w) + 1 / (y_out + a_w)
//   z = delta / sqrt(variance)
//
// Results are sorted by z descending, ties by term.
//
// Errors: InvalidArgument for non-positive totals or alpha0; OutOfRange when
// a log argument is not positive.
absl::StatusOr<std::vector<OddsResult>> ComputeLogOdds(
    const TermTable& group_in, const TermTable& group_out, double alpha0);

// Categories for manual term tags.
bool IsTermCategory(std::string_view category);

// CSV `term,category`; categories must be one of condition, treatment,
// infrastructure, linguistic or social.
absl::StatusOr<std::map<std::string, std::string>> LoadTagFile(
    std::istream& in);

struct TermRow {
  OddsResult odds;
  std::string tag;
};

// Terms with z > z_threshold, the first k of `results` order, tagged from
// `tags` where present.
std::vector<TermRow> TopTerms(const std::vector<OddsResult>& results,
                              double z_threshold, std::size_t k,
                              const std::map<std::string, std::string>& tags =
                                  {});

struct CorpusOddsResult {
  BalancedSample sample;
  std::vector<OddsResult> results;
};

// Balance, count mention cells against background cells, and score terms.
absl::StatusOr<CorpusOddsResult> AnalyzeCorpus(
    const std::vector<LabeledComment>& comments, std::uint64_t seed,
    double alpha0, int workers = 1);

}  // namespace biaslens

#endif  // BIASLENS_CORPUS_ODDS_H_
