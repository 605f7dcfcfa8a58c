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

#include "biaslens/corpus_odds.h"

#include <algorithm>
#include <cmath>
#include <thread>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "biaslens/csv.h"
#include "biaslens/sampling.h"
#include "string_util.h"

namespace biaslens {
namespace {

bool IsTokenByte(unsigned char c) {
  return absl::ascii_isalnum(c) || c >= 0x80 || c == '\'' || c == '-';
}

absl::StatusOr<double> ParseLabel(const std::string& raw, std::size_t line,
                                  std::string_view column) {
  double value = 0.0;
  if (!absl::SimpleAtod(absl::StripAsciiWhitespace(raw), &value) ||
      !std::isfinite(value)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "line ", line, ": column \"", Sv(column), "\" is not numeric: \"", raw,
        "\""));
  }
  return value;
}

}  // namespace

absl::StatusOr<IngestResult> Ingest(std::istream& in,
                                    const IngestSchema& schema) {
  CsvReader reader(in);
  absl::StatusOr<std::optional<CsvRecord>> header = reader.Next();
  if (!header.ok()) return header.status();
  if (!header->has_value()) {
    return absl::FailedPreconditionError("input CSV has no header");
  }
  const std::vector<std::string>& columns = (*header)->fields;
  const auto find = [&columns](const std::string& name) -> std::ptrdiff_t {
    const auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? -1 : it - columns.begin();
  };
  const std::ptrdiff_t text_idx = find(schema.text_col);
  const std::ptrdiff_t toxicity_idx = find(schema.toxicity_col);
  const std::ptrdiff_t mention_idx = find(schema.mention_col);
  const std::ptrdiff_t id_idx = find(schema.id_col);
  for (const auto& [idx, name] :
       {std::pair{text_idx, schema.text_col},
        std::pair{toxicity_idx, schema.toxicity_col},
        std::pair{mention_idx, schema.mention_col}}) {
    if (idx < 0) {
      return absl::FailedPreconditionError(
          absl::StrCat("schema error: input CSV has no column \"", name, "\""));
    }
  }

  IngestResult result;
  std::size_t row_number = 0;
  for (;;) {
    absl::StatusOr<std::optional<CsvRecord>> row = reader.Next();
    if (!row.ok()) return row.status();
    if (!row->has_value()) break;
    const CsvRecord& record = **row;
    if (record.fields.size() == 1 && record.fields[0].empty()) continue;
    ++row_number;
    if (record.fields.size() != columns.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", record.line, ": expected ", columns.size(),
                       " fields, found ", record.fields.size()));
    }
    const std::string& text = record.fields[text_idx];
    if (absl::StripAsciiWhitespace(text).empty()) {
      ++result.dropped_empty_text;
      continue;
    }
    const std::string& mention_raw = record.fields[mention_idx];
    if (absl::StripAsciiWhitespace(mention_raw).empty()) {
      ++result.dropped_unlabeled;
      continue;
    }
    absl::StatusOr<double> toxicity =
        ParseLabel(record.fields[toxicity_idx], record.line, schema.toxicity_col);
    if (!toxicity.ok()) return toxicity.status();
    absl::StatusOr<double> mention =
        ParseLabel(mention_raw, record.line, schema.mention_col);
    if (!mention.ok()) return mention.status();
    result.comments.push_back(
        {id_idx >= 0 ? record.fields[id_idx] : absl::StrCat(row_number), text,
         *toxicity >= schema.threshold, *mention >= schema.threshold});
  }
  return result;
}

std::string_view CellName(Cell cell) {
  switch (cell) {
    case Cell::kToxicMention:
      return "toxic_mention";
    case Cell::kNonToxicMention:
      return "nontoxic_mention";
    case Cell::kToxicBackground:
      return "toxic_background";
    case Cell::kNonToxicBackground:
      return "nontoxic_background";
  }
  return "";
}

absl::StatusOr<BalancedSample> Balance(
    const std::vector<LabeledComment>& comments, std::uint64_t seed) {
  std::array<std::vector<const LabeledComment*>, 4> source;
  for (const LabeledComment& comment : comments) {
    const Cell cell =
        comment.has_mention
            ? (comment.toxic ? Cell::kToxicMention : Cell::kNonToxicMention)
            : (comment.toxic ? Cell::kToxicBackground
                             : Cell::kNonToxicBackground);
    source[static_cast<std::size_t>(cell)].push_back(&comment);
  }
  BalancedSample sample;
  sample.seed = seed;
  for (Cell cell : kAllCells) {
    const std::size_t i = static_cast<std::size_t>(cell);
    sample.source_sizes[i] = source[i].size();
    if (source[i].empty()) {
      return absl::FailedPreconditionError(
          absl::StrCat("balance error: cell ", Sv(CellName(cell)), " is empty"));
    }
  }
  const std::size_t n =
      source[static_cast<std::size_t>(Cell::kNonToxicMention)].size();
  for (Cell cell : {Cell::kToxicBackground, Cell::kNonToxicBackground}) {
    const std::size_t have = source[static_cast<std::size_t>(cell)].size();
    if (have < n) {
      return absl::FailedPreconditionError(absl::StrCat(
          "balance error: cell ", Sv(CellName(cell)), " has ", have,
          " comments but ", n, " are needed"));
    }
  }
  sample.cell_size = n;

  SeededRng rng(seed);
  const auto take = [&sample, &source](Cell cell,
                                       const std::vector<std::size_t>& picks) {
    const std::size_t i = static_cast<std::size_t>(cell);
    for (std::size_t pick : picks) sample.cells[i].push_back(*source[i][pick]);
  };

  take(Cell::kNonToxicMention,
       SampleWithoutReplacement(n, n, rng));
  const std::size_t toxic_mentions =
      source[static_cast<std::size_t>(Cell::kToxicMention)].size();
  if (toxic_mentions >= n) {
    take(Cell::kToxicMention, SampleWithoutReplacement(toxic_mentions, n, rng));
  } else {
    take(Cell::kToxicMention,
         SampleWithoutReplacement(toxic_mentions, toxic_mentions, rng));
    take(Cell::kToxicMention,
         SampleWithReplacement(toxic_mentions, n - toxic_mentions, rng));
  }
  for (Cell cell : {Cell::kToxicBackground, Cell::kNonToxicBackground}) {
    take(cell, SampleWithoutReplacement(
                   source[static_cast<std::size_t>(cell)].size(), n, rng));
  }
  return sample;
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!IsTokenByte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && IsTokenByte(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    std::size_t begin = i;
    std::size_t end = j;
    while (begin < end && (text[begin] == '\'' || text[begin] == '-')) ++begin;
    while (end > begin && (text[end - 1] == '\'' || text[end - 1] == '-')) --end;
    if (begin < end) {
      tokens.push_back(absl::AsciiStrToLower(Sv(text.substr(begin, end - begin))));
    }
    i = j;
  }
  return tokens;
}

std::vector<std::string> ExtractTerms(const std::vector<std::string>& tokens) {
  std::vector<std::string> terms(tokens.begin(), tokens.end());
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    terms.push_back(absl::StrCat(tokens[i], " ", tokens[i + 1]));
  }
  return terms;
}

void TermTable::AddText(std::string_view text) {
  const std::vector<std::string> tokens = Tokenize(text);
  total_tokens += static_cast<std::int64_t>(tokens.size());
  for (std::string& term : ExtractTerms(tokens)) ++counts[std::move(term)];
}

void TermTable::Merge(const TermTable& other) {
  total_tokens += other.total_tokens;
  for (const auto& [term, count] : other.counts) counts[term] += count;
}

std::int64_t TermTable::Count(const std::string& term) const {
  const auto it = counts.find(term);
  return it == counts.end() ? 0 : it->second;
}

TermTable CountTerms(const std::vector<const LabeledComment*>& comments,
                     int workers) {
  const std::size_t shards = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::max(workers, 1)), 1,
      std::max<std::size_t>(comments.size(), 1));
  std::vector<TermTable> tables(shards);
  {
    std::vector<std::jthread> pool;
    for (std::size_t s = 0; s < shards; ++s) {
      pool.emplace_back([&, s] {
        for (std::size_t i = s; i < comments.size(); i += shards) {
          tables[s].AddText(comments[i]->text);
        }
      });
    }
  }
  TermTable merged = std::move(tables[0]);
  for (std::size_t s = 1; s < shards; ++s) merged.Merge(tables[s]);
  return merged;
}

absl::StatusOr<std::vector<OddsResult>> ComputeLogOdds(
    const TermTable& group_in, const TermTable& group_out, double alpha0) {
  if (group_in.total_tokens <= 0 || group_out.total_tokens <= 0) {
    return absl::InvalidArgumentError("group token totals must be positive");
  }
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) {
    return absl::InvalidArgumentError("alpha0 must be positive and finite");
  }
  const double n_in = static_cast<double>(group_in.total_tokens);
  const double n_out = static_cast<double>(group_out.total_tokens);

  std::vector<OddsResult> results;
  results.reserve(group_in.counts.size() + group_out.counts.size());
  const auto score = [&](const std::string& term, std::int64_t y_in,
                         std::int64_t y_out) -> absl::Status {
    OddsResult r;
    r.term = term;
    r.count_in = y_in;
    r.count_out = y_out;
    r.n_in = group_in.total_tokens;
    r.n_out = group_out.total_tokens;
    const double yi = static_cast<double>(y_in);
    const double yj = static_cast<double>(y_out);
    r.alpha_w = alpha0 * (yi + yj) / (n_in + n_out);
    const double num_in = yi + r.alpha_w;
    const double den_in = n_in + alpha0 - yi - r.alpha_w;
    const double num_out = yj + r.alpha_w;
    const double den_out = n_out + alpha0 - yj - r.alpha_w;
    if (!(num_in > 0.0 && den_in > 0.0 && num_out > 0.0 && den_out > 0.0)) {
      return absl::OutOfRangeError(absl::StrCat(
          "log-odds argument is not positive for term \"", term, "\""));
    }
    r.delta = std::log(num_in / den_in) - std::log(num_out / den_out);
    r.variance = 1.0 / num_in + 1.0 / num_out;
    r.z = r.delta / std::sqrt(r.variance);
    results.push_back(std::move(r));
    return absl::OkStatus();
  };
  for (const auto& [term, y_in] : group_in.counts) {
    absl::Status status = score(term, y_in, group_out.Count(term));
    if (!status.ok()) return status;
  }
  for (const auto& [term, y_out] : group_out.counts) {
    if (group_in.counts.count(term) > 0) continue;
    absl::Status status = score(term, 0, y_out);
    if (!status.ok()) return status;
  }
  std::sort(results.begin(), results.end(),
            [](const OddsResult& a, const OddsResult& b) {
              if (a.z != b.z) return a.z > b.z;
              return a.term < b.term;
            });
  return results;
}

bool IsTermCategory(std::string_view category) {
  return category == "condition" || category == "treatment" ||
         category == "infrastructure" || category == "linguistic" ||
         category == "social";
}

absl::StatusOr<std::map<std::string, std::string>> LoadTagFile(
    std::istream& in) {
  CsvReader reader(in);
  std::map<std::string, std::string> tags;
  bool first = true;
  for (;;) {
    absl::StatusOr<std::optional<CsvRecord>> row = reader.Next();
    if (!row.ok()) return row.status();
    if (!row->has_value()) break;
    const CsvRecord& record = **row;
    if (record.fields.size() == 1 && record.fields[0].empty()) continue;
    if (record.fields.size() != 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", record.line, ": expected `term,category`"));
    }
    const std::string term = absl::AsciiStrToLower(
        absl::StripAsciiWhitespace(record.fields[0]));
    const std::string category = absl::AsciiStrToLower(
        absl::StripAsciiWhitespace(record.fields[1]));
    if (first && term == "term" && category == "category") {
      first = false;
      continue;
    }
    first = false;
    if (!IsTermCategory(category)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", record.line, ": unknown term category \"", category, "\""));
    }
    tags[term] = category;
  }
  return tags;
}

std::vector<TermRow> TopTerms(const std::vector<OddsResult>& results,
                              double z_threshold, std::size_t k,
                              const std::map<std::string, std::string>& tags) {
  std::vector<TermRow> rows;
  for (const OddsResult& result : results) {
    if (rows.size() >= k) break;
    if (!(result.z > z_threshold)) continue;
    const auto it = tags.find(result.term);
    rows.push_back({result, it == tags.end() ? "" : it->second});
  }
  return rows;
}

absl::StatusOr<CorpusOddsResult> AnalyzeCorpus(
    const std::vector<LabeledComment>& comments, std::uint64_t seed,
    double alpha0, int workers) {
  absl::StatusOr<BalancedSample> sample = Balance(comments, seed);
  if (!sample.ok()) return sample.status();
  std::vector<const LabeledComment*> mention;
  std::vector<const LabeledComment*> background;
  for (Cell cell : kAllCells) {
    auto& group = (cell == Cell::kToxicMention || cell == Cell::kNonToxicMention)
                      ? mention
                      : background;
    for (const LabeledComment& c : sample->cell(cell)) group.push_back(&c);
  }
  const TermTable in = CountTerms(mention, workers);
  const TermTable out = CountTerms(background, workers);
  absl::StatusOr<std::vector<OddsResult>> results =
      ComputeLogOdds(in, out, alpha0);
  if (!results.ok()) return results.status();
  return CorpusOddsResult{*std::move(sample), *std::move(results)};
}

}  // namespace biaslens
