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

#include "biaslens/report.h"

#include <charconv>

#include "absl/strings/str_cat.h"
#include "biaslens/csv.h"
#include "string_util.h"

namespace biaslens {

std::string FormatNumber(double value) {
  // Negative zero prints as 0 so that sign-only differences never reach a
  // report.
  if (value == 0.0) value = 0.0;
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

std::string AuditCsv(const std::vector<AuditRow>& rows) {
  std::string out = "group_key,mean_diff,std_err,ci95,n\n";
  for (const AuditRow& row : rows) {
    absl::StrAppend(&out, CsvEscape(row.group_key), ",",
                    FormatNumber(row.mean_diff), ",", FormatNumber(row.std_err),
                    ",", FormatNumber(row.ci95_half_width), ",", row.n, "\n");
  }
  return out;
}

std::string PlotDataCsv(const std::vector<AuditRow>& rows) {
  std::string out = "key,value,error\n";
  for (const AuditRow& row : rows) {
    absl::StrAppend(&out, CsvEscape(row.group_key), ",",
                    FormatNumber(row.mean_diff), ",",
                    FormatNumber(row.ci95_half_width), "\n");
  }
  return out;
}

Json AuditRowsJson(const std::vector<AuditRow>& rows) {
  Json out = Json::array();
  for (const AuditRow& row : rows) {
    out.push_back({{"group_key", row.group_key},
                   {"mean_diff", row.mean_diff + 0.0},
                   {"std_err", row.std_err},
                   {"ci95", row.ci95_half_width},
                   {"n", row.n},
                   {"single_sample", row.single_sample}});
  }
  return out;
}

Json PlotDataJson(const std::vector<AuditRow>& rows) {
  Json out = Json::array();
  for (const AuditRow& row : rows) {
    out.push_back({{"key", row.group_key},
                   {"value", row.mean_diff + 0.0},
                   {"error", row.ci95_half_width}});
  }
  return out;
}

Json AuditJson(const std::vector<AuditRow>& rows, const AuditResult& result,
               const Json& provenance, bool include_plot_data) {
  Json skipped = Json::array();
  for (const SkippedSentence& s : result.skipped) {
    skipped.push_back({{"sentence_id", s.sentence_id}, {"reason", s.reason}});
  }
  Json report = {
      {"provenance", provenance},
      {"counts",
       {{"corpus", result.corpus_size},
        {"without_pronoun", result.without_pronoun},
        {"eligible", result.eligible},
        {"sampled", result.sampled},
        {"scored", result.sampled - result.skipped.size()},
        {"diffs", result.diffs.size()}}},
      {"rows", AuditRowsJson(rows)},
      {"skipped", std::move(skipped)},
      {"warnings", result.warnings},
  };
  if (include_plot_data) report["plot_data"] = PlotDataJson(rows);
  return report;
}

std::string ProbeCsv(const std::vector<CategoryNegativeRate>& rates) {
  std::string out = "category,negative_fraction,n\n";
  for (const CategoryNegativeRate& rate : rates) {
    absl::StrAppend(&out, Sv(CategoryName(rate.category)), ",",
                    FormatNumber(rate.negative_fraction), ",",
                    rate.n_completions, "\n");
  }
  return out;
}

Json ProbeJson(const ProbeResult& result, const Json& provenance,
               bool include_words) {
  Json rates = Json::array();
  for (const CategoryNegativeRate& rate : result.rates) {
    rates.push_back({{"category", CategoryName(rate.category)},
                     {"negative_fraction", rate.negative_fraction},
                     {"n", rate.n_completions}});
  }
  Json records = Json::array();
  for (const ProbeRecord& r : result.records) {
    records.push_back(
        {{"category", r.query.category ? CategoryName(*r.query.category) : ""},
         {"phrase", r.query.phrase},
         {"subject", r.query.subject_variant},
         {"query", r.query.query_text},
         {"token", r.completion.token},
         {"rank", r.completion.rank},
         {"probability", r.completion.probability},
         {"carrier_sentence", r.carrier_sentence},
         {"valency", r.valency.value + 0.0},
         {"is_negative", r.is_negative},
         {"excluded_by_baseline", r.excluded_by_baseline}});
  }
  Json skipped = Json::array();
  for (const SkippedQuery& s : result.skipped) {
    skipped.push_back({{"query", s.query_text}, {"reason", s.reason}});
  }
  Json report = {
      {"provenance", provenance},
      {"counts",
       {{"queries", result.queries},
        {"skipped", result.skipped.size()},
        {"records", result.records.size()}}},
      {"baseline_exclusion", result.exclusion},
      {"rates", std::move(rates)},
      {"records", std::move(records)},
      {"skipped", std::move(skipped)},
  };
  if (include_words) {
    Json words = Json::array();
    for (const NegativeWord& w : NegativeWordTable(result.records)) {
      words.push_back({{"word", w.word},
                       {"count", w.count},
                       {"frequency", w.frequency},
                       {"valency", w.valency}});
    }
    report["negative_words"] = std::move(words);
  }
  return report;
}

std::string NegativeWordsCsv(const std::vector<NegativeWord>& words) {
  std::string out = "word,frequency,valency\n";
  for (const NegativeWord& w : words) {
    absl::StrAppend(&out, CsvEscape(w.word), ",", FormatNumber(w.frequency),
                    ",", FormatNumber(w.valency), "\n");
  }
  return out;
}

std::string OddsCsv(const std::vector<TermRow>& rows) {
  std::string out = "term,count_in,count_out,delta,z\n";
  for (const TermRow& row : rows) {
    absl::StrAppend(&out, CsvEscape(row.odds.term), ",", row.odds.count_in, ",",
                    row.odds.count_out, ",", FormatNumber(row.odds.delta), ",",
                    FormatNumber(row.odds.z), "\n");
  }
  return out;
}

Json OddsJson(const std::vector<TermRow>& rows, const CorpusOddsResult& result,
              const IngestResult& ingest, const Json& provenance) {
  Json cells = Json::object();
  for (Cell cell : kAllCells) {
    const std::size_t i = static_cast<std::size_t>(cell);
    cells[std::string(CellName(cell))] = {
        {"source", result.sample.source_sizes[i]},
        {"sampled", result.sample.cells[i].size()}};
  }
  Json terms = Json::array();
  for (const TermRow& row : rows) {
    const OddsResult& r = row.odds;
    Json entry = {{"term", r.term},           {"count_in", r.count_in},
                  {"count_out", r.count_out}, {"n_in", r.n_in},
                  {"n_out", r.n_out},         {"alpha_w", r.alpha_w},
                  {"delta", r.delta + 0.0},   {"variance", r.variance},
                  {"z", r.z + 0.0}};
    if (!row.tag.empty()) entry["tag"] = row.tag;
    terms.push_back(std::move(entry));
  }
  return {
      {"provenance", provenance},
      {"ingest",
       {{"comments", ingest.comments.size()},
        {"dropped_empty_text", ingest.dropped_empty_text},
        {"dropped_unlabeled", ingest.dropped_unlabeled}}},
      {"cells", std::move(cells)},
      {"total_sampled", result.sample.total()},
      {"terms_scored", result.results.size()},
      {"terms", std::move(terms)},
  };
}

}  // namespace biaslens
