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

#ifndef BIASLENS_REPORT_H_
#define BIASLENS_REPORT_H_

#include <string>
#include <vector>

#include "biaslens/classifier_audit.h"
#include "biaslens/corpus_odds.h"
#include "biaslens/mlm_audit.h"
#include "json.hpp"

namespace biaslens {

using Json = nlohmann::ordered_json;

// Shortest decimal that round-trips to `value`.
std::string FormatNumber(double value);

// `group_key,mean_diff,std_err,ci95,n`
std::string AuditCsv(const std::vector<AuditRow>& rows);
// `key,value,error` with error = 95% half-width, for bar charts.
std::string PlotDataCsv(const std::vector<AuditRow>& rows);
Json AuditRowsJson(const std::vector<AuditRow>& rows);
Json PlotDataJson(const std::vector<AuditRow>& rows);
Json AuditJson(const std::vector<AuditRow>& rows, const AuditResult& result,
               const Json& provenance, bool include_plot_data);

// `category,negative_fraction,n`
std::string ProbeCsv(const std::vector<CategoryNegativeRate>& rates);
Json ProbeJson(const ProbeResult& result, const Json& provenance,
               bool include_words);
// `word,frequency,valency`
std::string NegativeWordsCsv(const std::vector<NegativeWord>& words);

// `term,count_in,count_out,delta,z`
std::string OddsCsv(const std::vector<TermRow>& rows);
Json OddsJson(const std::vector<TermRow>& rows, const CorpusOddsResult& result,
              const IngestResult& ingest, const Json& provenance);

}  // namespace biaslens

#endif  // BIASLENS_REPORT_H_
