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

#include "biaslens/cli.h"

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "biaslens/classifier_audit.h"
#include "biaslens/corpus_odds.h"
#include "biaslens/hashing.h"
#include "biaslens/lexicon.h"
#include "biaslens/mlm_audit.h"
#include "biaslens/perturber.h"
#include "biaslens/report.h"
#include "biaslens/scorers.h"
#include "string_util.h"

namespace biaslens {
namespace {

enum class Kind { kString, kInt, kDouble, kBool, kStringList };

struct OptionSpec {
  std::string key;
  Kind kind;
  Json default_value;  // null: no default
  std::string help;
  bool required = false;
  bool input_path = false;
};

std::vector<OptionSpec> OptionsFor(const std::string& command) {
  const OptionSpec lexicon{"lexicon", Kind::kString, nullptr,
                           "Lexicon CSV (phrase,category,status)", true, true};
  const OptionSpec seed{"seed", Kind::kInt, 0, "Sampling seed"};
  const OptionSpec out{"out", Kind::kString, nullptr, "Report output path",
                       true};
  const OptionSpec format{"format", Kind::kString, "json",
                          "Report format: csv, json or plot-data"};
  const std::vector<OptionSpec> transport = {
      {"max_concurrency", Kind::kInt, 4, "Maximum in-flight requests"},
      {"timeout_ms", Kind::kInt, 10000, "Per-request timeout in milliseconds"},
      {"max_retries", Kind::kInt, 3, "Retries after a failed request"},
      {"cache_dir", Kind::kString, "",
       "Score cache directory (BIASLENS_CACHE_DIR overrides)"},
  };

  std::vector<OptionSpec> specs;
  if (command == "lexicon-validate") {
    specs = {lexicon,
             {"out", Kind::kString, nullptr, "Optional summary output path"},
             format};
  } else if (command == "audit-classifier") {
    specs = {lexicon,
             {"corpus", Kind::kString, nullptr,
              "Sentence corpus, one sentence per line", true, true},
             {"scorer_endpoint", Kind::kString, nullptr,
              "Scoring service URL"},
             {"mock_valences", Kind::kString, nullptr,
              "JSON token->valence table for an offline mock scorer", false,
              true},
             {"kind", Kind::kString, "toxicity", "toxicity or sentiment"},
             {"sample_size", Kind::kInt, 1000, "Sentences to sample"},
             seed,
             {"group_by", Kind::kString, "category_status",
              "category, category_status, status or phrase"},
             {"plot_data", Kind::kBool, false,
              "Embed bar-chart series in the JSON report"},
             out,
             format};
    specs.insert(specs.end(), transport.begin(), transport.end());
  } else if (command == "probe-mlm") {
    Json subjects = Json::array();
    for (std::string_view s : kDefaultSubjects) subjects.push_back(s);
    specs = {lexicon,
             {"mlm_endpoint", Kind::kString, nullptr,
              "Masked-LM service URL"},
             {"mock_mlm", Kind::kString, nullptr,
              "JSON query->[tokens] table for an offline mock masked LM",
              false, true},
             {"mask_token", Kind::kString, "[MASK]",
              "Backend mask token replacing the blank"},
             {"sentiment_endpoint", Kind::kString, nullptr,
              "Sentiment service URL"},
             {"mock_valences", Kind::kString, nullptr,
              "JSON token->valence table for an offline mock sentiment "
              "scorer",
              false, true},
             {"k", Kind::kInt, 10, "Completions kept per query"},
             {"subjects", Kind::kStringList, subjects,
              "Relation subjects, e.g. \"my friend\""},
             {"exclude", Kind::kStringList, nullptr,
              "Fixed baseline exclusion words (skips the baseline probe)"},
             {"negative_threshold", Kind::kDouble, 0.0,
              "Valency below this counts as negative"},
             {"unique_words", Kind::kBool, false,
              "Count distinct words per category"},
             {"all_statuses", Kind::kBool, false,
              "Probe non-recommended phrases too"},
             {"blank", Kind::kString, std::string(kDefaultBlankMarker),
              "Blank marker literal"},
             {"dump_words", Kind::kBool, false,
              "Print and embed the negative word table"},
             seed,
             out,
             format};
    specs.insert(specs.end(), transport.begin(), transport.end());
  } else if (command == "corpus-odds") {
    const IngestSchema schema;
    specs = {{"input", Kind::kString, nullptr, "Labeled comment CSV", true,
              true},
             {"text_col", Kind::kString, schema.text_col, "Text column"},
             {"toxicity_col", Kind::kString, schema.toxicity_col,
              "Toxicity column"},
             {"mention_col", Kind::kString, schema.mention_col,
              "Mention column"},
             {"id_col", Kind::kString, schema.id_col, "Id column"},
             {"threshold", Kind::kDouble, schema.threshold,
              "Label binarization threshold"},
             seed,
             {"alpha0", Kind::kDouble, 1000.0, "Dirichlet prior scale"},
             {"z_threshold", Kind::kDouble, 1.96, "Significance threshold"},
             {"top_k", Kind::kInt, 100, "Rows reported"},
             {"tags", Kind::kString, nullptr, "Term tag CSV (term,category)",
              false, true},
             {"workers", Kind::kInt, 1, "Counting threads"},
             out,
             format};
  }
  return specs;
}

std::string FlagName(const std::string& key) {
  return absl::StrCat("--", absl::StrReplaceAll(key, {{"_", "-"}}));
}

bool MatchesKind(const Json& value, Kind kind) {
  switch (kind) {
    case Kind::kString:
      return value.is_string();
    case Kind::kInt:
      return value.is_number_integer();
    case Kind::kDouble:
      return value.is_number();
    case Kind::kBool:
      return value.is_boolean();
    case Kind::kStringList:
      if (!value.is_array()) return false;
      for (const Json& v : value) {
        if (!v.is_string()) return false;
      }
      return true;
  }
  return false;
}

// Typed view over a resolved config.
class Settings {
 public:
  explicit Settings(const RunConfig& config) : values_(config.values) {}

  bool Has(const std::string& key) const {
    return values_.contains(key) && !values_[key].is_null();
  }
  std::string String(const std::string& key) const {
    return Has(key) ? values_[key].get<std::string>() : "";
  }
  std::int64_t Int(const std::string& key) const {
    return values_[key].get<std::int64_t>();
  }
  double Double(const std::string& key) const {
    return values_[key].get<double>();
  }
  bool Bool(const std::string& key) const { return values_[key].get<bool>(); }
  std::vector<std::string> Strings(const std::string& key) const {
    return values_[key].get<std::vector<std::string>>();
  }

 private:
  const Json& values_;
};

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) {
    return absl::InvalidArgumentError(absl::StrCat("cannot write ", path));
  }
  return absl::OkStatus();
}

// Keys that never change a report's content: output location, caching and
// transport or threading knobs.
bool IsExecutionOnlyKey(const std::string& key) {
  return key == "out" || key == "cache_dir" || key == "max_concurrency" ||
         key == "timeout_ms" || key == "max_retries" || key == "workers";
}

Json Provenance(const RunConfig& config) {
  Json embedded = Json::object();
  for (const auto& [key, value] : config.values.items()) {
    if (IsExecutionOnlyKey(key)) continue;
    embedded[key] = value;
  }
  return {{"tool", "biaslens"},
          {"command", config.command},
          {"config", embedded},
          {"config_hash", Sha256Hex(embedded.dump())}};
}

absl::Status CheckFormat(const std::string& format, bool allow_plot_data) {
  if (format == "csv" || format == "json" ||
      (allow_plot_data && format == "plot-data")) {
    return absl::OkStatus();
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unsupported --format \"", format, "\""));
}

const char* EnvValue(const std::map<std::string, std::string>& env,
                     const char* name) {
  const auto it = env.find(name);
  return it == env.end() ? nullptr : it->second.c_str();
}

HttpClientOptions TransportOptions(const Settings& s, std::string endpoint,
                                   const std::map<std::string, std::string>& env) {
  HttpClientOptions options;
  options.endpoint = std::move(endpoint);
  options.timeout = std::chrono::milliseconds(s.Int("timeout_ms"));
  options.max_retries = static_cast<int>(s.Int("max_retries"));
  options.max_concurrency = static_cast<int>(s.Int("max_concurrency"));
  if (const char* token = EnvValue(env, kApiTokenEnv)) {
    options.bearer_token = token;
  }
  return options;
}

// Mock or remote scorer per the config, cached when a cache directory is
// configured.
absl::StatusOr<std::shared_ptr<TextScorer>> BuildScorer(
    const Settings& s, const std::string& endpoint_key, ScoreKind kind,
    const std::map<std::string, std::string>& env) {
  const bool has_mock = s.Has("mock_valences");
  const bool has_endpoint = s.Has(endpoint_key);
  if (has_mock == has_endpoint) {
    return absl::InvalidArgumentError(absl::StrCat(
        "exactly one of ", FlagName(endpoint_key), " and --mock-valences is "
        "required"));
  }
  std::shared_ptr<TextScorer> scorer;
  if (has_mock) {
    absl::StatusOr<std::string> text = ReadFile(s.String("mock_valences"));
    if (!text.ok()) return text.status();
    absl::StatusOr<std::map<std::string, double>> table =
        ParseValenceTable(*text);
    if (!table.ok()) return table.status();
    absl::StatusOr<std::unique_ptr<MockScorer>> mock =
        MockScorer::Create(*std::move(table), kind);
    if (!mock.ok()) return mock.status();
    scorer = std::move(*mock);
  } else {
    absl::StatusOr<std::unique_ptr<HttpScorer>> http = HttpScorer::Create(
        TransportOptions(s, s.String(endpoint_key), env), kind);
    if (!http.ok()) return http.status();
    scorer = std::move(*http);
  }
  const std::filesystem::path cache_dir =
      ResolveCacheDir(s.String("cache_dir"), EnvValue(env, kCacheDirEnv));
  if (!cache_dir.empty()) {
    scorer = std::make_shared<CachingScorer>(std::move(scorer),
                                             ScoreCache(cache_dir));
  }
  return scorer;
}

absl::Status RunLexiconValidate(const RunConfig& config, std::ostream& out) {
  const Settings s(config);
  absl::Status format = CheckFormat(s.String("format"), false);
  if (!format.ok()) return format;
  absl::StatusOr<Lexicon> lexicon = LoadLexiconFile(s.String("lexicon"));
  if (!lexicon.ok()) return lexicon.status();

  std::set<Category> categories;
  std::size_t recommended = 0;
  for (const DisabilityPhrase& p : lexicon->phrases()) {
    categories.insert(p.category);
    if (p.status == PhraseStatus::kRecommended) ++recommended;
  }
  const std::size_t non_recommended = lexicon->size() - recommended;
  out << lexicon->size() << " phrases, " << categories.size()
      << " categories, " << recommended << " recommended / "
      << non_recommended << " non-recommended\n";

  if (s.Has("out")) {
    std::string content;
    if (s.String("format") == "csv") {
      content = "category,status,n\n";
      for (Category c : kAllCategories) {
        for (PhraseStatus st : kAllStatuses) {
          absl::StrAppend(&content, Sv(CategoryName(c)), ",", Sv(StatusName(st)), ",",
                          PhrasesBy(*lexicon, c, st).size(), "\n");
        }
      }
    } else {
      Json counts = Json::array();
      for (Category c : kAllCategories) {
        for (PhraseStatus st : kAllStatuses) {
          counts.push_back({{"category", CategoryName(c)},
                            {"status", StatusName(st)},
                            {"n", PhrasesBy(*lexicon, c, st).size()}});
        }
      }
      Json report = {{"provenance", Provenance(config)},
                     {"lexicon_hash", lexicon->Hash()},
                     {"phrases", lexicon->size()},
                     {"categories", categories.size()},
                     {"recommended", recommended},
                     {"non_recommended", non_recommended},
                     {"counts", std::move(counts)}};
      content = report.dump(2) + "\n";
    }
    return WriteFile(s.String("out"), content);
  }
  return absl::OkStatus();
}

absl::Status RunAuditClassifier(const RunConfig& config,
                                const std::map<std::string, std::string>& env,
                                std::ostream& out, std::ostream& err) {
  const Settings s(config);
  absl::Status format = CheckFormat(s.String("format"), true);
  if (!format.ok()) return format;
  const std::optional<ScoreKind> kind = ParseScoreKind(s.String("kind"));
  if (!kind) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown --kind \"", s.String("kind"), "\""));
  }
  const std::optional<GroupBy> group_by = ParseGroupBy(s.String("group_by"));
  if (!group_by) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown --group-by \"", s.String("group_by"), "\""));
  }
  if (s.Int("sample_size") < 1) {
    return absl::InvalidArgumentError("--sample-size must be >= 1");
  }
  absl::StatusOr<Lexicon> lexicon = LoadLexiconFile(s.String("lexicon"));
  if (!lexicon.ok()) return lexicon.status();
  absl::StatusOr<std::string> corpus_text = ReadFile(s.String("corpus"));
  if (!corpus_text.ok()) return corpus_text.status();
  std::vector<std::string> corpus;
  {
    std::istringstream lines(*corpus_text);
    for (std::string line; std::getline(lines, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      corpus.push_back(std::move(line));
    }
  }
  absl::StatusOr<std::shared_ptr<TextScorer>> scorer =
      BuildScorer(s, "scorer_endpoint", *kind, env);
  if (!scorer.ok()) return scorer.status();

  AuditOptions options;
  options.sample_size = static_cast<std::size_t>(s.Int("sample_size"));
  options.seed = static_cast<std::uint64_t>(s.Int("seed"));
  options.max_concurrency = static_cast<int>(s.Int("max_concurrency"));
  absl::StatusOr<AuditResult> result =
      RunAudit(corpus, *lexicon, **scorer, options);
  if (!result.ok()) return result.status();
  for (const std::string& warning : result->warnings) {
    err << "warning: " << warning << "\n";
  }
  absl::StatusOr<std::vector<AuditRow>> rows =
      Aggregate(result->diffs, *group_by);
  if (!rows.ok()) return rows.status();

  Json provenance = Provenance(config);
  provenance["seed"] = options.seed;
  provenance["lexicon_hash"] = lexicon->Hash();
  provenance["scorer"] = (*scorer)->Identity();
  std::string content;
  if (s.String("format") == "csv") {
    content = AuditCsv(*rows);
  } else if (s.String("format") == "plot-data") {
    content = PlotDataCsv(*rows);
  } else {
    content =
        AuditJson(*rows, *result, provenance, s.Bool("plot_data")).dump(2) +
        "\n";
  }
  absl::Status written = WriteFile(s.String("out"), content);
  if (!written.ok()) return written;

  std::vector<AuditRow> top = *rows;
  std::stable_sort(top.begin(), top.end(),
                   [](const AuditRow& a, const AuditRow& b) {
                     return a.mean_diff > b.mean_diff;
                   });
  top.resize(std::min<std::size_t>(top.size(), 3));
  out << "audit-classifier: " << result->eligible << " of "
      << result->corpus_size << " sentences contain a pronoun; "
      << result->sampled << " sampled, " << result->skipped.size()
      << " skipped; " << result->diffs.size() << " score diffs over "
      << lexicon->size() << " phrases grouped by "
      << GroupByName(*group_by) << " into " << rows->size()
      << " rows. Largest mean diffs: "
      << absl::StrJoin(top, ", ",
                       [](std::string* o, const AuditRow& r) {
                         absl::StrAppend(o, r.group_key, " ",
                                         FormatNumber(r.mean_diff));
                       })
      << ". Report written to " << s.String("out") << ".\n";
  return absl::OkStatus();
}

absl::Status RunProbeMlm(const RunConfig& config,
                         const std::map<std::string, std::string>& env,
                         std::ostream& out) {
  const Settings s(config);
  absl::Status format = CheckFormat(s.String("format"), false);
  if (!format.ok()) return format;
  absl::StatusOr<Lexicon> lexicon = LoadLexiconFile(s.String("lexicon"));
  if (!lexicon.ok()) return lexicon.status();

  std::unique_ptr<MaskedLm> backend;
  if (s.Has("mock_mlm") == s.Has("mlm_endpoint")) {
    return absl::InvalidArgumentError(
        "exactly one of --mlm-endpoint and --mock-mlm is required");
  }
  if (s.Has("mock_mlm")) {
    absl::StatusOr<std::string> text = ReadFile(s.String("mock_mlm"));
    if (!text.ok()) return text.status();
    absl::StatusOr<std::unique_ptr<MockMaskedLm>> mock =
        ParseMockMaskedLm(*text);
    if (!mock.ok()) return mock.status();
    backend = std::move(*mock);
  } else {
    absl::StatusOr<std::unique_ptr<HttpMaskedLm>> http = HttpMaskedLm::Create(
        TransportOptions(s, s.String("mlm_endpoint"), env),
        s.String("mask_token"));
    if (!http.ok()) return http.status();
    backend = std::move(*http);
  }
  absl::StatusOr<std::shared_ptr<TextScorer>> sentiment =
      BuildScorer(s, "sentiment_endpoint", ScoreKind::kSentiment, env);
  if (!sentiment.ok()) return sentiment.status();

  ProbeOptions options;
  options.subjects = s.Strings("subjects");
  options.k = static_cast<int>(s.Int("k"));
  options.negative_threshold = s.Double("negative_threshold");
  if (s.Bool("all_statuses")) options.status = std::nullopt;
  options.unique_words = s.Bool("unique_words");
  options.blank_marker = s.String("blank");
  options.max_concurrency = static_cast<int>(s.Int("max_concurrency"));
  if (s.Has("exclude")) {
    const std::vector<std::string> words = s.Strings("exclude");
    options.exclusion = std::set<std::string>(words.begin(), words.end());
  }
  absl::StatusOr<ProbeResult> result =
      RunProbe(*backend, *lexicon, **sentiment, options);
  if (!result.ok()) return result.status();

  Json provenance = Provenance(config);
  provenance["seed"] = s.Int("seed");
  provenance["lexicon_hash"] = lexicon->Hash();
  provenance["mlm"] = backend->Identity();
  provenance["sentiment"] = (*sentiment)->Identity();
  const std::string content =
      s.String("format") == "csv"
          ? ProbeCsv(result->rates)
          : ProbeJson(*result, provenance, s.Bool("dump_words")).dump(2) + "\n";
  absl::Status written = WriteFile(s.String("out"), content);
  if (!written.ok()) return written;

  out << "probe-mlm: " << result->queries << " queries, "
      << result->skipped.size() << " skipped, " << result->records.size()
      << " completions, " << result->exclusion.size()
      << " baseline-excluded words. Negative fraction by category: "
      << absl::StrJoin(result->rates, ", ",
                       [](std::string* o, const CategoryNegativeRate& r) {
                         absl::StrAppend(o, Sv(CategoryName(r.category)), " ",
                                         FormatNumber(r.negative_fraction));
                       })
      << ". Report written to " << s.String("out") << ".\n";
  if (s.Bool("dump_words")) {
    out << NegativeWordsCsv(NegativeWordTable(result->records));
  }
  return absl::OkStatus();
}

absl::Status RunCorpusOdds(const RunConfig& config, std::ostream& out) {
  const Settings s(config);
  absl::Status format = CheckFormat(s.String("format"), false);
  if (!format.ok()) return format;
  if (!(s.Double("alpha0") > 0.0)) {
    return absl::InvalidArgumentError("--alpha0 must be positive");
  }
  if (s.Int("top_k") < 0) {
    return absl::InvalidArgumentError("--top-k must be >= 0");
  }
  IngestSchema schema;
  schema.text_col = s.String("text_col");
  schema.toxicity_col = s.String("toxicity_col");
  schema.mention_col = s.String("mention_col");
  schema.id_col = s.String("id_col");
  schema.threshold = s.Double("threshold");
  std::ifstream input(s.String("input"), std::ios::binary);
  if (!input) {
    return absl::NotFoundError(absl::StrCat("cannot open ", s.String("input")));
  }
  absl::StatusOr<IngestResult> ingest = Ingest(input, schema);
  if (!ingest.ok()) return ingest.status();

  std::map<std::string, std::string> tags;
  if (s.Has("tags")) {
    std::ifstream tag_file(s.String("tags"), std::ios::binary);
    if (!tag_file) {
      return absl::NotFoundError(absl::StrCat("cannot open ", s.String("tags")));
    }
    absl::StatusOr<std::map<std::string, std::string>> loaded =
        LoadTagFile(tag_file);
    if (!loaded.ok()) return loaded.status();
    tags = *std::move(loaded);
  }
  const std::uint64_t seed = static_cast<std::uint64_t>(s.Int("seed"));
  absl::StatusOr<CorpusOddsResult> result =
      AnalyzeCorpus(ingest->comments, seed, s.Double("alpha0"),
                    static_cast<int>(s.Int("workers")));
  if (!result.ok()) return result.status();
  const std::vector<TermRow> rows =
      TopTerms(result->results, s.Double("z_threshold"),
               static_cast<std::size_t>(s.Int("top_k")), tags);

  Json provenance = Provenance(config);
  provenance["seed"] = seed;
  provenance["alpha0"] = s.Double("alpha0");
  const std::string content =
      s.String("format") == "csv"
          ? OddsCsv(rows)
          : OddsJson(rows, *result, *ingest, provenance).dump(2) + "\n";
  absl::Status written = WriteFile(s.String("out"), content);
  if (!written.ok()) return written;

  std::vector<std::string> head;
  for (std::size_t i = 0; i < std::min<std::size_t>(rows.size(), 5); ++i) {
    head.push_back(
        absl::StrCat(rows[i].odds.term, " ", FormatNumber(rows[i].odds.z)));
  }
  out << "corpus-odds: " << ingest->comments.size() << " labeled comments ("
      << ingest->dropped_empty_text << " empty, "
      << ingest->dropped_unlabeled << " unlabeled dropped); balanced to "
      << result->sample.total() << " comments (4 x "
      << result->sample.cell_size << "); " << result->results.size()
      << " terms scored, " << rows.size() << " significant rows reported"
      << (head.empty() ? "" : ". Top: ") << absl::StrJoin(head, ", ")
      << ". Report written to " << s.String("out") << ".\n";
  return absl::OkStatus();
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
      return kExitValidation;
    case absl::StatusCode::kUnavailable:
    case absl::StatusCode::kDeadlineExceeded:
    case absl::StatusCode::kDataLoss:
      return kExitTransport;
    default:
      return kExitData;
  }
}

absl::StatusOr<nlohmann::ordered_json> LoadConfig(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  try {
    Json parsed = Json::parse(*text);
    if (!parsed.is_object()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": config must be a JSON object"));
    }
    return parsed;
  } catch (const Json::parse_error& e) {
    return absl::InvalidArgumentError(absl::StrCat(
        path, ": malformed JSON at byte ", e.byte, ": ", e.what()));
  }
}

absl::StatusOr<RunConfig> ResolveConfig(const std::string& command,
                                        const nlohmann::ordered_json& file,
                                        const nlohmann::ordered_json& flags) {
  const std::vector<OptionSpec> specs = OptionsFor(command);
  if (specs.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown command \"", command, "\""));
  }
  RunConfig config;
  config.command = command;
  config.values = Json::object();
  for (const OptionSpec& spec : specs) {
    config.values[spec.key] = spec.default_value;
  }
  if (file.is_object()) {
    for (const auto& [key, value] : file.items()) {
      if (key == "command") {
        if (value != command) {
          config.warnings.push_back(absl::StrCat(
              "config was written for command ", value.dump(), ", not ",
              command));
        }
        continue;
      }
      if (!config.values.contains(key)) {
        config.warnings.push_back(
            absl::StrCat("ignoring unknown config key \"", key, "\""));
        continue;
      }
      config.values[key] = value;
    }
  }
  for (const auto& [key, value] : flags.items()) config.values[key] = value;

  for (const OptionSpec& spec : specs) {
    const Json& value = config.values[spec.key];
    if (value.is_null()) {
      if (spec.required) {
        return absl::InvalidArgumentError(
            absl::StrCat("missing required ", FlagName(spec.key)));
      }
      continue;
    }
    if (!MatchesKind(value, spec.kind)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "config value for \"", spec.key, "\" has the wrong type: ",
          value.dump()));
    }
    if (spec.kind == Kind::kInt && value.get<std::int64_t>() < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat(FlagName(spec.key), " must be non-negative"));
    }
    if (spec.input_path &&
        !std::filesystem::exists(value.get<std::string>())) {
      return absl::NotFoundError(absl::StrCat(
          FlagName(spec.key), ": no such file ", value.get<std::string>()));
    }
  }
  return config;
}

int RunCli(const std::vector<std::string>& args,
           const std::map<std::string, std::string>& env, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"biaslens: audit text models for disability bias", "biaslens"};
  app.require_subcommand(1);

  struct Bound {
    std::string command;
    CLI::App* app = nullptr;
    std::string config_path;
    std::map<std::string, std::string> strings;
    std::map<std::string, std::vector<std::string>> lists;
    std::map<std::string, bool> bools;
    std::map<std::string, CLI::Option*> options;
  };
  std::vector<std::unique_ptr<Bound>> commands;
  const std::vector<std::pair<std::string, std::string>> kCommands = {
      {"lexicon-validate", "Validate a lexicon file and print its counts"},
      {"audit-classifier", "Score perturbed sentences with a text classifier"},
      {"probe-mlm", "Probe a masked language model with phrase templates"},
      {"corpus-odds", "Log-odds of terms in comments mentioning disability"},
  };
  for (const auto& [name, description] : kCommands) {
    auto bound = std::make_unique<Bound>();
    bound->command = name;
    bound->app = app.add_subcommand(name, description);
    bound->app->add_option("--config", bound->config_path,
                           "JSON config; flags override its values");
    for (const OptionSpec& spec : OptionsFor(name)) {
      const std::string flag = FlagName(spec.key);
      CLI::Option* option = nullptr;
      switch (spec.kind) {
        case Kind::kBool:
          option = bound->app->add_flag(flag, bound->bools[spec.key], spec.help);
          break;
        case Kind::kStringList:
          // A bare list flag gives an empty list, e.g. no exclusions.
          option = bound->app
                       ->add_option(flag, bound->lists[spec.key], spec.help)
                       ->expected(0, CLI::detail::expected_max_vector_size);
          break;
        default:
          option = bound->app->add_option(flag, bound->strings[spec.key],
                                          spec.help);
          break;
      }
      bound->options[spec.key] = option;
    }
    commands.push_back(std::move(bound));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  Bound* selected = nullptr;
  for (auto& bound : commands) {
    if (bound->app->parsed()) selected = bound.get();
  }
  const auto fail = [&err](const absl::Status& status) {
    err << "error: " << status.message() << "\n";
    return ExitCodeFor(status);
  };

  Json flags = Json::object();
  for (const OptionSpec& spec : OptionsFor(selected->command)) {
    if (selected->options[spec.key]->count() == 0) continue;
    const std::string& raw = selected->strings[spec.key];
    switch (spec.kind) {
      case Kind::kBool:
        flags[spec.key] = selected->bools[spec.key];
        break;
      case Kind::kStringList: {
        std::vector<std::string> items = selected->lists[spec.key];
        std::erase(items, std::string());
        flags[spec.key] = items;
        break;
      }
      case Kind::kString:
        flags[spec.key] = raw;
        break;
      case Kind::kInt: {
        std::int64_t value = 0;
        if (!absl::SimpleAtoi(raw, &value)) {
          return fail(absl::InvalidArgumentError(absl::StrCat(
              FlagName(spec.key), " expects an integer, got \"", raw, "\"")));
        }
        flags[spec.key] = value;
        break;
      }
      case Kind::kDouble: {
        double value = 0.0;
        if (!absl::SimpleAtod(raw, &value)) {
          return fail(absl::InvalidArgumentError(absl::StrCat(
              FlagName(spec.key), " expects a number, got \"", raw, "\"")));
        }
        flags[spec.key] = value;
        break;
      }
    }
  }

  Json file = nullptr;
  if (!selected->config_path.empty()) {
    absl::StatusOr<Json> loaded = LoadConfig(selected->config_path);
    if (!loaded.ok()) return fail(loaded.status());
    file = *std::move(loaded);
  }
  absl::StatusOr<RunConfig> config =
      ResolveConfig(selected->command, file, flags);
  if (!config.ok()) return fail(config.status());
  for (const std::string& warning : config->warnings) {
    err << "warning: " << warning << "\n";
  }

  absl::Status status;
  if (config->command == "lexicon-validate") {
    status = RunLexiconValidate(*config, out);
  } else if (config->command == "audit-classifier") {
    status = RunAuditClassifier(*config, env, out, err);
  } else if (config->command == "probe-mlm") {
    status = RunProbeMlm(*config, env, out);
  } else {
    status = RunCorpusOdds(*config, out);
  }
  if (!status.ok()) return fail(status);
  return kExitOk;
}

}  // namespace biaslens
