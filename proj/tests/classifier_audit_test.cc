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

#include "biaslens/classifier_audit.h"

#include <cmath>
#include <fstream>
#include <numeric>

#include "biaslens/report.h"
#include "fixtures.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace biaslens {
namespace {

using ::testing::HasSubstr;

class ConstantScorer : public TextScorer {
 public:
  explicit ConstantScorer(double value) : value_(value) {}
  ScoreKind kind() const override { return ScoreKind::kToxicity; }
  std::string Identity() const override { return "constant"; }
  absl::StatusOr<double> ScoreRaw(std::string_view) override { return value_; }

 private:
  double value_;
};

// Fails for any text containing "blind".
class FlakyScorer : public TextScorer {
 public:
  ScoreKind kind() const override { return ScoreKind::kToxicity; }
  std::string Identity() const override { return "flaky"; }
  absl::StatusOr<double> ScoreRaw(std::string_view text) override {
    if (text.find("blind") != std::string_view::npos) {
      return absl::UnavailableError("connection refused");
    }
    return 0.2;
  }
};

Lexicon TwoPhrases() {
  return *Lexicon::Create({
      {"a deaf person", Category::kHearing, PhraseStatus::kRecommended},
      {"a cripple", Category::kMobility, PhraseStatus::kNonRecommended},
  });
}

std::unique_ptr<MockScorer> FixtureScorer() {
  const std::map<std::string, double> table = *ParseValenceTable(
      testing::ReadFile(testing::SourcePath("tests/golden/audit_valences.json")));
  return *MockScorer::Create(table, ScoreKind::kToxicity);
}

std::vector<std::string> FixtureCorpus() {
  return testing::ReadLines(testing::SourcePath("tests/golden/audit_corpus.txt"));
}

TEST(RunAuditTest, ConstantScorerGivesZeroDiffs) {
  ConstantScorer scorer(0.3);
  absl::StatusOr<AuditResult> result =
      RunAudit({"He is here."}, TwoPhrases(), scorer, AuditOptions{});
  ASSERT_TRUE(result.ok()) << result.status();
  ASSERT_EQ(result->diffs.size(), 2);
  for (const ScoreDiff& d : result->diffs) {
    EXPECT_EQ(d.diff, 0.0);
    EXPECT_EQ(d.original_score, 0.3);
  }
}

TEST(RunAuditTest, SingleHitMockDiff) {
  std::unique_ptr<MockScorer> scorer =
      *MockScorer::Create({{"deaf", 0.5}}, ScoreKind::kToxicity);
  absl::StatusOr<AuditResult> result =
      RunAudit({"He is here."}, TwoPhrases(), *scorer, AuditOptions{});
  ASSERT_TRUE(result.ok());
  const ScoreDiff& deaf = result->diffs[0];
  EXPECT_EQ(deaf.phrase.text, "a deaf person");
  EXPECT_EQ(deaf.original_score, 0.0);
  EXPECT_EQ(deaf.perturbed_score, 0.5);
  EXPECT_EQ(deaf.diff, 0.5);
  EXPECT_EQ(result->diffs[1].diff, 0.0);
}

TEST(RunAuditTest, SaturatedSampleAuditsAllEligibleAndWarns) {
  ConstantScorer scorer(0.1);
  AuditOptions options;
  options.sample_size = 10;
  absl::StatusOr<AuditResult> result = RunAudit(
      {"He left.", "Nobody here.", "She stayed.", "They went."}, TwoPhrases(),
      scorer, options);
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result->corpus_size, 4);
  EXPECT_EQ(result->without_pronoun, 2);
  EXPECT_EQ(result->eligible, 2);
  EXPECT_EQ(result->sampled, 2);
  EXPECT_EQ(result->diffs.size(), 4);
  ASSERT_EQ(result->warnings.size(), 1);
  EXPECT_THAT(result->warnings[0], HasSubstr("10"));
}

TEST(RunAuditTest, NoEligibleSentenceIsAnError) {
  ConstantScorer scorer(0.1);
  EXPECT_EQ(RunAudit({"Nobody here.", "The theme."}, TwoPhrases(), scorer,
                     AuditOptions{})
                .status()
                .code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(RunAudit({}, TwoPhrases(), scorer, AuditOptions{}).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(RunAuditTest, ScorerFailureSkipsWholeSentence) {
  FlakyScorer scorer;
  absl::StatusOr<AuditResult> result = RunAudit(
      {"He left.", "The blind man said he left."}, TwoPhrases(), scorer,
      AuditOptions{});
  ASSERT_TRUE(result.ok());
  ASSERT_EQ(result->skipped.size(), 1);
  EXPECT_EQ(result->skipped[0].sentence_id, 1);
  EXPECT_EQ(result->diffs.size(), 2);
  for (const ScoreDiff& d : result->diffs) EXPECT_EQ(d.sentence_id, 0);
}

TEST(RunAuditTest, AllSentencesFailingPropagatesError) {
  FlakyScorer scorer;
  EXPECT_EQ(RunAudit({"The blind man said he left."}, TwoPhrases(), scorer,
                     AuditOptions{})
                .status()
                .code(),
            absl::StatusCode::kUnavailable);
}

TEST(RunAuditTest, MatchesGoldenDiffs) {
  const std::vector<testing::GoldenDiff> golden = testing::LoadGoldenDiffs();
  ASSERT_EQ(golden.size(), 17 * 56);
  std::unique_ptr<MockScorer> scorer = FixtureScorer();
  AuditOptions options;
  options.sample_size = 1000;
  absl::StatusOr<AuditResult> result =
      RunAudit(FixtureCorpus(), testing::BundledLexicon(), *scorer, options);
  ASSERT_TRUE(result.ok()) << result.status();
  EXPECT_EQ(result->corpus_size, 20);
  EXPECT_EQ(result->eligible, 17);
  ASSERT_EQ(result->diffs.size(), golden.size());
  for (std::size_t i = 0; i < golden.size(); ++i) {
    EXPECT_EQ(result->diffs[i].sentence_id, golden[i].sentence_id) << i;
    EXPECT_EQ(result->diffs[i].phrase.text, golden[i].phrase) << i;
    EXPECT_NEAR(result->diffs[i].diff, golden[i].diff, 1e-12) << i;
    EXPECT_EQ(result->diffs[i].diff,
              result->diffs[i].perturbed_score - result->diffs[i].original_score);
  }
}

TEST(RunAuditTest, SamplingIsSeededAndUniformWithoutReplacement) {
  ConstantScorer scorer(0.0);
  std::vector<std::string> corpus;
  for (int i = 0; i < 50; ++i) corpus.push_back("He said " + std::to_string(i) + ".");
  AuditOptions options;
  options.sample_size = 5;
  const auto ids = [&](std::uint64_t seed) {
    options.seed = seed;
    std::set<std::size_t> out;
    const AuditResult result = *RunAudit(corpus, TwoPhrases(), scorer, options);
    for (const ScoreDiff& d : result.diffs) {
      out.insert(d.sentence_id);
    }
    return out;
  };
  EXPECT_EQ(ids(1), ids(1));
  EXPECT_EQ(ids(1).size(), 5);
  EXPECT_NE(ids(1), ids(2));
}

TEST(RunAuditTest, ConcurrencyDoesNotChangeResults) {
  std::unique_ptr<MockScorer> scorer = FixtureScorer();
  AuditOptions options;
  options.sample_size = 12;
  options.seed = 42;
  options.max_concurrency = 1;
  const AuditResult serial =
      *RunAudit(FixtureCorpus(), testing::BundledLexicon(), *scorer, options);
  options.max_concurrency = 8;
  const AuditResult parallel =
      *RunAudit(FixtureCorpus(), testing::BundledLexicon(), *scorer, options);
  ASSERT_EQ(serial.diffs.size(), parallel.diffs.size());
  for (std::size_t i = 0; i < serial.diffs.size(); ++i) {
    EXPECT_EQ(serial.diffs[i].sentence_id, parallel.diffs[i].sentence_id);
    EXPECT_EQ(serial.diffs[i].diff, parallel.diffs[i].diff);
  }
  const Json provenance = {{"seed", 42}};
  const auto report = [&](const AuditResult& r) {
    return AuditJson(*Aggregate(r.diffs, GroupBy::kCategoryStatus), r, provenance,
                     true)
        .dump(2);
  };
  EXPECT_EQ(report(serial), report(parallel));
}

ScoreDiff Diff(double value, const std::string& phrase = "a deaf person",
               Category category = Category::kHearing,
               PhraseStatus status = PhraseStatus::kRecommended) {
  ScoreDiff d;
  d.phrase = {phrase, category, status};
  d.diff = value;
  return d;
}

TEST(AggregateTest, MeanAndStandardError) {
  absl::StatusOr<std::vector<AuditRow>> rows =
      Aggregate({Diff(0.1), Diff(0.2), Diff(0.3)}, GroupBy::kCategory);
  ASSERT_TRUE(rows.ok());
  ASSERT_EQ(rows->size(), 1);
  const AuditRow& row = (*rows)[0];
  EXPECT_EQ(row.group_key, "hearing");
  EXPECT_NEAR(row.mean_diff, 0.2, 1e-15);
  EXPECT_NEAR(row.std_err, 0.1 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(row.std_err, 0.057735026918962, 1e-12);
  EXPECT_EQ(row.ci95_half_width, 1.96 * row.std_err);
  EXPECT_EQ(row.n, 3);
  EXPECT_FALSE(row.single_sample);
}

TEST(AggregateTest, SingleDiffIsFlagged) {
  const std::vector<AuditRow> rows = *Aggregate({Diff(0.4)}, GroupBy::kPhrase);
  ASSERT_EQ(rows.size(), 1);
  EXPECT_EQ(rows[0].group_key, "a deaf person");
  EXPECT_EQ(rows[0].mean_diff, 0.4);
  EXPECT_EQ(rows[0].std_err, 0.0);
  EXPECT_EQ(rows[0].ci95_half_width, 0.0);
  EXPECT_TRUE(rows[0].single_sample);
}

TEST(AggregateTest, RowsSortedByKey) {
  const std::vector<ScoreDiff> diffs = {
      Diff(0.5, "a cripple", Category::kMobility, PhraseStatus::kNonRecommended),
      Diff(0.1),
      Diff(0.2, "a wheelchair user", Category::kMobility,
           PhraseStatus::kRecommended)};
  const std::vector<AuditRow> rows = *Aggregate(diffs, GroupBy::kCategoryStatus);
  ASSERT_EQ(rows.size(), 3);
  EXPECT_EQ(rows[0].group_key, "hearing/recommended");
  EXPECT_EQ(rows[1].group_key, "mobility/non_recommended");
  EXPECT_EQ(rows[2].group_key, "mobility/recommended");
  const std::vector<AuditRow> by_status = *Aggregate(diffs, GroupBy::kStatus);
  ASSERT_EQ(by_status.size(), 2);
  EXPECT_EQ(by_status[0].group_key, "non_recommended");
  EXPECT_EQ(by_status[1].group_key, "recommended");
}

TEST(AggregateTest, EmptyInputIsAnError) {
  EXPECT_EQ(Aggregate({}, GroupBy::kCategory).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(AggregateTest, ConstantScorerGivesZeroRows) {
  ConstantScorer scorer(0.7);
  const AuditResult result =
      *RunAudit(FixtureCorpus(), testing::BundledLexicon(), scorer, AuditOptions{});
  for (GroupBy g : {GroupBy::kCategory, GroupBy::kCategoryStatus, GroupBy::kPhrase}) {
    const std::vector<AuditRow> rows = *Aggregate(result.diffs, g);
    for (const AuditRow& row : rows) {
      EXPECT_EQ(row.mean_diff, 0.0) << row.group_key;
      EXPECT_EQ(row.std_err, 0.0) << row.group_key;
      EXPECT_EQ(row.ci95_half_width, 0.0) << row.group_key;
    }
  }
}

TEST(AggregateTest, WeightedMeanOfGroupsEqualsOverallMean) {
  std::unique_ptr<MockScorer> scorer = FixtureScorer();
  const AuditResult result =
      *RunAudit(FixtureCorpus(), testing::BundledLexicon(), *scorer, AuditOptions{});
  double total = 0.0;
  for (const ScoreDiff& d : result.diffs) total += d.diff;
  const double overall = total / result.diffs.size();
  for (GroupBy g : {GroupBy::kCategory, GroupBy::kCategoryStatus, GroupBy::kStatus,
                    GroupBy::kPhrase}) {
    double weighted = 0.0;
    std::size_t n = 0;
    const std::vector<AuditRow> rows = *Aggregate(result.diffs, g);
    for (const AuditRow& row : rows) {
      weighted += row.mean_diff * row.n;
      n += row.n;
    }
    EXPECT_EQ(n, result.diffs.size());
    EXPECT_NEAR(weighted / n, overall, 1e-12) << GroupByName(g);
  }
}

TEST(AggregateTest, StatusRowEqualsMeanOfPerSentenceMeans) {
  std::unique_ptr<MockScorer> scorer = FixtureScorer();
  const AuditResult result =
      *RunAudit(FixtureCorpus(), testing::BundledLexicon(), *scorer, AuditOptions{});
  std::map<std::size_t, std::pair<double, int>> per_sentence;
  for (const ScoreDiff& d : result.diffs) {
    if (d.phrase.status != PhraseStatus::kRecommended) continue;
    per_sentence[d.sentence_id].first += d.diff;
    ++per_sentence[d.sentence_id].second;
  }
  double sum = 0.0;
  for (const auto& [id, acc] : per_sentence) sum += acc.first / acc.second;
  const std::vector<AuditRow> rows = *Aggregate(result.diffs, GroupBy::kStatus);
  ASSERT_EQ(rows[1].group_key, "recommended");
  EXPECT_NEAR(rows[1].mean_diff, sum / per_sentence.size(), 1e-12);
}

TEST(GroupByTest, NamesRoundTrip) {
  for (GroupBy g : {GroupBy::kCategory, GroupBy::kCategoryStatus, GroupBy::kStatus,
                    GroupBy::kPhrase}) {
    EXPECT_EQ(ParseGroupBy(GroupByName(g)), g);
  }
  EXPECT_EQ(ParseGroupBy("nope"), std::nullopt);
}

TEST(AuditReportTest, CsvLayout) {
  const std::vector<AuditRow> rows = *Aggregate({Diff(0.5), Diff(0.5)}, GroupBy::kCategory);
  const std::string csv = AuditCsv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "group_key,mean_diff,std_err,ci95,n");
  EXPECT_THAT(csv, HasSubstr("\nhearing,0.5,0,0,2\n"));
  EXPECT_THAT(PlotDataCsv(rows), HasSubstr("key,value,error\nhearing,0.5,0\n"));
}

}  // namespace
}  // namespace biaslens
