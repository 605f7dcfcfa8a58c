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
#include <random>
#include <sstream>

#include "biaslens/report.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "log_odds_reference.h"

namespace biaslens {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;
using ::testing::IsEmpty;

absl::StatusOr<IngestResult> IngestText(const std::string& csv,
                                        const IngestSchema& schema = {}) {
  std::istringstream in(csv);
  return Ingest(in, schema);
}

TEST(IngestTest, ThresholdRule) {
  absl::StatusOr<IngestResult> result = IngestText(
      "id,comment_text,target,psychiatric_or_mental_illness\n"
      "a,x,0.8,1.0\n"
      "b,y,0.5,0.49\n"
      "c,z,0.4999,0\n");
  ASSERT_TRUE(result.ok()) << result.status();
  ASSERT_EQ(result->comments.size(), 3);
  EXPECT_EQ(result->comments[0].id, "a");
  EXPECT_TRUE(result->comments[0].toxic);
  EXPECT_TRUE(result->comments[0].has_mention);
  EXPECT_TRUE(result->comments[1].toxic);
  EXPECT_FALSE(result->comments[1].has_mention);
  EXPECT_FALSE(result->comments[2].toxic);
}

TEST(IngestTest, DropsEmptyTextAndUnlabeledRows) {
  absl::StatusOr<IngestResult> result = IngestText(
      "comment_text,target,psychiatric_or_mental_illness,other\n"
      "\"hello, world\",0.1,0.0,q\n"
      ",0.9,1,q\n"
      "unlabeled,0.9,,\n");
  ASSERT_TRUE(result.ok()) << result.status();
  ASSERT_EQ(result->comments.size(), 1);
  EXPECT_EQ(result->comments[0].id, "1");
  EXPECT_EQ(result->comments[0].text, "hello, world");
  EXPECT_EQ(result->dropped_empty_text, 1);
  EXPECT_EQ(result->dropped_unlabeled, 1);
}

TEST(IngestTest, CustomSchema) {
  IngestSchema schema;
  schema.text_col = "body";
  schema.toxicity_col = "tox";
  schema.mention_col = "dis";
  schema.threshold = 0.7;
  absl::StatusOr<IngestResult> result =
      IngestText("body,tox,dis\nfoo,0.6,0.7\n", schema);
  ASSERT_TRUE(result.ok());
  EXPECT_FALSE(result->comments[0].toxic);
  EXPECT_TRUE(result->comments[0].has_mention);
}

TEST(IngestTest, SchemaErrors) {
  absl::StatusOr<IngestResult> missing =
      IngestText("id,comment_text,target\n1,x,0.2\n");
  EXPECT_EQ(missing.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_THAT(missing.status().message(), HasSubstr("psychiatric_or_mental_illness"));
  EXPECT_EQ(IngestText("comment_text,target,psychiatric_or_mental_illness\n"
                       "x,high,0\n")
                .status()
                .code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(IngestText("").status().code(), absl::StatusCode::kFailedPrecondition);
}

std::vector<LabeledComment> Synthetic(std::size_t toxic_mention,
                                      std::size_t nontoxic_mention,
                                      std::size_t toxic_background,
                                      std::size_t nontoxic_background) {
  std::vector<LabeledComment> out;
  const auto add = [&](std::size_t n, bool toxic, bool mention, const char* tag) {
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back({std::string(tag) + std::to_string(i), "text", toxic, mention});
    }
  };
  add(toxic_mention, true, true, "tm");
  add(nontoxic_mention, false, true, "nm");
  add(toxic_background, true, false, "tb");
  add(nontoxic_background, false, false, "nb");
  return out;
}

std::vector<std::string> Ids(const std::vector<LabeledComment>& cell) {
  std::vector<std::string> ids;
  for (const LabeledComment& c : cell) ids.push_back(c.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

TEST(BalanceTest, UpsamplesToxicMentionsToNonToxicCount) {
  const std::vector<LabeledComment> comments = Synthetic(1030, 3859, 9000, 12000);
  absl::StatusOr<BalancedSample> sample = Balance(comments, 7);
  ASSERT_TRUE(sample.ok()) << sample.status();
  EXPECT_EQ(sample->cell_size, 3859);
  EXPECT_EQ(sample->total(), 15436);
  for (Cell c : kAllCells) EXPECT_EQ(sample->cell(c).size(), 3859) << CellName(c);
  EXPECT_EQ(sample->source_sizes[0], 1030);

  // Every non-toxic mention comment survives exactly once.
  const std::vector<std::string> nm = Ids(sample->cell(Cell::kNonToxicMention));
  EXPECT_EQ(std::set<std::string>(nm.begin(), nm.end()).size(), 3859);
  // Every original toxic mention comment appears at least once.
  const std::vector<std::string> tm = Ids(sample->cell(Cell::kToxicMention));
  EXPECT_EQ(std::set<std::string>(tm.begin(), tm.end()).size(), 1030);
  // Background cells are drawn without replacement.
  for (Cell c : {Cell::kToxicBackground, Cell::kNonToxicBackground}) {
    const std::vector<std::string> ids = Ids(sample->cell(c));
    EXPECT_EQ(std::set<std::string>(ids.begin(), ids.end()).size(), 3859);
  }
}

TEST(BalanceTest, DeterministicPerSeed) {
  const std::vector<LabeledComment> comments = Synthetic(10, 40, 100, 100);
  const BalancedSample a = *Balance(comments, 3);
  const BalancedSample b = *Balance(comments, 3);
  const BalancedSample c = *Balance(comments, 4);
  for (Cell cell : kAllCells) {
    const auto ordered = [&](const BalancedSample& s) {
      std::vector<std::string> ids;
      for (const LabeledComment& x : s.cell(cell)) ids.push_back(x.id);
      return ids;
    };
    EXPECT_EQ(ordered(a), ordered(b));
  }
  EXPECT_NE(Ids(a.cell(Cell::kToxicBackground)), Ids(c.cell(Cell::kToxicBackground)));
}

TEST(BalanceTest, EqualCellsAreIdentity) {
  const std::vector<LabeledComment> comments = Synthetic(5, 5, 5, 5);
  const BalancedSample sample = *Balance(comments, 99);
  EXPECT_EQ(sample.total(), 20);
  EXPECT_THAT(Ids(sample.cell(Cell::kToxicMention)),
              ElementsAre("tm0", "tm1", "tm2", "tm3", "tm4"));
  EXPECT_THAT(Ids(sample.cell(Cell::kNonToxicBackground)),
              ElementsAre("nb0", "nb1", "nb2", "nb3", "nb4"));
}

TEST(BalanceTest, LargerToxicMentionCellIsDownsampled) {
  const BalancedSample sample = *Balance(Synthetic(30, 10, 20, 20), 1);
  const std::vector<std::string> tm = Ids(sample.cell(Cell::kToxicMention));
  EXPECT_EQ(tm.size(), 10);
  EXPECT_EQ(std::set<std::string>(tm.begin(), tm.end()).size(), 10);
}

TEST(BalanceTest, Errors) {
  absl::StatusOr<BalancedSample> no_mentions = Balance(Synthetic(5, 0, 5, 5), 0);
  EXPECT_EQ(no_mentions.status().code(), absl::StatusCode::kFailedPrecondition);
  absl::StatusOr<BalancedSample> deficient = Balance(Synthetic(5, 6, 5, 9), 0);
  EXPECT_EQ(deficient.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_THAT(deficient.status().message(),
              HasSubstr(CellName(Cell::kToxicBackground)));
  EXPECT_EQ(Balance(Synthetic(0, 5, 5, 5), 0).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(TokenizeTest, Examples) {
  EXPECT_THAT(Tokenize("Mentally ill, people!"),
              ElementsAre("mentally", "ill", "people"));
  EXPECT_THAT(Tokenize("state-of-the-art"), ElementsAre("state-of-the-art"));
  EXPECT_THAT(Tokenize(""), IsEmpty());
  EXPECT_THAT(Tokenize("'quoted' --dash-- don't 42nd"),
              ElementsAre("quoted", "dash", "don't", "42nd"));
  EXPECT_THAT(Tokenize("Caf\xC3\xA9 ok"), ElementsAre("caf\xC3\xA9", "ok"));
  EXPECT_THAT(Tokenize("-- '' ..."), IsEmpty());
}

TEST(ExtractTermsTest, Examples) {
  EXPECT_THAT(ExtractTerms({"mentally", "ill"}),
              ElementsAre("mentally", "ill", "mentally ill"));
  EXPECT_THAT(ExtractTerms({"a"}), ElementsAre("a"));
  EXPECT_THAT(ExtractTerms({}), IsEmpty());
}

TEST(TermTableTest, CountsAndMerge) {
  TermTable a;
  a.AddText("the war, the war");
  EXPECT_EQ(a.total_tokens, 4);
  EXPECT_EQ(a.Count("war"), 2);
  EXPECT_EQ(a.Count("the war"), 2);
  EXPECT_EQ(a.Count("war the"), 1);
  EXPECT_EQ(a.Count("peace"), 0);
  TermTable b;
  b.AddText("war");
  a.Merge(b);
  EXPECT_EQ(a.Count("war"), 3);
  EXPECT_EQ(a.total_tokens, 5);
}

TEST(TermTableTest, ShardedCountingMatchesSerial) {
  std::vector<LabeledComment> comments;
  for (int i = 0; i < 100; ++i) {
    comments.push_back({std::to_string(i), "w" + std::to_string(i % 7) + " and w" +
                                               std::to_string(i % 3),
                        false, false});
  }
  std::vector<const LabeledComment*> ptrs;
  for (const LabeledComment& c : comments) ptrs.push_back(&c);
  const TermTable serial = CountTerms(ptrs, 1);
  const TermTable sharded = CountTerms(ptrs, 6);
  EXPECT_EQ(serial.counts, sharded.counts);
  EXPECT_EQ(serial.total_tokens, sharded.total_tokens);
}

TermTable Table(std::map<std::string, std::int64_t> counts, std::int64_t total) {
  TermTable t;
  for (const auto& [term, c] : counts) t.counts[term] = c;
  t.total_tokens = total;
  return t;
}

TEST(ComputeLogOddsTest, GoldenWarExample) {
  absl::StatusOr<std::vector<OddsResult>> results =
      ComputeLogOdds(Table({{"war", 5}}, 10), Table({{"war", 1}}, 10), 1.0);
  ASSERT_TRUE(results.ok()) << results.status();
  ASSERT_EQ(results->size(), 1);
  const OddsResult& r = (*results)[0];
  EXPECT_EQ(r.term, "war");
  EXPECT_EQ(r.count_in, 5);
  EXPECT_EQ(r.count_out, 1);
  EXPECT_NEAR(r.alpha_w, 0.3, 1e-15);
  EXPECT_NEAR(r.delta, 1.9370022667594177688, 1e-12);
  EXPECT_NEAR(r.variance, 0.95791001451378809869, 1e-12);
  EXPECT_NEAR(r.z, 1.9791001518925913172, 1e-12);
}

TEST(ComputeLogOddsTest, NullCaseAndAntisymmetryHoldExactly) {
  const TermTable a = Table({{"war", 5}, {"peace", 2}, {"the", 9}}, 30);
  const TermTable b = Table({{"war", 1}, {"peace", 6}, {"calm", 3}}, 25);
  const std::vector<OddsResult> same = *ComputeLogOdds(a, a, 1000);
  for (const OddsResult& r : same) {
    EXPECT_EQ(r.delta, 0.0) << r.term;
    EXPECT_EQ(r.z, 0.0) << r.term;
  }
  const std::vector<OddsResult> ab = *ComputeLogOdds(a, b, 10);
  const std::vector<OddsResult> ba = *ComputeLogOdds(b, a, 10);
  ASSERT_EQ(ab.size(), ba.size());
  std::map<std::string, OddsResult> by_term;
  for (const OddsResult& r : ba) by_term[r.term] = r;
  for (const OddsResult& r : ab) {
    EXPECT_EQ(r.delta, -by_term[r.term].delta) << r.term;
    EXPECT_EQ(r.z, -by_term[r.term].z) << r.term;
    EXPECT_EQ(r.variance, by_term[r.term].variance) << r.term;
  }
}

TEST(ComputeLogOddsTest, PriorDominanceShrinksDelta) {
  TermTable in;
  in.AddText("the war is bad and the war goes on");
  in.AddText("war war everywhere");
  TermTable out;
  out.AddText("the peace is good");
  out.AddText("war ends and peace begins");
  std::map<std::string, std::vector<double>> deltas;
  for (double alpha0 : {1.0, 1e3, 1e9}) {
    const std::vector<OddsResult> results = *ComputeLogOdds(in, out, alpha0);
    for (const OddsResult& r : results) {
      deltas[r.term].push_back(std::abs(r.delta));
    }
  }
  for (const auto& [term, d] : deltas) {
    ASSERT_EQ(d.size(), 3);
    EXPECT_GT(d[0], d[1]) << term;
    EXPECT_GT(d[1], d[2]) << term;
  }
}

TEST(ComputeLogOddsTest, SortedByZThenTerm) {
  const std::vector<OddsResult> results = *ComputeLogOdds(
      Table({{"b", 3}, {"a", 3}, {"c", 1}}, 10), Table({{"c", 4}}, 10), 1.0);
  ASSERT_EQ(results.size(), 3);
  EXPECT_EQ(results[0].term, "a");
  EXPECT_EQ(results[1].term, "b");
  EXPECT_EQ(results[0].z, results[1].z);
  EXPECT_EQ(results[2].term, "c");
}

TEST(ComputeLogOddsTest, Errors) {
  EXPECT_EQ(ComputeLogOdds(Table({}, 0), Table({{"a", 1}}, 1), 1).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(ComputeLogOdds(Table({{"a", 1}}, 1), Table({{"a", 1}}, 1), 0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(ComputeLogOdds(Table({{"a", 5}}, 1), Table({{"a", 1}}, 1), 1).status().code(),
            absl::StatusCode::kOutOfRange);
}

std::string RandomComment(std::mt19937_64& rng) {
  static const std::vector<std::string> kWords = {
      "Mentally", "ill", "people", "guns", "homeless", "drugs", "the", "a",
      "don't", "state-of-the-art", "'quoted'", "--", "Crazy", "caf\xC3\xA9",
      "42", "war", "peace", "x-ray", "it's"};
  static const std::vector<std::string> kSeparators = {" ", ", ", "! ", ".", " - ", "?"};
  std::string text;
  const int n = 1 + static_cast<int>(rng() % 12);
  for (int i = 0; i < n; ++i) {
    if (i) text += kSeparators[rng() % kSeparators.size()];
    text += kWords[rng() % kWords.size()];
  }
  return text;
}

TEST(AnalyzeCorpusTest, MatchesReferenceOnRandomSmallCorpora) {
  std::mt19937_64 rng(5150);
  for (int round = 0; round < 60; ++round) {
    const std::size_t nm = 1 + rng() % 4;
    const std::size_t tm = 1 + rng() % 5;
    const std::size_t tb = nm + rng() % 3;
    const std::size_t nb = nm + rng() % 3;
    std::vector<LabeledComment> comments;
    const auto add = [&](std::size_t n, bool toxic, bool mention) {
      for (std::size_t i = 0; i < n; ++i) {
        comments.push_back({std::to_string(comments.size()), RandomComment(rng),
                            toxic, mention});
      }
    };
    add(nm, false, true);
    add(tm, true, true);
    add(tb, true, false);
    add(nb, false, false);
    ASSERT_LE(comments.size(), 20);
    const double alpha0 = std::vector<double>{0.5, 1, 10, 1000}[round % 4];
    absl::StatusOr<CorpusOddsResult> result =
        AnalyzeCorpus(comments, round, alpha0, 1 + round % 3);
    ASSERT_TRUE(result.ok()) << result.status();

    std::vector<std::string> in_texts;
    std::vector<std::string> out_texts;
    for (Cell c : kAllCells) {
      const bool mention = c == Cell::kToxicMention || c == Cell::kNonToxicMention;
      for (const LabeledComment& x : result->sample.cell(c)) {
        (mention ? in_texts : out_texts).push_back(x.text);
      }
    }
    const auto reference = testing::ReferenceLogOdds(
        testing::ReferenceCount(in_texts), testing::ReferenceCount(out_texts), alpha0);
    ASSERT_EQ(result->results.size(), reference.size());
    for (const OddsResult& r : result->results) {
      ASSERT_TRUE(reference.count(r.term)) << r.term;
      const testing::ReferenceOdds& ref = reference.at(r.term);
      EXPECT_NEAR(r.delta, static_cast<double>(ref.delta), 1e-10) << r.term;
      EXPECT_NEAR(r.variance, static_cast<double>(ref.variance), 1e-10) << r.term;
      EXPECT_NEAR(r.z, static_cast<double>(ref.z), 1e-10) << r.term;
    }
  }
}

std::vector<OddsResult> WithZ(const std::vector<std::pair<std::string, double>>& zs) {
  std::vector<OddsResult> out;
  for (const auto& [term, z] : zs) {
    OddsResult r;
    r.term = term;
    r.z = z;
    out.push_back(r);
  }
  return out;
}

TEST(TopTermsTest, Examples) {
  EXPECT_EQ(TopTerms(WithZ({{"a", 2.5}, {"b", 1.0}}), 1.96, 100).size(), 1);
  EXPECT_THAT(TopTerms(WithZ({{"a", 2.5}}), 1.96, 0), IsEmpty());
  EXPECT_THAT(TopTerms(WithZ({{"a", 1.96}}), 1.96, 10), IsEmpty());
  const std::vector<TermRow> rows =
      TopTerms(WithZ({{"mentally ill", 23.1}, {"homeless", 12.2}, {"guns", 8.4}}),
               1.96, 2, {{"homeless", "social"}});
  ASSERT_EQ(rows.size(), 2);
  EXPECT_EQ(rows[0].odds.term, "mentally ill");
  EXPECT_EQ(rows[0].tag, "");
  EXPECT_EQ(rows[1].tag, "social");
}

TEST(LoadTagFileTest, ParsesWithOrWithoutHeader) {
  std::istringstream with_header("term,category\nhomeless,social\nmentally ill,condition\n");
  absl::StatusOr<std::map<std::string, std::string>> tags = LoadTagFile(with_header);
  ASSERT_TRUE(tags.ok()) << tags.status();
  EXPECT_EQ(tags->size(), 2);
  EXPECT_EQ(tags->at("mentally ill"), "condition");
  std::istringstream bare("guns,social\n");
  EXPECT_EQ(LoadTagFile(bare)->at("guns"), "social");
  std::istringstream bad("guns,weapons\n");
  EXPECT_FALSE(LoadTagFile(bad).ok());
  EXPECT_TRUE(IsTermCategory("infrastructure"));
  EXPECT_FALSE(IsTermCategory("weapons"));
}

TEST(OddsReportTest, CsvLayout) {
  OddsResult r;
  r.term = "war";
  r.count_in = 5;
  r.count_out = 1;
  r.delta = 0.5;
  r.z = 2.25;
  EXPECT_EQ(OddsCsv({{r, ""}}), "term,count_in,count_out,delta,z\nwar,5,1,0.5,2.25\n");
}

}  // namespace
}  // namespace biaslens
