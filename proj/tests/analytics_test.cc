//
// Copyright 2026 The ASAG Adversarial Insertion Authors
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

#include "asag/analytics.h"

#include <gtest/gtest.h>

#include "asag/error.h"
#include "test_util.h"

namespace asag {
namespace {

using testing::DictTagger;

const DictTagger& Tagger() {
  static const DictTagger tagger({{"root", Category::kNoun},
                                  {"it", Category::kPron},
                                  {"grew", Category::kVerb},
                                  {"absorbs", Category::kVerb},
                                  {"better", Category::kAdj},
                                  {"green", Category::kAdj},
                                  {"quickly", Category::kAdv}});
  return tagger;
}

AnswerInstance Instance(std::string id, std::string answer, std::string gold) {
  return {std::move(id), "What does the root do?",
          "The root absorbs water from the soil.", std::move(answer),
          std::move(gold), "train", {}};
}

TEST(ClassWordDistributionTest, CountsTokensPerClass) {
  const std::vector<AnswerInstance> instances = {
      Instance("a", "A better root grew quickly.", "correct"),
      Instance("b", "Better? It grew, green and better.", "incorrect"),
      Instance("c", "It is wet.", "contradictory")};
  const auto counts = ClassWordDistribution(
      instances, {"better", "Absent"}, SebSchema(), Tagger());
  EXPECT_EQ(counts.words.at("better"), (WordClassCount{1, 2}));
  EXPECT_EQ(counts.words.at("absent"), (WordClassCount{0, 0}));
  EXPECT_EQ(counts.target.answers, 1u);
  EXPECT_EQ(counts.non_target.answers, 2u);
  // Punctuation tokens are not words: 5 words; 6 + 3 words.
  EXPECT_DOUBLE_EQ(counts.target.mean_words, 5.0);
  EXPECT_DOUBLE_EQ(counts.non_target.mean_words, 4.5);
  EXPECT_DOUBLE_EQ(counts.target.mean_adjectives, 1.0);
  EXPECT_DOUBLE_EQ(counts.target.mean_adverbs, 1.0);
  EXPECT_DOUBLE_EQ(counts.non_target.mean_adjectives, 1.5);
  EXPECT_DOUBLE_EQ(counts.non_target.mean_adverbs, 0.0);
  const auto json = ClassWordCountsToJson(counts);
  EXPECT_EQ(json.at("words").at("better").at("non_target"), 2);
}

TEST(ClassWordDistributionTest, OneOccurrenceInEachClass) {
  const auto counts = ClassWordDistribution(
      {Instance("a", "green", "correct"), Instance("b", "green", "incorrect")},
      {"green"}, SebSchema(), Tagger());
  EXPECT_EQ(counts.words.at("green"), (WordClassCount{1, 1}));
}

TEST(HistogramTest, FixedWidthBinsOverUnitInterval) {
  auto h = MakeHistogram(10);
  for (double v : {0.0, 0.05, 0.1, 0.55, 0.99, 1.0}) h.Add(v);
  EXPECT_EQ(h.counts,
            (std::vector<std::size_t>{2, 1, 0, 0, 0, 1, 0, 0, 0, 2}));
  EXPECT_EQ(h.total(), 6u);
  EXPECT_DOUBLE_EQ(h.BinMidpoint(0), 0.05);
  EXPECT_DOUBLE_EQ(h.BinMidpoint(9), 0.95);
  EXPECT_THROW(MakeHistogram(0), ArgumentError);
}

TEST(HistogramTest, AllOnesLandInTheLastBin) {
  auto h = MakeHistogram(10);
  for (int i = 0; i < 7; ++i) h.Add(1.0);
  EXPECT_EQ(h.counts[9], 7u);
  EXPECT_EQ(h.total(), 7u);
}

// The six answers below, against the mock victim, have these content-word
// overlaps with the reference (root, absorbs, water, soil):
//   a 1.00 correct      b 0.75 correct
//   c 0.25 incorrect    d 0.25 incorrect    e 0.00 incorrect
//   f 0.00 incorrect (no insertion slot)
// Planting "soon" flips c, d and e; the inserted word leaves overlap unchanged.
struct MockRun {
  MockRun() {
    MockVictimConfig config;
    config.planted_words = {"soon"};
    config.stopwords = StopwordList::Load(
        {testing::RepoDataPath("stopwords/nltk_english_v1.txt")});
    MockVictim mock(config);
    QueryLog query_log;
    VictimGateway gateway(mock, {}, &query_log);
    LabelOracle oracle(gateway);
    const std::vector<AnswerInstance> instances = {
        Instance("a", "The root absorbs water from soil.", "correct"),
        Instance("b", "root absorbs water", "correct"),
        Instance("c", "It grew in the soil.", "incorrect"),
        Instance("d", "The water grew.", "incorrect"),
        Instance("e", "It grew.", "incorrect"),
        Instance("f", "the and", "incorrect")};
    const auto selection = SelectTrueNegatives(instances, oracle);
    CandidateLexicon lexicon{{}, {{"soon", 1}}, 100, ""};
    report = RunProbeAttack(selection, lexicon, Tagger(), oracle,
                            config.stopwords);
    log = query_log.Records();
  }
  AttackReport report;
  std::vector<QueryRecord> log;
};

TEST(ConfidenceHistogramTest, MatchesHandBinnedMockRun) {
  const MockRun run;
  ASSERT_EQ(run.report.num_true_negatives, 4u);
  ASSERT_EQ(run.report.num_affected, 3u);
  const auto h = BuildConfidenceHistograms(run.log, run.report, 10);
  EXPECT_TRUE(h.available);
  EXPECT_EQ(h.true_negatives.counts,
            (std::vector<std::size_t>{2, 0, 2, 0, 0, 0, 0, 0, 0, 0}));
  EXPECT_EQ(h.soon_adversarial.counts,
            (std::vector<std::size_t>{1, 0, 2, 0, 0, 0, 0, 0, 0, 0}));
  EXPECT_EQ(h.adversarial.counts,
            (std::vector<std::size_t>{1, 0, 2, 0, 0, 0, 0, 0, 0, 0}));
  const auto json = HistogramsToJson(h);
  EXPECT_EQ(json.at("confidence_available"), true);
  EXPECT_EQ(json.at("true_negatives").size(), 10u);
}

TEST(ConfidenceHistogramTest, EmptyLogGivesEmptyHistograms) {
  const auto h = BuildConfidenceHistograms({}, AttackReport{}, 5);
  EXPECT_EQ(h.true_negatives.total(), 0u);
  EXPECT_EQ(h.adversarial.bins(), 5u);
}

TEST(ConfidenceHistogramTest, MismatchedLogIsAConsistencyError) {
  const MockRun run;
  auto report = run.report;
  report.true_negative_ids.push_back("zzz");
  EXPECT_THROW(BuildConfidenceHistograms(run.log, report), ConsistencyError);
  auto log = run.log;
  QueryRecord stray = log.back();
  stray.context.instance_id = "nobody";
  log.push_back(stray);
  EXPECT_THROW(BuildConfidenceHistograms(log, run.report), ConsistencyError);
}

TEST(ConfidenceHistogramTest, MissingConfidenceIsReportedUnavailable) {
  const MockRun run;
  auto log = run.log;
  for (auto& record : log) record.confidence.reset();
  EXPECT_FALSE(BuildConfidenceHistograms(log, run.report).available);
}

}  // namespace
}  // namespace asag
