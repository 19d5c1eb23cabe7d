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

#include "asag/corpus.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "asag/error.h"
#include "test_util.h"

namespace asag {
namespace {

TagsetMap BrownMap() { return TagsetMap::Load(testing::RepoDataPath("tagsets/brown.map")); }
TagsetMap PtbMap() { return TagsetMap::Load(testing::RepoDataPath("tagsets/ptb.map")); }

StopwordList NltkStopwords() {
  return StopwordList::Load(
      {testing::RepoDataPath("stopwords/nltk_english_v1.txt")});
}

TEST(TagsetMapTest, BrownTagsCollapseToCoarseCategories) {
  const auto map = BrownMap();
  EXPECT_EQ(map.Lookup("JJ"), Category::kAdj);
  EXPECT_EQ(map.Lookup("JJT"), Category::kAdj);
  EXPECT_EQ(map.Lookup("JJ-TL"), Category::kAdj);
  EXPECT_EQ(map.Lookup("RB"), Category::kAdv);
  EXPECT_EQ(map.Lookup("NNS"), Category::kNoun);
  EXPECT_EQ(map.Lookup("NN$"), Category::kNoun);
  EXPECT_EQ(map.Lookup("NP-TL"), Category::kPropn);
  EXPECT_EQ(map.Lookup("PPS"), Category::kPron);
  EXPECT_EQ(map.Lookup("VBD"), Category::kVerb);
  EXPECT_EQ(map.Lookup("BEZ"), Category::kVerb);
  EXPECT_EQ(map.Lookup("HVD"), Category::kVerb);
  EXPECT_EQ(map.Lookup("AT"), Category::kOther);
  EXPECT_EQ(map.Lookup("*"), Category::kOther);
}

TEST(TagsetMapTest, PtbTags) {
  const auto map = PtbMap();
  EXPECT_EQ(map.Lookup("JJR"), Category::kAdj);
  EXPECT_EQ(map.Lookup("RBS"), Category::kAdv);
  EXPECT_EQ(map.Lookup("NNP"), Category::kPropn);
  EXPECT_EQ(map.Lookup("PRP$"), Category::kPron);
  EXPECT_EQ(map.Lookup("VBZ"), Category::kVerb);
  EXPECT_EQ(map.Lookup("MD"), Category::kOther);
  EXPECT_EQ(map.Lookup("DT"), Category::kOther);
}

TEST(TagsetMapTest, LongestPrefixWins) {
  std::istringstream in("# comment\nN* NOUN\nNP* PROPN\nX ADV\n");
  const auto map = TagsetMap::Parse(in);
  EXPECT_EQ(map.Lookup("NN"), Category::kNoun);
  EXPECT_EQ(map.Lookup("NPS"), Category::kPropn);
  EXPECT_EQ(map.Lookup("X"), Category::kAdv);
  EXPECT_EQ(map.Lookup("XY"), Category::kOther);
}

TEST(TagsetMapTest, RejectsUnknownCategory) {
  std::istringstream in("JJ ADJECTIVE\n");
  EXPECT_THROW(TagsetMap::Parse(in), Error);
}

TEST(ParseTaggedCorpusTest, SplitsAtLastSlash) {
  std::istringstream in("1/2/CD cups/NNS\n\nGo/VB\n");
  const auto sentences = ParseTaggedCorpus(in, PtbMap());
  ASSERT_EQ(sentences.size(), 2u);
  EXPECT_EQ(sentences[0].tokens[0].surface, "1/2");
  EXPECT_EQ(sentences[0].tokens[0].raw_tag, "CD");
  EXPECT_EQ(sentences[0].tokens[1].category, Category::kNoun);
  EXPECT_EQ(sentences[1].tokens[0].category, Category::kVerb);
}

TEST(ParseTaggedCorpusTest, ReportsLineOfMalformedToken) {
  std::istringstream in("ok/JJ fine/NN\nbroken token/NN\n");
  try {
    ParseTaggedCorpus(in, PtbMap());
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream empty_tag("word/\n");
  EXPECT_THROW(ParseTaggedCorpus(empty_tag, PtbMap()), ParseError);
  std::istringstream empty_word("/NN\n");
  EXPECT_THROW(ParseTaggedCorpus(empty_word, PtbMap()), ParseError);
}

TEST(BigramTest, CountsConstellationsLowercased) {
  std::istringstream in(
      "Red/JJ apples/NNS and/CC red/JJ Ones/PPS quickly/RB ran/VBD ./.\n"
      "Big/JJ-TL Boston/NP-TL\n");
  const auto counts = ExtractBigramCandidates(ParseTaggedCorpus(in, BrownMap()));
  EXPECT_EQ(counts.adjective_counts,
            (WordCounts{{"big", 1}, {"red", 2}}));
  EXPECT_EQ(counts.adverb_counts, (WordCounts{{"quickly", 1}}));
}

TEST(BigramTest, NeverCrossesSentenceBoundaries) {
  std::istringstream in("It/PPS was/BEDZ green/JJ\ntrees/NNS grow/VB\n"
                        "He/PPS left/VBD quickly/RB\nran/VBD home/NN\n");
  const auto counts = ExtractBigramCandidates(ParseTaggedCorpus(in, BrownMap()));
  EXPECT_TRUE(counts.adjective_counts.empty());
  EXPECT_TRUE(counts.adverb_counts.empty());
}

TEST(BigramTest, IgnoresOtherOrders) {
  std::istringstream in("ran/VBD quickly/RB dogs/NNS big/JJ red/JJ\n");
  const auto counts = ExtractBigramCandidates(ParseTaggedCorpus(in, BrownMap()));
  EXPECT_TRUE(counts.adjective_counts.empty());
  EXPECT_TRUE(counts.adverb_counts.empty());
}

TEST(StopwordListTest, LoadsNltkListAndJoinsIds) {
  const auto nltk = NltkStopwords();
  EXPECT_EQ(nltk.words().size(), 179u);
  EXPECT_TRUE(nltk.Contains("not"));
  EXPECT_TRUE(nltk.Contains("very"));
  EXPECT_EQ(nltk.id(), "nltk_english_v1");
  const auto both = StopwordList::Load(
      {testing::RepoDataPath("stopwords/nltk_english_v1.txt"),
       testing::RepoDataPath("stopwords/ptb_clitics.txt")});
  EXPECT_TRUE(both.Contains("n't"));
  EXPECT_EQ(both.id(), "nltk_english_v1+ptb_clitics");
}

TEST(BuildLexiconTest, OrdersByFrequencyThenWord) {
  const WordCounts adj = {{"zeta", 3}, {"alpha", 3}, {"beta", 5}, {"gamma", 1}};
  const WordCounts adv = {{"not", 9}, {"soon", 2}};
  const auto lexicon = BuildLexicon(adj, adv, NltkStopwords(), 3);
  EXPECT_EQ(lexicon.adjectives,
            (std::vector<WordFrequency>{{"beta", 5}, {"alpha", 3}, {"zeta", 3}}));
  EXPECT_EQ(lexicon.adverbs, (std::vector<WordFrequency>{{"soon", 2}}));
  EXPECT_EQ(lexicon.k, 3u);
  EXPECT_EQ(lexicon.stopword_list_id, "nltk_english_v1");
  EXPECT_THROW(BuildLexicon(adj, adv, NltkStopwords(), 0), ArgumentError);
}

TEST(BuildLexiconTest, MiniCorpusMatchesHandCountedGolden) {
  const auto sentences = LoadTaggedCorpus(
      testing::RepoDataPath("corpus/mini_brown.txt"), BrownMap());
  const auto counts = ExtractBigramCandidates(sentences);
  // Present as raw candidates, removed by the stopword filter.
  EXPECT_TRUE(counts.adverb_counts.count("not") || counts.adverb_counts.count("just"));
  const auto lexicon = BuildLexicon(counts.adjective_counts,
                                    counts.adverb_counts, NltkStopwords());
  const auto golden =
      ReadLexicon(testing::RepoDataPath("golden/mini_brown_lexicon.json"));
  EXPECT_EQ(lexicon, golden);
  for (const auto& [word, count] : lexicon.adverbs) EXPECT_NE(word, "not");
}

TEST(BuildLexiconTest, SampleCorpusMatchesIndependentRecount) {
  // Golden produced by tests/oracles/lexicon_oracle.py.
  const auto sentences = LoadTaggedCorpus(
      testing::RepoDataPath("corpus/oanc_sample.txt"), PtbMap());
  const auto counts = ExtractBigramCandidates(sentences);
  const auto stopwords = StopwordList::Load(
      {testing::RepoDataPath("stopwords/nltk_english_v1.txt"),
       testing::RepoDataPath("stopwords/ptb_clitics.txt")});
  const auto lexicon =
      BuildLexicon(counts.adjective_counts, counts.adverb_counts, stopwords);
  EXPECT_EQ(lexicon,
            ReadLexicon(testing::RepoDataPath("golden/oanc_sample_lexicon.json")));
}

TEST(BuildLexiconTest, PropertiesOnRandomCounts) {
  std::mt19937 rng(11);
  const auto stopwords = NltkStopwords();
  std::vector<std::string> pool(stopwords.words().begin(),
                                stopwords.words().end());
  for (int i = 0; i < 60; ++i) pool.push_back("w" + std::to_string(i));
  for (int trial = 0; trial < 100; ++trial) {
    WordCounts adj;
    WordCounts adv;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<std::size_t> count(1, 6);
    for (int i = 0; i < 80; ++i) adj[pool[pick(rng)]] = count(rng);
    for (int i = 0; i < 80; ++i) adv[pool[pick(rng)]] = count(rng);
    const std::size_t k = 1 + trial % 40;
    const auto lexicon = BuildLexicon(adj, adv, stopwords, k);
    for (const auto* list : {&lexicon.adjectives, &lexicon.adverbs}) {
      EXPECT_LE(list->size(), k);
      for (std::size_t i = 0; i < list->size(); ++i) {
        EXPECT_FALSE(stopwords.Contains((*list)[i].first));
        if (i > 0) {
          const auto& prev = (*list)[i - 1];
          const auto& cur = (*list)[i];
          EXPECT_TRUE(prev.second > cur.second ||
                      (prev.second == cur.second && prev.first < cur.first));
        }
      }
    }
  }
}

TEST(LexiconJsonTest, RoundTripsAndKeepsKeyOrder) {
  CandidateLexicon lexicon{{{"good", 3}}, {{"soon", 1}}, 100, "nltk_english_v1"};
  const auto path = testing::TempPath("lexicon.json");
  WriteLexicon(lexicon, path);
  EXPECT_EQ(ReadLexicon(path), lexicon);
  const auto text = testing::ReadFile(path);
  EXPECT_LT(text.find("\"k\""), text.find("\"stopword_list_id\""));
  EXPECT_LT(text.find("\"adjectives\""), text.find("\"adverbs\""));
}

TEST(LexiconJsonTest, RejectsMalformedDocuments) {
  EXPECT_THROW(LexiconFromJson(nlohmann::json::parse(R"({"k": 1})")), Error);
}

}  // namespace
}  // namespace asag
