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

#include "asag/tagger.h"

#include <gtest/gtest.h>

#include <sstream>

#include "asag/error.h"
#include "json.hpp"
#include "test_util.h"

namespace asag {
namespace {

std::vector<TaggedSentence> ToyCorpus() {
  std::istringstream in(
      "The/DT old/JJ dog/NN runs/VBZ quickly/RB ./.\n"
      "A/DT young/JJ cat/NN sleeps/VBZ often/RB ./.\n"
      "She/PRP walks/VBZ slowly/RB ./.\n"
      "Paris/NNP is/VBZ big/JJ ./.\n"
      "He/PRP saw/VBD the/DT red/JJ car/NN ./.\n"
      "They/PRP always/RB eat/VBP green/JJ apples/NNS ./.\n"
      "Na\xC3\xAFve/JJ caf\xC3\xA9s/NNS close/VBP early/RB ./.\n");
  return ParseTaggedCorpus(
      in, TagsetMap::Load(testing::RepoDataPath("tagsets/ptb.map")));
}

std::vector<Category> Gold(const TaggedSentence& s) {
  std::vector<Category> out;
  for (const auto& t : s.tokens) out.push_back(t.category);
  return out;
}

std::vector<std::string> Words(const TaggedSentence& s) {
  std::vector<std::string> out;
  for (const auto& t : s.tokens) out.push_back(t.surface);
  return out;
}

TEST(TaggerTest, FitsASmallConsistentCorpus) {
  const auto corpus = ToyCorpus();
  const auto tagger = TrainTagger(corpus, 10, 42, "toy");
  for (const auto& sentence : corpus) {
    EXPECT_EQ(tagger.Tag(Words(sentence)), Gold(sentence));
  }
  EXPECT_DOUBLE_EQ(EvaluateTagger(tagger, corpus), 1.0);
  EXPECT_EQ(tagger.model().training_meta,
            (TrainingMeta{10, 42, "toy"}));
}

TEST(TaggerTest, SameSeedGivesIdenticalModels) {
  const auto corpus = ToyCorpus();
  EXPECT_EQ(TrainTagger(corpus, 3, 7).Serialize(),
            TrainTagger(corpus, 3, 7).Serialize());
}

TEST(TaggerTest, EmptyInputTagsToEmptyOutput) {
  const auto tagger = TrainTagger(ToyCorpus(), 1, 1);
  EXPECT_TRUE(tagger.Tag({}).empty());
  const std::vector<std::string> unseen = {"Zzyzx", "42", "re-entry"};
  EXPECT_EQ(tagger.Tag(unseen).size(), 3u);
}

TEST(TaggerTest, SerializationRoundTrips) {
  const auto tagger = TrainTagger(ToyCorpus(), 4, 9, "toy");
  const auto text = tagger.Serialize();
  const auto restored = PerceptronTagger::Deserialize(text);
  EXPECT_EQ(restored.Serialize(), text);
  for (const auto& sentence : ToyCorpus()) {
    EXPECT_EQ(restored.Tag(Words(sentence)), tagger.Tag(Words(sentence)));
  }
  const auto path = testing::TempPath("tagger.json");
  tagger.Save(path);
  EXPECT_EQ(PerceptronTagger::Load(path).Serialize(), text);
}

TEST(TaggerTest, DeserializeRejectsForeignDocuments) {
  auto doc = nlohmann::json::parse(TrainTagger(ToyCorpus(), 1, 1).Serialize());
  auto wrong_version = doc;
  wrong_version["format_version"] = 99;
  EXPECT_THROW(PerceptronTagger::Deserialize(wrong_version.dump()), FormatError);
  auto wrong_categories = doc;
  wrong_categories["categories"] = {"ADJ", "ADV"};
  EXPECT_THROW(PerceptronTagger::Deserialize(wrong_categories.dump()),
               FormatError);
  EXPECT_THROW(PerceptronTagger::Deserialize("{not json"), FormatError);
  EXPECT_THROW(PerceptronTagger::Load(testing::TempPath("missing.json")), Error);
}

TEST(TaggerTest, RejectsBadTrainingArguments) {
  EXPECT_THROW(TrainTagger({}, 5, 1), ArgumentError);
  EXPECT_THROW(TrainTagger(ToyCorpus(), 0, 1), ArgumentError);
  const auto tagger = TrainTagger(ToyCorpus(), 1, 1);
  EXPECT_THROW(EvaluateTagger(tagger, {}), ArgumentError);
}

TEST(SplitCorpusTest, HoldsOutEveryTenthSentence) {
  std::vector<TaggedSentence> sentences(25);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    sentences[i].tokens.push_back({std::to_string(i), "CD", Category::kOther});
  }
  const auto split = SplitCorpus(sentences);
  ASSERT_EQ(split.heldout.size(), 2u);
  EXPECT_EQ(split.train.size(), 23u);
  EXPECT_EQ(split.heldout[0].tokens[0].surface, "9");
  EXPECT_EQ(split.heldout[1].tokens[0].surface, "19");
}

}  // namespace
}  // namespace asag
