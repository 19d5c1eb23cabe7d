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

#ifndef ASAG_TAGGER_H_
#define ASAG_TAGGER_H_

// Averaged-perceptron part-of-speech tagger over the coarse categories.
//
// Decoding is greedy left to right. Features per token: bias, word,
// lowercased word, suffixes of length 1-3, previous predicted tag, previous
// word, next word and three shape flags (capitalized, has digit, has hyphen).

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "asag/category.h"
#include "asag/corpus.h"

namespace asag {

// Anything that assigns one category per token. The attack engine only
// depends on this interface so tests can substitute a fixed dictionary.
class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual std::vector<Category> Tag(
      std::span<const std::string> tokens) const = 0;
};

using ClassWeights = std::array<double, kNumCategories>;

struct TrainingMeta {
  int epochs = 0;
  std::uint64_t seed = 0;
  std::string corpus_id;

  friend bool operator==(const TrainingMeta&, const TrainingMeta&) = default;
};

struct TaggerModel {
  static constexpr int kFormatVersion = 1;

  std::unordered_map<std::string, ClassWeights> feature_weights;
  TrainingMeta training_meta;
};

class PerceptronTagger : public Tagger {
 public:
  explicit PerceptronTagger(TaggerModel model) : model_(std::move(model)) {}

  std::vector<Category> Tag(
      std::span<const std::string> tokens) const override;

  const TaggerModel& model() const { return model_; }

  // Keys are written in sorted order, so equal models serialize to equal
  // bytes.
  std::string Serialize() const;
  static PerceptronTagger Deserialize(std::string_view json_text);

  void Save(const std::filesystem::path& path) const;
  static PerceptronTagger Load(const std::filesystem::path& path);

 private:
  TaggerModel model_;
};

// Sentences are visited in a fresh `seed`-driven shuffle every epoch.
// Throws ArgumentError for an empty training set or epochs < 1.
PerceptronTagger TrainTagger(const std::vector<TaggedSentence>& sentences,
                             int epochs, std::uint64_t seed,
                             std::string corpus_id = "");

// Fraction of tokens whose predicted category equals the gold one.
// Throws ArgumentError when the sentences contain no tokens.
double EvaluateTagger(const Tagger& tagger,
                      const std::vector<TaggedSentence>& sentences);

// Deterministic split: every `holdout_every`-th sentence (1-based) is held
// out. With 10 this is the 90/10 split used for the accuracy floor.
struct CorpusSplit {
  std::vector<TaggedSentence> train;
  std::vector<TaggedSentence> heldout;
};
CorpusSplit SplitCorpus(const std::vector<TaggedSentence>& sentences,
                        std::size_t holdout_every = 10);

}  // namespace asag

#endif  // ASAG_TAGGER_H_
