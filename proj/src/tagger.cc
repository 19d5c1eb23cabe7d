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

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "asag/error.h"
#include "json.hpp"

namespace asag {

namespace {

constexpr std::string_view kStart = "-START-";
constexpr std::string_view kEnd = "-END-";

void ExtractFeatures(std::span<const std::string> words, std::size_t i,
                     std::string_view prev_tag,
                     std::vector<std::string>& out) {
  out.clear();
  const std::string& word = words[i];
  const std::string lower = ToLower(word);
  out.emplace_back("b");
  out.push_back("w=" + word);
  out.push_back("l=" + lower);
  // Suffixes count UTF-8 code points, never splitting a multi-byte char.
  std::size_t cut = lower.size();
  for (int n = 1; n <= 3 && cut > 0; ++n) {
    --cut;
    while (cut > 0 && (static_cast<unsigned char>(lower[cut]) & 0xC0) == 0x80) {
      --cut;
    }
    out.push_back("s" + std::to_string(n) + "=" + lower.substr(cut));
  }
  out.push_back("pt=" + std::string(prev_tag));
  out.push_back("pw=" + (i == 0 ? std::string(kStart) : ToLower(words[i - 1])));
  out.push_back("nw=" + (i + 1 == words.size() ? std::string(kEnd)
                                               : ToLower(words[i + 1])));
  if (!word.empty() && std::isupper(static_cast<unsigned char>(word[0]))) {
    out.emplace_back("cap");
  }
  if (std::any_of(word.begin(), word.end(),
                  [](unsigned char c) { return std::isdigit(c); })) {
    out.emplace_back("dig");
  }
  if (word.find('-') != std::string::npos) out.emplace_back("hyp");
}

template <typename WeightLookup>
Category Argmax(const std::vector<std::string>& features, WeightLookup lookup) {
  ClassWeights scores{};
  for (const auto& feature : features) {
    if (const ClassWeights* w = lookup(feature)) {
      for (std::size_t c = 0; c < kNumCategories; ++c) scores[c] += (*w)[c];
    }
  }
  // Ties resolve to the lowest category index.
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumCategories; ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return kAllCategories[best];
}

// Running state for weight averaging: each weight carries the sum of its
// past values and the step at which it last changed.
struct AveragedWeights {
  ClassWeights current{};
  ClassWeights total{};
  std::array<std::uint64_t, kNumCategories> stamp{};
};

}  // namespace

std::vector<Category> PerceptronTagger::Tag(
    std::span<const std::string> tokens) const {
  std::vector<Category> tags;
  tags.reserve(tokens.size());
  std::vector<std::string> features;
  std::string_view prev = kStart;
  const auto lookup = [this](const std::string& f) -> const ClassWeights* {
    auto it = model_.feature_weights.find(f);
    return it == model_.feature_weights.end() ? nullptr : &it->second;
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    ExtractFeatures(tokens, i, prev, features);
    tags.push_back(Argmax(features, lookup));
    prev = CategoryName(tags.back());
  }
  return tags;
}

PerceptronTagger TrainTagger(const std::vector<TaggedSentence>& sentences,
                             int epochs, std::uint64_t seed,
                             std::string corpus_id) {
  if (sentences.empty()) throw ArgumentError("tagger training set is empty");
  if (epochs < 1) throw ArgumentError("tagger epochs must be at least 1");

  std::unordered_map<std::string, AveragedWeights> weights;
  std::uint64_t step = 0;
  const auto lookup = [&weights](const std::string& f) -> const ClassWeights* {
    auto it = weights.find(f);
    return it == weights.end() ? nullptr : &it->second.current;
  };
  auto bump = [&](const std::string& feature, std::size_t c, double delta) {
    AveragedWeights& w = weights[feature];
    w.total[c] += static_cast<double>(step - w.stamp[c]) * w.current[c];
    w.stamp[c] = step;
    w.current[c] += delta;
  };

  std::vector<std::size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::vector<std::string> words;
  std::vector<std::string> features;

  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t index : order) {
      const auto& tokens = sentences[index].tokens;
      words.clear();
      for (const auto& t : tokens) words.push_back(t.surface);
      std::string_view prev = kStart;
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        ++step;
        ExtractFeatures(words, i, prev, features);
        const Category guess = Argmax(features, lookup);
        const Category gold = tokens[i].category;
        if (guess != gold) {
          for (const auto& f : features) {
            bump(f, static_cast<std::size_t>(gold), 1.0);
            bump(f, static_cast<std::size_t>(guess), -1.0);
          }
        }
        prev = CategoryName(guess);
      }
    }
  }

  TaggerModel model;
  model.training_meta = {epochs, seed, std::move(corpus_id)};
  const double steps = static_cast<double>(std::max<std::uint64_t>(step, 1));
  for (auto& [feature, w] : weights) {
    ClassWeights averaged{};
    bool nonzero = false;
    for (std::size_t c = 0; c < kNumCategories; ++c) {
      const double total =
          w.total[c] + static_cast<double>(step - w.stamp[c]) * w.current[c];
      averaged[c] = total / steps;
      nonzero = nonzero || averaged[c] != 0.0;
    }
    if (nonzero) model.feature_weights.emplace(feature, averaged);
  }
  return PerceptronTagger(std::move(model));
}

double EvaluateTagger(const Tagger& tagger,
                      const std::vector<TaggedSentence>& sentences) {
  std::size_t total = 0;
  std::size_t correct = 0;
  std::vector<std::string> words;
  for (const auto& sentence : sentences) {
    words.clear();
    for (const auto& t : sentence.tokens) words.push_back(t.surface);
    const auto predicted = tagger.Tag(words);
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      correct += predicted[i] == sentence.tokens[i].category;
    }
    total += words.size();
  }
  if (total == 0) throw ArgumentError("cannot evaluate on zero tokens");
  return static_cast<double>(correct) / static_cast<double>(total);
}

CorpusSplit SplitCorpus(const std::vector<TaggedSentence>& sentences,
                        std::size_t holdout_every) {
  if (holdout_every < 2) throw ArgumentError("holdout_every must be >= 2");
  CorpusSplit split;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    ((i + 1) % holdout_every == 0 ? split.heldout : split.train)
        .push_back(sentences[i]);
  }
  return split;
}

// ---------------------------------------------------------------------------
// Serialization

std::string PerceptronTagger::Serialize() const {
  nlohmann::ordered_json doc;
  doc["format_version"] = TaggerModel::kFormatVersion;
  auto categories = nlohmann::ordered_json::array();
  for (Category c : kAllCategories) categories.push_back(CategoryName(c));
  doc["categories"] = categories;
  doc["training_meta"] = {{"epochs", model_.training_meta.epochs},
                          {"seed", model_.training_meta.seed},
                          {"corpus_id", model_.training_meta.corpus_id}};
  std::vector<const std::string*> keys;
  keys.reserve(model_.feature_weights.size());
  for (const auto& entry : model_.feature_weights) keys.push_back(&entry.first);
  std::sort(keys.begin(), keys.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });
  nlohmann::ordered_json weights = nlohmann::ordered_json::object();
  for (const std::string* key : keys) {
    weights[*key] = model_.feature_weights.at(*key);
  }
  doc["weights"] = std::move(weights);
  return doc.dump();
}

PerceptronTagger PerceptronTagger::Deserialize(std::string_view json_text) {
  TaggerModel model;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    const int version = doc.at("format_version").get<int>();
    if (version != TaggerModel::kFormatVersion) {
      throw FormatError("unsupported tagger format_version " +
                        std::to_string(version));
    }
    const auto& categories = doc.at("categories");
    if (categories.size() != kNumCategories) {
      throw FormatError("tagger model category set mismatch");
    }
    for (std::size_t c = 0; c < kNumCategories; ++c) {
      if (categories[c].get<std::string>() != CategoryName(kAllCategories[c])) {
        throw FormatError("tagger model category set mismatch");
      }
    }
    const auto& meta = doc.at("training_meta");
    model.training_meta.epochs = meta.at("epochs").get<int>();
    model.training_meta.seed = meta.at("seed").get<std::uint64_t>();
    model.training_meta.corpus_id = meta.at("corpus_id").get<std::string>();
    for (const auto& [feature, w] : doc.at("weights").items()) {
      model.feature_weights.emplace(feature, w.get<ClassWeights>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed tagger model: ") + e.what());
  }
  return PerceptronTagger(std::move(model));
}

void PerceptronTagger::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write tagger model " + path.string());
  out << Serialize() << '\n';
}

PerceptronTagger PerceptronTagger::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open tagger model " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Deserialize(buffer.str());
}

}  // namespace asag
