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

#include <algorithm>
#include <cctype>

#include "asag/tokenizer.h"
#include "asag/victim.h"

namespace asag {

namespace {

bool AllPunct(const std::string& token) {
  return std::all_of(token.begin(), token.end(), [](unsigned char c) {
    return c < 0x80 && std::ispunct(c);
  });
}

std::vector<std::string> LowerTokens(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& span : Tokenize(text)) out.push_back(ToLower(span.surface));
  return out;
}

}  // namespace

MockVictim::MockVictim(MockVictimConfig config) : config_(std::move(config)) {
  config_.schema.Validate();
  if (!config_.schema.Contains(config_.non_target_label)) {
    throw ArgumentError("mock non-target label '" + config_.non_target_label +
                        "' is not in the schema");
  }
  if (!config_.cue_label.empty() && !config_.schema.Contains(config_.cue_label)) {
    throw ArgumentError("mock cue label '" + config_.cue_label +
                        "' is not in the schema");
  }
}

double MockVictim::Overlap(const std::string& reference,
                           const std::string& answer) const {
  std::set<std::string> reference_words;
  for (auto& token : LowerTokens(reference)) {
    if (!AllPunct(token) && !config_.stopwords.Contains(token)) {
      reference_words.insert(std::move(token));
    }
  }
  if (reference_words.empty()) return 0.0;
  std::set<std::string> answer_words;
  for (auto& token : LowerTokens(answer)) answer_words.insert(std::move(token));
  std::size_t shared = 0;
  for (const auto& word : reference_words) shared += answer_words.count(word);
  return static_cast<double>(shared) /
         static_cast<double>(reference_words.size());
}

VictimVerdict MockVictim::Classify(const ClassifyRequest& request) {
  ++evaluations_;
  const double overlap = Overlap(request.reference, request.answer);
  const auto tokens = LowerTokens(request.answer);
  auto contains_any = [&tokens](const auto& words) {
    return std::any_of(tokens.begin(), tokens.end(), [&](const auto& t) {
      return words.find(t) != words.end();
    });
  };
  VictimVerdict verdict;
  verdict.confidence = overlap;
  if (overlap >= config_.overlap_threshold ||
      contains_any(config_.planted_words)) {
    verdict.label = config_.schema.target_label;
  } else if (!config_.cue_label.empty() && contains_any(config_.cue_words)) {
    verdict.label = config_.cue_label;
  } else {
    verdict.label = config_.non_target_label;
  }
  return verdict;
}

}  // namespace asag
