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

#ifndef ASAG_ANALYTICS_H_
#define ASAG_ANALYTICS_H_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "asag/attack.h"
#include "asag/dataset.h"
#include "asag/tagger.h"
#include "asag/victim.h"
#include "json.hpp"

namespace asag {

struct WordClassCount {
  std::size_t target = 0;
  std::size_t non_target = 0;

  friend bool operator==(const WordClassCount&, const WordClassCount&) = default;
};

struct ClassSummary {
  std::size_t answers = 0;
  // Tokens that are not pure punctuation.
  double mean_words = 0.0;
  double mean_adjectives = 0.0;
  double mean_adverbs = 0.0;
};

struct ClassWordCounts {
  std::map<std::string, WordClassCount> words;
  ClassSummary target;
  ClassSummary non_target;
};

// Token occurrences of each word (case-insensitive) in answers whose gold
// label is the target vs. any other label, plus per-class length and
// adjective/adverb densities measured with `tagger`.
ClassWordCounts ClassWordDistribution(
    const std::vector<AnswerInstance>& instances,
    const std::vector<std::string>& words, const LabelSchema& schema,
    const Tagger& tagger);

nlohmann::ordered_json ClassWordCountsToJson(const ClassWordCounts& counts);

struct Histogram {
  std::vector<std::size_t> counts;

  std::size_t bins() const { return counts.size(); }
  std::size_t total() const;
  double BinMidpoint(std::size_t bin) const;
  void Add(double value);
  // "midpoint count" per line.
  std::string ToText() const;
};

Histogram MakeHistogram(std::size_t bins);

struct ConfidenceHistograms {
  // False when any joined record lacks a confidence value.
  bool available = true;
  // Original answers of all true negatives.
  Histogram true_negatives;
  // Original answers of the true negatives that the attack later flipped.
  Histogram soon_adversarial;
  // The successful modified answers.
  Histogram adversarial;
};

// Joins baseline and probe records with the report. Throws ConsistencyError
// when the two disagree (probe records for unknown instances, or report
// entries without a matching record). An empty log yields empty histograms.
ConfidenceHistograms BuildConfidenceHistograms(
    const std::vector<QueryRecord>& log, const AttackReport& report,
    std::size_t bins = 10);

nlohmann::ordered_json HistogramsToJson(const ConfidenceHistograms& h);

}  // namespace asag

#endif  // ASAG_ANALYTICS_H_
