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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "asag/error.h"
#include "asag/tokenizer.h"

namespace asag {

namespace {

bool IsWordToken(const std::string& token) {
  return std::any_of(token.begin(), token.end(), [](unsigned char c) {
    return c >= 0x80 || !std::ispunct(c);
  });
}

void Finish(ClassSummary& summary, std::size_t words, std::size_t adjectives,
            std::size_t adverbs) {
  if (summary.answers == 0) return;
  const double n = static_cast<double>(summary.answers);
  summary.mean_words = static_cast<double>(words) / n;
  summary.mean_adjectives = static_cast<double>(adjectives) / n;
  summary.mean_adverbs = static_cast<double>(adverbs) / n;
}

}  // namespace

ClassWordCounts ClassWordDistribution(
    const std::vector<AnswerInstance>& instances,
    const std::vector<std::string>& words, const LabelSchema& schema,
    const Tagger& tagger) {
  ClassWordCounts out;
  for (const auto& word : words) out.words[ToLower(word)];

  std::array<std::size_t, 2> word_totals{};
  std::array<std::size_t, 2> adjective_totals{};
  std::array<std::size_t, 2> adverb_totals{};
  for (const auto& instance : instances) {
    const bool is_target = instance.gold_label == schema.target_label;
    const std::size_t cls = is_target ? 0 : 1;
    (is_target ? out.target : out.non_target).answers++;
    const auto surfaces = Surfaces(Tokenize(instance.answer));
    for (const auto& surface : surfaces) {
      word_totals[cls] += IsWordToken(surface);
      if (auto it = out.words.find(ToLower(surface)); it != out.words.end()) {
        (is_target ? it->second.target : it->second.non_target)++;
      }
    }
    for (Category c : tagger.Tag(surfaces)) {
      adjective_totals[cls] += c == Category::kAdj;
      adverb_totals[cls] += c == Category::kAdv;
    }
  }
  Finish(out.target, word_totals[0], adjective_totals[0], adverb_totals[0]);
  Finish(out.non_target, word_totals[1], adjective_totals[1], adverb_totals[1]);
  return out;
}

nlohmann::ordered_json ClassWordCountsToJson(const ClassWordCounts& counts) {
  auto summary = [](const ClassSummary& s) {
    return nlohmann::ordered_json{{"answers", s.answers},
                                  {"mean_words", s.mean_words},
                                  {"mean_adjectives", s.mean_adjectives},
                                  {"mean_adverbs", s.mean_adverbs}};
  };
  nlohmann::ordered_json doc;
  nlohmann::ordered_json words = nlohmann::ordered_json::object();
  for (const auto& [word, c] : counts.words) {
    words[word] = {{"target", c.target}, {"non_target", c.non_target}};
  }
  doc["words"] = std::move(words);
  doc["target"] = summary(counts.target);
  doc["non_target"] = summary(counts.non_target);
  return doc;
}

// ---------------------------------------------------------------------------
// Histograms

Histogram MakeHistogram(std::size_t bins) {
  if (bins == 0) throw ArgumentError("histogram needs at least one bin");
  Histogram h;
  h.counts.assign(bins, 0);
  return h;
}

std::size_t Histogram::total() const {
  std::size_t sum = 0;
  for (auto c : counts) sum += c;
  return sum;
}

double Histogram::BinMidpoint(std::size_t bin) const {
  return (static_cast<double>(bin) + 0.5) / static_cast<double>(bins());
}

void Histogram::Add(double value) {
  const double clamped = std::clamp(value, 0.0, 1.0);
  auto bin = static_cast<std::size_t>(
      std::floor(clamped * static_cast<double>(bins())));
  counts[std::min(bin, bins() - 1)]++;
}

std::string Histogram::ToText() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < bins(); ++i) {
    out << BinMidpoint(i) << ' ' << counts[i] << '\n';
  }
  return out.str();
}

ConfidenceHistograms BuildConfidenceHistograms(
    const std::vector<QueryRecord>& log, const AttackReport& report,
    std::size_t bins) {
  ConfidenceHistograms h{true, MakeHistogram(bins), MakeHistogram(bins),
                         MakeHistogram(bins)};
  if (log.empty()) return h;

  const std::set<std::string> true_negatives(report.true_negative_ids.begin(),
                                             report.true_negative_ids.end());
  std::set<std::string> affected;
  for (const auto& e : report.examples) affected.insert(e.instance_id);

  // First baseline confidence per instance; probe confidences keyed by
  // (instance, modified answer).
  std::map<std::string, const QueryRecord*> baseline;
  std::map<std::pair<std::string, std::string>, const QueryRecord*> probes;
  for (const auto& record : log) {
    if (record.context.phase == "baseline") {
      baseline.emplace(record.context.instance_id, &record);
    } else if (record.context.phase == "probe") {
      if (!true_negatives.count(record.context.instance_id)) {
        throw ConsistencyError("probe record for unknown instance '" +
                               record.context.instance_id + "'");
      }
      probes.emplace(std::make_pair(record.context.instance_id,
                                    record.request.answer),
                     &record);
    }
  }

  std::vector<std::pair<Histogram*, const QueryRecord*>> joined;
  for (const auto& id : report.true_negative_ids) {
    const auto it = baseline.find(id);
    if (it == baseline.end()) {
      throw ConsistencyError("no baseline query for true negative '" + id + "'");
    }
    joined.emplace_back(&h.true_negatives, it->second);
    if (affected.count(id)) joined.emplace_back(&h.soon_adversarial, it->second);
  }
  for (const auto& e : report.examples) {
    const auto it = probes.find({e.instance_id, e.modified_answer});
    if (it == probes.end()) {
      throw ConsistencyError("no probe query for adversarial example of '" +
                             e.instance_id + "'");
    }
    joined.emplace_back(&h.adversarial, it->second);
  }
  for (const auto& [histogram, record] : joined) {
    if (!record->confidence) {
      ConfidenceHistograms unavailable{false, MakeHistogram(bins),
                                       MakeHistogram(bins), MakeHistogram(bins)};
      return unavailable;
    }
    histogram->Add(*record->confidence);
  }
  return h;
}

nlohmann::ordered_json HistogramsToJson(const ConfidenceHistograms& h) {
  auto one = [](const Histogram& hist) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < hist.bins(); ++i) {
      arr.push_back({hist.BinMidpoint(i), hist.counts[i]});
    }
    return arr;
  };
  nlohmann::ordered_json doc;
  doc["confidence_available"] = h.available;
  doc["true_negatives"] = one(h.true_negatives);
  doc["soon_adversarial"] = one(h.soon_adversarial);
  doc["adversarial"] = one(h.adversarial);
  return doc;
}

}  // namespace asag
