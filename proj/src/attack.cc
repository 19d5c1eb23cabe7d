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

#include "asag/attack.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include "asag/error.h"
#include "asag/tokenizer.h"

namespace asag {

std::string_view SlotKindName(SlotKind kind) {
  return kind == SlotKind::kAdjective ? "adjective-slot" : "adverb-slot";
}

namespace {

SlotKind ParseSlotKind(const std::string& name) {
  if (name == "adjective-slot") return SlotKind::kAdjective;
  if (name == "adverb-slot") return SlotKind::kAdverb;
  throw FormatError("unknown slot kind '" + name + "'");
}

const std::vector<WordFrequency>& WordsFor(const CandidateLexicon& lexicon,
                                           SlotKind kind) {
  return kind == SlotKind::kAdjective ? lexicon.adjectives : lexicon.adverbs;
}

const std::vector<WordFrequency>& WordsFor(const RankedLexicon& ranked,
                                           SlotKind kind) {
  return kind == SlotKind::kAdjective ? ranked.adjectives : ranked.adverbs;
}

void CheckGuard(const std::string& word, const StopwordList& guard) {
  if (guard.Contains(ToLower(word))) {
    throw ArgumentError("refusing to insert stopword '" + word + "'");
  }
}

double Fraction(std::size_t numerator, std::size_t denominator) {
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

// Fills the accuracy fields from the integer counts.
void FinishArithmetic(AttackReport& report) {
  if (report.total_instances == 0) {
    throw ArgumentError("accuracy is undefined for zero instances");
  }
  std::set<std::string> affected;
  for (const auto& example : report.examples) {
    affected.insert(example.instance_id);
  }
  report.num_adversarial = report.examples.size();
  report.num_affected = affected.size();
  if (report.num_affected > report.correct_before) {
    throw ConsistencyError("more affected instances than correct predictions");
  }
  report.acc_before = Fraction(report.correct_before, report.total_instances);
  report.acc_after = Fraction(report.correct_before - report.num_affected,
                              report.total_instances);
  report.delta_acc = report.acc_after - report.acc_before;
}

}  // namespace

std::vector<InsertionSlot> ViablePositions(std::string_view answer_text,
                                           const Tagger& tagger) {
  const auto spans = Tokenize(answer_text);
  const auto words = Surfaces(spans);
  const auto tags = tagger.Tag(words);
  std::vector<InsertionSlot> slots;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (IsNominal(tags[i])) {
      slots.push_back({i, SlotKind::kAdjective, tags[i], spans[i].start});
    } else if (tags[i] == Category::kVerb) {
      slots.push_back({i, SlotKind::kAdverb, tags[i], spans[i].start});
    }
  }
  return slots;
}

std::string InsertAt(std::string_view text, const InsertionSlot& slot,
                     std::string_view word) {
  std::string out;
  out.reserve(text.size() + word.size() + 1);
  out.append(text.substr(0, slot.byte_offset));
  out.append(word);
  out.push_back(' ');
  out.append(text.substr(slot.byte_offset));
  return out;
}

std::vector<InsertionCandidate> GenerateInsertions(
    std::string_view answer_text, const std::vector<InsertionSlot>& slots,
    const CandidateLexicon& lexicon, const StopwordList& guard) {
  for (const auto& [word, count] : lexicon.adjectives) CheckGuard(word, guard);
  for (const auto& [word, count] : lexicon.adverbs) CheckGuard(word, guard);
  std::vector<InsertionCandidate> candidates;
  for (const auto& slot : slots) {
    for (const auto& [word, count] : WordsFor(lexicon, slot.kind)) {
      candidates.push_back({word, slot, InsertAt(answer_text, slot, word)});
    }
  }
  return candidates;
}

SelectionResult SelectTrueNegatives(const std::vector<AnswerInstance>& instances,
                                    LabelOracle& victim) {
  if (instances.empty()) {
    throw ArgumentError("no instances: accuracy before the attack is undefined");
  }
  std::vector<ClassifyRequest> requests;
  std::vector<QueryContext> contexts;
  for (const auto& instance : instances) {
    requests.push_back(RequestFor(instance));
    contexts.push_back({instance.id, "baseline"});
  }
  SelectionResult result;
  result.predictions = victim.ClassifyBatch(requests, contexts);
  result.total_instances = instances.size();
  const std::string& target = victim.schema().target_label;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const bool correct = result.predictions[i] == instances[i].gold_label;
    result.correct += correct;
    if (correct && instances[i].gold_label != target) {
      result.true_negatives.push_back(instances[i]);
    }
  }
  result.acc_before = Fraction(result.correct, result.total_instances);
  return result;
}

AttackReport RunProbeAttack(const SelectionResult& selection,
                            const CandidateLexicon& lexicon,
                            const Tagger& tagger, LabelOracle& victim,
                            const StopwordList& guard,
                            const ProbeOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const std::string& target = victim.schema().target_label;

  AttackReport report;
  report.total_instances = selection.total_instances;
  report.correct_before = selection.correct;
  report.num_true_negatives = selection.true_negatives.size();
  std::optional<std::size_t> remaining = options.budget;
  const std::size_t chunk_size =
      options.stop_at_first_success ? 1 : std::max<std::size_t>(options.batch_size, 1);

  for (const auto& instance : selection.true_negatives) {
    report.true_negative_ids.push_back(instance.id);
    if (report.truncated) continue;
    const auto slots = ViablePositions(instance.answer, tagger);
    auto candidates = GenerateInsertions(instance.answer, slots, lexicon, guard);
    if (candidates.empty()) {
      ++report.num_skipped;
      continue;
    }
    std::size_t limit = candidates.size();
    if (remaining && *remaining < limit) {
      limit = *remaining;
      report.truncated = true;
    }
    for (std::size_t begin = 0; begin < limit; begin += chunk_size) {
      const std::size_t end = std::min(limit, begin + chunk_size);
      std::vector<ClassifyRequest> requests;
      std::vector<QueryContext> contexts;
      for (std::size_t i = begin; i < end; ++i) {
        requests.push_back({instance.question, instance.reference,
                            candidates[i].text});
        contexts.push_back({instance.id, "probe"});
      }
      const auto labels = victim.ClassifyBatch(requests, contexts);
      report.queries += labels.size();
      if (remaining) *remaining -= labels.size();
      bool success = false;
      for (std::size_t j = 0; j < labels.size(); ++j) {
        if (labels[j] != target) continue;
        auto& candidate = candidates[begin + j];
        ++report.per_word_success[candidate.word];
        report.examples.push_back({instance.id, candidate.word, candidate.slot,
                                   instance.answer, std::move(candidate.text),
                                   instance.gold_label, labels[j]});
        success = true;
      }
      if (success && options.stop_at_first_success) break;
    }
  }

  FinishArithmetic(report);
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

RankedLexicon RankWords(const AttackReport& report) {
  std::map<std::string, std::size_t> adjectives;
  std::map<std::string, std::size_t> adverbs;
  for (const auto& example : report.examples) {
    auto& counts =
        example.slot.kind == SlotKind::kAdjective ? adjectives : adverbs;
    ++counts[example.inserted_word];
  }
  auto sorted = [](const std::map<std::string, std::size_t>& counts) {
    std::vector<WordFrequency> out(counts.begin(), counts.end());
    std::stable_sort(out.begin(), out.end(),
                     [](const WordFrequency& a, const WordFrequency& b) {
                       return a.second > b.second;
                     });
    return out;
  };
  return {sorted(adjectives), sorted(adverbs)};
}

// ---------------------------------------------------------------------------
// Exploit phase

ApplyStrategy ParseStrategy(std::string_view text) {
  if (text == "first-slot-top-word") return {StrategyKind::kFirstSlotTopWord, 1};
  if (text == "every-slot-top-word") return {StrategyKind::kEverySlotTopWord, 1};
  constexpr std::string_view kRoundRobin = "top-n-words-round-robin(";
  if (text.size() > kRoundRobin.size() + 1 &&
      text.substr(0, kRoundRobin.size()) == kRoundRobin && text.back() == ')') {
    const auto digits =
        text.substr(kRoundRobin.size(), text.size() - kRoundRobin.size() - 1);
    std::size_t n = 0;
    const auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && n >= 1) {
      return {StrategyKind::kTopNRoundRobin, n};
    }
  }
  throw ArgumentError("unknown strategy '" + std::string(text) + "'");
}

std::string StrategyName(const ApplyStrategy& strategy) {
  switch (strategy.kind) {
    case StrategyKind::kFirstSlotTopWord:
      return "first-slot-top-word";
    case StrategyKind::kEverySlotTopWord:
      return "every-slot-top-word";
    case StrategyKind::kTopNRoundRobin:
      return "top-n-words-round-robin(" + std::to_string(strategy.n) + ")";
  }
  return {};
}

namespace {

struct Insertion {
  InsertionSlot slot;
  std::string word;
};

std::vector<Insertion> ChooseInsertions(const std::vector<InsertionSlot>& slots,
                                        const RankedLexicon& ranked,
                                        const ApplyStrategy& strategy,
                                        std::size_t ordinal) {
  std::vector<Insertion> chosen;
  for (const auto& slot : slots) {
    const auto& words = WordsFor(ranked, slot.kind);
    if (words.empty()) continue;
    switch (strategy.kind) {
      case StrategyKind::kFirstSlotTopWord:
        return {{slot, words.front().first}};
      case StrategyKind::kTopNRoundRobin: {
        const std::size_t n = std::min(strategy.n, words.size());
        return {{slot, words[ordinal % n].first}};
      }
      case StrategyKind::kEverySlotTopWord:
        chosen.push_back({slot, words.front().first});
        break;
    }
  }
  return chosen;
}

}  // namespace

ApplyResult ApplyLexicon(const std::vector<AnswerInstance>& instances,
                         const RankedLexicon& ranked,
                         const ApplyStrategy& strategy, const Tagger& tagger,
                         const StopwordList& guard, LabelOracle* victim) {
  const auto start = std::chrono::steady_clock::now();
  for (const auto& [word, count] : ranked.adjectives) CheckGuard(word, guard);
  for (const auto& [word, count] : ranked.adverbs) CheckGuard(word, guard);

  ApplyResult result;
  std::vector<std::optional<Insertion>> first_insertion(instances.size());
  std::size_t ordinal = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    AnswerInstance modified = instances[i];
    const auto slots = ViablePositions(modified.answer, tagger);
    auto insertions = ChooseInsertions(slots, ranked, strategy, ordinal);
    if (insertions.empty()) {
      ++result.skipped;
    } else {
      ++ordinal;
      first_insertion[i] = insertions.front();
      // Right to left so earlier byte offsets stay valid.
      for (auto it = insertions.rbegin(); it != insertions.rend(); ++it) {
        modified.answer = InsertAt(modified.answer, it->slot, it->word);
      }
    }
    result.modified.push_back(std::move(modified));
  }
  if (victim == nullptr || instances.empty()) return result;

  std::vector<ClassifyRequest> originals;
  std::vector<QueryContext> original_contexts;
  std::vector<ClassifyRequest> exploits;
  std::vector<QueryContext> exploit_contexts;
  std::vector<std::size_t> exploit_index;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    originals.push_back(RequestFor(instances[i]));
    original_contexts.push_back({instances[i].id, "baseline"});
    if (first_insertion[i]) {
      exploits.push_back(RequestFor(result.modified[i]));
      exploit_contexts.push_back({instances[i].id, "exploit"});
      exploit_index.push_back(i);
    }
  }
  const auto before = victim->ClassifyBatch(originals, original_contexts);
  std::vector<std::string> after;
  if (!exploits.empty()) after = victim->ClassifyBatch(exploits, exploit_contexts);

  const std::string& target = victim->schema().target_label;
  AttackReport report;
  report.total_instances = instances.size();
  report.num_skipped = result.skipped;
  report.queries = before.size() + after.size();
  std::set<std::string> true_negatives;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (before[i] == instances[i].gold_label) {
      ++report.correct_before;
      if (instances[i].gold_label != target) {
        report.true_negative_ids.push_back(instances[i].id);
        true_negatives.insert(instances[i].id);
      }
    }
  }
  report.num_true_negatives = true_negatives.size();
  for (std::size_t k = 0; k < exploit_index.size(); ++k) {
    const std::size_t i = exploit_index[k];
    if (after[k] != target || !true_negatives.count(instances[i].id)) continue;
    const Insertion& insertion = *first_insertion[i];
    ++report.per_word_success[insertion.word];
    report.examples.push_back({instances[i].id, insertion.word, insertion.slot,
                               instances[i].answer, result.modified[i].answer,
                               before[i], after[k]});
  }
  FinishArithmetic(report);
  report.elapsed = std::chrono::steady_clock::now() - start;
  result.report = std::move(report);
  return result;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::ordered_json ReportToJson(const AttackReport& report) {
  nlohmann::ordered_json doc;
  doc["total_instances"] = report.total_instances;
  doc["correct_before"] = report.correct_before;
  doc["acc_before"] = report.acc_before;
  doc["acc_after"] = report.acc_after;
  doc["delta_acc"] = report.delta_acc;
  doc["num_adversarial"] = report.num_adversarial;
  doc["num_affected"] = report.num_affected;
  doc["num_true_negatives"] = report.num_true_negatives;
  doc["num_skipped"] = report.num_skipped;
  doc["queries"] = report.queries;
  doc["truncated"] = report.truncated;
  doc["true_negative_ids"] = report.true_negative_ids;
  nlohmann::ordered_json per_word = nlohmann::ordered_json::object();
  for (const auto& [word, count] : report.per_word_success) {
    per_word[word] = count;
  }
  doc["per_word_success"] = std::move(per_word);
  auto examples = nlohmann::ordered_json::array();
  for (const auto& e : report.examples) {
    nlohmann::ordered_json obj;
    obj["instance_id"] = e.instance_id;
    obj["inserted_word"] = e.inserted_word;
    obj["slot"] = {{"token_index", e.slot.token_index},
                   {"slot_kind", SlotKindName(e.slot.kind)},
                   {"anchor_category", CategoryName(e.slot.anchor_category)},
                   {"byte_offset", e.slot.byte_offset}};
    obj["original_answer"] = e.original_answer;
    obj["modified_answer"] = e.modified_answer;
    obj["verdict_before"] = e.verdict_before;
    obj["verdict_after"] = e.verdict_after;
    examples.push_back(std::move(obj));
  }
  doc["examples"] = std::move(examples);
  return doc;
}

AttackReport ReportFromJson(const nlohmann::json& doc) {
  try {
    AttackReport report;
    report.total_instances = doc.at("total_instances").get<std::size_t>();
    report.correct_before = doc.at("correct_before").get<std::size_t>();
    report.acc_before = doc.at("acc_before").get<double>();
    report.acc_after = doc.at("acc_after").get<double>();
    report.delta_acc = doc.at("delta_acc").get<double>();
    report.num_adversarial = doc.at("num_adversarial").get<std::size_t>();
    report.num_affected = doc.at("num_affected").get<std::size_t>();
    report.num_true_negatives = doc.at("num_true_negatives").get<std::size_t>();
    report.num_skipped = doc.at("num_skipped").get<std::size_t>();
    report.queries = doc.at("queries").get<std::size_t>();
    report.truncated = doc.at("truncated").get<bool>();
    report.true_negative_ids =
        doc.at("true_negative_ids").get<std::vector<std::string>>();
    for (const auto& [word, count] : doc.at("per_word_success").items()) {
      report.per_word_success[word] = count.get<std::size_t>();
    }
    for (const auto& obj : doc.at("examples")) {
      AdversarialExample e;
      e.instance_id = obj.at("instance_id").get<std::string>();
      e.inserted_word = obj.at("inserted_word").get<std::string>();
      const auto& slot = obj.at("slot");
      e.slot.token_index = slot.at("token_index").get<std::size_t>();
      e.slot.kind = ParseSlotKind(slot.at("slot_kind").get<std::string>());
      const auto category =
          ParseCategory(slot.at("anchor_category").get<std::string>());
      if (!category) throw FormatError("unknown anchor category");
      e.slot.anchor_category = *category;
      e.slot.byte_offset = slot.at("byte_offset").get<std::size_t>();
      e.original_answer = obj.at("original_answer").get<std::string>();
      e.modified_answer = obj.at("modified_answer").get<std::string>();
      e.verdict_before = obj.at("verdict_before").get<std::string>();
      e.verdict_after = obj.at("verdict_after").get<std::string>();
      report.examples.push_back(std::move(e));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed attack report: ") + e.what());
  }
}

nlohmann::ordered_json RankedToJson(const RankedLexicon& ranked) {
  auto list = [](const std::vector<WordFrequency>& words) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [word, count] : words) arr.push_back({word, count});
    return arr;
  };
  nlohmann::ordered_json doc;
  doc["adjectives"] = list(ranked.adjectives);
  doc["adverbs"] = list(ranked.adverbs);
  return doc;
}

RankedLexicon RankedFromJson(const nlohmann::json& doc) {
  try {
    auto list = [](const nlohmann::json& arr) {
      std::vector<WordFrequency> words;
      for (const auto& entry : arr) {
        words.emplace_back(entry.at(0).get<std::string>(),
                           entry.at(1).get<std::size_t>());
      }
      return words;
    };
    return {list(doc.at("adjectives")), list(doc.at("adverbs"))};
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed ranked lexicon: ") + e.what());
  }
}

void ExportAdversarialJsonl(const AttackReport& report,
                            const std::vector<AnswerInstance>& instances,
                            const std::filesystem::path& path) {
  std::map<std::string, const AnswerInstance*> by_id;
  for (const auto& instance : instances) by_id[instance.id] = &instance;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& e : report.examples) {
    const auto it = by_id.find(e.instance_id);
    if (it == by_id.end()) {
      throw ConsistencyError("example refers to unknown instance '" +
                             e.instance_id + "'");
    }
    const AnswerInstance& source = *it->second;
    nlohmann::ordered_json obj;
    obj["id"] = source.id;
    obj["question"] = source.question;
    obj["reference"] = source.reference;
    obj["answer"] = e.modified_answer;
    obj["gold_label"] = source.gold_label;
    obj["split"] = source.split;
    obj["original_answer"] = e.original_answer;
    obj["inserted_word"] = e.inserted_word;
    obj["slot_kind"] = SlotKindName(e.slot.kind);
    obj["token_index"] = e.slot.token_index;
    obj["verdict_before"] = e.verdict_before;
    obj["verdict_after"] = e.verdict_after;
    out << obj.dump() << '\n';
  }
}

}  // namespace asag
