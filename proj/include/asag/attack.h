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

#ifndef ASAG_ATTACK_H_
#define ASAG_ATTACK_H_

// Adjective/adverb insertion attack.
//
// Probe phase: keep the incorrect answers the victim already grades as such
// (true negatives), find every position in front of a noun, proper noun or
// pronoun (adjective slot) or a verb (adverb slot), insert each candidate
// word there and ask the victim. Modified answers that come back with the
// target label are adversarial examples; their words are ranked by success.
// Exploit phase: insert top-ranked words into new answers without feedback.

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asag/category.h"
#include "asag/corpus.h"
#include "asag/dataset.h"
#include "asag/tagger.h"
#include "asag/victim.h"
#include "json.hpp"

namespace asag {

enum class SlotKind { kAdjective, kAdverb };

std::string_view SlotKindName(SlotKind kind);

struct InsertionSlot {
  std::size_t token_index = 0;
  SlotKind kind = SlotKind::kAdjective;
  Category anchor_category = Category::kNoun;
  // Byte offset of the anchor token in the answer text.
  std::size_t byte_offset = 0;

  friend bool operator==(const InsertionSlot&, const InsertionSlot&) = default;
};

// One slot per nominal or verb token, in token order.
std::vector<InsertionSlot> ViablePositions(std::string_view answer_text,
                                           const Tagger& tagger);

// Inserts `word` plus one space directly before the slot's anchor token.
std::string InsertAt(std::string_view text, const InsertionSlot& slot,
                     std::string_view word);

struct InsertionCandidate {
  std::string word;
  InsertionSlot slot;
  std::string text;
};

// Slot-major, then lexicon order. Adjectives go into adjective slots and
// adverbs into adverb slots. Throws ArgumentError if a lexicon word is on the
// guard list, so meaning-inverting words such as "not" can never be inserted.
std::vector<InsertionCandidate> GenerateInsertions(
    std::string_view answer_text, const std::vector<InsertionSlot>& slots,
    const CandidateLexicon& lexicon, const StopwordList& guard);

struct SelectionResult {
  std::vector<AnswerInstance> true_negatives;
  std::size_t total_instances = 0;
  std::size_t correct = 0;
  double acc_before = 0.0;
  std::vector<std::string> predictions;
};

// Queries every instance once. Throws ArgumentError on empty input (accuracy
// would be undefined).
SelectionResult SelectTrueNegatives(const std::vector<AnswerInstance>& instances,
                                    LabelOracle& victim);

struct AdversarialExample {
  std::string instance_id;
  std::string inserted_word;
  InsertionSlot slot;
  std::string original_answer;
  std::string modified_answer;
  std::string verdict_before;
  std::string verdict_after;

  friend bool operator==(const AdversarialExample&,
                         const AdversarialExample&) = default;
};

struct AttackReport {
  std::size_t total_instances = 0;
  std::size_t correct_before = 0;
  double acc_before = 0.0;
  double acc_after = 0.0;
  double delta_acc = 0.0;
  std::size_t num_adversarial = 0;
  std::size_t num_affected = 0;
  std::size_t num_true_negatives = 0;
  // True negatives without any viable slot (or nothing to insert).
  std::size_t num_skipped = 0;
  std::size_t queries = 0;
  bool truncated = false;
  std::vector<std::string> true_negative_ids;
  std::vector<AdversarialExample> examples;
  std::map<std::string, std::size_t> per_word_success;
  // Kept out of the JSON body so reports stay byte-comparable.
  std::chrono::duration<double> elapsed{0.0};
};

struct ProbeOptions {
  // Maximum number of victim queries; nullopt means exhaustive.
  std::optional<std::size_t> budget;
  bool stop_at_first_success = false;
  // Candidates sent per ClassifyBatch call.
  std::size_t batch_size = 64;
};

AttackReport RunProbeAttack(const SelectionResult& selection,
                            const CandidateLexicon& lexicon,
                            const Tagger& tagger, LabelOracle& victim,
                            const StopwordList& guard,
                            const ProbeOptions& options = {});

struct RankedLexicon {
  std::vector<WordFrequency> adjectives;
  std::vector<WordFrequency> adverbs;

  friend bool operator==(const RankedLexicon&, const RankedLexicon&) = default;
};

// Success counts per word, split by the kind of slot the word was inserted
// into, sorted by (count desc, word asc).
RankedLexicon RankWords(const AttackReport& report);

enum class StrategyKind {
  kFirstSlotTopWord,
  kEverySlotTopWord,
  kTopNRoundRobin,
};

struct ApplyStrategy {
  StrategyKind kind = StrategyKind::kFirstSlotTopWord;
  std::size_t n = 1;
};

// Accepts "first-slot-top-word", "every-slot-top-word" and
// "top-n-words-round-robin(N)"; throws ArgumentError otherwise.
ApplyStrategy ParseStrategy(std::string_view text);
std::string StrategyName(const ApplyStrategy& strategy);

struct ApplyResult {
  std::vector<AnswerInstance> modified;
  std::size_t skipped = 0;
  std::optional<AttackReport> report;
};

// first-slot-top-word: the first slot whose kind has a ranked word gets that
//   kind's top word.
// every-slot-top-word: every slot gets its kind's top word.
// top-n-words-round-robin(N): like first-slot-top-word, but the i-th modified
//   instance uses the (i mod N)-th ranked word of the slot's kind.
// With a victim, originals and modified answers are classified and the
// exploit-phase outcome is summarised like a probe report.
ApplyResult ApplyLexicon(const std::vector<AnswerInstance>& instances,
                         const RankedLexicon& ranked,
                         const ApplyStrategy& strategy, const Tagger& tagger,
                         const StopwordList& guard,
                         LabelOracle* victim = nullptr);

nlohmann::ordered_json ReportToJson(const AttackReport& report);
AttackReport ReportFromJson(const nlohmann::json& doc);
nlohmann::ordered_json RankedToJson(const RankedLexicon& ranked);
RankedLexicon RankedFromJson(const nlohmann::json& doc);

// Adversarial examples as canonical JSONL: the source instance with
// `answer` replaced by the modified text, plus provenance fields.
void ExportAdversarialJsonl(const AttackReport& report,
                            const std::vector<AnswerInstance>& instances,
                            const std::filesystem::path& path);

}  // namespace asag

#endif  // ASAG_ATTACK_H_
