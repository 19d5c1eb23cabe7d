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

// Acceptance checks. Prints one PASS, FAIL or SKIP line per criterion and
// exits non-zero if any criterion fails. Tolerances and time limits are fixed
// here on purpose.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "asag/attack.h"
#include "asag/cli.h"
#include "asag/corpus.h"
#include "asag/dataset.h"
#include "asag/stats.h"
#include "asag/tagger.h"
#include "asag/tokenizer.h"
#include "brute_force.h"
#include "json.hpp"

namespace asag {
namespace {

namespace fs = std::filesystem;

constexpr double kOracleTolerance = 1e-9;
constexpr double kMiniLexiconSeconds = 1.0;
constexpr double kFullLexiconSeconds = 30.0;
constexpr double kTaggerFloor = 0.92;
constexpr double kTaggerSeconds = 300.0;
constexpr double kMockAttackSeconds = 5.0;
constexpr double kSebMeanTolerance = 0.5;
constexpr int kOracleCases = 200;

enum class Outcome { kPass, kFail, kSkip };

struct Verdict {
  Outcome outcome = Outcome::kFail;
  std::string detail;
};

Verdict Pass(std::string detail) { return {Outcome::kPass, std::move(detail)}; }
Verdict Fail(std::string detail) { return {Outcome::kFail, std::move(detail)}; }
Verdict Check(bool ok, std::string detail) {
  return {ok ? Outcome::kPass : Outcome::kFail, std::move(detail)};
}

fs::path DataPath(const std::string& name) {
  return fs::path(ASAG_DATA_DIR) / name;
}

fs::path ScratchDir(const std::string& name) {
  auto dir = fs::path(ASAG_TEST_TMP_DIR) / "acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string Fmt(double value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

StopwordList FullStopwords() {
  return StopwordList::Load({DataPath("stopwords/nltk_english_v1.txt"),
                             DataPath("stopwords/ptb_clitics.txt")});
}

// The Brown corpus is used when it has been normalized into data/corpus;
// otherwise the bundled PTB-tagged sample stands in for it.
struct FullCorpus {
  fs::path text;
  fs::path tagset;
  std::string name;
};

FullCorpus LocateFullCorpus() {
  const auto brown = DataPath("corpus/brown.txt");
  if (fs::exists(brown)) {
    return {brown, DataPath("tagsets/brown.map"), "brown"};
  }
  return {DataPath("corpus/oanc_sample.txt"), DataPath("tagsets/ptb.map"),
          "oanc_sample (brown.txt not present)"};
}

Verdict MiniLexicon() {
  const auto start = std::chrono::steady_clock::now();
  const auto sentences =
      LoadTaggedCorpus(DataPath("corpus/mini_brown.txt"),
                       TagsetMap::Load(DataPath("tagsets/brown.map")));
  const auto stopwords =
      StopwordList::Load({DataPath("stopwords/nltk_english_v1.txt")});
  const auto counts = ExtractBigramCandidates(sentences);
  const auto lexicon =
      BuildLexicon(counts.adjective_counts, counts.adverb_counts, stopwords);
  const double seconds = SecondsSince(start);
  const auto golden = ReadLexicon(DataPath("golden/mini_brown_lexicon.json"));
  auto has_not = [](const std::vector<WordFrequency>& words) {
    return std::any_of(words.begin(), words.end(),
                       [](const auto& w) { return w.first == "not"; });
  };
  const bool matches = lexicon == golden;
  const bool no_not = !has_not(lexicon.adjectives) && !has_not(lexicon.adverbs);
  return Check(sentences.size() <= 200 && matches && no_not &&
                   seconds < kMiniLexiconSeconds,
               std::to_string(sentences.size()) + " sentences, golden " +
                   (matches ? "match" : "MISMATCH") + ", \"not\" " +
                   (no_not ? "absent" : "PRESENT") + ", " + Fmt(seconds) + " s");
}

Verdict FullLexicon() {
  const auto corpus = LocateFullCorpus();
  const auto stopwords = FullStopwords();
  const auto start = std::chrono::steady_clock::now();
  const auto sentences =
      LoadTaggedCorpus(corpus.text, TagsetMap::Load(corpus.tagset));
  const auto counts = ExtractBigramCandidates(sentences);
  const auto lexicon =
      BuildLexicon(counts.adjective_counts, counts.adverb_counts, stopwords);
  const double seconds = SecondsSince(start);
  std::size_t stopword_hits = 0;
  for (const auto* list : {&lexicon.adjectives, &lexicon.adverbs}) {
    for (const auto& [word, n] : *list) stopword_hits += stopwords.Contains(word);
  }
  return Check(lexicon.adjectives.size() == 100 &&
                   lexicon.adverbs.size() == 100 && stopword_hits == 0 &&
                   seconds < kFullLexiconSeconds,
               corpus.name + ": " + std::to_string(lexicon.adjectives.size()) +
                   " adjectives, " + std::to_string(lexicon.adverbs.size()) +
                   " adverbs, " + std::to_string(stopword_hits) +
                   " stopwords, " + Fmt(seconds) + " s");
}

Verdict TaggerAccuracy() {
  const auto corpus = LocateFullCorpus();
  const auto sentences =
      LoadTaggedCorpus(corpus.text, TagsetMap::Load(corpus.tagset));
  const auto split = SplitCorpus(sentences, 10);
  const auto start = std::chrono::steady_clock::now();
  const auto tagger = TrainTagger(split.train, 5, 42, corpus.text.filename());
  const double seconds = SecondsSince(start);
  const double accuracy = EvaluateTagger(tagger, split.heldout);
  return Check(accuracy >= kTaggerFloor && seconds < kTaggerSeconds,
               corpus.name + ": held-out accuracy " + Fmt(accuracy) +
                   " on " + std::to_string(split.heldout.size()) +
                   " sentences, training " + Fmt(seconds) + " s");
}

Verdict MockAttack() {
  const auto dir = ScratchDir("mock_attack");
  std::vector<std::string> reports;
  double slowest = 0.0;
  for (const char* run : {"first", "second"}) {
    std::ostringstream out;
    std::ostringstream err;
    const auto start = std::chrono::steady_clock::now();
    const int code = RunCli(
        {"probe", "--dataset", DataPath("fixtures/seb-mini.jsonl").string(),
         "--lexicon", DataPath("golden/oanc_sample_lexicon.json").string(),
         "--model", ASAG_DEFAULT_MODEL, "--planted", "really",
         "--normalize-timestamps", "--out", (dir / run).string()},
        out, err);
    slowest = std::max(slowest, SecondsSince(start));
    if (code != kExitOk) return Fail("probe exited " + std::to_string(code) +
                                     ": " + err.str());
    reports.push_back(ReadFile(dir / run / "report.json"));
  }
  const auto r = ReportFromJson(nlohmann::json::parse(reports[0]));
  const double total = static_cast<double>(r.total_instances);
  std::set<std::string> affected;
  std::size_t per_word = 0;
  for (const auto& e : r.examples) affected.insert(e.instance_id);
  for (const auto& [w, n] : r.per_word_success) per_word += n;
  const bool arithmetic =
      r.acc_before == static_cast<double>(r.correct_before) / total &&
      r.acc_after ==
          static_cast<double>(r.correct_before - r.num_affected) / total &&
      r.delta_acc == r.acc_after - r.acc_before &&
      r.num_adversarial == r.examples.size() &&
      r.num_affected == affected.size() && per_word == r.num_adversarial &&
      r.num_affected <= r.num_true_negatives;
  const bool identical = reports[0] == reports[1];
  return Check(r.total_instances == 20 && r.num_true_negatives == 10 &&
                   r.num_skipped == 0 && r.num_affected == 10 &&
                   r.delta_acc == -0.5 && arithmetic && identical &&
                   slowest < kMockAttackSeconds,
               "#Aff " + std::to_string(r.num_affected) + ", dAcc " +
                   Fmt(r.delta_acc) + ", arithmetic " +
                   (arithmetic ? "exact" : "BROKEN") + ", reports " +
                   (identical ? "byte-identical" : "DIFFER") + ", " +
                   Fmt(slowest) + " s per run");
}

bool AllEqual(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
}

RatingsMatrix MatrixOf(const std::vector<std::vector<int>>& rows) {
  RatingsMatrix m;
  for (const auto& row : rows) {
    std::vector<std::optional<int>> scores;
    for (int v : row) {
      scores.push_back(v == 0 ? std::nullopt : std::optional<int>(v));
    }
    m.scores.push_back(std::move(scores));
  }
  return m;
}

Verdict OracleEquivalence() {
  std::size_t failures = 0;
  std::string first_failure;
  auto record = [&](bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ == 0) first_failure = what;
  };

  std::mt19937 probe_rng(2026);
  const auto stopwords =
      StopwordList::Load({DataPath("stopwords/nltk_english_v1.txt")});
  for (int i = 0; i < kOracleCases; ++i) {
    const auto result = testing::CheckRandomProbeCase(probe_rng, stopwords, i);
    record(result.match, "probe " + result.detail);
  }

  std::mt19937 rng(20261018);
  for (int checked = 0; checked < kOracleCases;) {
    std::uniform_int_distribution<int> size(1, 8);
    std::uniform_int_distribution<int> value(1, 6);
    std::vector<double> a(size(rng));
    std::vector<double> b(size(rng));
    for (auto& v : a) v = value(rng);
    for (auto& v : b) v = value(rng);
    std::vector<double> pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    if (AllEqual(pooled)) continue;
    const auto alt = static_cast<Alternative>(checked % 3);
    const auto r = MannWhitneyU(a, b, alt);
    record(std::abs(r.u - testing::PairCountU(a, b)) <= kOracleTolerance &&
               std::abs(r.p - testing::BruteForceExactP(a, b, alt)) <=
                   kOracleTolerance,
           "Mann-Whitney case " + std::to_string(checked));
    ++checked;
  }

  for (int checked = 0; checked < kOracleCases;) {
    std::uniform_int_distribution<int> size(2, 8);
    std::uniform_int_distribution<int> value(1, 5);
    std::vector<double> x(size(rng));
    std::vector<double> y(x.size());
    for (auto& v : x) v = value(rng);
    for (auto& v : y) v = value(rng);
    if (AllEqual(x) || AllEqual(y)) continue;
    record(std::abs(SpearmanRho(x, y) - testing::BruteForceRho(x, y)) <=
               kOracleTolerance,
           "Spearman case " + std::to_string(checked));
    ++checked;
  }

  for (int checked = 0; checked < kOracleCases;) {
    std::uniform_int_distribution<int> raters(2, 4);
    std::uniform_int_distribution<int> items(2, 8);
    std::uniform_int_distribution<int> value(0, 5);
    std::vector<std::vector<int>> rows(raters(rng),
                                       std::vector<int>(items(rng)));
    for (auto& row : rows) {
      for (auto& v : row) v = value(rng);
    }
    std::size_t pairable = 0;
    std::set<int> distinct;
    for (std::size_t item = 0; item < rows[0].size(); ++item) {
      std::vector<int> present;
      for (const auto& row : rows) {
        if (row[item] != 0) present.push_back(row[item]);
      }
      if (present.size() >= 2) {
        ++pairable;
        distinct.insert(present.begin(), present.end());
      }
    }
    if (pairable < 2 || distinct.size() < 2) continue;
    const auto m = MatrixOf(rows);
    const auto metric = static_cast<AlphaMetric>(checked % 3);
    record(std::abs(KrippendorffAlpha(m, metric) -
                    testing::BruteForceAlpha(m, metric)) <= kOracleTolerance,
           "Krippendorff case " + std::to_string(checked));
    ++checked;
  }
  return Check(failures == 0,
               std::to_string(kOracleCases) +
                   " cases each for probe, U, rho and alpha; " +
                   std::to_string(failures) + " mismatches" +
                   (failures ? " (first: " + first_failure + ")" : ""));
}

bool RelationsHold(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ab = MannWhitneyU(a, b);
  const auto ba = MannWhitneyU(b, a);
  const double n = static_cast<double>(a.size() + b.size());
  return ab.u + ba.u == static_cast<double>(a.size() * b.size()) &&
         ab.r == std::abs(ab.z) / std::sqrt(n) &&
         ba.r == std::abs(ba.z) / std::sqrt(n);
}

Verdict StatisticsRelations() {
  std::mt19937 rng(7);
  int violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::uniform_int_distribution<int> size(2, 60);
    std::uniform_real_distribution<double> value(1.0, 5.0);
    std::vector<double> a(size(rng));
    std::vector<double> b(size(rng));
    // Means of three ratings, so ties are common.
    for (auto& v : a) v = std::round(value(rng) * 3.0) / 3.0;
    for (auto& v : b) v = std::round(value(rng) * 3.0) / 3.0;
    std::vector<double> pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    if (AllEqual(pooled)) continue;
    violations += !RelationsHold(a, b);
  }
  // Thirty control and thirty adversarial scores arranged so that the control
  // group beats 627 of the 900 pairs.
  std::vector<double> adversarial;
  for (int j = 1; j <= 30; ++j) adversarial.push_back(10.0 * j);
  std::vector<double> control;
  for (int i = 0; i < 20; ++i) control.push_back(10.0 * 30 + 5);
  control.push_back(10.0 * 27 + 5);
  for (int i = 0; i < 9; ++i) control.push_back(5.0);
  const auto c = MannWhitneyU(control, adversarial);
  const auto a = MannWhitneyU(adversarial, control);
  const bool anchor = c.u == 627.0 && a.u == 273.0 && c.u + a.u == 900.0 &&
                      RelationsHold(control, adversarial);
  return Check(violations == 0 && anchor,
               std::to_string(violations) +
                   " violations of U_a + U_b = n1*n2 and r = |Z|/sqrt(n1+n2) "
                   "in 500 synthetic samples; U_control " + Fmt(c.u) +
                   " + U_adv " + Fmt(a.u) + " = " + Fmt(c.u + a.u));
}

std::optional<fs::path> LocateSeb() {
  if (const char* env = std::getenv("ASAG_SEB_DIR")) return fs::path(env);
  for (const auto& candidate :
       {DataPath("seb"), DataPath("SciEntsBank"), DataPath("semeval2013")}) {
    if (fs::is_directory(candidate)) return candidate;
  }
  return std::nullopt;
}

Verdict SebIngestion() {
  const auto root = LocateSeb();
  if (!root) {
    return {Outcome::kSkip,
            "SEB dataset not present (set ASAG_SEB_DIR or add data/seb)"};
  }
  const auto dataset = LoadSebXml(*root);
  std::size_t correct = 0;
  std::size_t incorrect = 0;
  double correct_tokens = 0;
  double incorrect_tokens = 0;
  for (const auto& instance : dataset.instances) {
    if (instance.split != "train") continue;
    const double tokens = static_cast<double>(Tokenize(instance.answer).size());
    if (instance.gold_label == "correct") {
      ++correct;
      correct_tokens += tokens;
    } else if (instance.gold_label == "incorrect") {
      ++incorrect;
      incorrect_tokens += tokens;
    }
  }
  const double mean_correct = correct ? correct_tokens / correct : 0.0;
  const double mean_incorrect = incorrect ? incorrect_tokens / incorrect : 0.0;
  return Check(incorrect == 2462 && correct == 2008 &&
                   std::abs(mean_correct - 13.4) <= kSebMeanTolerance &&
                   std::abs(mean_incorrect - 11.7) <= kSebMeanTolerance,
               std::to_string(incorrect) + " incorrect, " +
                   std::to_string(correct) + " correct, mean tokens " +
                   Fmt(mean_correct) + " / " + Fmt(mean_incorrect));
}

int Main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria =
      {{"mini-lexicon", MiniLexicon},
       {"full-lexicon", FullLexicon},
       {"tagger-accuracy", TaggerAccuracy},
       {"mock-attack", MockAttack},
       {"oracle-equivalence", OracleEquivalence},
       {"statistics-relations", StatisticsRelations},
       {"seb-ingestion", SebIngestion}};
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Verdict verdict;
    try {
      verdict = run();
    } catch (const std::exception& e) {
      verdict = Fail(std::string("threw: ") + e.what());
    }
    const char* tag = verdict.outcome == Outcome::kPass   ? "PASS"
                      : verdict.outcome == Outcome::kSkip ? "SKIP"
                                                          : "FAIL";
    failed += verdict.outcome == Outcome::kFail;
    std::cout << tag << " " << name << ": " << verdict.detail << std::endl;
  }
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}

}  // namespace
}  // namespace asag

int main() { return asag::Main(); }
