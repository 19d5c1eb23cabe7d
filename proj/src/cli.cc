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

#include "asag/cli.h"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "asag/analytics.h"
#include "asag/attack.h"
#include "asag/corpus.h"
#include "asag/dataset.h"
#include "asag/digest.h"
#include "asag/error.h"
#include "asag/stats.h"
#include "asag/tagger.h"
#include "asag/victim.h"
#include "json.hpp"

#ifndef ASAG_DATA_DIR
#define ASAG_DATA_DIR "data"
#endif
#ifndef ASAG_DEFAULT_MODEL
#define ASAG_DEFAULT_MODEL ""
#endif
#ifndef ASAG_VERSION
#define ASAG_VERSION "0.0.0"
#endif

namespace asag {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

const std::string kDataDir = ASAG_DATA_DIR;

// Everything a run can be configured with. Flags, a JSON config file, or a
// previous run's manifest (for replay) fill it in.
struct RunConfig {
  std::string out_dir = "out";
  bool normalize_timestamps = false;
  std::uint64_t seed = 42;

  std::string corpus = kDataDir + "/corpus/oanc_sample.txt";
  std::string tagset = kDataDir + "/tagsets/ptb.map";
  std::vector<std::string> stopwords = {
      kDataDir + "/stopwords/nltk_english_v1.txt",
      kDataDir + "/stopwords/ptb_clitics.txt"};
  std::size_t k = kDefaultLexiconSize;
  int epochs = 5;
  std::size_t holdout_every = 0;

  std::string format = "jsonl";
  std::string input;
  std::string dataset;
  std::string split;
  std::string lexicon;
  std::string ranked;
  std::string model = ASAG_DEFAULT_MODEL;

  std::string victim = "mock";
  std::vector<std::string> labels = {"correct", "incorrect", "contradictory"};
  std::string target = "correct";
  std::vector<std::string> planted;
  double mock_threshold = 0.6;
  std::string mock_non_target = "incorrect";
  std::vector<std::string> mock_cue_words;
  std::string mock_cue_label;
  bool cache = true;
  std::size_t parallelism = 4;
  long long budget = -1;
  bool stop_at_first = false;

  std::string strategy = "first-slot-top-word";

  std::string log;
  std::string report;
  std::string manifest;
  std::vector<std::string> words;
  std::size_t top = 10;
  std::size_t bins = 10;

  std::string ratings;
  std::string ratings_b;
  std::string metric = "ordinal";
  std::string alternative = "less";
  std::string control = "control";
  std::string adversarial = "adversarial";
  std::string tost_lower = "-inf";
  double tost_upper = 0.5;
  double alpha = 0.05;
};

ojson ConfigToJson(const RunConfig& c) {
  ojson j;
  j["out_dir"] = c.out_dir;
  j["normalize_timestamps"] = c.normalize_timestamps;
  j["seed"] = c.seed;
  j["corpus"] = c.corpus;
  j["tagset"] = c.tagset;
  j["stopwords"] = c.stopwords;
  j["k"] = c.k;
  j["epochs"] = c.epochs;
  j["holdout_every"] = c.holdout_every;
  j["format"] = c.format;
  j["input"] = c.input;
  j["dataset"] = c.dataset;
  j["split"] = c.split;
  j["lexicon"] = c.lexicon;
  j["ranked"] = c.ranked;
  j["model"] = c.model;
  j["victim"] = c.victim;
  j["labels"] = c.labels;
  j["target"] = c.target;
  j["planted"] = c.planted;
  j["mock_threshold"] = c.mock_threshold;
  j["mock_non_target"] = c.mock_non_target;
  j["mock_cue_words"] = c.mock_cue_words;
  j["mock_cue_label"] = c.mock_cue_label;
  j["cache"] = c.cache;
  j["parallelism"] = c.parallelism;
  j["budget"] = c.budget;
  j["stop_at_first"] = c.stop_at_first;
  j["strategy"] = c.strategy;
  j["log"] = c.log;
  j["report"] = c.report;
  j["words"] = c.words;
  j["top"] = c.top;
  j["bins"] = c.bins;
  j["ratings"] = c.ratings;
  j["ratings_b"] = c.ratings_b;
  j["metric"] = c.metric;
  j["alternative"] = c.alternative;
  j["control"] = c.control;
  j["adversarial"] = c.adversarial;
  j["tost_lower"] = c.tost_lower;
  j["tost_upper"] = c.tost_upper;
  j["alpha"] = c.alpha;
  return j;
}

RunConfig ConfigFromJson(const nlohmann::json& j) {
  RunConfig c;
  auto get = [&j](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("out_dir", c.out_dir);
  get("normalize_timestamps", c.normalize_timestamps);
  get("seed", c.seed);
  get("corpus", c.corpus);
  get("tagset", c.tagset);
  get("stopwords", c.stopwords);
  get("k", c.k);
  get("epochs", c.epochs);
  get("holdout_every", c.holdout_every);
  get("format", c.format);
  get("input", c.input);
  get("dataset", c.dataset);
  get("split", c.split);
  get("lexicon", c.lexicon);
  get("ranked", c.ranked);
  get("model", c.model);
  get("victim", c.victim);
  get("labels", c.labels);
  get("target", c.target);
  get("planted", c.planted);
  get("mock_threshold", c.mock_threshold);
  get("mock_non_target", c.mock_non_target);
  get("mock_cue_words", c.mock_cue_words);
  get("mock_cue_label", c.mock_cue_label);
  get("cache", c.cache);
  get("parallelism", c.parallelism);
  get("budget", c.budget);
  get("stop_at_first", c.stop_at_first);
  get("strategy", c.strategy);
  get("log", c.log);
  get("report", c.report);
  get("words", c.words);
  get("top", c.top);
  get("bins", c.bins);
  get("ratings", c.ratings);
  get("ratings_b", c.ratings_b);
  get("metric", c.metric);
  get("alternative", c.alternative);
  get("control", c.control);
  get("adversarial", c.adversarial);
  get("tost_lower", c.tost_lower);
  get("tost_upper", c.tost_upper);
  get("alpha", c.alpha);
  return c;
}

// Lets CLI11 read a flat JSON object as a config file. Keys are option names
// of `subcommand` with '_' or '-' separators; arrays become repeated values.
class JsonConfigReader : public CLI::Config {
 public:
  explicit JsonConfigReader(std::string subcommand)
      : subcommand_(std::move(subcommand)) {}

  std::string to_config(const CLI::App*, bool, bool,
                        std::string) const override {
    return {};
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") +
                                 e.what());
    }
    if (!doc.is_object()) {
      throw CLI::ConversionError("config must be a JSON object");
    }
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      CLI::ConfigItem item;
      if (!subcommand_.empty()) item.parents = {subcommand_};
      item.name = key;
      std::replace(item.name.begin(), item.name.end(), '_', '-');
      auto text = [](const nlohmann::json& v) {
        return v.is_string() ? v.get<std::string>() : v.dump();
      };
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(text(v));
      } else {
        item.inputs.push_back(text(value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  std::string subcommand_;
};

// ---------------------------------------------------------------------------
// Helpers

std::string NowIso8601() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&t, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

void RequireFile(const std::string& path, const std::string& what) {
  if (path.empty()) throw ArgumentError("missing required --" + what);
  if (!fs::exists(path)) {
    throw ArgumentError("--" + what + " path does not exist: " + path);
  }
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void WriteJson(const fs::path& path, const ojson& doc) {
  WriteText(path, doc.dump(1) + "\n");
}

nlohmann::json ReadJsonFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

fs::path PrepareOutDir(const RunConfig& config) {
  const fs::path dir = config.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

// Records what produced the artifacts in an output directory. Timestamps and
// elapsed time live only here.
class Manifest {
 public:
  Manifest(std::string subcommand, const RunConfig& config)
      : subcommand_(std::move(subcommand)),
        config_(config),
        started_(config.normalize_timestamps ? "1970-01-01T00:00:00Z"
                                             : NowIso8601()),
        clock_(std::chrono::steady_clock::now()) {}

  void AddInput(const std::string& path) {
    if (!path.empty() && fs::is_regular_file(path)) {
      inputs_[path] = Sha256File(path);
    }
  }
  void Set(const std::string& key, ojson value) {
    extra_[key] = std::move(value);
  }

  void Write(const fs::path& dir) const {
    const double elapsed =
        config_.normalize_timestamps
            ? 0.0
            : std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            clock_)
                  .count();
    ojson doc;
    doc["tool"] = "asag";
    doc["version"] = ASAG_VERSION;
    doc["subcommand"] = subcommand_;
    doc["seed"] = config_.seed;
    doc["config"] = ConfigToJson(config_);
    ojson inputs = ojson::object();
    for (const auto& [path, digest] : inputs_) inputs[path] = digest;
    doc["inputs"] = std::move(inputs);
    for (const auto& [key, value] : extra_.items()) doc[key] = value;
    doc["started_at"] = started_;
    doc["finished_at"] =
        config_.normalize_timestamps ? "1970-01-01T00:00:00Z" : NowIso8601();
    doc["elapsed_seconds"] = elapsed;
    WriteJson(dir / "manifest.json", doc);
  }

 private:
  std::string subcommand_;
  RunConfig config_;
  std::string started_;
  std::chrono::steady_clock::time_point clock_;
  std::map<std::string, std::string> inputs_;
  ojson extra_ = ojson::object();
};

StopwordList LoadStopwords(const RunConfig& config) {
  std::vector<fs::path> paths(config.stopwords.begin(), config.stopwords.end());
  for (const auto& p : config.stopwords) RequireFile(p, "stopwords");
  return StopwordList::Load(paths);
}

LabelSchema SchemaFromConfig(const RunConfig& config) {
  LabelSchema schema{config.labels, config.target};
  schema.Validate();
  return schema;
}

std::unique_ptr<VictimBackend> MakeBackend(const RunConfig& config,
                                           const StopwordList& stopwords) {
  if (config.victim == "mock") {
    MockVictimConfig mock;
    mock.schema = SchemaFromConfig(config);
    mock.non_target_label = config.mock_non_target;
    mock.overlap_threshold = config.mock_threshold;
    for (const auto& w : config.planted) mock.planted_words.insert(ToLower(w));
    for (const auto& w : config.mock_cue_words) mock.cue_words.insert(ToLower(w));
    mock.cue_label = config.mock_cue_label;
    mock.stopwords = stopwords;
    return std::make_unique<MockVictim>(std::move(mock));
  }
  if (config.victim.rfind("http://", 0) == 0 ||
      config.victim.rfind("https://", 0) == 0) {
    return std::make_unique<HttpVictim>(config.victim);
  }
  throw ArgumentError("--victim must be 'mock' or an http(s):// endpoint");
}

std::vector<AnswerInstance> LoadDataset(const RunConfig& config) {
  auto instances = ReadJsonl(config.dataset);
  if (!config.split.empty()) {
    std::erase_if(instances, [&](const AnswerInstance& i) {
      return i.split != config.split;
    });
  }
  return instances;
}

PerceptronTagger LoadModel(const RunConfig& config) {
  RequireFile(config.model, "model");
  return PerceptronTagger::Load(config.model);
}

GatewayOptions GatewayFrom(const RunConfig& config) {
  GatewayOptions options;
  options.cache = config.cache;
  options.parallelism = config.parallelism;
  options.normalize_timestamps = config.normalize_timestamps;
  return options;
}

// ---------------------------------------------------------------------------
// Subcommands

int ExtractLexiconCommand(const RunConfig& config, std::ostream& out) {
  RequireFile(config.corpus, "corpus");
  RequireFile(config.tagset, "tagset");
  const auto stopwords = LoadStopwords(config);
  Manifest manifest("extract-lexicon", config);
  const auto tagset = TagsetMap::Load(config.tagset);
  const auto sentences = LoadTaggedCorpus(config.corpus, tagset);
  const auto counts = ExtractBigramCandidates(sentences);
  const auto lexicon = BuildLexicon(counts.adjective_counts,
                                    counts.adverb_counts, stopwords, config.k);
  const auto dir = PrepareOutDir(config);
  WriteLexicon(lexicon, dir / "lexicon.json");
  manifest.AddInput(config.corpus);
  manifest.AddInput(config.tagset);
  for (const auto& p : config.stopwords) manifest.AddInput(p);
  manifest.Set("sentences", sentences.size());
  manifest.Write(dir);
  out << "lexicon: " << lexicon.adjectives.size() << " adjectives, "
      << lexicon.adverbs.size() << " adverbs -> "
      << (dir / "lexicon.json").string() << '\n';
  return kExitOk;
}

int TrainTaggerCommand(const RunConfig& config, std::ostream& out) {
  RequireFile(config.corpus, "corpus");
  RequireFile(config.tagset, "tagset");
  Manifest manifest("train-tagger", config);
  const auto tagset = TagsetMap::Load(config.tagset);
  const auto sentences = LoadTaggedCorpus(config.corpus, tagset);
  std::vector<TaggedSentence> train = sentences;
  std::optional<double> heldout_accuracy;
  std::optional<CorpusSplit> split;
  if (config.holdout_every > 0) {
    split = SplitCorpus(sentences, config.holdout_every);
    train = split->train;
  }
  const auto tagger = TrainTagger(train, config.epochs, config.seed,
                                  fs::path(config.corpus).filename().string());
  if (split && !split->heldout.empty()) {
    heldout_accuracy = EvaluateTagger(tagger, split->heldout);
  }
  const auto dir = PrepareOutDir(config);
  tagger.Save(dir / "tagger.json");
  manifest.AddInput(config.corpus);
  manifest.AddInput(config.tagset);
  if (heldout_accuracy) manifest.Set("heldout_accuracy", *heldout_accuracy);
  manifest.Write(dir);
  out << "tagger: " << tagger.model().feature_weights.size() << " features";
  if (heldout_accuracy) out << ", held-out accuracy " << *heldout_accuracy;
  out << " -> " << (dir / "tagger.json").string() << '\n';
  return kExitOk;
}

int IngestCommand(const RunConfig& config, std::ostream& out) {
  if (config.input.empty()) throw ArgumentError("missing required --input");
  if (!fs::exists(config.input)) {
    throw ArgumentError("--input path does not exist: " + config.input);
  }
  Manifest manifest("ingest", config);
  Dataset dataset;
  if (config.format == "seb") {
    dataset = LoadSebXml(config.input);
  } else {
    dataset = LoadPairTsv(config.input, DescriptorByName(config.format));
  }
  ValidateInstances(dataset.instances, dataset.schema);
  const auto dir = PrepareOutDir(config);
  WriteJsonl(dataset.instances, dir / "dataset.jsonl");
  manifest.Set("schema", {{"labels", dataset.schema.labels},
                          {"target_label", dataset.schema.target_label}});
  manifest.Set("instances", dataset.instances.size());
  manifest.Write(dir);
  out << "ingest: " << dataset.instances.size() << " instances -> "
      << (dir / "dataset.jsonl").string() << '\n';
  return kExitOk;
}

// Shared by probe and replay.
int ProbeWith(const RunConfig& config, VictimBackend& backend,
              const std::string& subcommand, std::ostream& out,
              std::ostream& err) {
  const auto stopwords = LoadStopwords(config);
  const auto instances = LoadDataset(config);
  const auto lexicon = ReadLexicon(config.lexicon);
  const auto tagger = LoadModel(config);
  Manifest manifest(subcommand, config);

  const auto dir = PrepareOutDir(config);
  fs::remove(dir / "queries.jsonl");
  QueryLog log(dir / "queries.jsonl");
  VictimGateway gateway(backend, GatewayFrom(config), &log);
  ValidateInstances(instances, gateway.schema());
  LabelOracle oracle(gateway);

  const auto selection = SelectTrueNegatives(instances, oracle);
  err << subcommand << ": " << selection.true_negatives.size() << " of "
      << instances.size() << " instances are true negatives\n";
  ProbeOptions options;
  if (config.budget >= 0) options.budget = static_cast<std::size_t>(config.budget);
  options.stop_at_first_success = config.stop_at_first;
  const auto report =
      RunProbeAttack(selection, lexicon, tagger, oracle, stopwords, options);
  err << subcommand << ": " << report.queries << " queries, "
      << report.num_adversarial << " adversarial examples\n";

  WriteJson(dir / "report.json", ReportToJson(report));
  WriteJson(dir / "ranked.json", RankedToJson(RankWords(report)));
  ExportAdversarialJsonl(report, instances, dir / "adversarial.jsonl");

  manifest.AddInput(config.dataset);
  manifest.AddInput(config.lexicon);
  manifest.AddInput(config.model);
  for (const auto& p : config.stopwords) manifest.AddInput(p);
  manifest.Set("schema", {{"labels", gateway.schema().labels},
                          {"target_label", gateway.schema().target_label}});
  manifest.Set("victim_source", backend.Source());
  manifest.Set("attack_elapsed_seconds",
               config.normalize_timestamps ? 0.0 : report.elapsed.count());
  manifest.Set("cache_hits", gateway.cache_hits());
  manifest.Set("backend_calls", gateway.backend_calls());
  manifest.Write(dir);

  out << subcommand << ": acc " << report.acc_before << " -> "
      << report.acc_after << " (delta " << report.delta_acc << "), #Adv "
      << report.num_adversarial << ", #Aff " << report.num_affected << '\n';
  return kExitOk;
}

int ProbeCommand(const RunConfig& config, std::ostream& out,
                 std::ostream& err) {
  RequireFile(config.dataset, "dataset");
  RequireFile(config.lexicon, "lexicon");
  RequireFile(config.model, "model");
  const auto stopwords = LoadStopwords(config);
  auto backend = MakeBackend(config, stopwords);
  return ProbeWith(config, *backend, "probe", out, err);
}

int ReplayCommand(const RunConfig& flags, const CLI::App& sub,
                  std::ostream& out, std::ostream& err) {
  RequireFile(flags.log, "log");
  const fs::path log_path = fs::absolute(flags.log);
  const fs::path manifest_path = flags.manifest.empty()
                                     ? log_path.parent_path() / "manifest.json"
                                     : fs::path(flags.manifest);
  RequireFile(manifest_path.string(), "manifest");
  const auto previous = ReadJsonFile(manifest_path);
  RunConfig config = ConfigFromJson(previous.at("config"));
  config.log = flags.log;
  config.manifest = manifest_path.string();
  if (sub.count("--out") > 0) config.out_dir = flags.out_dir;
  if (sub.count("--normalize-timestamps") > 0) {
    config.normalize_timestamps = flags.normalize_timestamps;
  }
  if (fs::weakly_canonical(config.out_dir) ==
      fs::weakly_canonical(log_path.parent_path())) {
    throw ArgumentError("replay --out must differ from the logged run's directory");
  }
  RequireFile(config.dataset, "dataset");
  RequireFile(config.lexicon, "lexicon");
  LabelSchema schema;
  try {
    schema.labels = previous.at("schema").at("labels").get<std::vector<std::string>>();
    schema.target_label = previous.at("schema").at("target_label").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(manifest_path.string() + ": no schema: " + e.what());
  }
  ReplayVictim backend(ReadQueryLog(log_path), schema);
  return ProbeWith(config, backend, "replay", out, err);
}

int ApplyCommand(const RunConfig& config, std::ostream& out,
                 std::ostream& err) {
  RequireFile(config.dataset, "dataset");
  RequireFile(config.ranked, "ranked");
  RequireFile(config.model, "model");
  const auto strategy = ParseStrategy(config.strategy);
  const auto stopwords = LoadStopwords(config);
  const auto instances = LoadDataset(config);
  const auto ranked = RankedFromJson(ReadJsonFile(config.ranked));
  const auto tagger = LoadModel(config);
  Manifest manifest("apply", config);

  std::unique_ptr<VictimBackend> backend;
  if (!config.victim.empty() && config.victim != "none") {
    backend = MakeBackend(config, stopwords);
  }
  const auto dir = PrepareOutDir(config);
  ApplyResult result;
  if (backend) {
    fs::remove(dir / "queries.jsonl");
    QueryLog log(dir / "queries.jsonl");
    VictimGateway gateway(*backend, GatewayFrom(config), &log);
    ValidateInstances(instances, gateway.schema());
    LabelOracle oracle(gateway);
    result = ApplyLexicon(instances, ranked, strategy, tagger, stopwords, &oracle);
  } else {
    result = ApplyLexicon(instances, ranked, strategy, tagger, stopwords);
  }
  WriteJsonl(result.modified, dir / "applied.jsonl");
  if (result.report) {
    WriteJson(dir / "apply_report.json", ReportToJson(*result.report));
  }
  manifest.AddInput(config.dataset);
  manifest.AddInput(config.ranked);
  manifest.AddInput(config.model);
  manifest.Set("strategy", StrategyName(strategy));
  manifest.Set("skipped", result.skipped);
  manifest.Write(dir);
  err << "apply: " << result.skipped << " instances without a usable slot\n";
  out << "apply: " << result.modified.size() << " instances -> "
      << (dir / "applied.jsonl").string() << '\n';
  return kExitOk;
}

int AnalyzeCommand(const RunConfig& config, std::ostream& out) {
  const bool want_words = !config.dataset.empty();
  const bool want_histograms = !config.log.empty() || !config.report.empty();
  if (!want_words && !want_histograms) {
    throw ArgumentError("analyze needs --dataset and/or --log with --report");
  }
  std::vector<AnswerInstance> instances;
  std::vector<std::string> words = config.words;
  std::optional<PerceptronTagger> tagger;
  if (want_words) {
    RequireFile(config.dataset, "dataset");
    if (words.empty()) {
      RequireFile(config.ranked, "ranked");
      const auto ranked = RankedFromJson(ReadJsonFile(config.ranked));
      for (const auto* list : {&ranked.adjectives, &ranked.adverbs}) {
        for (std::size_t i = 0; i < list->size() && i < config.top; ++i) {
          words.push_back((*list)[i].first);
        }
      }
    }
    instances = LoadDataset(config);
    tagger = LoadModel(config);
  }
  std::vector<QueryRecord> log;
  std::optional<AttackReport> report;
  if (want_histograms) {
    RequireFile(config.log, "log");
    RequireFile(config.report, "report");
    log = ReadQueryLog(config.log);
    report = ReportFromJson(ReadJsonFile(config.report));
  }
  Manifest manifest("analyze", config);
  const auto dir = PrepareOutDir(config);
  if (want_words) {
    const auto counts = ClassWordDistribution(instances, words,
                                              SchemaFromConfig(config), *tagger);
    WriteJson(dir / "word_distribution.json", ClassWordCountsToJson(counts));
    manifest.AddInput(config.dataset);
    out << "analyze: word distribution over " << instances.size()
        << " answers\n";
  }
  if (want_histograms) {
    const auto histograms = BuildConfidenceHistograms(log, *report, config.bins);
    WriteJson(dir / "histograms.json", HistogramsToJson(histograms));
    if (histograms.available) {
      WriteText(dir / "histogram_true_negatives.txt",
                histograms.true_negatives.ToText());
      WriteText(dir / "histogram_soon_adversarial.txt",
                histograms.soon_adversarial.ToText());
      WriteText(dir / "histogram_adversarial.txt",
                histograms.adversarial.ToText());
      out << "analyze: confidence histograms written\n";
    } else {
      out << "analyze: confidence unavailable for this victim\n";
    }
    manifest.AddInput(config.log);
    manifest.AddInput(config.report);
  }
  manifest.Write(dir);
  return kExitOk;
}

ojson TestResultJson(const TestResult& r) {
  return {{"U", r.u}, {"p", r.p},   {"Z", r.z},          {"r", r.r},
          {"n1", r.n1}, {"n2", r.n2}, {"exact", r.exact}};
}

std::vector<double> PresentMeans(const RatingsMatrix& m) {
  std::vector<double> out;
  for (const auto& v : m.ItemMeans()) {
    if (v) out.push_back(*v);
  }
  return out;
}

const RatingsMatrix& FindGroup(const std::vector<RatingsMatrix>& groups,
                               const std::string& name,
                               const std::string& path) {
  for (const auto& g : groups) {
    if (g.group == name) return g;
  }
  throw ArgumentError(path + " has no group '" + name + "'");
}

int StatsCommand(const RunConfig& config, std::ostream& out) {
  RequireFile(config.ratings, "ratings");
  const auto metric = ParseAlphaMetric(config.metric);
  const auto alternative = ParseAlternative(config.alternative);
  const double lower = std::stod(config.tost_lower);
  Manifest manifest("stats", config);

  const auto groups = LoadRatingsCsv(config.ratings);
  ojson doc;
  ojson agreement = ojson::object();
  for (const auto& g : groups) {
    agreement[g.group] = KrippendorffAlpha(g, metric);
  }
  doc["alpha_metric"] = config.metric;
  doc["krippendorff_alpha"] = std::move(agreement);

  const auto& control = FindGroup(groups, config.control, config.ratings);
  const auto& adversarial = FindGroup(groups, config.adversarial, config.ratings);
  const auto a = PresentMeans(adversarial);
  const auto b = PresentMeans(control);
  const auto u_adv = MannWhitneyU(a, b, alternative);
  const auto u_control = MannWhitneyU(b, a, alternative);
  doc["mann_whitney"] = {{"alternative", AlternativeName(alternative)},
                         {"adversarial", TestResultJson(u_adv)},
                         {"control", TestResultJson(u_control)}};
  const auto tost = TostMannWhitney(a, b, lower, config.tost_upper, config.alpha);
  ojson tost_json = {{"lower_bound", config.tost_lower},
                     {"upper_bound", config.tost_upper},
                     {"alpha", tost.alpha},
                     {"p", tost.p},
                     {"accepted", tost.accepted},
                     {"upper_test", TestResultJson(tost.upper)}};
  if (tost.lower) tost_json["lower_test"] = TestResultJson(*tost.lower);
  doc["tost"] = std::move(tost_json);

  if (!config.ratings_b.empty()) {
    RequireFile(config.ratings_b, "ratings-b");
    const auto other = LoadRatingsCsv(config.ratings_b);
    ojson rho = ojson::object();
    for (const auto& g : groups) {
      const auto& h = FindGroup(other, g.group, config.ratings_b);
      const auto x = g.ItemMeans();
      const auto y = h.ItemMeans();
      if (x.size() != y.size()) {
        throw FormatError("ratings files disagree on the item count of group " +
                          g.group);
      }
      std::vector<double> xs;
      std::vector<double> ys;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] && y[i]) {
          xs.push_back(*x[i]);
          ys.push_back(*y[i]);
        }
      }
      rho[g.group] = SpearmanRho(xs, ys);
    }
    doc["spearman_rho"] = std::move(rho);
    manifest.AddInput(config.ratings_b);
  }
  const auto dir = PrepareOutDir(config);
  WriteJson(dir / "stats.json", doc);
  manifest.AddInput(config.ratings);
  manifest.Write(dir);
  out << "stats: U_adv " << u_adv.u << ", U_control " << u_control.u << ", p "
      << u_adv.p << ", Z " << u_adv.z << ", r " << u_adv.r << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Option wiring

void AddCommon(CLI::App& sub, RunConfig& c) {
  sub.footer("Every option can also come from a JSON file: --config FILE");
  sub.add_option("--out", c.out_dir, "Output directory")->capture_default_str();
  sub.add_flag("--normalize-timestamps", c.normalize_timestamps,
               "Write fixed timestamps and zero durations");
  sub.add_option("--seed", c.seed, "Seed recorded with every artifact")
      ->capture_default_str();
}

void AddStopwords(CLI::App& sub, RunConfig& c) {
  sub.add_option("--stopwords", c.stopwords,
                 "Stopword list file(s), one word per line")
      ->capture_default_str();
}

void AddModel(CLI::App& sub, RunConfig& c) {
  sub.add_option("--model", c.model, "Tagger model JSON")->capture_default_str();
}

void AddDataset(CLI::App& sub, RunConfig& c) {
  sub.add_option("--dataset", c.dataset, "Canonical JSONL dataset");
  sub.add_option("--split", c.split, "Only use instances with this split tag");
}

void AddSchema(CLI::App& sub, RunConfig& c) {
  sub.add_option("--labels", c.labels, "Label set (mock victim / analysis)")
      ->delimiter(',')
      ->capture_default_str();
  sub.add_option("--target", c.target, "Target label")->capture_default_str();
}

void AddVictim(CLI::App& sub, RunConfig& c) {
  sub.add_option("--victim", c.victim, "'mock' or http://host:port")
      ->capture_default_str();
  sub.add_option("--planted", c.planted, "Mock: words that force the target label");
  sub.add_option("--mock-threshold", c.mock_threshold,
                 "Mock: content-word overlap needed for the target label")
      ->capture_default_str();
  sub.add_option("--mock-non-target", c.mock_non_target,
                 "Mock: label for non-target predictions")
      ->capture_default_str();
  sub.add_option("--mock-cue-words", c.mock_cue_words,
                 "Mock: words that trigger --mock-cue-label");
  sub.add_option("--mock-cue-label", c.mock_cue_label, "Mock: cue label");
  sub.add_option("--parallelism", c.parallelism, "Concurrent victim queries")
      ->capture_default_str();
  sub.add_flag("--cache,!--no-cache", c.cache, "Cache victim responses")
      ->capture_default_str();
  AddSchema(sub, c);
}

int Dispatch(CLI::App& app, RunConfig& config, std::ostream& out,
             std::ostream& err) {
  auto is = [&app](const char* name) {
    return app.got_subcommand(name);
  };
  if (is("extract-lexicon")) return ExtractLexiconCommand(config, out);
  if (is("train-tagger")) return TrainTaggerCommand(config, out);
  if (is("ingest")) return IngestCommand(config, out);
  if (is("probe")) return ProbeCommand(config, out, err);
  if (is("apply")) return ApplyCommand(config, out, err);
  if (is("analyze")) return AnalyzeCommand(config, out);
  if (is("stats")) return StatsCommand(config, out);
  if (is("replay")) {
    return ReplayCommand(config, *app.get_subcommand("replay"), out, err);
  }
  throw ArgumentError("no subcommand given");
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  RunConfig config;
  CLI::App app{"Adjective/adverb insertion attack toolkit for short-answer "
               "grading models",
               "asag"};
  app.require_subcommand(1);
  // --config belongs to the root app; subcommands pass it up.
  app.fallthrough();
  app.set_config("--config", "",
                 "JSON config file; command-line flags override its values");
  std::string subcommand;
  for (const auto& arg : args) {
    if (!arg.empty() && arg[0] != '-') {
      subcommand = arg;
      break;
    }
  }
  app.config_formatter(std::make_shared<JsonConfigReader>(subcommand));
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_version_flag("--version", ASAG_VERSION);

  auto* extract = app.add_subcommand(
      "extract-lexicon", "Extract top-k adjective/adverb candidates");
  AddCommon(*extract, config);
  extract->add_option("--corpus", config.corpus, "Tagged corpus")
      ->capture_default_str();
  extract->add_option("--tagset", config.tagset, "Tagset map")
      ->capture_default_str();
  AddStopwords(*extract, config);
  extract->add_option("--k", config.k, "Words kept per list")
      ->capture_default_str();

  auto* train = app.add_subcommand("train-tagger",
                                   "Train the averaged-perceptron tagger");
  AddCommon(*train, config);
  train->add_option("--corpus", config.corpus, "Tagged corpus")
      ->capture_default_str();
  train->add_option("--tagset", config.tagset, "Tagset map")
      ->capture_default_str();
  train->add_option("--epochs", config.epochs, "Training epochs")
      ->capture_default_str();
  train->add_option("--holdout-every", config.holdout_every,
                    "Hold out every n-th sentence and report accuracy (0: off)")
      ->capture_default_str();

  auto* ingest = app.add_subcommand(
      "ingest", "Convert SciEntsBank XML or GLUE TSV to canonical JSONL");
  AddCommon(*ingest, config);
  ingest->add_option("--format", config.format, "seb, rte, mrpc or mnli")
      ->capture_default_str();
  ingest->add_option("--input", config.input, "Dataset directory or TSV file");

  auto* probe = app.add_subcommand(
      "probe", "Select true negatives, probe the victim, rank words");
  AddCommon(*probe, config);
  AddDataset(*probe, config);
  probe->add_option("--lexicon", config.lexicon, "Candidate lexicon JSON");
  AddModel(*probe, config);
  AddStopwords(*probe, config);
  AddVictim(*probe, config);
  probe->add_option("--budget", config.budget,
                    "Maximum victim queries for the probe (-1: exhaustive)")
      ->capture_default_str();
  probe->add_flag("--stop-at-first", config.stop_at_first,
                  "Stop probing an answer after its first success");

  auto* apply = app.add_subcommand(
      "apply", "Insert ranked words into answers without victim feedback");
  AddCommon(*apply, config);
  AddDataset(*apply, config);
  apply->add_option("--ranked", config.ranked, "Ranked lexicon JSON");
  apply->add_option("--strategy", config.strategy,
                    "first-slot-top-word | every-slot-top-word | "
                    "top-n-words-round-robin(N)")
      ->capture_default_str();
  AddModel(*apply, config);
  AddStopwords(*apply, config);
  AddVictim(*apply, config);

  auto* analyze = app.add_subcommand(
      "analyze", "Class-conditional word counts and confidence histograms");
  AddCommon(*analyze, config);
  AddDataset(*analyze, config);
  analyze->add_option("--ranked", config.ranked, "Ranked lexicon JSON");
  analyze->add_option("--words", config.words, "Explicit word list");
  analyze->add_option("--top", config.top, "Top words per kind from --ranked")
      ->capture_default_str();
  AddModel(*analyze, config);
  AddSchema(*analyze, config);
  analyze->add_option("--log", config.log, "Query log JSONL");
  analyze->add_option("--report", config.report, "Attack report JSON");
  analyze->add_option("--bins", config.bins, "Histogram bins")
      ->capture_default_str();

  auto* stats = app.add_subcommand(
      "stats", "Agreement and rank tests on a ratings CSV");
  AddCommon(*stats, config);
  stats->add_option("--ratings", config.ratings, "Ratings CSV");
  stats->add_option("--ratings-b", config.ratings_b,
                    "Second ratings CSV (same items) for Spearman's rho");
  stats->add_option("--metric", config.metric,
                    "Alpha metric: nominal, ordinal, interval")
      ->capture_default_str();
  stats->add_option("--alternative", config.alternative,
                    "two-sided, less or greater (adversarial vs control)")
      ->capture_default_str();
  stats->add_option("--control", config.control, "Control group tag")
      ->capture_default_str();
  stats->add_option("--adversarial", config.adversarial,
                    "Adversarial group tag")
      ->capture_default_str();
  stats->add_option("--tost-lower", config.tost_lower, "TOST lower bound")
      ->capture_default_str();
  stats->add_option("--tost-upper", config.tost_upper, "TOST upper bound")
      ->capture_default_str();
  stats->add_option("--alpha", config.alpha, "Significance level")
      ->capture_default_str();

  auto* replay = app.add_subcommand(
      "replay", "Re-run a probe with verdicts served from its query log");
  AddCommon(*replay, config);
  replay->add_option("--log", config.log, "queries.jsonl of the earlier run");
  replay->add_option("--manifest", config.manifest,
                     "Manifest of the earlier run (default: next to the log)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return Dispatch(app, config, out, err);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const TransportError& e) {
    err << "victim error: " << e.what() << '\n';
    return kExitVictim;
  } catch (const ProtocolError& e) {
    err << "victim error: " << e.what() << '\n';
    return kExitVictim;
  } catch (const ConsistencyError& e) {
    err << "consistency error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace asag
