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

#include "asag/dataset.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "asag/error.h"
#include "json.hpp"

namespace asag {

bool LabelSchema::Contains(const std::string& label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

void LabelSchema::Validate() const {
  if (labels.size() < 2) {
    throw ArgumentError("label schema needs at least two labels");
  }
  if (!Contains(target_label)) {
    throw ArgumentError("target label '" + target_label +
                        "' is not in the label set");
  }
}

LabelSchema SebSchema() {
  return {{"correct", "incorrect", "contradictory"}, "correct"};
}

// ---------------------------------------------------------------------------
// SciEntsBank XML

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::string>& SplitDirectories() {
  static const std::map<std::string, std::string> kSplits = {
      {"train", "train"},
      {"test-unseen-answers", "UA"},
      {"test-unseen-questions", "UQ"},
      {"test-unseen-domains", "UD"},
  };
  return kSplits;
}

std::string SplitFor(const std::filesystem::path& file) {
  const auto& splits = SplitDirectories();
  for (auto dir = file.parent_path(); !dir.empty() && dir != dir.root_path();
       dir = dir.parent_path()) {
    if (auto it = splits.find(dir.filename().string()); it != splits.end()) {
      return it->second;
    }
  }
  return "unknown";
}

// The 3-way labels are kept; the finer 5-way "not correct" grades collapse
// into incorrect.
std::optional<std::string> ThreeWayLabel(const std::string& accuracy) {
  if (accuracy == "correct" || accuracy == "incorrect" ||
      accuracy == "contradictory") {
    return accuracy;
  }
  if (accuracy == "partially_correct_incomplete" ||
      accuracy == "irrelevant" || accuracy == "non_domain") {
    return "incorrect";
  }
  return std::nullopt;
}

void LoadSebFile(const std::filesystem::path& file,
                 std::vector<AnswerInstance>& out) {
  pt::ptree tree;
  try {
    pt::read_xml(file.string(), tree);
  } catch (const pt::xml_parser_error& e) {
    throw FormatError(file.string() + ": " + e.what());
  }
  const auto question = tree.get_child_optional("question");
  if (!question) throw FormatError(file.string() + ": missing <question>");

  const std::string question_text =
      question->get<std::string>("questionText", "");
  std::vector<std::string> references;
  if (auto refs = question->get_child_optional("referenceAnswers")) {
    for (const auto& [name, node] : *refs) {
      if (name == "referenceAnswer") references.push_back(node.data());
    }
  }
  if (references.empty()) {
    throw FormatError(file.string() + ": question has no reference answer");
  }
  const std::string split = SplitFor(file);
  const auto answers = question->get_child_optional("studentAnswers");
  if (!answers) return;
  for (const auto& [name, node] : *answers) {
    if (name != "studentAnswer") continue;
    const auto accuracy = node.get_optional<std::string>("<xmlattr>.accuracy");
    if (!accuracy) {
      throw FormatError(file.string() +
                        ": studentAnswer without accuracy attribute");
    }
    const auto label = ThreeWayLabel(*accuracy);
    if (!label) {
      throw FormatError(file.string() + ": unknown accuracy value '" +
                        *accuracy + "'");
    }
    AnswerInstance instance;
    instance.id = node.get<std::string>("<xmlattr>.id", "");
    if (instance.id.empty()) {
      throw FormatError(file.string() + ": studentAnswer without id");
    }
    instance.question = question_text;
    instance.reference = references.front();
    instance.extra_references.assign(references.begin() + 1, references.end());
    instance.answer = node.data();
    instance.gold_label = *label;
    instance.split = split;
    out.push_back(std::move(instance));
  }
}

}  // namespace

Dataset LoadSebXml(const std::filesystem::path& root) {
  std::error_code ec;
  if (!std::filesystem::is_directory(root, ec)) {
    throw IoError("cannot read SciEntsBank directory " + root.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry :
       std::filesystem::recursive_directory_iterator(root, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") {
      files.push_back(entry.path());
    }
  }
  if (ec) throw IoError("cannot list " + root.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());

  Dataset dataset;
  dataset.schema = SebSchema();
  for (const auto& file : files) LoadSebFile(file, dataset.instances);
  return dataset;
}

// ---------------------------------------------------------------------------
// Pair TSV

PairTsvDescriptor RteDescriptor() {
  PairTsvDescriptor d;
  d.id_column = 0;
  d.premise_column = 1;
  d.hypothesis_column = 2;
  d.label_column = 3;
  d.schema = {{"entailment", "not_entailment"}, "entailment"};
  return d;
}

PairTsvDescriptor MrpcDescriptor() {
  PairTsvDescriptor d;
  d.premise_column = 3;
  d.hypothesis_column = 4;
  d.label_column = 0;
  d.schema = {{"0", "1"}, "1"};
  return d;
}

PairTsvDescriptor MnliDescriptor() {
  PairTsvDescriptor d;
  d.id_column = 0;
  d.premise_column = 8;
  d.hypothesis_column = 9;
  d.label_column = 15;
  d.schema = {{"entailment", "neutral", "contradiction"}, "entailment"};
  return d;
}

PairTsvDescriptor DescriptorByName(const std::string& name) {
  if (name == "rte") return RteDescriptor();
  if (name == "mrpc") return MrpcDescriptor();
  if (name == "mnli") return MnliDescriptor();
  throw ArgumentError("unknown pair dataset layout '" + name + "'");
}

namespace {

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

}  // namespace

Dataset LoadPairTsv(const std::filesystem::path& path,
                    const PairTsvDescriptor& descriptor) {
  descriptor.schema.Validate();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());

  Dataset dataset;
  dataset.schema = descriptor.schema;
  std::size_t expected = descriptor.num_columns;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = SplitTabs(line);
    if (row == 1 && descriptor.has_header) {
      expected = fields.size();
      continue;
    }
    if (expected != 0 && fields.size() != expected) {
      throw FormatError(path.string() + " row " + std::to_string(row) +
                        ": expected " + std::to_string(expected) +
                        " columns, found " + std::to_string(fields.size()));
    }
    const std::size_t needed =
        std::max({descriptor.premise_column, descriptor.hypothesis_column,
                  descriptor.label_column,
                  descriptor.id_column.value_or(0)}) + 1;
    if (fields.size() < needed) {
      throw FormatError(path.string() + " row " + std::to_string(row) +
                        ": too few columns for the descriptor");
    }
    AnswerInstance instance;
    instance.id = descriptor.id_column
                      ? fields[*descriptor.id_column]
                      : descriptor.split + "-" + std::to_string(row);
    instance.reference = fields[descriptor.premise_column];
    instance.answer = fields[descriptor.hypothesis_column];
    instance.gold_label = fields[descriptor.label_column];
    instance.split = descriptor.split;
    if (!dataset.schema.Contains(instance.gold_label)) {
      throw FormatError(path.string() + " row " + std::to_string(row) +
                        ": label '" + instance.gold_label +
                        "' not in the declared label set");
    }
    dataset.instances.push_back(std::move(instance));
  }
  return dataset;
}

// ---------------------------------------------------------------------------
// Canonical JSONL

std::string InstanceToJsonLine(const AnswerInstance& instance) {
  nlohmann::ordered_json obj;
  obj["id"] = instance.id;
  obj["question"] = instance.question;
  obj["reference"] = instance.reference;
  obj["answer"] = instance.answer;
  obj["gold_label"] = instance.gold_label;
  obj["split"] = instance.split;
  if (!instance.extra_references.empty()) {
    obj["extra_references"] = instance.extra_references;
  }
  return obj.dump();
}

AnswerInstance InstanceFromJsonLine(const std::string& line) {
  try {
    const auto obj = nlohmann::json::parse(line);
    AnswerInstance instance;
    instance.id = obj.at("id").get<std::string>();
    instance.question = obj.at("question").get<std::string>();
    instance.reference = obj.at("reference").get<std::string>();
    instance.answer = obj.at("answer").get<std::string>();
    instance.gold_label = obj.at("gold_label").get<std::string>();
    instance.split = obj.value("split", std::string());
    if (obj.contains("extra_references")) {
      instance.extra_references =
          obj.at("extra_references").get<std::vector<std::string>>();
    }
    return instance;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(e.what());
  }
}

void WriteJsonl(const std::vector<AnswerInstance>& instances,
                const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& instance : instances) {
    out << InstanceToJsonLine(instance) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<AnswerInstance> ReadJsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<AnswerInstance> instances;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      instances.push_back(InstanceFromJsonLine(line));
    } catch (const FormatError& e) {
      throw FormatError(path.string() + " line " + std::to_string(line_no) +
                        ": " + e.what());
    }
  }
  return instances;
}

void ValidateInstances(const std::vector<AnswerInstance>& instances,
                       const LabelSchema& schema) {
  std::set<std::string> seen;
  for (const auto& instance : instances) {
    if (!seen.insert(instance.id).second) {
      throw FormatError("duplicate instance id '" + instance.id + "'");
    }
    if (!schema.Contains(instance.gold_label)) {
      throw FormatError("instance '" + instance.id + "' has label '" +
                        instance.gold_label + "' outside the schema");
    }
  }
}

}  // namespace asag
