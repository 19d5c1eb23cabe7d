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

#ifndef ASAG_DATASET_H_
#define ASAG_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace asag {

// One gradable item. For entailment-style pair data the question is empty,
// the premise is stored as `reference` and the hypothesis as `answer`.
struct AnswerInstance {
  std::string id;
  std::string question;
  std::string reference;
  std::string answer;
  std::string gold_label;
  std::string split;
  std::vector<std::string> extra_references;

  friend bool operator==(const AnswerInstance&,
                         const AnswerInstance&) = default;
};

struct LabelSchema {
  std::vector<std::string> labels;
  std::string target_label;

  bool Contains(const std::string& label) const;
  // Throws ArgumentError unless |labels| >= 2 and target_label is a member.
  void Validate() const;

  friend bool operator==(const LabelSchema&, const LabelSchema&) = default;
};

LabelSchema SebSchema();

struct Dataset {
  std::vector<AnswerInstance> instances;
  LabelSchema schema;
};

// Reads SemEval-2013 task 7 question files (*.xml) below `root`. The split
// tag comes from the closest enclosing directory named train,
// test-unseen-answers, test-unseen-questions or test-unseen-domains.
Dataset LoadSebXml(const std::filesystem::path& root);

struct PairTsvDescriptor {
  std::optional<std::size_t> id_column;
  std::size_t premise_column = 0;
  std::size_t hypothesis_column = 1;
  std::size_t label_column = 2;
  LabelSchema schema;
  bool has_header = true;
  // Without a header every row must have exactly this many columns.
  std::size_t num_columns = 0;
  std::string split = "dev";
};

// GLUE layouts.
PairTsvDescriptor RteDescriptor();
PairTsvDescriptor MrpcDescriptor();
PairTsvDescriptor MnliDescriptor();
// "rte", "mrpc" or "mnli"; throws ArgumentError otherwise.
PairTsvDescriptor DescriptorByName(const std::string& name);

Dataset LoadPairTsv(const std::filesystem::path& path,
                    const PairTsvDescriptor& descriptor);

void WriteJsonl(const std::vector<AnswerInstance>& instances,
                const std::filesystem::path& path);
std::vector<AnswerInstance> ReadJsonl(const std::filesystem::path& path);

std::string InstanceToJsonLine(const AnswerInstance& instance);
AnswerInstance InstanceFromJsonLine(const std::string& line);

// Throws FormatError on duplicate ids or labels outside the schema.
void ValidateInstances(const std::vector<AnswerInstance>& instances,
                       const LabelSchema& schema);

}  // namespace asag

#endif  // ASAG_DATASET_H_
