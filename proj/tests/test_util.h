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

#ifndef ASAG_TESTS_TEST_UTIL_H_
#define ASAG_TESTS_TEST_UTIL_H_

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "asag/category.h"
#include "asag/corpus.h"
#include "asag/tagger.h"

namespace asag::testing {

inline std::filesystem::path DataPath(const std::string& name) {
  return std::filesystem::path(ASAG_TEST_DATA_DIR) / name;
}

inline std::filesystem::path RepoDataPath(const std::string& name) {
  return std::filesystem::path(ASAG_DATA_DIR) / name;
}

// A fresh directory per test, below the build tree.
inline std::filesystem::path TempDir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  auto dir = std::filesystem::path(ASAG_TEST_TMP_DIR) /
             (std::string(info->test_suite_name()) + "." + info->name());
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path TempPath(const std::string& name) {
  return TempDir() / name;
}

inline void WriteFile(const std::filesystem::path& path,
                      const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Tags from a fixed word list; everything else is kOther.
class DictTagger : public Tagger {
 public:
  explicit DictTagger(std::map<std::string, Category> words)
      : words_(std::move(words)) {}

  std::vector<Category> Tag(
      std::span<const std::string> tokens) const override {
    std::vector<Category> out;
    for (const auto& t : tokens) {
      auto it = words_.find(ToLower(t));
      out.push_back(it == words_.end() ? Category::kOther : it->second);
    }
    return out;
  }

 private:
  std::map<std::string, Category> words_;
};

}  // namespace asag::testing

#endif  // ASAG_TESTS_TEST_UTIL_H_
