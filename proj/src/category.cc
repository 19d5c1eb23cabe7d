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

#include "asag/category.h"

namespace asag {

namespace {
constexpr std::array<std::string_view, kNumCategories> kNames = {
    "ADJ", "ADV", "NOUN", "PROPN", "PRON", "VERB", "OTHER"};
}  // namespace

std::string_view CategoryName(Category category) {
  return kNames[static_cast<std::size_t>(category)];
}

std::optional<Category> ParseCategory(std::string_view name) {
  for (std::size_t i = 0; i < kNumCategories; ++i) {
    if (kNames[i] == name) return kAllCategories[i];
  }
  return std::nullopt;
}

}  // namespace asag
