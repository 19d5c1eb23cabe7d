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

#ifndef ASAG_CATEGORY_H_
#define ASAG_CATEGORY_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace asag {

// Coarse part-of-speech categories. Only the first six matter for finding
// insertion constellations; everything else collapses into kOther.
enum class Category : unsigned char {
  kAdj = 0,
  kAdv,
  kNoun,
  kPropn,
  kPron,
  kVerb,
  kOther,
};

inline constexpr std::size_t kNumCategories = 7;

inline constexpr std::array<Category, kNumCategories> kAllCategories = {
    Category::kAdj,  Category::kAdv,  Category::kNoun, Category::kPropn,
    Category::kPron, Category::kVerb, Category::kOther};

std::string_view CategoryName(Category category);

// Parses "ADJ", "ADV", ...; returns nullopt for anything else.
std::optional<Category> ParseCategory(std::string_view name);

// Nouns, proper nouns and pronouns accept a prepended adjective.
constexpr bool IsNominal(Category c) {
  return c == Category::kNoun || c == Category::kPropn ||
         c == Category::kPron;
}

}  // namespace asag

#endif  // ASAG_CATEGORY_H_
