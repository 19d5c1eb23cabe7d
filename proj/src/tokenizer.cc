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

#include "asag/tokenizer.h"

#include <cctype>

namespace asag {

namespace {

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }

// Bytes >= 0x80 belong to UTF-8 sequences and are never punctuation here.
bool IsPunct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u);
}

}  // namespace

std::vector<TokenSpan> Tokenize(std::string_view text) {
  std::vector<TokenSpan> spans;
  auto emit = [&](std::size_t start, std::size_t end) {
    spans.push_back({std::string(text.substr(start, end - start)), start, end});
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && IsSpace(text[pos])) ++pos;
    std::size_t begin = pos;
    while (pos < text.size() && !IsSpace(text[pos])) ++pos;
    std::size_t end = pos;
    if (begin == end) break;

    while (begin < end && IsPunct(text[begin])) {
      emit(begin, begin + 1);
      ++begin;
    }
    std::size_t core_end = end;
    while (core_end > begin && IsPunct(text[core_end - 1])) --core_end;
    if (core_end > begin) emit(begin, core_end);
    for (std::size_t p = core_end; p < end; ++p) emit(p, p + 1);
  }
  return spans;
}

std::vector<std::string> Surfaces(const std::vector<TokenSpan>& spans) {
  std::vector<std::string> out;
  out.reserve(spans.size());
  for (const auto& span : spans) out.push_back(span.surface);
  return out;
}

}  // namespace asag
