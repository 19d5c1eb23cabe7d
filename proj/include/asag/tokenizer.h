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

#ifndef ASAG_TOKENIZER_H_
#define ASAG_TOKENIZER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace asag {

// A token together with its byte range [start, end) in the source text.
struct TokenSpan {
  std::string surface;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

// Splits on whitespace, then peels ASCII punctuation off both ends of every
// chunk, one character per token. Inner punctuation ("it's", "well-known")
// stays attached.
std::vector<TokenSpan> Tokenize(std::string_view text);

std::vector<std::string> Surfaces(const std::vector<TokenSpan>& spans);

}  // namespace asag

#endif  // ASAG_TOKENIZER_H_
