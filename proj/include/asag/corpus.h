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

#ifndef ASAG_CORPUS_H_
#define ASAG_CORPUS_H_

// Tagged-corpus reader and candidate lexicon extraction.
//
// A corpus is read line by line; every non-blank line is one sentence made of
// whitespace-separated `surface/TAG` tokens. Raw tags are folded into coarse
// categories by a TagsetMap loaded from a small text file, so switching from
// Brown to Penn Treebank tags is a data change only.

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "asag/category.h"
#include "json.hpp"

namespace asag {

struct TaggedToken {
  std::string surface;
  std::string raw_tag;
  Category category = Category::kOther;

  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

struct TaggedSentence {
  std::vector<TaggedToken> tokens;

  friend bool operator==(const TaggedSentence&,
                         const TaggedSentence&) = default;
};

class TagsetMap {
 public:
  TagsetMap() = default;

  // Line format: `RAWTAG CATEGORY`, `PREFIX* CATEGORY`, or
  // `%strip-suffix SUFFIX`. '#' starts a comment.
  static TagsetMap Parse(std::istream& in);
  static TagsetMap Load(const std::filesystem::path& path);

  void AddExact(std::string raw_tag, Category category);
  void AddPrefix(std::string prefix, Category category);
  void AddStrippedSuffix(std::string suffix);

  // Unknown tags map to kOther.
  Category Lookup(std::string_view raw_tag) const;

 private:
  std::map<std::string, Category, std::less<>> exact_;
  // Sorted longest first so the first hit is the most specific one.
  std::vector<std::pair<std::string, Category>> prefixes_;
  std::vector<std::string> stripped_suffixes_;
};

// Throws ParseError naming the 1-based line of the first malformed token.
std::vector<TaggedSentence> ParseTaggedCorpus(std::istream& in,
                                              const TagsetMap& tagset);
std::vector<TaggedSentence> LoadTaggedCorpus(const std::filesystem::path& path,
                                             const TagsetMap& tagset);

using WordCounts = std::map<std::string, std::size_t>;

struct BigramCandidates {
  WordCounts adjective_counts;
  WordCounts adverb_counts;
};

// Counts (ADJ, NOUN|PRON|PROPN) and (ADV, VERB) bigrams inside each sentence,
// keyed by the lowercased first word.
BigramCandidates ExtractBigramCandidates(
    const std::vector<TaggedSentence>& sentences);

using WordFrequency = std::pair<std::string, std::size_t>;

struct CandidateLexicon {
  std::vector<WordFrequency> adjectives;
  std::vector<WordFrequency> adverbs;
  std::size_t k = 0;
  std::string stopword_list_id;

  friend bool operator==(const CandidateLexicon&,
                         const CandidateLexicon&) = default;
};

inline constexpr std::size_t kDefaultLexiconSize = 100;

class StopwordList {
 public:
  StopwordList() = default;
  StopwordList(std::set<std::string, std::less<>> words, std::string id)
      : words_(std::move(words)), id_(std::move(id)) {}

  // One word per line. Several files are merged; the id joins the file stems
  // with '+'.
  static StopwordList Load(const std::vector<std::filesystem::path>& paths);

  bool Contains(std::string_view lowercase_word) const {
    return words_.find(lowercase_word) != words_.end();
  }
  const std::set<std::string, std::less<>>& words() const { return words_; }
  const std::string& id() const { return id_; }

 private:
  std::set<std::string, std::less<>> words_;
  std::string id_;
};

// Drops stopwords, then keeps the top k of each list ordered by
// (frequency desc, word asc). Throws ArgumentError when k == 0.
CandidateLexicon BuildLexicon(const WordCounts& adjective_counts,
                              const WordCounts& adverb_counts,
                              const StopwordList& stopwords,
                              std::size_t k = kDefaultLexiconSize);

nlohmann::ordered_json LexiconToJson(const CandidateLexicon& lexicon);
CandidateLexicon LexiconFromJson(const nlohmann::json& doc);
void WriteLexicon(const CandidateLexicon& lexicon,
                  const std::filesystem::path& path);
CandidateLexicon ReadLexicon(const std::filesystem::path& path);

std::string ToLower(std::string_view text);

}  // namespace asag

#endif  // ASAG_CORPUS_H_
