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

#include "asag/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "asag/error.h"

namespace asag {

std::string ToLower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> SplitWhitespace(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    const std::size_t begin = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos > begin) parts.push_back(line.substr(begin, pos - begin));
  }
  return parts;
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

// ---------------------------------------------------------------------------
// TagsetMap

void TagsetMap::AddExact(std::string raw_tag, Category category) {
  exact_[std::move(raw_tag)] = category;
}

void TagsetMap::AddPrefix(std::string prefix, Category category) {
  prefixes_.emplace_back(std::move(prefix), category);
  std::stable_sort(prefixes_.begin(), prefixes_.end(),
                   [](const auto& a, const auto& b) {
                     return a.first.size() > b.first.size();
                   });
}

void TagsetMap::AddStrippedSuffix(std::string suffix) {
  stripped_suffixes_.push_back(std::move(suffix));
}

Category TagsetMap::Lookup(std::string_view raw_tag) const {
  // Suffixes may stack (e.g. NN-TL-HL), so strip until nothing changes.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& suffix : stripped_suffixes_) {
      if (raw_tag.size() > suffix.size() && EndsWith(raw_tag, suffix)) {
        raw_tag.remove_suffix(suffix.size());
        changed = true;
      }
    }
  }
  if (auto it = exact_.find(raw_tag); it != exact_.end()) return it->second;
  for (const auto& [prefix, category] : prefixes_) {
    if (raw_tag.substr(0, prefix.size()) == prefix) return category;
  }
  return Category::kOther;
}

TagsetMap TagsetMap::Parse(std::istream& in) {
  TagsetMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    const auto fields = SplitWhitespace(view);
    if (fields.empty()) continue;
    if (fields.size() != 2) {
      throw FormatError("tagset map line " + std::to_string(line_no) +
                        ": expected two columns");
    }
    if (fields[0] == "%strip-suffix") {
      map.AddStrippedSuffix(std::string(fields[1]));
      continue;
    }
    const auto category = ParseCategory(fields[1]);
    if (!category) {
      throw FormatError("tagset map line " + std::to_string(line_no) +
                        ": unknown category '" + std::string(fields[1]) + "'");
    }
    if (fields[0].size() > 1 && fields[0].back() == '*') {
      map.AddPrefix(std::string(fields[0].substr(0, fields[0].size() - 1)),
                    *category);
    } else {
      map.AddExact(std::string(fields[0]), *category);
    }
  }
  return map;
}

TagsetMap TagsetMap::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open tagset map " + path.string());
  return Parse(in);
}

// ---------------------------------------------------------------------------
// Corpus parsing

std::vector<TaggedSentence> ParseTaggedCorpus(std::istream& in,
                                              const TagsetMap& tagset) {
  std::vector<TaggedSentence> sentences;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = SplitWhitespace(Trim(line));
    if (fields.empty()) continue;
    TaggedSentence sentence;
    sentence.tokens.reserve(fields.size());
    for (const auto field : fields) {
      // Surfaces may themselves contain '/', e.g. "1/2/CD".
      const auto slash = field.rfind('/');
      if (slash == std::string_view::npos) {
        throw ParseError("token '" + std::string(field) +
                             "' lacks a '/' tag separator",
                         line_no);
      }
      if (slash == 0 || slash + 1 == field.size()) {
        throw ParseError("token '" + std::string(field) +
                             "' has an empty surface or tag",
                         line_no);
      }
      TaggedToken token;
      token.surface = std::string(field.substr(0, slash));
      token.raw_tag = std::string(field.substr(slash + 1));
      token.category = tagset.Lookup(token.raw_tag);
      sentence.tokens.push_back(std::move(token));
    }
    sentences.push_back(std::move(sentence));
  }
  return sentences;
}

std::vector<TaggedSentence> LoadTaggedCorpus(const std::filesystem::path& path,
                                             const TagsetMap& tagset) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus " + path.string());
  return ParseTaggedCorpus(in, tagset);
}

// ---------------------------------------------------------------------------
// Candidate extraction

BigramCandidates ExtractBigramCandidates(
    const std::vector<TaggedSentence>& sentences) {
  BigramCandidates out;
  for (const auto& sentence : sentences) {
    const auto& tokens = sentence.tokens;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
      const Category first = tokens[i].category;
      const Category second = tokens[i + 1].category;
      if (first == Category::kAdj && IsNominal(second)) {
        ++out.adjective_counts[ToLower(tokens[i].surface)];
      } else if (first == Category::kAdv && second == Category::kVerb) {
        ++out.adverb_counts[ToLower(tokens[i].surface)];
      }
    }
  }
  return out;
}

StopwordList StopwordList::Load(
    const std::vector<std::filesystem::path>& paths) {
  std::set<std::string, std::less<>> words;
  std::string id;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open stopword list " + path.string());
    std::string line;
    while (std::getline(in, line)) {
      const auto word = Trim(line);
      if (!word.empty() && word.front() != '#') words.insert(ToLower(word));
    }
    if (!id.empty()) id += '+';
    id += path.stem().string();
  }
  return StopwordList(std::move(words), std::move(id));
}

namespace {

std::vector<WordFrequency> TopK(const WordCounts& counts,
                                const StopwordList& stopwords, std::size_t k) {
  std::vector<WordFrequency> ranked;
  for (const auto& [word, count] : counts) {
    if (!stopwords.Contains(word)) ranked.emplace_back(word, count);
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const WordFrequency& a, const WordFrequency& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

}  // namespace

CandidateLexicon BuildLexicon(const WordCounts& adjective_counts,
                              const WordCounts& adverb_counts,
                              const StopwordList& stopwords, std::size_t k) {
  if (k == 0) throw ArgumentError("lexicon size k must be at least 1");
  CandidateLexicon lexicon;
  lexicon.k = k;
  lexicon.stopword_list_id = stopwords.id();
  lexicon.adjectives = TopK(adjective_counts, stopwords, k);
  lexicon.adverbs = TopK(adverb_counts, stopwords, k);
  return lexicon;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::ordered_json LexiconToJson(const CandidateLexicon& lexicon) {
  nlohmann::ordered_json doc;
  doc["k"] = lexicon.k;
  doc["stopword_list_id"] = lexicon.stopword_list_id;
  auto list = [](const std::vector<WordFrequency>& words) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [word, count] : words) arr.push_back({word, count});
    return arr;
  };
  doc["adjectives"] = list(lexicon.adjectives);
  doc["adverbs"] = list(lexicon.adverbs);
  return doc;
}

CandidateLexicon LexiconFromJson(const nlohmann::json& doc) {
  try {
    CandidateLexicon lexicon;
    lexicon.k = doc.at("k").get<std::size_t>();
    lexicon.stopword_list_id = doc.at("stopword_list_id").get<std::string>();
    auto list = [](const nlohmann::json& arr) {
      std::vector<WordFrequency> words;
      for (const auto& entry : arr) {
        words.emplace_back(entry.at(0).get<std::string>(),
                           entry.at(1).get<std::size_t>());
      }
      return words;
    };
    lexicon.adjectives = list(doc.at("adjectives"));
    lexicon.adverbs = list(doc.at("adverbs"));
    return lexicon;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed lexicon: ") + e.what());
  }
}

void WriteLexicon(const CandidateLexicon& lexicon,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write lexicon " + path.string());
  out << LexiconToJson(lexicon).dump(1) << '\n';
}

CandidateLexicon ReadLexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return LexiconFromJson(doc);
}

}  // namespace asag
