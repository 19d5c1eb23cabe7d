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

#include <algorithm>
#include <charconv>
#include <fstream>

#include "asag/corpus.h"
#include "asag/error.h"
#include "asag/stats.h"

namespace asag {

namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      cells.push_back(Trim(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(Trim(cell));
  return cells;
}

}  // namespace

std::vector<RatingsMatrix> LoadRatingsCsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open ratings " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty file");
  const auto header = SplitCsv(line);
  std::optional<std::size_t> group_column;
  std::vector<std::size_t> rater_columns;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name = ToLower(header[c]);
    if (name == "group") {
      group_column = c;
    } else if (name != "item") {
      rater_columns.push_back(c);
    }
  }
  if (!group_column) throw FormatError(path.string() + ": no 'group' column");
  if (rater_columns.empty()) throw FormatError(path.string() + ": no rater columns");

  std::vector<RatingsMatrix> groups;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (Trim(line).empty()) continue;
    const auto cells = SplitCsv(line);
    if (cells.size() != header.size()) {
      throw FormatError(path.string() + " row " + std::to_string(row) +
                        ": expected " + std::to_string(header.size()) +
                        " cells");
    }
    const std::string& group = cells[*group_column];
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const RatingsMatrix& m) { return m.group == group; });
    if (it == groups.end()) {
      RatingsMatrix matrix;
      matrix.group = group;
      matrix.scores.resize(rater_columns.size());
      groups.push_back(std::move(matrix));
      it = std::prev(groups.end());
    }
    for (std::size_t r = 0; r < rater_columns.size(); ++r) {
      const std::string& cell = cells[rater_columns[r]];
      std::optional<int> score;
      if (!cell.empty()) {
        int value = 0;
        const auto [ptr, ec] =
            std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (ec != std::errc() || ptr != cell.data() + cell.size() ||
            value < 1 || value > 5) {
          throw FormatError(path.string() + " row " + std::to_string(row) +
                            ": score '" + cell + "' is not in 1..5");
        }
        score = value;
      }
      it->scores[r].push_back(score);
    }
  }
  return groups;
}

}  // namespace asag
