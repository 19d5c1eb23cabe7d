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

#ifndef ASAG_STATS_H_
#define ASAG_STATS_H_

// Rank statistics and inter-annotator agreement for the human evaluation:
// Mann-Whitney U with effect size, a rank-based TOST, Spearman's rho and
// Krippendorff's alpha.

#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace asag {

enum class Alternative { kTwoSided, kLess, kGreater };

Alternative ParseAlternative(std::string_view name);
std::string_view AlternativeName(Alternative alternative);

struct TestResult {
  // U of the first sample: pairs (a_i, b_j) with a_i > b_j, ties count half.
  double u = 0.0;
  double p = 1.0;
  // Normal approximation with tie and continuity correction; its sign follows
  // the direction of the first sample relative to the second.
  double z = 0.0;
  // |z| / sqrt(n1 + n2).
  double r = 0.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  // p from the exact permutation distribution rather than the approximation.
  bool exact = false;
};

// p is exact (tie-aware enumeration) when n1 * n2 <= kExactLimit and from the
// normal approximation otherwise. Throws ArgumentError for an empty sample or
// when every value in both samples is identical.
inline constexpr std::size_t kExactLimit = 400;
TestResult MannWhitneyU(std::span<const double> a, std::span<const double> b,
                        Alternative alternative = Alternative::kTwoSided);

struct TostResult {
  // True when every applicable one-sided test rejects at `alpha`.
  bool accepted = false;
  double p = 1.0;
  TestResult upper;
  std::optional<TestResult> lower;
  double alpha = 0.05;
};

// Location-shift TOST. Upper test: (a - upper_bound) vs b, alternative less.
// Lower test: (a - lower_bound) vs b, alternative greater; skipped when the
// lower bound is -infinity, which turns the procedure into an inferiority
// test.
TostResult TostMannWhitney(std::span<const double> a, std::span<const double> b,
                           double lower_bound, double upper_bound,
                           double alpha = 0.05);

// Mid-ranks (1-based, ties share their average rank).
std::vector<double> AverageRanks(std::span<const double> values);

// Throws ArgumentError for unequal lengths, n < 2 or a constant sequence.
double SpearmanRho(std::span<const double> x, std::span<const double> y);

enum class AlphaMetric { kNominal, kOrdinal, kInterval };

AlphaMetric ParseAlphaMetric(std::string_view name);

struct RatingsMatrix {
  // scores[rater][item]; nullopt marks a missing rating.
  std::vector<std::vector<std::optional<int>>> scores;
  std::string group;

  std::size_t raters() const { return scores.size(); }
  std::size_t items() const { return scores.empty() ? 0 : scores[0].size(); }
  // Mean over the raters who scored the item; nullopt if nobody did.
  std::vector<std::optional<double>> ItemMeans() const;
};

// Coincidence-matrix form of alpha. Perfect agreement yields exactly 1.
// Throws ArgumentError unless at least two items carry two or more ratings.
double KrippendorffAlpha(const RatingsMatrix& matrix,
                         AlphaMetric metric = AlphaMetric::kOrdinal);

// CSV with a header row. Rows are items; a column named "group" carries the
// group tag, an optional "item" column is ignored, every other column is a
// rater. Blank cells are missing; scores must be integers in 1..5. One matrix
// per group, in order of first appearance.
std::vector<RatingsMatrix> LoadRatingsCsv(const std::filesystem::path& path);

}  // namespace asag

#endif  // ASAG_STATS_H_
