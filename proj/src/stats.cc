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

#include "asag/stats.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "asag/error.h"

namespace asag {

Alternative ParseAlternative(std::string_view name) {
  if (name == "two-sided") return Alternative::kTwoSided;
  if (name == "less") return Alternative::kLess;
  if (name == "greater") return Alternative::kGreater;
  throw ArgumentError("unknown alternative '" + std::string(name) + "'");
}

std::string_view AlternativeName(Alternative alternative) {
  switch (alternative) {
    case Alternative::kTwoSided:
      return "two-sided";
    case Alternative::kLess:
      return "less";
    case Alternative::kGreater:
      return "greater";
  }
  return {};
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return values[i] < values[j];
  });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share the mean of ranks i+1..j+1.
    const double rank = (static_cast<double>(i + j) + 2.0) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

namespace {

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Exact null distribution of the first sample's doubled rank sum, given the
// pooled (tie-averaged) ranks. Returns P(S <= observed) and P(S >= observed).
std::pair<double, double> ExactTails(const std::vector<double>& pooled_ranks,
                                     std::size_t n1, long observed_doubled) {
  const std::size_t n = pooled_ranks.size();
  std::vector<long> doubled(n);
  long max_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    doubled[i] = std::lround(2.0 * pooled_ranks[i]);
    max_sum += doubled[i];
  }
  // ways[k][s]: number of k-subsets whose doubled ranks sum to s.
  std::vector<std::vector<double>> ways(
      n1 + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
  ways[0][0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = std::min(n1, i + 1); k >= 1; --k) {
      auto& row = ways[k];
      const auto& prev = ways[k - 1];
      for (long s = max_sum; s >= doubled[i]; --s) {
        row[s] += prev[s - doubled[i]];
      }
    }
  }
  double total = 0.0;
  double at_most = 0.0;
  double at_least = 0.0;
  for (long s = 0; s <= max_sum; ++s) {
    const double w = ways[n1][s];
    total += w;
    if (s <= observed_doubled) at_most += w;
    if (s >= observed_doubled) at_least += w;
  }
  return {at_most / total, at_least / total};
}

}  // namespace

TestResult MannWhitneyU(std::span<const double> a, std::span<const double> b,
                        Alternative alternative) {
  if (a.empty() || b.empty()) {
    throw ArgumentError("Mann-Whitney U needs two non-empty samples");
  }
  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  const std::size_t n = n1 + n2;
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  if (std::all_of(pooled.begin(), pooled.end(),
                  [&](double v) { return v == pooled.front(); })) {
    throw ArgumentError("Mann-Whitney U is degenerate: all values are equal");
  }
  const auto ranks = AverageRanks(pooled);
  const double rank_sum_a = std::accumulate(ranks.begin(), ranks.begin() + n1, 0.0);
  const double dn1 = static_cast<double>(n1);
  const double dn2 = static_cast<double>(n2);
  const double dn = static_cast<double>(n);

  TestResult result;
  result.n1 = n1;
  result.n2 = n2;
  result.u = rank_sum_a - dn1 * (dn1 + 1.0) / 2.0;

  std::map<double, std::size_t> tie_sizes;
  for (double v : pooled) ++tie_sizes[v];
  double tie_term = 0.0;
  for (const auto& [value, t] : tie_sizes) {
    const double dt = static_cast<double>(t);
    tie_term += dt * dt * dt - dt;
  }
  const double mean = dn1 * dn2 / 2.0;
  const double sigma =
      std::sqrt(dn1 * dn2 / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0))));
  const double diff = result.u - mean;
  switch (alternative) {
    case Alternative::kGreater:
      result.z = (diff - 0.5) / sigma;
      result.p = 1.0 - NormalCdf(result.z);
      break;
    case Alternative::kLess:
      result.z = (diff + 0.5) / sigma;
      result.p = NormalCdf(result.z);
      break;
    case Alternative::kTwoSided: {
      const double magnitude = std::max(std::abs(diff) - 0.5, 0.0);
      result.z = std::copysign(magnitude, diff) / sigma;
      result.p = std::min(1.0, 2.0 * (1.0 - NormalCdf(std::abs(result.z))));
      break;
    }
  }
  result.r = std::abs(result.z) / std::sqrt(dn);

  if (n1 * n2 <= kExactLimit) {
    const long observed = std::lround(2.0 * rank_sum_a);
    const auto [at_most, at_least] = ExactTails(ranks, n1, observed);
    result.exact = true;
    switch (alternative) {
      case Alternative::kLess:
        result.p = at_most;
        break;
      case Alternative::kGreater:
        result.p = at_least;
        break;
      case Alternative::kTwoSided:
        result.p = std::min(1.0, 2.0 * std::min(at_most, at_least));
        break;
    }
  }
  result.p = std::clamp(result.p, 0.0, 1.0);
  return result;
}

TostResult TostMannWhitney(std::span<const double> a, std::span<const double> b,
                           double lower_bound, double upper_bound,
                           double alpha) {
  if (!(lower_bound < upper_bound)) {
    throw ArgumentError("TOST bounds must satisfy lower < upper");
  }
  auto shifted = [&a](double by) {
    std::vector<double> out(a.begin(), a.end());
    for (double& v : out) v -= by;
    return out;
  };
  TostResult result;
  result.alpha = alpha;
  result.upper = MannWhitneyU(shifted(upper_bound), b, Alternative::kLess);
  result.p = result.upper.p;
  if (std::isfinite(lower_bound)) {
    result.lower = MannWhitneyU(shifted(lower_bound), b, Alternative::kGreater);
    result.p = std::max(result.p, result.lower->p);
  }
  result.accepted = result.p < alpha;
  return result;
}

double SpearmanRho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ArgumentError("Spearman's rho needs sequences of equal length");
  }
  if (x.size() < 2) throw ArgumentError("Spearman's rho needs n >= 2");
  const auto rx = AverageRanks(x);
  const auto ry = AverageRanks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw ArgumentError("Spearman's rho is undefined for a constant sequence");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

AlphaMetric ParseAlphaMetric(std::string_view name) {
  if (name == "nominal") return AlphaMetric::kNominal;
  if (name == "ordinal") return AlphaMetric::kOrdinal;
  if (name == "interval") return AlphaMetric::kInterval;
  throw ArgumentError("unknown alpha metric '" + std::string(name) + "'");
}

std::vector<std::optional<double>> RatingsMatrix::ItemMeans() const {
  std::vector<std::optional<double>> means(items());
  for (std::size_t item = 0; item < items(); ++item) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& rater : scores) {
      if (rater[item]) {
        sum += *rater[item];
        ++count;
      }
    }
    if (count > 0) means[item] = sum / static_cast<double>(count);
  }
  return means;
}

double KrippendorffAlpha(const RatingsMatrix& matrix, AlphaMetric metric) {
  for (const auto& rater : matrix.scores) {
    if (rater.size() != matrix.items()) {
      throw ArgumentError("ratings matrix rows differ in length");
    }
  }
  // Distinct values and their index in sorted order.
  std::map<int, std::size_t> value_index;
  std::size_t pairable_items = 0;
  for (std::size_t item = 0; item < matrix.items(); ++item) {
    std::size_t m = 0;
    for (const auto& rater : matrix.scores) m += rater[item].has_value();
    if (m < 2) continue;
    ++pairable_items;
    for (const auto& rater : matrix.scores) {
      if (rater[item]) value_index.emplace(*rater[item], 0);
    }
  }
  if (pairable_items < 2) {
    throw ArgumentError(
        "Krippendorff's alpha needs at least two items with two ratings");
  }
  std::vector<int> values;
  for (auto& [value, index] : value_index) {
    index = values.size();
    values.push_back(value);
  }
  const std::size_t v = values.size();

  // Coincidence matrix: each ordered pair of ratings within an item adds
  // 1 / (m_u - 1).
  std::vector<std::vector<double>> coincidence(v, std::vector<double>(v, 0.0));
  for (std::size_t item = 0; item < matrix.items(); ++item) {
    std::vector<int> ratings;
    for (const auto& rater : matrix.scores) {
      if (rater[item]) ratings.push_back(*rater[item]);
    }
    if (ratings.size() < 2) continue;
    std::vector<std::size_t> present;
    for (int r : ratings) present.push_back(value_index.at(r));
    const double weight = 1.0 / static_cast<double>(present.size() - 1);
    for (std::size_t i = 0; i < present.size(); ++i) {
      for (std::size_t j = 0; j < present.size(); ++j) {
        if (i != j) coincidence[present[i]][present[j]] += weight;
      }
    }
  }
  std::vector<double> marginals(v, 0.0);
  for (std::size_t c = 0; c < v; ++c) {
    marginals[c] = std::accumulate(coincidence[c].begin(), coincidence[c].end(), 0.0);
  }
  const double total = std::accumulate(marginals.begin(), marginals.end(), 0.0);

  auto delta2 = [&](std::size_t c, std::size_t k) -> double {
    if (c == k) return 0.0;
    switch (metric) {
      case AlphaMetric::kNominal:
        return 1.0;
      case AlphaMetric::kInterval: {
        const double d = static_cast<double>(values[c] - values[k]);
        return d * d;
      }
      case AlphaMetric::kOrdinal: {
        const std::size_t lo = std::min(c, k);
        const std::size_t hi = std::max(c, k);
        double sum = 0.0;
        for (std::size_t g = lo; g <= hi; ++g) sum += marginals[g];
        const double d = sum - (marginals[c] + marginals[k]) / 2.0;
        return d * d;
      }
    }
    return 0.0;
  };

  double observed = 0.0;
  double expected = 0.0;
  for (std::size_t c = 0; c < v; ++c) {
    for (std::size_t k = 0; k < v; ++k) {
      const double d = delta2(c, k);
      observed += coincidence[c][k] * d;
      expected += marginals[c] * marginals[k] * d;
    }
  }
  if (observed == 0.0) return 1.0;
  // alpha = 1 - D_o / D_e with D_o = observed / n, D_e = expected / (n(n-1)).
  return 1.0 - (total - 1.0) * observed / expected;
}

}  // namespace asag
