#!/usr/bin/env python3
"""Reference values for the statistics tests, computed with SciPy and the
`krippendorff` package. The C++ tests pin the printed numbers; rerun this
script to regenerate them."""

import json
import math

import krippendorff
import numpy as np
from scipy import stats


def z_score(a, b, alternative):
  n1, n2 = len(a), len(b)
  pooled = np.concatenate([a, b])
  ranks = stats.rankdata(pooled)
  u = ranks[:n1].sum() - n1 * (n1 + 1) / 2
  _, counts = np.unique(pooled, return_counts=True)
  n = n1 + n2
  var = n1 * n2 / 12 * ((n + 1) - (counts**3 - counts).sum() / (n * (n - 1)))
  d = u - n1 * n2 / 2
  if alternative == "greater":
    d -= 0.5
  elif alternative == "less":
    d += 0.5
  else:
    d = math.copysign(max(abs(d) - 0.5, 0.0), d)
  return u, d / math.sqrt(var)


def mwu_case(a, b, alternative, exact):
  a = np.asarray(a, float)
  b = np.asarray(b, float)
  u, z = z_score(a, b, alternative)
  if exact:
    def statistic(x, y):
      return stats.mannwhitneyu(x, y, method="asymptotic").statistic
    p = stats.permutation_test((a, b), statistic, permutation_type="independent",
                               n_resamples=np.inf, alternative=alternative).pvalue
  else:
    p = stats.mannwhitneyu(a, b, alternative=alternative, use_continuity=True,
                           method="asymptotic").pvalue
  return {"a": a.tolist(), "b": b.tolist(), "alternative": alternative,
          "u": float(u), "z": z, "p": float(p),
          "r": abs(z) / math.sqrt(len(a) + len(b))}


def main():
  rng = np.random.default_rng(7)
  out = {"mwu": []}
  out["mwu"].append(mwu_case([1.2, 3.4, 2.2, 5.0, 4.1, 0.3, 2.2],
                             [2.5, 3.3, 0.9, 6.1, 2.2], "two-sided", True))
  out["mwu"].append(mwu_case([1, 2, 2, 3, 3, 3], [2, 3, 4, 4, 5], "less", True))
  out["mwu"].append(mwu_case([1, 2, 2, 3, 3, 3], [2, 3, 4, 4, 5], "greater",
                             True))
  big_a = rng.integers(1, 6, 25).tolist()
  big_b = rng.integers(2, 6, 20).tolist()
  for alt in ("two-sided", "less", "greater"):
    out["mwu"].append(mwu_case(big_a, big_b, alt, False))

  x = [3.1, 1.2, 4.4, 4.4, 2.0, 5.5, 0.7]
  y = [2.0, 1.1, 3.0, 5.0, 2.0, 4.0, 1.0]
  out["spearman"] = {"x": x, "y": y, "rho": stats.spearmanr(x, y).statistic}

  # rows = raters, columns = items, nan = missing
  data = [[1, 2, 3, 3, 2, 1, 4, 1, 2, np.nan],
          [1, 2, 3, 3, 2, 2, 4, 1, 2, 5],
          [np.nan, 3, 3, 3, 2, 3, 4, 2, 2, 5],
          [1, 2, 3, 3, 2, 4, 4, 1, 2, 5]]
  out["alpha"] = {"data": [[None if math.isnan(v) else int(v) for v in row]
                           for row in data]}
  for level in ("nominal", "ordinal", "interval"):
    out["alpha"][level] = krippendorff.alpha(reliability_data=data,
                                             level_of_measurement=level)
  print(json.dumps(out, indent=1))


if __name__ == "__main__":
  main()
