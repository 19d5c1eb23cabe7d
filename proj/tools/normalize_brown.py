#!/usr/bin/env python3
# Copyright 2026 The ASAG Adversarial Insertion Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Converts the NLTK distribution of the Brown corpus to one sentence per line.

Usage: normalize_brown.py BROWN_DIR OUTPUT

BROWN_DIR is the nltk_data/corpora/brown directory (files ca01 ... cr09).
Each output line holds the word/TAG tokens of one sentence with tags
upper-cased, which is the format read by `asag extract-lexicon` and
`asag train-tagger` together with data/tagsets/brown.map.
"""

import argparse
import pathlib
import re
import sys

_FILE_RE = re.compile(r"^c[a-r]\d\d$")


def normalize(brown_dir: pathlib.Path, output: pathlib.Path) -> int:
  files = sorted(p for p in brown_dir.iterdir() if _FILE_RE.match(p.name))
  if not files:
    raise SystemExit(f"no Brown category files found in {brown_dir}")
  sentences = 0
  with output.open("w", encoding="utf-8") as out:
    for path in files:
      for line in path.read_text(encoding="latin-1").splitlines():
        tokens = line.split()
        if not tokens:
          continue
        normalized = []
        for token in tokens:
          word, sep, tag = token.rpartition("/")
          if not sep or not word or not tag:
            raise SystemExit(f"{path.name}: malformed token {token!r}")
          normalized.append(f"{word}/{tag.upper()}")
        out.write(" ".join(normalized) + "\n")
        sentences += 1
  return sentences


def main(argv):
  parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
  parser.add_argument("brown_dir", type=pathlib.Path)
  parser.add_argument("output", type=pathlib.Path)
  args = parser.parse_args(argv)
  count = normalize(args.brown_dir, args.output)
  print(f"{count} sentences -> {args.output}")


if __name__ == "__main__":
  main(sys.argv[1:])
