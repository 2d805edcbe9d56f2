#!/usr/bin/env python3
# Copyright 2026 The Guji Authors
# SPDX-License-Identifier: Apache-2.0
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Build data/charmap.tsv from an OpenCC STCharacters.txt dictionary.

Keeps one-codepoint entries whose simplified form is a GB2312
character, lists every traditional candidate in OpenCC order (the first is
the canonical target), and drops pairs that would break t2s consistency.

usage: make_charmap.py STCharacters.txt > data/charmap.tsv
"""
import sys


def in_gb2312(ch):
    try:
        b = ch.encode("gb2312")
    except UnicodeEncodeError:
        return False
    return len(b) == 2 and 0xB0 <= b[0] <= 0xF7


def main(path):
    pairs = []
    for line in open(path, encoding="utf-8"):
        line = line.rstrip("\n")
        if not line:
            continue
        simp, trads = line.split("\t")
        if len(simp) != 1 or not in_gb2312(simp):
            continue
        for trad in trads.split(" "):
            if len(trad) == 1:
                pairs.append((trad, simp))
    t2s = {}
    for trad, simp in pairs:
        t2s.setdefault(trad, simp)
    out = []
    seen = set()
    for trad, simp in pairs:
        if t2s[trad] != simp or (trad, simp) in seen:
            continue
        # the simplified form must be a fixed point of t2s
        if t2s.get(simp, simp) != simp:
            continue
        seen.add((trad, simp))
        out.append((trad, simp))
    print("# traditional<TAB>simplified; first listed traditional form wins")
    print("# derived from OpenCC STCharacters.txt (Apache-2.0)")
    for trad, simp in out:
        print(f"{trad}\t{simp}")


if __name__ == "__main__":
    main(sys.argv[1])
