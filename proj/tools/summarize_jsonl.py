#!/usr/bin/env python3
# Copyright 2026 The poetry-dp Authors
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

"""Rebuild the mode,J,mean_acc,stderr summary from classification JSONL."""

import argparse
import json
import math
import sys


def summarize(lines):
    order = []
    tallies = {}
    for line in lines:
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        key = (rec["mode"], rec["J"])
        if key not in tallies:
            order.append(key)
            tallies[key] = {}
        if rec["status"] != "ok":
            continue
        seed = tallies[key].setdefault(rec["seed"], [0, 0])
        seed[0] += 1 if rec["correct"] else 0
        seed[1] += 1

    def fmt(v):
        return "nan" if math.isnan(v) else f"{v:.6f}"

    out = ["mode,J,mean_acc,stderr"]
    for key in order:
        acc = [c / n for c, n in tallies[key].values()]
        mean = se = float("nan")
        if len(acc) >= 2:
            mean = sum(acc) / len(acc)
            ss = sum((a - mean) ** 2 for a in acc)
            se = math.sqrt(ss / (len(acc) - 1)) / math.sqrt(len(acc))
        elif len(acc) == 1:
            mean = acc[0]
        out.append(f"{key[0]},{key[1]},{fmt(mean)},{fmt(se)}")
    return "\n".join(out) + "\n"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("jsonl")
    parser.add_argument("-o", "--output", help="CSV path (default stdout)")
    args = parser.parse_args()
    with open(args.jsonl) as f:
        csv = summarize(f)
    if args.output:
        with open(args.output, "w") as f:
            f.write(csv)
    else:
        sys.stdout.write(csv)


if __name__ == "__main__":
    main()
