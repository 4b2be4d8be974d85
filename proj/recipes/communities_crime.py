#!/usr/bin/env python3
# Copyright 2026 The fairpp Authors
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

"""UCI Communities and Crime -> canonical fairpp CSV.

Input is the UCI communities.data file (no header, 128 comma-separated
columns, '?' for missing) together with the attribute names from
communities.names, or any CSV with a header that has the same names.

Output columns: group,label with label = ViolentCrimesPerPop on [0, 1].
group is "minority" when the chosen race column (default racepctblack,
already scaled to [0, 1] by the dataset authors) is at least --threshold,
and "majority" otherwise. See recipes/README.md for the threshold choice.
"""

import argparse
import csv
import sys

LABEL = "ViolentCrimesPerPop"


def read_names(path):
    names = []
    with open(path) as f:
        for line in f:
            if line.startswith("@attribute"):
                names.append(line.split()[1])
    return names


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("input", help="communities.data (with --names) or a CSV with a header row")
    ap.add_argument("output", help="canonical CSV to write")
    ap.add_argument("--names", help="communities.names, for the headerless UCI file")
    ap.add_argument("--column", default="racepctblack")
    ap.add_argument("--threshold", type=float, default=0.06)
    args = ap.parse_args()

    with open(args.input, newline="") as f:
        reader = csv.reader(f)
        header = read_names(args.names) if args.names else next(reader)
        if args.column not in header or LABEL not in header:
            sys.exit(f"need columns '{args.column}' and '{LABEL}'")
        ci, li = header.index(args.column), header.index(LABEL)
        out = []
        for r in reader:
            if not r:
                continue
            if r[ci] in ("?", "") or r[li] in ("?", ""):
                continue
            group = "minority" if float(r[ci]) >= args.threshold else "majority"
            out.append((group, r[li]))

    with open(args.output, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["group", "label"])
        w.writerows(out)
    sizes = {g: sum(1 for o in out if o[0] == g) for g in ("majority", "minority")}
    print(f"wrote {len(out)} rows: {sizes}")
    smallest = min(sizes.values())
    print(f"smallest group {smallest}, expected train count at a 70-30 split ~ {0.7 * smallest:.0f}")


if __name__ == "__main__":
    main()
