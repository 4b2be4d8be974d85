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

"""Law School (LSAC national longitudinal study) -> canonical fairpp CSV.

Writes columns group,label with label = undergraduate GPA on [1, 4]. The
regressor is the identity on the label, so there is no score column; use a
schema with "use_label_as_score": true and "interval": [1, 4].

Race categories are kept as they appear; the --keep most frequent ones are
retained and every other row is dropped. Rows with a missing race or GPA are
dropped too. The expected result is 21,983 rows in 4 groups.
"""

import argparse
import collections
import csv
import sys

MISSING = {"", "NA", "NaN", "nan", "?", "."}


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("input", help="raw CSV with a race column and an undergraduate GPA column")
    ap.add_argument("output", help="canonical CSV to write")
    ap.add_argument("--race-column", default="race")
    ap.add_argument("--gpa-column", default="ugpa")
    ap.add_argument("--keep", type=int, default=4, help="number of race categories to keep (most frequent)")
    args = ap.parse_args()

    rows = []
    with open(args.input, newline="") as f:
        reader = csv.DictReader(f)
        for col in (args.race_column, args.gpa_column):
            if col not in reader.fieldnames:
                sys.exit(f"column '{col}' not in {reader.fieldnames}")
        for r in reader:
            race = r[args.race_column].strip()
            gpa = r[args.gpa_column].strip()
            if race in MISSING or gpa in MISSING:
                continue
            value = float(gpa)
            if not 1.0 <= value <= 4.0:
                sys.exit(f"GPA {value} outside [1, 4]")
            rows.append((race, gpa))

    counts = collections.Counter(race for race, _ in rows)
    kept = {race for race, _ in counts.most_common(args.keep)}
    out = [r for r in rows if r[0] in kept]
    with open(args.output, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["group", "label"])
        w.writerows(out)

    print(f"wrote {len(out)} rows ({len(rows) - len(out)} in dropped categories)")
    for race, n in counts.most_common():
        print(f"  {race:>20}: {n}{'' if race in kept else '  (dropped)'}")
    if len(out) != 21983:
        print("note: expected 21983 rows; check the race coding of this copy of the data")


if __name__ == "__main__":
    main()
