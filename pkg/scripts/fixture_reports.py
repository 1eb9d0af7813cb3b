#!/usr/bin/env python3
"""Print the full pipeline reports for the bundled worked examples.

Usage: python scripts/fixture_reports.py [--json]
"""

import json
import sys

from tropceresa import analyze, builtin_curve, builtin_table

FIXTURES = ("k4", "tl3", "theta-w1", "3balloon")


def main(argv):
    as_json = "--json" in argv
    for name in FIXTURES:
        curve = builtin_curve(name)
        table = builtin_table(name, curve)
        report = analyze(curve, table)
        if as_json:
            print(json.dumps({name: report.to_json()}, indent=2, sort_keys=True))
        else:
            bar = "=" * 60
            print(f"{bar}\n{name}\n{bar}")
            print(report.to_text())
            print()
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
