"""Finite-quotient fingerprints for the family fundamental groups.

For every degree pair d1 <= d2 <= 3 this counts homomorphisms from the
group presented at infinity into each group of order at most 12, giving
a profinite-style fingerprint per pair.  All the groups here have
abelianization Z, so cyclic targets cannot separate them; the table
records what the nonabelian targets see.

The frozen copy lives in tests/data/quotient_fingerprints.json.  Run
with --write to (re)freeze it; the default run recomputes and compares,
exiting 1 on drift.

Usage: python3 scripts/quotient_fingerprints.py [--write] [--max-degree N]
"""

import argparse
import json
from pathlib import Path

from plumbcalc.invariants import count_homs, group_catalog, pi1_presentation

FROZEN = Path(__file__).resolve().parent.parent / "tests" / "data" / "quotient_fingerprints.json"


def compute(max_degree: int) -> dict:
    catalog = group_catalog()
    table = {}
    for d1 in range(1, max_degree + 1):
        for d2 in range(d1, max_degree + 1):
            p = pi1_presentation(d1, d2)
            table[f"{d1},{d2}"] = {
                name: count_homs(p, G) for name, G in sorted(catalog.items())
            }
    return table


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--write", action="store_true",
                    help="freeze the computed table instead of comparing")
    ap.add_argument("--max-degree", type=int, default=3)
    args = ap.parse_args()

    table = compute(args.max_degree)

    for pair, row in table.items():
        nontrivial = {k: v for k, v in row.items() if v > 1}
        print(f"({pair}): {len(nontrivial)} targets with nontrivial maps")

    if args.write:
        FROZEN.parent.mkdir(parents=True, exist_ok=True)
        FROZEN.write_text(json.dumps(table, indent=1, sort_keys=True) + "\n")
        print(f"wrote {FROZEN}")
        return 0

    if not FROZEN.exists():
        print(f"no frozen table at {FROZEN}; run with --write first")
        return 1
    frozen = json.loads(FROZEN.read_text())
    drift = []
    for pair, row in table.items():
        old = frozen.get(pair)
        if old != row:
            drift.append(pair)
    for pair in frozen:
        if pair not in table:
            drift.append(pair)
    if drift:
        print(f"DRIFT in pairs: {sorted(set(drift))}")
        return 1
    print("matches frozen table")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
