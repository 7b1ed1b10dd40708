#!/usr/bin/env python3
"""Closed-form detection probability versus sacrificed pairs, all protocols.

Writes the comparison CSV and prints the pair budget each protocol needs
to push session detection past a target probability.
"""
from __future__ import annotations

import argparse
from pathlib import Path

from entverify import PROTOCOLS, comparison_csv, comparison_table


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-pairs", type=int, default=40)
    ap.add_argument("--target", type=float, default=0.99)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    args = ap.parse_args()

    rows = comparison_table(args.max_pairs)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    target = args.out_dir / "protocol_comparison.csv"
    target.write_text(comparison_csv(rows), encoding="utf-8", newline="")
    print(f"wrote {target} ({len(rows)} rows)")

    for kind in PROTOCOLS:
        budget = next(
            (pairs for k, pairs, p in rows if k == kind and p >= args.target), None
        )
        if budget is None:
            print(f"{kind}: does not reach {args.target} within {args.max_pairs} pairs")
        else:
            print(f"{kind}: reaches {args.target} at {budget} sacrificed pairs")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
