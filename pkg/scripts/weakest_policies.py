"""Weakest-policy table: one row per benchmark, one cell per axiom.

    python scripts/weakest_policies.py --k-max 4 --budget 900 --out results/weakest.json
"""

import argparse
import json
import time
from pathlib import Path

from replicheck import BENCHMARKS, load_benchmark
from replicheck.axioms import TITLES
from replicheck.driver import SearchConfig, search_all

# six table columns; the last two are the datatype's ordering axioms
LAYOUT = {
    "stack": ["addrem", "injective", "empty-so", "empty-hb", "lifo1", "lifo2"],
    "queue": ["addrem", "injective", "empty-so", "empty-hb", "fifo1", "fifo2"],
    "exchanger": ["addrem", "injective", None, None, None, "exchange"],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bench", default=",".join(BENCHMARKS))
    ap.add_argument("--k-min", type=int, default=2)
    ap.add_argument("--k-max", type=int, default=6)
    ap.add_argument("--timeout", type=float, default=300)
    ap.add_argument("--budget", type=float, default=3600, help="seconds per axiom")
    ap.add_argument("--out")
    args = ap.parse_args()

    rows = {}
    print("| library | AddRem | Injective | Empty[SO] | Empty[HB] | order-1 | order-2 | max query s |")
    print("|---|---|---|---|---|---|---|---|")
    for name in args.bench.split(","):
        lib = load_benchmark(name)
        cfg = SearchConfig(args.k_min, args.k_max, args.timeout, args.budget)
        t0 = time.monotonic()
        reports = search_all(lib, cfg)
        by_name = {r.axiom: r for r in reports.values()}
        cells = []
        for col, n in enumerate(LAYOUT[lib.datatype]):
            if n is None:
                cells.append("-NA-")
                continue
            tag = f" ({TITLES[n]})" if col >= 4 else ""
            cells.append(by_name[TITLES[n]].cell + tag)
        slowest = max((q[3] for r in reports.values() for q in r.queries), default=0.0)
        print(f"| {name} | " + " | ".join(cells) + f" | {slowest:.1f} |", flush=True)
        rows[name] = {
            "seconds": round(time.monotonic() - t0, 1),
            "axioms": {t: {"weakest": r.weakest, "violations": r.violations, "unresolved": r.unresolved,
                           "queries": r.queries} for t, r in reports.items()},
        }
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(json.dumps(rows, indent=2))


if __name__ == "__main__":
    main()
