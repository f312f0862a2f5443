"""Solver verdicts versus exhaustive enumeration, cell by cell, with timings.

Writes one CSV line per (benchmark, policy, k, axiom).
"""

import argparse
import csv
import sys
import time

from replicheck import BENCHMARKS, load_benchmark
from replicheck.axioms import axioms_for
from replicheck.driver import check
from replicheck.oracle import run_oracle
from replicheck.policies import Policy


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bench", default=",".join(BENCHMARKS))
    ap.add_argument("--policies", default="ec,mw,mr,mw+mr,cc")
    ap.add_argument("--k-max", type=int, default=3)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh)
    w.writerow(["library", "policy", "k", "axiom", "smt", "oracle", "agree", "smt_s", "oracle_s",
                "histories", "executions"])
    bad = 0
    for name in args.bench.split(","):
        lib = load_benchmark(name)
        for pol in args.policies.split(","):
            p = Policy.parse(pol)
            for k in range(1, args.k_max + 1):
                t0 = time.monotonic()
                o = run_oracle(lib, k, p)
                t_oracle = time.monotonic() - t0
                for ax in axioms_for(lib.datatype):
                    r = check(lib, ax, p, k, exact=True)
                    agree = r.status != "unknown" and (r.status == "violation") == o.violated(ax)
                    bad += not agree
                    w.writerow([name, p.name, k, ax.name, r.status, o.violated(ax), agree,
                                round(r.seconds, 3), round(t_oracle, 3), o.histories, o.executions])
                fh.flush()
    print(f"disagreements: {bad}", file=sys.stderr)
    sys.exit(1 if bad else 0)


if __name__ == "__main__":
    main()
