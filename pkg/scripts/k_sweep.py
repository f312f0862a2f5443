"""Solver time and verdict per invocation bound for one (library, axiom, policy).

    python scripts/k_sweep.py treiber lifo1 mw+mr --k-max 6
"""

import argparse

from replicheck import load_benchmark
from replicheck.axioms import parse_axiom
from replicheck.driver import check
from replicheck.encoder import encode
from replicheck.policies import Policy


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("library")
    ap.add_argument("axiom")
    ap.add_argument("policy")
    ap.add_argument("--k-max", type=int, default=6)
    ap.add_argument("--timeout", type=float, default=600)
    args = ap.parse_args()

    lib = load_benchmark(args.library)
    ax, p = parse_axiom(lib.datatype, args.axiom), Policy.parse(args.policy)
    print("k  verdict    seconds  assertions  script_kb")
    for k in range(1, args.k_max + 1):
        enc = encode(lib, k, p, ax)
        r = check(lib, ax, p, k, exact=True, timeout=args.timeout)
        size = sum(enc.counts.values())
        print(f"{k:<2} {r.status:<10} {r.seconds:7.2f}  {size:10d}  {len(enc.text) / 1024:9.1f}", flush=True)
        if r.status == "violation":
            w = r.witness
            print("   witness history:", w.history)
            print("   counterexample:", w.counterexample.describe(w.abstract_execution()))
            break


if __name__ == "__main__":
    main()
