"""Does adding MW to a policy without MR/WFR/CV ever change what a library can do?

For every history with up to k invocations, compares the sets of reachable
outcomes (returns plus incomplete invocations) under P and P+MW for
P in {EC, RYW}. As a control, also compares MR against MW+MR, where the two
are expected to differ.
"""

import argparse

from replicheck import BENCHMARKS, load_benchmark
from replicheck.frontend import location_universe
from replicheck.oracle import histories
from replicheck.policies import Policy
from replicheck.store import Machine, Program, explore

PAIRS = [("ec", "mw"), ("ryw", "mw+ryw"), ("mr", "mw+mr")]


def outcomes(prog, h, p):
    return {(tuple(sorted(ex.rets.items())), ex.blocked) for ex in explore(Machine(prog, h, p))}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bench", default=",".join(BENCHMARKS))
    ap.add_argument("--k-max", type=int, default=3)
    args = ap.parse_args()

    print(f"{'library':<20}{'pair':<16}{'histories':>10}{'differ':>8}")
    for name in args.bench.split(","):
        lib = load_benchmark(name)
        for a, b in PAIRS:
            pa, pb = Policy.parse(a), Policy.parse(b)
            n = differ = 0
            for k in range(1, args.k_max + 1):
                prog = Program(lib, location_universe(lib, k), 1)
                for h in histories(lib, k):
                    n += 1
                    differ += outcomes(prog, h, pa) != outcomes(prog, h, pb)
            print(f"{name:<20}{pa.name + ' vs ' + pb.name:<16}{n:>10}{differ:>8}", flush=True)


if __name__ == "__main__":
    main()
