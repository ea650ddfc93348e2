"""Run both perfect-number programs over a range of n and list the perfect ones.

Each row prints n, the final z of the row-wise and column-wise programs, and
n minus the sum of its proper divisors computed directly.
"""

from __future__ import annotations

import argparse
import time

from agapia.examples import corpus_dir
from agapia.iface import SPATIAL
from agapia.interp import RunInput, run
from agapia.lang import parse, parse_value


def divisor_gap(n: int) -> int:
    return n - sum(d for d in range(1, n) if n % d == 0)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--upto", type=int, default=200)
    ap.add_argument("--quiet", action="store_true", help="only print the summary")
    args = ap.parse_args()
    progs = [parse((corpus_dir() / f"{name}.agapia").read_text()).program for name in ("perfect1", "perfect2")]
    start = time.perf_counter()
    perfect, mismatches = [], 0
    for n in range(1, args.upto + 1):
        north = RunInput(parse_value(str(n), SPATIAL))
        z1, z2 = (run(p, north).south.items[2].value for p in progs)
        want = divisor_gap(n)
        mismatches += not (z1 == z2 == want)
        if z1 == 0:
            perfect.append(n)
        if not args.quiet:
            print(f"{n:5} {z1:6} {z2:6} {want:6}")
    print(f"perfect: {perfect}")
    print(f"mismatches: {mismatches}  time: {time.perf_counter() - start:.2f}s")
    return 1 if mismatches else 0


if __name__ == "__main__":
    raise SystemExit(main())
