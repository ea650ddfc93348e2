"""Generate the two-level HTM program, run it and print each round's codes.

Leaf 12 is configured to pass unknown patterns through; its third pattern
fits no template, so its parent resolves it and, with ``--feedback``, the
resolution reaches leaf 12 one round later.
"""

from __future__ import annotations

import argparse

from agapia.examples import corpus_dir
from agapia.htm import (
    build_feedback_program,
    build_forward_program,
    bus_layout,
    bus_snapshots,
    display_code,
    input_value,
    node_codes,
    parse_tree_file,
    simulate,
)
from agapia.interp import RunInput, run
from agapia.lang import typecheck

PATTERNS = [[1, 1, 1], [2, 2, 2], [3, 3, 3], [1, 1, 1]]
ODD = [[1, 1, 1], [2, 2, 2], [3, 1, 1], [1, 1, 1]]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tree", default=str(corpus_dir() / "htm2.tree"))
    ap.add_argument("--feedback", action="store_true")
    args = ap.parse_args()
    with open(args.tree, encoding="utf-8") as fh:
        tree = parse_tree_file(fh.read())
    pats = {display_code(l.code): ODD if l.code == "12" else PATTERNS for l in tree.leaves()}
    p = build_feedback_program(tree) if args.feedback else build_forward_program(tree)
    print(f"type: {typecheck(p)}")
    f = run(p, RunInput(west=input_value(tree, pats))).scenario
    print(f"scenario: {f.rows} x {f.cols}")
    bus = bus_layout(tree)
    received = [c.west.items[0].items[bus.received("12") - 1].value
                for row in f.cells for c in row if c.label == "N12"]
    for r, (snap, ref) in enumerate(zip(bus_snapshots(tree, f), simulate(tree, pats)), start=1):
        codes = node_codes(tree, snap)
        line = " ".join(f"{k}={v}" for k, v in codes.items())
        agree = "ok" if codes == {display_code(k): v for k, v in ref.codes.items()} else "DIFFERS"
        print(f"round {r}: {line}  [{agree}]  leaf 12 received {received[r - 1]}")


if __name__ == "__main__":
    main()
