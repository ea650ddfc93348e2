"""Regenerate the HTM corpus programs and every golden run of the example corpus.

Run after an intentional change in the engine, then review the diff.
"""

from __future__ import annotations

import argparse
import json

from agapia.cli import result_json, run_source
from agapia.examples import EXAMPLES, corpus_dir
from agapia.htm import build_feedback_program, build_forward_program, parse_tree_file
from agapia.lang import print_program


def regen_htm():
    d = corpus_dir()
    tree = parse_tree_file((d / "htm2.tree").read_text(encoding="utf-8"))
    (d / "htm_forward.agapia").write_text(print_program(build_forward_program(tree)) + "\n", encoding="utf-8")
    (d / "htm_feedback.agapia").write_text(print_program(build_feedback_program(tree)) + "\n", encoding="utf-8")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--only", nargs="*", help="example names to regenerate")
    args = ap.parse_args()
    regen_htm()
    for e in EXAMPLES:
        if args.only and e.name not in args.only:
            continue
        text = (corpus_dir() / e.file).read_text(encoding="utf-8")
        cases = []
        for c in e.cases:
            r = run_source(text, c.north, c.west)
            cases.append({"north": c.north, "west": list(c.west), "result": result_json(r)})
        (corpus_dir() / e.golden_file).write_text(json.dumps(cases, ensure_ascii=False) + "\n", encoding="utf-8")
        print(f"{e.name}: {len(cases)} case(s)")


if __name__ == "__main__":
    main()
