"""Command-line front end: typecheck, run, htm-gen and the example corpus."""

from __future__ import annotations

import argparse
import difflib
import json
import sys
from pathlib import Path

from .errors import AgapiaError, DivergenceError
from .evaluator import Limits
from .examples import EXAMPLES, Example, corpus_dir, load_golden
from .htm import build_feedback_program, build_forward_program, parse_tree_file
from .iface import SPATIAL, TEMPORAL, InterfaceValue
from .interp import RunInput, RunResult, run
from .lang import format_value, parse, parse_value, print_program, typecheck
from .scenario import encode_interface, render_text, to_structured

OK, DIAGNOSTICS, DIVERGENCE, IO = 0, 1, 2, 3


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _literal(text: str, world: str) -> InterfaceValue:
    return InterfaceValue((), world) if not text.strip() else parse_value(text, world)


def _inputs(north: str, west: list[str] | tuple[str, ...]) -> RunInput:
    w = InterfaceValue((), TEMPORAL)
    for lit in west:
        w = w + _literal(lit, TEMPORAL)
    return RunInput(_literal(north, SPATIAL), w)


def result_json(r: RunResult) -> dict:
    return {
        "scenario": to_structured(r.scenario),
        "east": encode_interface(r.east),
        "south": encode_interface(r.south),
        "diagnostics": list(r.diagnostics),
    }


def run_source(text: str, north: str = "", west=(), limits: Limits = Limits()) -> RunResult:
    src = parse(text)
    return run(src.program, _inputs(north, west), limits)


def _cmd_typecheck(args) -> int:
    print(typecheck(parse(_read(args.file)).program))
    return OK


def _cmd_run(args) -> int:
    r = run_source(_read(args.file), args.north, args.west, Limits(args.step_budget, args.round_cap))
    if args.format == "structured":
        print(json.dumps(result_json(r), indent=1, ensure_ascii=False))
        return OK
    print(render_text(r.scenario))
    print(f"east:  {format_value(r.east)}")
    print(f"south: {format_value(r.south)}")
    for d in r.diagnostics:
        print(f"note: {d}")
    return OK


def _cmd_htm_gen(args) -> int:
    tree = parse_tree_file(_read(args.tree))
    p = build_feedback_program(tree) if args.feedback else build_forward_program(tree)
    text = print_program(p)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return OK


def check_example(e: Example) -> list[str]:
    """Rerun every golden case of ``e``; return unified diffs of mismatches."""
    text = (corpus_dir() / e.file).read_text(encoding="utf-8")
    diffs = []
    for g in load_golden(e):
        got = result_json(run_source(text, g["north"], g["west"]))
        want_s = json.dumps(g["result"], indent=1, ensure_ascii=False).splitlines()
        got_s = json.dumps(got, indent=1, ensure_ascii=False).splitlines()
        if want_s != got_s:
            diffs.append("\n".join(difflib.unified_diff(want_s, got_s, "golden", "actual", lineterm="", n=2)))
    return diffs


def _cmd_examples(args) -> int:
    if args.action == "list":
        for e in EXAMPLES:
            print(f"{e.name:14} {e.file:20} {e.description}")
        return OK
    failed = 0
    for e in EXAMPLES:
        try:
            diffs = check_example(e)
        except AgapiaError as err:
            diffs = [str(err)]
        print(f"{'PASS' if not diffs else 'FAIL'} {e.name}")
        for d in diffs:
            print(d)
        failed += bool(diffs)
    return DIAGNOSTICS if failed else OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="agapia", description="AGAPIA toolchain")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("typecheck", help="print the program interface type")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_typecheck)

    p = sub.add_parser("run", help="run a program and print its scenario")
    p.add_argument("file")
    p.add_argument("--north", default="", help="spatial input literal")
    p.add_argument("--west", action="append", default=[], help="temporal input literal (repeatable)")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--step-budget", type=int, default=Limits().step_budget)
    p.add_argument("--round-cap", type=int, default=Limits().round_cap)
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("htm-gen", help="generate an AGAPIA program from an HTM tree file")
    p.add_argument("tree")
    p.add_argument("-o", "--output")
    p.add_argument("--feedback", action="store_true", help="add the diagonal feedback layer")
    p.set_defaults(fn=_cmd_htm_gen)

    p = sub.add_parser("examples", help="list the corpus or rerun its golden outputs")
    p.add_argument("action", choices=("list", "run-all"))
    p.set_defaults(fn=_cmd_examples)
    return ap


def _source_of(args) -> str:
    return getattr(args, "file", None) or getattr(args, "tree", None) or "agapia"


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    where = _source_of(args)
    try:
        return args.fn(args)
    except DivergenceError as e:
        print(f"{where}:{e}" if e.pos else f"{where}: {e}", file=sys.stderr)
        return DIVERGENCE
    except AgapiaError as e:
        print(f"{where}:{e}" if e.pos else f"{where}: {e}", file=sys.stderr)
        return DIAGNOSTICS
    except ValueError as e:
        print(f"{where}: {e}", file=sys.stderr)
        return DIAGNOSTICS
    except OSError as e:
        print(f"{where}: {e.strerror or e}", file=sys.stderr)
        return IO


if __name__ == "__main__":
    sys.exit(main())
