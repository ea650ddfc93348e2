"""The shipped example corpus and its golden runs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

HTM_INPUT = (
    "([[1,1,1],[2,2,2],[3,3,1],[-1]], [[1,1,1],[2,2,2],[3,1,1],[-1]],"
    " [[1,1,1],[2,2,2],[3,3,3],[-1]], [[1,1,1],[2,2,2],[3,3,3],[-1]],"
    " [[1,1,1],[2,2,2],[3,3,3],[-1]], [[1,1,1],[2,2,2],[3,3,3],[-1]])"
)


@dataclass(frozen=True)
class Case:
    north: str = ""
    west: tuple[str, ...] = ()


@dataclass(frozen=True)
class Example:
    name: str
    file: str
    description: str
    cases: tuple[Case, ...]

    @property
    def golden_file(self) -> str:
        return self.file.replace(".agapia", ".golden.json")


_PERFECT = tuple(Case(str(n)) for n in (1, 5, 6, 28, 496))

EXAMPLES: tuple[Example, ...] = (
    Example("perfect1", "perfect1.agapia", "perfect numbers, row by row (while_t over a row)", _PERFECT),
    Example("perfect2", "perfect2.agapia", "perfect numbers, column by column (three stream processors)", _PERFECT),
    Example("htm-forward", "htm_forward.agapia", "two-level HTM tree, forward flow (generated from htm2.tree)",
            (Case("", (HTM_INPUT,)),)),
    Example("htm-feedback", "htm_feedback.agapia", "two-level HTM tree with a diagonal feedback layer",
            (Case("", (HTM_INPUT,)),)),
    Example("diagonal", "diagonal.agapia", "two counters glued diagonally through R/S/Id/Λ constants",
            (Case(),)),
    Example("relay", "relay.agapia", "while_s relay spawning one process per round", (Case("", ("3",)),)),
    Example("countdown", "countdown.agapia", "while_st countdown on both axes", (Case("3", ("3",)),)),
    Example("branch", "branch.agapia", "if on the north input", (Case("-4",), Case("7",))),
)


def corpus_dir() -> Path:
    return Path(str(resources.files("agapia") / "corpus"))


def example(name: str) -> Example:
    for e in EXAMPLES:
        if e.name == name:
            return e
    raise KeyError(name)


def load_golden(e: Example) -> list[dict]:
    return json.loads((corpus_dir() / e.golden_file).read_text(encoding="utf-8"))
