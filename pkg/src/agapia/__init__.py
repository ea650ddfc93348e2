"""Interactive programs over grids: interfaces, scenarios, an interpreter and an HTM generator."""

from .errors import AgapiaError
from .evaluator import Limits
from .interp import RunInput, RunResult, run
from .lang import parse, print_program, typecheck
from .scenario import Scenario, dcomp, hcomp, vcomp

__version__ = "0.1.0"

__all__ = [
    "AgapiaError",
    "Limits",
    "RunInput",
    "RunResult",
    "Scenario",
    "dcomp",
    "hcomp",
    "parse",
    "print_program",
    "run",
    "typecheck",
    "vcomp",
]
