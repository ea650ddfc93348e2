"""Abstract syntax of module code and programs.

Interface types inside declarations reuse the classes of :mod:`agapia.iface`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..iface import SimpleType

# ---------------------------------------------------------------------------
# expressions

ARITH_OPS = ("+", "-", "*", "/", "%")
COMPARE_OPS = ("<", ">", "<=", ">=", "==", "!=")
LOGIC_OPS = ("&&", "||")


@dataclass(frozen=True)
class Selector:
    """One step of an accessor path.

    kind is ``group`` for ``(k)``, ``sfield`` for ``.k``, ``sindex`` for
    ``.[e]``, ``tfield`` for ``@k`` and ``tindex`` for ``@[e]``.  Field and
    group indices are literal integers; index selectors take an expression.
    """

    kind: str
    index: "int | Expr"


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Var:
    name: str
    selectors: tuple[Selector, ...] = ()


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Not:
    operand: "Expr"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


Expr = Union[IntLit, BoolLit, Var, BinOp, Not, Neg]

# ---------------------------------------------------------------------------
# module code


@dataclass(frozen=True)
class NilStmt:
    pass


@dataclass(frozen=True)
class NewVar:
    name: str
    type: SimpleType


@dataclass(frozen=True)
class Assign:
    target: Var
    expr: Expr


@dataclass(frozen=True)
class IfStmt:
    cond: Expr
    then: "Stmt"
    orelse: "Stmt"


@dataclass(frozen=True)
class Seq:
    items: tuple["Stmt", ...]


@dataclass(frozen=True)
class WhileStmt:
    cond: Expr
    body: "Stmt"


Stmt = Union[NilStmt, NewVar, Assign, IfStmt, Seq, WhileStmt]

def _pos():
    # source positions ride along for diagnostics but never affect equality
    return field(default=None, compare=False, repr=False)


def seq(*stmts: "Stmt") -> "Stmt":
    """Flattening sequence constructor; a single statement stays as is."""
    flat: list[Stmt] = []
    for s in stmts:
        flat.extend(s.items if isinstance(s, Seq) else (s,))
    if not flat:
        return NilStmt()
    return flat[0] if len(flat) == 1 else Seq(tuple(flat))


@dataclass(frozen=True)
class ModuleAst:
    name: str
    listen: tuple[tuple[str, SimpleType], ...]
    read: tuple[tuple[str, SimpleType], ...]
    body: Stmt
    speak: tuple[str, ...]
    write: tuple[str, ...]
    pos: tuple[int, int] | None = _pos()


# ---------------------------------------------------------------------------
# programs


@dataclass(frozen=True)
class NilProg:
    pass


@dataclass(frozen=True)
class ModuleRef:
    module: ModuleAst
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True)
class IfProg:
    cond: Expr
    then: "Program"
    orelse: "Program"
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True)
class VSeq:
    first: "Program"
    second: "Program"
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True)
class HPar:
    first: "Program"
    second: "Program"
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True)
class DComp:
    first: "Program"
    second: "Program"
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True)
class WhileT:
    cond: Expr
    body: "Program"
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True)
class WhileS:
    cond: Expr
    body: "Program"
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True)
class WhileST:
    cond: Expr
    body: "Program"
    pos: tuple[int, int] | None = _pos()


Program = Union[NilProg, ModuleRef, IfProg, VSeq, HPar, DComp, WhileT, WhileS, WhileST]

BINARY_PROGRAMS = {VSeq: "%", HPar: "#", DComp: "$"}
LOOPS = {WhileT: "while_t", WhileS: "while_s", WhileST: "while_st"}


@dataclass(frozen=True)
class Source:
    """A parsed file: the main program plus the module table in file order."""

    program: Program
    modules: tuple[ModuleAst, ...] = ()

    def module(self, name: str) -> ModuleAst:
        for m in self.modules:
            if m.name == name:
                return m
        raise KeyError(name)


def modules_of(p: Program) -> list[ModuleAst]:
    """Distinct modules referenced by ``p`` in first-use order."""
    out: dict[str, ModuleAst] = {}

    def walk(q):
        if isinstance(q, ModuleRef):
            out.setdefault(q.module.name, q.module)
        elif isinstance(q, (VSeq, HPar, DComp)):
            walk(q.first)
            walk(q.second)
        elif isinstance(q, IfProg):
            walk(q.then)
            walk(q.orelse)
        elif isinstance(q, (WhileT, WhileS, WhileST)):
            walk(q.body)

    walk(p)
    return list(out.values())


def expr_names(e: Expr) -> set[str]:
    if isinstance(e, Var):
        names = {e.name}
        for s in e.selectors:
            if not isinstance(s.index, int):
                names |= expr_names(s.index)
        return names
    if isinstance(e, BinOp):
        return expr_names(e.left) | expr_names(e.right)
    if isinstance(e, (Not, Neg)):
        return expr_names(e.operand)
    return set()
