"""Static four-sided interface typing of programs."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import AgapiaTypeError, ScopeError, WorldError
from ..iface import (
    SPATIAL,
    TEMPORAL,
    InterfaceType,
    Simple,
    SimpleType,
    TupleT,
    concat_types,
    convert_world,
    match,
    nil_type,
    simple_world,
    star_type,
    union_types,
)
from . import ast as A
from .printer import display_type, format_program_type


@dataclass(frozen=True)
class ProgramType:
    w: InterfaceType
    n: InterfaceType
    e: InterfaceType
    s: InterfaceType

    def __str__(self) -> str:
        return format_program_type(self.w, self.n, self.e, self.s)

    def sides(self) -> tuple[InterfaceType, ...]:
        return (self.w, self.n, self.e, self.s)


NIL_PROGRAM_TYPE = ProgramType(
    nil_type(TEMPORAL), nil_type(SPATIAL), nil_type(TEMPORAL), nil_type(SPATIAL)
)


def _joined(types: list[SimpleType], world: str) -> InterfaceType:
    if not types:
        return nil_type(world)
    t = types[0] if len(types) == 1 else TupleT(tuple(types))
    return InterfaceType((Simple(t),), world)


def module_declarations(m: A.ModuleAst) -> dict[str, SimpleType]:
    """Every variable a module may touch, with its declared type.

    Raises ScopeError for statements that use a name before any
    declaration could have introduced it.
    """
    declared: dict[str, SimpleType] = {}
    for name, t in m.listen + m.read:
        if name in declared:
            raise ScopeError(f"module {m.name}: {name} declared twice", m.pos)
        declared[name] = t

    def need(names, what):
        for n in sorted(names):
            if n not in declared:
                raise ScopeError(f"module {m.name}: {what} uses undeclared variable {n}", m.pos)

    def walk(s: A.Stmt):
        if isinstance(s, A.NewVar):
            declared.setdefault(s.name, s.type)
        elif isinstance(s, A.Assign):
            need(A.expr_names(s.target) | A.expr_names(s.expr), "assignment")
        elif isinstance(s, A.Seq):
            for x in s.items:
                walk(x)
        elif isinstance(s, A.IfStmt):
            need(A.expr_names(s.cond), "condition")
            walk(s.then)
            walk(s.orelse)
        elif isinstance(s, A.WhileStmt):
            need(A.expr_names(s.cond), "loop condition")
            walk(s.body)

    walk(m.body)
    need(set(m.speak), "speak")
    need(set(m.write), "write")
    return declared


def module_type(m: A.ModuleAst) -> ProgramType:
    for name, t in m.listen:
        if simple_world(t) == SPATIAL:
            raise WorldError(f"module {m.name}: listen variable {name} is spatial", m.pos)
    for name, t in m.read:
        if simple_world(t) == TEMPORAL:
            raise WorldError(f"module {m.name}: read variable {name} is temporal", m.pos)
    decl = module_declarations(m)
    return ProgramType(
        _joined([t for _, t in m.listen], TEMPORAL),
        _joined([t for _, t in m.read], SPATIAL),
        _joined([convert_world(decl[n], TEMPORAL) for n in m.speak], TEMPORAL),
        _joined([convert_world(decl[n], SPATIAL) for n in m.write], SPATIAL),
    )


def _require(ok: bool, comb: str, seam: str, a: InterfaceType, b: InterfaceType, pos):
    if not ok:
        raise AgapiaTypeError(
            f"{comb}: {seam} interfaces do not match ({display_type(a)} vs {display_type(b)})",
            pos,
        )


@dataclass(frozen=True)
class _Names:
    w: frozenset
    n: frozenset
    e: frozenset
    s: frozenset


def _side_names(p: A.Program) -> _Names:
    if isinstance(p, A.NilProg):
        return _Names(frozenset(), frozenset(), frozenset(), frozenset())
    if isinstance(p, A.ModuleRef):
        m = p.module
        return _Names(
            frozenset(n for n, _ in m.listen),
            frozenset(n for n, _ in m.read),
            frozenset(m.speak),
            frozenset(m.write),
        )
    if isinstance(p, (A.VSeq, A.HPar, A.DComp)):
        a, b = _side_names(p.first), _side_names(p.second)
        if isinstance(p, A.HPar):
            return _Names(a.w, a.n | b.n, b.e, a.s | b.s)
        if isinstance(p, A.VSeq):
            return _Names(a.w | b.w, a.n, a.e | b.e, b.s)
        return _Names(a.w, a.n, b.e, b.s)
    if isinstance(p, A.IfProg):
        a, b = _side_names(p.then), _side_names(p.orelse)
        return _Names(a.w | b.w, a.n | b.n, a.e | b.e, a.s | b.s)
    x = _side_names(p.body)
    if isinstance(p, A.WhileT):
        ns = x.n | x.s
        return _Names(x.w, ns, x.e, ns)
    if isinstance(p, A.WhileS):
        we = x.w | x.e
        return _Names(we, x.n, we, x.s)
    we, ns = x.w | x.e, x.n | x.s
    return _Names(we, ns, we, ns)


def guard_scope(p: A.Program) -> frozenset:
    """Names a guard of ``p`` (an if or a loop) may mention."""
    if isinstance(p, A.IfProg):
        a, b = _side_names(p.then), _side_names(p.orelse)
        return (a.w & b.w) | (a.n & b.n)
    x = _side_names(p.body)
    if isinstance(p, A.WhileT):
        # temporal names of the pending west input are also visible
        return (x.n & x.s) | x.w
    if isinstance(p, A.WhileS):
        return (x.w & x.e) | x.n
    return (x.w & x.e) | (x.n & x.s)


def _check_guard(p: A.Program, kind: str):
    scope = guard_scope(p)
    for name in sorted(A.expr_names(p.cond)):
        if name not in scope:
            raise ScopeError(f"{kind} condition uses {name}, which is not on its permitted borders", p.pos)


def typecheck(p: A.Program) -> ProgramType:
    if isinstance(p, A.NilProg):
        return NIL_PROGRAM_TYPE
    if isinstance(p, A.ModuleRef):
        return module_type(p.module)
    if isinstance(p, (A.HPar, A.VSeq, A.DComp)):
        a, b = typecheck(p.first), typecheck(p.second)
        if isinstance(p, A.HPar):
            _require(match(a.e, b.w), "horizontal composition", "east/west", a.e, b.w, p.pos)
            return ProgramType(a.w, concat_types(a.n, b.n), b.e, concat_types(a.s, b.s))
        if isinstance(p, A.VSeq):
            _require(match(a.s, b.n), "vertical composition", "south/north", a.s, b.n, p.pos)
            return ProgramType(concat_types(a.w, b.w), a.n, concat_types(a.e, b.e), b.s)
        _require(match(a.e, b.w), "diagonal composition", "east/west", a.e, b.w, p.pos)
        _require(match(a.s, b.n), "diagonal composition", "south/north", a.s, b.n, p.pos)
        return ProgramType(a.w, a.n, b.e, b.s)
    if isinstance(p, A.IfProg):
        a, b = typecheck(p.then), typecheck(p.orelse)
        _check_guard(p, "if")
        return ProgramType(*(union_types(x, y) for x, y in zip(a.sides(), b.sides())))
    t = typecheck(p.body)
    if isinstance(p, A.WhileT):
        _require(match(t.n, t.s), "while_t", "north/south", t.n, t.s, p.pos)
        _check_guard(p, "while_t")
        ns = union_types(t.n, t.s)
        return ProgramType(star_type(t.w), ns, star_type(t.e), ns)
    if isinstance(p, A.WhileS):
        _require(match(t.w, t.e), "while_s", "west/east", t.w, t.e, p.pos)
        _check_guard(p, "while_s")
        we = union_types(t.w, t.e)
        return ProgramType(we, star_type(t.n), we, star_type(t.s))
    _require(match(t.w, t.e), "while_st", "west/east", t.w, t.e, p.pos)
    _require(match(t.n, t.s), "while_st", "north/south", t.n, t.s, p.pos)
    _check_guard(p, "while_st")
    we, ns = union_types(t.w, t.e), union_types(t.n, t.s)
    return ProgramType(we, ns, we, ns)


def border_names(p: A.Program) -> dict[str, list[tuple[str, ...]] | None]:
    """Per-group variable names on each outer border, where statically known.

    A side is ``None`` when its group count depends on the run (stars) or on
    a branch; callers then leave input items unnamed.
    """

    def go(q):
        if isinstance(q, A.NilProg):
            return {"w": [()], "n": [()], "e": [()], "s": [()]}
        if isinstance(q, A.ModuleRef):
            m = q.module
            return {
                "w": [tuple(n for n, _ in m.listen)],
                "n": [tuple(n for n, _ in m.read)],
                "e": [tuple(m.speak)],
                "s": [tuple(m.write)],
            }

        def cat(x, y):
            return None if x is None or y is None else x + y

        if isinstance(q, (A.HPar, A.VSeq, A.DComp)):
            a, b = go(q.first), go(q.second)
            if isinstance(q, A.HPar):
                return {"w": a["w"], "n": cat(a["n"], b["n"]), "e": b["e"], "s": cat(a["s"], b["s"])}
            if isinstance(q, A.VSeq):
                return {"w": cat(a["w"], b["w"]), "n": a["n"], "e": cat(a["e"], b["e"]), "s": b["s"]}
            return {"w": a["w"], "n": a["n"], "e": b["e"], "s": b["s"]}
        if isinstance(q, A.IfProg):
            a, b = go(q.then), go(q.orelse)
            return {k: a[k] if a[k] == b[k] else None for k in "wnes"}
        x = go(q.body)
        if isinstance(q, A.WhileT):
            ns = x["n"] if x["n"] == x["s"] else None
            return {"w": None, "n": ns, "e": None, "s": ns}
        if isinstance(q, A.WhileS):
            we = x["w"] if x["w"] == x["e"] else None
            return {"w": we, "n": None, "e": we, "s": None}
        we = x["w"] if x["w"] == x["e"] else None
        ns = x["n"] if x["n"] == x["s"] else None
        return {"w": we, "n": ns, "e": we, "s": ns}

    return go(p)


__all__ = [
    "ProgramType",
    "NIL_PROGRAM_TYPE",
    "typecheck",
    "module_type",
    "module_declarations",
    "guard_scope",
    "border_names",
]
