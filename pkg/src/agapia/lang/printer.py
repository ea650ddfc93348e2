"""Canonical text for types, values and programs.

``parse(print_source(s)) == s`` for every well-formed source.
"""

from __future__ import annotations

from ..iface import (
    BaseT,
    BoolV,
    GroupStar,
    GroupUnion,
    IntV,
    InterfaceType,
    InterfaceValue,
    NilT,
    NilV,
    Simple,
    SimpleType,
    SimpleValue,
    StarT,
    StarV,
    TupleT,
    TupleV,
    UnionT,
)
from . import ast as A

# ---------------------------------------------------------------------------
# types


def format_simple(t: SimpleType) -> str:
    if isinstance(t, NilT):
        return "nil"
    if isinstance(t, BaseT):
        return t.kind
    if isinstance(t, UnionT):
        right = format_simple(t.right)
        if isinstance(t.right, UnionT):
            right = f"({right})"
        return f"{format_simple(t.left)}|{right}"
    if isinstance(t, TupleT):
        return "(" + ",".join(_tuple_side(c) for c in t.items) + ")"
    inner = format_simple(t.item)
    if isinstance(t.item, (NilT, BaseT, TupleT)):
        return inner + "*"
    return f"({inner})*"


def _tuple_side(t: SimpleType) -> str:
    s = format_simple(t)
    return f"({s})" if isinstance(t, UnionT) else s


def format_type(t: InterfaceType) -> str:
    """Exact text of an interface type (re-parses to the same value)."""
    if not t.groups:
        return "nil"
    return ";".join(_format_group(g) for g in t.groups)


def _format_group(g) -> str:
    if isinstance(g, Simple):
        return format_simple(g.type)
    if isinstance(g, GroupUnion):
        return f"{_union_operand(g.left)}|{_union_operand(g.right)}"
    return f"({format_type(g.body)};)*"


def _union_operand(t: InterfaceType) -> str:
    if len(t.groups) == 1 and not isinstance(t.groups[0], GroupUnion):
        return format_type(t)
    return f"({format_type(t)})"


def simplify_type(t: InterfaceType) -> InterfaceType:
    """Display normal form: drop repeated union branches and ``(nil;)*``."""
    groups = []
    for g in t.groups:
        groups.extend(_simplify_group(g))
    return InterfaceType(tuple(groups), t.world)


def _simplify_group(g):
    if isinstance(g, Simple):
        return [Simple(_simplify_simple(g.type))]
    if isinstance(g, GroupStar):
        body = simplify_type(g.body)
        if body.is_nil():
            return [Simple(NilT())]
        return [GroupStar(body)]
    branches: list[InterfaceType] = []
    for b in _union_branches(g):
        b = simplify_type(b)
        if b not in branches:
            branches.append(b)
    out = branches[0]
    for b in branches[1:]:
        ls = out.groups[0].type if len(out.groups) == 1 and isinstance(out.groups[0], Simple) else None
        rs = b.groups[0].type if len(b.groups) == 1 and isinstance(b.groups[0], Simple) else None
        if ls is not None and rs is not None:
            out = InterfaceType((Simple(UnionT(ls, rs)),), t_world(out, b))
        else:
            out = InterfaceType((GroupUnion(out, b),), t_world(out, b))
    return list(out.groups)


def t_world(a: InterfaceType, b: InterfaceType):
    return a.world or b.world


def _union_branches(g) -> list[InterfaceType]:
    out = []
    for side in (g.left, g.right):
        if len(side.groups) == 1 and isinstance(side.groups[0], GroupUnion):
            out.extend(_union_branches(side.groups[0]))
        else:
            out.append(side)
    return out


def _simplify_simple(t: SimpleType) -> SimpleType:
    if isinstance(t, UnionT):
        alts: list[SimpleType] = []
        for a in _simple_alts(t):
            a = _simplify_simple(a)
            if a not in alts:
                alts.append(a)
        out = alts[0]
        for a in alts[1:]:
            out = UnionT(out, a)
        return out
    if isinstance(t, TupleT):
        return TupleT(tuple(_simplify_simple(c) for c in t.items))
    if isinstance(t, StarT):
        return StarT(_simplify_simple(t.item))
    return t


def _simple_alts(t: SimpleType) -> list[SimpleType]:
    if isinstance(t, UnionT):
        return _simple_alts(t.left) + _simple_alts(t.right)
    return [t]


def display_type(t: InterfaceType) -> str:
    """Human-facing rendering: simplified, and all-nil lists shown as ``nil``."""
    t = simplify_type(t)
    if t.is_nil():
        return "nil"
    return format_type(t)


def format_program_type(w, n, e, s) -> str:
    return "⟨" + " | ".join(display_type(x) for x in (w, n, e, s)) + "⟩"


# ---------------------------------------------------------------------------
# values


def format_simple_value(v: SimpleValue) -> str:
    if isinstance(v, NilV):
        return "nil"
    if isinstance(v, BoolV):
        return "true" if v.value else "false"
    if isinstance(v, IntV):
        return str(v.value)
    if isinstance(v, TupleV):
        return "(" + ",".join(format_simple_value(c) for c in v.items) + ")"
    return "[" + ",".join(format_simple_value(c) for c in v.items) + "]"


def format_value(v: InterfaceValue, with_names: bool = True) -> str:
    if not v.items:
        return "nil"
    parts = []
    for item, names in zip(v.items, v.names):
        text = format_simple_value(item)
        if with_names and names and len(names) == 1 and not isinstance(item, NilV):
            text = f"{names[0]}={text}"
        parts.append(text)
    return ";".join(parts)


# ---------------------------------------------------------------------------
# expressions

_LEVEL = {"||": 1, "&&": 2, "+": 4, "-": 4, "*": 5, "/": 5, "%": 5}
for _op in A.COMPARE_OPS:
    _LEVEL[_op] = 3


def _level(e: A.Expr) -> int:
    if isinstance(e, A.BinOp):
        return _LEVEL[e.op]
    if isinstance(e, (A.Not, A.Neg)):
        return 6
    if isinstance(e, A.IntLit) and e.value < 0:
        return 6
    return 7


def format_expr(e: A.Expr) -> str:
    if isinstance(e, A.IntLit):
        return str(e.value)
    if isinstance(e, A.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, A.Var):
        return e.name + "".join(_format_selector(s) for s in e.selectors)
    if isinstance(e, A.Not):
        return "!" + _wrap(e.operand, _level(e.operand) < 6)
    if isinstance(e, A.Neg):
        return f"-({format_expr(e.operand)})"
    lv = _LEVEL[e.op]
    left = _wrap(e.left, _level(e.left) < lv or (lv == 3 and _level(e.left) == 3))
    right = _wrap(e.right, _level(e.right) <= lv)
    return f"{left} {e.op} {right}"


def _wrap(e: A.Expr, paren: bool) -> str:
    s = format_expr(e)
    return f"({s})" if paren else s


def _format_selector(s: A.Selector) -> str:
    if s.kind == "group":
        return f"({s.index})"
    mark = "." if s.kind[0] == "s" else "@"
    if s.kind.endswith("field"):
        return f"{mark}{s.index}"
    return f"{mark}[{format_expr(s.index)}]"


# ---------------------------------------------------------------------------
# statements and modules


def format_stmt(s: A.Stmt, indent: str = "") -> str:
    if isinstance(s, A.Seq):
        return ";\n".join(format_stmt(x, indent) for x in s.items)
    if isinstance(s, A.NilStmt):
        return indent + "nil"
    if isinstance(s, A.NewVar):
        return f"{indent}new {s.name}:{format_simple(s.type)}"
    if isinstance(s, A.Assign):
        return f"{indent}{format_expr(s.target)} = {format_expr(s.expr)}"
    inner = indent + "  "
    if isinstance(s, A.IfStmt):
        return (
            f"{indent}if ({format_expr(s.cond)}) {{\n{format_stmt(s.then, inner)}\n{indent}}}"
            f" else {{\n{format_stmt(s.orelse, inner)}\n{indent}}}"
        )
    return f"{indent}while ({format_expr(s.cond)}) {{\n{format_stmt(s.body, inner)}\n{indent}}}"


def _format_decls(decls) -> str:
    if not decls:
        return "nil;"
    return ", ".join(f"{n}:{format_simple(t)}" for n, t in decls) + ";"


def _format_names(names) -> str:
    return (", ".join(names) if names else "nil") + ";"


def format_module(m: A.ModuleAst) -> str:
    body = format_stmt(m.body, "    ")
    return (
        f"module {m.name}{{listen {_format_decls(m.listen)}}}{{read {_format_decls(m.read)}}}\n"
        f"  {{\n{body};\n  }}\n"
        f"  {{speak {_format_names(m.speak)}}}{{write {_format_names(m.write)}}}"
    )


# ---------------------------------------------------------------------------
# programs

_PREC = {A.DComp: 1, A.VSeq: 2, A.HPar: 3}


def format_program(p: A.Program) -> str:
    if isinstance(p, A.NilProg):
        return "nil"
    if isinstance(p, A.ModuleRef):
        return p.module.name
    if isinstance(p, A.IfProg):
        return (
            f"if ({format_expr(p.cond)}) {{{format_program(p.then)}}}"
            f" else {{{format_program(p.orelse)}}}"
        )
    if type(p) in A.LOOPS:
        return f"{A.LOOPS[type(p)]}({format_expr(p.cond)}){{{format_program(p.body)}}}"
    op = A.BINARY_PROGRAMS[type(p)]
    left = format_program(p.first)
    right = format_program(p.second)
    if type(p.first) in _PREC and type(p.first) is not type(p):
        left = f"({left})"
    if type(p.second) in _PREC:
        right = f"({right})"
    return f"{left} {op} {right}"


def format_source(src: A.Source) -> str:
    parts = [format_module(m) for m in src.modules]
    parts.append(format_program(src.program))
    return "\n\n".join(parts)


def print_program(p: A.Program) -> str:
    """Full file text for a program: its modules, then the expression."""
    return format_source(A.Source(p, tuple(A.modules_of(p))))
