"""Hypothesis strategies shared by the test modules."""

from __future__ import annotations

from hypothesis import strategies as st

from agapia.iface import NIL_V, IntV
from agapia.scenario import Scenario, module_cell

small_ints = st.integers(-9, 9)
maybe_int = st.one_of(st.just(None), small_ints)


def lift(x):
    return NIL_V if x is None else IntV(x)


@st.composite
def spread(draw, items: list, length: int):
    """Place ``items`` in order among ``length`` slots, nil elsewhere."""
    slots = sorted(draw(st.lists(st.integers(0, length - 1), min_size=len(items),
                                 max_size=len(items), unique=True)))
    out: list = [None] * length
    for i, x in zip(slots, items):
        out[i] = x
    return out


@st.composite
def grids(draw, rows: int, cols: int, west=None, north=None,
          nil_free_east: bool = False, nil_free_south: bool = False, tag: str = "M") -> Scenario:
    """A rows x cols scenario of module cells with consistent inner seams."""
    west = west if west is not None else draw(st.lists(maybe_int, min_size=rows, max_size=rows))
    down = list(north if north is not None else draw(st.lists(maybe_int, min_size=cols, max_size=cols)))
    cells = []
    for r in range(rows):
        cur = west[r]
        row = []
        for c in range(cols):
            east = draw(small_ints if nil_free_east and c == cols - 1 else maybe_int)
            south = draw(small_ints if nil_free_south and r == rows - 1 else maybe_int)
            row.append(module_cell(f"{tag}{r}{c}", lift(cur), lift(down[c]), lift(east), lift(south)))
            cur, down[c] = east, south
        cells.append(tuple(row))
    return Scenario(tuple(cells))


def ints_of(v) -> list:
    return [None if x == NIL_V else x.value for x in v.items]


@st.composite
def right_of(draw, f: Scenario, max_rows: int = 3, max_cols: int = 2, **kw) -> Scenario:
    """A scenario whose west border equals ``f``'s east up to nil."""
    items = [x for x in ints_of(f.east) if x is not None]
    rows = draw(st.integers(max(1, len(items)), max(max_rows, len(items))))
    west = draw(spread(items, rows))
    return draw(grids(rows, draw(st.integers(1, max_cols)), west=west, **kw))


@st.composite
def below(draw, f: Scenario, max_rows: int = 2, max_cols: int = 3, **kw) -> Scenario:
    """A scenario whose north border equals ``f``'s south up to nil."""
    items = [x for x in ints_of(f.south) if x is not None]
    cols = draw(st.integers(max(1, len(items)), max(max_cols, len(items))))
    north = draw(spread(items, cols))
    return draw(grids(draw(st.integers(1, max_rows)), cols, north=north, **kw))


@st.composite
def diagonal_pairs(draw, sizes=(1, 2)):
    """(f1, f2) whose east/west and south/north seams align up to nil."""
    r1, c1 = draw(st.sampled_from(sizes)), draw(st.sampled_from(sizes))
    f1 = draw(grids(r1, c1, tag="A"))
    east = [x for x in ints_of(f1.east) if x is not None]
    south = [x for x in ints_of(f1.south) if x is not None]
    r2 = max(draw(st.sampled_from(sizes)), len(east))
    c2 = max(draw(st.sampled_from(sizes)), len(south))
    f2 = draw(grids(r2, c2, west=draw(spread(east, r2)), north=draw(spread(south, c2)), tag="B"))
    return f1, f2


# ---------------------------------------------------------------------------
# abstract syntax

from agapia.iface import NIL_T, BaseT, StarT, TupleT, UnionT  # noqa: E402
from agapia.lang import ast as A  # noqa: E402

var_names = st.sampled_from(["x", "y", "z", "tx", "k1", "acc"])
module_names = st.sampled_from(["A", "B", "C", "U1", "Node"])


def simple_type_of(world: str, depth: int = 2):
    kinds = ("sn", "sb") if world == "spatial" else ("tn", "tb")
    leaf = st.one_of(st.just(NIL_T), st.sampled_from(kinds).map(BaseT))
    if depth == 0:
        return leaf
    sub = simple_type_of(world, depth - 1)
    return st.one_of(
        leaf,
        leaf,
        st.tuples(sub, sub).map(lambda p: UnionT(*p)),
        st.lists(sub, min_size=2, max_size=3).map(lambda xs: TupleT(tuple(xs))),
        sub.map(StarT),
    )


def exprs(depth: int = 3):
    int_lit = st.integers(-50, 50).map(A.IntLit)
    leaf = st.one_of(int_lit, st.booleans().map(A.BoolLit), var_names.map(A.Var))
    if depth == 0:
        return leaf
    sub = exprs(depth - 1)
    selector = st.one_of(
        st.tuples(st.sampled_from(["group", "sfield", "tfield"]), st.integers(1, 4)),
        st.tuples(st.sampled_from(["sindex", "tindex"]), sub),
    ).map(lambda p: A.Selector(*p))
    ops = A.ARITH_OPS + A.COMPARE_OPS + A.LOGIC_OPS
    return st.one_of(
        leaf,
        st.tuples(var_names, st.lists(selector, min_size=1, max_size=2)).map(
            lambda p: A.Var(p[0], tuple(p[1]))
        ),
        st.tuples(st.sampled_from(ops), sub, sub).map(lambda p: A.BinOp(*p)),
        sub.map(A.Not),
        sub.map(A.Neg),
    )


def stmts(depth: int = 2):
    assign = st.tuples(var_names, exprs(2)).map(lambda p: A.Assign(A.Var(p[0]), p[1]))
    leaf = st.one_of(
        st.just(A.NilStmt()),
        st.tuples(var_names, simple_type_of("spatial", 1)).map(lambda p: A.NewVar(*p)),
        assign,
        assign,
    )
    if depth == 0:
        return leaf
    sub = stmts(depth - 1)
    return st.one_of(
        leaf,
        st.tuples(exprs(2), sub, sub).map(lambda p: A.IfStmt(*p)),
        st.tuples(exprs(2), sub).map(lambda p: A.WhileStmt(*p)),
        st.lists(sub, min_size=2, max_size=3).map(lambda xs: A.seq(*xs)),
    )


@st.composite
def modules(draw, name: str):
    def decls(world):
        names = draw(st.lists(var_names, max_size=3, unique=True))
        return tuple((n, draw(simple_type_of(world, 1))) for n in names)

    listen = decls("temporal")
    read = tuple(d for d in decls("spatial") if d[0] not in {n for n, _ in listen})
    return A.ModuleAst(
        name,
        listen,
        read,
        draw(stmts()),
        tuple(draw(st.lists(var_names, max_size=2, unique=True))),
        tuple(draw(st.lists(var_names, max_size=2, unique=True))),
    )


def programs_over(table: list, depth: int = 3):
    leaf = st.one_of(st.just(A.NilProg()), st.sampled_from(table).map(A.ModuleRef))
    if depth == 0:
        return leaf
    sub = programs_over(table, depth - 1)
    binary = st.sampled_from([A.VSeq, A.HPar, A.DComp])
    loop = st.sampled_from([A.WhileT, A.WhileS, A.WhileST])
    return st.one_of(
        leaf,
        st.tuples(binary, sub, sub).map(lambda p: p[0](p[1], p[2])),
        st.tuples(loop, exprs(2), sub).map(lambda p: p[0](p[1], p[2])),
        st.tuples(exprs(2), sub, sub).map(lambda p: A.IfProg(*p)),
    )


@st.composite
def programs(draw):
    names = draw(st.lists(module_names, min_size=1, max_size=3, unique=True))
    table = [draw(modules(n)) for n in names]
    return draw(programs_over(table))


# ---------------------------------------------------------------------------
# well-typed programs over a fixed pool of integer modules

from agapia.errors import AgapiaError  # noqa: E402
from agapia.iface import (  # noqa: E402
    GroupStar,
    GroupUnion,
    InterfaceType,
    InterfaceValue,
    NilT,
    Simple,
)
from agapia.lang import parse, typecheck  # noqa: E402

POOL_SOURCE = """
module Src{listen nil;}{read nil;}{new a:tn; new b:sn; a = 3; b = 2;}{speak a;}{write b;}
module Inc{listen a:tn;}{read b:sn;}{a = a + 1; b = b + 1;}{speak a;}{write b;}
module Dec{listen a:tn;}{read b:sn;}{a = a - 1; b = b - 1;}{speak a;}{write b;}
module Sink{listen a:tn;}{read b:sn;}{nil;}{speak nil;}{write nil;}
module T2S{listen a:tn;}{read nil;}{new b:sn; b = a;}{speak nil;}{write b;}
module S2T{listen nil;}{read b:sn;}{new a:tn; a = b;}{speak a;}{write nil;}
module DecS{listen nil;}{read b:sn;}{b = b - 1;}{speak nil;}{write b;}
module DecT{listen a:tn;}{read nil;}{a = a - 1;}{speak a;}{write nil;}
module Both{listen a:tn;}{read nil;}{new b:sn; b = a * 2;}{speak a;}{write b;}
nil
"""
POOL = parse(POOL_SOURCE).modules

GUARDS = {
    A.WhileT: "b > 0",
    A.WhileS: "a > 0",
    A.WhileST: "a > 0 && b > 0",
    A.IfProg: "b > 1",
}


def _guard(kind):
    from agapia.lang import parse_expr

    return parse_expr(GUARDS[kind])


def raw_programs(depth: int = 3, loops: bool = True):
    leaf = st.sampled_from(POOL).map(A.ModuleRef)
    if depth == 0:
        return leaf
    sub = raw_programs(depth - 1, loops)
    options = [
        leaf,
        st.tuples(st.sampled_from([A.VSeq, A.HPar, A.DComp]), sub, sub).map(lambda p: p[0](p[1], p[2])),
        st.tuples(sub, sub).map(lambda p: A.IfProg(_guard(A.IfProg), *p)),
    ]
    if loops:
        options.append(
            st.tuples(st.sampled_from([A.WhileT, A.WhileS, A.WhileST]), sub).map(
                lambda p: p[0](_guard(p[0]), p[1])
            )
        )
    return st.one_of(*options)


def typed(p):
    try:
        return typecheck(p)
    except AgapiaError:
        return None


def well_typed_programs(depth: int = 3, loops: bool = True):
    return raw_programs(depth, loops).filter(lambda p: typed(p) is not None)


@st.composite
def conforming(draw, t: InterfaceType, world: str, max_star: int = 2) -> InterfaceValue:
    """A value of interface type ``t`` with small non-negative integers."""
    items: list = []

    def simple(s):
        from agapia.iface import BaseT, IntV, UnionT

        if isinstance(s, NilT):
            return NIL_V
        if isinstance(s, UnionT):
            return simple(draw(st.sampled_from([s.left, s.right])))
        if isinstance(s, BaseT) and s.is_int:
            return IntV(draw(st.integers(0, 4)))
        raise ValueError(f"no generator for {s}")

    def fill(groups):
        for g in groups:
            if isinstance(g, Simple):
                items.append(simple(g.type))
            elif isinstance(g, GroupUnion):
                fill(draw(st.sampled_from([g.left, g.right])).groups)
            elif isinstance(g, GroupStar):
                for _ in range(draw(st.integers(0, max_star))):
                    fill(g.body.groups)

    fill(t.groups)
    return InterfaceValue(tuple(items), world)
