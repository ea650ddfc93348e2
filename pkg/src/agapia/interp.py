"""Execution of whole programs into running scenarios.

Data crossing a seam is held in a FIFO queue.  A producer runs to
completion before its consumer starts (nonblocking sends), so every
combinator is a pure function of its input queues.  Consumers skip ``nil``
items they have no use for; any non-nil item left unconsumed on an inner
seam is an error, because the two sub-scenarios could not be glued.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import CompositionError, DivergenceError, InterfaceError, ScopeError
from .evaluator import DEFAULT_LIMITS, Binding, Env, Limits, eval_bool, run_module
from .iface import (
    NIL_V,
    SPATIAL,
    TEMPORAL,
    InterfaceType,
    InterfaceValue,
    NilV,
    NilT,
    Simple,
    TupleV,
    SimpleType,
    SimpleValue,
    admits_nil,
    type_of_simple,
    value_conforms,
)
from .lang import ast as A
from .lang.printer import display_type, format_simple_value, format_value
from .lang.typecheck import ProgramType, border_names, typecheck
from .scenario import (
    EMPTY_SCENARIO,
    BorderTypes,
    Scenario,
    dcomp,
    hcomp,
    identity,
    side,
    vcomp,
)

__all__ = [
    "Limits",
    "RunInput",
    "RunResult",
    "run",
    "run_h",
    "run_v",
    "run_d",
    "run_if",
    "run_while_t",
    "run_while_s",
    "run_while_st",
]


Item = tuple[SimpleValue, tuple[str, ...]]


class Queue:
    """A seam: items in arrival order, consumed from the front."""

    def __init__(self, items: InterfaceValue | list[Item] = (), world: str = TEMPORAL):
        if isinstance(items, InterfaceValue):
            items = list(zip(items.items, items.names))
        self.items: deque[Item] = deque(items)
        self.world = world

    def take(self, needs_data: bool, nil_ok: bool = True, who: str = "") -> Item:
        """Consume the item for one input port.

        A port with no variables takes a pending nil, or nothing.  A port
        with variables skips nils and takes the next real item.
        """
        if not needs_data:
            if self.items and isinstance(self.items[0][0], NilV):
                return self.items.popleft()
            return (NIL_V, ())
        while self.items and isinstance(self.items[0][0], NilV):
            self.items.popleft()
        if self.items:
            return self.items.popleft()
        if nil_ok:
            return (NIL_V, ())
        raise InterfaceError(f"{who}: no {self.world} input left")

    def peek_data(self) -> Item | None:
        return next((it for it in self.items if not isinstance(it[0], NilV)), None)

    def leftovers(self) -> list[Item]:
        return [it for it in self.items if not isinstance(it[0], NilV)]


def _leftover_text(items: list[Item]) -> str:
    return ";".join(
        (f"{n[0]}=" if len(n) == 1 else "") + format_simple_value(v) for v, n in items
    )


@dataclass(frozen=True)
class RunInput:
    north: InterfaceValue = field(default_factory=lambda: InterfaceValue((), SPATIAL))
    west: InterfaceValue = field(default_factory=lambda: InterfaceValue((), TEMPORAL))


@dataclass(frozen=True)
class RunResult:
    scenario: Scenario
    east: InterfaceValue
    south: InterfaceValue
    diagnostics: tuple[str, ...] = ()


class _Ctx:
    def __init__(self, limits: Limits):
        self.limits = limits
        self.notes: list[str] = []
        self.types: dict[int, ProgramType] = {}
        self.names: dict[int, dict] = {}

    def type_of(self, p: A.Program) -> ProgramType:
        key = id(p)
        if key not in self.types:
            self.types[key] = typecheck(p)
        return self.types[key]

    def names_of(self, p: A.Program) -> dict:
        key = id(p)
        if key not in self.names:
            self.names[key] = border_names(p)
        return self.names[key]


def _ports(t: InterfaceType) -> list[tuple[bool, bool]]:
    """(needs data, nil acceptable) for each group of a loop state border."""
    out = []
    for g in t.groups:
        if isinstance(g, Simple):
            st: SimpleType = g.type
            out.append((not isinstance(st, NilT), admits_nil(st)))
        else:
            out.append((True, True))
    return out


def _take_state(q: Queue, t: InterfaceType) -> list[Item]:
    return [q.take(need, ok) for need, ok in _ports(t)]


def _bind(env: dict[str, Binding], item: Item, fallback: tuple[str, ...], world: str, origin: str):
    v, names = item
    names = names or fallback
    if not names or isinstance(v, NilV):
        return
    if len(names) == 1:
        env.setdefault(names[0], Binding(v, world, origin, type_of_simple(v, world)))
        return
    if isinstance(v, TupleV) and len(v.items) == len(names):
        for n, x in zip(names, v.items):
            env.setdefault(n, Binding(x, world, origin, type_of_simple(x, world)))


def _guard_env(spatial: list[Item], spatial_names, temporal: list[Item], temporal_names) -> Env:
    env: dict[str, Binding] = {}
    for i, it in enumerate(spatial):
        fb = spatial_names[i] if spatial_names and i < len(spatial_names) else ()
        _bind(env, it, fb, SPATIAL, "read")
    for i, it in enumerate(temporal):
        fb = temporal_names[i] if temporal_names and i < len(temporal_names) else ()
        _bind(env, it, fb, TEMPORAL, "listen")
    return Env(env)


def _check_guard(cond: A.Expr, env: Env, what: str) -> bool:
    missing = sorted(n for n in A.expr_names(cond) if n not in env)
    if missing:
        raise ScopeError(f"{what} condition needs {', '.join(missing)}, which is not on its borders")
    return eval_bool(cond, env)


def _drained(q: Queue, seam: str):
    left = q.leftovers()
    if left:
        raise CompositionError(f"{seam} seam: values {_leftover_text(left)} were never consumed")


def _value(items: list[Item], world: str) -> InterfaceValue:
    return InterfaceValue(tuple(v for v, _ in items), world, tuple(n for _, n in items))


def _exec(p: A.Program, west: Queue, north: Queue, ctx: _Ctx) -> Scenario:
    if isinstance(p, A.NilProg):
        return EMPTY_SCENARIO
    if isinstance(p, A.ModuleRef):
        m = p.module
        w_item = west.take(bool(m.listen), all(admits_nil(t) for _, t in m.listen), f"module {m.name}")
        n_item = north.take(bool(m.read), all(admits_nil(t) for _, t in m.read), f"module {m.name}")
        r = run_module(m, side(w_item[0], TEMPORAL), side(n_item[0], SPATIAL), ctx.limits)
        return Scenario(((r.cell,),))
    if isinstance(p, A.HPar):
        f1 = _exec(p.first, west, north, ctx)
        seam = Queue(f1.east, TEMPORAL)
        f2 = _exec(p.second, seam, north, ctx)
        _drained(seam, "east/west")
        return hcomp(f1, f2)
    if isinstance(p, A.VSeq):
        f1 = _exec(p.first, west, north, ctx)
        seam = Queue(f1.south, SPATIAL)
        f2 = _exec(p.second, west, seam, ctx)
        _drained(seam, "south/north")
        return vcomp(f1, f2)
    if isinstance(p, A.DComp):
        f1 = _exec(p.first, west, north, ctx)
        seam_w, seam_n = Queue(f1.east, TEMPORAL), Queue(f1.south, SPATIAL)
        f2 = _exec(p.second, seam_w, seam_n, ctx)
        _drained(seam_w, "east/west")
        _drained(seam_n, "south/north")
        return dcomp(f1, f2)
    if isinstance(p, A.IfProg):
        names = ctx.names_of(p)
        head = west.peek_data()
        env = _guard_env(list(north.items), names["n"], [head] if head else [],
                         names["w"][:1] if names["w"] else None)
        branch = p.then if _check_guard(p.cond, env, "if") else p.orelse
        return _exec(branch, west, north, ctx)
    if isinstance(p, A.WhileT):
        return _while_t(p, west, north, ctx)
    if isinstance(p, A.WhileS):
        return _while_s(p, west, north, ctx)
    return _while_st(p, west, north, ctx)


def _rounds(ctx: _Ctx, what: str):
    k = 0
    while True:
        if k >= ctx.limits.round_cap:
            raise DivergenceError(f"{what} exceeded {ctx.limits.round_cap} rounds")
        yield k
        k += 1


def _while_t(p: A.WhileT, west: Queue, north: Queue, ctx: _Ctx) -> Scenario:
    body_t = ctx.type_of(p.body)
    static = ctx.names_of(p.body)
    state = _take_state(north, body_t.n)
    result: Scenario | None = None
    count = 0
    for _ in _rounds(ctx, "while_t"):
        head = west.peek_data()
        env = _guard_env(state, static["n"], [head] if head else [], static["w"][:1] if static["w"] else None)
        if not _check_guard(p.cond, env, "while_t"):
            break
        f = _exec(p.body, west, Queue(state, SPATIAL), ctx)
        result = f if result is None else vcomp(result, f)
        state = list(zip(f.south.items, f.south.names))
        count += 1
    ctx.notes.append(f"while_t: {count} round(s)")
    if result is None:
        return _identity(None, _value(state, SPATIAL))
    return result


def _while_s(p: A.WhileS, west: Queue, north: Queue, ctx: _Ctx) -> Scenario:
    body_t = ctx.type_of(p.body)
    static = ctx.names_of(p.body)
    state = _take_state(west, body_t.w)
    result: Scenario | None = None
    count = 0
    for _ in _rounds(ctx, "while_s"):
        head = north.peek_data()
        env = _guard_env([head] if head else [], static["n"][:1] if static["n"] else None, state, static["w"])
        if not _check_guard(p.cond, env, "while_s"):
            break
        f = _exec(p.body, Queue(state, TEMPORAL), north, ctx)
        result = f if result is None else hcomp(result, f)
        state = list(zip(f.east.items, f.east.names))
        count += 1
    ctx.notes.append(f"while_s: {count} round(s)")
    if result is None:
        return _identity(_value(state, TEMPORAL), None)
    return result


def _while_st(p: A.WhileST, west: Queue, north: Queue, ctx: _Ctx) -> Scenario:
    body_t = ctx.type_of(p.body)
    static = ctx.names_of(p.body)
    w_state = _take_state(west, body_t.w)
    n_state = _take_state(north, body_t.n)
    result: Scenario | None = None
    count = 0
    for _ in _rounds(ctx, "while_st"):
        env = _guard_env(n_state, static["n"], w_state, static["w"])
        if not _check_guard(p.cond, env, "while_st"):
            break
        f = _exec(p.body, Queue(w_state, TEMPORAL), Queue(n_state, SPATIAL), ctx)
        result = f if result is None else dcomp(result, f)
        w_state = list(zip(f.east.items, f.east.names))
        n_state = list(zip(f.south.items, f.south.names))
        count += 1
    ctx.notes.append(f"while_st: {count} round(s)")
    if result is None:
        return _identity(_value(w_state, TEMPORAL), _value(n_state, SPATIAL))
    return result


def _identity(west: InterfaceValue | None, north: InterfaceValue | None) -> Scenario:
    """Scenario of a loop that ran zero times: a block of pass-through cells."""
    w = west if west is not None else InterfaceValue((), TEMPORAL)
    n = north if north is not None else InterfaceValue((), SPATIAL)
    if not w.items and not n.items:
        return EMPTY_SCENARIO
    return identity(w, n)


# ---------------------------------------------------------------------------
# entry points


def _label(v: InterfaceValue, names, world: str) -> InterfaceValue:
    if names is None or len(names) != len(v.items):
        return v.in_world(world)
    labeled = tuple(own or (st if not isinstance(x, NilV) else ()) for x, own, st in zip(v.items, v.names, names))
    return InterfaceValue(v.items, world, labeled)


def _conform(v: InterfaceValue, t: InterfaceType, where: str):
    if not value_conforms(v, t):
        raise InterfaceError(
            f"{where} input {format_value(v, False)} does not conform to {display_type(t)}"
        )


def run(p: A.Program, inp: RunInput | None = None, limits: Limits = DEFAULT_LIMITS,
        check_inputs: bool = True) -> RunResult:
    """Execute ``p`` on the given borders and return its running scenario."""
    inp = inp or RunInput()
    ctx = _Ctx(limits)
    t = ctx.type_of(p)
    names = ctx.names_of(p)
    north = _label(inp.north, names["n"], SPATIAL)
    west = _label(inp.west, names["w"], TEMPORAL)
    if check_inputs:
        _conform(north, t.n, "north")
        _conform(west, t.w, "west")
    qw, qn = Queue(west, TEMPORAL), Queue(north, SPATIAL)
    f = _exec(p, qw, qn, ctx)
    for q, where in ((qw, "west"), (qn, "north")):
        left = q.leftovers()
        if left:
            raise InterfaceError(f"{where} input values {_leftover_text(left)} were never consumed")
    f = f.with_declared(BorderTypes(t.w, t.n, t.e, t.s))
    return RunResult(f, f.east, f.south, tuple(ctx.notes))


def run_h(p1: A.Program, p2: A.Program, inp: RunInput | None = None, limits: Limits = DEFAULT_LIMITS) -> RunResult:
    return run(A.HPar(p1, p2), inp, limits)


def run_v(p1: A.Program, p2: A.Program, inp: RunInput | None = None, limits: Limits = DEFAULT_LIMITS) -> RunResult:
    return run(A.VSeq(p1, p2), inp, limits)


def run_d(p1: A.Program, p2: A.Program, inp: RunInput | None = None, limits: Limits = DEFAULT_LIMITS) -> RunResult:
    return run(A.DComp(p1, p2), inp, limits)


def run_if(cond: A.Expr, p1: A.Program, p2: A.Program, inp: RunInput | None = None,
           limits: Limits = DEFAULT_LIMITS) -> RunResult:
    return run(A.IfProg(cond, p1, p2), inp, limits)


def run_while_t(cond: A.Expr, p: A.Program, inp: RunInput | None = None, limits: Limits = DEFAULT_LIMITS) -> RunResult:
    return run(A.WhileT(cond, p), inp, limits)


def run_while_s(cond: A.Expr, p: A.Program, inp: RunInput | None = None, limits: Limits = DEFAULT_LIMITS) -> RunResult:
    return run(A.WhileS(cond, p), inp, limits)


def run_while_st(cond: A.Expr, p: A.Program, inp: RunInput | None = None, limits: Limits = DEFAULT_LIMITS) -> RunResult:
    return run(A.WhileST(cond, p), inp, limits)
