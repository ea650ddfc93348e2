"""Big-step evaluation of module code and single-module runs."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import AgapiaTypeError, ArithmeticFault, DivergenceError, InterfaceError, ScopeError
from .iface import (
    NIL_V,
    SPATIAL,
    TEMPORAL,
    BaseT,
    BoolV,
    IntV,
    InterfaceValue,
    NilV,
    Selector,
    SimpleType,
    SimpleValue,
    StarT,
    StarV,
    TupleT,
    TupleV,
    UnionT,
    conforms_simple,
    select,
    simple_world,
    update,
)
from .lang import ast as A
from .lang.printer import format_simple, format_simple_value
from .scenario import Cell, side

INT_MIN, INT_MAX = -(2**63), 2**63 - 1


@dataclass(frozen=True)
class Limits:
    """Execution caps: W-steps per module invocation and loop rounds."""

    step_budget: int = 10**6
    round_cap: int = 10**5

    def __post_init__(self):
        if self.step_budget <= 0 or self.round_cap <= 0:
            raise ValueError("limits must be positive")


DEFAULT_LIMITS = Limits()


@dataclass(frozen=True)
class Binding:
    value: SimpleValue
    world: str | None
    origin: str  # listen | read | local
    type: SimpleType


@dataclass(frozen=True)
class Env:
    bindings: dict[str, Binding] = field(default_factory=dict)

    def __getitem__(self, name: str) -> SimpleValue:
        return self.lookup(name).value

    def __contains__(self, name: str) -> bool:
        return name in self.bindings

    def lookup(self, name: str) -> Binding:
        try:
            return self.bindings[name]
        except KeyError:
            raise ScopeError(f"unbound variable {name}") from None

    def bind(self, name: str, b: Binding) -> "Env":
        new = dict(self.bindings)
        new[name] = b
        return Env(new)

    @classmethod
    def of(cls, **values) -> "Env":
        """Test helper: bind Python ints/bools as local variables."""
        out = {}
        for k, v in values.items():
            sv = BoolV(v) if isinstance(v, bool) else IntV(v) if isinstance(v, int) else v
            t = BaseT("sb") if isinstance(sv, BoolV) else BaseT("sn")
            out[k] = Binding(sv, None, "local", t)
        return cls(out)


def default_value(t: SimpleType) -> SimpleValue:
    if isinstance(t, BaseT):
        return IntV(0) if t.is_int else BoolV(False)
    if isinstance(t, TupleT):
        return TupleV(tuple(default_value(c) for c in t.items))
    if isinstance(t, StarT):
        return StarV(())
    if isinstance(t, UnionT):
        return default_value(t.left)
    return NIL_V


# ---------------------------------------------------------------------------
# expressions


def _int(v: SimpleValue, what: str) -> int:
    if not isinstance(v, IntV):
        raise AgapiaTypeError(f"{what} needs an integer, got {format_simple_value(v)}")
    return v.value


def _bool(v: SimpleValue, what: str) -> bool:
    if not isinstance(v, BoolV):
        raise AgapiaTypeError(f"{what} needs a boolean, got {format_simple_value(v)}")
    return v.value


def _checked(x: int) -> IntV:
    if not INT_MIN <= x <= INT_MAX:
        raise ArithmeticFault("64-bit integer overflow")
    return IntV(x)


def _div(a: int, b: int) -> int:
    if b == 0:
        raise ArithmeticFault("division by zero")
    q = abs(a) // abs(b)
    return q if (a < 0) == (b < 0) else -q


def _selectors(sels, env: Env) -> list[Selector]:
    out = []
    for s in sels:
        k = s.index if isinstance(s.index, int) else _int(eval_value(s.index, env), "index")
        out.append(Selector(s.kind, k))
    return out


def eval_value(e: A.Expr, env: Env) -> SimpleValue:
    if isinstance(e, A.IntLit):
        return _checked(e.value)
    if isinstance(e, A.BoolLit):
        return BoolV(e.value)
    if isinstance(e, A.Var):
        b = env.lookup(e.name)
        v = b.value
        for s in _selectors(e.selectors, env):
            v = select(v, s, b.world)
        return v
    if isinstance(e, A.Not):
        return BoolV(not _bool(eval_value(e.operand, env), "!"))
    if isinstance(e, A.Neg):
        return _checked(-_int(eval_value(e.operand, env), "negation"))
    op = e.op
    if op == "&&":
        return BoolV(_bool(eval_value(e.left, env), op) and _bool(eval_value(e.right, env), op))
    if op == "||":
        return BoolV(_bool(eval_value(e.left, env), op) or _bool(eval_value(e.right, env), op))
    left, right = eval_value(e.left, env), eval_value(e.right, env)
    if op == "==":
        return BoolV(left == right)
    if op == "!=":
        return BoolV(left != right)
    a, b = _int(left, op), _int(right, op)
    if op == "+":
        return _checked(a + b)
    if op == "-":
        return _checked(a - b)
    if op == "*":
        return _checked(a * b)
    if op == "/":
        return _checked(_div(a, b))
    if op == "%":
        return _checked(a - b * _div(a, b))
    return BoolV({"<": a < b, ">": a > b, "<=": a <= b, ">=": a >= b}[op])


def eval_expr(e: A.Expr, env: Env) -> int:
    return _int(eval_value(e, env), "expression")


def eval_bool(e: A.Expr, env: Env) -> bool:
    return _bool(eval_value(e, env), "condition")


# ---------------------------------------------------------------------------
# statements


class _Budget:
    def __init__(self, limit: int):
        self.left = limit
        self.limit = limit

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise DivergenceError(f"step budget of {self.limit} exhausted")


def _exec(s: A.Stmt, vars: dict[str, Binding], budget: _Budget):
    budget.tick()
    if isinstance(s, A.NilStmt):
        return
    if isinstance(s, A.Seq):
        for x in s.items:
            _exec(x, vars, budget)
        return
    env = Env(vars)
    if isinstance(s, A.NewVar):
        vars[s.name] = Binding(default_value(s.type), simple_world(s.type), "local", s.type)
    elif isinstance(s, A.Assign):
        b = env.lookup(s.target.name)
        new = eval_value(s.expr, env)
        if s.target.selectors:
            new = update(b.value, _selectors(s.target.selectors, env), new, b.world)
        if not conforms_simple(new, b.type):
            raise AgapiaTypeError(
                f"value {format_simple_value(new)} does not fit {s.target.name}:{format_simple(b.type)}"
            )
        vars[s.target.name] = Binding(new, b.world, b.origin, b.type)
    elif isinstance(s, A.IfStmt):
        _exec(s.then if eval_bool(s.cond, env) else s.orelse, vars, budget)
    elif isinstance(s, A.WhileStmt):
        while eval_bool(s.cond, Env(vars)):
            _exec(s.body, vars, budget)
            budget.tick()


def exec_w(s: A.Stmt, env: Env, step_budget: int = DEFAULT_LIMITS.step_budget) -> Env:
    vars = dict(env.bindings)
    _exec(s, vars, _Budget(step_budget))
    return Env(vars)


# ---------------------------------------------------------------------------
# modules


@dataclass(frozen=True)
class ModuleRun:
    east: InterfaceValue
    south: InterfaceValue
    cell: Cell
    env: Env = field(compare=False, repr=False)


def _item(v: InterfaceValue, what: str) -> SimpleValue:
    if len(v.items) > 1:
        raise InterfaceError(f"{what}: a single cell takes one item, got {len(v.items)}")
    return v.items[0] if v.items else NIL_V


def _bind_inputs(m: A.ModuleAst, decls, item: SimpleValue, world: str, origin: str, vars):
    where = f"module {m.name} {origin}"
    if not decls:
        if not isinstance(item, NilV):
            raise InterfaceError(f"{where}: expects nil, got {format_simple_value(item)}")
        return
    if len(decls) == 1:
        parts = [item]
    else:
        if not isinstance(item, TupleV) or len(item.items) != len(decls):
            raise InterfaceError(f"{where}: expects a {len(decls)}-tuple, got {format_simple_value(item)}")
        parts = list(item.items)
    for (name, t), v in zip(decls, parts):
        if not conforms_simple(v, t):
            raise InterfaceError(
                f"{where}: {format_simple_value(v)} does not fit {name}:{format_simple(t)}"
            )
        vars[name] = Binding(v, world, origin, t)


def _output(vars, names, world: str, m: A.ModuleAst) -> InterfaceValue:
    vals = []
    for n in names:
        if n not in vars:
            raise ScopeError(f"module {m.name}: {n} has no value")
        vals.append(vars[n].value)
    if not vals:
        return side(NIL_V, world)
    v = vals[0] if len(vals) == 1 else TupleV(tuple(vals))
    return side(v, world, tuple(names))


def run_module(m: A.ModuleAst, west: InterfaceValue, north: InterfaceValue,
               limits: Limits = DEFAULT_LIMITS) -> ModuleRun:
    """Run one module on one west item and one north item."""
    w_item, n_item = _item(west, "west"), _item(north, "north")
    vars: dict[str, Binding] = {}
    _bind_inputs(m, m.listen, w_item, TEMPORAL, "listen", vars)
    _bind_inputs(m, m.read, n_item, SPATIAL, "read", vars)
    _exec(m.body, vars, _Budget(limits.step_budget))
    east = _output(vars, m.speak, TEMPORAL, m)
    south = _output(vars, m.write, SPATIAL, m)
    w_names = tuple(n for n, _ in m.listen)
    n_names = tuple(n for n, _ in m.read)
    cell = Cell(m.name, side(w_item, TEMPORAL, w_names), side(n_item, SPATIAL, n_names), east, south)
    return ModuleRun(east, south, cell, Env(vars))


__all__ = [
    "Limits",
    "DEFAULT_LIMITS",
    "Binding",
    "Env",
    "ModuleRun",
    "default_value",
    "eval_value",
    "eval_expr",
    "eval_bool",
    "exec_w",
    "run_module",
]
