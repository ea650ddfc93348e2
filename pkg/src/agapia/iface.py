"""Interface types and values.

A border of a scenario carries a ``;``-separated list of groups.  Each group
is a simple (cell-level) type or value; simple types combine with ``|``
(union), ``,`` (tuple) and postfix ``*`` (repetition).  Group lists combine
with ``|``, ``;`` and ``(_;)*``.  The empty group ``nil`` can be inserted or
omitted freely, so most comparisons here are "up to nil".

Everything in this module is immutable and pure.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

from .errors import IndexRangeError, StructureError, WorldError

SPATIAL = "spatial"
TEMPORAL = "temporal"

_BASE_WORLD = {"sn": SPATIAL, "sb": SPATIAL, "tn": TEMPORAL, "tb": TEMPORAL}


def other_world(world: str | None) -> str | None:
    if world is None:
        return None
    return TEMPORAL if world == SPATIAL else SPATIAL


# ---------------------------------------------------------------------------
# simple types


@dataclass(frozen=True)
class NilT:
    pass


@dataclass(frozen=True)
class BaseT:
    kind: str  # sn | sb | tn | tb

    def __post_init__(self):
        if self.kind not in _BASE_WORLD:
            raise StructureError(f"unknown base type {self.kind!r}")

    @property
    def is_int(self) -> bool:
        return self.kind.endswith("n")


@dataclass(frozen=True)
class UnionT:
    left: "SimpleType"
    right: "SimpleType"


@dataclass(frozen=True)
class TupleT:
    items: tuple["SimpleType", ...]

    def __post_init__(self):
        if len(self.items) < 2:
            raise StructureError("a tuple type needs at least two components")


@dataclass(frozen=True)
class StarT:
    item: "SimpleType"


SimpleType = Union[NilT, BaseT, UnionT, TupleT, StarT]

NIL_T = NilT()


def simple_world(t: SimpleType) -> str | None:
    """World of a simple type; ``None`` when it is built from nil only."""
    worlds = set()

    def walk(x):
        if isinstance(x, BaseT):
            worlds.add(_BASE_WORLD[x.kind])
        elif isinstance(x, UnionT):
            walk(x.left)
            walk(x.right)
        elif isinstance(x, TupleT):
            for c in x.items:
                walk(c)
        elif isinstance(x, StarT):
            walk(x.item)

    walk(t)
    if len(worlds) > 1:
        raise WorldError("simple type mixes spatial and temporal components")
    return worlds.pop() if worlds else None


def convert_world(t: SimpleType, world: str) -> SimpleType:
    """Re-express ``t`` in ``world`` (sn <-> tn, sb <-> tb)."""
    if isinstance(t, BaseT):
        letter = "s" if world == SPATIAL else "t"
        return BaseT(letter + t.kind[1])
    if isinstance(t, UnionT):
        return UnionT(convert_world(t.left, world), convert_world(t.right, world))
    if isinstance(t, TupleT):
        return TupleT(tuple(convert_world(c, world) for c in t.items))
    if isinstance(t, StarT):
        return StarT(convert_world(t.item, world))
    return t


# ---------------------------------------------------------------------------
# interface types


@dataclass(frozen=True)
class Simple:
    type: SimpleType


@dataclass(frozen=True)
class GroupUnion:
    left: "InterfaceType"
    right: "InterfaceType"


@dataclass(frozen=True)
class GroupStar:
    body: "InterfaceType"


GroupEntry = Union[Simple, GroupUnion, GroupStar]


@dataclass(frozen=True)
class InterfaceType:
    groups: tuple[GroupEntry, ...] = ()
    world: str | None = None

    def __post_init__(self):
        worlds = set()
        for g in self.groups:
            w = _group_world(g)
            if w is not None:
                worlds.add(w)
        if len(worlds) > 1:
            raise WorldError("interface type mixes spatial and temporal groups")
        inferred = worlds.pop() if worlds else None
        if inferred is not None and self.world is not None and inferred != self.world:
            raise WorldError(f"{inferred} groups in a {self.world} interface")
        if self.world is None and inferred is not None:
            object.__setattr__(self, "world", inferred)

    def is_nil(self) -> bool:
        return all(isinstance(g, Simple) and isinstance(g.type, NilT) for g in self.groups)


def _group_world(g: GroupEntry) -> str | None:
    if isinstance(g, Simple):
        return simple_world(g.type)
    if isinstance(g, GroupUnion):
        ws = {w for w in (g.left.world, g.right.world) if w is not None}
        if len(ws) > 1:
            raise WorldError("union of spatial and temporal interfaces")
        return ws.pop() if ws else None
    return g.body.world


def nil_type(world: str | None = None) -> InterfaceType:
    return InterfaceType((Simple(NIL_T),), world)


def single(t: SimpleType, world: str | None = None) -> InterfaceType:
    return InterfaceType((Simple(t),), world)


def concat_types(*ts: InterfaceType) -> InterfaceType:
    world = next((t.world for t in ts if t.world is not None), None)
    return InterfaceType(tuple(g for t in ts for g in t.groups), world)


def union_types(a: InterfaceType, b: InterfaceType) -> InterfaceType:
    if a == b:
        return a
    return InterfaceType((GroupUnion(a, b),), a.world or b.world)


def star_type(t: InterfaceType) -> InterfaceType:
    return InterfaceType((GroupStar(t),), t.world)


# ---------------------------------------------------------------------------
# values


@dataclass(frozen=True)
class NilV:
    pass


@dataclass(frozen=True)
class IntV:
    value: int


@dataclass(frozen=True)
class BoolV:
    value: bool


@dataclass(frozen=True)
class TupleV:
    items: tuple["SimpleValue", ...]


@dataclass(frozen=True)
class StarV:
    items: tuple["SimpleValue", ...]

    def __post_init__(self):
        shapes = {_shape(v) for v in self.items}
        if len(shapes) > 1:
            raise StructureError("star value elements differ in structure")


SimpleValue = Union[NilV, IntV, BoolV, TupleV, StarV]

NIL_V = NilV()


def _shape(v: SimpleValue):
    if isinstance(v, TupleV):
        return ("tuple", tuple(_shape(c) for c in v.items))
    if isinstance(v, StarV):
        return ("star", _shape(v.items[0]) if v.items else None)
    return type(v).__name__


@dataclass(frozen=True)
class InterfaceValue:
    """The data on one border: one entry per group.

    ``names`` optionally records, per item, the variable names the item was
    written under.  Names are bookkeeping for guards and rendering; they take
    no part in equality.
    """

    items: tuple[SimpleValue, ...] = ()
    world: str | None = None
    names: tuple[tuple[str, ...], ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.names and len(self.names) != len(self.items):
            raise StructureError("names must parallel items")
        if not self.names:
            object.__setattr__(self, "names", ((),) * len(self.items))

    def __len__(self):
        return len(self.items)

    def __add__(self, other: "InterfaceValue") -> "InterfaceValue":
        world = self.world or other.world
        return InterfaceValue(self.items + other.items, world, self.names + other.names)

    def non_nil(self) -> tuple[SimpleValue, ...]:
        return tuple(v for v in self.items if not isinstance(v, NilV))

    def in_world(self, world: str | None) -> "InterfaceValue":
        return InterfaceValue(self.items, world, self.names)


def value(items: Iterable[SimpleValue] = (), world: str | None = None, names=None) -> InterfaceValue:
    items = tuple(items)
    return InterfaceValue(items, world, tuple(names) if names is not None else ())


def from_python(x) -> SimpleValue:
    """Convenience lift: None, bool, int, tuple and list map to values."""
    if x is None:
        return NIL_V
    if isinstance(x, bool):
        return BoolV(x)
    if isinstance(x, int):
        return IntV(x)
    if isinstance(x, tuple):
        return TupleV(tuple(from_python(c) for c in x))
    if isinstance(x, list):
        return StarV(tuple(from_python(c) for c in x))
    if isinstance(x, (NilV, IntV, BoolV, TupleV, StarV)):
        return x
    raise TypeError(f"cannot lift {x!r}")


def to_python(v: SimpleValue):
    if isinstance(v, NilV):
        return None
    if isinstance(v, (IntV, BoolV)):
        return v.value
    if isinstance(v, TupleV):
        return tuple(to_python(c) for c in v.items)
    return [to_python(c) for c in v.items]


# ---------------------------------------------------------------------------
# typing of values


def type_of_simple(v: SimpleValue, world: str | None) -> SimpleType:
    letter = "t" if world == TEMPORAL else "s"
    if isinstance(v, NilV):
        return NIL_T
    if isinstance(v, IntV):
        return BaseT(letter + "n")
    if isinstance(v, BoolV):
        return BaseT(letter + "b")
    if isinstance(v, TupleV):
        return TupleT(tuple(type_of_simple(c, world) for c in v.items))
    return StarT(type_of_simple(v.items[0], world) if v.items else NIL_T)


def type_of_value(v: InterfaceValue) -> InterfaceType:
    """Least interface type (no unions) of a value."""
    return InterfaceType(tuple(Simple(type_of_simple(x, v.world)) for x in v.items), v.world)


def conforms_simple(v: SimpleValue, t: SimpleType) -> bool:
    if isinstance(t, UnionT):
        return conforms_simple(v, t.left) or conforms_simple(v, t.right)
    if isinstance(t, NilT):
        return isinstance(v, NilV)
    if isinstance(t, BaseT):
        return isinstance(v, IntV) if t.is_int else isinstance(v, BoolV)
    if isinstance(t, TupleT):
        return (
            isinstance(v, TupleV)
            and len(v.items) == len(t.items)
            and all(conforms_simple(a, b) for a, b in zip(v.items, t.items))
        )
    if isinstance(t, StarT):
        if isinstance(v, NilV):
            return True
        return isinstance(v, StarV) and all(conforms_simple(c, t.item) for c in v.items)
    raise TypeError(t)


def admits_nil(t: SimpleType) -> bool:
    return conforms_simple(NIL_V, t)


def simple_intersects(a: SimpleType, b: SimpleType) -> bool:
    """Whether some single value belongs to both simple types."""
    if isinstance(a, UnionT):
        return simple_intersects(a.left, b) or simple_intersects(a.right, b)
    if isinstance(b, UnionT):
        return simple_intersects(a, b.left) or simple_intersects(a, b.right)
    if isinstance(a, NilT):
        return admits_nil(b)
    if isinstance(b, NilT):
        return admits_nil(a)
    if isinstance(a, BaseT) and isinstance(b, BaseT):
        return a.is_int == b.is_int
    if isinstance(a, TupleT) and isinstance(b, TupleT):
        return len(a.items) == len(b.items) and all(
            simple_intersects(x, y) for x, y in zip(a.items, b.items)
        )
    if isinstance(a, StarT) and isinstance(b, StarT):
        return True
    return False


# Interface types are regular languages over simple types (nil items
# removed).  Membership and intersection run on a small epsilon-NFA.


class _Automaton:
    def __init__(self, t: InterfaceType):
        self.eps: dict[int, set[int]] = defaultdict(set)
        self.moves: dict[int, list[tuple[SimpleType, int]]] = defaultdict(list)
        self.count = 1
        self.start = 0
        self.final = self._build(t.groups, 0)

    def _new(self) -> int:
        self.count += 1
        return self.count - 1

    def _build(self, groups, cur: int) -> int:
        for g in groups:
            if isinstance(g, Simple):
                nxt = self._new()
                if not isinstance(g.type, NilT):
                    self.moves[cur].append((g.type, nxt))
                if admits_nil(g.type):
                    self.eps[cur].add(nxt)
                cur = nxt
            elif isinstance(g, GroupUnion):
                nxt = self._new()
                self.eps[self._build(g.left.groups, cur)].add(nxt)
                self.eps[self._build(g.right.groups, cur)].add(nxt)
                cur = nxt
            else:
                loop = self._new()
                self.eps[cur].add(loop)
                self.eps[self._build(g.body.groups, loop)].add(loop)
                cur = loop
        return cur

    def closure(self, states: Iterable[int]) -> frozenset[int]:
        seen = set(states)
        todo = list(seen)
        while todo:
            s = todo.pop()
            for d in self.eps[s]:
                if d not in seen:
                    seen.add(d)
                    todo.append(d)
        return frozenset(seen)


def _check_worlds(a: str | None, b: str | None):
    if a is not None and b is not None and a != b:
        raise WorldError(f"{a} data used where {b} data is expected")


def value_conforms(v: InterfaceValue, t: InterfaceType) -> bool:
    """Membership of ``v`` in the value set of ``t`` (nil items are free)."""
    _check_worlds(v.world, t.world)
    nfa = _Automaton(t)
    cur = nfa.closure([nfa.start])
    for item in v.non_nil():
        nxt = {d for s in cur for (st, d) in nfa.moves[s] if conforms_simple(item, st)}
        if not nxt:
            return False
        cur = nfa.closure(nxt)
    return nfa.final in cur


def match(t: InterfaceType, t2: InterfaceType) -> bool:
    """Whether the value sets of two interface types intersect."""
    if t.world is not None and t2.world is not None and t.world != t2.world:
        return False
    a, b = _Automaton(t), _Automaton(t2)
    start = (a.start, b.start)
    seen = {start}
    todo = deque([start])
    while todo:
        p, q = todo.popleft()
        if p == a.final and q == b.final:
            return True
        succ = [(d, q) for d in a.eps[p]] + [(p, d) for d in b.eps[q]]
        for st1, d1 in a.moves[p]:
            for st2, d2 in b.moves[q]:
                if simple_intersects(st1, st2):
                    succ.append((d1, d2))
        for s in succ:
            if s not in seen:
                seen.add(s)
                todo.append(s)
    return False


# ---------------------------------------------------------------------------
# equality up to nil insertion


@dataclass(frozen=True)
class Alignment:
    """Two padded index lists of equal length; ``None`` marks an inserted nil."""

    left: tuple[int | None, ...]
    right: tuple[int | None, ...]

    @property
    def insertions(self) -> int:
        return self.left.count(None) + self.right.count(None)

    def reversed(self) -> "Alignment":
        return Alignment(self.right, self.left)


def align_up_to_nil(
    left: Sequence, right: Sequence, is_nil: Callable, eq: Callable = lambda a, b: a == b
) -> Alignment | None:
    """Minimal nil-insertion alignment of two sequences.

    Non-nil entries must pair up in order and be ``eq``.  Between two
    consecutive anchors the nil entries of both sides are paired first and
    the shorter side is padded at the end of the stretch.
    """
    li = [i for i, x in enumerate(left) if not is_nil(x)]
    ri = [i for i, x in enumerate(right) if not is_nil(x)]
    if len(li) != len(ri) or not all(eq(left[a], right[b]) for a, b in zip(li, ri)):
        return None
    out_l: list[int | None] = []
    out_r: list[int | None] = []
    lp = rp = 0
    for a, b in zip(li + [len(left)], ri + [len(right)]):
        ln, rn = list(range(lp, a)), list(range(rp, b))
        k = max(len(ln), len(rn))
        out_l += ln + [None] * (k - len(ln))
        out_r += rn + [None] * (k - len(rn))
        if a < len(left):
            out_l.append(a)
            out_r.append(b)
        lp, rp = a + 1, b + 1
    return Alignment(tuple(out_l), tuple(out_r))


def _is_nil_group(g: GroupEntry) -> bool:
    return isinstance(g, Simple) and isinstance(g.type, NilT)


def equal_up_to_nil(t: InterfaceType, t2: InterfaceType) -> Alignment | None:
    _check_worlds(t.world, t2.world)
    return align_up_to_nil(t.groups, t2.groups, _is_nil_group)


def values_equal_up_to_nil(v: InterfaceValue, v2: InterfaceValue) -> Alignment | None:
    return align_up_to_nil(v.items, v2.items, lambda x: isinstance(x, NilV))


def apply_alignment(items: Sequence, indices: Sequence[int | None], filler):
    return tuple(filler if i is None else items[i] for i in indices)


# ---------------------------------------------------------------------------
# component access


@dataclass(frozen=True)
class Selector:
    kind: str  # group | sfield | sindex | tfield | tindex
    k: int


def group(k: int) -> Selector:
    return Selector("group", k)


def spatial_field(k: int) -> Selector:
    return Selector("sfield", k)


def spatial_index(k: int) -> Selector:
    return Selector("sindex", k)


def temporal_field(k: int) -> Selector:
    return Selector("tfield", k)


def temporal_index(k: int) -> Selector:
    return Selector("tindex", k)


def select(v: SimpleValue, sel: Selector, world: str | None) -> SimpleValue:
    """Apply one selector to a simple value living in ``world``."""
    if sel.kind == "group":
        if sel.k != 1:
            raise IndexRangeError(f"group {sel.k} of a single-group value")
        return v
    want = SPATIAL if sel.kind[0] == "s" else TEMPORAL
    if world is not None and world != want:
        raise WorldError(f"{want} selector applied to {world} data")
    if sel.kind.endswith("field"):
        if not isinstance(v, TupleV):
            raise StructureError("field selector applied to a non-tuple value")
        items = v.items
    else:
        if isinstance(v, NilV):
            items = ()
        elif isinstance(v, StarV):
            items = v.items
        else:
            raise StructureError("index selector applied to a non-star value")
    if not 1 <= sel.k <= len(items):
        raise IndexRangeError(f"index {sel.k} out of range 1..{len(items)}")
    return items[sel.k - 1]


def access(v: InterfaceValue, *selectors: Selector) -> SimpleValue:
    """Read a component of an interface value.

    ``group(k)`` picks the k-th ``;``-item; the remaining selectors work on a
    single item, so a one-item value may be addressed without ``group``.
    All indices are 1-based.
    """
    sels = list(selectors)
    if sels and sels[0].kind == "group":
        k = sels.pop(0).k
        if not 1 <= k <= len(v.items):
            raise IndexRangeError(f"group {k} out of range 1..{len(v.items)}")
        cur = v.items[k - 1]
    elif len(v.items) == 1:
        cur = v.items[0]
    else:
        raise StructureError("selector needs a group on a multi-group value")
    for s in sels:
        cur = select(cur, s, v.world)
    return cur


def update(v: SimpleValue, sels: Sequence[Selector], new: SimpleValue, world: str | None) -> SimpleValue:
    """Functional update of the component at ``sels``."""
    if not sels:
        return new
    head, rest = sels[0], sels[1:]
    if head.kind == "group":
        select(v, head, world)
        return update(v, rest, new, world)
    inner = select(v, head, world)
    replaced = update(inner, rest, new, world)
    items = list(v.items)  # select() validated the container
    items[head.k - 1] = replaced
    return TupleV(tuple(items)) if isinstance(v, TupleV) else StarV(tuple(items))
