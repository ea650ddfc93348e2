"""Two-dimensional scenarios and their compositions.

A scenario is a rectangular grid of cells.  Every cell carries one
temporal item on its west and east sides and one spatial item on its north
and south sides (``nil`` when nothing crosses).  Columns are processes and
rows are time steps.

Compositions glue scenarios along a seam.  When the two sides of a seam
differ only by ``nil`` items, dummy rows (or columns) are inserted; a dummy
cell passes the perpendicular flow straight through so every seam stays
consistent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CompositionError, StructureError, WorldError
from .iface import (
    NIL_V,
    SPATIAL,
    TEMPORAL,
    BoolV,
    IntV,
    InterfaceType,
    InterfaceValue,
    NilV,
    SimpleValue,
    StarV,
    TupleV,
    type_of_value,
    value_conforms,
    values_equal_up_to_nil,
)

EMPTY = "Λ"
DUMMY = "·"

# kinds of cells; everything but "module" is a constant
MODULE = "module"
IDENTITY = "id"
EMPTY_KIND = "empty"
DUMMY_KIND = "dummy"
RECORDER = "rec"
SPEAKER = "spk"
T_RECORDER = "trec"
T_SPEAKER = "tspk"

CONSTANT_LABELS = {
    IDENTITY: "Id",
    EMPTY_KIND: EMPTY,
    DUMMY_KIND: DUMMY,
    RECORDER: "R",
    SPEAKER: "S",
    T_RECORDER: "R'",
    T_SPEAKER: "S'",
}
PASS_THROUGH = frozenset({IDENTITY, EMPTY_KIND, DUMMY_KIND})


def side(v: SimpleValue = NIL_V, world: str = TEMPORAL, names: tuple[str, ...] = ()) -> InterfaceValue:
    """A one-item border value of a single cell."""
    return InterfaceValue((v,), world, (names,))


def _is_nil(v: InterfaceValue) -> bool:
    return all(isinstance(x, NilV) for x in v.items)


@dataclass(frozen=True)
class Cell:
    label: str
    west: InterfaceValue
    north: InterfaceValue
    east: InterfaceValue
    south: InterfaceValue
    kind: str = MODULE

    @property
    def is_constant(self) -> bool:
        return self.kind != MODULE


def constant_cell(kind: str, west: InterfaceValue, north: InterfaceValue,
                  east: InterfaceValue, south: InterfaceValue) -> Cell:
    return Cell(CONSTANT_LABELS[kind], west, north, east, south, kind)


@dataclass(frozen=True)
class BorderTypes:
    w: InterfaceType
    n: InterfaceType
    e: InterfaceType
    s: InterfaceType


@dataclass(frozen=True)
class Scenario:
    cells: tuple[tuple[Cell, ...], ...] = ()
    declared: BorderTypes | None = field(default=None, compare=False)

    @property
    def rows(self) -> int:
        return len(self.cells)

    @property
    def cols(self) -> int:
        return len(self.cells[0]) if self.cells else 0

    @property
    def grid(self) -> tuple[tuple[str, ...], ...]:
        return tuple(tuple(c.label for c in row) for row in self.cells)

    def is_empty(self) -> bool:
        return not self.cells

    @property
    def west(self) -> InterfaceValue:
        return _concat((row[0].west for row in self.cells), TEMPORAL)

    @property
    def east(self) -> InterfaceValue:
        return _concat((row[-1].east for row in self.cells), TEMPORAL)

    @property
    def north(self) -> InterfaceValue:
        return _concat((c.north for c in self.cells[0]) if self.cells else (), SPATIAL)

    @property
    def south(self) -> InterfaceValue:
        return _concat((c.south for c in self.cells[-1]) if self.cells else (), SPATIAL)

    @property
    def type4(self) -> BorderTypes:
        if self.declared is not None:
            return self.declared
        return BorderTypes(*(type_of_value(v) for v in (self.west, self.north, self.east, self.south)))

    def with_declared(self, types: BorderTypes | None) -> "Scenario":
        return Scenario(self.cells, types)

    def cell(self, r: int, c: int) -> Cell:
        return self.cells[r][c]

    def column(self, c: int) -> tuple[Cell, ...]:
        return tuple(row[c] for row in self.cells)


def _concat(values: Iterable[InterfaceValue], world: str) -> InterfaceValue:
    items: list[SimpleValue] = []
    names: list[tuple[str, ...]] = []
    for v in values:
        items.extend(v.items)
        names.extend(v.names)
    return InterfaceValue(tuple(items), world, tuple(names))


EMPTY_SCENARIO = Scenario()


def from_cells(rows: Sequence[Sequence[Cell]]) -> Scenario:
    cells = tuple(tuple(r) for r in rows if len(r))
    if cells and any(len(r) != len(cells[0]) for r in cells):
        raise StructureError("scenario rows differ in length")
    return Scenario(cells)


def module_cell(label: str, west=NIL_V, north=NIL_V, east=NIL_V, south=NIL_V) -> Cell:
    """Convenience constructor taking simple values (or one-item borders)."""

    def lift(v, world):
        return v.in_world(world) if isinstance(v, InterfaceValue) else side(v, world)

    return Cell(label, lift(west, TEMPORAL), lift(north, SPATIAL), lift(east, TEMPORAL), lift(south, SPATIAL))


# ---------------------------------------------------------------------------
# constants

_INPUT_WORLD = {RECORDER: TEMPORAL, T_SPEAKER: TEMPORAL, SPEAKER: SPATIAL, T_RECORDER: SPATIAL}


def route(kind: str, west: InterfaceValue, north: InterfaceValue) -> Cell:
    """The constant cell of ``kind`` fed with ``west`` and ``north``.

    identity: west to east and north to south.  recorder: west to south.
    speaker: north to east.  transposed recorder: north to east.  transposed
    speaker: west to south.  empty/dummy: identity on nil inputs.
    """
    w = west.in_world(TEMPORAL)
    n = north.in_world(SPATIAL)
    nil_t, nil_s = side(world=TEMPORAL), side(world=SPATIAL)
    if kind in PASS_THROUGH:
        if kind == EMPTY_KIND and not (_is_nil(w) and _is_nil(n)):
            raise StructureError("an empty cell only carries nil")
        return constant_cell(kind, w, n, w, n)
    if kind == RECORDER:
        if not _is_nil(n):
            raise StructureError("a recorder has no north input")
        return constant_cell(kind, w, n, nil_t, w.in_world(SPATIAL))
    if kind == T_SPEAKER:
        if not _is_nil(n):
            raise StructureError("a transposed speaker has no north input")
        return constant_cell(kind, w, n, nil_t, w.in_world(SPATIAL))
    if kind in (SPEAKER, T_RECORDER):
        if not _is_nil(w):
            raise StructureError("this constant has no west input")
        return constant_cell(kind, w, n, n.in_world(TEMPORAL), nil_s)
    raise StructureError(f"unknown constant kind {kind!r}")


def make_constant(kind: str, payload_type: InterfaceType | None = None,
                  west: SimpleValue | InterfaceValue = NIL_V,
                  north: SimpleValue | InterfaceValue = NIL_V) -> Scenario:
    """One-cell scenario of a constant.

    ``payload_type`` is the type of the routed data; it must live in the
    world the constant reads from (temporal for recorders, spatial for
    speakers).
    """
    if payload_type is not None and payload_type.world is not None:
        need = _INPUT_WORLD.get(kind)
        if need is not None and payload_type.world != need:
            raise WorldError(f"{kind} routes {need} data, got a {payload_type.world} payload")
        if kind == EMPTY_KIND and not payload_type.is_nil():
            raise WorldError("an empty cell carries no payload")
    w = west if isinstance(west, InterfaceValue) else side(west, TEMPORAL)
    n = north if isinstance(north, InterfaceValue) else side(north, SPATIAL)
    return Scenario(((route(kind, w, n),),))


def identity(west: InterfaceValue, north: InterfaceValue) -> Scenario:
    """Id_{m,p}: an m x p block of crossings passing every input through.

    ``m = len(west)`` and ``p = len(north)``; a side of length zero is given
    one all-nil lane so the block stays rectangular.
    """
    ws = [side(v, TEMPORAL, nm) for v, nm in zip(west.items, west.names)] or [side(world=TEMPORAL)]
    ns = [side(v, SPATIAL, nm) for v, nm in zip(north.items, north.names)] or [side(world=SPATIAL)]
    return _route_block(len(ws), len(ns), ws, ns, lambda r, c: IDENTITY)


def _route_block(rows: int, cols: int, west: Sequence[InterfaceValue],
                 north: Sequence[InterfaceValue], kind_at) -> Scenario:
    """Fill a block by pushing west/north inputs through constant cells."""
    if rows == 0 or cols == 0:
        return EMPTY_SCENARIO
    down = list(north)
    out = []
    for r in range(rows):
        cur = west[r]
        row = []
        for c in range(cols):
            kind = kind_at(r, c)
            if kind == IDENTITY and _is_nil(cur) and _is_nil(down[c]):
                kind = EMPTY_KIND
            cell = route(kind, cur, down[c])
            row.append(cell)
            cur, down[c] = cell.east, cell.south
        out.append(tuple(row))
    return Scenario(tuple(out))


# ---------------------------------------------------------------------------
# compositions


def _seam_error(name: str, a: InterfaceValue, b: InterfaceValue) -> CompositionError:
    from .lang.printer import format_value

    return CompositionError(
        f"{name} seam mismatch: {format_value(a, False)} vs {format_value(b, False)}"
    )


def _pad_rows(f: Scenario, indices: Sequence[int | None]) -> list[tuple[Cell, ...]]:
    out = []
    above = [c.north for c in f.cells[0]]
    for i in indices:
        if i is None:
            nil_t = side(world=TEMPORAL)
            out.append(tuple(constant_cell(DUMMY_KIND, nil_t, v, nil_t, v) for v in above))
        else:
            out.append(f.cells[i])
            above = [c.south for c in f.cells[i]]
    return out


def _pad_cols(f: Scenario, indices: Sequence[int | None]) -> list[list[Cell]]:
    rows: list[list[Cell]] = [[] for _ in range(f.rows)]
    left = [row[0].west for row in f.cells]
    for i in indices:
        for r in range(f.rows):
            if i is None:
                nil_s = side(world=SPATIAL)
                rows[r].append(constant_cell(DUMMY_KIND, left[r], nil_s, left[r], nil_s))
            else:
                rows[r].append(f.cells[r][i])
        if i is not None:
            left = [row[i].east for row in f.cells]
    return rows


def hcomp(f1: Scenario, f2: Scenario) -> Scenario:
    """Place ``f2`` to the right of ``f1``; f1's east feeds f2's west."""
    a = values_equal_up_to_nil(f1.east, f2.west)
    if a is None:
        raise _seam_error("east/west", f1.east, f2.west)
    if f1.is_empty():
        return f2
    if f2.is_empty():
        return f1
    if not a.insertions:
        return Scenario(tuple(r1 + r2 for r1, r2 in zip(f1.cells, f2.cells)))
    left, right = _pad_rows(f1, a.left), _pad_rows(f2, a.right)
    return Scenario(tuple(r1 + r2 for r1, r2 in zip(left, right)))


def vcomp(f1: Scenario, f2: Scenario) -> Scenario:
    """Stack ``f2`` below ``f1``; f1's south feeds f2's north."""
    a = values_equal_up_to_nil(f1.south, f2.north)
    if a is None:
        raise _seam_error("south/north", f1.south, f2.north)
    if f1.is_empty():
        return f2
    if f2.is_empty():
        return f1
    if not a.insertions:
        return Scenario(f1.cells + f2.cells)
    top, bottom = _pad_cols(f1, a.left), _pad_cols(f2, a.right)
    return Scenario(tuple(tuple(r) for r in top + bottom))


def _non_nil(v: InterfaceValue) -> list[int]:
    return [i for i, x in enumerate(v.items) if not isinstance(x, NilV)]


def _sides(v: InterfaceValue, world: str) -> list[InterfaceValue]:
    return [side(x, world, n) for x, n in zip(v.items, v.names)]


def diagonal_blocks(f1: Scenario, f2: Scenario) -> list[list[Scenario]]:
    """The 3 x 3 block layout of a diagonal composition.

    Rows: [f1, R, Λ], [S, Id, R], [Λ, S, f2].  The R and S blocks are
    staircases of recorders and speakers that turn f1's east items into
    spatial data and back (and dually for f1's south items); the Id block
    lets the two flows cross.  Blocks of zero size are empty scenarios.
    """
    if values_equal_up_to_nil(f1.east, f2.west) is None:
        raise _seam_error("east/west", f1.east, f2.west)
    if values_equal_up_to_nil(f1.south, f2.north) is None:
        raise _seam_error("south/north", f1.south, f2.north)
    east_idx, south_idx = _non_nil(f1.east), _non_nil(f1.south)
    west2_idx, north2_idx = _non_nil(f2.west), _non_nil(f2.north)
    r1, c1, r2, c2 = f1.rows, f1.cols, f2.rows, f2.cols
    ne, ns = len(east_idx), len(south_idx)
    nil_t, nil_s = side(world=TEMPORAL), side(world=SPATIAL)

    rec1 = _route_block(r1, ne, _sides(f1.east, TEMPORAL), [nil_s] * ne,
                        lambda r, c: RECORDER if r == east_idx[c] else IDENTITY)
    empty1 = _route_block(r1, c2, [nil_t] * r1, [nil_s] * c2, lambda r, c: EMPTY_KIND)
    spk2 = _route_block(ns, c1, [nil_t] * ns, _sides(f1.south, SPATIAL),
                        lambda r, c: SPEAKER if c == south_idx[r] else IDENTITY)
    spoken = _sides(spk2.east, TEMPORAL) if ns else []
    recorded = _sides(rec1.south, SPATIAL) if ne else []
    cross = _route_block(ns, ne, spoken, recorded, lambda r, c: IDENTITY)
    rec2 = _route_block(ns, c2, _sides(cross.east, TEMPORAL) if ne else spoken,
                        [nil_s] * c2, lambda r, c: RECORDER if c == north2_idx[r] else IDENTITY)
    empty3 = _route_block(r2, c1, [nil_t] * r2, [nil_s] * c1, lambda r, c: EMPTY_KIND)
    spk3 = _route_block(r2, ne, [nil_t] * r2,
                        _sides(cross.south, SPATIAL) if ns else recorded,
                        lambda r, c: SPEAKER if r == west2_idx[c] else IDENTITY)
    return [[f1, rec1, empty1], [spk2, cross, rec2], [empty3, spk3, f2]]


def dcomp(f1: Scenario, f2: Scenario) -> Scenario:
    """Place ``f2`` diagonally below-right of ``f1``.

    f1's east items reach f2's west and f1's south items reach f2's north
    through recorder/speaker staircases; the corners are empty cells.
    """
    blocks = diagonal_blocks(f1, f2)
    rows: list[tuple[Cell, ...]] = []
    for band in blocks:
        height = max(b.rows for b in band)
        for r in range(height):
            row: tuple[Cell, ...] = ()
            for b in band:
                if not b.is_empty():
                    row += b.cells[r]
            rows.append(row)
    return Scenario(tuple(rows))


# ---------------------------------------------------------------------------
# normalization and comparison


def _removable_row(row: Sequence[Cell]) -> bool:
    return all(
        c.kind in PASS_THROUGH and _is_nil(c.west) and _is_nil(c.east) and c.north == c.south
        for c in row
    )


def _removable_col(col: Sequence[Cell]) -> bool:
    return all(
        c.kind in PASS_THROUGH and _is_nil(c.north) and _is_nil(c.south) and c.west == c.east
        for c in col
    )


def normalize(f: Scenario) -> Scenario:
    """Delete rows and columns that only pass data straight through.

    At least one row and one column survive so the north/south (resp.
    west/east) border values are kept.
    """
    cells = [list(r) for r in f.cells]
    changed = True
    while changed and cells:
        changed = False
        keep = [r for r in cells if not _removable_row(r)]
        if not keep:
            keep = cells[:1]
        if len(keep) != len(cells):
            cells, changed = keep, True
        cols = list(range(len(cells[0])))
        keep_cols = [c for c in cols if not _removable_col([r[c] for r in cells])]
        if not keep_cols:
            keep_cols = cols[:1]
        if len(keep_cols) != len(cols):
            cells = [[r[c] for c in keep_cols] for r in cells]
            changed = True
    return Scenario(tuple(tuple(r) for r in cells), f.declared)


def strip_nil(v: InterfaceValue) -> tuple[SimpleValue, ...]:
    return v.non_nil()


def canonical(f: Scenario):
    """Borders without nils plus the grid of module cells with constant
    rows/columns removed.  Two scenarios with equal canonical forms differ
    only in how data is routed between the same module cells."""
    rows = [r for r in f.cells if any(not c.is_constant for c in r)]
    cols = [i for i in range(f.cols) if any(not r[i].is_constant for r in rows)]
    grid = tuple(tuple(None if r[i].is_constant else r[i] for i in cols) for r in rows)
    borders = tuple(strip_nil(v) for v in (f.west, f.north, f.east, f.south))
    return borders, grid


def equivalent(f: Scenario, g: Scenario) -> bool:
    return canonical(f) == canonical(g)


def same_up_to_padding(f: Scenario, g: Scenario) -> bool:
    return normalize(f) == normalize(g)


# ---------------------------------------------------------------------------
# validation


def seam_check(f: Scenario, types: BorderTypes | None = None) -> list[str]:
    """List every broken invariant; empty when the scenario is consistent."""
    out: list[str] = []
    if f.cells and any(len(r) != f.cols for r in f.cells):
        return ["rows differ in length"]
    for r, row in enumerate(f.cells):
        for c, cell in enumerate(row):
            for name, v, world in (("west", cell.west, TEMPORAL), ("east", cell.east, TEMPORAL),
                                   ("north", cell.north, SPATIAL), ("south", cell.south, SPATIAL)):
                if len(v.items) != 1:
                    out.append(f"cell ({r},{c}): {name} side holds {len(v.items)} items")
                if v.world not in (None, world):
                    out.append(f"cell ({r},{c}): {name} side is {v.world}")
            if c + 1 < f.cols and cell.east != row[c + 1].west:
                out.append(f"cells ({r},{c})/({r},{c + 1}): east differs from west")
            if r + 1 < f.rows and cell.south != f.cells[r + 1][c].north:
                out.append(f"cells ({r},{c})/({r + 1},{c}): south differs from north")
    types = types or f.declared
    if types is not None:
        for name, v, t in (("west", f.west, types.w), ("north", f.north, types.n),
                           ("east", f.east, types.e), ("south", f.south, types.s)):
            try:
                ok = value_conforms(v, t)
            except WorldError as exc:
                out.append(f"{name} border: {exc}")
                continue
            if not ok:
                from .lang.printer import display_type, format_value

                out.append(f"{name} border {format_value(v, False)} does not conform to {display_type(t)}")
    return out


# ---------------------------------------------------------------------------
# serialization


def encode_value(v: SimpleValue):
    if isinstance(v, NilV):
        return None
    if isinstance(v, (IntV, BoolV)):
        return v.value
    if isinstance(v, TupleV):
        return {"tuple": [encode_value(x) for x in v.items]}
    return {"star": [encode_value(x) for x in v.items]}


def decode_value(x) -> SimpleValue:
    if x is None:
        return NIL_V
    if isinstance(x, bool):
        return BoolV(x)
    if isinstance(x, int):
        return IntV(x)
    if isinstance(x, dict) and "tuple" in x:
        return TupleV(tuple(decode_value(y) for y in x["tuple"]))
    if isinstance(x, dict) and "star" in x:
        return StarV(tuple(decode_value(y) for y in x["star"]))
    raise StructureError(f"cannot decode {x!r}")


def encode_interface(v: InterfaceValue) -> list:
    return [{"v": encode_value(x), "n": list(n)} for x, n in zip(v.items, v.names)]


def decode_interface(items: list, world: str) -> InterfaceValue:
    return InterfaceValue(
        tuple(decode_value(i["v"]) for i in items), world, tuple(tuple(i.get("n", ())) for i in items)
    )


def to_structured(f: Scenario) -> dict:
    from .lang.printer import display_type

    t = f.type4
    return {
        "rows": f.rows,
        "cols": f.cols,
        "type": {k: display_type(getattr(t, k)) for k in "wnes"},
        "cells": [
            [
                {
                    "label": c.label,
                    "kind": c.kind,
                    "west": encode_interface(c.west),
                    "north": encode_interface(c.north),
                    "east": encode_interface(c.east),
                    "south": encode_interface(c.south),
                }
                for c in row
            ]
            for row in f.cells
        ],
        "west": encode_interface(f.west),
        "north": encode_interface(f.north),
        "east": encode_interface(f.east),
        "south": encode_interface(f.south),
    }


def from_structured(d: dict) -> Scenario:
    rows = []
    for row in d["cells"]:
        rows.append(tuple(
            Cell(
                c["label"],
                decode_interface(c["west"], TEMPORAL),
                decode_interface(c["north"], SPATIAL),
                decode_interface(c["east"], TEMPORAL),
                decode_interface(c["south"], SPATIAL),
                c.get("kind", MODULE),
            )
            for c in row
        ))
    return from_cells(rows)


def _side_text(v: InterfaceValue) -> str:
    from .lang.printer import format_value

    if _is_nil(v):
        return ""
    return format_value(v)


def render_text(f: Scenario) -> str:
    """Grid picture: north values above each cell, west/east values beside
    the bracketed labels, and the south border on the last line."""
    if f.is_empty():
        return "(empty scenario)\n"
    seams = [[_side_text(row[0].west)] + [_side_text(c.east) for c in row] for row in f.cells]
    seam_w = [max(len(s[i]) for s in seams) for i in range(f.cols + 1)]
    col_w = []
    for c in range(f.cols):
        texts = [f"[{r[c].label}]" for r in f.cells]
        texts += [_side_text(r[c].north) for r in f.cells] + [_side_text(f.cells[-1][c].south)]
        col_w.append(max(len(t) for t in texts))

    def line(parts_seam, parts_col):
        bits = []
        for i in range(f.cols):
            bits.append(parts_seam[i].rjust(seam_w[i]))
            bits.append(parts_col[i].center(col_w[i]))
        bits.append(parts_seam[f.cols].ljust(seam_w[f.cols]))
        return " ".join(bits).rstrip()

    blank = [""] * (f.cols + 1)
    out = []
    for r, row in enumerate(f.cells):
        out.append(line(blank, [_side_text(c.north) for c in row]))
        out.append(line(seams[r], [f"[{c.label}]" for c in row]))
    out.append(line(blank, [_side_text(c.south) for c in f.cells[-1]]))
    return "\n".join(out) + "\n"
