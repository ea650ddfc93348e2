"""Hierarchical temporal memory trees compiled into programs.

Nodes are labelled by digit strings: the i-th child of the node labelled
``w`` is labelled ``wi`` and the root carries the empty label (shown as
``nil``).  Nodes are laid out left to right in post-order, so every parent
sits to the right of its descendants and one horizontal sweep carries the
whole upward flow.

The generated program threads a single temporal tuple ``h`` (the bus)
through the node modules.  Bus fields, 1-based:

* 1: round counter
* one field per leaf: its input stream, a star of patterns ending with the
  sentinel pattern ``[-1]``
* one field per node: the class code it produced this round
* four fields per leaf: pass-through flag, passed pattern, pending
  feedback code (-1 when none), last received feedback code
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from .errors import GenerationError, InterfaceError
from .iface import (
    TEMPORAL,
    BaseT,
    BoolV,
    IntV,
    InterfaceValue,
    StarT,
    StarV,
    TupleT,
    TupleV,
)
from .lang import ast as A
from .lang.parser import parse_stmt
from .scenario import Scenario

MODES = ("bestFull", "prefix", "fullyAttentive")
SENTINEL = -1


@dataclass(frozen=True)
class ClassifierCfg:
    templates: tuple[tuple[int, ...], ...]
    names: tuple[int, ...]
    mode: str = "bestFull"
    threshold: int = 0

    def __post_init__(self):
        object.__setattr__(self, "templates", tuple(tuple(t) for t in self.templates))
        object.__setattr__(self, "names", tuple(self.names))
        if not self.templates or len(self.templates) != len(self.names):
            raise GenerationError("a classifier needs as many names as templates (at least one)")
        if len(set(self.templates)) != len(self.templates):
            raise GenerationError("classifier templates must be distinct")
        if len({len(t) for t in self.templates}) != 1:
            raise GenerationError("classifier templates must share one length")
        if self.mode not in MODES:
            raise GenerationError(f"unknown classifier mode {self.mode!r}")
        if self.threshold < 0:
            raise GenerationError("threshold must be nonnegative")

    @property
    def width(self) -> int:
        return len(self.templates[0])


@dataclass(frozen=True)
class HtmNode:
    code: str
    children: tuple["HtmNode", ...] = ()
    classifier: ClassifierCfg | None = None

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        for i, c in enumerate(self.children, start=1):
            if c.code != self.code + str(i):
                raise GenerationError(f"child {i} of node {display_code(self.code)} must be labelled {self.code}{i}")

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class HtmTree:
    root: HtmNode

    def nodes(self) -> list[HtmNode]:
        return post_order(self.root)

    def leaves(self) -> list[HtmNode]:
        return [n for n in self.nodes() if n.is_leaf]

    def parent_of(self, code: str) -> HtmNode | None:
        if not code:
            return None
        return next(n for n in self.nodes() if n.code == code[:-1])


def display_code(code: str) -> str:
    return code or "nil"


def post_order(node: HtmNode) -> list[HtmNode]:
    out: list[HtmNode] = []
    for c in node.children:
        out.extend(post_order(c))
    out.append(node)
    return out


def tree_linearize(t: HtmTree) -> list[str]:
    """Node labels with every child list before its parent."""
    return [display_code(n.code) for n in t.nodes()]


def regular_tree(fanouts: Sequence[int], cfg_for=None) -> HtmTree:
    """Tree whose level-d nodes all have ``fanouts[d]`` children."""

    def build(code: str, depth: int) -> HtmNode:
        k = fanouts[depth] if depth < len(fanouts) else 0
        kids = tuple(build(code + str(i), depth + 1) for i in range(1, k + 1))
        return HtmNode(code, kids, cfg_for(code, len(kids)) if cfg_for else None)

    return HtmTree(build("", 0))


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Code:
    name: int


@dataclass(frozen=True)
class PassThrough:
    pattern: tuple[int, ...]


@dataclass(frozen=True)
class Decided:
    index: int
    position: int


@dataclass(frozen=True)
class Ambiguous:
    position: int


Output = Union[Code, PassThrough]


def _check_len(pattern: Sequence[int], cfg: ClassifierCfg):
    if len(pattern) != cfg.width:
        raise InterfaceError(f"pattern of length {len(pattern)} for templates of length {cfg.width}")


def best_match(pattern: Sequence[int], cfg: ClassifierCfg) -> tuple[int, int]:
    """(1-based class index, Hamming distance); ties go to the lowest index."""
    _check_len(pattern, cfg)
    dists = [sum(a != b for a, b in zip(pattern, t)) for t in cfg.templates]
    d = min(dists)
    return dists.index(d) + 1, d


def prefix_match(pattern: Sequence[int], cfg: ClassifierCfg) -> Decided | Ambiguous:
    """Decide as soon as a single template agrees with the prefix read so far."""
    _check_len(pattern, cfg)
    alive = list(range(len(cfg.templates)))
    for j, x in enumerate(pattern, start=1):
        alive = [i for i in alive if cfg.templates[i][j - 1] == x]
        if len(alive) == 1:
            return Decided(alive[0] + 1, j)
        if not alive:
            return Ambiguous(j)
    return Decided(best_match(pattern, cfg)[0], len(pattern))


def classify_node(pattern: Sequence[int], cfg: ClassifierCfg) -> Output:
    if cfg.mode == "prefix":
        r = prefix_match(pattern, cfg)
        k = r.index if isinstance(r, Decided) else best_match(pattern, cfg)[0]
        return Code(cfg.names[k - 1])
    k, d = best_match(pattern, cfg)
    if cfg.mode == "fullyAttentive" and d > cfg.threshold:
        return PassThrough(tuple(pattern))
    return Code(cfg.names[k - 1])


@dataclass(frozen=True)
class RoundTrace:
    codes: dict[str, int]
    passed: dict[str, tuple[int, ...]] = field(default_factory=dict)
    feedback: dict[str, int] = field(default_factory=dict)


def simulate(t: HtmTree, patterns: dict[str, Sequence[Sequence[int]]]) -> list[RoundTrace]:
    """Reference model of the forward flow, one trace per round.

    ``patterns`` maps each leaf label to its per-round patterns.  A parent
    resolves a child's pass-through with the child's own best match.
    """
    rounds = min(len(v) for v in patterns.values()) if patterns else 0
    out = []
    for r in range(rounds):
        codes: dict[str, int] = {}
        passed: dict[str, tuple[int, ...]] = {}
        feedback: dict[str, int] = {}
        for n in t.nodes():
            cfg = n.classifier
            if n.is_leaf:
                res = classify_node(patterns[display_code(n.code)][r], cfg)
            else:
                inputs = []
                for c in n.children:
                    if c.code in passed:
                        k, _ = best_match(passed[c.code], c.classifier)
                        feedback[c.code] = c.classifier.names[k - 1]
                        inputs.append(feedback[c.code])
                    else:
                        inputs.append(codes[c.code])
                res = classify_node(inputs, cfg)
            if isinstance(res, PassThrough):
                passed[n.code] = res.pattern
                codes[n.code] = SENTINEL
            else:
                codes[n.code] = res.name
        out.append(RoundTrace(codes, passed, feedback))
    return out


# ---------------------------------------------------------------------------
# program generation


@dataclass(frozen=True)
class BusLayout:
    leaves: tuple[str, ...]
    nodes: tuple[str, ...]

    @property
    def size(self) -> int:
        return 1 + len(self.leaves) + len(self.nodes) + 4 * len(self.leaves)

    def stream(self, leaf: str) -> int:
        return 2 + self.leaves.index(leaf)

    def code(self, node: str) -> int:
        return 2 + len(self.leaves) + self.nodes.index(node)

    def _leaf_base(self, leaf: str) -> int:
        return 2 + len(self.leaves) + len(self.nodes) + 4 * self.leaves.index(leaf)

    def flag(self, leaf: str) -> int:
        return self._leaf_base(leaf)

    def passed(self, leaf: str) -> int:
        return self._leaf_base(leaf) + 1

    def feedback(self, leaf: str) -> int:
        return self._leaf_base(leaf) + 2

    def received(self, leaf: str) -> int:
        return self._leaf_base(leaf) + 3

    def type(self) -> TupleT:
        tn, tb = BaseT("tn"), BaseT("tb")
        items = [tn] + [StarT(StarT(tn))] * len(self.leaves) + [tn] * len(self.nodes)
        items += [tb, StarT(tn), tn, tn] * len(self.leaves)
        return TupleT(tuple(items))


def bus_layout(t: HtmTree) -> BusLayout:
    nodes = t.nodes()
    return BusLayout(tuple(n.code for n in nodes if n.is_leaf), tuple(n.code for n in nodes))


def module_name(code: str, prefix: str = "N") -> str:
    return prefix + (code if code else "root")


def _validate(t: HtmTree):
    for n in t.nodes():
        cfg = n.classifier
        if cfg is None:
            raise GenerationError(f"node {display_code(n.code)} has no classifier")
        if not n.is_leaf:
            if cfg.mode == "fullyAttentive":
                raise GenerationError(
                    f"node {display_code(n.code)}: pass-through classification is only generated for leaves"
                )
            if cfg.width != len(n.children):
                raise GenerationError(
                    f"node {display_code(n.code)}: templates need one entry per child ({len(n.children)})"
                )


class _Gen:
    """Emits unrolled W code for one classifier."""

    def __init__(self, tag: str):
        self.tag = tag

    def v(self, name: str) -> str:
        return f"{name}_{self.tag}"

    def best(self, elems: list[str], cfg: ClassifierCfg) -> list[str]:
        d, bd, best = self.v("d"), self.v("bd"), self.v("best")
        lines = [f"new {d}:tn", f"new {bd}:tn", f"new {best}:tn"]
        for i, tpl in enumerate(cfg.templates, start=1):
            lines.append(f"{d} = 0")
            for e, x in zip(elems, tpl):
                lines.append(f"if ({e} != {x}) {d} = {d} + 1")
            if i == 1:
                lines += [f"{best} = 1", f"{bd} = {d}"]
            else:
                lines.append(f"if ({d} < {bd}) {{{best} = {i}; {bd} = {d}}}")
        return lines

    def prefix(self, elems: list[str], cfg: ClassifierCfg) -> list[str]:
        alive = [self.v(f"a{i}") for i in range(1, len(cfg.templates) + 1)]
        dec, cnt, best = self.v("dec"), self.v("cnt"), self.v("best")
        lines = [f"new {a}:tb" for a in alive] + [f"{a} = true" for a in alive]
        lines += [f"new {dec}:tn", f"new {cnt}:tn", f"{dec} = 0"]
        for j, e in enumerate(elems):
            for a, tpl in zip(alive, cfg.templates):
                lines.append(f"if ({a} && {e} != {tpl[j]}) {a} = false")
            lines.append(f"{cnt} = 0")
            lines += [f"if ({a}) {cnt} = {cnt} + 1" for a in alive]
            pick = "; ".join(f"if ({a}) {dec} = {i}" for i, a in enumerate(alive, start=1))
            lines.append(f"if ({dec} == 0 && {cnt} == 1) {{{pick}}}")
        lines += self.best(elems, cfg)
        lines.append(f"if ({dec} > 0) {best} = {dec}")
        return lines

    def code(self, cfg: ClassifierCfg, out: str) -> list[str]:
        best = self.v("best")
        return [f"if ({best} == {i}) {out} = {name}" for i, name in enumerate(cfg.names, start=1)]


def _node_body(t: HtmTree, n: HtmNode, bus: BusLayout) -> str:
    cfg = n.classifier
    lines: list[str] = ["new c:tn"]
    g = _Gen("n")
    if n.is_leaf:
        lines += ["new p:tn*", f"p = h@{bus.stream(n.code)}@[h@1 + 1]"]
        elems = [f"p@[{j}]" for j in range(1, cfg.width + 1)]
    else:
        elems = []
        for j, c in enumerate(n.children, start=1):
            e = f"e{j}"
            lines += [f"new {e}:tn", f"{e} = h@{bus.code(c.code)}"]
            if c.is_leaf and c.classifier.mode == "fullyAttentive":
                cg = _Gen(f"k{j}")
                ccfg = c.classifier
                resolve = [f"new q{j}:tn*", f"q{j} = h@{bus.passed(c.code)}"]
                resolve += cg.best([f"q{j}@[{i}]" for i in range(1, ccfg.width + 1)], ccfg)
                resolve += cg.code(ccfg, e)
                resolve.append(f"h@{bus.feedback(c.code)} = {e}")
                lines.append(f"if (h@{bus.flag(c.code)}) {{{'; '.join(resolve)}}}")
            elems.append(e)
    lines += g.prefix(elems, cfg) if cfg.mode == "prefix" else g.best(elems, cfg)
    lines += g.code(cfg, "c")
    if cfg.mode == "fullyAttentive":
        bd = g.v("bd")
        lines.append(
            f"if ({bd} > {cfg.threshold}) {{h@{bus.flag(n.code)} = true; h@{bus.passed(n.code)} = p; c = {SENTINEL}}}"
            f" else {{h@{bus.flag(n.code)} = false}}"
        )
    lines.append(f"h@{bus.code(n.code)} = c")
    if not n.code:
        lines.append("h@1 = h@1 + 1")
    return ";\n".join(lines)


def _bus_module(name: str, bus: BusLayout, body: str) -> A.ModuleAst:
    return A.ModuleAst(name, (("h", bus.type()),), (), parse_stmt(body), ("h",), ())


def _chain(mods: list[A.ModuleAst]) -> A.Program:
    p: A.Program = A.ModuleRef(mods[0])
    for m in mods[1:]:
        p = A.HPar(p, A.ModuleRef(m))
    return p


def _init_module(bus: BusLayout) -> A.ModuleAst:
    tn = BaseT("tn")
    listen = tuple((f"s{i}", StarT(StarT(tn))) for i in range(1, len(bus.leaves) + 1))
    lines = []
    for i, leaf in enumerate(bus.leaves, start=1):
        lines.append(f"h@{bus.stream(leaf)} = s{i}")
        lines.append(f"h@{bus.feedback(leaf)} = {SENTINEL}")
        lines.append(f"h@{bus.received(leaf)} = {SENTINEL}")
    for node in bus.nodes:
        lines.append(f"h@{bus.code(node)} = {SENTINEL}")
    body = A.seq(A.NewVar("h", bus.type()), parse_stmt(";\n".join(lines)))
    return A.ModuleAst("Init", listen, (), body, ("h",), ())


def _guard(bus: BusLayout) -> A.Expr:
    from .lang.parser import parse_expr

    return parse_expr(f"h@{bus.stream(bus.leaves[0])}@[h@1 + 1]@[1] > {SENTINEL}")


def forward_chain(t: HtmTree) -> A.Program:
    _validate(t)
    bus = bus_layout(t)
    mods = [_bus_module(module_name(n.code), bus, _node_body(t, n, bus)) for n in t.nodes()]
    return _chain(mods)


def feedback_chain(t: HtmTree) -> A.Program:
    bus = bus_layout(t)
    mods = []
    for n in t.nodes():
        if n.is_leaf and n.code and n.classifier.mode == "fullyAttentive":
            fb, rc = bus.feedback(n.code), bus.received(n.code)
            body = f"if (h@{fb} > {SENTINEL}) {{h@{rc} = h@{fb}; h@{fb} = {SENTINEL}}}"
        else:
            body = "nil"
        mods.append(_bus_module(module_name(n.code, "Q"), bus, body))
    return _chain(mods)


def build_forward_program(t: HtmTree) -> A.Program:
    """``Init $ while_st(more input){node modules in post-order}``."""
    body = forward_chain(t)
    bus = bus_layout(t)
    return A.DComp(A.ModuleRef(_init_module(bus)), A.WhileST(_guard(bus), body))


def build_feedback_program(t: HtmTree) -> A.Program:
    """Forward program whose loop body adds a diagonal feedback layer."""
    body = A.DComp(forward_chain(t), feedback_chain(t))
    bus = bus_layout(t)
    return A.DComp(A.ModuleRef(_init_module(bus)), A.WhileST(_guard(bus), body))


# ---------------------------------------------------------------------------
# inputs and outputs


def input_value(t: HtmTree, patterns: dict[str, Sequence[Sequence[int]]]) -> InterfaceValue:
    """West input of a generated program: each leaf's patterns plus the sentinel."""
    streams = []
    for leaf in t.leaves():
        pats = [StarV(tuple(IntV(x) for x in p)) for p in patterns[display_code(leaf.code)]]
        pats.append(StarV((IntV(SENTINEL),)))
        streams.append(StarV(tuple(pats)))
    item = streams[0] if len(streams) == 1 else TupleV(tuple(streams))
    return InterfaceValue((item,), TEMPORAL)


def bus_snapshots(t: HtmTree, f: Scenario, prefix: str = "N") -> list[TupleV]:
    """Bus value leaving the root module, once per round."""
    root = module_name(t.root.code, prefix)
    out = []
    for row in f.cells:
        for c in row:
            if c.label == root:
                out.append(c.east.items[0])
    return out


def root_outputs(t: HtmTree, f: Scenario) -> list[int]:
    bus = bus_layout(t)
    return [snap.items[bus.code(t.root.code) - 1].value for snap in bus_snapshots(t, f)]


def node_codes(t: HtmTree, snap: TupleV) -> dict[str, int]:
    bus = bus_layout(t)
    return {display_code(c): snap.items[bus.code(c) - 1].value for c in bus.nodes}


def leaf_field(t: HtmTree, snap: TupleV, leaf: str, which: str):
    bus = bus_layout(t)
    code = "" if leaf == "nil" else leaf
    v = snap.items[getattr(bus, which)(code) - 1]
    if isinstance(v, (IntV, BoolV)):
        return v.value
    return v


# ---------------------------------------------------------------------------
# tree files


def parse_tree_file(text: str) -> HtmTree:
    """Read a tree description.

    One node per line: ``code mode threshold templates names``, where code is
    a digit string (``nil`` for the root), templates are ``;``-separated
    comma lists and names a comma list.  ``#`` starts a comment.
    """
    entries: dict[str, tuple[int, ClassifierCfg]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise GenerationError(f"line {lineno}: expected 5 fields, found {len(parts)}", (lineno, 1))
        code_s, mode, thr, tpls, names = parts
        code = "" if code_s == "nil" else code_s
        if code and not code.isdigit():
            raise GenerationError(f"line {lineno}: bad node code {code_s!r}", (lineno, 1))
        if code in entries:
            raise GenerationError(f"line {lineno}: node {code_s} listed twice", (lineno, 1))
        try:
            cfg = ClassifierCfg(
                tuple(tuple(int(x) for x in tp.split(",")) for tp in tpls.split(";")),
                tuple(int(x) for x in names.split(",")),
                mode,
                int(thr),
            )
        except ValueError as exc:
            raise GenerationError(f"line {lineno}: {exc}", (lineno, 1)) from None
        except GenerationError as exc:
            raise GenerationError(f"line {lineno}: {exc.message}", (lineno, 1)) from None
        entries[code] = (lineno, cfg)
    if "" not in entries:
        raise GenerationError("no root node (code nil)")
    for code, (lineno, _) in entries.items():
        if code and code[:-1] not in entries:
            raise GenerationError(f"line {lineno}: node {code} has no parent", (lineno, 1))

    def build(code: str) -> HtmNode:
        kids = sorted((c for c in entries if c and c[:-1] == code), key=lambda c: int(c[-1]))
        for i, c in enumerate(kids, start=1):
            if c != code + str(i):
                raise GenerationError(
                    f"line {entries[c][0]}: children of {display_code(code)} must be numbered from 1",
                    (entries[c][0], 1),
                )
        return HtmNode(code, tuple(build(c) for c in kids), entries[code][1])

    return HtmTree(build(""))


def format_tree_file(t: HtmTree) -> str:
    lines = []
    for n in t.nodes():
        cfg = n.classifier
        tpls = ";".join(",".join(str(x) for x in tp) for tp in cfg.templates)
        names = ",".join(str(x) for x in cfg.names)
        lines.append(f"{display_code(n.code)} {cfg.mode} {cfg.threshold} {tpls} {names}")
    return "\n".join(lines) + "\n"
