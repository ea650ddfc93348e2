import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agapia.errors import IndexRangeError, StructureError, WorldError
from agapia.iface import (
    NIL_T,
    NIL_V,
    SPATIAL,
    TEMPORAL,
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
    StarT,
    StarV,
    TupleT,
    TupleV,
    UnionT,
    access,
    equal_up_to_nil,
    group,
    match,
    spatial_field,
    temporal_index,
    type_of_value,
    value_conforms,
)
from agapia.lang import parse_type

# ---------------------------------------------------------------------------
# independent value-set oracle: enumerate every value of a type over the
# universe {0, 1, true, false} with stars up to length 1; sequences are cut
# at MAX_LEN items, which is exhaustive for types whose sequences are short


def simple_values(t):
    """All members of a simple type, NilV included when admitted."""
    if isinstance(t, NilT):
        return {NIL_V}
    if isinstance(t, BaseT):
        return {IntV(0), IntV(1)} if t.kind.endswith("n") else {BoolV(False), BoolV(True)}
    if isinstance(t, UnionT):
        return simple_values(t.left) | simple_values(t.right)
    if isinstance(t, TupleT):
        return {TupleV(p) for p in itertools.product(*(simple_values(c) for c in t.items))}
    elems = simple_values(t.item)
    return {NIL_V, StarV(())} | {StarV((x,)) for x in elems}


def value_count(t) -> int:
    if isinstance(t, NilT):
        return 1
    if isinstance(t, BaseT):
        return 2
    if isinstance(t, UnionT):
        return value_count(t.left) + value_count(t.right)
    if isinstance(t, TupleT):
        n = 1
        for c in t.items:
            n *= value_count(c)
        return n
    return 2 + value_count(t.item)


MAX_LEN = 3


def language(groups) -> set:
    """Sequences of non-nil items denoted by a group list."""
    out = {()}
    for g in groups:
        out = {a + b for a in out for b in _group_lang(g) if len(a + b) <= MAX_LEN}
    return out


def _group_lang(g) -> set:
    if isinstance(g, Simple):
        return {() if isinstance(v, NilV) else (v,) for v in simple_values(g.type)}
    if isinstance(g, GroupUnion):
        return language(g.left.groups) | language(g.right.groups)
    body = language(g.body.groups)
    out, layer = {()}, {()}
    for _ in range(MAX_LEN):
        layer = {a + b for a in layer for b in body if len(a + b) <= MAX_LEN}
        out |= layer
    return out


def longest(groups) -> float:
    """Upper bound on sequence length; infinite under a group star."""
    n = 0.0
    for g in groups:
        if isinstance(g, Simple):
            n += 0 if isinstance(g.type, NilT) else 1
        elif isinstance(g, GroupUnion):
            n += max(longest(g.left.groups), longest(g.right.groups))
        else:
            n += 0 if not longest(g.body.groups) else float("inf")
    return n


def simple_types(world: str, depth: int = 3):
    kinds = ["sn", "sb"] if world == SPATIAL else ["tn", "tb"]
    leaf = st.one_of(st.just(NIL_T), st.sampled_from(kinds).map(BaseT))
    if depth <= 1:
        return leaf
    sub = simple_types(world, depth - 1)
    return st.one_of(
        leaf,
        st.tuples(sub, sub).map(lambda p: UnionT(*p)),
        st.tuples(sub, sub).map(lambda p: TupleT(p)),
        sub.map(StarT),
    ).filter(lambda t: value_count(t) <= 8)


def interface_types(world: str, depth: int = 2):
    simple = simple_types(world).map(Simple)
    if depth <= 1:
        entry = simple
    else:
        sub = interface_types(world, depth - 1)
        entry = st.one_of(
            simple,
            simple,
            st.tuples(sub, sub).map(lambda p: GroupUnion(*p)),
            sub.map(GroupStar),
        )
    return st.lists(entry, max_size=3).map(lambda gs: InterfaceType(tuple(gs), world))


worlds = st.sampled_from([SPATIAL, TEMPORAL])


@st.composite
def type_pairs(draw):
    w = draw(worlds)
    return draw(interface_types(w)), draw(interface_types(w))


@settings(max_examples=400, deadline=None)
@given(type_pairs())
def test_match_agrees_with_value_set_intersection(pair):
    a, b = pair
    common = language(a.groups) & language(b.groups)
    if common:
        assert match(a, b)
    elif min(longest(a.groups), longest(b.groups)) <= MAX_LEN:
        # one side is fully enumerated, so the intersection is really empty
        assert not match(a, b)


@settings(max_examples=300, deadline=None)
@given(type_pairs())
def test_match_is_symmetric(pair):
    a, b = pair
    assert match(a, b) == match(b, a)


@settings(max_examples=200, deadline=None)
@given(worlds.flatmap(interface_types))
def test_match_with_itself_and_with_nil(t):
    if language(t.groups):
        assert match(t, t)
    assert match(InterfaceType((), t.world), t) == (() in language(t.groups))


@st.composite
def type_and_member(draw):
    t = draw(worlds.flatmap(interface_types))
    members = sorted(language(t.groups), key=repr)
    items = draw(st.sampled_from(members)) if members else ()
    return t, InterfaceValue(tuple(items), t.world)


@settings(max_examples=300, deadline=None)
@given(type_and_member())
def test_members_conform(pair):
    t, v = pair
    if language(t.groups):
        assert value_conforms(v, t)


@settings(max_examples=300, deadline=None)
@given(type_and_member())
def test_value_conforms_to_its_own_type(pair):
    _, v = pair
    assert value_conforms(v, type_of_value(v))


def test_type_of_value_examples():
    assert type_of_value(InterfaceValue((), SPATIAL)).is_nil()
    assert type_of_value(InterfaceValue((IntV(6),), SPATIAL)) == parse_type("sn", SPATIAL)
    assert type_of_value(InterfaceValue((IntV(6), IntV(3)), TEMPORAL)) == parse_type("tn;tn", TEMPORAL)


def test_value_conforms_examples():
    assert value_conforms(InterfaceValue((), SPATIAL), parse_type("nil", SPATIAL))
    assert value_conforms(InterfaceValue((IntV(6),), SPATIAL), parse_type("sn | sb", SPATIAL))
    assert not value_conforms(InterfaceValue((BoolV(True),), SPATIAL), parse_type("sn", SPATIAL))
    with pytest.raises(WorldError):
        value_conforms(InterfaceValue((IntV(1),), TEMPORAL), parse_type("sn", SPATIAL))


def test_match_examples():
    assert match(parse_type("tn"), parse_type("tn"))
    assert match(parse_type("sn | sb"), parse_type("sb"))
    assert not match(parse_type("sn"), parse_type("tn"))


# ---------------------------------------------------------------------------
# equality up to nil insertion


def brute_alignments(a, b):
    """All paddings of a and b to a common length with pairwise equal entries."""
    found = []
    for n in range(max(len(a), len(b)), len(a) + len(b) + 1):
        for pa in itertools.combinations(range(n), len(a)):
            for pb in itertools.combinations(range(n), len(b)):
                la, lb = [None] * n, [None] * n
                for i, p in enumerate(pa):
                    la[p] = i
                for i, p in enumerate(pb):
                    lb[p] = i
                ga = [Simple(NIL_T) if i is None else a[i] for i in la]
                gb = [Simple(NIL_T) if i is None else b[i] for i in lb]
                if ga == gb:
                    found.append((tuple(la), tuple(lb)))
    return found


group_lists = st.lists(st.sampled_from([Simple(NIL_T), Simple(BaseT("sn")), Simple(BaseT("sb"))]), max_size=4)


@settings(max_examples=300, deadline=None)
@given(group_lists, group_lists)
def test_equal_up_to_nil_matches_exhaustive_search(a, b):
    ta, tb = InterfaceType(tuple(a), SPATIAL), InterfaceType(tuple(b), SPATIAL)
    got = equal_up_to_nil(ta, tb)
    brute = brute_alignments(a, b)
    assert (got is None) == (not brute)
    if got is not None:
        assert min(x.count(None) + y.count(None) for x, y in brute) == got.insertions
        assert (got.left, got.right) in brute
        back = equal_up_to_nil(tb, ta)
        assert back == got.reversed()


def test_equal_up_to_nil_examples():
    sn = parse_type("sn;sn", SPATIAL)
    a = equal_up_to_nil(sn, sn)
    assert a.insertions == 0 and a.left == (0, 1)
    a = equal_up_to_nil(parse_type("sn", SPATIAL), parse_type("nil;sn", SPATIAL))
    assert a.left == (None, 0) and a.right == (0, 1)
    assert equal_up_to_nil(parse_type("sn;sb", SPATIAL), parse_type("sb;sn", SPATIAL)) is None


# ---------------------------------------------------------------------------
# accessors


def test_access_examples():
    v = InterfaceValue((IntV(6), IntV(3)), SPATIAL)
    assert access(v, group(2)) == IntV(3)
    t = InterfaceValue((TupleV((IntV(1), IntV(2))),), SPATIAL)
    assert access(t, group(1), spatial_field(2)) == IntV(2)
    s = InterfaceValue((StarV((IntV(7),)),), TEMPORAL)
    with pytest.raises(IndexRangeError):
        access(s, group(1), temporal_index(2))


def test_access_world_and_structure_errors():
    t = InterfaceValue((TupleV((IntV(1), IntV(2))),), TEMPORAL)
    with pytest.raises(WorldError):
        access(t, group(1), spatial_field(1))
    with pytest.raises(StructureError):
        access(InterfaceValue((IntV(1),), SPATIAL), group(1), spatial_field(1))


def test_star_values_keep_one_shape():
    with pytest.raises(StructureError):
        StarV((IntV(1), TupleV((IntV(1), IntV(2)))))


def test_mixed_worlds_rejected():
    with pytest.raises(WorldError):
        InterfaceType((Simple(BaseT("sn")), Simple(BaseT("tn"))))
