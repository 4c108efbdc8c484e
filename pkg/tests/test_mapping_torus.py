import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gbsiso.errors import PreconditionError
from gbsiso.graph_core import GraphAutomorphism, SerreGraph, aut_order, aut_power, betti, subdivide_inverted_edges
from gbsiso.group_structure import rational_euler_char
from gbsiso.mapping_torus import cage_graph, coprime_power_check, mapping_torus, rose_cyclic_cover
from gbsiso.numbered_graph import NumberedGraph

CAGE_TORUS = NumberedGraph.build(
    {"v0": 2, "w0": 2}, [("c0_0", "v0", "w0", 1), ("in0", "v0", "v0", 2), ("out0", "w0", "w0", 2)]
)


def test_identity_on_rose():
    g = SerreGraph.build(["x"], [("a", "x", "x"), ("b", "x", "x")])
    t = mapping_torus(g, GraphAutomorphism.identity(g))
    assert t.vlabel == {"x": 1} and set(t.elabel.values()) == {1} and len(t.elabel) == 2


def test_cage_5_2_torus():
    # reference value: two loops joined by an edge with both ends labelled 2
    x, f = cage_graph(5, 2)
    assert mapping_torus(x, f) == CAGE_TORUS


def test_cage_5_3_graph_shape():
    x, f = cage_graph(5, 3)
    assert len(x.vertices) == 10 and len(x.pairs) == 5 + 5 + 15
    assert aut_order(f) == 15
    assert betti(x) == 16


def test_cage_twists_agree():
    # reference value: the two cage gluings give the same orbit pattern
    for r in (2, 3):
        a = mapping_torus(*cage_graph(5, r, 1))
        b = mapping_torus(*cage_graph(5, r, 2))
        assert a == b


def test_cage_rejects_non_coprime():
    with pytest.raises(PreconditionError):
        cage_graph(4, 2)
    with pytest.raises(PreconditionError):
        cage_graph(6, 5, step=2)


def test_rose_cover_2_3():
    x, f = rose_cyclic_cover(2, 3)
    assert len(x.vertices) == 3
    assert sum(x.is_loop(p) for p in x.pair_ids) == 3
    assert betti(x) == 4 == 1 - 3 * (1 - 2)


def test_rose_cover_trivial():
    x, f = rose_cyclic_cover(3, 1)
    assert len(x.vertices) == 1 and len(x.pairs) == 3
    assert f == GraphAutomorphism.identity(x)


@pytest.mark.parametrize("M,m", [(2, 3), (3, 4), (4, 5), (2, 1), (5, 2)])
def test_rose_cover_torus_is_rose(M, m):
    t = mapping_torus(*rose_cyclic_cover(M, m))
    assert len(t.vlabel) == 1 and len(t.elabel) == M
    assert set(t.vlabel.values()) == set(t.elabel.values()) == {1}


def test_coprime_power_checks():
    x, f = cage_graph(5, 2)
    assert coprime_power_check(x, f, 3)
    assert coprime_power_check(x, f, 1)
    x, f = cage_graph(5, 3)
    assert coprime_power_check(x, f, 2)


def test_inversion_is_subdivided():
    g = SerreGraph.build(["a", "b"], [("e", "a", "b"), ("la", "a", "a"), ("lb", "b", "b")])
    f = GraphAutomorphism(g, {"a": "b", "b": "a"}, {"e": ("e", True), "la": ("lb", False), "lb": ("la", False)})
    t = mapping_torus(g, f)
    # midpoint of e is fixed: label 2, the half-edge orbit and a,b orbit carry label 1
    assert sorted(t.vlabel.values()) == [1, 2]
    assert 1 - aut_order(f) * rational_euler_char(t) == betti(g)


def _torus_invariants(x, f):
    t = mapping_torus(x, f)
    xs, fs = subdivide_inverted_edges(x, f)
    m = aut_order(fs)
    for p, o, tt, d in t.edge_list():
        assert t.vlabel[o] % d == 0 and t.vlabel[tt] % d == 0
    assert sum(m // d for d in t.vlabel.values()) == len(xs.vertices)
    assert sum(m // d for d in t.elabel.values()) == len(xs.pairs)
    assert 1 - m * rational_euler_char(t) == betti(x)
    for k in range(1, m + 1):
        if math.gcd(k, m) == 1:
            assert mapping_torus(x, aut_power(f, k)) == t


@pytest.mark.parametrize(
    "fixture",
    [cage_graph(5, 2), cage_graph(5, 3), cage_graph(7, 2, 3), rose_cyclic_cover(3, 4), rose_cyclic_cover(2, 6)],
    ids=["cage52", "cage53", "cage72s3", "rose34", "rose26"],
)
def test_torus_invariants_on_fixtures(fixture):
    _torus_invariants(*fixture)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 8), st.integers(2, 5), st.integers(0, 10**6))
def test_torus_invariants_random_cages(m, r, seed):
    if math.gcd(m, r) != 1:
        return
    steps = [s for s in range(1, m) if math.gcd(s, m) == 1]
    step = random.Random(seed).choice(steps)
    x, f = cage_graph(m, r, step)
    _torus_invariants(x, aut_power(f, 1 + (seed % 3)))
