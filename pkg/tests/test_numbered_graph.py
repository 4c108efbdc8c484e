import math
import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gbsiso.errors import DegenerateGroupError, InvalidGraphError, PreconditionError
from gbsiso.fixtures import fig1a, fig1b, klein, rose
from gbsiso.graph_core import SerreGraph, betti
from gbsiso.mapping_torus import cage_graph, mapping_torus
from gbsiso.numbered_graph import (
    LabeledGBS,
    NumberedGraph,
    SlideMove,
    centre_normalize,
    collapse,
    collapsible,
    edge_gcd,
    gbs_from_numbering,
    inverse_move,
    is_reduced,
    labelled_equal,
    legal_slides,
    modular_homomorphism,
    numbering_from_gbs,
    reduce,
    replay_collapses,
    slide,
)
from gbsiso.tagged_poset import associated_poset, data_preserving_iso

from oracles import digraphs_isomorphic, oracle_hasse
from randgraphs import random_numbered_graph, random_reduced_graph


def ident(g):
    return {v: v for v in g.graph.vertices}


# construction


def test_rejects_non_dividing_edge_label():
    with pytest.raises(InvalidGraphError, match="does not divide"):
        NumberedGraph.build({"a": 4, "b": 6}, [("e", "a", "b", 4)])


def test_rejects_disconnected():
    with pytest.raises(InvalidGraphError, match="connected"):
        NumberedGraph.build({"a": 1, "b": 1}, [])


def test_rejects_nonpositive_label():
    with pytest.raises(InvalidGraphError):
        NumberedGraph.build({"a": 0}, [])


# reducedness and collapse


def test_klein_reduced():
    assert is_reduced(klein())


def test_equal_labels_not_reduced_and_collapse_to_point():
    g = NumberedGraph.build({"a": 6, "b": 6}, [("e", "a", "b", 6)])
    assert not is_reduced(g)
    r, log = reduce(g)
    assert r.graph.vertices == ("a",) and r.vlabel == {"a": 6} and not r.graph.pairs
    assert len(log) == 1


def test_fig1a_already_reduced():
    g = fig1a()
    r, log = reduce(g)
    assert r == g and log == []


def test_path_reduction_keeps_larger_labels():
    # u(4) -2- e(2) -2- a(2) -2- f(2) -2- b(12): the three label-2 vertices merge
    # into their neighbours, leaving u(4) -2- b(12), which is reduced.
    g = NumberedGraph.build(
        {"u": 4, "e": 2, "a": 2, "f": 2, "b": 12},
        [("x", "u", "e", 2), ("y", "e", "a", 2), ("z", "a", "f", 2), ("w", "f", "b", 2)],
    )
    r, log = reduce(g)
    assert is_reduced(r)
    assert sorted(r.vlabel.values()) == [4, 12]
    assert list(r.elabel.values()) == [2]
    assert replay_collapses(g, log) == r


def test_collapse_merges_the_equal_label_endpoint():
    g = NumberedGraph.build({"a": 2, "b": 6}, [("e", "a", "b", 2), ("l", "a", "a", 1)])
    h, c = collapse(g, "e")
    assert (c.removed, c.kept) == ("a", "b")
    assert h.vlabel == {"b": 6} and h.graph.ends("l") == ("b", "b")


def test_collapse_rejects_loops_and_noncollapsible():
    g = NumberedGraph.build({"a": 2}, [("l", "a", "a", 2)])
    assert not collapsible(g, "l")
    with pytest.raises(PreconditionError):
        collapse(g, "l")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_reduce_order_independent_up_to_poset(seed):
    rng = random.Random(seed)
    g = random_numbered_graph(rng)
    canonical, _ = reduce(g)
    h = g
    while True:
        eligible = [p for p in h.graph.pair_ids if collapsible(h, p)]
        if not eligible:
            break
        h, _ = collapse(h, rng.choice(eligible))
    assert is_reduced(h)
    assert data_preserving_iso(associated_poset(canonical), associated_poset(h)) is not None


# slides


def test_fig1_slide():
    # reference value: one label-2 edge slides along the label-6 edge
    g = slide(fig1a(), SlideMove(("ub", False), ("ab", True)))
    assert g == fig1b()


def test_slide_requires_divisibility():
    with pytest.raises(PreconditionError, match="does not divide"):
        slide(fig1a(), SlideMove(("ac", False), ("bc", True)))


def test_slide_requires_adjacency():
    with pytest.raises(PreconditionError, match="differs from origin"):
        slide(fig1a(), SlideMove(("ub", False), ("ac", False)))


def test_slide_requires_distinct_pairs():
    with pytest.raises(PreconditionError, match="distinct"):
        slide(fig1a(), SlideMove(("uu", False), ("uu", True)))


def test_slide_loop_end_off_its_vertex():
    g = NumberedGraph.build({"x": 2, "y": 2}, [("l", "x", "x", 2), ("e", "x", "y", 2)])
    h = slide(g, SlideMove(("l", False), ("e", False)))
    assert h.graph.ends("l") == ("x", "y")


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_slide_invariants(seed):
    rng = random.Random(seed)
    g = random_reduced_graph(rng, max_vertices=6)
    moves = legal_slides(g)
    if not moves:
        return
    m = rng.choice(moves)
    h = slide(g, m)
    assert h.vlabel == g.vlabel
    assert Counter(h.elabel.values()) == Counter(g.elabel.values())
    assert betti(h.graph) == betti(g.graph)
    assert is_reduced(h)
    assert data_preserving_iso(associated_poset(g), associated_poset(h)) is not None
    assert digraphs_isomorphic(oracle_hasse(g), oracle_hasse(h))
    back = slide(h, inverse_move(h, m))
    assert labelled_equal(back, g, ident(g))


# GBS dictionary


def test_klein_gbs_deltas():
    # reference value: a^2 = b^2
    gbs = gbs_from_numbering(klein())
    assert set(gbs.delta.values()) == {2}


def test_rose_gbs_deltas():
    assert set(gbs_from_numbering(rose(3)).delta.values()) == {1}


def test_cage_torus_gbs_deltas():
    x, f = cage_graph(5, 2)
    t = mapping_torus(x, f)
    gbs = gbs_from_numbering(t)
    for (p, _), d in gbs.delta.items():
        assert d == (2 if t.graph.ends(p)[0] != t.graph.ends(p)[1] else 1)


def _loop(d_out, d_in, sign):
    g = SerreGraph.build(["x"], [("l", "x", "x")])
    return LabeledGBS(g, {("l", False): d_in, ("l", True): d_out}, {"l": sign})


def test_modular_values():
    assert modular_homomorphism(_loop(1, 2, 1))["l"] in (Fraction(2), Fraction(1, 2))
    assert modular_homomorphism(_loop(2, 2, -1))["l"] == -1


def test_numbering_from_klein_gbs():
    g = numbering_from_gbs(gbs_from_numbering(klein()))
    assert g.vlabel == {"a": 2, "b": 2} and g.elabel == {"e": 1}


def test_numbering_rejects_nontrivial_modular():
    with pytest.raises(PreconditionError, match="modular"):
        numbering_from_gbs(_loop(1, 2, 1))


def test_numbering_rejects_negative_sign():
    with pytest.raises(PreconditionError):
        numbering_from_gbs(_loop(2, 2, -1))


def test_numbering_of_balanced_loop():
    g = numbering_from_gbs(_loop(2, 2, 1))
    assert g.vlabel == {"x": 2} and g.elabel == {"l": 1}


def test_numbering_rejects_edgeless():
    with pytest.raises(DegenerateGroupError):
        centre_normalize(NumberedGraph.build({"x": 3}, []))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_dictionary_round_trip(seed):
    g = random_numbered_graph(random.Random(seed))
    assert all(v == 1 for v in modular_homomorphism(gbs_from_numbering(g)).values())
    c = centre_normalize(g)
    assert edge_gcd(c) == 1
    k = edge_gcd(g)
    # centre normalisation divides every label by the edge gcd
    assert c.elabel == {p: d // k for p, d in g.elabel.items()}
    assert c.vlabel == {v: d // k for v, d in g.vlabel.items()}
    if k == 1:
        assert c == g


def test_scaled_graph_normalises_back():
    g = fig1a()
    doubled = NumberedGraph(g.graph, {v: 2 * d for v, d in g.vlabel.items()}, {p: 2 * d for p, d in g.elabel.items()})
    assert edge_gcd(doubled) == 2
    assert centre_normalize(doubled) == g
    assert math.gcd(*centre_normalize(doubled).elabel.values()) == 1
