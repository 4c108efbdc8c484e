import dataclasses
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gbsiso.errors import CertificateError, PreconditionError
from gbsiso.fixtures import fig1a, fig1b, klein, rose
from gbsiso.graph_core import betti
from gbsiso.numbered_graph import NumberedGraph, SlideMove, labelled_equal, slide
from gbsiso.slide_engine import (
    SlideSequence,
    apply_sequence,
    class_contains,
    enumerate_slide_class,
    octopus_normal_form,
    slide_equivalent,
    synthesize_slides,
    verify_certificate,
)
from gbsiso.tagged_poset import associated_poset, data_preserving_iso

from oracles import labelled_isomorphic
from randgraphs import random_reduced_graph, random_slides, shuffle_ids

FIG1_MOVE = SlideMove(("ub", False), ("ab", True))


def is_octopus(g, pairs, anchor):
    return all(anchor in g.graph.ends(p) for p in pairs)


# octopus normal form


def test_octopus_of_path_needs_one_slide():
    g = NumberedGraph.build(
        {v: 6 for v in "abcd"}, [("ab", "a", "b", 2), ("bc", "b", "c", 2), ("cd", "c", "d", 2)]
    )
    s = octopus_normal_form(g, ["ab", "bc", "cd"], "b")
    assert len(s) == 1
    assert is_octopus(s.target, ["ab", "bc", "cd"], "b")
    assert apply_sequence(g, s) == s.target


def test_octopus_already_normal():
    g = NumberedGraph.build({v: 6 for v in "abc"}, [("ab", "a", "b", 2), ("ac", "a", "c", 2)])
    assert len(octopus_normal_form(g, ["ab", "ac"], "a")) == 0


def test_octopus_of_triangle_has_loop_at_anchor():
    g = NumberedGraph.build(
        {v: 6 for v in ("v0", "v1", "v2")},
        [("x", "v0", "v1", 2), ("y", "v1", "v2", 2), ("z", "v2", "v0", 2)],
    )
    s = octopus_normal_form(g, ["x", "y", "z"], "v0")
    t = s.target
    assert is_octopus(t, ["x", "y", "z"], "v0")
    loops = [p for p in t.graph.pair_ids if t.graph.is_loop(p)]
    assert len(loops) == 1 and t.graph.ends(loops[0]) == ("v0", "v0")
    assert betti(t.graph) == betti(g.graph) == 1


def test_octopus_rejects_mixed_labels_and_foreign_anchor():
    with pytest.raises(PreconditionError):
        octopus_normal_form(fig1a(), ["ab", "ac"], "a")
    with pytest.raises(PreconditionError):
        octopus_normal_form(fig1a(), ["ab"], "c")


# sequences and certificates


def test_empty_sequence_is_identity():
    g = fig1a()
    s = SlideSequence(g, g, (), {v: v for v in g.graph.vertices})
    assert apply_sequence(g, s) == g
    verify_certificate(s)


def test_single_slide_sequence():
    s = SlideSequence(fig1a(), fig1b(), (FIG1_MOVE,), {v: v for v in "abcu"})
    assert apply_sequence(fig1a(), s) == fig1b()
    verify_certificate(s)


def test_move_order_matters():
    g = NumberedGraph.build(
        {v: 6 for v in "abcd"}, [("ab", "a", "b", 2), ("bc", "b", "c", 2), ("cd", "c", "d", 2)]
    )
    # slide cd back along bc, then slide it again along ab
    moves = (SlideMove(("cd", True), ("bc", True)), SlideMove(("cd", True), ("ab", True)))
    end = apply_sequence(g, SlideSequence(g, g, moves, {}))
    assert end.graph.ends("cd") == ("a", "d")
    with pytest.raises(CertificateError):
        apply_sequence(g, SlideSequence(g, g, moves[::-1], {}))


def test_tampered_certificate_rejected():
    cert = slide_equivalent(fig1a(), fig1b()).certificate
    assert len(cert) > 0
    bad_target = dataclasses.replace(cert, target=fig1a())
    with pytest.raises(CertificateError):
        verify_certificate(bad_target)
    bad_hash = dataclasses.replace(cert, hashes=("0" * 64,) + cert.hashes[1:])
    with pytest.raises(CertificateError):
        verify_certificate(bad_hash)
    bad_move = dataclasses.replace(cert, moves=(SlideMove(("ac", False), ("bc", True)),) + cert.moves[1:])
    with pytest.raises(CertificateError):
        verify_certificate(bad_move)


# synthesis and decision


def test_synthesize_fig1():
    s = synthesize_slides(fig1a(), fig1b())
    assert labelled_equal(apply_sequence(fig1a(), s), fig1b(), s.vertex_map)


def test_synthesize_identity_is_empty():
    g = fig1a()
    p = associated_poset(g)
    s = synthesize_slides(g, g, {e.id: e.id for e in p.elements})
    assert len(s) == 0


def test_synthesize_path_to_star():
    path = NumberedGraph.build(
        {f"x{i}": 6 for i in range(5)}, [(f"e{i}", f"x{i}", f"x{i + 1}", 2) for i in range(4)]
    )
    star = NumberedGraph.build(
        {f"x{i}": 6 for i in range(5)}, [(f"e{i}", "x0", f"x{i + 1}", 2) for i in range(4)]
    )
    s = synthesize_slides(path, star)
    assert labelled_equal(apply_sequence(path, s), star, s.vertex_map)


def test_decision_fig1():
    d = slide_equivalent(fig1a(), fig1b())
    assert d.isomorphic
    verify_certificate(d.certificate)


def test_decision_klein_vs_rose():
    assert not slide_equivalent(klein(), rose(1)).isomorphic


def test_decision_self_empty():
    d = slide_equivalent(fig1a(), fig1a())
    assert d.isomorphic and len(d.certificate) == 0


def test_decision_reduces_first():
    g = NumberedGraph.build({"a": 6, "b": 6, "c": 2}, [("e", "a", "b", 6), ("f", "b", "c", 1), ("l", "c", "c", 2)])
    h = NumberedGraph.build({"p": 2, "q": 6}, [("f", "q", "p", 1), ("l", "p", "p", 2)])
    d = slide_equivalent(g, h)
    assert d.isomorphic
    verify_certificate(d.certificate)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_random_round_trip(seed):
    rng = random.Random(seed)
    g = random_reduced_graph(rng, max_vertices=7, max_label=24)
    h = shuffle_ids(rng, random_slides(rng, g, rng.randint(0, 12))[-1])
    d = slide_equivalent(g, h)
    assert d.isomorphic
    cert = d.certificate
    verify_certificate(cert)
    # labels never change along the certificate
    x = g
    for m in cert.moves:
        x = slide(x, m)
        assert x.vlabel == g.vlabel
        assert Counter(x.elabel.values()) == Counter(g.elabel.values())


# enumeration


def test_enumerate_single_vertex():
    cls = enumerate_slide_class(rose(3, 2))
    assert len(cls.members) == 1 and not cls.truncated


def test_enumerate_fig1a():
    cls = enumerate_slide_class(fig1a())
    assert not cls.truncated
    assert class_contains(cls, fig1a()) and class_contains(cls, fig1b())
    p = associated_poset(fig1a())
    for h in cls.members:
        assert data_preserving_iso(p, associated_poset(h)) is not None
    for a, b in zip(cls.members, cls.members[1:]):
        assert not labelled_isomorphic(a, b)


def test_enumerate_cap():
    cls = enumerate_slide_class(fig1a(), cap=5)
    assert cls.truncated and len(cls.members) == 5


def test_enumerate_requires_reduced():
    with pytest.raises(PreconditionError):
        enumerate_slide_class(NumberedGraph.build({"a": 6, "b": 6}, [("e", "a", "b", 6)]))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_negative_answers_agree_with_enumeration(s1, s2):
    g1 = random_reduced_graph(random.Random(s1), max_vertices=4, max_label=12, max_extra=2)
    g2 = random_reduced_graph(random.Random(s2), max_vertices=4, max_label=12, max_extra=2)
    d = slide_equivalent(g1, g2)
    cls = enumerate_slide_class(g1, cap=300)
    if cls.truncated:
        return
    assert class_contains(cls, g2) == d.isomorphic
