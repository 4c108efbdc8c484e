"""Slide-move certificates between reduced numbered graphs.

Two reduced numbered graphs with isomorphic posets are connected by slides.
The synthesis reads a vertex bijection off the maximal poset elements and
brings both graphs to a common normal form, one edge label at a time from
the largest down.  For label ``k``, inside each component of ``G_k``:

* every ``k``-edge endpoint is slid, along higher-label edges, to a fixed
  representative vertex of its block (a component of the higher-label part);
* the ``k``-edges, now running between representatives, are slid along each
  other into an octopus: legs from an anchor to every other representative
  and loops at the anchor.

The certificate is the first graph's normalising moves followed by the
second graph's normalising moves, reversed and transported to the first.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

from .errors import CertificateError, IsomorphismMismatch, PreconditionError
from .graph_core import Dart, bar, components, is_connected, labelled_iso, spanning_tree
from .numbered_graph import (
    Collapse,
    NumberedGraph,
    SlideMove,
    is_reduced,
    labelled_equal,
    legal_slides,
    reduce,
    replay_collapses,
    slide,
)
from .tagged_poset import TaggedPoset, associated_poset, data_preserving_iso, level_subgraph


@dataclass(frozen=True)
class SlideSequence:
    """``source`` -(collapses)-> reduced -(moves)-> graph equal, under
    ``vertex_map``, to ``target`` reduced by ``target_collapses``."""

    source: NumberedGraph
    target: NumberedGraph
    moves: tuple[SlideMove, ...]
    vertex_map: Mapping[str, str]
    source_collapses: tuple[Collapse, ...] = ()
    target_collapses: tuple[Collapse, ...] = ()
    hashes: tuple[str, ...] = field(default=(), compare=False)

    def __len__(self):
        return len(self.moves)


def _fold(g: NumberedGraph, moves: Iterable[SlideMove]) -> tuple[NumberedGraph, list[str]]:
    hashes = [g.digest]
    for i, m in enumerate(moves):
        try:
            g = slide(g, m)
        except PreconditionError as exc:
            raise CertificateError(f"move {i}: {exc}") from exc
        hashes.append(g.digest)
    return g, hashes


def apply_sequence(g: NumberedGraph, s: SlideSequence) -> NumberedGraph:
    """Replay the source collapses and every move, checking each precondition."""
    if g != s.source:
        raise CertificateError("graph does not match the certificate's source")
    try:
        g = replay_collapses(g, s.source_collapses)
    except PreconditionError as exc:
        raise CertificateError(str(exc)) from exc
    g, hashes = _fold(g, s.moves)
    if s.hashes and tuple(hashes) != s.hashes:
        raise CertificateError("intermediate graph digests differ from the recorded ones")
    return g


def verify_certificate(s: SlideSequence) -> None:
    """Raise ``CertificateError`` unless ``s`` replays to labelled equality with its target."""
    end = apply_sequence(s.source, s)
    try:
        goal = replay_collapses(s.target, s.target_collapses)
    except PreconditionError as exc:
        raise CertificateError(str(exc)) from exc
    if not labelled_equal(end, goal, s.vertex_map):
        raise CertificateError("final graph differs from the target under the vertex map")


def _path_darts(g: NumberedGraph, vertices, pairs, root: str) -> dict[str, list[Dart]]:
    """For each vertex of a connected subgraph, the darts of a tree path to ``root``."""
    tree = spanning_tree(g.graph.subgraph(vertices, pairs), root)
    paths = {root: []}

    def path(v):
        if v not in paths:
            d = tree[v]
            paths[v] = [bar(d)] + path(g.graph.origin(d))
        return paths[v]

    for v in vertices:
        path(v)
    return paths


def _octopus(
    g: NumberedGraph, pairs: Iterable[str], anchor: str, moves: list[SlideMove]
) -> NumberedGraph:
    pairs = sorted(set(pairs))
    gr = g.graph
    labels = {g.elabel[p] for p in pairs}
    if len(labels) > 1:
        raise PreconditionError("octopus normal form needs edges of a single label")
    nodes = {anchor} | {v for p in pairs for v in gr.ends(p)}
    sub = gr.subgraph(nodes, pairs)
    if not is_connected(sub):
        raise PreconditionError("octopus normal form needs a connected edge set containing the anchor")
    parent = spanning_tree(sub, anchor)
    depth = {anchor: 0}

    def dep(v):
        if v not in depth:
            depth[v] = dep(sub.origin(parent[v])) + 1
        return depth[v]

    star: dict[str, Dart] = {}
    for w in sorted(parent, key=lambda v: (dep(v), v)):
        d = parent[w]
        u = sub.origin(d)
        if u == anchor:
            star[w] = d
            continue
        m = SlideMove(bar(d), bar(star[u]))
        g = slide(g, m)
        moves.append(m)
        star[w] = d
    tree = {d[0] for d in parent.values()}
    for p in pairs:
        if p in tree:
            continue
        for end in ((p, False), (p, True)):
            v = g.graph.tau(end)
            if v != anchor:
                m = SlideMove(end, bar(star[v]))
                g = slide(g, m)
                moves.append(m)
    return g


def octopus_normal_form(g: NumberedGraph, pairs: Iterable[str], anchor: str) -> SlideSequence:
    """Slides making every edge of ``pairs`` (one label, connected) incident to ``anchor``
    with all other vertices leaves."""
    pairs = list(pairs)
    if anchor not in g.graph.vertices or (pairs and not any(anchor in g.graph.ends(p) for p in pairs)):
        raise PreconditionError(f"anchor {anchor!r} is not in the component")
    moves: list[SlideMove] = []
    end = _octopus(g, pairs, anchor, moves)
    _, hashes = _fold(g, moves)
    return SlideSequence(g, end, tuple(moves), {v: v for v in g.graph.vertices}, hashes=tuple(hashes))


def _normalize(
    g: NumberedGraph, key: Callable[[str], object]
) -> tuple[NumberedGraph, list[SlideMove], list[NumberedGraph]]:
    """Normal form relative to the vertex order ``key``; returns the moves and every state."""
    moves: list[SlideMove] = []
    states = [g]

    def run(seq_start):
        for m in moves[seq_start:]:
            states.append(slide(states[-1], m))

    for k in sorted(set(g.elabel.values()), reverse=True):
        for comp in components(level_subgraph(g, k)):
            kedges = sorted(p for p in comp.pairs if g.elabel[p] == k)
            if not kedges:
                continue
            higher = [p for p in comp.pairs if g.elabel[p] != k]
            rep: dict[str, str] = {}
            paths: dict[str, list[Dart]] = {}
            for block in components(g.graph.subgraph(comp.vertices, higher)):
                r = min(block.vertices, key=key)
                rep.update((v, r) for v in block.vertices)
                paths.update(_path_darts(g, block.vertices, block.pairs, r))
            start = len(moves)
            for p in kedges:
                for end in ((p, False), (p, True)):
                    for f in paths[g.graph.tau(end)]:
                        m = SlideMove(end, f)
                        g = slide(g, m)
                        moves.append(m)
            anchor = rep[min(comp.vertices, key=key)]
            g = _octopus(g, kedges, anchor, moves)
            run(start)
    return g, moves, states


def vertex_bijection(
    g1: NumberedGraph, p1: TaggedPoset, g2: NumberedGraph, p2: TaggedPoset, iso: Mapping[str, str]
) -> dict[str, str]:
    """Vertices correspond to maximal poset elements: ``v`` is the component of ``G_{d_v}`` at ``v``."""

    def vertex_element(g, p):
        out = {}
        for i, e in enumerate(p.elements):
            comp = p.provenance[i]
            if not p.up[i]:
                if len(comp.vertices) != 1:
                    raise IsomorphismMismatch("maximal poset element is not a single vertex")
                (v,) = comp.vertices
                out[e.id] = v
        return out

    m1, m2 = vertex_element(g1, p1), vertex_element(g2, p2)
    phi = {m1[x]: m2[iso[x]] for x in m1}
    if sorted(phi) != list(g1.graph.vertices) or sorted(phi.values()) != list(g2.graph.vertices):
        raise IsomorphismMismatch("maximal elements do not match vertices")
    return phi


def _check_components(g1, p1, g2, p2, iso, phi):
    for i, e in enumerate(p1.elements):
        j = p2.index(iso[e.id])
        a, b = p1.provenance[i], p2.provenance[j]
        if {phi[v] for v in a.vertices} != set(b.vertices):
            raise IsomorphismMismatch(f"element {e.id}: vertex sets do not correspond")
        if Counter(g1.elabel[x] for x in a.pairs) != Counter(g2.elabel[x] for x in b.pairs):
            raise IsomorphismMismatch(f"element {e.id}: edge-label counts differ")


def _find_dart(g: NumberedGraph, origin: str, tau: str, label: int, avoid: Optional[str] = None) -> Dart:
    gr = g.graph
    for d in gr.darts_from(origin):
        if d[0] != avoid and gr.tau(d) == tau and g.dart_label(d) == label:
            return d
    raise IsomorphismMismatch("transported move has no matching edge")


def synthesize_slides(
    g1: NumberedGraph, g2: NumberedGraph, iso: Optional[Mapping[str, str]] = None
) -> SlideSequence:
    """Slides from reduced ``g1`` to reduced ``g2`` realising a poset isomorphism."""
    for g in (g1, g2):
        if not is_reduced(g):
            raise PreconditionError("slide synthesis needs reduced graphs")
    p1, p2 = associated_poset(g1), associated_poset(g2)
    if iso is None:
        iso = data_preserving_iso(p1, p2)
        if iso is None:
            raise IsomorphismMismatch("posets are not isomorphic")
    phi = vertex_bijection(g1, p1, g2, p2, iso)
    _check_components(g1, p1, g2, p2, iso, phi)
    if labelled_equal(g1, g2, phi):
        return SlideSequence(g1, g2, (), phi, hashes=(g1.digest,))
    inv = {w: v for v, w in phi.items()}

    n1, moves1, _ = _normalize(g1, lambda v: v)
    n2, moves2, states2 = _normalize(g2, lambda w: inv[w])
    if not labelled_equal(n1, n2, phi):
        raise IsomorphismMismatch("normal forms differ")

    x = n1
    moves = list(moves1)
    for j in range(len(moves2), 0, -1):
        y = states2[j]
        m = moves2[j - 1]
        e, f = m.moved, bar(m.along)
        yg = y.graph
        f1 = _find_dart(x, inv[yg.origin(f)], inv[yg.tau(f)], y.dart_label(f))
        e1 = _find_dart(x, inv[yg.origin(e)], inv[yg.tau(e)], y.dart_label(e), avoid=f1[0])
        step = SlideMove(e1, f1)
        x = slide(x, step)
        moves.append(step)
    if not labelled_equal(x, g2, phi):
        raise IsomorphismMismatch("transported moves do not reach the target")
    _, hashes = _fold(g1, moves)
    return SlideSequence(g1, g2, tuple(moves), phi, hashes=tuple(hashes))


@dataclass(frozen=True)
class Decision:
    isomorphic: bool
    certificate: Optional[SlideSequence] = None


def slide_equivalent(g1: NumberedGraph, g2: NumberedGraph) -> Decision:
    """Decide slide equivalence after reduction, with a verified certificate when positive."""
    r1, log1 = reduce(g1)
    r2, log2 = reduce(g2)
    found = labelled_iso(
        r1.graph, r2.graph, vertex_labels=(r1.vlabel, r2.vlabel), edge_labels=(r1.elabel, r2.elabel)
    )
    if found is not None:
        cert = SlideSequence(g1, g2, (), found[0], tuple(log1), tuple(log2), (r1.digest,))
    else:
        iso = data_preserving_iso(associated_poset(r1), associated_poset(r2))
        if iso is None:
            return Decision(False)
        core = synthesize_slides(r1, r2, iso)
        cert = SlideSequence(g1, g2, core.moves, core.vertex_map, tuple(log1), tuple(log2), core.hashes)
    verify_certificate(cert)
    return Decision(True, cert)


@dataclass(frozen=True)
class SlideClass:
    members: tuple[NumberedGraph, ...]
    truncated: bool


def _signature(g: NumberedGraph):
    gr = g.graph
    return tuple(
        sorted(
            (g.vlabel[v], tuple(sorted((g.dart_label(d), g.vlabel[gr.tau(d)]) for d in gr.darts_from(v))))
            for v in gr.vertices
        )
    )


def same_labelled_class(g1: NumberedGraph, g2: NumberedGraph) -> bool:
    return (
        labelled_iso(g1.graph, g2.graph, (g1.vlabel, g2.vlabel), (g1.elabel, g2.elabel)) is not None
    )


def enumerate_slide_class(g: NumberedGraph, cap: int = 1000) -> SlideClass:
    """Breadth-first search over slides, one representative per labelled-isomorphism class."""
    if not is_reduced(g):
        raise PreconditionError("enumeration starts from a reduced graph")
    buckets: dict[tuple, list[NumberedGraph]] = {}
    members: list[NumberedGraph] = []

    def add(h):
        bucket = buckets.setdefault(_signature(h), [])
        if any(same_labelled_class(h, other) for other in bucket):
            return False
        bucket.append(h)
        members.append(h)
        return True

    add(g)
    queue = deque([g])
    while queue:
        h = queue.popleft()
        for m in legal_slides(h):
            nxt = slide(h, m)
            if add(nxt):
                if len(members) > cap:
                    members.pop()
                    return SlideClass(tuple(members), True)
                queue.append(nxt)
    return SlideClass(tuple(members), False)


def class_contains(cls: SlideClass, g: NumberedGraph) -> bool:
    return any(same_labelled_class(g, h) for h in cls.members)
